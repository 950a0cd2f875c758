//! Discrete dissipativity certificate along a logged trajectory.
//!
//! For every interior log step the storage rate of each subsystem is taken
//! as a centred difference and compared against its supply rate:
//!
//! * satellites (output strictly passive):
//!   `s = (u_i - ū_i)(ω_i - ω̄) - ε_i (ω_i - ω̄)²` with
//!   `ε_i = k_c k_ω / r_i - k̇_c / 2`,
//! * links (passive): `s = (e_l - ē_l)(y_l - ȳ_l)`.
//!
//! The centred difference has truncation error `h²/6 · S'''`, so each
//! subsystem gets tolerance `C h²` with `C` estimated from the third
//! differences of its own storage series (sliding-window median, then
//! max), plus a floating point floor.

use log::warn;

use super::{link_storage, satellite_storage, EquilibriumPoint};
use crate::controller::GainSet;
use crate::error::Error;
use crate::network::LinkOutputFn;
use crate::scalar::{lit, to_f64, Scalar};
use crate::trajectory::TrajectoryLog;

/// Logging intervals above this are flagged as too coarse.
pub const MAX_CERTIFY_INTERVAL_S: f64 = 60.0;
const SAFETY: f64 = 10.0;
const ROUNDOFF_FACTOR: f64 = 16.0;
const MEDIAN_WINDOW: usize = 11;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Subsystem {
    Satellite(usize),
    Link(usize),
}

impl std::fmt::Display for Subsystem {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Subsystem::Satellite(i) => write!(f, "satellite_{}", i + 1),
            Subsystem::Link(l) => write!(f, "link_{}", l + 1),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PassivityResidual<T> {
    pub subsystem: Subsystem,
    pub step: usize,
    pub t: T,
    pub supply: T,
    /// Centred-difference storage rate.
    pub storage_rate: T,
    /// `supply - storage_rate`.
    pub slack: T,
    /// OSEIP coefficient; `None` for links.
    pub epsilon_used: Option<T>,
    pub tol: T,
    pub violated: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SubsystemSummary<T> {
    pub subsystem: Subsystem,
    pub violations: usize,
    /// Most negative slack.
    pub worst_slack: T,
    /// Estimated truncation constant `C`.
    pub c_estimate: T,
    pub tol: T,
}

#[derive(Debug, Clone, PartialEq)]
pub struct EpsilonStats<T> {
    pub min: T,
    pub max: T,
    pub mean: T,
    /// `kc_floor k_ω / max r` over the trajectory.
    pub lower_bound: T,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Certification<T> {
    pub interval: T,
    pub coarse: bool,
    pub residuals: Vec<PassivityResidual<T>>,
    pub summaries: Vec<SubsystemSummary<T>>,
    pub epsilon: Option<EpsilonStats<T>>,
}

impl<T: Scalar> Certification<T> {
    pub fn total_violations(&self) -> usize {
        self.summaries.iter().map(|s| s.violations).sum()
    }

    pub fn satellite_violations(&self) -> usize {
        self.summaries
            .iter()
            .filter(|s| matches!(s.subsystem, Subsystem::Satellite(_)))
            .map(|s| s.violations)
            .sum()
    }

    pub fn link_violations(&self) -> usize {
        self.total_violations() - self.satellite_violations()
    }
}

/// Certify every satellite and link along `log`.
pub fn certify_passivity<T: Scalar>(
    log: &TrajectoryLog<T>,
    eq: &EquilibriumPoint<T>,
    gains: &GainSet<T>,
    h: &LinkOutputFn<T>,
) -> Result<Certification<T>, Error> {
    let n_steps = log.uniform_len();
    if n_steps < 3 {
        return Err(Error::invalid(
            "trajectory",
            "at least three logged samples are needed for centred differences",
        ));
    }
    let interval = log.interval().expect("length checked");
    let coarse = interval > lit(MAX_CERTIFY_INTERVAL_S);
    let mut safety: T = lit(SAFETY);
    if coarse {
        let ratio = interval / lit(MAX_CERTIFY_INTERVAL_S);
        warn!(
            "logging interval {} s exceeds {} s; widening tolerance",
            to_f64(interval),
            MAX_CERTIFY_INTERVAL_S
        );
        safety *= ratio * ratio;
    }

    let n_sats = log.n_sats();
    let n_links = log.n_links();
    let mut residuals = Vec::new();
    let mut summaries = Vec::new();
    let half: T = lit(0.5);

    let max_r = log
        .sats
        .iter()
        .flatten()
        .map(|s| s.r)
        .fold(T::zero(), T::max);
    let mut eps_min = T::infinity();
    let mut eps_max = T::neg_infinity();
    let mut eps_sum = T::zero();
    let mut eps_count = 0usize;

    for i in 0..n_sats {
        let storage: Vec<T> = (0..n_steps)
            .map(|k| satellite_storage(log.sats[k][i].omega, eq.omega_bar, log.kc[k]))
            .collect();
        let mut rows = Vec::with_capacity(n_steps);
        for k in 1..n_steps - 1 {
            let sat = &log.sats[k][i];
            let d = sat.omega - eq.omega_bar;
            let eps = log.kc[k] * gains.k_omega / sat.r - half * log.kc_rate[k];
            eps_min = eps_min.min(eps);
            eps_max = eps_max.max(eps);
            eps_sum += eps;
            eps_count += 1;
            // ū_i = 0 at the equilibrium
            let cross = sat.u * d;
            let damping = eps * d * d;
            rows.push((k, cross - damping, cross.abs() + damping.abs(), Some(eps)));
        }
        let (summary, mut res) = check_subsystem(
            Subsystem::Satellite(i),
            &storage,
            &rows,
            &log.times,
            interval,
            safety,
        );
        summaries.push(summary);
        residuals.append(&mut res);
    }

    for l in 0..n_links {
        let theta_bar = eq.theta_rel_bar[l];
        let y_bar = h.eval(theta_bar);
        let storage = (0..n_steps)
            .map(|k| link_storage(log.links[k][l].theta_rel, theta_bar, h))
            .collect::<Result<Vec<T>, _>>()?;
        let rows: Vec<_> = (1..n_steps - 1)
            .map(|k| {
                // ē_l = 0 at the equilibrium
                let e = log.sats[k][l].omega - log.sats[k][l + 1].omega;
                let supply = e * (log.links[k][l].y - y_bar);
                (k, supply, supply.abs(), None)
            })
            .collect();
        let (summary, mut res) = check_subsystem(
            Subsystem::Link(l),
            &storage,
            &rows,
            &log.times,
            interval,
            safety,
        );
        summaries.push(summary);
        residuals.append(&mut res);
    }

    let epsilon = (eps_count > 0).then(|| EpsilonStats {
        min: eps_min,
        max: eps_max,
        mean: eps_sum / T::from_usize(eps_count).expect("count fits"),
        lower_bound: gains.kc_floor * gains.k_omega / max_r,
    });

    Ok(Certification {
        interval,
        coarse,
        residuals,
        summaries,
        epsilon,
    })
}

/// Largest sliding-window median. One corrupted sample touches at most four
/// third differences, so it cannot raise the estimate by itself.
fn robust_max<T: Scalar>(x: &[T]) -> T {
    if x.len() < MEDIAN_WINDOW {
        return x.iter().copied().fold(T::zero(), T::max);
    }
    let mut buf = Vec::with_capacity(MEDIAN_WINDOW);
    x.windows(MEDIAN_WINDOW)
        .map(|w| {
            buf.clear();
            buf.extend_from_slice(w);
            buf.sort_by(|a, b| a.partial_cmp(b).unwrap_or(std::cmp::Ordering::Equal));
            buf[MEDIAN_WINDOW / 2]
        })
        .fold(T::zero(), T::max)
}

/// `(step, supply, magnitude of the supply's terms, ε)`
type SupplyRow<T> = (usize, T, T, Option<T>);

fn check_subsystem<T: Scalar>(
    subsystem: Subsystem,
    storage: &[T],
    rows: &[SupplyRow<T>],
    times: &[T],
    h: T,
    safety: T,
) -> (SubsystemSummary<T>, Vec<PassivityResidual<T>>) {
    let two: T = lit(2.0);
    let six: T = lit(6.0);
    let n = storage.len();
    let third: Vec<T> = (2..n.saturating_sub(2))
        .map(|k| {
            ((storage[k + 2] - two * storage[k + 1] + two * storage[k - 1] - storage[k - 2])
                / (two * h * h * h))
                .abs()
        })
        .collect();
    let c_estimate = safety * robust_max(&third) / six;
    let truncation = c_estimate * h * h;
    let eps: T = T::epsilon() * lit(ROUNDOFF_FACTOR);

    let mut worst = T::infinity();
    let mut violations = 0;
    let mut max_tol = T::zero();
    let residuals = rows
        .iter()
        .map(|&(k, supply, magnitude, epsilon_used)| {
            let storage_rate = (storage[k + 1] - storage[k - 1]) / (two * h);
            let roundoff =
                eps * ((storage[k + 1].abs() + storage[k - 1].abs()) / (two * h) + magnitude);
            let tol = truncation + roundoff;
            let slack = supply - storage_rate;
            let violated = slack < -tol;
            if violated {
                violations += 1;
            }
            worst = worst.min(slack);
            max_tol = max_tol.max(tol);
            PassivityResidual {
                subsystem,
                step: k,
                t: times[k],
                supply,
                storage_rate,
                slack,
                epsilon_used,
                tol,
                violated,
            }
        })
        .collect();
    (
        SubsystemSummary {
            subsystem,
            violations,
            worst_slack: if worst.is_finite() { worst } else { T::zero() },
            c_estimate,
            tol: max_tol,
        },
        residuals,
    )
}
