use log::{info, warn};

use super::initial::sample_initial_conditions;
use super::rk4::Rk4;
use super::scenario::Scenario;
use super::system::{link_slice, pack_initial_state, state_len, unpack_sats, ClosedLoop};
use crate::analysis::{compute_equilibrium, lyapunov, lyapunov_rate, EquilibriumPoint};
use crate::constants::SOL_S;
use crate::error::Error;
use crate::scalar::{lit, Scalar};
use crate::trajectory::{LinkSample, SatSample, TrajectoryLog};

/// Allowed per-sample increase of `V`, relative to `max(V(0), 1)`.
pub const LYAPUNOV_STEP_TOL: f64 = 1e-9;

/// Headline mission metrics of a run.
#[derive(Debug, Clone, PartialEq)]
pub struct AcquisitionReport<T> {
    /// Enter-and-stay acquisition time, s.
    pub t_acq: Option<T>,
    pub final_spacing_err_deg: Vec<T>,
    pub final_omega_err: Vec<T>,
    pub final_radial_err: Vec<T>,
    /// Largest thrust magnitudes over every integration step.
    pub max_abs_tau_r: T,
    pub max_abs_tau_theta: T,
    /// Integration steps at which any satellite exceeded `tau_max`.
    pub saturation_events: usize,
    /// `Some` only for runs without moon perturbations.
    pub lyapunov_monotone: Option<bool>,
    pub lyapunov_violations: usize,
    /// Time actually simulated, s.
    pub end_time: T,
    pub aborted: bool,
}

impl<T: Scalar> AcquisitionReport<T> {
    pub fn acquired(&self) -> bool {
        self.t_acq.is_some()
    }

    pub fn t_acq_sols(&self) -> Option<T> {
        self.t_acq.map(|t| t / lit(SOL_S))
    }

    pub fn final_max_omega_err(&self) -> T {
        self.final_omega_err
            .iter()
            .fold(T::zero(), |m, x| m.max(x.abs()))
    }

    pub fn final_max_radial_err(&self) -> T {
        self.final_radial_err
            .iter()
            .fold(T::zero(), |m, x| m.max(x.abs()))
    }
}

pub struct RunOutput<T> {
    pub log: TrajectoryLog<T>,
    pub report: AcquisitionReport<T>,
    pub equilibrium: EquilibriumPoint<T>,
    /// Packed state at `report.end_time`.
    pub final_state: Vec<T>,
    /// Largest `|Σ u_i| / ‖u‖₁` over all evaluations.
    pub max_u_imbalance: T,
    /// Set when integration stopped early; the log holds everything up to it.
    pub abort: Option<Error>,
}

/// Integrate `scenario` from `t = 0` to its horizon.
pub fn run<T: Scalar>(scenario: &Scenario<T>) -> Result<RunOutput<T>, Error> {
    scenario.validate()?;
    let sats0 = match &scenario.initial_states {
        Some(states) => states.clone(),
        None => sample_initial_conditions(
            &scenario.ic,
            scenario.n_sats,
            scenario.sat_mass,
            scenario.seed,
        ),
    };
    let mut x = pack_initial_state(&sats0);
    let mut cl = ClosedLoop::new(scenario)?;
    let eq = compute_equilibrium(&scenario.desired, cl.topology(), &scenario.link_output)?;
    let n_steps = scenario.n_steps();
    let stride = scenario.log_stride();
    let mut rk4 = Rk4::new(state_len(scenario.n_sats));
    let mut log = TrajectoryLog::default();
    let mut tracker = ThrustTracker::default();
    let mut abort = None;
    let mut end_time = T::zero();
    let mut dx = vec![T::zero(); x.len()];

    info!(
        "running {} steps of {} s ({} Sols), moons {}",
        n_steps,
        scenario.dt,
        scenario.horizon_sols(),
        if scenario.moons_enabled { "on" } else { "off" }
    );

    for k in 0..=n_steps {
        let t = T::from_usize(k).expect("step index fits") * scenario.dt;
        let record = k % stride == 0 || k == n_steps;
        if k == n_steps {
            // final sample: one evaluation for thrust, u and logging
            match cl.derivative(t, &x, &mut dx) {
                Ok(()) => {
                    tracker.observe(&cl, scenario);
                    push_sample(&mut log, scenario, &eq, &cl, &x, t)?;
                    end_time = t;
                }
                Err(e) => abort = Some(e),
            }
            break;
        }
        let mut stage = 0;
        let mut sample_err = None;
        let stepped = rk4.step(
            |ts, xs, dxs| {
                cl.derivative(ts, xs, dxs)?;
                if stage == 0 {
                    tracker.observe(&cl, scenario);
                    if record {
                        if let Err(e) = push_sample(&mut log, scenario, &eq, &cl, xs, ts) {
                            sample_err = Some(e);
                        }
                    }
                }
                stage += 1;
                Ok(())
            },
            t,
            &mut x,
            scenario.dt,
        );
        if let Some(e) = sample_err {
            return Err(e);
        }
        if let Err(e) = stepped {
            warn!("integration aborted at t = {t}: {e}");
            end_time = t;
            abort = Some(e);
            break;
        }
    }

    let report = build_report(scenario, &log, &eq, &x, &tracker, end_time, abort.is_some());
    Ok(RunOutput {
        log,
        report,
        equilibrium: eq,
        final_state: x,
        max_u_imbalance: cl.max_u_imbalance,
        abort,
    })
}

#[derive(Debug, Default)]
struct ThrustTracker<T> {
    max_r: T,
    max_theta: T,
    saturation_events: usize,
}

impl<T: Scalar> ThrustTracker<T> {
    fn observe(&mut self, cl: &ClosedLoop<'_, T>, scenario: &Scenario<T>) {
        let mut saturated = false;
        for cmd in cl.thrusts() {
            self.max_r = self.max_r.max(cmd.tau_r.abs());
            self.max_theta = self.max_theta.max(cmd.tau_theta.abs());
            saturated |= cmd.saturated;
        }
        if saturated {
            if self.saturation_events == 0 {
                warn!("thrust exceeded tau_max = {} N", scenario.tau_max);
            }
            self.saturation_events += 1;
        }
    }
}

fn push_sample<T: Scalar>(
    log: &mut TrajectoryLog<T>,
    scenario: &Scenario<T>,
    eq: &EquilibriumPoint<T>,
    cl: &ClosedLoop<'_, T>,
    x: &[T],
    t: T,
) -> Result<(), Error> {
    let sats = unpack_sats(x, scenario.n_sats, scenario.sat_mass);
    let links = link_slice(x, scenario.n_sats);
    let kc = cl.kc();
    let kc_rate = scenario.gains.kc_rate(t);
    let storage = lyapunov(&sats, links, eq, &scenario.gains, &scenario.link_output, t)?;
    log.times.push(t);
    log.sats.push(
        sats.iter()
            .zip(cl.thrusts())
            .zip(cl.coordination())
            .map(|((s, cmd), &u)| SatSample {
                r: s.r,
                v: s.v,
                omega: s.omega,
                theta: s.theta,
                tau_r: cmd.tau_r,
                tau_theta: cmd.tau_theta,
                u,
            })
            .collect(),
    );
    log.links.push(
        links
            .iter()
            .zip(cl.link_outputs())
            .map(|(&theta_rel, &y)| LinkSample { theta_rel, y })
            .collect(),
    );
    log.kc.push(kc);
    log.kc_rate.push(kc_rate);
    log.lyapunov_rate.push(lyapunov_rate(
        &sats,
        eq,
        kc,
        kc_rate,
        scenario.gains.k_omega,
    ));
    log.storage.push(storage);
    Ok(())
}

fn build_report<T: Scalar>(
    scenario: &Scenario<T>,
    log: &TrajectoryLog<T>,
    eq: &EquilibriumPoint<T>,
    x: &[T],
    tracker: &ThrustTracker<T>,
    end_time: T,
    aborted: bool,
) -> AcquisitionReport<T> {
    let sats = unpack_sats(x, scenario.n_sats, scenario.sat_mass);
    let target_deg = scenario.desired_spacing().to_degrees();
    let (monotone, violations) = lyapunov_monotonicity(log, lit(LYAPUNOV_STEP_TOL));
    AcquisitionReport {
        t_acq: detect_acquisition_around(
            log,
            scenario.desired_spacing(),
            scenario.acquisition_tol_deg,
        ),
        final_spacing_err_deg: link_slice(x, scenario.n_sats)
            .iter()
            .map(|th| th.to_degrees() - target_deg)
            .collect(),
        final_omega_err: sats.iter().map(|s| s.omega - eq.omega_bar).collect(),
        final_radial_err: sats.iter().map(|s| s.r - eq.r_bar).collect(),
        max_abs_tau_r: tracker.max_r,
        max_abs_tau_theta: tracker.max_theta,
        saturation_events: tracker.saturation_events,
        lyapunov_monotone: (!scenario.moons_enabled).then_some(monotone),
        lyapunov_violations: violations,
        end_time,
        aborted,
    }
}

/// Checks `V(t_{k+1}) - V(t_k) <= rel_tol · max(V(0), 1)` along the log;
/// returns whether it always held and how many steps broke it.
pub fn lyapunov_monotonicity<T: Scalar>(log: &TrajectoryLog<T>, rel_tol: T) -> (bool, usize) {
    let Some(first) = log.storage.first() else {
        return (true, 0);
    };
    let tol = rel_tol * first.v.max(T::one());
    let violations = log
        .storage
        .windows(2)
        .filter(|w| w[1].v - w[0].v > tol)
        .count();
    (violations == 0, violations)
}

/// Enter-and-stay acquisition time with spacing target `360°/N`.
pub fn detect_acquisition<T: Scalar>(log: &TrajectoryLog<T>, tol_deg: T) -> Option<T> {
    let n_sats = log.n_links() + 1;
    let target = T::TAU() / T::from_usize(n_sats).expect("count fits");
    detect_acquisition_around(log, target, tol_deg)
}

/// Earliest logged time after which every spacing stays within `tol_deg`
/// of `target` (rad) for the rest of the log.
pub fn detect_acquisition_around<T: Scalar>(
    log: &TrajectoryLog<T>,
    target: T,
    tol_deg: T,
) -> Option<T> {
    let target_deg = target.to_degrees();
    let within = |k: usize| {
        log.links[k]
            .iter()
            .all(|l| (l.theta_rel.to_degrees() - target_deg).abs() <= tol_deg)
    };
    let mut first = None;
    for k in (0..log.len()).rev() {
        if !within(k) {
            break;
        }
        first = Some(k);
    }
    first.map(|k| log.times[k])
}
