//! Storage functions of the satellite and link subsystems and the composite
//! Lyapunov function.

use super::EquilibriumPoint;
use crate::controller::GainSet;
use crate::dynamics::SatelliteTruthState;
use crate::error::Error;
use crate::network::LinkOutputFn;
use crate::scalar::{lit, to_f64, Scalar};

/// Storage values at one instant.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct StorageSample<T> {
    pub t: T,
    /// Per-satellite storage.
    pub s: Vec<T>,
    /// Per-link storage.
    pub links: Vec<T>,
    pub v: T,
    /// Lower bound using `kc_floor`.
    pub v_lower: T,
    /// Upper bound using `kc_bar`.
    pub v_upper: T,
}

/// `k_c/2 (ω - ω̄)²`.
pub fn satellite_storage<T: Scalar>(omega: T, omega_bar: T, kc: T) -> T {
    let d = omega - omega_bar;
    kc * d * d / lit(2.0)
}

/// `∫_{θ̄}^{θ} (h(z) - h(θ̄)) dz`.
pub fn link_storage<T: Scalar>(
    theta_rel: T,
    theta_rel_bar: T,
    h: &LinkOutputFn<T>,
) -> Result<T, Error> {
    match h {
        LinkOutputFn::Affine { .. } => {
            let d = theta_rel - theta_rel_bar;
            Ok(d * d / lit(2.0))
        }
        LinkOutputFn::Custom(_) => {
            let h_bar = h.eval(theta_rel_bar);
            adaptive_simpson(|z| h.eval(z) - h_bar, theta_rel_bar, theta_rel, lit(1e-12))
        }
    }
}

/// Adaptive Simpson quadrature with relative tolerance `rel_tol`.
pub fn adaptive_simpson<T: Scalar>(f: impl Fn(T) -> T, a: T, b: T, rel_tol: T) -> Result<T, Error> {
    if a == b {
        return Ok(T::zero());
    }
    let six: T = lit(6.0);
    let two: T = lit(2.0);
    let fa = f(a);
    let fb = f(b);
    let m = (a + b) / two;
    let fm = f(m);
    if !(fa.is_finite() && fm.is_finite() && fb.is_finite()) {
        return Err(non_finite(a, b));
    }
    let whole = (b - a) / six * (fa + lit::<T>(4.0) * fm + fb);
    // absolute tolerance from a coarse magnitude estimate
    let scale = ((b - a) * (fa.abs() + fm.abs() + fb.abs()) / lit(3.0)).abs();
    let tol = (rel_tol * scale)
        .max(T::epsilon() * scale)
        .max(T::min_positive_value());
    let mut budget = MAX_EVALUATIONS;
    let out = simpson_step(&f, a, b, fa, fm, fb, whole, tol, 50, &mut budget)?;
    if !out.is_finite() {
        return Err(non_finite(a, b));
    }
    Ok(out)
}

const MAX_EVALUATIONS: usize = 1 << 20;

fn non_finite<T: Scalar>(a: T, b: T) -> Error {
    Error::Quadrature(format!(
        "non-finite integrand on [{}, {}]",
        to_f64(a),
        to_f64(b)
    ))
}

#[allow(clippy::too_many_arguments)]
fn simpson_step<T: Scalar>(
    f: &impl Fn(T) -> T,
    a: T,
    b: T,
    fa: T,
    fm: T,
    fb: T,
    whole: T,
    tol: T,
    depth: u32,
    budget: &mut usize,
) -> Result<T, Error> {
    let two: T = lit(2.0);
    let four: T = lit(4.0);
    let six: T = lit(6.0);
    let m = (a + b) / two;
    let lm = (a + m) / two;
    let rm = (m + b) / two;
    let flm = f(lm);
    let frm = f(rm);
    if !(flm.is_finite() && frm.is_finite()) {
        return Err(non_finite(a, b));
    }
    *budget = budget.saturating_sub(2);
    let left = (m - a) / six * (fa + four * flm + fm);
    let right = (b - m) / six * (fm + four * frm + fb);
    let delta = left + right - whole;
    if delta.abs() <= lit::<T>(15.0) * tol {
        return Ok(left + right + delta / lit(15.0));
    }
    if depth == 0 || *budget == 0 || !(m > a.min(b) && m < a.max(b)) {
        return Err(Error::Quadrature(format!(
            "no convergence near [{}, {}]",
            to_f64(a),
            to_f64(b)
        )));
    }
    Ok(
        simpson_step(f, a, m, fa, flm, fm, left, tol / two, depth - 1, budget)?
            + simpson_step(f, m, b, fm, frm, fb, right, tol / two, depth - 1, budget)?,
    )
}

/// Sum of all storage functions at time `t`.
pub fn lyapunov<T: Scalar>(
    sats: &[SatelliteTruthState<T>],
    theta_rel: &[T],
    eq: &EquilibriumPoint<T>,
    gains: &GainSet<T>,
    h: &LinkOutputFn<T>,
    t: T,
) -> Result<StorageSample<T>, Error> {
    if theta_rel.len() != eq.n_links() {
        return Err(Error::DimensionMismatch {
            what: "link states",
            expected: eq.n_links(),
            got: theta_rel.len(),
        });
    }
    let kc = gains.kc(t);
    let s: Vec<T> = sats
        .iter()
        .map(|sat| satellite_storage(sat.omega, eq.omega_bar, kc))
        .collect();
    let links = theta_rel
        .iter()
        .zip(&eq.theta_rel_bar)
        .map(|(&th, &bar)| link_storage(th, bar, h))
        .collect::<Result<Vec<T>, _>>()?;
    let link_total: T = links.iter().copied().sum();
    let dev2: T = sats
        .iter()
        .map(|sat| {
            let d = sat.omega - eq.omega_bar;
            d * d
        })
        .sum();
    let half: T = lit(0.5);
    Ok(StorageSample {
        t,
        v: s.iter().copied().sum::<T>() + link_total,
        v_lower: half * gains.kc_floor * dev2 + link_total,
        v_upper: half * gains.kc_bar * dev2 + link_total,
        s,
        links,
    })
}

/// Closed-form `dV/dt = Σ (-k_c k_ω / r_i + k̇_c / 2)(ω_i - ω̄)²`.
pub fn lyapunov_rate<T: Scalar>(
    sats: &[SatelliteTruthState<T>],
    eq: &EquilibriumPoint<T>,
    kc: T,
    kc_rate: T,
    k_omega: T,
) -> T {
    let half: T = lit(0.5);
    sats.iter()
        .map(|sat| {
            let d = sat.omega - eq.omega_bar;
            (-kc * k_omega / sat.r + half * kc_rate) * d * d
        })
        .sum()
}

/// `W = -kc_floor k_ω Σ (ω_i - ω̄)² / r_i`, an upper bound on the Lyapunov
/// rate whenever `k_c ≥ kc_floor` and `k̇_c ≤ 0`.
pub fn barbalat_w<T: Scalar>(
    omega: &[T],
    r: &[T],
    eq: &EquilibriumPoint<T>,
    kc_floor: T,
    k_omega: T,
) -> T {
    let sum: T = omega
        .iter()
        .zip(r)
        .map(|(&w, &r)| {
            let d = w - eq.omega_bar;
            d * d / r
        })
        .sum();
    -kc_floor * k_omega * sum
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn satellite_storage_values() {
        assert_eq!(satellite_storage(1.0, 1.0, 1e9), 0.0);
        assert!((satellite_storage(1e-6_f64, 0.0, 1e9) - 5e-4).abs() < 1e-18);
    }

    #[test]
    fn affine_link_storage() {
        let h = LinkOutputFn::<f64>::equal_spacing(10);
        assert_eq!(link_storage(0.3, 0.3, &h).unwrap(), 0.0);
        assert!((link_storage(0.5, 0.4, &h).unwrap() - 0.005).abs() < 1e-15);
    }

    #[test]
    fn simpson_on_smooth_integrand() {
        let v = adaptive_simpson(|x: f64| x.sin(), 0.0, std::f64::consts::PI, 1e-12).unwrap();
        assert!((v - 2.0).abs() < 1e-11);
        let v = adaptive_simpson(|x: f64| x.exp(), 1.0, -1.0, 1e-12).unwrap();
        let exact = (-1.0f64).exp() - 1.0f64.exp();
        assert!((v - exact).abs() < 1e-11 * exact.abs());
    }

    #[test]
    fn quadrature_failure_is_reported() {
        let r = adaptive_simpson(|x: f64| 1.0 / x, -1.0, 1.0, 1e-12);
        assert!(matches!(r, Err(Error::Quadrature(_))));
        let r = adaptive_simpson(|x: f64| (1.0 / x).sin(), 1e-300, 1.0, 1e-15);
        assert!(matches!(r, Err(Error::Quadrature(_))));
    }

    #[test]
    fn scalar_rate_case() {
        let eq = EquilibriumPoint {
            r_bar: 2e7,
            v_bar: 0.0,
            omega_bar: 7e-5,
            theta_rel_bar: vec![],
        };
        let sat = SatelliteTruthState {
            r: 2e7,
            v: 0.0,
            omega: 7e-5 + 1e-7,
            theta: 0.0,
            mass: 100.0,
        };
        let delta = sat.omega - eq.omega_bar;
        let got: f64 = lyapunov_rate(&[sat], &eq, 1e9, 0.0, 1e4);
        assert!((got + 1e9 * 1e4 * delta * delta / 2e7).abs() < 1e-24);
        assert_eq!(
            lyapunov_rate(
                &[SatelliteTruthState { omega: 7e-5, ..sat }],
                &eq,
                1e9,
                -5.0,
                1e4
            ),
            0.0
        );
        assert_eq!(barbalat_w(&[7e-5], &[2e7], &eq, 1e9, 1e4), 0.0);
        let w1: f64 = barbalat_w(&[sat.omega], &[2e7], &eq, 1e9, 1e4);
        let w2 = barbalat_w(&[sat.omega], &[2e7], &eq, 2e9, 1e4);
        assert!(w1 < 0.0 && (w2 - 2.0 * w1).abs() < 1e-30);
    }
}
