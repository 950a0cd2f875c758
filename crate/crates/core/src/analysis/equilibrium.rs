use crate::controller::DesiredOrbit;
use crate::error::Error;
use crate::network::{LinkOutputFn, Topology};
use crate::scalar::{lit, to_f64, Scalar};

/// The unique closed-loop equilibrium of the constellation.
#[derive(Debug, Clone, PartialEq)]
pub struct EquilibriumPoint<T> {
    pub r_bar: T,
    pub v_bar: T,
    /// Common angular velocity of every satellite.
    pub omega_bar: T,
    pub theta_rel_bar: Vec<T>,
}

impl<T: Scalar> EquilibriumPoint<T> {
    pub fn n_links(&self) -> usize {
        self.theta_rel_bar.len()
    }
}

/// Bracket settings for the general-`h` root search.
#[derive(Debug, Clone, Copy)]
pub struct Bracket<T> {
    pub center: T,
    pub half_width: T,
}

impl<T: Scalar> Default for Bracket<T> {
    fn default() -> Self {
        Self {
            center: T::zero(),
            half_width: T::one(),
        }
    }
}

/// Equilibrium: `ω̄ = ω_d` for all satellites, and each link sits at the
/// zero of its output map.
pub fn compute_equilibrium<T: Scalar>(
    desired: &DesiredOrbit<T>,
    topo: &Topology,
    h: &LinkOutputFn<T>,
) -> Result<EquilibriumPoint<T>, Error> {
    compute_equilibrium_with(desired, topo, h, Bracket::default())
}

pub fn compute_equilibrium_with<T: Scalar>(
    desired: &DesiredOrbit<T>,
    topo: &Topology,
    h: &LinkOutputFn<T>,
    bracket: Bracket<T>,
) -> Result<EquilibriumPoint<T>, Error> {
    let theta_bar = match h {
        LinkOutputFn::Affine { offset } => *offset,
        LinkOutputFn::Custom(_) => find_zero(|x| h.eval(x), bracket, lit(1e-12))?,
    };
    Ok(EquilibriumPoint {
        r_bar: desired.r_d,
        v_bar: desired.v_d(),
        omega_bar: desired.omega_d(),
        theta_rel_bar: vec![theta_bar; topo.n_links()],
    })
}

/// Zero of a strictly increasing function by bracket expansion and bisection.
pub fn find_zero<T: Scalar>(f: impl Fn(T) -> T, bracket: Bracket<T>, tol: T) -> Result<T, Error> {
    let two: T = lit(2.0);
    let mut w = bracket.half_width.abs().max(T::min_positive_value());
    let (mut lo, mut hi) = (bracket.center - w, bracket.center + w);
    let mut f_lo = f(lo);
    let mut f_hi = f(hi);
    let mut expansions = 0;
    while !(f_lo <= T::zero() && f_hi >= T::zero()) {
        if f_lo.is_nan() || f_hi.is_nan() || expansions >= 200 {
            return Err(Error::RootNotFound(format!(
                "no sign change in [{}, {}]; output map must be increasing and onto",
                to_f64(lo),
                to_f64(hi)
            )));
        }
        w *= two;
        lo = bracket.center - w;
        hi = bracket.center + w;
        f_lo = f(lo);
        f_hi = f(hi);
        expansions += 1;
    }
    if f_lo == T::zero() {
        return Ok(lo);
    }
    if f_hi == T::zero() {
        return Ok(hi);
    }
    for _ in 0..400 {
        let mid = lo + (hi - lo) / two;
        if hi - lo <= tol || mid <= lo || mid >= hi {
            return Ok(mid);
        }
        let fm = f(mid);
        if fm.is_nan() {
            return Err(Error::RootNotFound(format!("NaN at {}", to_f64(mid))));
        }
        if fm == T::zero() {
            return Ok(mid);
        }
        if fm < T::zero() {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Err(Error::RootNotFound("bisection did not converge".into()))
}
