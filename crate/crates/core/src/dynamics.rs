//! Planar restricted two-body truth dynamics with thrust and moon gravity.
//!
//! States are polar: radius `r`, radial velocity `v`, angular velocity
//! `omega` and angle `theta`. The angle is kept unwrapped; it only gets
//! reduced to `[0, 2π)` when written out.

use std::ops::{Add, AddAssign};

use crate::error::{Error, StateFault};
use crate::scalar::{lit, to_f64, Scalar};

/// Central body.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PlanetModel<T> {
    /// Gravitational parameter, m^3/s^2.
    pub mu: T,
    /// Equatorial radius, m. Only used for reporting altitudes.
    pub equatorial_radius: T,
}

impl<T: Scalar> PlanetModel<T> {
    pub fn new(mu: T, equatorial_radius: T) -> Result<Self, Error> {
        if !(mu > T::zero()) || !mu.is_finite() {
            return Err(Error::invalid("mu", "must be positive and finite"));
        }
        Ok(Self {
            mu,
            equatorial_radius,
        })
    }

    pub fn mars() -> Self {
        use crate::constants::mars;
        Self {
            mu: lit(mars::MU),
            equatorial_radius: lit(mars::EQUATORIAL_RADIUS),
        }
    }

    /// Angular rate of a circular orbit of radius `r`.
    pub fn circular_rate(&self, r: T) -> T {
        (self.mu / (r * r * r)).sqrt()
    }
}

/// A moon on a circular, equatorial orbit.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MoonModel<T> {
    /// Gravitational parameter, m^3/s^2. Zero disables the moon.
    pub mu: T,
    /// Orbit radius, m.
    pub orbit_radius: T,
    /// Angular rate, rad/s.
    pub angular_rate: T,
    /// Angle at `t = 0`, rad.
    pub initial_phase: T,
}

impl<T: Scalar> MoonModel<T> {
    /// Moon on a Keplerian circular orbit about `planet`.
    pub fn about(
        planet: &PlanetModel<T>,
        mu: T,
        orbit_radius: T,
        initial_phase: T,
    ) -> Result<Self, Error> {
        if !(mu >= T::zero()) {
            return Err(Error::invalid("moon mu", "must be non-negative"));
        }
        if !(orbit_radius > T::zero()) {
            return Err(Error::invalid("moon orbit_radius", "must be positive"));
        }
        Ok(Self {
            mu,
            orbit_radius,
            angular_rate: planet.circular_rate(orbit_radius),
            initial_phase,
        })
    }

    pub fn phobos(planet: &PlanetModel<T>) -> Self {
        use crate::constants::mars;
        Self::about(
            planet,
            lit(mars::PHOBOS_MU),
            lit(mars::PHOBOS_RADIUS),
            T::zero(),
        )
        .expect("built-in constants are valid")
    }

    pub fn deimos(planet: &PlanetModel<T>) -> Self {
        use crate::constants::mars;
        Self::about(
            planet,
            lit(mars::DEIMOS_MU),
            lit(mars::DEIMOS_RADIUS),
            T::zero(),
        )
        .expect("built-in constants are valid")
    }

    pub fn period(&self) -> T {
        T::TAU() / self.angular_rate
    }
}

/// Full planar state of one satellite.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SatelliteTruthState<T> {
    pub r: T,
    pub v: T,
    pub omega: T,
    /// Unwrapped angle, rad.
    pub theta: T,
    pub mass: T,
}

impl<T: Scalar> SatelliteTruthState<T> {
    pub fn check(&self) -> Result<(), StateFault> {
        if !self.r.is_finite() {
            return Err(StateFault::NonFinite("radius"));
        }
        if !self.v.is_finite() {
            return Err(StateFault::NonFinite("radial velocity"));
        }
        if !self.omega.is_finite() {
            return Err(StateFault::NonFinite("angular velocity"));
        }
        if !self.theta.is_finite() {
            return Err(StateFault::NonFinite("angle"));
        }
        if !(self.r > T::zero()) {
            return Err(StateFault::NonPositiveRadius(to_f64(self.r)));
        }
        if !(self.mass > T::zero()) || !self.mass.is_finite() {
            return Err(StateFault::NonPositiveMass(to_f64(self.mass)));
        }
        Ok(())
    }

    /// Angle reduced to `[0, 2π)`.
    pub fn wrapped_theta(&self) -> T {
        wrap_angle(self.theta)
    }

    /// Specific angular momentum `r²ω`.
    pub fn angular_momentum(&self) -> T {
        self.r * self.r * self.omega
    }

    /// Specific orbital energy.
    pub fn energy(&self, mu: T) -> T {
        let half: T = lit(0.5);
        half * (self.v * self.v + self.r * self.r * self.omega * self.omega) - mu / self.r
    }
}

pub fn wrap_angle<T: Scalar>(theta: T) -> T {
    let tau = T::TAU();
    let w = theta % tau;
    let w = if w < T::zero() { w + tau } else { w };
    // `w + tau` can round up to exactly tau for tiny negative inputs.
    if w >= tau {
        T::zero()
    } else {
        w
    }
}

/// Planar specific force in the satellite's radial/tangential frame.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct PerturbationAccel<T> {
    pub a_r: T,
    pub a_theta: T,
}

impl<T: Scalar> PerturbationAccel<T> {
    pub fn zero() -> Self {
        Self {
            a_r: T::zero(),
            a_theta: T::zero(),
        }
    }

    pub fn norm(&self) -> T {
        self.a_r.hypot(self.a_theta)
    }
}

impl<T: Scalar> Add for PerturbationAccel<T> {
    type Output = Self;
    fn add(self, rhs: Self) -> Self {
        Self {
            a_r: self.a_r + rhs.a_r,
            a_theta: self.a_theta + rhs.a_theta,
        }
    }
}

impl<T: Scalar> AddAssign for PerturbationAccel<T> {
    fn add_assign(&mut self, rhs: Self) {
        self.a_r += rhs.a_r;
        self.a_theta += rhs.a_theta;
    }
}

/// Radial and tangential thrust, N.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct ThrustCommand<T> {
    pub tau_r: T,
    pub tau_theta: T,
    /// Set when either component exceeded the actuator limit.
    pub saturated: bool,
}

impl<T: Scalar> ThrustCommand<T> {
    pub fn new(tau_r: T, tau_theta: T) -> Self {
        Self {
            tau_r,
            tau_theta,
            saturated: false,
        }
    }

    pub fn zero() -> Self {
        Self::new(T::zero(), T::zero())
    }
}

/// Time derivative of `(r, v, omega, theta)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StateRates<T> {
    pub r_dot: T,
    pub v_dot: T,
    pub omega_dot: T,
    pub theta_dot: T,
}

/// Polar equations of motion under central gravity, thrust and perturbations.
pub fn truth_derivatives<T: Scalar>(
    planet: &PlanetModel<T>,
    state: &SatelliteTruthState<T>,
    thrust: &ThrustCommand<T>,
    perturb: &PerturbationAccel<T>,
) -> Result<StateRates<T>, StateFault> {
    state.check()?;
    if !thrust.tau_r.is_finite() || !thrust.tau_theta.is_finite() {
        return Err(StateFault::NonFinite("thrust"));
    }
    if !perturb.a_r.is_finite() || !perturb.a_theta.is_finite() {
        return Err(StateFault::NonFinite("perturbation"));
    }
    let SatelliteTruthState {
        r, v, omega, mass, ..
    } = *state;
    let two: T = lit(2.0);
    let v_dot = r * omega * omega - planet.mu / (r * r) + thrust.tau_r / mass + perturb.a_r;
    let omega_dot = -two * v * omega / r + thrust.tau_theta / (mass * r) + perturb.a_theta / r;
    Ok(StateRates {
        r_dot: v,
        v_dot,
        omega_dot,
        theta_dot: omega,
    })
}

/// Moon polar position `(r_p, theta_p)` at time `t`.
pub fn moon_position<T: Scalar>(moon: &MoonModel<T>, t: T) -> (T, T) {
    (
        moon.orbit_radius,
        moon.initial_phase + moon.angular_rate * t,
    )
}

/// Direct gravitational pull of one moon, resolved on the satellite's
/// radial and tangential axes.
pub fn moon_perturbation<T: Scalar>(
    state: &SatelliteTruthState<T>,
    moon: &MoonModel<T>,
    t: T,
    min_separation: T,
) -> Result<PerturbationAccel<T>, StateFault> {
    if moon.mu == T::zero() {
        return Ok(PerturbationAccel::zero());
    }
    let (r_p, theta_p) = moon_position(moon, t);
    let (sin_i, cos_i) = state.theta.sin_cos();
    let (sin_p, cos_p) = theta_p.sin_cos();
    // satellite relative to the moon, planet-centred inertial axes
    let dx = state.r * cos_i - r_p * cos_p;
    let dy = state.r * sin_i - r_p * sin_p;
    let dist = dx.hypot(dy);
    if !(dist >= min_separation) {
        return Err(StateFault::MoonTooClose {
            separation_m: to_f64(dist),
            min_m: to_f64(min_separation),
        });
    }
    let scale = -moon.mu / (dist * dist * dist);
    Ok(PerturbationAccel {
        a_r: scale * (cos_i * dx + sin_i * dy),
        a_theta: scale * (-sin_i * dx + cos_i * dy),
    })
}

/// Sum of [`moon_perturbation`] over all moons.
pub fn total_perturbation<T: Scalar>(
    state: &SatelliteTruthState<T>,
    moons: &[MoonModel<T>],
    t: T,
    min_separation: T,
) -> Result<PerturbationAccel<T>, StateFault> {
    let mut acc = PerturbationAccel::zero();
    for moon in moons {
        acc += moon_perturbation(state, moon, t, min_separation)?;
    }
    Ok(acc)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::constants::mars;

    fn circular(r: f64) -> SatelliteTruthState<f64> {
        let planet = PlanetModel::<f64>::mars();
        SatelliteTruthState {
            r,
            v: 0.0,
            omega: planet.circular_rate(r),
            theta: 0.3,
            mass: 100.0,
        }
    }

    #[test]
    fn circular_orbit_is_stationary() {
        let planet = PlanetModel::<f64>::mars();
        let s = circular(mars::AREOSTATIONARY_RADIUS);
        let d = truth_derivatives(
            &planet,
            &s,
            &ThrustCommand::zero(),
            &PerturbationAccel::zero(),
        )
        .unwrap();
        assert_eq!(d.r_dot, 0.0);
        let gravity = planet.mu / (s.r * s.r);
        assert!(d.v_dot.abs() <= 4.0 * f64::EPSILON * gravity);
        assert_eq!(d.omega_dot, 0.0);
        assert_eq!(d.theta_dot, s.omega);
    }

    #[test]
    fn free_fall_from_rest() {
        let planet = PlanetModel::<f64>::mars();
        let s = SatelliteTruthState {
            r: 1.0e7,
            v: 0.0,
            omega: 0.0,
            theta: 0.0,
            mass: 1.0,
        };
        let d = truth_derivatives(
            &planet,
            &s,
            &ThrustCommand::zero(),
            &PerturbationAccel::zero(),
        )
        .unwrap();
        assert_eq!(d.v_dot, -planet.mu / 1.0e14);
        assert_eq!(d.omega_dot, 0.0);
    }

    #[test]
    fn quoted_initial_rate_is_nearly_circular() {
        let planet = PlanetModel::<f64>::mars();
        let s = SatelliteTruthState {
            r: 20_428.2e3,
            v: 0.0,
            omega: 7.0879e-5,
            theta: 0.0,
            mass: 100.0,
        };
        let d = truth_derivatives(
            &planet,
            &s,
            &ThrustCommand::zero(),
            &PerturbationAccel::zero(),
        )
        .unwrap();
        // small residual from the five-digit rate
        let expected = s.r * s.omega * s.omega - planet.mu / (s.r * s.r);
        assert!((d.v_dot - expected).abs() < 1e-18);
        assert!(d.v_dot.abs() < 2e-6, "{}", d.v_dot);
    }

    #[test]
    fn rejects_bad_states() {
        let planet = PlanetModel::<f64>::mars();
        let mut s = circular(2e7);
        s.r = 0.0;
        let err = truth_derivatives(
            &planet,
            &s,
            &ThrustCommand::zero(),
            &PerturbationAccel::zero(),
        )
        .unwrap_err();
        assert_eq!(err, StateFault::NonPositiveRadius(0.0));
        s.r = 2e7;
        s.omega = f64::NAN;
        assert!(matches!(
            truth_derivatives(
                &planet,
                &s,
                &ThrustCommand::zero(),
                &PerturbationAccel::zero()
            ),
            Err(StateFault::NonFinite(_))
        ));
    }

    #[test]
    fn moon_position_period() {
        let planet = PlanetModel::<f64>::mars();
        let mut phobos = MoonModel::phobos(&planet);
        assert_eq!(moon_position(&phobos, 0.0), (mars::PHOBOS_RADIUS, 0.0));
        phobos.initial_phase = 0.25;
        let (_, th) = moon_position(&phobos, phobos.period());
        assert!((th - (0.25 + std::f64::consts::TAU)).abs() < 1e-12);
    }

    #[test]
    fn phobos_rate_and_period() {
        let planet = PlanetModel::<f64>::mars();
        let phobos = MoonModel::phobos(&planet);
        assert!((phobos.angular_rate - 2.333e-4).abs() < 1e-6);
        let hours = phobos.period() / 3600.0;
        assert!((7.4..7.8).contains(&hours), "{hours}");
    }

    #[test]
    fn massless_moon_has_no_effect() {
        let planet = PlanetModel::<f64>::mars();
        let mut moon = MoonModel::deimos(&planet);
        moon.mu = 0.0;
        let a = moon_perturbation(&circular(2e7), &moon, 10.0, 1e3).unwrap();
        assert_eq!(a, PerturbationAccel::zero());
    }

    #[test]
    fn collinear_moon_pulls_inward() {
        let planet = PlanetModel::<f64>::mars();
        let phobos = MoonModel::phobos(&planet);
        let mut s = circular(20_428.2e3);
        s.theta = 0.0;
        let a = moon_perturbation(&s, &phobos, 0.0, 1e3).unwrap();
        let d = s.r - mars::PHOBOS_RADIUS;
        assert_eq!(a.a_theta, 0.0);
        assert!(a.a_r < 0.0);
        assert!((a.a_r + mars::PHOBOS_MU / (d * d)).abs() < 1e-15);
    }

    #[test]
    fn separation_guard_trips() {
        let planet = PlanetModel::<f64>::mars();
        let deimos = MoonModel::deimos(&planet);
        let mut s = circular(mars::DEIMOS_RADIUS + 10.0);
        s.theta = 0.0;
        let err = moon_perturbation(&s, &deimos, 0.0, 1e3).unwrap_err();
        assert!(matches!(err, StateFault::MoonTooClose { .. }));
    }

    #[test]
    fn total_of_nothing_is_zero() {
        let s = circular(2e7);
        assert_eq!(
            total_perturbation(&s, &[], 0.0, 1e3).unwrap(),
            PerturbationAccel::zero()
        );
    }

    #[test]
    fn wrap_angle_range() {
        for &x in &[-1e-18, -7.0, 0.0, 6.3, 100.0, std::f64::consts::TAU] {
            let w = wrap_angle(x);
            assert!((0.0..std::f64::consts::TAU).contains(&w), "{x} -> {w}");
        }
    }
}
