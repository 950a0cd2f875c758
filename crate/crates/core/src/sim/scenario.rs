use crate::constants::{mission, SOL_S};
use crate::controller::{DesiredOrbit, GainSet, SaturationMode};
use crate::dynamics::{MoonModel, PlanetModel, SatelliteTruthState};
use crate::error::Error;
use crate::network::LinkOutputFn;
use crate::scalar::{lit, to_f64, Scalar};

/// Nominal value and half-width of a uniformly sampled quantity.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Spread<T> {
    pub nominal: T,
    pub half_width: T,
}

impl<T: Scalar> Spread<T> {
    pub fn new(nominal: T, half_width: T) -> Self {
        Self {
            nominal,
            half_width,
        }
    }

    pub fn exact(nominal: T) -> Self {
        Self::new(nominal, T::zero())
    }

    fn from_pair((nominal, half_width): (f64, f64)) -> Self {
        Self::new(lit(nominal), lit(half_width))
    }
}

/// Box of initial conditions the deployed cluster is drawn from.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct InitialConditionSpec<T> {
    pub r: Spread<T>,
    pub v: Spread<T>,
    pub omega: Spread<T>,
    pub theta: Spread<T>,
}

impl<T: Scalar> InitialConditionSpec<T> {
    pub fn mars_example() -> Self {
        Self {
            r: Spread::from_pair(mission::IC_R),
            v: Spread::from_pair(mission::IC_V),
            omega: Spread::from_pair(mission::IC_OMEGA),
            theta: Spread::from_pair(mission::IC_THETA),
        }
    }

    /// Every satellite exactly on the equilibrium orbit at angle 0.
    pub fn at_rest(desired: &DesiredOrbit<T>) -> Self {
        Self {
            r: Spread::exact(desired.r_d),
            v: Spread::exact(T::zero()),
            omega: Spread::exact(desired.omega_d()),
            theta: Spread::exact(T::zero()),
        }
    }

    pub fn validate(&self) -> Result<(), Error> {
        for (name, s) in [
            ("initial_conditions.r", self.r),
            ("initial_conditions.v", self.v),
            ("initial_conditions.omega", self.omega),
            ("initial_conditions.theta", self.theta),
        ] {
            if !(s.half_width >= T::zero()) || !s.half_width.is_finite() || !s.nominal.is_finite() {
                return Err(Error::invalid(
                    name,
                    "half-width must be finite and non-negative",
                ));
            }
        }
        if !(self.r.nominal - self.r.half_width > T::zero()) {
            return Err(Error::invalid(
                "initial_conditions.r",
                "radius range must stay positive",
            ));
        }
        Ok(())
    }
}

/// Everything needed to reproduce one run.
#[derive(Debug, Clone, PartialEq)]
pub struct Scenario<T> {
    pub planet: PlanetModel<T>,
    pub moons: Vec<MoonModel<T>>,
    pub moons_enabled: bool,
    pub n_sats: usize,
    pub sat_mass: T,
    pub desired: DesiredOrbit<T>,
    pub gains: GainSet<T>,
    pub tau_max: T,
    pub saturation_mode: SaturationMode,
    /// When false the coordination input `u` is forced to zero.
    pub coordination_enabled: bool,
    pub link_output: LinkOutputFn<T>,
    pub ic: InitialConditionSpec<T>,
    /// Explicit initial states; overrides sampling from `ic` when set.
    pub initial_states: Option<Vec<SatelliteTruthState<T>>>,
    pub dt: T,
    pub horizon: T,
    pub logging_interval: T,
    pub seed: u64,
    pub min_moon_separation: T,
    pub acquisition_tol_deg: T,
}

impl<T: Scalar> Scenario<T> {
    /// The Mars areostationary mission with Phobos and Deimos.
    pub fn mars_example() -> Self {
        let planet = PlanetModel::mars();
        let desired =
            DesiredOrbit::new(&planet, lit(crate::constants::mars::AREOSTATIONARY_RADIUS))
                .expect("built-in radius is valid");
        let gains = GainSet::mars_example();
        Self {
            moons: vec![MoonModel::phobos(&planet), MoonModel::deimos(&planet)],
            planet,
            moons_enabled: true,
            n_sats: mission::N_SATS,
            sat_mass: lit(mission::SAT_MASS),
            desired,
            horizon: gains.t_f,
            gains,
            tau_max: lit(mission::TAU_MAX),
            saturation_mode: SaturationMode::WarnOnly,
            coordination_enabled: true,
            link_output: LinkOutputFn::equal_spacing(mission::N_SATS),
            ic: InitialConditionSpec::mars_example(),
            initial_states: None,
            dt: lit(mission::DT),
            logging_interval: lit(mission::LOGGING_INTERVAL),
            seed: mission::SEED,
            min_moon_separation: lit(mission::MIN_MOON_SEPARATION),
            acquisition_tol_deg: lit(mission::ACQUISITION_TOL_DEG),
        }
    }

    pub fn n_links(&self) -> usize {
        self.n_sats - 1
    }

    pub fn horizon_sols(&self) -> T {
        self.horizon / lit(SOL_S)
    }

    /// Moons that act on the satellites in this run.
    pub fn active_moons(&self) -> &[MoonModel<T>] {
        if self.moons_enabled {
            &self.moons
        } else {
            &[]
        }
    }

    /// Number of integration steps; the last step ends at or before the horizon.
    pub fn n_steps(&self) -> usize {
        let steps = to_f64(self.horizon) / to_f64(self.dt);
        (steps + 1e-9).floor() as usize
    }

    /// Integration steps per logged sample.
    pub fn log_stride(&self) -> usize {
        (to_f64(self.logging_interval) / to_f64(self.dt))
            .round()
            .max(1.0) as usize
    }

    /// Desired spacing between neighbours, rad.
    pub fn desired_spacing(&self) -> T {
        T::TAU() / T::from_usize(self.n_sats).expect("count fits")
    }

    pub fn validate(&self) -> Result<(), Error> {
        if self.n_sats < 2 {
            return Err(Error::TooFewSatellites(self.n_sats));
        }
        let positive = |name: &'static str, x: T| {
            if x > T::zero() && x.is_finite() {
                Ok(())
            } else {
                Err(Error::invalid(name, "must be positive"))
            }
        };
        positive("sat_mass", self.sat_mass)?;
        positive("tau_max", self.tau_max)?;
        positive("dt", self.dt)?;
        positive("min_moon_separation", self.min_moon_separation)?;
        positive("acquisition_tol_deg", self.acquisition_tol_deg)?;
        self.gains.validate()?;
        self.ic.validate()?;
        if !(self.horizon >= T::zero()) || !self.horizon.is_finite() {
            return Err(Error::invalid("horizon", "must be finite and non-negative"));
        }
        if self.horizon > T::zero() && self.horizon < self.dt {
            return Err(Error::invalid("horizon", "must be zero or at least dt"));
        }
        if !(self.logging_interval >= self.dt) {
            return Err(Error::invalid("logging_interval", "must be at least dt"));
        }
        let ratio = to_f64(self.logging_interval) / to_f64(self.dt);
        if (ratio - ratio.round()).abs() > 1e-9 * ratio {
            return Err(Error::invalid(
                "logging_interval",
                "must be an integer multiple of dt",
            ));
        }
        if let Some(states) = &self.initial_states {
            if states.len() != self.n_sats {
                return Err(Error::DimensionMismatch {
                    what: "initial_states",
                    expected: self.n_sats,
                    got: states.len(),
                });
            }
            for (sat, s) in states.iter().enumerate() {
                s.check()
                    .map_err(|fault| Error::Satellite { sat, t: 0.0, fault })?;
            }
        }
        Ok(())
    }
}
