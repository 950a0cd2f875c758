//! Per-satellite thrust laws and the coordination gain schedule.
//!
//! The thrust laws feedback-linearize each satellite so that, in the
//! absence of perturbations, the closed loop becomes
//!
//! ```text
//! r' = v
//! v' = -k_v_eff (v - v_d) - k_r_eff (r - r_d)
//! ω' = -(k_ω / r)(ω - ω_d) + u / k_c
//! ```
//!
//! where the effective radial gains depend on [`RadialGainUnits`].

use serde::{Deserialize, Serialize};

use crate::dynamics::{PlanetModel, SatelliteTruthState, ThrustCommand};
use crate::error::Error;
use crate::scalar::{lit, Scalar};

/// How `k_r` and `k_v` enter the radial thrust law.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "kebab-case")]
pub enum RadialGainUnits {
    /// Gains are force gains (N/m, N·s/m) applied outside the mass factor.
    /// Closed-loop radial gains are `k_r / m` and `k_v / m`.
    #[default]
    Force,
    /// Gains are specific-force gains (1/s², 1/s) multiplied by the mass.
    Specific,
}

/// Phase of the mission, selects the coordination gain law.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Phase {
    Acquisition,
    StationKeeping,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GainSet<T> {
    pub k_r: T,
    pub k_v: T,
    pub k_omega: T,
    /// Coordination gain at `t = 0`.
    pub kc_bar: T,
    /// Asymptotic coordination gain, used during station-keeping.
    pub kc_floor: T,
    /// Dimensionless decay constant of the schedule.
    pub kc_decay: T,
    /// Acquisition horizon, s.
    pub t_f: T,
    pub radial_units: RadialGainUnits,
}

impl<T: Scalar> GainSet<T> {
    pub fn mars_example() -> Self {
        use crate::constants::{mission, SOL_S};
        Self {
            k_r: lit(mission::K_R),
            k_v: lit(mission::K_V),
            k_omega: lit(mission::K_OMEGA),
            kc_bar: lit(mission::KC_BAR),
            kc_floor: lit(mission::KC_FLOOR),
            kc_decay: lit(mission::KC_DECAY),
            t_f: lit(mission::T_F_SOLS * SOL_S),
            radial_units: RadialGainUnits::Force,
        }
    }

    pub fn validate(&self) -> Result<(), Error> {
        let pos = |name: &'static str, x: T| {
            if x > T::zero() && x.is_finite() {
                Ok(())
            } else {
                Err(Error::invalid(name, "must be positive"))
            }
        };
        pos("k_r", self.k_r)?;
        pos("k_v", self.k_v)?;
        pos("k_omega", self.k_omega)?;
        pos("kc_floor", self.kc_floor)?;
        pos("kc_decay", self.kc_decay)?;
        pos("t_f", self.t_f)?;
        if !(self.kc_bar > self.kc_floor) || !self.kc_bar.is_finite() {
            return Err(Error::invalid("kc_bar", "must exceed kc_floor"));
        }
        Ok(())
    }

    /// Phase in effect at `t`: acquisition up to and including `t_f`.
    pub fn phase_at(&self, t: T) -> Phase {
        if t <= self.t_f {
            Phase::Acquisition
        } else {
            Phase::StationKeeping
        }
    }

    /// `k_c(t)` using the phase implied by `t`.
    pub fn kc(&self, t: T) -> T {
        kc_schedule(t, self, self.phase_at(t))
    }

    /// `dk_c/dt` using the phase implied by `t`.
    pub fn kc_rate(&self, t: T) -> T {
        kc_schedule_rate(t, self, self.phase_at(t))
    }

    /// Closed-loop radial stiffness for a satellite of mass `mass`.
    pub fn radial_stiffness(&self, mass: T) -> T {
        match self.radial_units {
            RadialGainUnits::Force => self.k_r / mass,
            RadialGainUnits::Specific => self.k_r,
        }
    }

    /// Closed-loop radial damping for a satellite of mass `mass`.
    pub fn radial_damping(&self, mass: T) -> T {
        match self.radial_units {
            RadialGainUnits::Force => self.k_v / mass,
            RadialGainUnits::Specific => self.k_v,
        }
    }
}

/// Target circular orbit. `omega_d` is always derived from the planet.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DesiredOrbit<T> {
    pub r_d: T,
    omega_d: T,
}

impl<T: Scalar> DesiredOrbit<T> {
    pub fn new(planet: &PlanetModel<T>, r_d: T) -> Result<Self, Error> {
        if !(r_d > T::zero()) || !r_d.is_finite() {
            return Err(Error::invalid("r_d", "must be positive"));
        }
        Ok(Self {
            r_d,
            omega_d: planet.circular_rate(r_d),
        })
    }

    pub fn omega_d(&self) -> T {
        self.omega_d
    }

    pub fn v_d(&self) -> T {
        T::zero()
    }
}

/// Coordination gain. Exponential decay from `kc_bar` toward `kc_floor`
/// during acquisition, constant `kc_floor` afterwards.
pub fn kc_schedule<T: Scalar>(t: T, gains: &GainSet<T>, phase: Phase) -> T {
    match phase {
        Phase::Acquisition => {
            let decay = (-gains.kc_decay * t / gains.t_f).exp();
            let kc = (gains.kc_bar - gains.kc_floor) * decay + gains.kc_floor;
            kc.max(gains.kc_floor).min(gains.kc_bar)
        }
        Phase::StationKeeping => gains.kc_floor,
    }
}

/// Time derivative of [`kc_schedule`]; never positive.
pub fn kc_schedule_rate<T: Scalar>(t: T, gains: &GainSet<T>, phase: Phase) -> T {
    match phase {
        Phase::Acquisition => {
            let rate = gains.kc_decay / gains.t_f;
            -rate * (gains.kc_bar - gains.kc_floor) * (-rate * t).exp()
        }
        Phase::StationKeeping => T::zero(),
    }
}

/// Radial thrust, N. Cancels the gravity/centrifugal imbalance and applies
/// PD feedback on the radial error.
pub fn radial_thrust<T: Scalar>(
    planet: &PlanetModel<T>,
    state: &SatelliteTruthState<T>,
    gains: &GainSet<T>,
    desired: &DesiredOrbit<T>,
) -> T {
    let SatelliteTruthState {
        r, v, omega, mass, ..
    } = *state;
    let imbalance = -r * omega * omega + planet.mu / (r * r);
    let feedback = -gains.k_v * (v - desired.v_d()) - gains.k_r * (r - desired.r_d);
    match gains.radial_units {
        RadialGainUnits::Force => mass * imbalance + feedback,
        RadialGainUnits::Specific => mass * (imbalance + feedback),
    }
}

/// Tangential thrust, N, given the coordination input `u_i` and the
/// current coordination gain `kc`.
pub fn tangential_thrust<T: Scalar>(
    state: &SatelliteTruthState<T>,
    gains: &GainSet<T>,
    desired: &DesiredOrbit<T>,
    u_i: T,
    kc: T,
) -> T {
    let SatelliteTruthState {
        r, v, omega, mass, ..
    } = *state;
    let two: T = lit(2.0);
    mass * (two * v * omega - gains.k_omega * (omega - desired.omega_d()) + r / kc * u_i)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "kebab-case")]
pub enum SaturationMode {
    /// Pass the command through and flag it.
    #[default]
    WarnOnly,
    /// Clamp each component to `[-tau_max, tau_max]`.
    Clamp,
}

pub fn saturate<T: Scalar>(
    cmd: ThrustCommand<T>,
    tau_max: T,
    mode: SaturationMode,
) -> ThrustCommand<T> {
    let exceeded = cmd.tau_r.abs() > tau_max || cmd.tau_theta.abs() > tau_max;
    if !exceeded {
        return cmd;
    }
    match mode {
        SaturationMode::WarnOnly => ThrustCommand {
            saturated: true,
            ..cmd
        },
        SaturationMode::Clamp => ThrustCommand {
            tau_r: cmd.tau_r.max(-tau_max).min(tau_max),
            tau_theta: cmd.tau_theta.max(-tau_max).min(tau_max),
            saturated: true,
        },
    }
}
