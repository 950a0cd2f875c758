//! The coupled satellite + link vector field.
//!
//! State layout: `[r, v, omega, theta]` for each satellite, followed by
//! `theta_rel` for each link.

use super::scenario::Scenario;
use crate::controller::{radial_thrust, saturate, tangential_thrust};
use crate::dynamics::{total_perturbation, truth_derivatives, SatelliteTruthState, ThrustCommand};
use crate::error::Error;
use crate::network::{coordination_vector_into, link_inputs_into, Topology};
use crate::scalar::{compensated_sum, to_f64, Scalar};

pub const SAT_STATES: usize = 4;

pub fn state_len(n_sats: usize) -> usize {
    SAT_STATES * n_sats + n_sats.saturating_sub(1)
}

/// Satellite `i` of a packed state vector.
#[inline]
pub fn unpack_sat<T: Scalar>(x: &[T], i: usize, mass: T) -> SatelliteTruthState<T> {
    let b = SAT_STATES * i;
    SatelliteTruthState {
        r: x[b],
        v: x[b + 1],
        omega: x[b + 2],
        theta: x[b + 3],
        mass,
    }
}

pub fn unpack_sats<T: Scalar>(x: &[T], n_sats: usize, mass: T) -> Vec<SatelliteTruthState<T>> {
    (0..n_sats).map(|i| unpack_sat(x, i, mass)).collect()
}

pub fn link_slice<T>(x: &[T], n_sats: usize) -> &[T] {
    &x[SAT_STATES * n_sats..]
}

/// Pack satellite states; links start at `θ_l - θ_{l+1}`.
pub fn pack_initial_state<T: Scalar>(sats: &[SatelliteTruthState<T>]) -> Vec<T> {
    let mut x = Vec::with_capacity(state_len(sats.len()));
    for s in sats {
        x.extend_from_slice(&[s.r, s.v, s.omega, s.theta]);
    }
    for pair in sats.windows(2) {
        x.push(pair[0].theta - pair[1].theta);
    }
    x
}

/// Closed-loop vector field with reusable work buffers.
pub struct ClosedLoop<'a, T> {
    scenario: &'a Scenario<T>,
    topo: Topology,
    omega: Vec<T>,
    e: Vec<T>,
    y: Vec<T>,
    u: Vec<T>,
    thrust: Vec<ThrustCommand<T>>,
    kc: T,
    /// Largest `|Σ u_i| / ‖u‖₁` seen in any evaluation.
    pub max_u_imbalance: T,
}

impl<'a, T: Scalar> ClosedLoop<'a, T> {
    pub fn new(scenario: &'a Scenario<T>) -> Result<Self, Error> {
        let topo = Topology::path(scenario.n_sats)?;
        let n = scenario.n_sats;
        let m = topo.n_links();
        Ok(Self {
            scenario,
            topo,
            omega: vec![T::zero(); n],
            e: vec![T::zero(); m],
            y: vec![T::zero(); m],
            u: vec![T::zero(); n],
            thrust: vec![ThrustCommand::zero(); n],
            kc: scenario.gains.kc_bar,
            max_u_imbalance: T::zero(),
        })
    }

    pub fn topology(&self) -> &Topology {
        &self.topo
    }

    /// Thrust commands from the latest evaluation.
    pub fn thrusts(&self) -> &[ThrustCommand<T>] {
        &self.thrust
    }

    /// Coordination inputs from the latest evaluation.
    pub fn coordination(&self) -> &[T] {
        &self.u
    }

    /// Link outputs from the latest evaluation.
    pub fn link_outputs(&self) -> &[T] {
        &self.y
    }

    pub fn kc(&self) -> T {
        self.kc
    }

    /// Evaluate `dx = f(t, x)`.
    pub fn derivative(&mut self, t: T, x: &[T], dx: &mut [T]) -> Result<(), Error> {
        let sc = self.scenario;
        let n = sc.n_sats;
        let expected = state_len(n);
        if x.len() != expected || dx.len() != expected {
            return Err(Error::DimensionMismatch {
                what: "state vector",
                expected,
                got: x.len().min(dx.len()),
            });
        }
        let links = link_slice(x, n);
        for (y, &th) in self.y.iter_mut().zip(links) {
            *y = sc.link_output.eval(th);
        }
        if sc.coordination_enabled {
            coordination_vector_into(&self.y, &self.topo, &mut self.u)?;
            self.track_imbalance();
        } else {
            self.u.iter_mut().for_each(|u| *u = T::zero());
        }
        self.kc = sc.gains.kc(t);

        for i in 0..n {
            let state = unpack_sat(x, i, sc.sat_mass);
            let fail = |fault| Error::Satellite {
                sat: i,
                t: to_f64(t),
                fault,
            };
            state.check().map_err(fail)?;
            let perturb = total_perturbation(&state, sc.active_moons(), t, sc.min_moon_separation)
                .map_err(fail)?;
            let raw = ThrustCommand::new(
                radial_thrust(&sc.planet, &state, &sc.gains, &sc.desired),
                tangential_thrust(&state, &sc.gains, &sc.desired, self.u[i], self.kc),
            );
            let cmd = saturate(raw, sc.tau_max, sc.saturation_mode);
            let rates = truth_derivatives(&sc.planet, &state, &cmd, &perturb).map_err(fail)?;
            self.thrust[i] = cmd;
            self.omega[i] = state.omega;
            let b = SAT_STATES * i;
            dx[b] = rates.r_dot;
            dx[b + 1] = rates.v_dot;
            dx[b + 2] = rates.omega_dot;
            dx[b + 3] = rates.theta_dot;
        }
        link_inputs_into(&self.omega, &self.topo, &mut self.e)?;
        dx[SAT_STATES * n..].copy_from_slice(&self.e);
        Ok(())
    }

    fn track_imbalance(&mut self) {
        let l1: T = self.u.iter().map(|u| u.abs()).sum();
        if l1 > T::zero() {
            let ratio = compensated_sum(self.u.iter().copied()).abs() / l1;
            self.max_u_imbalance = self.max_u_imbalance.max(ratio);
        }
    }
}

/// Allocating convenience wrapper around [`ClosedLoop::derivative`].
pub fn system_derivative<T: Scalar>(
    x: &[T],
    t: T,
    scenario: &Scenario<T>,
) -> Result<Vec<T>, Error> {
    let mut cl = ClosedLoop::new(scenario)?;
    let mut dx = vec![T::zero(); x.len()];
    cl.derivative(t, x, &mut dx)?;
    Ok(dx)
}
