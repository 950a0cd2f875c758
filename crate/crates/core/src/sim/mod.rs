//! Scenario definition, fixed-step integration and mission metrics.

mod initial;
mod rk4;
mod run;
mod scenario;
mod system;

pub use initial::sample_initial_conditions;
pub use rk4::{rk4_step, Rk4};
pub use run::{
    detect_acquisition, detect_acquisition_around, lyapunov_monotonicity, run, AcquisitionReport,
    RunOutput, LYAPUNOV_STEP_TOL,
};
pub use scenario::{InitialConditionSpec, Scenario, Spread};
pub use system::{
    link_slice, pack_initial_state, state_len, system_derivative, unpack_sat, unpack_sats,
    ClosedLoop, SAT_STATES,
};
