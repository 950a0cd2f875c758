//! Equilibrium, storage functions, Lyapunov monitors and passivity
//! certification.

mod certify;
mod equilibrium;
mod radial;
mod storage;

pub use certify::{
    certify_passivity, Certification, EpsilonStats, PassivityResidual, Subsystem, SubsystemSummary,
    MAX_CERTIFY_INTERVAL_S,
};
pub use equilibrium::{
    compute_equilibrium, compute_equilibrium_with, find_zero, Bracket, EquilibriumPoint,
};
pub use radial::{radial_eigen_check, radial_solution, RadialStability};
pub use storage::{
    adaptive_simpson, barbalat_w, link_storage, lyapunov, lyapunov_rate, satellite_storage,
    StorageSample,
};
