//! Distributed acquisition and station-keeping of an equally spaced
//! satellite constellation on a circular equatorial orbit.
//!
//! Each satellite runs a feedback-linearizing thrust law plus a
//! coordination term built from the relative angles to its neighbours on
//! a path communication graph. The [`analysis`] module evaluates the
//! storage functions and Lyapunov function of the closed loop and
//! certifies the passivity inequalities numerically along simulated
//! trajectories.
//!
//! All numerical code is generic over [`Scalar`]; the `*64` aliases below
//! fix the scalar to `f64`, which is what mission-length runs use.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod analysis;
pub mod constants;
pub mod controller;
pub mod dynamics;
mod error;
pub mod io;
pub mod network;
mod scalar;
pub mod sim;
pub mod trajectory;

pub use error::{ConfigIssue, Error, Result, StateFault};
pub use scalar::{compensated_sum, lit, to_f64, Scalar};

pub type PlanetModel64 = dynamics::PlanetModel<f64>;
pub type MoonModel64 = dynamics::MoonModel<f64>;
pub type SatelliteState64 = dynamics::SatelliteTruthState<f64>;
pub type GainSet64 = controller::GainSet<f64>;
pub type DesiredOrbit64 = controller::DesiredOrbit<f64>;
pub type Scenario64 = sim::Scenario<f64>;
pub type TrajectoryLog64 = trajectory::TrajectoryLog<f64>;
pub type AcquisitionReport64 = sim::AcquisitionReport<f64>;
pub type EquilibriumPoint64 = analysis::EquilibriumPoint<f64>;
pub type Certification64 = analysis::Certification<f64>;

pub type SatelliteState32 = dynamics::SatelliteTruthState<f32>;
pub type GainSet32 = controller::GainSet<f32>;
pub type Scenario32 = sim::Scenario<f32>;
