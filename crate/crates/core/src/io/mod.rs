//! Configuration documents and output artifacts.

mod artifacts;
mod config;

pub use artifacts::*;
pub use config::*;
