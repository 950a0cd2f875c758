use std::path::PathBuf;

use thiserror::Error;

/// Reason a single satellite state cannot be propagated.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum StateFault {
    #[error("radius {0} m is not positive")]
    NonPositiveRadius(f64),
    #[error("mass {0} kg is not positive")]
    NonPositiveMass(f64),
    #[error("non-finite {0}")]
    NonFinite(&'static str),
    #[error("moon separation {separation_m} m is below the {min_m} m floor")]
    MoonTooClose { separation_m: f64, min_m: f64 },
}

/// One failed validation rule in a configuration document.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConfigIssue {
    pub key: String,
    pub message: String,
}

impl std::fmt::Display for ConfigIssue {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}: {}", self.key, self.message)
    }
}

#[derive(Debug, Error)]
pub enum Error {
    #[error("satellite {sat} at t = {t} s: {fault}")]
    Satellite {
        sat: usize,
        t: f64,
        fault: StateFault,
    },

    #[error("non-finite state after RK4 stage {stage} at t = {t} s")]
    NonFinite { stage: usize, t: f64 },

    #[error("dimension mismatch in {what}: expected {expected}, got {got}")]
    DimensionMismatch {
        what: &'static str,
        expected: usize,
        got: usize,
    },

    #[error("a constellation needs at least 2 satellites, got {0}")]
    TooFewSatellites(usize),

    #[error("invalid parameter `{name}`: {reason}")]
    InvalidParameter { name: &'static str, reason: String },

    #[error("root finder failed: {0}")]
    RootNotFound(String),

    #[error("quadrature failed: {0}")]
    Quadrature(String),

    #[error("invalid configuration:\n{}", format_issues(.0))]
    Config(Vec<ConfigIssue>),

    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("json: {0}")]
    Json(#[from] serde_json::Error),
}

fn format_issues(issues: &[ConfigIssue]) -> String {
    issues
        .iter()
        .map(|i| format!("  - {i}"))
        .collect::<Vec<_>>()
        .join("\n")
}

impl Error {
    pub(crate) fn invalid(name: &'static str, reason: impl Into<String>) -> Self {
        Error::InvalidParameter {
            name,
            reason: reason.into(),
        }
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
