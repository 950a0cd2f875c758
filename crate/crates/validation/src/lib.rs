//! Helpers for the acceptance suite in `tests/acceptance.rs`.

use std::time::{Duration, Instant};

use areosync::sim::{run, RunOutput};
use areosync::{Result, Scenario64};

/// Print one verdict line and fail the calling test if it did not pass.
pub fn verdict(criterion: u32, name: &str, pass: bool, detail: &str) {
    let tag = if pass { "PASS" } else { "FAIL" };
    println!("criterion {criterion:>2} [{tag}] {name}: {detail}");
    assert!(pass, "criterion {criterion} ({name}) failed: {detail}");
}

/// Run a scenario and time it.
pub fn timed_run(sc: &Scenario64) -> Result<(RunOutput<f64>, Duration)> {
    let start = Instant::now();
    let out = run(sc)?;
    Ok((out, start.elapsed()))
}

/// Largest absolute entry of `a - b`.
pub fn sup_diff(a: &[f64], b: &[f64]) -> f64 {
    a.iter()
        .zip(b)
        .map(|(x, y)| (x - y).abs())
        .fold(0.0, f64::max)
}
