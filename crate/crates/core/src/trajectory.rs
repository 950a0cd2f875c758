//! Logged time series of a constellation run.

use crate::analysis::StorageSample;
use crate::scalar::Scalar;

#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct SatSample<T> {
    pub r: T,
    pub v: T,
    pub omega: T,
    /// Unwrapped angle.
    pub theta: T,
    pub tau_r: T,
    pub tau_theta: T,
    pub u: T,
}

#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct LinkSample<T> {
    pub theta_rel: T,
    pub y: T,
}

/// Uniformly sampled record of a run. Every per-step vector has the same
/// length as `times`.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct TrajectoryLog<T> {
    pub times: Vec<T>,
    /// `sats[k][i]`: satellite `i` at step `k`.
    pub sats: Vec<Vec<SatSample<T>>>,
    /// `links[k][l]`: link `l` at step `k`.
    pub links: Vec<Vec<LinkSample<T>>>,
    pub kc: Vec<T>,
    pub kc_rate: Vec<T>,
    pub storage: Vec<StorageSample<T>>,
    /// Analytic Lyapunov rate.
    pub lyapunov_rate: Vec<T>,
}

impl<T: Scalar> TrajectoryLog<T> {
    pub fn len(&self) -> usize {
        self.times.len()
    }

    pub fn is_empty(&self) -> bool {
        self.times.is_empty()
    }

    pub fn n_sats(&self) -> usize {
        self.sats.first().map_or(0, Vec::len)
    }

    pub fn n_links(&self) -> usize {
        self.links.first().map_or(0, Vec::len)
    }

    pub fn lyapunov(&self) -> impl Iterator<Item = T> + '_ {
        self.storage.iter().map(|s| s.v)
    }

    /// Sampling interval, assuming a uniform grid.
    pub fn interval(&self) -> Option<T> {
        match self.times.as_slice() {
            [a, b, ..] => Some(*b - *a),
            _ => None,
        }
    }

    /// Number of leading samples on the uniform grid. Only the final sample
    /// can fall off it, when the horizon is not a multiple of the interval.
    pub fn uniform_len(&self) -> usize {
        let n = self.times.len();
        match self.interval() {
            Some(dt) if n > 2 => {
                let last = self.times[n - 1] - self.times[n - 2];
                if (last - dt).abs() > dt * T::epsilon().sqrt() {
                    n - 1
                } else {
                    n
                }
            }
            _ => n,
        }
    }

    /// Every series has one entry per logged time.
    pub fn is_consistent(&self) -> bool {
        let n = self.times.len();
        self.sats.len() == n
            && self.links.len() == n
            && self.kc.len() == n
            && self.kc_rate.len() == n
            && self.storage.len() == n
            && self.lyapunov_rate.len() == n
    }
}
