use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::scenario::{InitialConditionSpec, Spread};
use crate::dynamics::SatelliteTruthState;
use crate::scalar::{lit, to_f64, Scalar};

/// Draw `n_sats` states uniformly from the boxes in `spec`.
///
/// Components are drawn in the order `r, v, omega, theta` per satellite
/// from a ChaCha8 stream, so the output is a pure function of
/// `(spec, n_sats, seed)`.
pub fn sample_initial_conditions<T: Scalar>(
    spec: &InitialConditionSpec<T>,
    n_sats: usize,
    mass: T,
    seed: u64,
) -> Vec<SatelliteTruthState<T>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut draw = |s: Spread<T>| -> T {
        let unit: f64 = rng.gen();
        if s.half_width == T::zero() {
            return s.nominal;
        }
        lit(to_f64(s.nominal) + to_f64(s.half_width) * (2.0 * unit - 1.0))
    };
    (0..n_sats)
        .map(|_| SatelliteTruthState {
            r: draw(spec.r),
            v: draw(spec.v),
            omega: draw(spec.omega),
            theta: draw(spec.theta),
            mass,
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn zero_width_gives_nominal() {
        let spec = InitialConditionSpec {
            r: Spread::exact(2e7),
            v: Spread::exact(0.0),
            omega: Spread::exact(7e-5),
            theta: Spread::exact(0.1),
        };
        for s in sample_initial_conditions(&spec, 5, 100.0_f64, 9) {
            assert_eq!(
                (s.r, s.v, s.omega, s.theta, s.mass),
                (2e7, 0.0, 7e-5, 0.1, 100.0)
            );
        }
    }

    #[test]
    fn same_seed_same_states() {
        let spec = InitialConditionSpec::<f64>::mars_example();
        let a = sample_initial_conditions(&spec, 10, 100.0, 42);
        let b = sample_initial_conditions(&spec, 10, 100.0, 42);
        let c = sample_initial_conditions(&spec, 10, 100.0, 43);
        assert_eq!(a, b);
        assert_ne!(a, c);
    }

    #[test]
    fn empirical_bounds_and_mean() {
        let spec = InitialConditionSpec::<f64>::mars_example();
        let n = 10_000;
        let states = sample_initial_conditions(&spec, n, 100.0, 7);
        let check = |get: &dyn Fn(&SatelliteTruthState<f64>) -> f64, s: Spread<f64>| {
            let vals: Vec<f64> = states.iter().map(get).collect();
            let lo = s.nominal - s.half_width;
            let hi = s.nominal + s.half_width;
            assert!(vals.iter().all(|&x| x >= lo && x <= hi));
            let mean = vals.iter().sum::<f64>() / n as f64;
            // uniform on [-w, w]: sigma = w / sqrt(3)
            let sigma_mean = s.half_width / 3f64.sqrt() / (n as f64).sqrt();
            assert!((mean - s.nominal).abs() <= 3.0 * sigma_mean);
        };
        check(&|s| s.r, spec.r);
        check(&|s| s.v, spec.v);
        check(&|s| s.omega, spec.omega);
        check(&|s| s.theta, spec.theta);
    }
}
