//! The decoupled radial error dynamics `[r_e, v_e]' = [[0, 1], [-k_r, -k_v]] [r_e, v_e]`.

use num_complex::Complex;

use crate::scalar::{lit, Scalar};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RadialStability<T> {
    pub stable: bool,
    pub eigenvalues: [Complex<T>; 2],
}

/// Roots of `s² + k_v s + k_r`; stable iff both have negative real part.
pub fn radial_eigen_check<T: Scalar>(k_r: T, k_v: T) -> RadialStability<T> {
    let two: T = lit(2.0);
    let four: T = lit(4.0);
    let disc = k_v * k_v - four * k_r;
    let eigenvalues = if disc >= T::zero() {
        let sq = disc.sqrt();
        let sign = if k_v >= T::zero() {
            T::one()
        } else {
            -T::one()
        };
        let q = -(k_v + sign * sq) / two;
        let other = if q == T::zero() { T::zero() } else { k_r / q };
        [Complex::new(q, T::zero()), Complex::new(other, T::zero())]
    } else {
        let re = -k_v / two;
        let im = (-disc).sqrt() / two;
        [Complex::new(re, im), Complex::new(re, -im)]
    };
    RadialStability {
        stable: eigenvalues.iter().all(|z| z.re < T::zero()),
        eigenvalues,
    }
}

/// Closed-form solution `(r_e(t), v_e(t))` of the radial error system.
pub fn radial_solution<T: Scalar>(k_r: T, k_v: T, r0: T, v0: T, t: T) -> (T, T) {
    let two: T = lit(2.0);
    let four: T = lit(4.0);
    let alpha = k_v / two;
    let disc = k_v * k_v - four * k_r;
    if disc < T::zero() {
        let beta = (-disc).sqrt() / two;
        let decay = (-alpha * t).exp();
        let (s, c) = (beta * t).sin_cos();
        let r = decay * (r0 * c + (v0 + alpha * r0) / beta * s);
        let v = decay * (v0 * c - (alpha * v0 + k_r * r0) / beta * s);
        (r, v)
    } else if disc == T::zero() {
        let decay = (-alpha * t).exp();
        let b = v0 + alpha * r0;
        (decay * (r0 + b * t), decay * (v0 - alpha * b * t))
    } else {
        let roots = radial_eigen_check(k_r, k_v).eigenvalues;
        let (l1, l2) = (roots[0].re, roots[1].re);
        let c1 = (v0 - l2 * r0) / (l1 - l2);
        let c2 = (l1 * r0 - v0) / (l1 - l2);
        let (e1, e2) = ((l1 * t).exp(), (l2 * t).exp());
        (c1 * e1 + c2 * e2, c1 * l1 * e1 + c2 * l2 * e2)
    }
}
