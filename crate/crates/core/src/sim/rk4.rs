use crate::error::Error;
use crate::scalar::{lit, to_f64, Scalar};

/// Classical fourth-order Runge-Kutta with preallocated stage buffers.
#[derive(Debug, Clone)]
pub struct Rk4<T> {
    k1: Vec<T>,
    k2: Vec<T>,
    k3: Vec<T>,
    k4: Vec<T>,
    tmp: Vec<T>,
}

impl<T: Scalar> Rk4<T> {
    pub fn new(dim: usize) -> Self {
        Self {
            k1: vec![T::zero(); dim],
            k2: vec![T::zero(); dim],
            k3: vec![T::zero(); dim],
            k4: vec![T::zero(); dim],
            tmp: vec![T::zero(); dim],
        }
    }

    /// Advance `x` from `t` to `t + dt` in place.
    pub fn step<F>(&mut self, mut f: F, t: T, x: &mut [T], dt: T) -> Result<(), Error>
    where
        F: FnMut(T, &[T], &mut [T]) -> Result<(), Error>,
    {
        let half: T = lit(0.5);
        let sixth = dt / lit(6.0);
        let two: T = lit(2.0);
        let t_mid = t + half * dt;

        f(t, x, &mut self.k1)?;
        finite(&self.k1, 1, t)?;
        for ((tmp, &xi), &k) in self.tmp.iter_mut().zip(x.iter()).zip(&self.k1) {
            *tmp = xi + half * dt * k;
        }
        f(t_mid, &self.tmp, &mut self.k2)?;
        finite(&self.k2, 2, t)?;
        for ((tmp, &xi), &k) in self.tmp.iter_mut().zip(x.iter()).zip(&self.k2) {
            *tmp = xi + half * dt * k;
        }
        f(t_mid, &self.tmp, &mut self.k3)?;
        finite(&self.k3, 3, t)?;
        for ((tmp, &xi), &k) in self.tmp.iter_mut().zip(x.iter()).zip(&self.k3) {
            *tmp = xi + dt * k;
        }
        f(t + dt, &self.tmp, &mut self.k4)?;
        finite(&self.k4, 4, t)?;
        for (i, xi) in x.iter_mut().enumerate() {
            *xi += sixth * (self.k1[i] + two * (self.k2[i] + self.k3[i]) + self.k4[i]);
        }
        finite(x, 5, t)
    }
}

fn finite<T: Scalar>(v: &[T], stage: usize, t: T) -> Result<(), Error> {
    if v.iter().all(|x| x.is_finite()) {
        Ok(())
    } else {
        Err(Error::NonFinite {
            stage,
            t: to_f64(t),
        })
    }
}

/// One RK4 step of `f` from `(t, x)`; returns the new state.
pub fn rk4_step<T, F>(f: F, x: &[T], t: T, dt: T) -> Result<Vec<T>, Error>
where
    T: Scalar,
    F: FnMut(T, &[T], &mut [T]) -> Result<(), Error>,
{
    if !(dt > T::zero()) {
        return Err(Error::invalid("dt", "must be positive"));
    }
    let mut out = x.to_vec();
    Rk4::new(x.len()).step(f, t, &mut out, dt)?;
    Ok(out)
}
