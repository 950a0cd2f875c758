//! Communication topology, link subsystems and the interconnection maps
//! `e = Dᵀω`, `u = -D y`.
//!
//! Satellite 0 leads in the direction of orbital motion. Link `l` joins
//! satellites `l` (positive end) and `l + 1` (negative end), so its
//! relative angle `θ_l - θ_{l+1}` is positive when the constellation is
//! spread out in order.

use std::fmt;
use std::sync::Arc;

use crate::error::Error;
use crate::scalar::Scalar;

/// Oriented communication graph, stored as its edge list.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Topology {
    n_sats: usize,
    /// `(positive end, negative end)` per link.
    links: Vec<(usize, usize)>,
}

impl Topology {
    /// Path graph over `n_sats` satellites. The first and last satellites
    /// share no link.
    pub fn path(n_sats: usize) -> Result<Self, Error> {
        if n_sats < 2 {
            return Err(Error::TooFewSatellites(n_sats));
        }
        Ok(Self {
            n_sats,
            links: (0..n_sats - 1).map(|l| (l, l + 1)).collect(),
        })
    }

    pub fn n_sats(&self) -> usize {
        self.n_sats
    }

    pub fn n_links(&self) -> usize {
        self.links.len()
    }

    pub fn link_ends(&self, l: usize) -> (usize, usize) {
        self.links[l]
    }

    /// Incidence matrix entry `D[i][l]`.
    pub fn entry(&self, i: usize, l: usize) -> i8 {
        let (pos, neg) = self.links[l];
        if i == pos {
            1
        } else if i == neg {
            -1
        } else {
            0
        }
    }

    /// Dense `N x M` incidence matrix, row-major.
    pub fn incidence(&self) -> Vec<Vec<i8>> {
        (0..self.n_sats)
            .map(|i| (0..self.n_links()).map(|l| self.entry(i, l)).collect())
            .collect()
    }

    /// Links incident to satellite `i`.
    pub fn incident_links(&self, i: usize) -> impl Iterator<Item = usize> + '_ {
        self.links
            .iter()
            .enumerate()
            .filter(move |(_, &(p, n))| p == i || n == i)
            .map(|(l, _)| l)
    }

    /// Rank of `Dᵀ` by fraction-free elimination. Incidence matrices are
    /// totally unimodular so the integer pivots stay small.
    pub fn rank(&self) -> usize {
        let mut a: Vec<Vec<i64>> = (0..self.n_links())
            .map(|l| (0..self.n_sats).map(|i| self.entry(i, l) as i64).collect())
            .collect();
        integer_rank(&mut a)
    }

    /// The `(N+M)²` interconnection matrix `[[0, -D], [Dᵀ, 0]]`.
    #[allow(clippy::needless_range_loop)]
    pub fn interconnection_matrix(&self) -> Vec<Vec<i8>> {
        let n = self.n_sats;
        let m = self.n_links();
        let mut out = vec![vec![0i8; n + m]; n + m];
        for i in 0..n {
            for l in 0..m {
                let d = self.entry(i, l);
                out[i][n + l] = -d;
                out[n + l][i] = d;
            }
        }
        out
    }

    /// CSV dump of `D` with a `sat_id` column and one column per link.
    pub fn to_csv(&self) -> String {
        let mut s = String::from("sat_id");
        for l in 0..self.n_links() {
            s.push_str(&format!(",link_{}", l + 1));
        }
        s.push('\n');
        for i in 0..self.n_sats {
            s.push_str(&(i + 1).to_string());
            for l in 0..self.n_links() {
                s.push_str(&format!(",{}", self.entry(i, l)));
            }
            s.push('\n');
        }
        s
    }
}

fn integer_rank(a: &mut [Vec<i64>]) -> usize {
    let rows = a.len();
    let cols = a.first().map_or(0, Vec::len);
    let mut rank = 0;
    let mut prev_pivot = 1i64;
    for c in 0..cols {
        let Some(p) = (rank..rows).find(|&r| a[r][c] != 0) else {
            continue;
        };
        a.swap(rank, p);
        for r in rank + 1..rows {
            for k in c + 1..cols {
                a[r][k] = (a[rank][c] * a[r][k] - a[r][c] * a[rank][k]) / prev_pivot;
            }
            a[r][c] = 0;
        }
        prev_pivot = a[rank][c];
        rank += 1;
        if rank == rows {
            break;
        }
    }
    rank
}

/// Build the path-graph topology for `n_sats` satellites.
pub fn build_path_incidence(n_sats: usize) -> Result<Topology, Error> {
    Topology::path(n_sats)
}

/// Output map `h_l` of a link. Must be strictly increasing and onto.
#[derive(Clone)]
pub enum LinkOutputFn<T> {
    /// `h(θ) = θ - offset`.
    Affine {
        offset: T,
    },
    Custom(Arc<dyn Fn(T) -> T + Send + Sync>),
}

impl<T: Scalar> LinkOutputFn<T> {
    /// Affine output centred on equal spacing `2π / n_sats`.
    pub fn equal_spacing(n_sats: usize) -> Self {
        LinkOutputFn::Affine {
            offset: T::TAU() / T::from_usize(n_sats).expect("count fits scalar"),
        }
    }

    pub fn custom(f: impl Fn(T) -> T + Send + Sync + 'static) -> Self {
        LinkOutputFn::Custom(Arc::new(f))
    }

    #[inline]
    pub fn eval(&self, theta_rel: T) -> T {
        match self {
            LinkOutputFn::Affine { offset } => theta_rel - *offset,
            LinkOutputFn::Custom(f) => f(theta_rel),
        }
    }
}

impl<T: fmt::Debug> fmt::Debug for LinkOutputFn<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            LinkOutputFn::Affine { offset } => {
                f.debug_struct("Affine").field("offset", offset).finish()
            }
            LinkOutputFn::Custom(_) => f.write_str("Custom(..)"),
        }
    }
}

impl<T: PartialEq> PartialEq for LinkOutputFn<T> {
    fn eq(&self, other: &Self) -> bool {
        match (self, other) {
            (LinkOutputFn::Affine { offset: a }, LinkOutputFn::Affine { offset: b }) => a == b,
            (LinkOutputFn::Custom(a), LinkOutputFn::Custom(b)) => Arc::ptr_eq(a, b),
            _ => false,
        }
    }
}

/// Integrated relative angle of one link.
#[derive(Debug, Clone)]
pub struct LinkState<T> {
    /// Unwrapped relative angle, rad.
    pub theta_rel: T,
    pub output_fn: LinkOutputFn<T>,
}

pub fn link_output<T: Scalar>(link: &LinkState<T>) -> T {
    link.output_fn.eval(link.theta_rel)
}

/// The link integrates its input: `dθ_rel/dt = e_l`.
pub fn link_derivative<T: Scalar>(_link: &LinkState<T>, e_l: T) -> T {
    e_l
}

fn check_len(what: &'static str, expected: usize, got: usize) -> Result<(), Error> {
    if expected == got {
        Ok(())
    } else {
        Err(Error::DimensionMismatch {
            what,
            expected,
            got,
        })
    }
}

/// `e = Dᵀω`.
pub fn link_inputs<T: Scalar>(omega: &[T], topo: &Topology) -> Result<Vec<T>, Error> {
    let mut e = vec![T::zero(); topo.n_links()];
    link_inputs_into(omega, topo, &mut e)?;
    Ok(e)
}

pub fn link_inputs_into<T: Scalar>(omega: &[T], topo: &Topology, e: &mut [T]) -> Result<(), Error> {
    check_len("omega", topo.n_sats, omega.len())?;
    check_len("link inputs", topo.n_links(), e.len())?;
    for (e_l, &(pos, neg)) in e.iter_mut().zip(&topo.links) {
        *e_l = omega[pos] - omega[neg];
    }
    Ok(())
}

/// `u = -D y`. Each `u_i` only reads the outputs of links touching `i`.
pub fn coordination_vector<T: Scalar>(y: &[T], topo: &Topology) -> Result<Vec<T>, Error> {
    let mut u = vec![T::zero(); topo.n_sats];
    coordination_vector_into(y, topo, &mut u)?;
    Ok(u)
}

pub fn coordination_vector_into<T: Scalar>(
    y: &[T],
    topo: &Topology,
    u: &mut [T],
) -> Result<(), Error> {
    check_len("link outputs", topo.n_links(), y.len())?;
    check_len("coordination vector", topo.n_sats, u.len())?;
    u.iter_mut().for_each(|x| *x = T::zero());
    for (&y_l, &(pos, neg)) in y.iter().zip(&topo.links) {
        u[pos] -= y_l;
        u[neg] += y_l;
    }
    Ok(())
}
