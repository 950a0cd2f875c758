use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use areosync::compensated_sum;
use areosync::network::{coordination_vector, link_inputs, LinkOutputFn, Topology};

#[test]
fn incidence_columns_and_rank() {
    for n in 2..=40 {
        let topo = Topology::path(n).unwrap();
        let d = topo.incidence();
        assert_eq!(d.len(), n);
        for l in 0..topo.n_links() {
            let col: Vec<i8> = d.iter().map(|row| row[l]).collect();
            assert_eq!(col.iter().map(|&x| x as i32).sum::<i32>(), 0);
            assert_eq!(col.iter().filter(|&&x| x == 1).count(), 1);
            assert_eq!(col.iter().filter(|&&x| x == -1).count(), 1);
            assert_eq!(col.iter().filter(|&&x| x == 0).count(), n - 2);
            assert_eq!(col[l], 1);
            assert_eq!(col[l + 1], -1);
        }
        assert_eq!(topo.rank(), n - 1);
    }
}

#[test]
#[allow(clippy::needless_range_loop)]
fn interconnection_is_skew_symmetric() {
    for n in 2..=25 {
        let m = Topology::path(n).unwrap().interconnection_matrix();
        let dim = m.len();
        assert_eq!(dim, 2 * n - 1);
        for i in 0..dim {
            for j in 0..dim {
                assert_eq!(m[i][j] as i32 + m[j][i] as i32, 0, "n={n} ({i},{j})");
            }
        }
    }
}

#[test]
fn coordination_is_local() {
    let topo = Topology::path(10).unwrap();
    let base = vec![0.1; 9];
    let u0 = coordination_vector(&base, &topo).unwrap();
    for l in 0..9 {
        let mut y = base.clone();
        y[l] += 1.0;
        let u = coordination_vector(&y, &topo).unwrap();
        let changed: Vec<usize> = (0..10).filter(|&i| u[i] != u0[i]).collect();
        assert_eq!(changed, vec![l, l + 1]);
        assert_eq!(u[l] - u0[l], -1.0);
        assert_eq!(u[l + 1] - u0[l + 1], 1.0);
    }
}

#[test]
fn coordination_sums_to_zero() {
    let mut g = ChaCha8Rng::seed_from_u64(21);
    let topo = Topology::path(10).unwrap();
    let mut worst: f64 = 0.0;
    for _ in 0..10_000 {
        let y: Vec<f64> = (0..9)
            .map(|_| g.gen_range(-1.0..1.0) * 10f64.powi(g.gen_range(-12..3)))
            .collect();
        let u = coordination_vector(&y, &topo).unwrap();
        let l1: f64 = u.iter().map(|x| x.abs()).sum();
        let s = compensated_sum(u.iter().copied()).abs();
        worst = worst.max(s / l1);
        assert!(s <= 1e-15 * l1, "{s} vs {l1}");
    }
    eprintln!("worst |sum u| / |u|_1 = {worst:e}");
}

/// `(ω - ω̄)ᵀ(u - ū) + (e - ē)ᵀ(y - ȳ) = 0` for any `ω`, `y`.
#[test]
fn power_balance_identity() {
    let mut g = ChaCha8Rng::seed_from_u64(22);
    for n in [2usize, 3, 10, 17] {
        let topo = Topology::path(n).unwrap();
        let h = LinkOutputFn::<f64>::equal_spacing(n);
        let theta_bar = std::f64::consts::TAU / n as f64;
        let y_bar = vec![h.eval(theta_bar); n - 1];
        for _ in 0..2_500 {
            let omega_bar = g.gen_range(1e-5..1e-4);
            let omega: Vec<f64> = (0..n)
                .map(|_| omega_bar + g.gen_range(-1e-6..1e-6))
                .collect();
            let theta_rel: Vec<f64> = (0..n - 1).map(|_| g.gen_range(-1.0..2.0)).collect();
            let y: Vec<f64> = theta_rel.iter().map(|&th| h.eval(th)).collect();
            let u = coordination_vector(&y, &topo).unwrap();
            let u_bar = coordination_vector(&y_bar, &topo).unwrap();
            let e = link_inputs(&omega, &topo).unwrap();
            let e_bar = link_inputs(&vec![omega_bar; n], &topo).unwrap();
            let terms: Vec<f64> = (0..n)
                .map(|i| (omega[i] - omega_bar) * (u[i] - u_bar[i]))
                .chain((0..n - 1).map(|l| (e[l] - e_bar[l]) * (y[l] - y_bar[l])))
                .collect();
            let scale: f64 = terms.iter().map(|t| t.abs()).sum();
            let total = compensated_sum(terms.iter().copied());
            assert!(total.abs() <= 1e-12 * scale, "{total} vs {scale}");
        }
    }
}

#[test]
fn link_inputs_are_neighbour_differences() {
    let topo = Topology::path(5).unwrap();
    let w = [5.0, 3.0, 4.0, 4.0, -1.0];
    assert_eq!(link_inputs(&w, &topo).unwrap(), vec![2.0, -1.0, 0.0, 5.0]);
}

#[test]
fn topology_csv_dump() {
    let csv = Topology::path(4).unwrap().to_csv();
    assert_eq!(
        csv,
        "sat_id,link_1,link_2,link_3\n1,1,0,0\n2,-1,1,0\n3,0,-1,1\n4,0,0,-1\n"
    );
}

proptest! {
    #[test]
    fn coordination_is_minus_d_times_y(y in prop::collection::vec(-1e3f64..1e3, 1..30)) {
        let n = y.len() + 1;
        let topo = Topology::path(n).unwrap();
        let d = topo.incidence();
        let u = coordination_vector(&y, &topo).unwrap();
        for i in 0..n {
            let want: f64 = (0..n - 1).map(|l| -(d[i][l] as f64) * y[l]).sum();
            prop_assert_eq!(u[i], want);
        }
    }

    #[test]
    fn link_inputs_are_d_transpose_omega(w in prop::collection::vec(-1.0f64..1.0, 2..30)) {
        let topo = Topology::path(w.len()).unwrap();
        let d = topo.incidence();
        let e = link_inputs(&w, &topo).unwrap();
        for l in 0..w.len() - 1 {
            let want: f64 = (0..w.len()).map(|i| d[i][l] as f64 * w[i]).sum();
            prop_assert_eq!(e[l], want);
        }
    }
}
