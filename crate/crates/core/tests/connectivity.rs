mod common;

use common::*;
use proptest::prelude::*;
use rand::Rng;
use robocomm::connectivity::{critical_radius, epsilon_for_probability, symmetric_eigenvalues, LAMBDA_TOL};
use robocomm::ConnectivityGraph;

/// Reachability by repeated boolean matrix closure; independent of the library's BFS.
fn connected_by_closure(g: &ConnectivityGraph) -> bool {
    let m = g.len();
    let mut reach: Vec<Vec<bool>> = (0..m).map(|i| (0..m).map(|j| i == j || g.linked(i, j)).collect()).collect();
    for k in 0..m {
        for i in 0..m {
            for j in 0..m {
                if reach[i][k] && reach[k][j] {
                    reach[i][j] = true;
                }
            }
        }
    }
    reach.iter().all(|row| row.iter().all(|&b| b))
}

#[test]
fn lambda_two_agrees_with_search_on_1000_graphs() {
    let mut r = rng(41);
    for _ in 0..1000 {
        let m = r.random_range(2..=12);
        let pts = random_points(&mut r, m, 100.0);
        let g = ConnectivityGraph::build(&pts, r.random_range(0.0..80.0));
        let by_lambda = g.algebraic_connectivity().unwrap() > LAMBDA_TOL;
        assert_eq!(by_lambda, g.is_connected());
        assert_eq!(g.is_connected(), connected_by_closure(&g));
    }
}

#[test]
fn jacobi_matches_closed_form_spectra() {
    // Path P_m has Laplacian eigenvalues 2 - 2cos(k pi / m).
    for m in 2..=9 {
        let mut a = vec![vec![0.0; m]; m];
        for i in 0..m - 1 {
            a[i][i + 1] = -1.0;
            a[i + 1][i] = -1.0;
            a[i][i] += 1.0;
            a[i + 1][i + 1] += 1.0;
        }
        let got = symmetric_eigenvalues(a);
        for (k, ev) in got.iter().enumerate() {
            let want = 2.0 - 2.0 * (k as f64 * std::f64::consts::PI / m as f64).cos();
            assert!((ev - want).abs() < 1e-9, "m={m} k={k}");
        }
    }
}

#[test]
fn critical_radius_for_probability() {
    let eps = epsilon_for_probability(0.99).unwrap();
    assert!((eps - 4.600149).abs() < 1e-5);
    assert!((critical_radius(4, eps, 1000.0).unwrap() - 690.2).abs() < 0.1);
    assert!((critical_radius(6, eps, 1000.0).unwrap() - 582.3).abs() < 0.1);
}

proptest! {
    #[test]
    fn laplacian_structure(seed in any::<u64>(), m in 2usize..12, range in 0.0f64..60.0) {
        let pts = random_points(&mut rng(seed), m, 100.0);
        let g = ConnectivityGraph::build(&pts, range);
        let l = g.laplacian();
        for (i, row) in l.iter().enumerate() {
            prop_assert_eq!(row.iter().sum::<f64>(), 0.0);
            for (j, v) in row.iter().enumerate() {
                prop_assert_eq!(*v, l[j][i]);
            }
        }
        let ev = g.laplacian_spectrum();
        prop_assert!(ev[0].abs() < 1e-9);
        prop_assert!(ev.iter().all(|&v| v > -1e-9));
        let zeros = ev.iter().filter(|&&v| v.abs() < LAMBDA_TOL).count();
        prop_assert_eq!(zeros, g.components().len());
    }

    #[test]
    fn components_partition_the_fleet(seed in any::<u64>(), m in 1usize..15, range in 0.0f64..60.0) {
        let pts = random_points(&mut rng(seed), m, 100.0);
        let g = ConnectivityGraph::build(&pts, range);
        let parts = g.components();
        let mut all: Vec<usize> = parts.sets.iter().flatten().copied().collect();
        all.sort_unstable();
        prop_assert_eq!(all, (0..m).collect::<Vec<_>>());
        let labels = parts.labels();
        for i in 0..m {
            for j in 0..m {
                if g.linked(i, j) {
                    prop_assert_eq!(labels[i], labels[j]);
                }
            }
        }
    }
}
