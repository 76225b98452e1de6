mod common;

use common::*;
use proptest::prelude::*;
use robocomm::scenario::generate_scenario;
use robocomm::tours::{
    brute_force_tsp, christofides, f_mst_bound, initial_route_on_tour, min_weight_perfect_matching, mst_weight,
    route_length,
};
use robocomm::{DistanceMatrix, Point2D};

#[test]
fn mst_matches_edge_subset_enumeration() {
    let mut r = rng(11);
    for n in 2..=6 {
        for _ in 0..10 {
            let pts = random_points(&mut r, n, 100.0);
            let dm = DistanceMatrix::from_points(&pts);
            let want = exhaustive_mst(&|a, b| d(pts[a], pts[b]), n);
            assert!((mst_weight(&dm) - want).abs() < 1e-9);
        }
    }
}

#[test]
fn f_mst_matches_enumeration_with_free_robot_links() {
    let mut r = rng(12);
    for _ in 0..20 {
        let targets = random_points(&mut r, 5, 100.0);
        let robots = random_points(&mut r, 2, 100.0);
        let all: Vec<Point2D> = targets.iter().chain(&robots).copied().collect();
        let w = |a: usize, b: usize| if a >= 5 && b >= 5 { 0.0 } else { d(all[a], all[b]) };
        let scn = robocomm::Scenario {
            edge_length: 100.0,
            comm_range: 0.0,
            seed: 0,
            targets,
            robot_starts: robots,
        };
        assert!((f_mst_bound(&scn) - exhaustive_mst(&w, 7)).abs() < 1e-9);
    }
}

#[test]
fn robot_hub_matrix_metric_only_for_one_robot() {
    let mut r = rng(13);
    for _ in 0..20 {
        let targets = random_points(&mut r, 6, 100.0);
        let robots = random_points(&mut r, 3, 100.0);
        DistanceMatrix::with_robot_hub(&targets, &robots[..1]).check_metric().unwrap();
        // d(r0, t) <= d(r0, r1) + d(r1, t) = d(r1, t) fails for the robot farther from t.
        let err = DistanceMatrix::with_robot_hub(&targets, &robots).check_metric();
        assert!(matches!(err, Err(robocomm::Error::NonMetric(..))));
    }
}

#[test]
fn christofides_within_three_halves_of_optimum() {
    let mut r = rng(14);
    for n in 4..=9 {
        for _ in 0..8 {
            let pts = random_points(&mut r, n, 1000.0);
            let dm = DistanceMatrix::from_points(&pts);
            let opt = exhaustive_tsp(&|a, b| d(pts[a], pts[b]), n);
            let tour = christofides(&dm).unwrap();
            assert!(tour.length >= opt - 1e-9);
            assert!(tour.length <= 1.5 * opt + 1e-9);
            let oracle = brute_force_tsp(&dm).unwrap();
            assert!((oracle.length - opt).abs() < 1e-6);
        }
    }
}

#[test]
fn matching_matches_all_105_pairings() {
    let mut r = rng(15);
    for _ in 0..25 {
        let pts = random_points(&mut r, 8, 100.0);
        let dm = DistanceMatrix::from_points(&pts);
        let ids: Vec<usize> = (0..8).collect();
        let pairs = min_weight_perfect_matching(&dm, &ids).unwrap();
        let got: f64 = pairs.iter().map(|&(a, b)| d(pts[a], pts[b])).sum();
        let (want, count) = exhaustive_matching(&|a, b| d(pts[a], pts[b]), 8);
        assert_eq!(count, 105);
        assert!((got - want).abs() < 1e-4, "{got} vs {want}");
        let mut seen: Vec<usize> = pairs.iter().flat_map(|&(a, b)| [a, b]).collect();
        seen.sort_unstable();
        assert_eq!(seen, ids);
    }
}

#[test]
fn initial_route_is_best_entry_and_direction() {
    let mut r = rng(16);
    for n in 2..=7 {
        for _ in 0..10 {
            let pts = random_points(&mut r, n, 1000.0);
            let start = random_points(&mut r, 1, 1000.0)[0];
            let tour = christofides(&DistanceMatrix::from_points(&pts)).unwrap();
            let route = initial_route_on_tour(&tour, start, &pts).unwrap();
            let mut best = f64::INFINITY;
            for entry in 0..n {
                for dir in [1isize, -1] {
                    let order: Vec<usize> =
                        (0..n as isize).map(|s| tour.order[(entry as isize + dir * s).rem_euclid(n as isize) as usize]).collect();
                    let mut len = d(start, pts[order[0]]);
                    for w in order.windows(2) {
                        len += d(pts[w[0]], pts[w[1]]);
                    }
                    best = best.min(len);
                }
            }
            let hops = route_length(start, &route.targets, &pts).unwrap();
            assert!((hops - route.length).abs() < 1e-9);
            assert!((route.length - best).abs() < 1e-9);
            let first = pts[route.targets[0]];
            let last = pts[*route.targets.last().unwrap()];
            let identity = d(start, first) + tour.length - if n > 1 { d(last, first) } else { 0.0 };
            assert!((route.length - identity).abs() < 1e-9);
        }
    }
}

#[test]
fn f_mst_never_exceeds_optimal_assignment() {
    let mut r = rng(17);
    for _ in 0..30 {
        let n = r.random_range(1..=6);
        let m = r.random_range(1..=3);
        let scn = generate_scenario(n, m, 100.0, 0.0, r.random()).unwrap();
        let opt = exhaustive_mvrp(&scn.robot_starts, &scn.targets);
        assert!(f_mst_bound(&scn) <= opt + 1e-9);
    }
}

use rand::Rng;

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn christofides_is_a_permutation(seed in any::<u64>(), n in 1usize..14) {
        let pts = random_points(&mut rng(seed), n, 500.0);
        let dm = DistanceMatrix::from_points(&pts);
        let tour = christofides(&dm).unwrap();
        let mut order = tour.order.clone();
        order.sort_unstable();
        prop_assert_eq!(order, (0..n).collect::<Vec<_>>());
        prop_assert!((dm.cycle_length(&tour.order) - tour.length).abs() < 1e-9);
    }

    #[test]
    fn initial_route_bounded_by_diagonal_plus_tour(seed in any::<u64>(), n in 1usize..12) {
        let mut r = rng(seed);
        let pts = random_points(&mut r, n, 1000.0);
        let start = random_points(&mut r, 1, 1000.0)[0];
        let tour = christofides(&DistanceMatrix::from_points(&pts)).unwrap();
        let route = initial_route_on_tour(&tour, start, &pts).unwrap();
        prop_assert!(route.length <= 2f64.sqrt() * 1000.0 + tour.length + 1e-9);
    }
}
