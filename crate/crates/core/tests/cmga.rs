mod common;

use common::*;
use rand::Rng;
use robocomm::cmga::{brute_force_mvrp, fitness, solve, Chromosome};
use robocomm::scenario::generate_scenario;
use robocomm::tours::{f_mst_bound, route_length};
use robocomm::{AssignmentProblem, GaConfig, Scenario};

fn problem(scn: &Scenario) -> AssignmentProblem {
    AssignmentProblem::new(scn.robot_starts.clone(), (0..scn.n()).collect(), &scn.targets).unwrap()
}

#[test]
fn oracle_matches_independent_enumeration() {
    let mut r = rng(21);
    for _ in 0..30 {
        let n = r.random_range(1..=5);
        let m = r.random_range(1..=3);
        let scn = generate_scenario(n, m, 100.0, 0.0, r.random()).unwrap();
        let got = brute_force_mvrp(&problem(&scn)).unwrap();
        let want = exhaustive_mvrp(&scn.robot_starts, &scn.targets);
        assert!((got.total_cost - want).abs() < 1e-9);
    }
}

#[test]
fn single_robot_solve_tracks_open_path_optimum() {
    let mut r = rng(22);
    let mut close = 0;
    for _ in 0..100 {
        let n = r.random_range(2..=8);
        let scn = generate_scenario(n, 1, 1000.0, 0.0, r.random()).unwrap();
        let cfg = GaConfig { seed: r.random(), ..GaConfig::default() };
        let got = solve(&problem(&scn), &cfg).unwrap();
        let want = exhaustive_open_path(scn.robot_starts[0], &scn.targets);
        assert!(got.total_cost >= want - 1e-9);
        if got.total_cost <= 1.05 * want + 1e-9 {
            close += 1;
        }
    }
    assert!(close >= 95, "{close}/100 within 5%");
}

#[test]
fn assignment_covers_each_target_once_and_costs_its_routes() {
    let mut r = rng(23);
    for _ in 0..20 {
        let scn = generate_scenario(9, 3, 1000.0, 0.0, r.random()).unwrap();
        let p = problem(&scn);
        let a = solve(&p, &GaConfig { generations: 40, ..GaConfig::default() }).unwrap();
        let mut all: Vec<usize> = a.routes.iter().flatten().copied().collect();
        all.sort_unstable();
        assert_eq!(all, (0..9).collect::<Vec<_>>());
        let cost: f64 = a
            .routes
            .iter()
            .zip(&scn.robot_starts)
            .map(|(route, &s)| route_length(s, route, &scn.targets).unwrap())
            .sum();
        assert!((cost - a.total_cost).abs() < 1e-9);
        assert!(a.total_cost >= f_mst_bound(&scn) - 1e-9);
    }
}

#[test]
fn any_chromosome_costs_at_least_the_mst_bound() {
    let mut r = rng(24);
    for _ in 0..50 {
        let scn = generate_scenario(6, 3, 100.0, 0.0, r.random()).unwrap();
        let p = problem(&scn);
        let mut genes: Vec<usize> = (0..8).collect();
        for i in (1..genes.len()).rev() {
            genes.swap(i, r.random_range(0..=i));
        }
        let f = fitness(&Chromosome(genes), &p).unwrap();
        assert!(f >= f_mst_bound(&scn) - 1e-9);
    }
}
