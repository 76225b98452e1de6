//! Acceptance checks. Each check returns an [`Outcome`] rather than
//! panicking, so a report can show every result in one pass.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use robocomm::cmga::{brute_force_mvrp, solve};
use robocomm::connectivity::{critical_radius, LAMBDA_TOL};
use robocomm::engine::{self, SimResult};
use robocomm::harness::{find_nonmonotone_witness, quality, run_experiment, ExperimentOutput, ExperimentPlan, Q_TOL};
use robocomm::scenario::generate_scenario;
use robocomm::tours::{christofides, initial_route_on_tour, route_length};
use robocomm::{
    AssertLevel, AssignmentProblem, ConnectivityGraph, DistanceMatrix, ExecutionMode, GaConfig, Point2D, SimConfig,
    Strategy,
};

#[derive(Debug, Clone)]
pub struct Outcome {
    pub pass: bool,
    pub detail: String,
}

impl Outcome {
    fn new(pass: bool, detail: impl Into<String>) -> Self {
        Self {
            pass,
            detail: detail.into(),
        }
    }

    fn error(e: impl std::fmt::Display) -> Self {
        Self::new(false, format!("error: {e}"))
    }
}

fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn points(r: &mut ChaCha8Rng, count: usize, edge: f64) -> Vec<Point2D> {
    (0..count)
        .map(|_| Point2D::new(r.random_range(0.0..=edge), r.random_range(0.0..=edge)))
        .collect()
}

fn d(a: Point2D, b: Point2D) -> f64 {
    (a.x - b.x).hypot(a.y - b.y)
}

/// Shortest closed tour through `pts`, by lexicographic permutation enumeration with vertex 0 fixed.
pub fn optimal_tour_length(pts: &[Point2D]) -> f64 {
    let n = pts.len();
    if n < 2 {
        return 0.0;
    }
    let mut perm: Vec<usize> = (1..n).collect();
    let mut best = f64::INFINITY;
    loop {
        let mut len = d(pts[0], pts[perm[0]]) + d(pts[perm[n - 2]], pts[0]);
        for w in perm.windows(2) {
            len += d(pts[w[0]], pts[w[1]]);
        }
        best = best.min(len);
        // next lexicographic permutation
        let Some(i) = (0..perm.len() - 1).rev().find(|&i| perm[i] < perm[i + 1]) else {
            return best;
        };
        let j = (i + 1..perm.len()).rev().find(|&j| perm[j] > perm[i]).unwrap();
        perm.swap(i, j);
        perm[i + 1..].reverse();
    }
}

/// Reference sizes for the Monte Carlo checks.
pub const N: usize = 15;
pub const M: usize = 4;
pub const EDGE: f64 = 1000.0;
pub const SCENARIOS: usize = 100;

pub fn radius_reproduction() -> Outcome {
    let (Ok(r4), Ok(r6)) = (critical_radius(4, 5.0, EDGE), critical_radius(6, 5.0, EDGE)) else {
        return Outcome::error("critical_radius failed");
    };
    let pass = (r4 - 712.8).abs() <= 0.5 && (r6 - 600.0).abs() <= 0.5;
    Outcome::new(pass, format!("r_c(m=4)={r4:.2} r_c(m=6)={r6:.2}"))
}

pub fn christofides_guarantee() -> Outcome {
    let mut r = rng(2);
    let mut ok = 0;
    let mut worst: f64 = 0.0;
    for _ in 0..100 {
        let n = r.random_range(4..=9);
        let pts = points(&mut r, n, EDGE);
        let opt = optimal_tour_length(&pts);
        let Ok(tour) = christofides(&DistanceMatrix::from_points(&pts)) else {
            return Outcome::error("christofides failed");
        };
        worst = worst.max(tour.length / opt);
        if tour.length >= opt - 1e-9 && tour.length <= 1.5 * opt + 1e-9 {
            ok += 1;
        }
    }
    Outcome::new(ok == 100, format!("{ok}/100 within [opt, 1.5 opt]; worst ratio {worst:.4}"))
}

/// STSTC runs at full assertion level over the default grid.
pub struct StstcSweep {
    pub runs: Vec<Result<(SimResult, f64), String>>,
}

pub fn ststc_full_sweep(mode: ExecutionMode) -> StstcSweep {
    let plan = ExperimentPlan {
        n: N,
        m: M,
        edge_length: EDGE,
        scenario_count: SCENARIOS,
        seed: 4,
        ..ExperimentPlan::default()
    };
    let ranges = plan.ranges().expect("default grid resolves");
    let cfg = SimConfig {
        strategy: Strategy::Ststc,
        assert_level: AssertLevel::Full,
        ..SimConfig::default()
    };
    let jobs: Vec<(u64, f64)> = plan
        .scenario_seeds()
        .into_iter()
        .flat_map(|s| ranges.iter().map(move |&r| (s, r)))
        .collect();
    let runs = mode.map(jobs, |(seed, r)| {
        let scn = generate_scenario(N, M, EDGE, r, seed).map_err(|e| e.to_string())?;
        let res = engine::run(&scn, &cfg).map_err(|e| format!("seed {seed} r {r:.1}: {e}"))?;
        let q = quality(&res, &scn).map_err(|e| e.to_string())?;
        Ok((res, q))
    });
    StstcSweep { runs }
}

fn first_error(sweep: &StstcSweep) -> Option<&String> {
    sweep.runs.iter().find_map(|r| r.as_ref().err())
}

pub fn termination_and_coverage(sweep: &StstcSweep) -> Outcome {
    if let Some(e) = first_error(sweep) {
        return Outcome::new(false, e.clone());
    }
    let done = sweep.runs.iter().flatten().count();
    let coverage: u64 = sweep.runs.iter().flatten().map(|(r, _)| r.diagnostics.coverage_checks).sum();
    Outcome::new(
        done == SCENARIOS * 8,
        format!("{done} runs terminated, all targets visited; {coverage} coverage checks, 0 violations"),
    )
}

pub fn nonincreasing_updates(sweep: &StstcSweep) -> Outcome {
    if let Some(e) = first_error(sweep) {
        return Outcome::new(false, e.clone());
    }
    let checks: u64 = sweep.runs.iter().flatten().map(|(r, _)| r.diagnostics.nonincreasing_checks).sum();
    let instants: u64 = sweep.runs.iter().flatten().map(|(r, _)| r.diagnostics.update_instants).sum();
    Outcome::new(
        checks > 0 && checks == instants,
        format!("{checks} checks over {instants} update instants, 0 violations"),
    )
}

/// Mixed-strategy sweep shared by the bound and trend checks.
pub fn trend_sweep(mode: ExecutionMode) -> Result<ExperimentOutput, String> {
    let plan = ExperimentPlan {
        n: N,
        m: M,
        edge_length: EDGE,
        scenario_count: SCENARIOS,
        seed: 8,
        ..ExperimentPlan::default()
    };
    run_experiment(&plan, mode).map_err(|e| e.to_string())
}

pub fn lower_bound_chain(trend: &Result<ExperimentOutput, String>, sweep: &StstcSweep) -> Outcome {
    let out = match trend {
        Ok(o) => o,
        Err(e) => return Outcome::new(false, e.clone()),
    };
    if let Some(e) = first_error(sweep) {
        return Outcome::new(false, e.clone());
    }
    let qs: Vec<f64> = out
        .runs
        .iter()
        .map(|r| r.q)
        .chain(sweep.runs.iter().flatten().map(|(_, q)| *q))
        .collect();
    let bad = qs.iter().filter(|&&q| q < 1.0 - Q_TOL).count();
    let min = qs.iter().copied().fold(f64::INFINITY, f64::min);
    Outcome::new(bad == 0, format!("{} runs, {bad} violations, min q {min:.4}", qs.len()))
}

pub fn nonmonotone_witness(mode: ExecutionMode) -> Outcome {
    match find_nonmonotone_witness(5, 4, 100.0, &[(25.0, 30.0)], 500, 6, &SimConfig::default(), mode) {
        Ok(Some(w)) => Outcome::new(
            w.f_high > w.f_low,
            format!(
                "scenario {} (seed {}): f(25)={:.2} < f(30)={:.2}",
                w.scenario_index, w.scenario_seed, w.f_low, w.f_high
            ),
        ),
        Ok(None) => Outcome::new(false, "no witness in 500 scenarios"),
        Err(e) => Outcome::error(e),
    }
}

pub fn cmga_vs_oracle(mode: ExecutionMode) -> Outcome {
    let mut r = rng(7);
    let jobs: Vec<(usize, usize, u64, u64)> = (0..100)
        .map(|_| (r.random_range(1..=6), r.random_range(1..=3), r.random(), r.random()))
        .collect();
    let results = mode.map(jobs, |(n, m, scn_seed, ga_seed)| -> Result<(f64, f64), String> {
        let scn = generate_scenario(n, m, EDGE, 0.0, scn_seed).map_err(|e| e.to_string())?;
        let p = AssignmentProblem::new(scn.robot_starts.clone(), (0..n).collect(), &scn.targets)
            .map_err(|e| e.to_string())?;
        let got = solve(&p, &GaConfig { seed: ga_seed, ..GaConfig::default() }).map_err(|e| e.to_string())?;
        let opt = brute_force_mvrp(&p).map_err(|e| e.to_string())?;
        Ok((got.total_cost, opt.total_cost))
    });
    let mut within = 0;
    let mut below = 0;
    for res in &results {
        match res {
            Ok((got, opt)) => {
                if *got < opt - 1e-9 {
                    below += 1;
                }
                if *got <= 1.05 * opt + 1e-9 {
                    within += 1;
                }
            }
            Err(e) => return Outcome::error(e),
        }
    }
    Outcome::new(
        within >= 95 && below == 0,
        format!("{within}/100 within 5% of the optimum; {below} below it"),
    )
}

/// Trend checks on `mean_q`; one outcome per sub-clause a..d.
pub fn trends(trend: &Result<ExperimentOutput, String>) -> Vec<(char, Outcome)> {
    let out = match trend {
        Ok(o) => o,
        Err(e) => return "abcd".chars().map(|c| (c, Outcome::new(false, e.clone()))).collect(),
    };
    let k = out.ranges.len();
    let q = |i: usize, s: Strategy| out.row(i, s).map(|r| r.mean_q).unwrap_or(f64::NAN);
    let ststc: Vec<f64> = (0..k).map(|i| q(i, Strategy::Ststc)).collect();
    let rba: Vec<f64> = (0..k).map(|i| q(i, Strategy::Rba)).collect();
    let greedy: Vec<f64> = (0..k).map(|i| q(i, Strategy::Greedy)).collect();
    let fmt = |v: &[f64]| v.iter().map(|x| format!("{x:.3}")).collect::<Vec<_>>().join(" ");

    let a = Outcome::new(
        ststc[k - 1] < ststc[0],
        format!("STSTC mean_q at r_c/8 {:.3} -> at r_c {:.3}", ststc[0], ststc[k - 1]),
    );
    let (lo, hi) = rba.iter().fold((f64::INFINITY, f64::NEG_INFINITY), |(l, h), &x| (l.min(x), h.max(x)));
    let spread = hi / lo - 1.0;
    let b = Outcome::new(
        spread < 0.25,
        format!("RBA mean_q max/min - 1 = {:.3} (limit 0.25); RBA: {}", spread, fmt(&rba)),
    );
    let half = out.ranges.iter().position(|&r| r >= out.ranges[k - 1] / 2.0 - 1e-9).unwrap_or(k);
    let c_ok = (half..k).all(|i| ststc[i] <= rba[i]);
    let c = Outcome::new(
        c_ok,
        format!("r >= r_c/2: STSTC {} vs RBA {}", fmt(&ststc[half..]), fmt(&rba[half..])),
    );
    let dd = Outcome::new(
        greedy[0] < ststc[0],
        format!("at r_c/8: greedy {:.3} vs STSTC {:.3}", greedy[0], ststc[0]),
    );
    vec![('a', a), ('b', b), ('c', c), ('d', dd)]
}

pub fn initial_route_identity() -> Outcome {
    let mut r = rng(9);
    let mut ok = 0;
    let mut worst_gap: f64 = 0.0;
    for _ in 0..100 {
        let n = r.random_range(2..=20);
        let m = r.random_range(1..=6);
        let Ok(scn) = generate_scenario(n, m, EDGE, 0.0, r.random()) else {
            return Outcome::error("scenario generation failed");
        };
        let j = r.random_range(0..m);
        let start = scn.robot_starts[j];
        let Ok(tour) = christofides(&DistanceMatrix::from_points(&scn.targets)) else {
            return Outcome::error("christofides failed");
        };
        let Ok(route) = initial_route_on_tour(&tour, start, &scn.targets) else {
            return Outcome::error("initial route failed");
        };
        let Ok(hops) = route_length(start, &route.targets, &scn.targets) else {
            return Outcome::error("route length failed");
        };
        let first = scn.targets[route.targets[0]];
        let last = scn.targets[*route.targets.last().unwrap()];
        let identity = d(start, first) + tour.length - d(last, first);
        worst_gap = worst_gap.max((hops - identity).abs());
        if (hops - identity).abs() <= 1e-9 && hops <= 2f64.sqrt() * EDGE + tour.length {
            ok += 1;
        }
    }
    Outcome::new(ok == 100, format!("{ok}/100 pairs; max identity gap {worst_gap:.2e}"))
}

/// Reachability by union-find over every linked pair.
fn connected_by_union_find(g: &ConnectivityGraph) -> bool {
    let m = g.len();
    let mut parent: Vec<usize> = (0..m).collect();
    fn find(p: &mut [usize], x: usize) -> usize {
        let mut x = x;
        while p[x] != x {
            p[x] = p[p[x]];
            x = p[x];
        }
        x
    }
    for i in 0..m {
        for j in i + 1..m {
            if g.linked(i, j) {
                let (a, b) = (find(&mut parent, i), find(&mut parent, j));
                parent[a] = b;
            }
        }
    }
    let root = find(&mut parent, 0);
    (0..m).all(|i| find(&mut parent, i) == root)
}

pub fn lambda_equivalence() -> Outcome {
    let mut r = rng(10);
    let mut agree = 0;
    for _ in 0..1000 {
        let m = r.random_range(2..=12);
        let pts = points(&mut r, m, 100.0);
        let g = ConnectivityGraph::build(&pts, r.random_range(0.0..=90.0));
        let Ok(l2) = g.algebraic_connectivity() else {
            return Outcome::error("lambda_2 undefined");
        };
        let searched = g.is_connected();
        if (l2 > LAMBDA_TOL) == searched && searched == connected_by_union_find(&g) {
            agree += 1;
        }
    }
    Outcome::new(agree == 1000, format!("{agree}/1000 agree"))
}

/// Finite-size check of the asymptotic connectivity law: 200 uniform points in
/// the unit square at `critical_radius(200, 5, 1)`, 500 trials, expected within
/// 0.03 of `exp(-exp(-5))`.
pub fn connectivity_law() -> Outcome {
    let m = 200;
    let Ok(radius) = critical_radius(m, 5.0, 1.0) else {
        return Outcome::error("critical_radius failed");
    };
    let mut r = rng(11);
    let trials = 500;
    let hits = (0..trials)
        .filter(|_| ConnectivityGraph::build(&points(&mut r, m, 1.0), radius).is_connected())
        .count();
    let freq = hits as f64 / trials as f64;
    let law = (-(-5f64).exp()).exp();
    Outcome::new(
        (freq - law).abs() <= 0.03,
        format!("empirical {freq:.3} vs limit {law:.4} (tolerance 0.03)"),
    )
}
