//! Marker-gene genetic solver for dividing targets among robots.
//!
//! A chromosome is a permutation of `k` target genes and `g - 1` marker genes
//! for `g` robots. Reading left to right, the run of target genes before the
//! first marker is robot 0's route, the run between the first and second
//! markers is robot 1's, and so on. Empty runs leave a robot idle.
//!
//! Several populations evolve independently and pass their best individuals
//! around a ring at a fixed interval. The objective is the summed open-route
//! length from each robot's current position.

use rand::seq::SliceRandom;
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::Point2D;
use crate::rng::{self, SimRng};
use crate::tours::DistanceMatrix;

const TOURNAMENT: usize = 2;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct GaConfig {
    pub population_count: usize,
    pub population_size: usize,
    pub generations: usize,
    pub migration_interval: usize,
    pub migration_count: usize,
    pub crossover_rate: f64,
    pub mutation_rate: f64,
    pub elitism_count: usize,
    pub seed: u64,
}

impl Default for GaConfig {
    fn default() -> Self {
        Self {
            population_count: 4,
            population_size: 50,
            generations: 300,
            migration_interval: 25,
            migration_count: 2,
            crossover_rate: 0.9,
            mutation_rate: 0.15,
            elitism_count: 2,
            seed: 0,
        }
    }
}

impl GaConfig {
    pub fn validate(&self) -> Result<()> {
        let bad = |m: &str| Err(Error::InvalidArgument(format!("GA config: {m}")));
        if self.population_count == 0 || self.population_size < 2 {
            return bad("need at least one population of two individuals");
        }
        if self.migration_interval == 0 {
            return bad("migration_interval must be positive");
        }
        if self.elitism_count > self.population_size || self.migration_count > self.population_size {
            return bad("elitism_count and migration_count cannot exceed population_size");
        }
        for (name, rate) in [("crossover_rate", self.crossover_rate), ("mutation_rate", self.mutation_rate)] {
            if !(0.0..=1.0).contains(&rate) {
                return bad(&format!("{name} must lie in [0, 1]"));
            }
        }
        Ok(())
    }
}

/// Gene string: `0..k` are targets (local indices), `k..k+g-1` are markers.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Chromosome(pub Vec<usize>);

impl Chromosome {
    /// Concatenates routes separated by markers `k, k+1, ..`.
    pub fn encode(routes: &[Vec<usize>], k: usize) -> Chromosome {
        let mut genes = Vec::with_capacity(k + routes.len().saturating_sub(1));
        for (q, route) in routes.iter().enumerate() {
            if q > 0 {
                genes.push(k + q - 1);
            }
            genes.extend_from_slice(route);
        }
        Chromosome(genes)
    }

    /// Splits at marker genes; the `q`-th run of targets is robot `q`'s route.
    pub fn decode(&self, k: usize, g: usize) -> Result<Vec<Vec<usize>>> {
        let len = k + g.saturating_sub(1);
        if g == 0 || self.0.len() != len {
            return Err(Error::MalformedChromosome(format!(
                "expected {len} genes for {k} targets and {g} robots, got {}",
                self.0.len()
            )));
        }
        let mut seen = vec![false; len];
        for &gene in &self.0 {
            if gene >= len || std::mem::replace(&mut seen[gene], true) {
                return Err(Error::MalformedChromosome(format!(
                    "gene {gene} is out of range or repeated"
                )));
            }
        }
        let mut routes = vec![Vec::new(); g];
        let mut q = 0;
        for &gene in &self.0 {
            if gene < k {
                routes[q].push(gene);
            } else {
                q += 1;
            }
        }
        Ok(routes)
    }
}

/// Targets to divide among robots at their current positions.
#[derive(Debug, Clone, PartialEq)]
pub struct AssignmentProblem {
    pub robot_starts: Vec<Point2D>,
    /// Global target ids.
    pub target_ids: Vec<usize>,
    /// Positions aligned with `target_ids`.
    pub target_points: Vec<Point2D>,
}

impl AssignmentProblem {
    pub fn new(robot_starts: Vec<Point2D>, target_ids: Vec<usize>, all_targets: &[Point2D]) -> Result<Self> {
        let target_points = target_ids
            .iter()
            .map(|&id| all_targets.get(id).copied().ok_or(Error::UnknownTarget(id)))
            .collect::<Result<_>>()?;
        Ok(Self {
            robot_starts,
            target_ids,
            target_points,
        })
    }

    pub fn k(&self) -> usize {
        self.target_ids.len()
    }

    pub fn g(&self) -> usize {
        self.robot_starts.len()
    }

    /// Nodes `0..k` are targets, `k..k+g` robot starts.
    fn matrix(&self) -> DistanceMatrix {
        let pts: Vec<Point2D> = self
            .target_points
            .iter()
            .chain(&self.robot_starts)
            .copied()
            .collect();
        DistanceMatrix::from_points(&pts)
    }

    fn local_index(&self, id: usize) -> Option<usize> {
        self.target_ids.iter().position(|&t| t == id)
    }
}

/// Per-robot routes in global target ids, aligned with the problem's robots.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Assignment {
    pub routes: Vec<Vec<usize>>,
    pub total_cost: f64,
}

pub fn decode(ch: &Chromosome, problem: &AssignmentProblem) -> Result<Vec<Vec<usize>>> {
    Ok(ch
        .decode(problem.k(), problem.g())?
        .into_iter()
        .map(|r| r.into_iter().map(|i| problem.target_ids[i]).collect())
        .collect())
}

pub fn fitness(ch: &Chromosome, problem: &AssignmentProblem) -> Result<f64> {
    ch.decode(problem.k(), problem.g())?;
    Ok(Evaluator::new(problem).cost(&ch.0))
}

struct Evaluator {
    k: usize,
    dm: DistanceMatrix,
}

impl Evaluator {
    fn new(problem: &AssignmentProblem) -> Self {
        Self {
            k: problem.k(),
            dm: problem.matrix(),
        }
    }

    fn cost(&self, genes: &[usize]) -> f64 {
        let k = self.k;
        let mut at = k; // robot 0's start node
        let mut q = 0;
        let mut total = 0.0;
        for &gene in genes {
            if gene < k {
                total += self.dm.get(at, gene);
                at = gene;
            } else {
                q += 1;
                at = k + q;
            }
        }
        total
    }
}

#[derive(Clone)]
struct Individual {
    genes: Vec<usize>,
    cost: f64,
}

pub fn solve(problem: &AssignmentProblem, cfg: &GaConfig) -> Result<Assignment> {
    solve_seeded(problem, cfg, None)
}

/// Runs the solver, optionally injecting an incumbent division (global target
/// ids per robot) into every initial population. Incumbent targets outside
/// the problem are ignored and problem targets it misses go to the last robot.
pub fn solve_seeded(
    problem: &AssignmentProblem,
    cfg: &GaConfig,
    incumbent: Option<&[Vec<usize>]>,
) -> Result<Assignment> {
    if problem.k() == 0 {
        return Err(Error::NothingToAssign);
    }
    if problem.g() == 0 {
        return Err(Error::InvalidArgument("no robots to assign to".into()));
    }
    cfg.validate()?;
    let (k, g) = (problem.k(), problem.g());
    let eval = Evaluator::new(problem);
    let mut rng = rng::stream(cfg.seed, 0);

    let seed_genes = incumbent.map(|routes| seed_chromosome(problem, routes));
    let mut pops: Vec<Vec<Individual>> = (0..cfg.population_count)
        .map(|_| {
            let mut pop: Vec<Individual> = (0..cfg.population_size)
                .map(|_| {
                    let mut genes: Vec<usize> = (0..k + g - 1).collect();
                    genes.shuffle(&mut rng);
                    let cost = eval.cost(&genes);
                    Individual { genes, cost }
                })
                .collect();
            if let Some(genes) = &seed_genes {
                pop[0] = Individual {
                    cost: eval.cost(genes),
                    genes: genes.clone(),
                };
            }
            sort_pop(&mut pop);
            pop
        })
        .collect();

    for generation in 1..=cfg.generations {
        for pop in pops.iter_mut() {
            *pop = next_generation(pop, cfg, &eval, &mut rng);
        }
        if pops.len() > 1 && generation % cfg.migration_interval == 0 {
            migrate(&mut pops, cfg.migration_count);
        }
    }

    let best = pops
        .iter()
        .map(|p| &p[0])
        .min_by(|a, b| a.cost.total_cmp(&b.cost))
        .expect("at least one population");
    let routes = decode(&Chromosome(best.genes.clone()), problem)?;
    Ok(Assignment {
        routes,
        total_cost: best.cost,
    })
}

fn sort_pop(pop: &mut [Individual]) {
    pop.sort_by(|a, b| a.cost.total_cmp(&b.cost));
}

fn next_generation(pop: &[Individual], cfg: &GaConfig, eval: &Evaluator, rng: &mut SimRng) -> Vec<Individual> {
    let mut next: Vec<Individual> = pop[..cfg.elitism_count].to_vec();
    while next.len() < pop.len() {
        let a = tournament(pop, rng);
        let mut genes = if rng.random_bool(cfg.crossover_rate) {
            let b = tournament(pop, rng);
            order_crossover(&a.genes, &b.genes, rng)
        } else {
            a.genes.clone()
        };
        if rng.random_bool(cfg.mutation_rate) {
            mutate(&mut genes, rng);
        }
        let cost = eval.cost(&genes);
        next.push(Individual { genes, cost });
    }
    sort_pop(&mut next);
    next
}

fn tournament<'a>(pop: &'a [Individual], rng: &mut SimRng) -> &'a Individual {
    (0..TOURNAMENT)
        .map(|_| &pop[rng.random_range(0..pop.len())])
        .min_by(|a, b| a.cost.total_cmp(&b.cost))
        .unwrap()
}

/// Ring migration: each population's best replace the next population's worst.
fn migrate(pops: &mut [Vec<Individual>], count: usize) {
    let emigrants: Vec<Vec<Individual>> = pops.iter().map(|p| p[..count].to_vec()).collect();
    let n = pops.len();
    for (i, group) in emigrants.into_iter().enumerate() {
        let dest = &mut pops[(i + 1) % n];
        let len = dest.len();
        for (slot, ind) in dest[len - count..].iter_mut().zip(group) {
            *slot = ind;
        }
        sort_pop(dest);
    }
}

/// OX1: copy a slice from the first parent, fill the rest in the second
/// parent's order starting after the slice.
pub fn order_crossover<R: Rng>(p1: &[usize], p2: &[usize], rng: &mut R) -> Vec<usize> {
    let len = p1.len();
    if len < 2 {
        return p1.to_vec();
    }
    let (mut a, mut b) = (rng.random_range(0..len), rng.random_range(0..len));
    if a > b {
        std::mem::swap(&mut a, &mut b);
    }
    let mut child = vec![usize::MAX; len];
    let mut taken = vec![false; len];
    for i in a..=b {
        child[i] = p1[i];
        taken[p1[i]] = true;
    }
    let mut pos = (b + 1) % len;
    for off in 0..len {
        let gene = p2[(b + 1 + off) % len];
        if !taken[gene] {
            child[pos] = gene;
            taken[gene] = true;
            pos = (pos + 1) % len;
        }
    }
    child
}

/// Swap two genes or reverse a segment, with equal probability.
pub fn mutate<R: Rng>(genes: &mut [usize], rng: &mut R) {
    let len = genes.len();
    if len < 2 {
        return;
    }
    let (mut a, mut b) = (rng.random_range(0..len), rng.random_range(0..len));
    if rng.random_bool(0.5) {
        genes.swap(a, b);
    } else {
        if a > b {
            std::mem::swap(&mut a, &mut b);
        }
        genes[a..=b].reverse();
    }
}

fn seed_chromosome(problem: &AssignmentProblem, routes: &[Vec<usize>]) -> Vec<usize> {
    let (k, g) = (problem.k(), problem.g());
    let mut placed = vec![false; k];
    let mut local: Vec<Vec<usize>> = vec![Vec::new(); g];
    for (q, route) in routes.iter().take(g).enumerate() {
        for &id in route {
            if let Some(i) = problem.local_index(id) {
                if !std::mem::replace(&mut placed[i], true) {
                    local[q].push(i);
                }
            }
        }
    }
    for (i, done) in placed.iter().enumerate() {
        if !done {
            local[g - 1].push(i);
        }
    }
    Chromosome::encode(&local, k).0
}

pub const MVRP_ORACLE_MAX_TARGETS: usize = 7;
pub const MVRP_ORACLE_MAX_ROBOTS: usize = 3;

/// Exact minimum of summed open-route lengths.
///
/// For every robot and every target subset the best open path is found by
/// Held-Karp; the optimum then enumerates all `g^k` target-to-robot maps.
pub fn brute_force_mvrp(problem: &AssignmentProblem) -> Result<Assignment> {
    let (k, g) = (problem.k(), problem.g());
    if k == 0 {
        return Err(Error::NothingToAssign);
    }
    if k > MVRP_ORACLE_MAX_TARGETS || g > MVRP_ORACLE_MAX_ROBOTS || g == 0 {
        return Err(Error::OracleGuard(format!(
            "exhaustive MVRP limited to {MVRP_ORACLE_MAX_TARGETS} targets and \
             {MVRP_ORACLE_MAX_ROBOTS} robots, got {k} and {g}"
        )));
    }
    let pts = &problem.target_points;
    let full = 1usize << k;
    // paths[r][mask] = (cost, order) of the best open path from robot r over mask
    let paths: Vec<Vec<(f64, Vec<usize>)>> = problem
        .robot_starts
        .iter()
        .map(|&start| held_karp_open(start, pts))
        .collect();
    let mut best = (f64::INFINITY, vec![0usize; g]);
    let mut owner_masks = vec![0usize; g];
    let total_maps = g.pow(k as u32);
    for code in 0..total_maps {
        owner_masks.iter_mut().for_each(|m| *m = 0);
        let mut c = code;
        for t in 0..k {
            owner_masks[c % g] |= 1 << t;
            c /= g;
        }
        let cost: f64 = owner_masks.iter().enumerate().map(|(r, &m)| paths[r][m].0).sum();
        if cost < best.0 {
            best = (cost, owner_masks.clone());
        }
    }
    debug_assert_eq!(best.1.iter().fold(0, |a, m| a | m), full - 1);
    let routes = best
        .1
        .iter()
        .enumerate()
        .map(|(r, &m)| paths[r][m].1.iter().map(|&i| problem.target_ids[i]).collect())
        .collect();
    Ok(Assignment {
        routes,
        total_cost: best.0,
    })
}

fn held_karp_open(start: Point2D, pts: &[Point2D]) -> Vec<(f64, Vec<usize>)> {
    let k = pts.len();
    let full = 1usize << k;
    // dp[mask][last]: shortest path from start visiting mask, ending at last
    let mut dp = vec![vec![f64::INFINITY; k]; full];
    let mut parent = vec![vec![usize::MAX; k]; full];
    for t in 0..k {
        dp[1 << t][t] = start.distance(&pts[t]);
    }
    for mask in 1..full {
        for last in 0..k {
            let cur = dp[mask][last];
            if mask & (1 << last) == 0 || !cur.is_finite() {
                continue;
            }
            for nxt in 0..k {
                if mask & (1 << nxt) != 0 {
                    continue;
                }
                let nm = mask | (1 << nxt);
                let cand = cur + pts[last].distance(&pts[nxt]);
                if cand < dp[nm][nxt] {
                    dp[nm][nxt] = cand;
                    parent[nm][nxt] = last;
                }
            }
        }
    }
    (0..full)
        .map(|mask| {
            if mask == 0 {
                return (0.0, Vec::new());
            }
            let (last, cost) = (0..k)
                .filter(|&l| mask & (1 << l) != 0)
                .map(|l| (l, dp[mask][l]))
                .min_by(|a, b| a.1.total_cmp(&b.1))
                .unwrap();
            let mut order = Vec::new();
            let (mut m, mut l) = (mask, last);
            while l != usize::MAX {
                order.push(l);
                let p = parent[m][l];
                m &= !(1 << l);
                l = p;
            }
            order.reverse();
            (cost, order)
        })
        .collect()
}
