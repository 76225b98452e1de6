//! Discrete-time fleet simulation.
//!
//! Each step moves every active robot `dt` meters toward its waypoint
//! (snapping onto it when closer than `dt`), records visits, then lets the
//! strategy communicate and replan on the new positions. Communication is
//! only evaluated at step boundaries.

mod greedy;
mod rba;
mod state;
mod ststc;

pub use state::{FleetState, RobotInfoTuple};
pub use ststc::cooperative_targets;

use serde::{Deserialize, Serialize};
use std::fmt;
use std::io::Write;
use std::str::FromStr;

use crate::cmga::GaConfig;
use crate::error::{Error, Result};
use crate::geometry::Point2D;
use crate::scenario::Scenario;
use crate::tours::{christofides, f_mst_bound, DistanceMatrix};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Strategy {
    Rba,
    Ststc,
    Greedy,
}

impl Strategy {
    pub const ALL: [Strategy; 3] = [Strategy::Rba, Strategy::Ststc, Strategy::Greedy];

    pub fn name(self) -> &'static str {
        match self {
            Strategy::Rba => "rba",
            Strategy::Ststc => "ststc",
            Strategy::Greedy => "greedy",
        }
    }
}

impl fmt::Display for Strategy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Strategy {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "rba" => Ok(Strategy::Rba),
            "ststc" => Ok(Strategy::Ststc),
            "greedy" => Ok(Strategy::Greedy),
            other => Err(Error::InvalidArgument(format!("unknown strategy '{other}'"))),
        }
    }
}

/// How much runtime invariant checking a run performs.
///
/// `Cheap` checks the end state (coverage, `f = Σ t_j`, `f >= f_MST`).
/// `Full` additionally checks belief soundness, status monotonicity and
/// route coverage after every step, and that every STSTC update leaves the
/// component's planned remaining time no larger than before.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum AssertLevel {
    Off,
    Cheap,
    Full,
}

impl FromStr for AssertLevel {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "off" => Ok(AssertLevel::Off),
            "cheap" => Ok(AssertLevel::Cheap),
            "full" => Ok(AssertLevel::Full),
            other => Err(Error::InvalidArgument(format!("unknown assertion level '{other}'"))),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct SimConfig {
    pub dt: f64,
    /// Simulated-time guard; `None` derives it from the scenario (see [`termination_guard`]).
    pub max_time: Option<f64>,
    pub strategy: Strategy,
    pub assert_level: AssertLevel,
    pub ga: GaConfig,
    /// Sample positions every this many steps; `None` disables trajectories.
    pub trajectory_stride: Option<usize>,
    /// Whether stopped robots relay and exchange information (STSTC).
    pub exchange_while_stopped: bool,
}

impl Default for SimConfig {
    fn default() -> Self {
        Self {
            dt: 1.0,
            max_time: None,
            strategy: Strategy::Ststc,
            assert_level: AssertLevel::Cheap,
            ga: GaConfig::default(),
            trajectory_stride: None,
            exchange_while_stopped: true,
        }
    }
}

impl SimConfig {
    pub fn with_strategy(&self, strategy: Strategy) -> SimConfig {
        SimConfig {
            strategy,
            ..self.clone()
        }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.dt.is_finite() && self.dt > 0.0) {
            return Err(Error::InvalidArgument(format!("dt must be positive, got {}", self.dt)));
        }
        if let Some(t) = self.max_time {
            if !(t.is_finite() && t > 0.0) {
                return Err(Error::InvalidArgument(format!("max_time must be positive and finite, got {t}")));
            }
        }
        if self.trajectory_stride == Some(0) {
            return Err(Error::InvalidArgument("trajectory stride must be positive".into()));
        }
        self.ga.validate()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum EventKind {
    Meeting,
    Reassignment,
    Visit,
    Stop,
    Restart,
}

/// One log entry; serialized as a JSON line `{t, kind, robots, target?, detail}`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Event {
    pub t: f64,
    pub kind: EventKind,
    pub robots: Vec<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub target: Option<usize>,
    #[serde(default)]
    pub detail: String,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct VisitRecord {
    pub target_id: usize,
    pub robot_id: usize,
    pub time: f64,
}

/// Counters for how often the per-update checks actually ran.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Diagnostics {
    pub steps: u64,
    pub update_instants: u64,
    pub solver_calls: u64,
    pub reassignments: u64,
    pub nonincreasing_checks: u64,
    pub coverage_checks: u64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SimResult {
    pub strategy: Strategy,
    pub comm_range: f64,
    pub per_robot_time: Vec<f64>,
    pub total_f: f64,
    pub end_time: f64,
    pub visits: Vec<VisitRecord>,
    #[serde(skip_serializing_if = "Vec::is_empty", default)]
    pub events: Vec<Event>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub trajectories: Option<Vec<Vec<Point2D>>>,
    pub diagnostics: Diagnostics,
}

impl SimResult {
    /// `y_ij`: whether robot `j` visited target `i` at least once.
    pub fn visited_by(&self, target: usize, robot: usize) -> bool {
        self.visits.iter().any(|v| v.target_id == target && v.robot_id == robot)
    }

    pub fn write_events_jsonl(&self, mut out: impl Write) -> Result<()> {
        for e in &self.events {
            serde_json::to_writer(&mut out, e)?;
            out.write_all(b"\n")?;
        }
        Ok(())
    }
}

/// Simulated-time budget `2 m (√2 E_l + 1.5 L(TSP₀))`.
pub fn termination_guard(scn: &Scenario) -> Result<f64> {
    let tour = christofides(&DistanceMatrix::from_points(&scn.targets))?;
    Ok(2.0 * scn.m() as f64 * (2f64.sqrt() * scn.edge_length + 1.5 * tour.length))
}

/// Strategy-specific communication and planning, run at t = 0 and after every motion phase.
trait Planner {
    fn communicate(&mut self, sim: &mut Sim<'_>) -> Result<()>;
}

enum AnyPlanner {
    Rba(rba::RbaPlanner),
    Ststc(ststc::StstcPlanner),
    Greedy(greedy::GreedyPlanner),
}

impl AnyPlanner {
    fn communicate(&mut self, sim: &mut Sim<'_>) -> Result<()> {
        match self {
            AnyPlanner::Rba(p) => p.communicate(sim),
            AnyPlanner::Ststc(p) => p.communicate(sim),
            AnyPlanner::Greedy(p) => p.communicate(sim),
        }
    }
}

/// Shared mutable context handed to planners.
struct Sim<'a> {
    scn: &'a Scenario,
    cfg: &'a SimConfig,
    state: FleetState,
    events: Vec<Event>,
    diag: Diagnostics,
    rng: crate::rng::SimRng,
}

impl Sim<'_> {
    fn log(&mut self, kind: EventKind, robots: Vec<usize>, target: Option<usize>, detail: impl Into<String>) {
        self.events.push(Event {
            t: self.state.time,
            kind,
            robots,
            target,
            detail: detail.into(),
        });
    }

    fn full_checks(&self) -> bool {
        self.cfg.assert_level >= AssertLevel::Full
    }

    fn violation(&self, message: impl Into<String>) -> Error {
        Error::InvariantViolation {
            time: self.state.time,
            message: message.into(),
        }
    }

    fn check_coverage(&mut self) -> Result<()> {
        self.diag.coverage_checks += 1;
        let lost = self.state.uncovered_targets();
        if lost.is_empty() {
            Ok(())
        } else {
            Err(self.violation(format!("unvisited targets {lost:?} are on no robot's route")))
        }
    }

    /// Highest 1-hop degree wins; ties are broken uniformly at random.
    fn elect_leader(&mut self, members: &[usize], graph: &crate::connectivity::ConnectivityGraph) -> usize {
        use rand::seq::IndexedRandom;
        let best = members.iter().map(|&j| graph.degree(j)).max().unwrap_or(0);
        let tied: Vec<usize> = members.iter().copied().filter(|&j| graph.degree(j) == best).collect();
        *tied.choose(&mut self.rng).expect("non-empty component")
    }

    fn next_solver_seed(&mut self) -> u64 {
        use rand::RngCore;
        self.cfg.ga.seed ^ self.rng.next_u64()
    }
}

/// A single seeded run that can be advanced one step at a time.
pub struct Simulation<'a> {
    sim: Sim<'a>,
    planner: AnyPlanner,
    max_time: f64,
    f_mst: f64,
    step_index: u64,
    trajectories: Option<Vec<Vec<Point2D>>>,
    prev_status: Vec<Vec<bool>>,
}

impl<'a> Simulation<'a> {
    /// Builds the initial state and runs the t = 0 communication round.
    pub fn new(scn: &'a Scenario, cfg: &'a SimConfig) -> Result<Self> {
        scn.validate()?;
        cfg.validate()?;
        let max_time = match cfg.max_time {
            Some(t) => t,
            None => termination_guard(scn)?,
        };
        let mut sim = Sim {
            scn,
            cfg,
            state: FleetState::new(scn.n(), &scn.robot_starts),
            events: Vec::new(),
            diag: Diagnostics::default(),
            rng: crate::rng::stream(scn.seed, crate::rng::STREAM_ENGINE),
        };
        let mut planner = match cfg.strategy {
            Strategy::Rba => AnyPlanner::Rba(rba::RbaPlanner::new(&sim)?),
            Strategy::Ststc => AnyPlanner::Ststc(ststc::StstcPlanner::new(&mut sim)?),
            Strategy::Greedy => AnyPlanner::Greedy(greedy::GreedyPlanner::new(&sim)),
        };
        planner.communicate(&mut sim)?;
        let mut this = Self {
            prev_status: sim.state.robots.iter().map(|r| r.status.clone()).collect(),
            trajectories: cfg
                .trajectory_stride
                .map(|_| sim.state.robots.iter().map(|r| vec![r.position]).collect()),
            sim,
            planner,
            max_time,
            f_mst: f_mst_bound(scn),
            step_index: 0,
        };
        this.update_motion_flags(true);
        this.step_checks()?;
        Ok(this)
    }

    pub fn state(&self) -> &FleetState {
        &self.sim.state
    }

    pub fn events(&self) -> &[Event] {
        &self.sim.events
    }

    pub fn is_done(&self) -> bool {
        let st = &self.sim.state;
        (0..st.robots.len()).all(|j| st.waypoint(j, &self.sim.scn.targets).is_none())
    }

    /// Motion for `dt`, visit bookkeeping, then the strategy's communication round.
    pub fn step(&mut self) -> Result<()> {
        if self.sim.state.time >= self.max_time {
            return Err(Error::NonTermination(self.sim.state.time));
        }
        let dt = self.sim.cfg.dt;
        let scn = self.sim.scn;
        let targets = &scn.targets;
        let now = self.sim.state.time + dt;
        let mut arrivals = Vec::new();
        for j in 0..self.sim.state.robots.len() {
            let Some(goal) = self.sim.state.waypoint(j, targets) else {
                continue;
            };
            let robot = &mut self.sim.state.robots[j];
            let (next, arrived) = robot.position.advance_toward(goal, dt);
            self.sim.state.travelled[j] += robot.position.distance(&next);
            robot.position = next;
            if arrived {
                arrivals.push(j);
            }
        }
        self.sim.state.time = now;
        for j in arrivals {
            if self.sim.state.rendezvous[j].take().is_some() {
                continue;
            }
            let robot = &mut self.sim.state.robots[j];
            let target = robot.route.remove(0);
            robot.status[target] = true;
            self.sim.state.visited[target] = true;
            self.sim.log(EventKind::Visit, vec![j], Some(target), "");
        }
        self.planner.communicate(&mut self.sim)?;
        self.step_index += 1;
        self.sim.diag.steps = self.step_index;
        self.update_motion_flags(false);
        if let (Some(stride), Some(tr)) = (self.sim.cfg.trajectory_stride, self.trajectories.as_mut()) {
            if self.step_index.is_multiple_of(stride as u64) {
                for (t, r) in tr.iter_mut().zip(&self.sim.state.robots) {
                    t.push(r.position);
                }
            }
        }
        self.step_checks()
    }

    pub fn run(mut self) -> Result<SimResult> {
        while !self.is_done() {
            self.step()?;
        }
        self.finish()
    }

    fn update_motion_flags(&mut self, initial: bool) {
        for j in 0..self.sim.state.robots.len() {
            let now_moving = self.sim.state.waypoint(j, &self.sim.scn.targets).is_some();
            let was = self.sim.state.moving[j];
            if initial {
                if !now_moving {
                    self.sim.log(EventKind::Stop, vec![j], None, "idle at start");
                }
            } else if was && !now_moving {
                self.sim.log(EventKind::Stop, vec![j], None, "");
            } else if !was && now_moving {
                self.sim.log(EventKind::Restart, vec![j], None, "");
            }
            self.sim.state.moving[j] = now_moving;
        }
    }

    fn step_checks(&mut self) -> Result<()> {
        if !self.sim.full_checks() {
            return Ok(());
        }
        if let Some((j, i)) = self.sim.state.unsound_belief() {
            return Err(self.sim.violation(format!("robot {j} believes unvisited target {i} is visited")));
        }
        for (j, r) in self.sim.state.robots.iter().enumerate() {
            if let Some(i) = (0..r.status.len()).find(|&i| self.prev_status[j][i] && !r.status[i]) {
                return Err(self.sim.violation(format!("robot {j} forgot that target {i} was visited")));
            }
            self.prev_status[j].clone_from(&r.status);
        }
        let covered_phase = match &self.planner {
            AnyPlanner::Ststc(_) => true,
            AnyPlanner::Rba(p) => p.assigned(),
            AnyPlanner::Greedy(_) => false,
        };
        if covered_phase {
            self.sim.check_coverage()?;
        }
        Ok(())
    }

    fn finish(self) -> Result<SimResult> {
        let Simulation {
            sim,
            f_mst,
            mut trajectories,
            ..
        } = self;
        let per_robot_time = sim.state.travelled.clone();
        let total_f: f64 = per_robot_time.iter().sum();
        let visits: Vec<VisitRecord> = sim
            .events
            .iter()
            .filter(|e| e.kind == EventKind::Visit)
            .map(|e| VisitRecord {
                target_id: e.target.expect("visit events name a target"),
                robot_id: e.robots[0],
                time: e.t,
            })
            .collect();
        if let Some(tr) = trajectories.as_mut() {
            for (t, r) in tr.iter_mut().zip(&sim.state.robots) {
                if t.last() != Some(&r.position) {
                    t.push(r.position);
                }
            }
        }
        if sim.cfg.assert_level >= AssertLevel::Cheap {
            if !sim.state.all_visited() {
                let missing: Vec<usize> = (0..sim.scn.n()).filter(|&i| !sim.state.visited[i]).collect();
                return Err(sim.violation(format!("run ended with targets {missing:?} unvisited")));
            }
            if total_f < f_mst * (1.0 - 1e-9) - 1e-9 {
                return Err(sim.violation(format!("total time {total_f} is below the MST bound {f_mst}")));
            }
        }
        Ok(SimResult {
            strategy: sim.cfg.strategy,
            comm_range: sim.scn.comm_range,
            per_robot_time,
            total_f,
            end_time: sim.state.time,
            visits,
            events: sim.events,
            trajectories,
            diagnostics: sim.diag,
        })
    }
}

pub fn run(scn: &Scenario, cfg: &SimConfig) -> Result<SimResult> {
    Simulation::new(scn, cfg)?.run()
}

pub fn run_rba(scn: &Scenario, cfg: &SimConfig) -> Result<SimResult> {
    run(scn, &cfg.with_strategy(Strategy::Rba))
}

pub fn run_ststc(scn: &Scenario, cfg: &SimConfig) -> Result<SimResult> {
    run(scn, &cfg.with_strategy(Strategy::Ststc))
}

pub fn run_greedy(scn: &Scenario, cfg: &SimConfig) -> Result<SimResult> {
    run(scn, &cfg.with_strategy(Strategy::Greedy))
}
