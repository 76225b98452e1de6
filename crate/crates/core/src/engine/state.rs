use serde::Serialize;

use crate::geometry::Point2D;
use crate::tours::route_length;

/// What a robot carries and shares: identity, position, planned route,
/// which robots it has ever been connected to, and which targets it knows
/// are visited.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RobotInfoTuple {
    pub id: usize,
    pub position: Point2D,
    pub route: Vec<usize>,
    pub met: Vec<bool>,
    pub status: Vec<bool>,
}

impl RobotInfoTuple {
    pub fn new(id: usize, position: Point2D, m: usize, n: usize) -> Self {
        let mut met = vec![false; m];
        met[id] = true;
        Self {
            id,
            position,
            route: Vec::new(),
            met,
            status: vec![false; n],
        }
    }

    /// Remaining travel time along the route at unit speed.
    pub fn remaining_time(&self, targets: &[Point2D]) -> f64 {
        route_length(self.position, &self.route, targets).expect("route ids are scenario targets")
    }

    /// Planned completion time measured from the start of the run.
    pub fn planned_time(&self, now: f64, targets: &[Point2D]) -> f64 {
        now + self.remaining_time(targets)
    }

    /// True while the robot has only ever been connected to itself.
    pub fn never_met(&self) -> bool {
        self.met.iter().enumerate().all(|(k, &m)| !m || k == self.id)
    }

    /// Drops targets this robot knows to be visited.
    pub fn prune_route(&mut self) {
        let status = &self.status;
        self.route.retain(|&i| !status[i]);
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FleetState {
    pub time: f64,
    pub robots: Vec<RobotInfoTuple>,
    /// Overrides the route while set (rendezvous phase).
    pub rendezvous: Vec<Option<Point2D>>,
    pub moving: Vec<bool>,
    /// Ground truth, independent of any robot's beliefs.
    pub visited: Vec<bool>,
    pub travelled: Vec<f64>,
}

impl FleetState {
    pub fn new(targets: usize, starts: &[Point2D]) -> Self {
        let m = starts.len();
        Self {
            time: 0.0,
            robots: starts
                .iter()
                .enumerate()
                .map(|(j, &p)| RobotInfoTuple::new(j, p, m, targets))
                .collect(),
            rendezvous: vec![None; m],
            moving: vec![false; m],
            visited: vec![false; targets],
            travelled: vec![0.0; m],
        }
    }

    pub fn positions(&self) -> Vec<Point2D> {
        self.robots.iter().map(|r| r.position).collect()
    }

    pub fn waypoint(&self, j: usize, targets: &[Point2D]) -> Option<Point2D> {
        self.rendezvous[j].or_else(|| self.robots[j].route.first().map(|&i| targets[i]))
    }

    pub fn all_visited(&self) -> bool {
        self.visited.iter().all(|&v| v)
    }

    /// Targets not yet visited that appear on no robot's route.
    pub fn uncovered_targets(&self) -> Vec<usize> {
        let mut covered = self.visited.clone();
        for r in &self.robots {
            for &i in &r.route {
                covered[i] = true;
            }
        }
        covered
            .iter()
            .enumerate()
            .filter(|(_, &c)| !c)
            .map(|(i, _)| i)
            .collect()
    }

    /// First `(robot, target)` where a robot believes an unvisited target is visited.
    pub fn unsound_belief(&self) -> Option<(usize, usize)> {
        self.robots.iter().find_map(|r| {
            r.status
                .iter()
                .enumerate()
                .find(|&(i, &s)| s && !self.visited[i])
                .map(|(i, _)| (r.id, i))
        })
    }
}
