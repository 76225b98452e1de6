//! Nearest-target baseline.
//!
//! Each robot heads for the nearest target it believes unvisited. Robots only
//! talk when connected robots share a destination: they merge visited flags,
//! the robot nearest the target keeps it (lower id on ties) and the others
//! concede it for good and pick the nearest target nobody else in their
//! group is heading for. A robot stops once every target is either known
//! visited or conceded.

use crate::connectivity::ConnectivityGraph;
use crate::error::Result;
use crate::geometry::{distance, Point2D};

use super::{EventKind, Planner, Sim};

pub(super) struct GreedyPlanner {
    conceded: Vec<Vec<bool>>,
}

impl GreedyPlanner {
    pub(super) fn new(sim: &Sim<'_>) -> Self {
        Self {
            conceded: vec![vec![false; sim.scn.n()]; sim.scn.m()],
        }
    }

    fn nearest(&self, sim: &Sim<'_>, j: usize, exclude: &[usize]) -> Option<usize> {
        let robot = &sim.state.robots[j];
        let targets = &sim.scn.targets;
        (0..targets.len())
            .filter(|&i| !robot.status[i] && !self.conceded[j][i] && !exclude.contains(&i))
            .min_by(|&a, &b| {
                distance(robot.position, targets[a])
                    .total_cmp(&distance(robot.position, targets[b]))
                    .then(a.cmp(&b))
            })
    }
}

impl Planner for GreedyPlanner {
    fn communicate(&mut self, sim: &mut Sim<'_>) -> Result<()> {
        let m = sim.scn.m();
        for j in 0..m {
            if sim.state.robots[j].route.is_empty() {
                sim.state.robots[j].route = self.nearest(sim, j, &[]).into_iter().collect();
            }
        }

        let graph = ConnectivityGraph::build(&sim.state.positions(), sim.scn.comm_range);
        for members in graph.components().sets.into_iter().filter(|s| s.len() > 1) {
            let dest = |sim: &Sim<'_>, j: usize| sim.state.robots[j].route.first().copied();
            let mut contested: Vec<usize> = members.iter().filter_map(|&j| dest(sim, j)).collect();
            contested.sort_unstable();
            contested.dedup();
            for target in contested {
                let rivals: Vec<usize> = members.iter().copied().filter(|&j| dest(sim, j) == Some(target)).collect();
                if rivals.len() < 2 {
                    continue;
                }
                self.resolve(sim, &members, &rivals, target);
            }
        }
        Ok(())
    }
}

impl GreedyPlanner {
    fn resolve(&mut self, sim: &mut Sim<'_>, members: &[usize], rivals: &[usize], target: usize) {
        let mut merged = vec![false; sim.scn.n()];
        for &j in rivals {
            for (m, &s) in merged.iter_mut().zip(&sim.state.robots[j].status) {
                *m |= s;
            }
        }
        for &j in rivals {
            sim.state.robots[j].status.clone_from(&merged);
        }
        sim.log(EventKind::Meeting, rivals.to_vec(), Some(target), "destination conflict");

        let goal: Point2D = sim.scn.targets[target];
        let winner = if merged[target] {
            None
        } else {
            rivals.iter().copied().min_by(|&a, &b| {
                distance(sim.state.robots[a].position, goal)
                    .total_cmp(&distance(sim.state.robots[b].position, goal))
                    .then(a.cmp(&b))
            })
        };
        for &j in rivals {
            if Some(j) == winner {
                continue;
            }
            if winner.is_some() {
                self.conceded[j][target] = true;
            }
            let claimed: Vec<usize> = members
                .iter()
                .filter(|&&k| k != j)
                .filter_map(|&k| sim.state.robots[k].route.first().copied())
                .collect();
            let pick = self.nearest(sim, j, &claimed).or_else(|| self.nearest(sim, j, &[]));
            sim.state.robots[j].route = pick.into_iter().collect();
        }
        let detail = match winner {
            Some(w) => format!("robot {w} keeps target {target}"),
            None => format!("target {target} already visited"),
        };
        sim.log(EventKind::Reassignment, rivals.to_vec(), Some(target), detail);
    }
}
