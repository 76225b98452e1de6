//! Single shared tour with cooperation among connected robots.
//!
//! Every robot starts on the best open route around one Christofides tour of
//! all targets. When a connected group forms or changes membership, its
//! members merge what they know about visited targets, prune their routes,
//! and a leader re-divides the group's cooperative target set; the new plan
//! is adopted only if it strictly lowers the group's summed remaining time.

use crate::cmga::{self, AssignmentProblem};
use crate::connectivity::{ComponentPartition, ConnectivityGraph};
use crate::error::Result;
use crate::geometry::Point2D;
use crate::tours::{christofides, initial_route_on_tour, DistanceMatrix};

use super::{EventKind, Planner, RobotInfoTuple, Sim};

/// Slack for the "strictly lower" adoption test and the nonincreasing check.
const TIME_EPS: f64 = 1e-9;

pub(super) struct StstcPlanner {
    previous: ComponentPartition,
}

impl StstcPlanner {
    pub(super) fn new(sim: &mut Sim<'_>) -> Result<Self> {
        let targets = &sim.scn.targets;
        let tour = christofides(&DistanceMatrix::from_points(targets))?;
        for robot in sim.state.robots.iter_mut() {
            robot.route = initial_route_on_tour(&tour, robot.position, targets)?.targets;
        }
        let m = sim.scn.m();
        Ok(Self {
            previous: ComponentPartition {
                sets: (0..m).map(|j| vec![j]).collect(),
            },
        })
    }
}

/// The targets a connected group divides among its members.
///
/// `never_met[k]` marks members that had never been connected to another
/// robot before this meeting. Among those, `p` is the one with the least
/// remaining time (lowest id on ties). If no member has met anyone before,
/// or the experienced members' summed remaining time is at least `p`'s, the
/// set is `p`'s route; otherwise it is the union of the experienced members'
/// routes in member order.
pub fn cooperative_targets(
    members: &[usize],
    robots: &[RobotInfoTuple],
    never_met: &[bool],
    targets: &[Point2D],
) -> Vec<usize> {
    let remaining = |j: usize| robots[j].remaining_time(targets);
    let (fresh, experienced): (Vec<usize>, Vec<usize>) =
        members.iter().partition(|&&j| never_met[j]);
    let p = fresh
        .iter()
        .map(|&j| (j, remaining(j)))
        .min_by(|a, b| a.1.total_cmp(&b.1).then(a.0.cmp(&b.0)));
    let t_p = p.map_or(f64::INFINITY, |(_, t)| t);
    let experienced_sum: f64 = experienced.iter().map(|&k| remaining(k)).sum();
    match p {
        Some((p, _)) if experienced.is_empty() || experienced_sum >= t_p => robots[p].route.clone(),
        _ => {
            let mut seen = vec![false; targets.len()];
            experienced
                .iter()
                .flat_map(|&k| robots[k].route.iter().copied())
                .filter(|&i| !std::mem::replace(&mut seen[i], true))
                .collect()
        }
    }
}

impl Planner for StstcPlanner {
    fn communicate(&mut self, sim: &mut Sim<'_>) -> Result<()> {
        let scn = sim.scn;
        let targets = &scn.targets;
        let positions = sim.state.positions();
        let graph = if sim.cfg.exchange_while_stopped {
            ConnectivityGraph::build(&positions, scn.comm_range)
        } else {
            let moving = sim.state.moving.clone();
            ConnectivityGraph::build_masked(&positions, scn.comm_range, |j| moving[j])
        };
        let parts = graph.components();
        for members in parts.sets.iter().filter(|s| s.len() > 1) {
            let unchanged = self.previous.sets.contains(members);
            self.update_group(sim, &graph, members, unchanged, targets)?;
        }
        self.previous = parts;
        Ok(())
    }
}

impl StstcPlanner {
    fn update_group(
        &mut self,
        sim: &mut Sim<'_>,
        graph: &ConnectivityGraph,
        members: &[usize],
        unchanged: bool,
        targets: &[Point2D],
    ) -> Result<()> {
        let group_time =
            |sim: &Sim<'_>| -> f64 { members.iter().map(|&j| sim.state.robots[j].remaining_time(targets)).sum() };
        let before = group_time(sim);
        sim.diag.update_instants += 1;

        // merge visited-status flags and drop known-visited targets
        let mut merged = vec![false; targets.len()];
        for &j in members {
            for (m, &s) in merged.iter_mut().zip(&sim.state.robots[j].status) {
                *m |= s;
            }
        }
        for &j in members {
            let robot = &mut sim.state.robots[j];
            robot.status.clone_from(&merged);
            robot.prune_route();
        }

        if !unchanged {
            let never_met: Vec<bool> = sim.state.robots.iter().map(RobotInfoTuple::never_met).collect();
            for &j in members {
                for &k in members {
                    sim.state.robots[j].met[k] = true;
                }
            }
            sim.log(EventKind::Meeting, members.to_vec(), None, "");
            self.reassign(sim, graph, members, &never_met, targets)?;
        }

        if sim.full_checks() {
            sim.diag.nonincreasing_checks += 1;
            let after = group_time(sim);
            if after > before + TIME_EPS * (1.0 + before) {
                return Err(sim.violation(format!(
                    "group {members:?} planned time rose from {before} to {after}"
                )));
            }
        }
        Ok(())
    }

    fn reassign(
        &mut self,
        sim: &mut Sim<'_>,
        graph: &ConnectivityGraph,
        members: &[usize],
        never_met: &[bool],
        targets: &[Point2D],
    ) -> Result<()> {
        let pool = cooperative_targets(members, &sim.state.robots, never_met, targets);
        let incumbent: Vec<Vec<usize>> = members.iter().map(|&j| sim.state.robots[j].route.clone()).collect();
        let incumbent_cost: f64 = members.iter().map(|&j| sim.state.robots[j].remaining_time(targets)).sum();
        let leader = sim.elect_leader(members, graph);

        let (routes, cost) = if pool.is_empty() {
            (vec![Vec::new(); members.len()], 0.0)
        } else {
            let starts = members.iter().map(|&j| sim.state.robots[j].position).collect();
            let problem = AssignmentProblem::new(starts, pool.clone(), targets)?;
            let mut ga = sim.cfg.ga.clone();
            ga.seed = sim.next_solver_seed();
            sim.diag.solver_calls += 1;
            let a = cmga::solve_seeded(&problem, &ga, Some(&incumbent))?;
            (a.routes, a.total_cost)
        };

        let adopt = cost < incumbent_cost - TIME_EPS * (1.0 + incumbent_cost);
        if adopt {
            sim.diag.reassignments += 1;
            for (&j, route) in members.iter().zip(routes) {
                sim.state.robots[j].route = route;
            }
        }
        let detail = format!(
            "leader {leader}; {} cooperative targets; planned {incumbent_cost:.3} -> {cost:.3}; {}",
            pool.len(),
            if adopt { "adopted" } else { "kept incumbent" }
        );
        sim.log(EventKind::Reassignment, members.to_vec(), None, detail);
        if sim.full_checks() {
            sim.check_coverage()?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn robot(id: usize, pos: Point2D, route: Vec<usize>, m: usize, n: usize) -> RobotInfoTuple {
        let mut r = RobotInfoTuple::new(id, pos, m, n);
        r.route = route;
        r
    }

    #[test]
    fn experienced_group_cheaper_takes_union() {
        // a never met anyone and has 300 s left; b has met others and 150 s left
        let targets = vec![Point2D::new(300.0, 0.0), Point2D::new(0.0, 150.0)];
        let robots = vec![
            robot(0, Point2D::new(0.0, 0.0), vec![0], 2, 2),
            robot(1, Point2D::new(0.0, 0.0), vec![1], 2, 2),
        ];
        let t = cooperative_targets(&[0, 1], &robots, &[true, false], &targets);
        assert_eq!(t, vec![1]);
    }

    #[test]
    fn only_fresh_members_take_cheapest_route() {
        let targets = vec![Point2D::new(300.0, 0.0), Point2D::new(0.0, 150.0)];
        let robots = vec![
            robot(0, Point2D::new(0.0, 0.0), vec![0, 1], 2, 2),
            robot(1, Point2D::new(0.0, 0.0), vec![1, 0], 2, 2),
        ];
        // robot 1's route is shorter (150 + 335.4 < 300 + 335.4)
        let t = cooperative_targets(&[0, 1], &robots, &[true, true], &targets);
        assert_eq!(t, vec![1, 0]);
    }

    #[test]
    fn experienced_only_group_takes_union() {
        let targets = vec![Point2D::new(1.0, 0.0), Point2D::new(2.0, 0.0), Point2D::new(3.0, 0.0)];
        let robots = vec![
            robot(0, Point2D::new(0.0, 0.0), vec![0, 1], 2, 3),
            robot(1, Point2D::new(0.0, 0.0), vec![1, 2], 2, 3),
        ];
        let t = cooperative_targets(&[0, 1], &robots, &[false, false], &targets);
        assert_eq!(t, vec![0, 1, 2]);
    }

    #[test]
    fn experienced_costlier_falls_back_to_fresh_route() {
        let targets = vec![Point2D::new(10.0, 0.0), Point2D::new(500.0, 0.0)];
        let robots = vec![
            robot(0, Point2D::new(0.0, 0.0), vec![0], 2, 2),
            robot(1, Point2D::new(0.0, 0.0), vec![1], 2, 2),
        ];
        let t = cooperative_targets(&[0, 1], &robots, &[true, false], &targets);
        assert_eq!(t, vec![0]);
    }
}
