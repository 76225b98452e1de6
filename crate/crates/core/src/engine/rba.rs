//! Rendezvous, then one centralized assignment.
//!
//! Until the whole fleet is connected every robot heads for the targets'
//! center of gravity and waits there. The first instant the fleet is
//! connected, the robot with the most 1-hop neighbors divides all targets
//! among the fleet from the robots' current positions.

use crate::cmga::{self, AssignmentProblem};
use crate::connectivity::ConnectivityGraph;
use crate::error::Result;
use crate::geometry::{center_of_gravity, Point2D};

use super::{EventKind, Planner, Sim};

pub(super) struct RbaPlanner {
    rendezvous: Point2D,
    assigned: bool,
}

impl RbaPlanner {
    pub(super) fn new(sim: &Sim<'_>) -> Result<Self> {
        Ok(Self {
            rendezvous: center_of_gravity(&sim.scn.targets)?,
            assigned: false,
        })
    }

    pub(super) fn assigned(&self) -> bool {
        self.assigned
    }
}

impl Planner for RbaPlanner {
    fn communicate(&mut self, sim: &mut Sim<'_>) -> Result<()> {
        if self.assigned {
            return Ok(());
        }
        let scn = sim.scn;
        let graph = ConnectivityGraph::build(&sim.state.positions(), scn.comm_range);
        if !graph.is_connected() {
            if sim.state.time == 0.0 {
                for j in 0..scn.m() {
                    sim.state.rendezvous[j] = Some(self.rendezvous);
                }
            }
            return Ok(());
        }

        self.assigned = true;
        sim.diag.update_instants += 1;
        let all: Vec<usize> = (0..scn.m()).collect();
        sim.state.rendezvous.iter_mut().for_each(|r| *r = None);
        for robot in sim.state.robots.iter_mut() {
            robot.met.iter_mut().for_each(|m| *m = true);
        }
        let leader = sim.elect_leader(&all, &graph);
        sim.log(EventKind::Meeting, all.clone(), None, format!("fleet connected; leader {leader}"));

        let problem = AssignmentProblem::new(sim.state.positions(), (0..scn.n()).collect(), &scn.targets)?;
        let mut ga = sim.cfg.ga.clone();
        ga.seed = sim.next_solver_seed();
        sim.diag.solver_calls += 1;
        let assignment = cmga::solve(&problem, &ga)?;
        sim.diag.reassignments += 1;
        for (robot, route) in sim.state.robots.iter_mut().zip(assignment.routes) {
            robot.route = route;
        }
        sim.log(
            EventKind::Reassignment,
            all,
            None,
            format!("leader {leader}; planned {:.3}", assignment.total_cost),
        );
        if sim.full_checks() {
            sim.check_coverage()?;
        }
        Ok(())
    }
}
