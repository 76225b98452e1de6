//! Multi-robot target assignment under a limited communication range.
//!
//! The crate simulates a fleet of unit-speed robots that must visit every
//! target in a square workspace while only exchanging information with
//! robots inside their communication range. Three strategies are provided:
//!
//! - [`Strategy::Rba`]: rendezvous at the targets' center of gravity, then a
//!   single leader divides all targets among the fleet.
//! - [`Strategy::Ststc`]: every robot starts on a shared Christofides tour and
//!   connected subgroups divide a cooperative target set whenever they meet.
//! - [`Strategy::Greedy`]: nearest-target baseline that only communicates on
//!   destination conflicts.
//!
//! The [`harness`] module runs Monte Carlo sweeps over the communication
//! range and reports the quality ratio `f / f_MST`.

pub mod cmga;
pub mod connectivity;
pub mod engine;
pub mod error;
pub mod exec;
pub mod geometry;
pub mod harness;
pub mod rng;
pub mod scenario;
pub mod tours;

pub use cmga::{Assignment, AssignmentProblem, GaConfig};
pub use connectivity::{ComponentPartition, ConnectivityGraph};
pub use engine::{AssertLevel, SimConfig, SimResult, Strategy};
pub use error::{Error, Result};
pub use exec::ExecutionMode;
pub use geometry::Point2D;
pub use scenario::Scenario;
pub use tours::{DistanceMatrix, Route, Tour};
