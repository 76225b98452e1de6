//! Scenario definition, generation and the JSON file format.

use rand::Rng;
use serde::{Deserialize, Serialize};
use std::path::Path;

use crate::error::{Error, Result};
use crate::geometry::Point2D;
use crate::rng;

/// A square workspace `[0, edge_length]²` with targets, robot start
/// positions and a communication range.
///
/// On disk: `{edge_length, comm_range, seed, targets: [[x,y]..], robots: [[x,y]..]}`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Scenario {
    pub edge_length: f64,
    pub comm_range: f64,
    pub seed: u64,
    pub targets: Vec<Point2D>,
    #[serde(rename = "robots")]
    pub robot_starts: Vec<Point2D>,
}

impl Scenario {
    pub fn n(&self) -> usize {
        self.targets.len()
    }

    pub fn m(&self) -> usize {
        self.robot_starts.len()
    }

    pub fn with_range(&self, comm_range: f64) -> Scenario {
        Scenario {
            comm_range,
            ..self.clone()
        }
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |msg: String| Err(Error::InvalidScenario(msg));
        if !(self.edge_length.is_finite() && self.edge_length > 0.0) {
            return bad(format!("edge_length must be positive, got {}", self.edge_length));
        }
        if !(self.comm_range.is_finite() && self.comm_range >= 0.0) {
            return bad(format!("comm_range must be >= 0, got {}", self.comm_range));
        }
        if self.targets.is_empty() {
            return bad("at least one target is required".into());
        }
        if self.robot_starts.is_empty() {
            return bad("at least one robot is required".into());
        }
        let inside = |p: &Point2D| {
            p.is_finite()
                && (0.0..=self.edge_length).contains(&p.x)
                && (0.0..=self.edge_length).contains(&p.y)
        };
        for (kind, pts) in [("target", &self.targets), ("robot", &self.robot_starts)] {
            if let Some((i, p)) = pts.iter().enumerate().find(|(_, p)| !inside(p)) {
                return bad(format!("{kind} {i} at ({}, {}) lies outside the workspace", p.x, p.y));
            }
        }
        Ok(())
    }

    pub fn from_json(text: &str) -> Result<Scenario> {
        let scn: Scenario = serde_json::from_str(text)?;
        scn.validate()?;
        Ok(scn)
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Scenario> {
        Self::from_json(&std::fs::read_to_string(path)?)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("scenario serializes")
    }
}

/// Draws `n` targets then `m` robot starts uniformly over `[0, edge_length]²`.
///
/// Point placement depends only on `(n, m, edge_length, seed)`, so the same
/// seed at different ranges yields the same layout.
pub fn generate_scenario(
    n: usize,
    m: usize,
    edge_length: f64,
    comm_range: f64,
    seed: u64,
) -> Result<Scenario> {
    if n == 0 || m == 0 {
        return Err(Error::InvalidArgument(format!(
            "need n >= 1 and m >= 1, got n = {n}, m = {m}"
        )));
    }
    if !(edge_length.is_finite() && edge_length > 0.0) {
        return Err(Error::InvalidArgument(format!(
            "edge length must be positive, got {edge_length}"
        )));
    }
    if !(comm_range.is_finite() && comm_range >= 0.0) {
        return Err(Error::InvalidArgument(format!(
            "communication range must be >= 0, got {comm_range}"
        )));
    }
    let mut rng = rng::stream(seed, rng::STREAM_SCENARIO);
    let mut draw = |count: usize| -> Vec<Point2D> {
        (0..count)
            .map(|_| {
                Point2D::new(
                    rng.random_range(0.0..=edge_length),
                    rng.random_range(0.0..=edge_length),
                )
            })
            .collect()
    };
    let targets = draw(n);
    let robot_starts = draw(m);
    Ok(Scenario {
        edge_length,
        comm_range,
        seed,
        targets,
        robot_starts,
    })
}
