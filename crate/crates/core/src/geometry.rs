//! Planar points and the Euclidean metric.

use serde::{Deserialize, Serialize};
use std::ops::{Add, Sub};

use crate::error::{Error, Result};

/// A position in the workspace, in meters.
///
/// Serialized as a two-element array `[x, y]`.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
#[serde(from = "[f64; 2]", into = "[f64; 2]")]
pub struct Point2D {
    pub x: f64,
    pub y: f64,
}

impl Point2D {
    pub const fn new(x: f64, y: f64) -> Self {
        Self { x, y }
    }

    pub fn distance(&self, other: &Point2D) -> f64 {
        distance(*self, *other)
    }

    pub fn is_finite(&self) -> bool {
        self.x.is_finite() && self.y.is_finite()
    }

    /// Moves at most `step` meters toward `goal`. Returns the new position and
    /// whether the goal was reached (in which case the position is exactly `goal`).
    pub fn advance_toward(&self, goal: Point2D, step: f64) -> (Point2D, bool) {
        let d = self.distance(&goal);
        if d <= step {
            (goal, true)
        } else {
            let k = step / d;
            (
                Point2D::new(self.x + (goal.x - self.x) * k, self.y + (goal.y - self.y) * k),
                false,
            )
        }
    }
}

impl From<[f64; 2]> for Point2D {
    fn from([x, y]: [f64; 2]) -> Self {
        Self { x, y }
    }
}

impl From<Point2D> for [f64; 2] {
    fn from(p: Point2D) -> Self {
        [p.x, p.y]
    }
}

impl Add for Point2D {
    type Output = Point2D;
    fn add(self, rhs: Point2D) -> Point2D {
        Point2D::new(self.x + rhs.x, self.y + rhs.y)
    }
}

impl Sub for Point2D {
    type Output = Point2D;
    fn sub(self, rhs: Point2D) -> Point2D {
        Point2D::new(self.x - rhs.x, self.y - rhs.y)
    }
}

pub fn distance(a: Point2D, b: Point2D) -> f64 {
    (a.x - b.x).hypot(a.y - b.y)
}

/// Component-wise mean of the given points.
pub fn center_of_gravity(points: &[Point2D]) -> Result<Point2D> {
    if points.is_empty() {
        return Err(Error::NoTargets);
    }
    let n = points.len() as f64;
    let (sx, sy) = points
        .iter()
        .fold((0.0, 0.0), |(sx, sy), p| (sx + p.x, sy + p.y));
    Ok(Point2D::new(sx / n, sy / n))
}
