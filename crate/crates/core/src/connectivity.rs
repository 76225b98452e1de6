//! Communication graph over robot positions.
//!
//! Two robots are linked when their distance is at most the communication
//! range (boundary inclusive). Connectivity is decided by graph search; the
//! Laplacian spectrum gives an independent check through λ₂.

use std::collections::VecDeque;
use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::geometry::{distance, Point2D};

/// λ₂ above this value counts as connected.
pub const LAMBDA_TOL: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq)]
pub struct ConnectivityGraph {
    m: usize,
    adjacency: Vec<bool>,
}

/// Disjoint robot-id sets covering the fleet, each sorted ascending and
/// ordered by their smallest member.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ComponentPartition {
    pub sets: Vec<Vec<usize>>,
}

impl ComponentPartition {
    /// Index of the set that contains each robot.
    pub fn labels(&self) -> Vec<usize> {
        let m = self.sets.iter().map(Vec::len).sum();
        let mut labels = vec![0; m];
        for (c, set) in self.sets.iter().enumerate() {
            for &j in set {
                labels[j] = c;
            }
        }
        labels
    }

    pub fn len(&self) -> usize {
        self.sets.len()
    }

    pub fn is_empty(&self) -> bool {
        self.sets.is_empty()
    }
}

pub fn build_graph(positions: &[Point2D], range: f64) -> ConnectivityGraph {
    ConnectivityGraph::build(positions, range)
}

impl ConnectivityGraph {
    pub fn build(positions: &[Point2D], range: f64) -> Self {
        Self::build_masked(positions, range, |_| true)
    }

    /// Like [`build`](Self::build), but robots with `active(j) == false` get no links.
    pub fn build_masked(positions: &[Point2D], range: f64, active: impl Fn(usize) -> bool) -> Self {
        let m = positions.len();
        let mut adjacency = vec![false; m * m];
        for j in 0..m {
            if !active(j) {
                continue;
            }
            for k in (j + 1)..m {
                if active(k) && distance(positions[j], positions[k]) <= range {
                    adjacency[j * m + k] = true;
                    adjacency[k * m + j] = true;
                }
            }
        }
        Self { m, adjacency }
    }

    pub fn len(&self) -> usize {
        self.m
    }

    pub fn is_empty(&self) -> bool {
        self.m == 0
    }

    pub fn linked(&self, j: usize, k: usize) -> bool {
        self.adjacency[j * self.m + k]
    }

    pub fn degree(&self, j: usize) -> usize {
        (0..self.m).filter(|&k| self.linked(j, k)).count()
    }

    pub fn neighbors(&self, j: usize) -> impl Iterator<Item = usize> + '_ {
        (0..self.m).filter(move |&k| self.linked(j, k))
    }

    /// Dense Laplacian, row-major: degree on the diagonal, `-1` per link.
    pub fn laplacian(&self) -> Vec<Vec<f64>> {
        (0..self.m)
            .map(|j| {
                (0..self.m)
                    .map(|k| {
                        if j == k {
                            self.degree(j) as f64
                        } else if self.linked(j, k) {
                            -1.0
                        } else {
                            0.0
                        }
                    })
                    .collect()
            })
            .collect()
    }

    /// Laplacian eigenvalues in ascending order.
    pub fn laplacian_spectrum(&self) -> Vec<f64> {
        symmetric_eigenvalues(self.laplacian())
    }

    pub fn algebraic_connectivity(&self) -> Result<f64> {
        if self.m < 2 {
            return Err(Error::Undefined);
        }
        Ok(self.laplacian_spectrum()[1])
    }

    pub fn components(&self) -> ComponentPartition {
        let mut seen = vec![false; self.m];
        let mut sets = Vec::new();
        for root in 0..self.m {
            if seen[root] {
                continue;
            }
            seen[root] = true;
            let mut set = vec![root];
            let mut queue = VecDeque::from([root]);
            while let Some(j) = queue.pop_front() {
                for k in self.neighbors(j) {
                    if !seen[k] {
                        seen[k] = true;
                        set.push(k);
                        queue.push_back(k);
                    }
                }
            }
            set.sort_unstable();
            sets.push(set);
        }
        ComponentPartition { sets }
    }

    pub fn is_connected(&self) -> bool {
        self.components().len() <= 1
    }
}

pub fn algebraic_connectivity(g: &ConnectivityGraph) -> Result<f64> {
    g.algebraic_connectivity()
}

pub fn components(g: &ConnectivityGraph) -> ComponentPartition {
    g.components()
}

pub fn is_connected(g: &ConnectivityGraph) -> bool {
    g.is_connected()
}

/// Eigenvalues of a real symmetric matrix by cyclic Jacobi rotations, ascending.
#[allow(clippy::needless_range_loop)]
pub fn symmetric_eigenvalues(mut a: Vec<Vec<f64>>) -> Vec<f64> {
    let n = a.len();
    const MAX_SWEEPS: usize = 100;
    for _ in 0..MAX_SWEEPS {
        let off: f64 = (0..n)
            .flat_map(|i| ((i + 1)..n).map(move |j| (i, j)))
            .map(|(i, j)| a[i][j] * a[i][j])
            .sum();
        if off < 1e-30 {
            break;
        }
        for p in 0..n {
            for q in (p + 1)..n {
                let apq = a[p][q];
                if apq.abs() < 1e-300 {
                    continue;
                }
                let theta = (a[q][q] - a[p][p]) / (2.0 * apq);
                let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
                let t = if theta == 0.0 { 1.0 } else { t };
                let c = 1.0 / (t * t + 1.0).sqrt();
                let s = t * c;
                for k in 0..n {
                    let akp = a[k][p];
                    let akq = a[k][q];
                    a[k][p] = c * akp - s * akq;
                    a[k][q] = s * akp + c * akq;
                }
                for k in 0..n {
                    let apk = a[p][k];
                    let aqk = a[q][k];
                    a[p][k] = c * apk - s * aqk;
                    a[q][k] = s * apk + c * aqk;
                }
            }
        }
    }
    let mut ev: Vec<f64> = (0..n).map(|i| a[i][i]).collect();
    ev.sort_by(f64::total_cmp);
    ev
}

/// Range at which `m` uniform robots in a square of side `edge_length` are
/// connected with asymptotic probability `exp(-exp(-epsilon))`:
/// `edge_length * sqrt((ln m + epsilon) / (m π))`.
pub fn critical_radius(m: usize, epsilon: f64, edge_length: f64) -> Result<f64> {
    if m < 2 {
        return Err(Error::InvalidArgument(format!("critical radius needs m >= 2, got {m}")));
    }
    if !epsilon.is_finite() {
        return Err(Error::InvalidArgument("epsilon must be finite".into()));
    }
    let mf = m as f64;
    let arg = (mf.ln() + epsilon) / (mf * PI);
    if arg < 0.0 {
        return Err(Error::InvalidArgument(format!(
            "epsilon {epsilon} too negative for m = {m}"
        )));
    }
    Ok(edge_length * arg.sqrt())
}

/// Inverse of the connection probability law: `-ln(-ln p)`.
pub fn epsilon_for_probability(p: f64) -> Result<f64> {
    if !(p > 0.0 && p < 1.0) {
        return Err(Error::InvalidArgument(format!("probability must lie in (0, 1), got {p}")));
    }
    Ok(-(-p.ln()).ln())
}
