//! Distance matrices, spanning-tree bounds, tours and open routes.

mod christofides;
mod matching;
mod oracle;

pub use christofides::christofides;
pub use matching::min_weight_perfect_matching;
pub use oracle::{brute_force_tsp, TSP_ORACLE_MAX};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::{distance, Point2D};
use crate::scenario::Scenario;

/// Square symmetric matrix of distances in meters.
#[derive(Debug, Clone, PartialEq)]
pub struct DistanceMatrix {
    n: usize,
    data: Vec<f64>,
}

impl DistanceMatrix {
    pub fn from_points(points: &[Point2D]) -> Self {
        Self::from_fn(points.len(), |i, j| distance(points[i], points[j]))
    }

    /// Builds a matrix from `weight(i, j)` evaluated for `i < j`; the diagonal is zero.
    pub fn from_fn(n: usize, weight: impl Fn(usize, usize) -> f64) -> Self {
        let mut data = vec![0.0; n * n];
        for i in 0..n {
            for j in (i + 1)..n {
                let w = weight(i, j);
                data[i * n + j] = w;
                data[j * n + i] = w;
            }
        }
        Self { n, data }
    }

    /// Nodes `0..n` are targets and `n..n+m` robots. Robot-robot edges weigh 0.
    pub fn with_robot_hub(targets: &[Point2D], robots: &[Point2D]) -> Self {
        let n = targets.len();
        let all: Vec<Point2D> = targets.iter().chain(robots).copied().collect();
        Self::from_fn(all.len(), |i, j| {
            if i >= n && j >= n {
                0.0
            } else {
                distance(all[i], all[j])
            }
        })
    }

    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.data[i * self.n + j]
    }

    /// Checks `d(i,k) <= d(i,j) + d(j,k)` for every triple, with a small
    /// relative slack for rounding.
    pub fn check_metric(&self) -> Result<()> {
        for i in 0..self.n {
            for j in 0..self.n {
                for k in 0..self.n {
                    let lhs = self.get(i, k);
                    let rhs = self.get(i, j) + self.get(j, k);
                    if lhs > rhs + 1e-9 * (1.0 + rhs) {
                        return Err(Error::NonMetric(i, j, k));
                    }
                }
            }
        }
        Ok(())
    }

    /// Length of the closed cycle through `order`.
    pub fn cycle_length(&self, order: &[usize]) -> f64 {
        match order.len() {
            0 | 1 => 0.0,
            len => (0..len).map(|i| self.get(order[i], order[(i + 1) % len])).sum(),
        }
    }

    /// Length of the open path through `order`.
    pub fn path_length(&self, order: &[usize]) -> f64 {
        order.windows(2).map(|w| self.get(w[0], w[1])).sum()
    }
}

/// A closed tour; `order` lists node ids and the last connects back to the first.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Tour {
    pub order: Vec<usize>,
    pub length: f64,
}

impl Tour {
    pub fn new(order: Vec<usize>, dm: &DistanceMatrix) -> Self {
        let length = dm.cycle_length(&order);
        Self { order, length }
    }

    pub fn len(&self) -> usize {
        self.order.len()
    }

    pub fn is_empty(&self) -> bool {
        self.order.is_empty()
    }
}

/// An open path from a robot's position through targets in order.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Route {
    pub start: Point2D,
    pub targets: Vec<usize>,
    pub length: f64,
}

/// Prim's algorithm on a dense matrix, returning the tree as `(parent, child)`
/// edges. Among equal keys the lowest node index is attached first.
pub fn mst_edges(dm: &DistanceMatrix) -> Vec<(usize, usize)> {
    let n = dm.len();
    if n == 0 {
        return Vec::new();
    }
    let mut in_tree = vec![false; n];
    let mut key = vec![f64::INFINITY; n];
    let mut parent = vec![usize::MAX; n];
    key[0] = 0.0;
    let mut edges = Vec::with_capacity(n - 1);
    for _ in 0..n {
        let u = (0..n)
            .filter(|&v| !in_tree[v])
            .min_by(|&a, &b| key[a].total_cmp(&key[b]).then(a.cmp(&b)))
            .expect("a node remains");
        in_tree[u] = true;
        if parent[u] != usize::MAX {
            edges.push((parent[u], u));
        }
        for v in 0..n {
            if !in_tree[v] && dm.get(u, v) < key[v] {
                key[v] = dm.get(u, v);
                parent[v] = u;
            }
        }
    }
    edges
}

pub fn mst_weight(dm: &DistanceMatrix) -> f64 {
    mst_edges(dm).iter().map(|&(u, v)| dm.get(u, v)).sum()
}

/// Spanning-tree lower bound on total travel: MST over targets and robot
/// starts with zero-weight robot-robot edges.
pub fn f_mst_bound(scn: &Scenario) -> f64 {
    mst_weight(&DistanceMatrix::with_robot_hub(&scn.targets, &scn.robot_starts))
}

/// Start-to-first plus consecutive hops over `targets`; zero for an empty route.
pub fn route_length(start: Point2D, route: &[usize], targets: &[Point2D]) -> Result<f64> {
    let mut at = start;
    let mut total = 0.0;
    for &id in route {
        let next = *targets.get(id).ok_or(Error::UnknownTarget(id))?;
        total += distance(at, next);
        at = next;
    }
    Ok(total)
}

/// Chooses where to join `tsp0` and which way to travel around it so that the
/// open route from `start` is shortest.
///
/// Each of the `2n` candidates is scored in closed form as
/// `D(start, first) + L(tsp0) - D(last, first)`. Ties go to the lower entry
/// target id, then to the forward direction.
pub fn initial_route_on_tour(tsp0: &Tour, start: Point2D, targets: &[Point2D]) -> Result<Route> {
    let n = tsp0.len();
    if n == 0 {
        return Err(Error::NoTargets);
    }
    if let Some(&bad) = tsp0.order.iter().find(|&&id| id >= targets.len()) {
        return Err(Error::UnknownTarget(bad));
    }
    let pos = |id: usize| targets[id];
    let mut best: Option<(f64, usize, bool, usize)> = None;
    for (idx, &entry) in tsp0.order.iter().enumerate() {
        for forward in [true, false] {
            // Forward walks idx, idx+1, ..; the last stop is the predecessor of
            // idx. Backward walks idx, idx-1, ..; the last stop is the successor.
            let last = if forward {
                tsp0.order[(idx + n - 1) % n]
            } else {
                tsp0.order[(idx + 1) % n]
            };
            let score = distance(start, pos(entry)) + tsp0.length - distance(pos(last), pos(entry));
            let better = match best {
                None => true,
                Some((s, e, f, _)) => {
                    score < s || (score == s && (entry < e || (entry == e && forward && !f)))
                }
            };
            if better {
                best = Some((score, entry, forward, idx));
            }
        }
    }
    let (score, _, forward, idx) = best.expect("non-empty tour");
    let order: Vec<usize> = (0..n)
        .map(|k| {
            let at = if forward { (idx + k) % n } else { (idx + n - k) % n };
            tsp0.order[at]
        })
        .collect();
    Ok(Route {
        start,
        targets: order,
        length: score,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    fn p(x: f64, y: f64) -> Point2D {
        Point2D::new(x, y)
    }

    #[test]
    fn mst_with_zero_robot_edges() {
        let dm = DistanceMatrix::with_robot_hub(&[p(5.0, 0.0)], &[p(0.0, 0.0), p(10.0, 0.0)]);
        assert_eq!(mst_weight(&dm), 5.0);
        assert_eq!(mst_weight(&DistanceMatrix::from_points(&[p(1.0, 1.0)])), 0.0);
        dm.check_metric().unwrap();
    }

    #[test]
    fn f_mst_single_robot_is_plain_mst() {
        let scn = Scenario {
            edge_length: 10.0,
            comm_range: 1.0,
            seed: 0,
            targets: vec![p(1.0, 0.0), p(1.0, 2.0)],
            robot_starts: vec![p(0.0, 0.0)],
        };
        assert_eq!(f_mst_bound(&scn), 3.0);
    }

    #[test]
    fn route_lengths() {
        let t = [p(1.0, 0.0), p(1.0, 1.0)];
        assert_eq!(route_length(p(0.0, 0.0), &[0, 1], &t).unwrap(), 2.0);
        assert_eq!(route_length(p(0.0, 0.0), &[], &t).unwrap(), 0.0);
        assert_abs_diff_eq!(route_length(p(0.0, 0.0), &[1, 0], &t).unwrap(), 2f64.sqrt() + 1.0);
        assert!(matches!(route_length(p(0.0, 0.0), &[5], &t), Err(Error::UnknownTarget(5))));
    }

    #[test]
    fn initial_route_single_target() {
        let t = [p(3.0, 4.0)];
        let tour = Tour::new(vec![0], &DistanceMatrix::from_points(&t));
        let r = initial_route_on_tour(&tour, p(0.0, 0.0), &t).unwrap();
        assert_eq!(r.targets, vec![0]);
        assert_eq!(r.length, 5.0);
    }

    #[test]
    fn initial_route_from_tour_vertex() {
        // Square with one long closing edge candidate: start on vertex 0.
        let t = [p(0.0, 0.0), p(10.0, 0.0), p(10.0, 3.0), p(0.0, 3.0)];
        let dm = DistanceMatrix::from_points(&t);
        let tour = Tour::new(vec![0, 1, 2, 3], &dm);
        let r = initial_route_on_tour(&tour, t[0], &t).unwrap();
        assert_eq!(r.targets[0], 0);
        // Dropping the 10 m edge 0-1 beats dropping the 3 m edge 0-3.
        assert_eq!(r.targets, vec![0, 3, 2, 1]);
        assert_abs_diff_eq!(r.length, 16.0);
        assert_abs_diff_eq!(route_length(t[0], &r.targets, &t).unwrap(), r.length, epsilon = 1e-12);
    }
}
