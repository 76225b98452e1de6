use super::{matching::min_weight_perfect_matching, mst_edges, DistanceMatrix, Tour};
use crate::error::Result;

/// Christofides tour: MST, exact matching on odd-degree vertices, Euler
/// circuit of the union, then shortcut to first occurrences.
///
/// The input must be metric for the 3/2 guarantee; call
/// [`DistanceMatrix::check_metric`] first when that is not known.
pub fn christofides(dm: &DistanceMatrix) -> Result<Tour> {
    let n = dm.len();
    if n <= 3 {
        return Ok(Tour::new((0..n).collect(), dm));
    }
    let mut adj: Vec<Vec<usize>> = vec![Vec::new(); n];
    for (u, v) in mst_edges(dm) {
        adj[u].push(v);
        adj[v].push(u);
    }
    let odd: Vec<usize> = (0..n).filter(|&v| adj[v].len() % 2 == 1).collect();
    for (u, v) in min_weight_perfect_matching(dm, &odd)? {
        adj[u].push(v);
        adj[v].push(u);
    }
    let circuit = euler_circuit(adj, 0);
    let mut seen = vec![false; n];
    let order: Vec<usize> = circuit
        .into_iter()
        .filter(|&v| !std::mem::replace(&mut seen[v], true))
        .collect();
    debug_assert_eq!(order.len(), n);
    Ok(Tour::new(order, dm))
}

/// Hierholzer's algorithm on an undirected multigraph in which every vertex
/// has even degree. Neighbors are taken lowest id first.
fn euler_circuit(mut adj: Vec<Vec<usize>>, start: usize) -> Vec<usize> {
    for list in &mut adj {
        // popped from the back, so sort descending to take the lowest id first
        list.sort_unstable_by(|a, b| b.cmp(a));
    }
    let mut stack = vec![start];
    let mut circuit = Vec::new();
    while let Some(&v) = stack.last() {
        match adj[v].pop() {
            Some(u) => {
                let back = adj[u]
                    .iter()
                    .rposition(|&w| w == v)
                    .expect("undirected edge has a reverse entry");
                adj[u].remove(back);
                stack.push(u);
            }
            None => {
                circuit.push(v);
                stack.pop();
            }
        }
    }
    circuit.reverse();
    circuit
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::error::Error;
    use crate::geometry::Point2D;

    #[test]
    fn triangle_is_perimeter() {
        let pts = [Point2D::new(0.0, 0.0), Point2D::new(3.0, 0.0), Point2D::new(0.0, 4.0)];
        let t = christofides(&DistanceMatrix::from_points(&pts)).unwrap();
        assert_eq!(t.length, 12.0);
        assert_eq!(t.len(), 3);
    }

    #[test]
    fn unit_square() {
        let pts = [
            Point2D::new(0.0, 0.0),
            Point2D::new(1.0, 1.0),
            Point2D::new(1.0, 0.0),
            Point2D::new(0.0, 1.0),
        ];
        let t = christofides(&DistanceMatrix::from_points(&pts)).unwrap();
        assert!(t.length <= 6.0);
        assert!((t.length - 4.0).abs() < 1e-12);
    }

    #[test]
    fn degenerate_sizes() {
        let one = [Point2D::new(1.0, 1.0)];
        assert_eq!(christofides(&DistanceMatrix::from_points(&one)).unwrap().length, 0.0);
        let two = [Point2D::new(0.0, 0.0), Point2D::new(0.0, 2.0)];
        assert_eq!(christofides(&DistanceMatrix::from_points(&two)).unwrap().length, 4.0);
        let coincident = [Point2D::new(5.0, 5.0); 6];
        let t = christofides(&DistanceMatrix::from_points(&coincident)).unwrap();
        assert_eq!((t.len(), t.length), (6, 0.0));
    }

    #[test]
    fn euler_visits_every_edge() {
        // two triangles sharing vertex 0
        let mut adj = vec![Vec::new(); 5];
        for (u, v) in [(0, 1), (1, 2), (2, 0), (0, 3), (3, 4), (4, 0)] {
            adj[u].push(v);
            adj[v].push(u);
        }
        let c = euler_circuit(adj, 0);
        assert_eq!(c.len(), 7);
        assert_eq!(c.first(), c.last());
    }

    #[test]
    fn non_metric_detected() {
        let dm = DistanceMatrix::from_fn(3, |i, j| if (i, j) == (0, 2) { 10.0 } else { 1.0 });
        assert!(matches!(dm.check_metric(), Err(Error::NonMetric(..))));
    }
}
