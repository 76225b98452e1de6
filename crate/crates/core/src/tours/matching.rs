use rustworkx_core::max_weight_matching::max_weight_matching;
use rustworkx_core::petgraph::graph::UnGraph;

use super::DistanceMatrix;
use crate::error::{Error, Result};

/// Integer weight resolution: distances are matched in micrometers.
const SCALE: f64 = 1e6;

/// Exact minimum-weight perfect matching over `vertices` (ids into `dm`).
///
/// Runs a blossom max-weight matching with maximum cardinality on weights
/// `C - d(u, v)`; every perfect matching has the same number of edges, so the
/// offset `C` does not change the optimum. Pairs are returned as `(a, b)`
/// with `a < b`, sorted.
pub fn min_weight_perfect_matching(
    dm: &DistanceMatrix,
    vertices: &[usize],
) -> Result<Vec<(usize, usize)>> {
    let k = vertices.len();
    if k % 2 == 1 {
        return Err(Error::OddVertexCount(k));
    }
    if k == 0 {
        return Ok(Vec::new());
    }
    if k == 2 {
        let (a, b) = (vertices[0], vertices[1]);
        return Ok(vec![(a.min(b), a.max(b))]);
    }
    let scaled = |i: usize, j: usize| (dm.get(vertices[i], vertices[j]) * SCALE).round() as i128;
    let mut max_w = 0i128;
    let mut graph = UnGraph::<(), i128>::with_capacity(k, k * (k - 1) / 2);
    let nodes: Vec<_> = (0..k).map(|_| graph.add_node(())).collect();
    for i in 0..k {
        for j in (i + 1)..k {
            max_w = max_w.max(scaled(i, j));
        }
    }
    for i in 0..k {
        for j in (i + 1)..k {
            graph.add_edge(nodes[i], nodes[j], max_w + 1 - scaled(i, j));
        }
    }
    let mates = max_weight_matching(
        &graph,
        true,
        |e| Ok::<_, std::convert::Infallible>(*e.weight()),
        false,
    )
    .unwrap_or_else(|never| match never {});
    debug_assert_eq!(mates.len(), k / 2);
    let mut pairs: Vec<(usize, usize)> = mates
        .into_iter()
        .map(|(i, j)| {
            let (a, b) = (vertices[i], vertices[j]);
            (a.min(b), a.max(b))
        })
        .collect();
    pairs.sort_unstable();
    Ok(pairs)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::Point2D;

    #[test]
    fn trivial_and_collinear() {
        let pts: Vec<_> = (0..4).map(|i| Point2D::new(i as f64, 0.0)).collect();
        let dm = DistanceMatrix::from_points(&pts);
        assert_eq!(min_weight_perfect_matching(&dm, &[2, 0]).unwrap(), vec![(0, 2)]);
        assert_eq!(
            min_weight_perfect_matching(&dm, &[0, 1, 2, 3]).unwrap(),
            vec![(0, 1), (2, 3)]
        );
        assert!(matches!(
            min_weight_perfect_matching(&dm, &[0, 1, 2]),
            Err(Error::OddVertexCount(3))
        ));
        assert!(min_weight_perfect_matching(&dm, &[]).unwrap().is_empty());
    }
}
