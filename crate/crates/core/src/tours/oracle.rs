use super::{DistanceMatrix, Tour};
use crate::error::{Error, Result};

pub const TSP_ORACLE_MAX: usize = 10;

/// Optimal closed tour by enumerating permutations with node 0 fixed first.
pub fn brute_force_tsp(dm: &DistanceMatrix) -> Result<Tour> {
    let n = dm.len();
    if n > TSP_ORACLE_MAX {
        return Err(Error::OracleGuard(format!(
            "exhaustive TSP limited to {TSP_ORACLE_MAX} nodes, got {n}"
        )));
    }
    if n <= 3 {
        return Ok(Tour::new((0..n).collect(), dm));
    }
    let mut best = (f64::INFINITY, Vec::new());
    let mut path = vec![0];
    let mut used = vec![false; n];
    used[0] = true;
    search(dm, &mut path, &mut used, 0.0, &mut best);
    Ok(Tour::new(best.1, dm))
}

fn search(
    dm: &DistanceMatrix,
    path: &mut Vec<usize>,
    used: &mut [bool],
    so_far: f64,
    best: &mut (f64, Vec<usize>),
) {
    let n = dm.len();
    let last = *path.last().unwrap();
    if path.len() == n {
        let total = so_far + dm.get(last, 0);
        if total < best.0 {
            *best = (total, path.clone());
        }
        return;
    }
    for v in 1..n {
        if used[v] {
            continue;
        }
        let next = so_far + dm.get(last, v);
        if next >= best.0 {
            continue;
        }
        used[v] = true;
        path.push(v);
        search(dm, path, used, next, best);
        path.pop();
        used[v] = false;
    }
}
