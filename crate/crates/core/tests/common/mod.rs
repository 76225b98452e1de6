//! Independent reference implementations used as test oracles.
#![allow(dead_code)]

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use robocomm::Point2D;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn random_points(rng: &mut ChaCha8Rng, count: usize, edge: f64) -> Vec<Point2D> {
    (0..count)
        .map(|_| Point2D::new(rng.random_range(0.0..edge), rng.random_range(0.0..edge)))
        .collect()
}

pub fn d(a: Point2D, b: Point2D) -> f64 {
    ((a.x - b.x).powi(2) + (a.y - b.y).powi(2)).sqrt()
}

/// Calls `f` on every permutation of `items` (Heap's algorithm).
pub fn for_each_permutation(items: &mut Vec<usize>, f: &mut impl FnMut(&[usize])) {
    fn heap(k: usize, a: &mut Vec<usize>, f: &mut impl FnMut(&[usize])) {
        if k <= 1 {
            f(a);
            return;
        }
        for i in 0..k - 1 {
            heap(k - 1, a, f);
            if k.is_multiple_of(2) {
                a.swap(i, k - 1);
            } else {
                a.swap(0, k - 1);
            }
        }
        heap(k - 1, a, f);
    }
    let k = items.len();
    heap(k, items, f);
}

/// Shortest closed tour by enumerating every permutation.
pub fn exhaustive_tsp(w: &dyn Fn(usize, usize) -> f64, n: usize) -> f64 {
    if n <= 1 {
        return 0.0;
    }
    let mut rest: Vec<usize> = (1..n).collect();
    let mut best = f64::INFINITY;
    for_each_permutation(&mut rest, &mut |p| {
        let mut len = w(0, p[0]) + w(p[p.len() - 1], 0);
        for pair in p.windows(2) {
            len += w(pair[0], pair[1]);
        }
        best = best.min(len);
    });
    best
}

/// Shortest open path from `start` through every point in `pts`.
pub fn exhaustive_open_path(start: Point2D, pts: &[Point2D]) -> f64 {
    if pts.is_empty() {
        return 0.0;
    }
    let mut idx: Vec<usize> = (0..pts.len()).collect();
    let mut best = f64::INFINITY;
    for_each_permutation(&mut idx, &mut |p| {
        let mut len = d(start, pts[p[0]]);
        for pair in p.windows(2) {
            len += d(pts[pair[0]], pts[pair[1]]);
        }
        best = best.min(len);
    });
    best
}

/// Minimum spanning tree weight by checking every (n-1)-edge subset for acyclicity.
pub fn exhaustive_mst(w: &dyn Fn(usize, usize) -> f64, n: usize) -> f64 {
    if n <= 1 {
        return 0.0;
    }
    let edges: Vec<(usize, usize)> = (0..n).flat_map(|i| (i + 1..n).map(move |j| (i, j))).collect();
    let mut best = f64::INFINITY;
    let e = edges.len();
    for mask in 0u64..(1u64 << e) {
        if mask.count_ones() as usize != n - 1 {
            continue;
        }
        let mut parent: Vec<usize> = (0..n).collect();
        fn find(p: &mut [usize], x: usize) -> usize {
            if p[x] == x { x } else { let r = find(p, p[x]); p[x] = r; r }
        }
        let mut ok = true;
        let mut total = 0.0;
        for (bit, &(a, b)) in edges.iter().enumerate() {
            if mask >> bit & 1 == 1 {
                let (ra, rb) = (find(&mut parent, a), find(&mut parent, b));
                if ra == rb {
                    ok = false;
                    break;
                }
                parent[ra] = rb;
                total += w(a, b);
            }
        }
        if ok {
            best = best.min(total);
        }
    }
    best
}

/// Minimum total weight over all perfect matchings of `0..k`.
pub fn exhaustive_matching(w: &dyn Fn(usize, usize) -> f64, k: usize) -> (f64, usize) {
    fn go(free: &mut Vec<usize>, w: &dyn Fn(usize, usize) -> f64, acc: f64, best: &mut f64, count: &mut usize) {
        if free.is_empty() {
            *count += 1;
            *best = best.min(acc);
            return;
        }
        let a = free.remove(0);
        for i in 0..free.len() {
            let b = free.remove(i);
            go(free, w, acc + w(a, b), best, count);
            free.insert(i, b);
        }
        free.insert(0, a);
    }
    let mut best = f64::INFINITY;
    let mut count = 0;
    go(&mut (0..k).collect(), w, 0.0, &mut best, &mut count);
    (best, count)
}

/// Optimal multi-robot open-route cost: every target-to-robot map times every order.
pub fn exhaustive_mvrp(starts: &[Point2D], targets: &[Point2D]) -> f64 {
    let (m, n) = (starts.len(), targets.len());
    let mut best = f64::INFINITY;
    let mut owner = vec![0usize; n];
    loop {
        let mut cost = 0.0;
        for (j, &s) in starts.iter().enumerate() {
            let mine: Vec<Point2D> = (0..n).filter(|&i| owner[i] == j).map(|i| targets[i]).collect();
            cost += exhaustive_open_path(s, &mine);
        }
        best = best.min(cost);
        let mut i = 0;
        while i < n {
            owner[i] += 1;
            if owner[i] < m {
                break;
            }
            owner[i] = 0;
            i += 1;
        }
        if i == n {
            return best;
        }
    }
}

/// Nearest-neighbour visiting order from `start`; ties go to the lower index.
pub fn nearest_neighbour_cost(start: Point2D, targets: &[Point2D]) -> f64 {
    let mut left: Vec<usize> = (0..targets.len()).collect();
    let mut at = start;
    let mut total = 0.0;
    while !left.is_empty() {
        let (pos, _) = left
            .iter()
            .enumerate()
            .min_by(|(_, &a), (_, &b)| d(at, targets[a]).total_cmp(&d(at, targets[b])))
            .unwrap();
        let next = left.remove(pos);
        total += d(at, targets[next]);
        at = targets[next];
    }
    total
}
