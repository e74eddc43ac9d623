//! Reference computations written against plain std types. They share no
//! code with the engine so that agreement between the two means something.

/// Textbook Bellman-Ford: `|V| - 1` rounds of relaxing every edge.
/// `None` marks an unreachable node.
pub fn oracle_bellman_ford(
    n: usize,
    edges: &[(usize, usize, u64)],
    source: usize,
) -> Vec<Option<u64>> {
    let mut dist = vec![None; n];
    dist[source] = Some(0);
    for _ in 1..n.max(1) {
        let mut changed = false;
        for &(u, v, w) in edges {
            if let Some(du) = dist[u] {
                let cand = du + w;
                if dist[v].is_none_or(|dv| cand < dv) {
                    dist[v] = Some(cand);
                    changed = true;
                }
            }
        }
        if !changed {
            break;
        }
    }
    dist
}

/// For each reachable node other than through itself, the smallest-id
/// neighbour on some shortest path; the source may be its own predecessor.
pub fn oracle_predecessors(
    n: usize,
    edges: &[(usize, usize, u64)],
    source: usize,
    dist: &[Option<u64>],
) -> Vec<Option<usize>> {
    let mut pred = vec![None; n];
    pred[source] = Some(source);
    for &(u, v, w) in edges {
        if let (Some(du), Some(dv)) = (dist[u], dist[v]) {
            if du + w == dv && pred[v].is_none_or(|p| u < p) {
                pred[v] = Some(u);
            }
        }
    }
    pred
}

/// Digit-wise sum of two little-endian digit lists through `u128`.
/// Returns `k = max(len)` result digits and the overflow above them.
pub fn oracle_add(x: &[u8], y: &[u8]) -> (Vec<u8>, u128) {
    let k = x.len().max(y.len());
    let value = |ds: &[u8]| ds.iter().rev().fold(0u128, |acc, &d| acc * 10 + d as u128);
    let mut sum = value(x) + value(y);
    let mut digits = Vec::with_capacity(k);
    for _ in 0..k {
        digits.push((sum % 10) as u8);
        sum /= 10;
    }
    (digits, sum)
}

/// A weighted edge `(from, to, matrix)` with `None` for ⊥ entries.
pub type MatrixEdge = (usize, usize, Vec<Vec<Option<i64>>>);

/// Least fixed point of `x_u = max(f_u, max_{(v,u)} W_vu ⊗ x_v)` over
/// `Option<i64>` vectors (`None` is ⊥), by plain iteration. Gives up after
/// `max_iters` sweeps without convergence.
pub fn oracle_maxmax_fixpoint(
    features: &[Vec<Option<i64>>],
    edges: &[MatrixEdge],
    max_iters: usize,
) -> Option<Vec<Vec<Option<i64>>>> {
    let mut x = features.to_vec();
    for _ in 0..max_iters {
        let mut next = x.clone();
        for (v, u, w) in edges {
            for (i, row) in w.iter().enumerate() {
                let term = row
                    .iter()
                    .zip(&x[*v])
                    .filter_map(|(a, b)| Some((*a)? + (*b)?))
                    .max();
                if term > next[*u][i] {
                    next[*u][i] = term;
                }
            }
        }
        if next == x {
            return Some(x);
        }
        x = next;
    }
    None
}
