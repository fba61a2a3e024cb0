//! Exhaustive simple-cycle enumeration, used as a test oracle.

use super::{Cycle, CycleError};
use crate::gf2::SparseBinaryMatrix;

/// Largest block length [`enumerate_cycles_bruteforce`] accepts by default.
pub const BRUTEFORCE_MAX_N: usize = 40;

/// Lists every simple cycle of length at most `max_len`, once each.
///
/// Works on the plain undirected graph with vertices numbered variables
/// first, then checks. A cycle is reported from its smallest vertex, in the
/// direction whose second vertex is smaller than its last. Refuses graphs with
/// more than [`BRUTEFORCE_MAX_N`] columns.
pub fn enumerate_cycles_bruteforce(
    h: &SparseBinaryMatrix,
    max_len: usize,
) -> Result<Vec<Cycle>, CycleError> {
    enumerate_with_bound(h, max_len, BRUTEFORCE_MAX_N)
}

pub fn enumerate_with_bound(
    h: &SparseBinaryMatrix,
    max_len: usize,
    bound: usize,
) -> Result<Vec<Cycle>, CycleError> {
    let n = h.num_cols();
    if n > bound {
        return Err(CycleError::TooLarge { n, bound });
    }
    let total = n + h.num_rows();
    let adj: Vec<Vec<usize>> = (0..total)
        .map(|x| {
            if x < n {
                h.col(x).iter().map(|&c| n + c).collect()
            } else {
                h.row(x - n).to_vec()
            }
        })
        .collect();

    let mut out = Vec::new();
    let mut path = Vec::with_capacity(max_len);
    let mut on_path = vec![false; total];
    for start in 0..total {
        path.push(start);
        on_path[start] = true;
        extend(&adj, start, max_len, &mut path, &mut on_path, &mut out, n);
        on_path[start] = false;
        path.pop();
    }
    Ok(out)
}

fn extend(
    adj: &[Vec<usize>],
    start: usize,
    max_len: usize,
    path: &mut Vec<usize>,
    on_path: &mut [bool],
    out: &mut Vec<Cycle>,
    n: usize,
) {
    let last = *path.last().unwrap();
    for &next in &adj[last] {
        if next == start && path.len() >= 3 && path[1] < last {
            out.push(to_cycle(path, n));
        }
        if next <= start || on_path[next] || path.len() >= max_len {
            continue;
        }
        path.push(next);
        on_path[next] = true;
        extend(adj, start, max_len, path, on_path, out, n);
        on_path[next] = false;
        path.pop();
    }
}

/// Rotates the vertex ring so it starts at a variable node and splits it.
fn to_cycle(path: &[usize], n: usize) -> Cycle {
    let offset = if path[0] < n { 0 } else { 1 };
    let len = path.len();
    let ring: Vec<usize> = (0..len).map(|i| path[(i + offset) % len]).collect();
    Cycle {
        variables: ring.iter().step_by(2).copied().collect(),
        checks: ring.iter().skip(1).step_by(2).map(|&c| c - n).collect(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn all_ones_has_one_four_cycle() {
        let h = SparseBinaryMatrix::from_dense(&[&[1, 1], &[1, 1]]);
        let cycles = enumerate_cycles_bruteforce(&h, 4).unwrap();
        assert_eq!(cycles.len(), 1);
        assert_eq!(cycles[0].len(), 4);
    }

    #[test]
    fn circulant_ring_has_one_six_cycle() {
        let h = SparseBinaryMatrix::from_dense(&[&[1, 1, 0], &[0, 1, 1], &[1, 0, 1]]);
        let cycles = enumerate_cycles_bruteforce(&h, 8).unwrap();
        assert_eq!(cycles.len(), 1);
        assert_eq!(cycles[0].len(), 6);
        assert!(enumerate_cycles_bruteforce(&h, 4).unwrap().is_empty());
    }

    #[test]
    fn empty_matrix() {
        assert!(
            enumerate_cycles_bruteforce(&SparseBinaryMatrix::zeros(3, 5), 12)
                .unwrap()
                .is_empty()
        );
    }

    #[test]
    fn refuses_large_graphs() {
        let h = SparseBinaryMatrix::zeros(2, 41);
        assert!(matches!(
            enumerate_cycles_bruteforce(&h, 4),
            Err(CycleError::TooLarge { n: 41, bound: 40 })
        ));
    }

    #[test]
    fn complete_bipartite_k33() {
        // K_{3,3}: 9 four-cycles, 6 six-cycles
        let h = SparseBinaryMatrix::from_dense(&[&[1, 1, 1], &[1, 1, 1], &[1, 1, 1]]);
        let cycles = enumerate_cycles_bruteforce(&h, 6).unwrap();
        assert_eq!(cycles.iter().filter(|c| c.len() == 4).count(), 9);
        assert_eq!(cycles.iter().filter(|c| c.len() == 6).count(), 6);
    }
}
