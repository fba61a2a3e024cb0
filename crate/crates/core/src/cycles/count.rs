//! Exact per-node counting of short cycles.
//!
//! For a root variable `v` and each of its edges `(v, c0)`, a dynamic program
//! over directed edges counts non-backtracking walks that leave `v` through
//! `c0`. A closed walk of length `k` that returns to `v` through a check other
//! than `c0` is a simple cycle whenever `k < 2g`: anything else would contain
//! two distinct cycles. Each cycle through `v` is found twice, once per
//! direction. Alongside the walk counts the program carries the sum, over
//! walks, of `deg − 2` of the variables visited, which yields the cycle ACE
//! totals for free.
//!
//! Per step the update for a directed edge `y → z` is the total flow into `y`
//! minus the flow on `z → y`, so one step costs O(|E|) and a full census
//! O(k·|E|²). Lengths `k ≥ 2g` (only reachable when g = 4 and k = 8) are
//! handled by a depth-first enumeration instead.

use rayon::prelude::*;

use super::{girth, CycleCensus, NodeCycles};
use crate::gf2::SparseBinaryMatrix;

const UNREACHED: usize = usize::MAX;

/// Tanner graph with numbered directed edges: `2e` is variable→check and
/// `2e + 1` is check→variable for undirected edge `e`.
struct Graph {
    n: usize,
    /// For each vertex (variables first, then checks), its outgoing directed
    /// edges.
    out: Vec<Vec<usize>>,
    /// Head vertex of each directed edge.
    head: Vec<usize>,
    weight: Vec<i64>,
}

impl Graph {
    fn new(h: &SparseBinaryMatrix) -> Self {
        let n = h.num_cols();
        let total = n + h.num_rows();
        let mut out = vec![Vec::new(); total];
        let mut head = Vec::with_capacity(2 * h.num_edges());
        for (r, c) in h.entries() {
            let e = head.len() / 2;
            head.push(n + r);
            head.push(c);
            out[c].push(2 * e);
            out[n + r].push(2 * e + 1);
        }
        let weight = (0..n).map(|v| h.col_degree(v) as i64 - 2).collect();
        Self {
            n,
            out,
            head,
            weight,
        }
    }

    fn vertices(&self) -> usize {
        self.out.len()
    }

    fn bfs(&self, root: usize, limit: usize, dist: &mut [usize]) {
        dist.fill(UNREACHED);
        dist[root] = 0;
        let mut frontier = vec![root];
        let mut next = Vec::new();
        for d in 1..=limit {
            for &x in &frontier {
                for &e in &self.out[x] {
                    let y = self.head[e];
                    if dist[y] == UNREACHED {
                        dist[y] = d;
                        next.push(y);
                    }
                }
            }
            std::mem::swap(&mut frontier, &mut next);
            next.clear();
            if frontier.is_empty() {
                break;
            }
        }
    }
}

struct Scratch {
    dist: Vec<usize>,
    walks: Vec<u64>,
    ace: Vec<i64>,
    next_walks: Vec<u64>,
    next_ace: Vec<i64>,
    node_walks: Vec<u64>,
    node_ace: Vec<i64>,
    active: Vec<usize>,
    next_active: Vec<usize>,
    nodes: Vec<usize>,
}

impl Scratch {
    fn new(g: &Graph) -> Self {
        let d = g.head.len();
        let v = g.vertices();
        Self {
            dist: vec![UNREACHED; v],
            walks: vec![0; d],
            ace: vec![0; d],
            next_walks: vec![0; d],
            next_ace: vec![0; d],
            node_walks: vec![0; v],
            node_ace: vec![0; v],
            active: Vec::new(),
            next_active: Vec::new(),
            nodes: Vec::new(),
        }
    }
}

/// Closed-walk tallies for one root: (walks, ACE sums) per requested length.
fn walk_counts(g: &Graph, root: usize, lengths: &[usize], s: &mut Scratch) -> (Vec<u64>, Vec<i64>) {
    let kmax = *lengths.iter().max().unwrap();
    let mut walks_at = vec![0u64; lengths.len()];
    let mut ace_at = vec![0i64; lengths.len()];
    g.bfs(root, kmax / 2, &mut s.dist);

    for &first in &g.out[root] {
        s.active.clear();
        s.active.push(first);
        s.walks[first] = 1;
        s.ace[first] = 0;
        for t in 1..kmax {
            // flow into each vertex
            s.nodes.clear();
            for &e in &s.active {
                let y = g.head[e];
                if s.node_walks[y] == 0 {
                    s.nodes.push(y);
                }
                s.node_walks[y] += s.walks[e];
                s.node_ace[y] += s.ace[e];
            }
            let remaining = kmax - (t + 1);
            s.next_active.clear();
            for &y in &s.nodes {
                let (wy, ay) = (s.node_walks[y], s.node_ace[y]);
                for &e in &g.out[y] {
                    let z = g.head[e];
                    if s.dist[z] > remaining {
                        continue;
                    }
                    let back = e ^ 1;
                    let w = wy - s.walks[back];
                    if w == 0 {
                        continue;
                    }
                    let mut a = ay - s.ace[back];
                    if z < g.n {
                        a += g.weight[z] * w as i64;
                    }
                    s.next_walks[e] = w;
                    s.next_ace[e] = a;
                    s.next_active.push(e);
                }
            }
            for &y in &s.nodes {
                s.node_walks[y] = 0;
                s.node_ace[y] = 0;
            }
            for &e in &s.active {
                s.walks[e] = 0;
                s.ace[e] = 0;
            }
            std::mem::swap(&mut s.walks, &mut s.next_walks);
            std::mem::swap(&mut s.ace, &mut s.next_ace);
            std::mem::swap(&mut s.active, &mut s.next_active);

            let len = t + 1;
            if let Some(i) = lengths.iter().position(|&l| l == len) {
                for &e in &s.active {
                    if g.head[e] == root && e != (first ^ 1) {
                        walks_at[i] += s.walks[e];
                        ace_at[i] += s.ace[e];
                    }
                }
            }
        }
        for &e in &s.active {
            s.walks[e] = 0;
            s.ace[e] = 0;
        }
    }
    (walks_at, ace_at)
}

/// Cycles of exactly `len` whose smallest variable is `root`, each listed
/// once as its variable set.
fn cycles_rooted_at(g: &Graph, root: usize, len: usize) -> Vec<Vec<usize>> {
    let mut found = Vec::new();
    let mut path = vec![root];
    let mut used = vec![false; g.vertices()];
    used[root] = true;
    dfs(g, root, len, &mut path, &mut used, &mut found);
    found
}

fn dfs(
    g: &Graph,
    root: usize,
    len: usize,
    path: &mut Vec<usize>,
    used: &mut [bool],
    found: &mut Vec<Vec<usize>>,
) {
    let last = *path.last().unwrap();
    for &e in &g.out[last] {
        let next = g.head[e];
        if path.len() == len {
            // orientation: first check below last check
            if next == root && path[1] < last {
                found.push(path.iter().copied().step_by(2).collect());
            }
            continue;
        }
        if used[next] || (next < g.n && next < root) {
            continue;
        }
        path.push(next);
        used[next] = true;
        dfs(g, root, len, path, used, found);
        used[next] = false;
        path.pop();
    }
}

/// Counts cycles of lengths `base`, `base + 2` and `base + 4` through every
/// variable node, together with their ACE sums.
///
/// `base` need not be the girth: lengths below the girth simply count zero.
/// This is what residual-graph comparisons use to tally cycles at the mother
/// code's girth.
pub fn count_cycles_from(h: &SparseBinaryMatrix, base: usize) -> CycleCensus {
    assert!(
        base >= 4 && base.is_multiple_of(2),
        "cycle lengths are even and at least 4"
    );
    let lengths = [base, base + 2, base + 4];
    let n = h.num_cols();
    let g_actual = girth(h);
    let graph = Graph::new(h);

    let (by_walks, by_dfs): (Vec<usize>, Vec<usize>) = match g_actual {
        None => (Vec::new(), Vec::new()),
        Some(g) => {
            let live: Vec<usize> = lengths.iter().copied().filter(|&l| l >= g).collect();
            live.into_iter().partition(|&l| l < 2 * g)
        }
    };

    let mut per_node = vec![NodeCycles::default(); n];
    if !by_walks.is_empty() {
        let rows: Vec<(Vec<u64>, Vec<i64>)> = (0..n)
            .into_par_iter()
            .map_init(
                || Scratch::new(&graph),
                |s, v| walk_counts(&graph, v, &by_walks, s),
            )
            .collect();
        for (v, (walks, ace)) in rows.into_iter().enumerate() {
            for (i, &len) in by_walks.iter().enumerate() {
                let slot = lengths.iter().position(|&l| l == len).unwrap();
                debug_assert!(walks[i] % 2 == 0 && ace[i] % 2 == 0);
                per_node[v].counts[slot] = walks[i] / 2;
                per_node[v].ace_sums[slot] = (ace[i] / 2) as u64;
            }
        }
    }
    for &len in &by_dfs {
        let slot = lengths.iter().position(|&l| l == len).unwrap();
        let rooted: Vec<Vec<Vec<usize>>> = (0..n)
            .into_par_iter()
            .map(|v| cycles_rooted_at(&graph, v, len))
            .collect();
        for cycle in rooted.iter().flatten() {
            let ace: i64 = cycle.iter().map(|&v| graph.weight[v]).sum();
            for &v in cycle {
                per_node[v].counts[slot] += 1;
                per_node[v].ace_sums[slot] += ace as u64;
            }
        }
    }

    let mut totals = [0u64; 3];
    for (slot, &len) in lengths.iter().enumerate() {
        let incidences: u64 = per_node.iter().map(|p| p.counts[slot]).sum();
        totals[slot] = incidences / (len as u64 / 2);
    }
    CycleCensus {
        girth: g_actual,
        base: Some(base),
        per_node,
        totals,
    }
}

/// Census at the girth and the two following even lengths. An acyclic graph
/// yields an empty census.
pub fn count_cycles(h: &SparseBinaryMatrix) -> CycleCensus {
    match girth(h) {
        Some(g) => count_cycles_from(h, g),
        None => CycleCensus {
            girth: None,
            base: None,
            per_node: vec![NodeCycles::default(); h.num_cols()],
            totals: [0; 3],
        },
    }
}
