//! Progressive edge growth with an ACE tiebreak.

use std::collections::VecDeque;

use rand::seq::{IndexedRandom, SliceRandom};
use rand::Rng;

use super::{quantize_degrees, ConstructionConfig, ConstructionError, DegreeProfile};
use crate::gf2::{information_first, SparseBinaryMatrix};
use crate::rng;

/// ACE tiebreak parameters.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct AceParams {
    /// Cycles up to length `2 * depth` are scored by their ACE; longer ones
    /// count as harmless.
    pub depth: usize,
    /// Cycles closed within the detection depth with ACE below this value
    /// are tallied in [`PegStats::ace_violations`].
    pub threshold: i64,
}

impl Default for AceParams {
    fn default() -> Self {
        Self {
            depth: 9,
            threshold: 4,
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct PegStats {
    /// Edges that had to go to an already full check node.
    pub capacity_overflows: usize,
    /// Edges closing a short cycle whose ACE is below the threshold.
    pub ace_violations: usize,
    /// Degree-preserving edge swaps made to clear sporadic short cycles.
    pub repair_swaps: usize,
}

const UNREACHED: u32 = u32::MAX;

struct Workspace {
    var_adj: Vec<Vec<usize>>,
    chk_adj: Vec<Vec<usize>>,
    dist_v: Vec<u32>,
    dist_c: Vec<u32>,
    ace_v: Vec<i64>,
    ace_c: Vec<i64>,
    queue: VecDeque<(bool, usize)>,
}

impl Workspace {
    /// Breadth-first expansion from variable `root` over the current graph.
    /// Leaves each reached check's distance (in edges) and the smallest sum
    /// of `weight` over the variable nodes on a shortest path to it.
    fn expand(&mut self, root: usize, weight: &[i64]) {
        self.dist_v.fill(UNREACHED);
        self.dist_c.fill(UNREACHED);
        self.queue.clear();
        self.dist_v[root] = 0;
        self.ace_v[root] = 0;
        self.queue.push_back((true, root));
        while let Some((is_var, x)) = self.queue.pop_front() {
            if is_var {
                let (d, a) = (self.dist_v[x], self.ace_v[x]);
                for &c in &self.var_adj[x] {
                    if self.dist_c[c] == UNREACHED {
                        self.dist_c[c] = d + 1;
                        self.ace_c[c] = a;
                        self.queue.push_back((false, c));
                    } else if self.dist_c[c] == d + 1 && a < self.ace_c[c] {
                        self.ace_c[c] = a;
                    }
                }
            } else {
                let (d, a) = (self.dist_c[x], self.ace_c[x]);
                for &v in &self.chk_adj[x] {
                    let cand = a + weight[v];
                    if self.dist_v[v] == UNREACHED {
                        self.dist_v[v] = d + 1;
                        self.ace_v[v] = cand;
                        self.queue.push_back((true, v));
                    } else if self.dist_v[v] == d + 1 && cand < self.ace_v[v] {
                        self.ace_v[v] = cand;
                    }
                }
            }
        }
    }
}

/// Builds a Tanner graph realizing `profile` exactly (barring capacity
/// overflows, reported in the stats).
///
/// Variable nodes are processed from the lowest degree to the highest. Each
/// edge goes to a non-full check node that is farthest from the variable in
/// the current graph (unreached checks first), then of lowest current degree,
/// then closing the cycle with the largest ACE, with remaining ties drawn
/// from the seeded generator.
pub fn peg_from_profile(
    profile: &DegreeProfile,
    seed: u64,
    ace: AceParams,
) -> (SparseBinaryMatrix, PegStats) {
    let n = profile.variable.len();
    let m = profile.check.len();
    let weight: Vec<i64> = profile.variable.iter().map(|&d| d as i64 - 2).collect();
    let cap = &profile.check;
    let mut cur = vec![0usize; m];
    let mut rng = rng::seeded(seed);
    let mut stats = PegStats::default();
    let mut ws = Workspace {
        var_adj: vec![Vec::new(); n],
        chk_adj: vec![Vec::new(); m],
        dist_v: vec![UNREACHED; n],
        dist_c: vec![UNREACHED; m],
        ace_v: vec![0; n],
        ace_c: vec![0; m],
        queue: VecDeque::new(),
    };
    let mut adjacent = vec![false; m];
    let mut ties: Vec<usize> = Vec::new();

    // stable: equal degrees keep descending column order
    let mut order: Vec<usize> = (0..n).rev().collect();
    order.sort_by_key(|&j| profile.variable[j]);

    for &j in &order {
        for k in 0..profile.variable[j] {
            if k > 0 {
                ws.expand(j, &weight);
            }
            let mut best: Option<(u32, usize, i64)> = None;
            ties.clear();
            for relax in [false, true] {
                for c in 0..m {
                    if adjacent[c] || (!relax && cur[c] >= cap[c]) {
                        continue;
                    }
                    let dist = if k == 0 { UNREACHED } else { ws.dist_c[c] };
                    let score = if dist != UNREACHED && (dist as usize + 1) <= 2 * ace.depth {
                        ws.ace_c[c] + weight[j]
                    } else {
                        i64::MAX
                    };
                    // farthest, then least loaded, then largest ACE
                    let key = (dist, usize::MAX - cur[c], score);
                    match best {
                        Some(b) if key < b => {}
                        Some(b) if key == b => ties.push(c),
                        _ => {
                            best = Some(key);
                            ties.clear();
                            ties.push(c);
                        }
                    }
                }
                if !ties.is_empty() {
                    if relax {
                        stats.capacity_overflows += 1;
                    }
                    break;
                }
            }
            let c = *ties
                .choose(&mut rng)
                .expect("a variable node cannot be adjacent to every check");
            let (dist, _, score) = best.unwrap();
            if dist != UNREACHED && score != i64::MAX && score < ace.threshold {
                stats.ace_violations += 1;
            }
            adjacent[c] = true;
            cur[c] += 1;
            ws.var_adj[j].push(c);
            ws.chk_adj[c].push(j);
        }
        for &c in &ws.var_adj[j] {
            adjacent[c] = false;
        }
    }
    stats.repair_swaps = clear_sporadic_cycles(&mut ws.var_adj, &mut ws.chk_adj, &mut rng);
    let h = SparseBinaryMatrix::from_rows(n, ws.chk_adj).expect("PEG never repeats an edge");
    (h, stats)
}

/// Whether edge `(v, c)` lies on a cycle of length at most `len`.
fn on_cycle_within(
    var_adj: &[Vec<usize>],
    chk_adj: &[Vec<usize>],
    v: usize,
    c: usize,
    len: usize,
) -> bool {
    // breadth-first from v avoiding the edge itself, over checks only
    let mut seen_c = vec![false; chk_adj.len()];
    let mut frontier: Vec<usize> = var_adj[v].iter().copied().filter(|&x| x != c).collect();
    for &x in &frontier {
        seen_c[x] = true;
    }
    let mut seen_v = vec![false; var_adj.len()];
    seen_v[v] = true;
    // a check at distance d from v closes a cycle of length d + 1
    let mut d = 1;
    while d + 1 < len && !frontier.is_empty() {
        let mut next = Vec::new();
        for &x in &frontier {
            for &w in &chk_adj[x] {
                if seen_v[w] {
                    continue;
                }
                seen_v[w] = true;
                for &y in &var_adj[w] {
                    if y == c {
                        return true;
                    }
                    if !seen_c[y] {
                        seen_c[y] = true;
                        next.push(y);
                    }
                }
            }
        }
        frontier = next;
        d += 2;
    }
    false
}

fn swap_edges(
    var_adj: &mut [Vec<usize>],
    chk_adj: &mut [Vec<usize>],
    (v1, c1): (usize, usize),
    (v2, c2): (usize, usize),
) {
    let replace = |list: &mut Vec<usize>, from: usize, to: usize| {
        let i = list.iter().position(|&x| x == from).expect("edge present");
        list[i] = to;
    };
    replace(&mut var_adj[v1], c1, c2);
    replace(&mut var_adj[v2], c2, c1);
    replace(&mut chk_adj[c1], v1, v2);
    replace(&mut chk_adj[c2], v2, v1);
}

const SWAP_ATTEMPTS: usize = 400;

/// Removes cycles at the girth when only a few variable nodes (under a tenth)
/// lie on them, repeating at the next girth while that holds.
///
/// The tail of PEG must honor the remaining check-degree slack and
/// occasionally closes a cycle much shorter than the rest of the graph. Each
/// such edge is swapped with a random partner edge, `(v1, c1), (v2, c2)` →
/// `(v1, c2), (v2, c1)`, keeping every node degree; a swap is kept only when
/// neither new edge lies on a cycle of the current girth or shorter.
fn clear_sporadic_cycles(
    var_adj: &mut [Vec<usize>],
    chk_adj: &mut [Vec<usize>],
    rng: &mut rng::CodeRng,
) -> usize {
    let n = var_adj.len();
    let mut swaps = 0;
    loop {
        let h = SparseBinaryMatrix::from_rows(n, chk_adj.to_vec()).expect("simple graph");
        let Some(g) = crate::cycles::girth(&h) else {
            break;
        };
        let short: Vec<(usize, usize)> = (0..n)
            .flat_map(|v| var_adj[v].iter().map(move |&c| (v, c)))
            .filter(|&(v, c)| on_cycle_within(var_adj, chk_adj, v, c, g))
            .collect();
        let mut nodes: Vec<usize> = short.iter().map(|e| e.0).collect();
        nodes.dedup();
        if nodes.len() * 10 >= n {
            break;
        }
        let mut progress = false;
        for &(v1, c1) in &short {
            if !var_adj[v1].contains(&c1) || !on_cycle_within(var_adj, chk_adj, v1, c1, g) {
                continue;
            }
            for _ in 0..SWAP_ATTEMPTS {
                let v2 = rng.random_range(0..n);
                let Some(&c2) = var_adj[v2].choose(rng) else {
                    continue;
                };
                if v2 == v1 || c2 == c1 || var_adj[v1].contains(&c2) || var_adj[v2].contains(&c1) {
                    continue;
                }
                swap_edges(var_adj, chk_adj, (v1, c1), (v2, c2));
                if on_cycle_within(var_adj, chk_adj, v1, c2, g)
                    || on_cycle_within(var_adj, chk_adj, v2, c1, g)
                {
                    swap_edges(var_adj, chk_adj, (v1, c2), (v2, c1));
                } else {
                    swaps += 1;
                    progress = true;
                    break;
                }
            }
        }
        if !progress {
            break;
        }
    }
    swaps
}

/// PEG construction from a validated configuration.
///
/// The columns of the result are ordered so that systematic encoding puts
/// the information bits in columns `0..K` and the parity bits in `K..N`
/// (a few columns move when the rightmost M columns of the raw PEG graph
/// are singular). Rank-deficient results are returned unchanged.
pub fn peg_construct(cfg: &ConstructionConfig) -> Result<SparseBinaryMatrix, ConstructionError> {
    cfg.validate()?;
    let profile = quantize_degrees(&cfg.distribution, cfg.n, cfg.m)?;
    let (h, stats) = peg_from_profile(&profile, cfg.seed, cfg.ace_params());
    if stats.capacity_overflows > 0 {
        log::warn!(
            "PEG: {} edges exceeded their check-degree target",
            stats.capacity_overflows
        );
    }
    match information_first(&h) {
        Some(arranged) => Ok(arranged),
        None => {
            log::warn!("PEG result is rank deficient; columns left in construction order");
            Ok(h)
        }
    }
}

/// Random Tanner graph with the given degree profile (configuration model
/// with repair of repeated edges). Serves as an unstructured control.
pub fn random_from_profile(profile: &DegreeProfile, seed: u64) -> SparseBinaryMatrix {
    let n = profile.variable.len();
    let m = profile.check.len();
    let mut rng = rng::seeded(seed);
    let mut sockets: Vec<usize> = profile
        .check
        .iter()
        .enumerate()
        .flat_map(|(c, &d)| std::iter::repeat_n(c, d))
        .collect();
    sockets.shuffle(&mut rng);
    let mut var_of_socket: Vec<usize> = profile
        .variable
        .iter()
        .enumerate()
        .flat_map(|(v, &d)| std::iter::repeat_n(v, d))
        .collect();
    assert_eq!(
        sockets.len(),
        var_of_socket.len(),
        "profile sides disagree on edge count"
    );

    // repair repeated (variable, check) pairs by swapping check sockets
    let e = sockets.len();
    for _ in 0..100 * e.max(1) {
        let mut seen = std::collections::HashSet::with_capacity(e);
        let dup = (0..e).find(|&i| !seen.insert((var_of_socket[i], sockets[i])));
        match dup {
            None => break,
            Some(i) => {
                let other = rng.random_range(0..e);
                sockets.swap(i, other);
            }
        }
    }
    let mut rows = vec![Vec::new(); m];
    let mut seen = std::collections::HashSet::with_capacity(e);
    for (v, c) in var_of_socket.drain(..).zip(sockets) {
        if seen.insert((v, c)) {
            rows[c].push(v);
        }
    }
    SparseBinaryMatrix::from_rows(n, rows).expect("deduplicated entries")
}
