//! Girth, short-cycle census and ACE metrics of Tanner graphs.

mod bruteforce;
mod count;

use std::collections::{BTreeMap, VecDeque};

use serde::{Deserialize, Serialize};
use thiserror::Error;

pub use bruteforce::{enumerate_cycles_bruteforce, enumerate_with_bound, BRUTEFORCE_MAX_N};
pub use count::{count_cycles, count_cycles_from};

use crate::gf2::SparseBinaryMatrix;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CycleError {
    #[error("brute-force enumeration refused: N = {n} exceeds the bound {bound}")]
    TooLarge { n: usize, bound: usize },
    #[error("length {0} is not covered by the census")]
    LengthNotInCensus(usize),
    #[error("invalid cycle: {0}")]
    InvalidCycle(String),
}

/// A simple cycle `v0 c0 v1 c1 … v(L−1) c(L−1) v0`: check `c_i` joins
/// variables `v_i` and `v_(i+1)`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Cycle {
    pub variables: Vec<usize>,
    pub checks: Vec<usize>,
}

impl Cycle {
    /// Length in edges.
    pub fn len(&self) -> usize {
        2 * self.variables.len()
    }

    pub fn is_empty(&self) -> bool {
        self.variables.is_empty()
    }
}

/// Shortest cycle length of the Tanner graph, `None` when it is a forest.
pub fn girth(h: &SparseBinaryMatrix) -> Option<usize> {
    let n = h.num_cols();
    let total = n + h.num_rows();
    let neighbors = |x: usize| -> Vec<usize> {
        if x < n {
            h.col(x).iter().map(|&c| n + c).collect()
        } else {
            h.row(x - n).to_vec()
        }
    };
    let adj: Vec<Vec<usize>> = (0..total).map(neighbors).collect();

    let mut best = usize::MAX;
    let mut dist = vec![usize::MAX; total];
    let mut parent = vec![usize::MAX; total];
    let mut queue = VecDeque::new();
    // every cycle passes through a variable node
    for root in 0..n {
        dist.fill(usize::MAX);
        dist[root] = 0;
        parent[root] = usize::MAX;
        queue.clear();
        queue.push_back(root);
        while let Some(x) = queue.pop_front() {
            if 2 * dist[x] + 2 >= best {
                break;
            }
            for &y in &adj[x] {
                if dist[y] == usize::MAX {
                    dist[y] = dist[x] + 1;
                    parent[y] = x;
                    queue.push_back(y);
                } else if parent[x] != y {
                    best = best.min(dist[x] + dist[y] + 1);
                }
            }
        }
    }
    (best != usize::MAX).then_some(best)
}

/// Cycle tallies of one variable node at the three census lengths.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct NodeCycles {
    pub counts: [u64; 3],
    /// Sum of the ACE values of the counted cycles.
    pub ace_sums: [u64; 3],
}

/// Per-node and total counts of cycles of three consecutive even lengths,
/// normally the girth `g`, `g + 2` and `g + 4`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CycleCensus {
    pub girth: Option<usize>,
    /// First counted length; `None` for an acyclic graph counted from its
    /// (absent) girth.
    pub base: Option<usize>,
    pub per_node: Vec<NodeCycles>,
    pub totals: [u64; 3],
}

impl CycleCensus {
    pub fn lengths(&self) -> Option<[usize; 3]> {
        self.base.map(|b| [b, b + 2, b + 4])
    }

    pub fn slot(&self, length: usize) -> Result<usize, CycleError> {
        self.lengths()
            .and_then(|ls| ls.iter().position(|&l| l == length))
            .ok_or(CycleError::LengthNotInCensus(length))
    }

    /// Count at the first census length for node `v`.
    pub fn girth_count(&self, v: usize) -> u64 {
        self.per_node[v].counts[0]
    }

    pub fn total(&self, length: usize) -> Result<u64, CycleError> {
        Ok(self.totals[self.slot(length)?])
    }
}

/// Which variable nodes enter the mean and deviation of [`cycle_stats`].
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum StatsPopulation {
    /// All N variable nodes, including those on no cycle of the length.
    #[default]
    AllNodes,
    /// Only the nodes lying on at least one cycle of the length.
    OnCycle,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CycleStats {
    pub length: usize,
    #[serde(rename = "N_c")]
    pub total: u64,
    #[serde(rename = "mu_c")]
    pub mean: f64,
    #[serde(rename = "sigma_c")]
    pub std_dev: f64,
}

/// Total count, mean and population standard deviation of the per-node
/// counts at `length`.
pub fn cycle_stats(
    census: &CycleCensus,
    length: usize,
    population: StatsPopulation,
) -> Result<CycleStats, CycleError> {
    let slot = census.slot(length)?;
    let values: Vec<f64> = census
        .per_node
        .iter()
        .map(|p| p.counts[slot])
        .filter(|&c| population == StatsPopulation::AllNodes || c > 0)
        .map(|c| c as f64)
        .collect();
    let (mean, std_dev) = if values.is_empty() {
        (0.0, 0.0)
    } else {
        let len = values.len() as f64;
        let mean = values.iter().sum::<f64>() / len;
        let var = values.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / len;
        (mean, var.sqrt())
    };
    Ok(CycleStats {
        length,
        total: census.totals[slot],
        mean,
        std_dev,
    })
}

/// Σ (deg − 2) over the variable nodes of a cycle, after checking that the
/// cycle exists in `h`.
pub fn ace_of_cycle(cycle: &Cycle, h: &SparseBinaryMatrix) -> Result<u64, CycleError> {
    let l = cycle.variables.len();
    if l < 2 || cycle.checks.len() != l {
        return Err(CycleError::InvalidCycle(
            "need at least two variables and as many checks".into(),
        ));
    }
    let mut vars = cycle.variables.clone();
    vars.sort_unstable();
    vars.dedup();
    let mut checks = cycle.checks.clone();
    checks.sort_unstable();
    checks.dedup();
    if vars.len() != l || checks.len() != l {
        return Err(CycleError::InvalidCycle("repeated vertex".into()));
    }
    for i in 0..l {
        let (v, c, w) = (
            cycle.variables[i],
            cycle.checks[i],
            cycle.variables[(i + 1) % l],
        );
        if v >= h.num_cols()
            || w >= h.num_cols()
            || c >= h.num_rows()
            || !h.get(c, v)
            || !h.get(c, w)
        {
            return Err(CycleError::InvalidCycle(format!(
                "check {c} does not join variables {v} and {w}"
            )));
        }
    }
    // every variable on a cycle has degree at least two
    Ok(cycle
        .variables
        .iter()
        .map(|&v| h.col_degree(v) as u64 - 2)
        .sum())
}

/// Average ACE of the cycles through each node at each census length.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AceProfile {
    /// `None` where the node lies on no cycle of that length.
    pub per_length: Vec<[Option<f64>; 3]>,
    /// Minimum of the defined entries; `None` for nodes on no counted cycle.
    pub score: Vec<Option<f64>>,
}

impl AceProfile {
    pub fn alpha(&self, v: usize) -> Option<f64> {
        self.score[v]
    }
}

pub fn ace_profile(census: &CycleCensus) -> AceProfile {
    let per_length: Vec<[Option<f64>; 3]> = census
        .per_node
        .iter()
        .map(|p| {
            std::array::from_fn(|i| {
                (p.counts[i] > 0).then(|| p.ace_sums[i] as f64 / p.counts[i] as f64)
            })
        })
        .collect();
    let score = per_length
        .iter()
        .map(|alphas| alphas.iter().flatten().copied().reduce(f64::min))
        .collect();
    AceProfile { per_length, score }
}

/// JSON form of a census: `{girth, lengths: {c: {N_c, mu_c, sigma_c}}, per_node}`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CensusReport {
    pub girth: Option<usize>,
    pub population: StatsPopulation,
    pub lengths: BTreeMap<usize, CycleStats>,
    pub per_node: Vec<NodeEntry>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NodeEntry {
    pub counts: [u64; 3],
    pub alpha: [Option<f64>; 3],
    pub alpha_min: Option<f64>,
}

pub fn census_report(census: &CycleCensus, population: StatsPopulation) -> CensusReport {
    let profile = ace_profile(census);
    let lengths = census
        .lengths()
        .into_iter()
        .flatten()
        .map(|l| {
            (
                l,
                cycle_stats(census, l, population).expect("length from census"),
            )
        })
        .collect();
    let per_node = census
        .per_node
        .iter()
        .zip(profile.per_length.iter().zip(&profile.score))
        .map(|(p, (alpha, &alpha_min))| NodeEntry {
            counts: p.counts,
            alpha: *alpha,
            alpha_min,
        })
        .collect();
    CensusReport {
        girth: census.girth,
        population,
        lengths,
        per_node,
    }
}

/// The graph left after deleting the given variable nodes and their edges.
/// Column order of the survivors is preserved.
pub fn residual_graph(h: &SparseBinaryMatrix, removed: &[usize]) -> SparseBinaryMatrix {
    let mut gone = vec![false; h.num_cols()];
    for &v in removed {
        gone[v] = true;
    }
    let keep: Vec<usize> = (0..h.num_cols()).filter(|&v| !gone[v]).collect();
    h.select_columns(&keep)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::construction::{peg_from_profile, AceParams, DegreeProfile};
    use proptest::prelude::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn random_matrix(m: usize, n: usize, density: f64, seed: u64) -> SparseBinaryMatrix {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let rows = (0..m)
            .map(|_| (0..n).filter(|_| rng.random_bool(density)).collect())
            .collect();
        SparseBinaryMatrix::from_rows(n, rows).unwrap()
    }

    /// Per-node counts and ACE sums recomputed from an explicit cycle list.
    fn oracle_census(
        h: &SparseBinaryMatrix,
        base: usize,
    ) -> (Vec<[u64; 3]>, Vec<[u64; 3]>, [u64; 3]) {
        let cycles = enumerate_cycles_bruteforce(h, base + 4).unwrap();
        let mut counts = vec![[0u64; 3]; h.num_cols()];
        let mut aces = vec![[0u64; 3]; h.num_cols()];
        let mut totals = [0u64; 3];
        for cyc in &cycles {
            let Some(slot) = [base, base + 2, base + 4]
                .iter()
                .position(|&l| l == cyc.len())
            else {
                continue;
            };
            let ace = ace_of_cycle(cyc, h).unwrap();
            totals[slot] += 1;
            for &v in &cyc.variables {
                counts[v][slot] += 1;
                aces[v][slot] += ace;
            }
        }
        (counts, aces, totals)
    }

    fn assert_matches_oracle(h: &SparseBinaryMatrix) {
        let census = count_cycles(h);
        let Some(g) = census.girth else {
            assert!(enumerate_cycles_bruteforce(h, 2 * h.num_cols() + 2)
                .unwrap()
                .is_empty());
            return;
        };
        let (counts, aces, totals) = oracle_census(h, g);
        assert_eq!(census.totals, totals);
        for v in 0..h.num_cols() {
            assert_eq!(census.per_node[v].counts, counts[v], "node {v}");
            assert_eq!(census.per_node[v].ace_sums, aces[v], "node {v}");
        }
    }

    fn block_diag_four_cycles() -> SparseBinaryMatrix {
        SparseBinaryMatrix::from_dense(&[
            &[1, 1, 0, 0],
            &[1, 1, 0, 0],
            &[0, 0, 1, 1],
            &[0, 0, 1, 1],
        ])
    }

    #[test]
    fn girth_examples() {
        assert_eq!(
            girth(&SparseBinaryMatrix::from_dense(&[&[1, 1], &[1, 1]])),
            Some(4)
        );
        assert_eq!(
            girth(&SparseBinaryMatrix::from_dense(&[&[1, 1, 1, 1]])),
            None
        );
        let ring = SparseBinaryMatrix::from_dense(&[&[1, 1, 0], &[0, 1, 1], &[1, 0, 1]]);
        assert_eq!(girth(&ring), Some(6));
        assert_eq!(girth(&SparseBinaryMatrix::zeros(0, 0)), None);
    }

    #[test]
    fn all_ones_census() {
        let h = SparseBinaryMatrix::from_dense(&[&[1, 1], &[1, 1]]);
        let census = count_cycles(&h);
        assert_eq!(census.girth, Some(4));
        assert_eq!(census.totals[0], 1);
        assert_eq!(census.per_node[0].counts[0], 1);
        assert_eq!(census.per_node[1].counts[0], 1);
        let s = cycle_stats(&census, 4, StatsPopulation::AllNodes).unwrap();
        assert_eq!((s.total, s.mean, s.std_dev), (1, 1.0, 0.0));
        let p = ace_profile(&census);
        assert_eq!(p.per_length[0][0], Some(0.0));
        assert_eq!(p.score, vec![Some(0.0), Some(0.0)]);
    }

    #[test]
    fn disjoint_four_cycles() {
        let census = count_cycles(&block_diag_four_cycles());
        assert_eq!(census.totals[0], 2);
        assert!(census.per_node.iter().all(|p| p.counts[0] == 1));
        let s = cycle_stats(&census, 4, StatsPopulation::AllNodes).unwrap();
        assert_eq!((s.total, s.mean, s.std_dev), (2, 1.0, 0.0));
        assert_eq!(
            cycle_stats(&census, 10, StatsPopulation::AllNodes),
            Err(CycleError::LengthNotInCensus(10))
        );
    }

    #[test]
    fn acyclic_census() {
        let census = count_cycles(&SparseBinaryMatrix::from_dense(&[&[1, 1, 1]]));
        assert_eq!(census.girth, None);
        assert_eq!(census.totals, [0; 3]);
        assert!(ace_profile(&census).score.iter().all(Option::is_none));
    }

    #[test]
    fn population_conventions_differ() {
        // a 4-cycle on columns 0, 1 plus an isolated column 2
        let h = SparseBinaryMatrix::from_dense(&[&[1, 1, 0], &[1, 1, 1]]);
        let census = count_cycles(&h);
        let all = cycle_stats(&census, 4, StatsPopulation::AllNodes).unwrap();
        let on = cycle_stats(&census, 4, StatsPopulation::OnCycle).unwrap();
        assert!((all.mean - 2.0 / 3.0).abs() < 1e-12);
        assert_eq!(on.mean, 1.0);
        assert_eq!(all.total, on.total);
    }

    #[test]
    fn ace_of_small_cycles() {
        let h = SparseBinaryMatrix::from_dense(&[&[1, 1], &[1, 1]]);
        let c = Cycle {
            variables: vec![0, 1],
            checks: vec![0, 1],
        };
        assert_eq!(ace_of_cycle(&c, &h), Ok(0));
        // 4-cycle on a degree-3 and a degree-4 variable
        let h = SparseBinaryMatrix::from_dense(&[&[1, 1], &[1, 1], &[1, 1], &[0, 1]]);
        assert_eq!(ace_of_cycle(&c, &h), Ok(3));
        let ring = SparseBinaryMatrix::from_dense(&[&[1, 1, 0], &[0, 1, 1], &[1, 0, 1]]);
        let six = Cycle {
            variables: vec![0, 1, 2],
            checks: vec![0, 1, 2],
        };
        assert_eq!(ace_of_cycle(&six, &ring), Ok(0));
        let bogus = Cycle {
            variables: vec![0, 2],
            checks: vec![0, 1],
        };
        assert!(ace_of_cycle(&bogus, &ring).is_err());
    }

    #[test]
    fn ace_profile_mixed_lengths() {
        // v0, v2, v3 have degree 2 and v1 degree 5. Through v0 run one
        // 4-cycle (v0 c0 v1 c1, ACE 3) and one 6-cycle (v0 c0 v2 c2 v3 c1, ACE 0).
        let h = SparseBinaryMatrix::from_rows(
            4,
            vec![
                vec![0, 1, 2],
                vec![0, 1, 3],
                vec![2, 3],
                vec![1],
                vec![1],
                vec![1],
            ],
        )
        .unwrap();
        let census = count_cycles(&h);
        assert_eq!(census.girth, Some(4));
        let p = ace_profile(&census);
        assert_eq!(p.per_length[0][0], Some(3.0));
        assert_eq!(p.per_length[0][1], Some(0.0));
        assert_eq!(p.score[0], Some(0.0));
        assert_matches_oracle(&h);
    }

    #[test]
    fn regular_code_has_uniform_alpha() {
        let profile = DegreeProfile {
            variable: vec![3; 40],
            check: vec![6; 20],
        };
        let (h, _) = peg_from_profile(&profile, 5, AceParams::default());
        let p = ace_profile(&count_cycles(&h));
        // every cycle of length c has ACE c/2, so each length has one value
        for slot in 0..3 {
            let values: Vec<f64> = p.per_length.iter().filter_map(|a| a[slot]).collect();
            assert!(values.windows(2).all(|w| w[0] == w[1]), "slot {slot}");
        }
        let first = p.score[0].unwrap();
        assert!(p.score.iter().all(|&x| x == Some(first)));
    }

    #[test]
    fn incidence_identity() {
        let h = random_matrix(20, 40, 0.15, 3);
        let census = count_cycles(&h);
        for (slot, len) in census.lengths().unwrap().into_iter().enumerate() {
            let s: u64 = census.per_node.iter().map(|p| p.counts[slot]).sum();
            assert_eq!(s, census.totals[slot] * len as u64 / 2);
        }
    }

    #[test]
    fn girth_four_uses_enumeration_at_eight() {
        let h = random_matrix(12, 24, 0.25, 17);
        assert_eq!(girth(&h), Some(4));
        assert_matches_oracle(&h);
    }

    #[test]
    fn residual_removes_columns() {
        let h = block_diag_four_cycles();
        let r = residual_graph(&h, &[1]);
        assert_eq!(r.num_cols(), 3);
        assert_eq!(count_cycles_from(&r, 4).totals[0], 1);
    }

    #[test]
    fn census_json_shape() {
        let census = count_cycles(&block_diag_four_cycles());
        let json = serde_json::to_value(census_report(&census, StatsPopulation::AllNodes)).unwrap();
        assert_eq!(json["girth"], 4);
        assert_eq!(json["lengths"]["4"]["N_c"], 2);
        assert_eq!(json["per_node"].as_array().unwrap().len(), 4);
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(48))]

        #[test]
        fn matches_bruteforce(m in 2usize..14, n in 2usize..26, density in 0.05f64..0.35, seed in any::<u64>()) {
            let h = random_matrix(m, n, density, seed);
            assert_matches_oracle(&h);
        }

        #[test]
        fn deleting_an_edge_never_adds_cycles(seed in any::<u64>(), pick in any::<prop::sample::Index>()) {
            let h = random_matrix(15, 30, 0.15, seed);
            let entries: Vec<_> = h.entries().collect();
            prop_assume!(!entries.is_empty());
            let Some(g) = girth(&h) else { return Ok(()); };
            let (r, c) = entries[pick.index(entries.len())];
            let smaller = h.without_entry(r, c);
            let before = count_cycles_from(&h, g);
            let after = count_cycles_from(&smaller, g);
            for slot in 0..3 {
                prop_assert!(after.totals[slot] <= before.totals[slot]);
            }
        }
    }
}
