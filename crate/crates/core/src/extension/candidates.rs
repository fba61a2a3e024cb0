//! Candidate extension submatrices and the two selection rules.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::{extend, ExtensionError, ExtensionLadder, ExtensionPlan};
use crate::construction::{
    peg_from_profile, quantize_degrees, random_from_profile, AceParams, DegreeDistribution,
};
use crate::cycles::count_cycles;
use crate::gf2::{rank_gf2, SparseBinaryMatrix};
use crate::rng;

/// Constructions tried per candidate before settling for a singular one.
const RANK_ATTEMPTS: u64 = 32;

/// A B×B extension submatrix with its cycle metrics.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SubmatrixCandidate {
    pub index: usize,
    /// Position of the generating distribution in the input list.
    pub distribution: usize,
    pub seed: u64,
    #[serde(skip)]
    pub h: SparseBinaryMatrix,
    /// Local girth g_h; `None` if acyclic.
    pub girth: Option<usize>,
    /// N_g(h), the number of cycles of length g_h.
    pub girth_cycles: u64,
    /// α(g_h), the average ACE of those cycles.
    pub alpha: Option<f64>,
    /// Only nonsingular submatrices can extend a code without changing K.
    pub nonsingular: bool,
}

fn describe(
    h: SparseBinaryMatrix,
    index: usize,
    distribution: usize,
    seed: u64,
) -> SubmatrixCandidate {
    let census = count_cycles(&h);
    let (count, ace) = census.per_node.iter().fold((0u64, 0u64), |(c, a), node| {
        (c + node.counts[0], a + node.ace_sums[0])
    });
    let nonsingular = h.num_rows() == h.num_cols() && rank_gf2(&h) == h.num_rows();
    SubmatrixCandidate {
        index,
        distribution,
        seed,
        girth: census.girth,
        girth_cycles: census.girth.map_or(0, |_| census.totals[0]),
        // every cycle is counted once per variable node on it, in both sums
        alpha: (count > 0).then(|| ace as f64 / count as f64),
        nonsingular,
        h,
    }
}

fn within_caps(dist: &DegreeDistribution, dv_max: usize, dc_max: usize) -> bool {
    dist.variable.max_degree() <= dv_max && dist.check.max_degree() <= dc_max
}

/// One ACE-PEG submatrix per distribution, with its girth, girth-cycle count
/// and average ACE.
///
/// Distributions exceeding the degree caps or not realizable on B×B are
/// skipped with a warning. Each construction is retried with derived seeds
/// until the submatrix is nonsingular; if that never happens the last
/// attempt is kept and marked.
pub fn build_candidates(
    plan: &ExtensionPlan,
    dv_max: usize,
    dc_max: usize,
    distributions: &[DegreeDistribution],
    seed: u64,
    ace: AceParams,
) -> Result<Vec<SubmatrixCandidate>, ExtensionError> {
    let b = plan.b;
    let built: Vec<Option<SubmatrixCandidate>> = distributions
        .par_iter()
        .enumerate()
        .map(|(s, dist)| {
            if !within_caps(dist, dv_max, dc_max) {
                log::warn!("extension candidate {s}: distribution exceeds d_v ≤ {dv_max} / d_c ≤ {dc_max}, skipped");
                return None;
            }
            let profile = match quantize_degrees(dist, b, b) {
                Ok(p) => p,
                Err(e) => {
                    log::warn!("extension candidate {s}: {e}, skipped");
                    return None;
                }
            };
            let mut last = None;
            for attempt in 0..RANK_ATTEMPTS {
                let cand_seed = rng_seed(seed, s as u64, attempt);
                let (h, _) = peg_from_profile(&profile, cand_seed, ace);
                let c = describe(h, s, s, cand_seed);
                if c.nonsingular {
                    return Some(c);
                }
                last = Some(c);
            }
            log::warn!("extension candidate {s}: no nonsingular construction in {RANK_ATTEMPTS} attempts");
            last
        })
        .collect();
    let candidates: Vec<SubmatrixCandidate> = built
        .into_iter()
        .flatten()
        .enumerate()
        .map(|(i, c)| SubmatrixCandidate { index: i, ..c })
        .collect();
    if candidates.is_empty() {
        return Err(ExtensionError::NoCandidates(
            "every distribution was infeasible".into(),
        ));
    }
    Ok(candidates)
}

fn rng_seed(seed: u64, s: u64, attempt: u64) -> u64 {
    use rand::RngCore;
    rng::stream(seed, &[s, attempt]).next_u64()
}

/// Largest local girth, then fewest girth cycles, then lowest index.
pub fn select_cc(candidates: &[SubmatrixCandidate]) -> Result<usize, ExtensionError> {
    let girth = |c: &SubmatrixCandidate| c.girth.unwrap_or(usize::MAX);
    let first = candidates
        .first()
        .ok_or_else(|| ExtensionError::NoCandidates("empty candidate list".into()))?;
    let best = candidates.iter().skip(1).fold(first, |best, c| {
        if (girth(c), std::cmp::Reverse(c.girth_cycles))
            > (girth(best), std::cmp::Reverse(best.girth_cycles))
        {
            c
        } else {
            best
        }
    });
    Ok(best.index)
}

/// Largest average ACE, then largest local girth, then lowest index.
pub fn select_ace(candidates: &[SubmatrixCandidate]) -> Result<usize, ExtensionError> {
    let alpha = |c: &SubmatrixCandidate| c.alpha.unwrap_or(f64::INFINITY);
    let girth = |c: &SubmatrixCandidate| c.girth.unwrap_or(usize::MAX);
    let first = candidates
        .first()
        .ok_or_else(|| ExtensionError::NoCandidates("empty candidate list".into()))?;
    let best = candidates.iter().skip(1).fold(first, |best, c| {
        let better = match alpha(c).total_cmp(&alpha(best)) {
            std::cmp::Ordering::Greater => true,
            std::cmp::Ordering::Equal => girth(c) > girth(best),
            std::cmp::Ordering::Less => false,
        };
        if better {
            c
        } else {
            best
        }
    });
    Ok(best.index)
}

/// A nonsingular B×B submatrix with the degrees of `dist` but edges placed
/// at random: the baseline without any cycle conditioning.
pub fn random_control(
    dist: &DegreeDistribution,
    b: usize,
    seed: u64,
) -> Result<SparseBinaryMatrix, ExtensionError> {
    let profile = quantize_degrees(dist, b, b)?;
    for attempt in 0..RANK_ATTEMPTS {
        let h = random_from_profile(&profile, rng_seed(seed, u64::MAX, attempt));
        if rank_gf2(&h) == b {
            return Ok(h);
        }
    }
    Err(ExtensionError::NoCandidates(format!(
        "no nonsingular random submatrix in {RANK_ATTEMPTS} attempts"
    )))
}

/// Edge-perspective polynomial from node fractions `(degree, fraction)`.
fn from_nodes(nodes: &[(u32, f64)]) -> Vec<(f64, u32)> {
    let mean: f64 = nodes.iter().map(|&(d, f)| d as f64 * f).sum();
    nodes
        .iter()
        .map(|&(d, f)| (d as f64 * f / mean, d - 1))
        .collect()
}

/// The four B×B distributions shipped for d_v ≤ 7: every one has equal mean
/// variable and check degree (a square matrix) and odd-degree columns, which
/// nonsingularity needs.
pub fn default_distributions() -> Vec<DegreeDistribution> {
    let pair =
        |v: &[(u32, f64)], c: &[(u32, f64)]| DegreeDistribution::new(from_nodes(v), from_nodes(c));
    vec![
        pair(&[(3, 0.6), (4, 0.4)], &[(3, 0.6), (4, 0.4)]),
        pair(&[(2, 0.5), (3, 0.3), (4, 0.2)], &[(2, 0.3), (3, 0.7)]),
        pair(&[(2, 0.4), (3, 0.4), (7, 0.2)], &[(3, 0.6), (4, 0.4)]),
        pair(&[(3, 0.7), (5, 0.3)], &[(3, 0.4), (4, 0.6)]),
    ]
}

/// How the extension submatrix is chosen.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ExtensionScheme {
    Cc,
    Ace,
    /// Random edges with the degrees of the ACE choice; a control.
    Random,
}

impl std::fmt::Display for ExtensionScheme {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Self::Cc => "cc",
            Self::Ace => "ace",
            Self::Random => "random",
        })
    }
}

/// Outcome of [`design_extension`]: the ladder and how its submatrix was
/// chosen.
#[derive(Debug, Clone)]
pub struct ExtensionDesign {
    pub ladder: ExtensionLadder,
    pub scheme: ExtensionScheme,
    pub candidates: Vec<SubmatrixCandidate>,
    /// Index of the chosen candidate (for `Random`, the candidate whose
    /// degrees were reused).
    pub selected: usize,
}

/// Builds the candidates, selects one by `scheme` among the nonsingular
/// ones and extends `h` with it.
pub fn design_extension(
    h: &SparseBinaryMatrix,
    plan: &ExtensionPlan,
    scheme: ExtensionScheme,
    distributions: &[DegreeDistribution],
    dv_max: usize,
    dc_max: usize,
    seed: u64,
) -> Result<ExtensionDesign, ExtensionError> {
    let candidates = build_candidates(
        plan,
        dv_max,
        dc_max,
        distributions,
        seed,
        AceParams::default(),
    )?;
    let usable: Vec<SubmatrixCandidate> = candidates
        .iter()
        .filter(|c| c.nonsingular)
        .cloned()
        .collect();
    if usable.is_empty() {
        return Err(ExtensionError::NoCandidates(
            "no candidate submatrix is nonsingular".into(),
        ));
    }
    let selected = match scheme {
        ExtensionScheme::Cc => select_cc(&usable)?,
        ExtensionScheme::Ace | ExtensionScheme::Random => select_ace(&usable)?,
    };
    let h_ext = match scheme {
        ExtensionScheme::Random => random_control(
            &distributions[candidates[selected].distribution],
            plan.b,
            seed,
        )?,
        _ => candidates[selected].h.clone(),
    };
    let ladder = extend(h, &h_ext, plan)?;
    Ok(ExtensionDesign {
        ladder,
        scheme,
        candidates,
        selected,
    })
}
