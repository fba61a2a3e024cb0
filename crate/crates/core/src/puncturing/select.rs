//! Cycle-count and ACE based selection of punctured parity nodes.

use std::cmp::Ordering;

use rand::seq::SliceRandom;
use serde::{Deserialize, Serialize};
use serde_json::json;

use super::{PunctureError, PuncturingPattern, Scheme};
use crate::cycles::{ace_profile, count_cycles};
use crate::gf2::SparseBinaryMatrix;
use crate::rng;

/// Order of the girth-cycle ranking. `Reverse` punctures the nodes on the
/// fewest girth cycles first; it exists to demonstrate how much worse that is.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum CcOrder {
    #[default]
    Forward,
    Reverse,
}

fn check_budget(h: &SparseBinaryMatrix, k: usize, p: usize) -> Result<(), PunctureError> {
    let n = h.num_cols();
    if k >= n {
        return Err(PunctureError::InvalidConfig(format!(
            "K = {k} must be below N = {n}"
        )));
    }
    if p >= n - k {
        return Err(PunctureError::TooMany { p, parity: n - k });
    }
    Ok(())
}

/// Larger α first; nodes without α last.
fn alpha_desc(a: Option<f64>, b: Option<f64>) -> Ordering {
    match (a, b) {
        (Some(x), Some(y)) => y.total_cmp(&x),
        (Some(_), None) => Ordering::Less,
        (None, Some(_)) => Ordering::Greater,
        (None, None) => Ordering::Equal,
    }
}

/// Punctures the `p` parity nodes lying on the most girth-length cycles.
///
/// Parity nodes on at least one girth cycle are ranked by that count
/// (descending for [`CcOrder::Forward`]). When they run out, the remaining
/// parity nodes follow, ranked by their (g+2, g+4) counts descending. Ties go
/// to the larger average ACE, then to the lower column.
pub fn cc_puncture(
    h: &SparseBinaryMatrix,
    k: usize,
    p: usize,
    order: CcOrder,
) -> Result<PuncturingPattern, PunctureError> {
    check_budget(h, k, p)?;
    let census = count_cycles(h);
    let alpha = ace_profile(&census).score;
    let counts = |v: usize| census.per_node[v].counts;

    let (mut primary, mut rest): (Vec<usize>, Vec<usize>) =
        (k..h.num_cols()).partition(|&v| counts(v)[0] > 0);
    primary.sort_by(|&a, &b| {
        let by_count = match order {
            CcOrder::Forward => counts(b)[0].cmp(&counts(a)[0]),
            CcOrder::Reverse => counts(a)[0].cmp(&counts(b)[0]),
        };
        by_count
            .then_with(|| alpha_desc(alpha[a], alpha[b]))
            .then(a.cmp(&b))
    });
    rest.sort_by(|&a, &b| {
        (counts(b)[1], counts(b)[2])
            .cmp(&(counts(a)[1], counts(a)[2]))
            .then_with(|| alpha_desc(alpha[a], alpha[b]))
            .then(a.cmp(&b))
    });
    let overflow = p.saturating_sub(primary.len());
    if overflow > 0 {
        log::info!("cc puncturing: {} girth-cycle candidates, {overflow} taken from the longer-cycle ranking", primary.len());
    }
    let indices: Vec<usize> = primary.into_iter().chain(rest).take(p).collect();
    let params = json!({ "order": order, "girth": census.girth, "overflow": overflow });
    Ok(PuncturingPattern::new(h, k, indices, Scheme::Cc, params))
}

/// Punctures the `p` parity nodes whose cycles have the smallest average ACE.
///
/// Nodes on no cycle of the census lengths are never punctured. Ties go to
/// the node on more girth cycles, then to the lower column. Codes whose
/// variable nodes all share one degree are rejected: every cycle of a given
/// length then has the same ACE and the ranking carries no information.
pub fn ace_puncture(
    h: &SparseBinaryMatrix,
    k: usize,
    p: usize,
) -> Result<PuncturingPattern, PunctureError> {
    check_budget(h, k, p)?;
    let degrees = h.col_degrees();
    if degrees.windows(2).all(|w| w[0] == w[1]) {
        return Err(PunctureError::UnsupportedCode(format!(
            "ACE puncturing needs an irregular code; every variable node has degree {}",
            degrees.first().copied().unwrap_or(0)
        )));
    }
    let census = count_cycles(h);
    let alpha = ace_profile(&census).score;
    let mut candidates: Vec<(usize, f64)> = (k..h.num_cols())
        .filter_map(|v| alpha[v].map(|a| (v, a)))
        .collect();
    if candidates.len() < p {
        return Err(PunctureError::NotEnoughCandidates {
            requested: p,
            available: candidates.len(),
        });
    }
    candidates.sort_by(|&(a, x), &(b, y)| {
        x.total_cmp(&y)
            .then_with(|| census.girth_count(b).cmp(&census.girth_count(a)))
            .then(a.cmp(&b))
    });
    let indices = candidates.into_iter().take(p).map(|(v, _)| v).collect();
    let params = json!({ "girth": census.girth });
    Ok(PuncturingPattern::new(h, k, indices, Scheme::Ace, params))
}

/// Uniformly random parity positions, in random order.
pub fn random_puncture(
    h: &SparseBinaryMatrix,
    k: usize,
    p: usize,
    seed: u64,
) -> Result<PuncturingPattern, PunctureError> {
    check_budget(h, k, p)?;
    let mut parity: Vec<usize> = (k..h.num_cols()).collect();
    parity.shuffle(&mut rng::seeded(seed));
    parity.truncate(p);
    Ok(PuncturingPattern::new(
        h,
        k,
        parity,
        Scheme::Random,
        json!({ "seed": seed }),
    ))
}
