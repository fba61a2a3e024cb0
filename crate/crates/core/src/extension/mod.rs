//! Multi-level extension: lowering the rate of a mother code by appending
//! B new checks and B new parity bits per level.
//!
//! Level `l` adds the rows
//!
//! ```text
//! [ 0 … 0 | I_B | h_ext ]
//! ```
//!
//! where `I_B` sits on the B columns added by level `l − 1` (the mother's
//! last B columns for level 1) and `h_ext` on the B new columns. Every
//! level's matrix is therefore the leading block of the next one, and the
//! identity blocks of consecutive levels never share a column.

mod candidates;
mod ladder_io;

use serde::{Deserialize, Serialize};
use thiserror::Error;

pub use candidates::{
    build_candidates, default_distributions, design_extension, random_control, select_ace,
    select_cc, ExtensionDesign, ExtensionScheme, SubmatrixCandidate,
};
pub use ladder_io::{load_ladder, save_ladder, LadderManifest, LevelEntry};

use crate::construction::ConstructionError;
use crate::gf2::{rank_gf2, systematize, GeneratorMatrix, SparseBinaryMatrix};
use crate::Rate;

#[derive(Debug, Error)]
pub enum ExtensionError {
    #[error("invalid target rates: {0}")]
    InvalidTargets(String),
    #[error("no common level size fits the targets: {reason}; nearest feasible rates {nearest:?}")]
    Infeasible {
        reason: String,
        nearest: Vec<String>,
    },
    #[error("no usable extension candidate: {0}")]
    NoCandidates(String),
    #[error("invalid extension submatrix: {0}")]
    InvalidSubmatrix(String),
    #[error("level {level} is rank deficient: rank {rank} < {rows} rows")]
    RankDeficient {
        level: usize,
        rank: usize,
        rows: usize,
    },
    #[error("inconsistent ladder: {0}")]
    Inconsistent(String),
    #[error(transparent)]
    Construction(#[from] ConstructionError),
    #[error(transparent)]
    Alist(#[from] crate::gf2::AlistError),
    #[error(transparent)]
    Generator(#[from] crate::gf2::GeneratorFileError),
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

/// Level size and the levels at which the requested rates appear.
///
/// Level `l` has rate K/(N + l·B). B is the largest block that reaches every
/// target, so levels between targets are built as well (the ladder for
/// 5/12, 5/13, 5/14 from an N = 1000, K = 500 mother has B = 100 and its
/// targets at levels 2, 3 and 4).
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ExtensionPlan {
    #[serde(rename = "M")]
    pub m: usize,
    #[serde(rename = "N")]
    pub n: usize,
    #[serde(rename = "K")]
    pub k: usize,
    #[serde(rename = "B")]
    pub b: usize,
    pub targets: Vec<Rate>,
    /// Level of each target.
    pub target_levels: Vec<usize>,
}

impl ExtensionPlan {
    /// L, the number of requested rates.
    pub fn levels(&self) -> usize {
        self.targets.len()
    }

    /// Number of levels actually built (the deepest target's level).
    pub fn depth(&self) -> usize {
        self.target_levels.iter().copied().max().unwrap_or(0)
    }

    pub fn mother_rate(&self) -> Rate {
        Rate::new(self.k as u64, self.n as u64)
    }

    pub fn rate_at(&self, level: usize) -> Rate {
        Rate::new(self.k as u64, (self.n + level * self.b) as u64)
    }

    /// Level whose rate is exactly `rate`.
    pub fn level_of(&self, rate: Rate) -> Option<usize> {
        (0..=self.depth()).find(|&l| self.rate_at(l) == rate)
    }
}

/// Chooses B and the target levels for an (M, N, K) mother code.
pub fn plan_levels(
    m: usize,
    n: usize,
    k: usize,
    targets: &[Rate],
) -> Result<ExtensionPlan, ExtensionError> {
    if targets.is_empty() {
        return Err(ExtensionError::InvalidTargets("no target rates".into()));
    }
    if k == 0 || k >= n {
        return Err(ExtensionError::InvalidTargets(format!(
            "mother code has K = {k}, N = {n}"
        )));
    }
    let mother = Rate::new(k as u64, n as u64);
    if targets.windows(2).any(|w| w[0] <= w[1]) {
        return Err(ExtensionError::InvalidTargets(
            "targets must be strictly decreasing".into(),
        ));
    }
    if let Some(t) = targets
        .iter()
        .find(|&&t| t >= mother || t == Rate::from_integer(0))
    {
        return Err(ExtensionError::InvalidTargets(format!(
            "target {t} is not below the mother rate {mother}"
        )));
    }

    let mut added = Vec::with_capacity(targets.len());
    let mut bad = Vec::new();
    let mut nearest = Vec::new();
    for &t in targets {
        // N_l = K / R_l must be an integer
        let length = Rate::from_integer(k as u64) / t;
        if length.is_integer() {
            added.push(length.to_integer() as usize - n);
        } else {
            bad.push(t.to_string());
            for cand in [length.floor().to_integer(), length.ceil().to_integer()] {
                if cand as usize > n {
                    nearest.push(Rate::new(k as u64, cand).to_string());
                }
            }
        }
    }
    if !bad.is_empty() {
        return Err(ExtensionError::Infeasible {
            reason: format!("K/R is not an integer block length for {}", bad.join(", ")),
            nearest,
        });
    }
    let b = added.iter().fold(0, |acc, &a| gcd(acc, a));
    Ok(ExtensionPlan {
        m,
        n,
        k,
        b,
        targets: targets.to_vec(),
        target_levels: added.iter().map(|a| a / b).collect(),
    })
}

fn gcd(a: usize, b: usize) -> usize {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

/// One built level of a ladder.
#[derive(Debug, Clone)]
pub struct ExtensionLevel {
    pub level: usize,
    pub h: SparseBinaryMatrix,
    pub g: GeneratorMatrix,
}

impl ExtensionLevel {
    pub fn rate(&self) -> Rate {
        Rate::new(self.g.k() as u64, self.h.num_cols() as u64)
    }
}

#[derive(Debug, Clone)]
pub struct ExtensionLadder {
    pub plan: ExtensionPlan,
    pub mother: SparseBinaryMatrix,
    pub h_ext: SparseBinaryMatrix,
    /// Levels 1 ..= depth, in order.
    pub levels: Vec<ExtensionLevel>,
}

impl ExtensionLadder {
    pub fn level(&self, l: usize) -> Option<&ExtensionLevel> {
        l.checked_sub(1).and_then(|i| self.levels.get(i))
    }

    pub fn level_for_rate(&self, rate: Rate) -> Option<&ExtensionLevel> {
        self.plan.level_of(rate).and_then(|l| self.level(l))
    }

    pub fn deepest(&self) -> &ExtensionLevel {
        self.levels.last().expect("a ladder has at least one level")
    }
}

/// Rows added by level `level` (1-based) for a mother with `m` rows and
/// `n` columns.
fn level_rows(n: usize, b: usize, level: usize, h_ext: &SparseBinaryMatrix) -> Vec<Vec<usize>> {
    let first_new = n + (level - 1) * b;
    let coupled = first_new - b;
    (0..b)
        .map(|i| {
            let mut row = vec![coupled + i];
            row.extend(h_ext.row(i).iter().map(|&c| first_new + c));
            row
        })
        .collect()
}

/// Builds every level of the ladder and a systematic generator for each.
pub fn extend(
    h: &SparseBinaryMatrix,
    h_ext: &SparseBinaryMatrix,
    plan: &ExtensionPlan,
) -> Result<ExtensionLadder, ExtensionError> {
    let (m, n, b) = (h.num_rows(), h.num_cols(), plan.b);
    if (m, n) != (plan.m, plan.n) {
        return Err(ExtensionError::Inconsistent(format!(
            "plan is for a {}×{} mother, matrix is {m}×{n}",
            plan.m, plan.n
        )));
    }
    if h_ext.num_rows() != b || h_ext.num_cols() != b {
        return Err(ExtensionError::InvalidSubmatrix(format!(
            "h_ext is {}×{}, the plan needs {b}×{b}",
            h_ext.num_rows(),
            h_ext.num_cols()
        )));
    }
    if b > n {
        return Err(ExtensionError::InvalidSubmatrix(format!(
            "B = {b} exceeds the mother length {n}"
        )));
    }
    let rank = rank_gf2(h_ext);
    if rank < b {
        return Err(ExtensionError::InvalidSubmatrix(format!(
            "h_ext has rank {rank} < {b}"
        )));
    }

    let mut rows: Vec<Vec<usize>> = h.rows().map(|r| r.to_vec()).collect();
    let mut levels = Vec::with_capacity(plan.depth());
    for level in 1..=plan.depth() {
        rows.extend(level_rows(n, b, level, h_ext));
        let cols = n + level * b;
        let hl = SparseBinaryMatrix::from_rows(cols, rows.clone())
            .map_err(|e| ExtensionError::Inconsistent(e.to_string()))?;
        let g = systematize(&hl).map_err(|e| ExtensionError::RankDeficient {
            level,
            rank: e.rank,
            rows: e.rows,
        })?;
        if g.k() != plan.k {
            return Err(ExtensionError::Inconsistent(format!(
                "level {level} has dimension {}, expected {}",
                g.k(),
                plan.k
            )));
        }
        if let Some(&p) = g.info_positions().iter().find(|&&p| p >= n) {
            return Err(ExtensionError::Inconsistent(format!(
                "level {level} places information bit {p} outside the mother"
            )));
        }
        levels.push(ExtensionLevel { level, h: hl, g });
    }
    Ok(ExtensionLadder {
        plan: plan.clone(),
        mother: h.clone(),
        h_ext: h_ext.clone(),
        levels,
    })
}
