//! Puncturing patterns and the cycle-aware pattern selectors.

mod select;
mod sim;

use std::path::Path;

use serde::{Deserialize, Serialize};
use thiserror::Error;

pub use select::{ace_puncture, cc_puncture, random_puncture, CcOrder};
pub use sim::{sim_puncture, PatternScore, SimPuncturingConfig, SimSearch};

use crate::gf2::{content_hash, SparseBinaryMatrix};
use crate::Rate;

#[derive(Debug, Error)]
pub enum PunctureError {
    #[error("cannot puncture {p} bits: the parity region has only {parity} positions and one must remain")]
    TooMany { p: usize, parity: usize },
    #[error("unsupported code: {0}")]
    UnsupportedCode(String),
    #[error("only {available} puncturing candidates, {requested} requested")]
    NotEnoughCandidates { requested: usize, available: usize },
    #[error("pattern belongs to code {expected}, not to code {found}")]
    HashMismatch { expected: String, found: String },
    #[error("invalid pattern: {0}")]
    InvalidPattern(String),
    #[error("length mismatch: expected {expected}, got {got}")]
    LengthMismatch { expected: usize, got: usize },
    #[error("invalid configuration: {0}")]
    InvalidConfig(String),
    #[error(transparent)]
    Encode(#[from] crate::gf2::EncodeError),
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Scheme {
    Cc,
    Ace,
    Sim,
    Random,
}

impl std::fmt::Display for Scheme {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Scheme::Cc => "cc",
            Scheme::Ace => "ace",
            Scheme::Sim => "sim",
            Scheme::Random => "random",
        })
    }
}

/// An ordered list of punctured columns of a mother code.
///
/// The order is the selection order, so every prefix is itself a pattern and
/// shorter prefixes puncture subsets of longer ones.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PuncturingPattern {
    pub mother_hash: String,
    #[serde(rename = "N")]
    pub n: usize,
    #[serde(rename = "K")]
    pub k: usize,
    pub indices: Vec<usize>,
    pub scheme: Scheme,
    #[serde(default)]
    pub params: serde_json::Value,
}

impl PuncturingPattern {
    pub(crate) fn new(
        h: &SparseBinaryMatrix,
        k: usize,
        indices: Vec<usize>,
        scheme: Scheme,
        params: serde_json::Value,
    ) -> Self {
        Self {
            mother_hash: content_hash(h),
            n: h.num_cols(),
            k,
            indices,
            scheme,
            params,
        }
    }

    /// P, the number of punctured bits.
    pub fn len(&self) -> usize {
        self.indices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.indices.is_empty()
    }

    /// R′ = K/(N − P).
    pub fn rate(&self) -> Rate {
        Rate::new(self.k as u64, (self.n - self.len()) as u64)
    }

    /// ρ = P/N.
    pub fn puncturing_rate(&self) -> Rate {
        Rate::new(self.len() as u64, self.n as u64)
    }

    /// Punctured positions in ascending order.
    pub fn sorted(&self) -> Vec<usize> {
        let mut v = self.indices.clone();
        v.sort_unstable();
        v
    }

    /// Transmitted positions in ascending order.
    pub fn transmitted(&self) -> Vec<usize> {
        let mut gone = vec![false; self.n];
        for &i in &self.indices {
            gone[i] = true;
        }
        (0..self.n).filter(|&i| !gone[i]).collect()
    }

    /// The first `p` punctured positions.
    pub fn prefix(&self, p: usize) -> Self {
        Self {
            indices: self.indices[..p.min(self.len())].to_vec(),
            ..self.clone()
        }
    }

    pub fn validate(&self) -> Result<(), PunctureError> {
        if self.k >= self.n {
            return Err(PunctureError::InvalidPattern(format!(
                "K = {} must be below N = {}",
                self.k, self.n
            )));
        }
        if self.len() >= self.n - self.k {
            return Err(PunctureError::TooMany {
                p: self.len(),
                parity: self.n - self.k,
            });
        }
        let mut seen = vec![false; self.n];
        for &i in &self.indices {
            if i < self.k || i >= self.n {
                return Err(PunctureError::InvalidPattern(format!(
                    "index {i} outside the parity region {}..{}",
                    self.k, self.n
                )));
            }
            if std::mem::replace(&mut seen[i], true) {
                return Err(PunctureError::InvalidPattern(format!("index {i} repeated")));
            }
        }
        Ok(())
    }

    /// Rejects the pattern unless it was made for `h`.
    pub fn check_mother(&self, h: &SparseBinaryMatrix) -> Result<(), PunctureError> {
        let found = content_hash(h);
        if found != self.mother_hash {
            return Err(PunctureError::HashMismatch {
                expected: self.mother_hash.clone(),
                found,
            });
        }
        if h.num_cols() != self.n {
            return Err(PunctureError::LengthMismatch {
                expected: self.n,
                got: h.num_cols(),
            });
        }
        Ok(())
    }
}

/// P giving the rate closest to `target` for an (N, K) mother code, and
/// whether that rate is exact.
pub fn punctures_for_rate(n: usize, k: usize, target: Rate) -> (usize, bool) {
    // N − K/R′, rounded to the nearest integer
    let ideal = Rate::from_integer(n as u64) - Rate::from_integer(k as u64) / target;
    let p = ideal.round().to_integer() as usize;
    (p, ideal.is_integer())
}

/// Drops the punctured positions of a codeword, keeping the order of the rest.
pub fn apply_pattern(bits: &[u8], pattern: &PuncturingPattern) -> Result<Vec<u8>, PunctureError> {
    if bits.len() != pattern.n {
        return Err(PunctureError::LengthMismatch {
            expected: pattern.n,
            got: bits.len(),
        });
    }
    Ok(pattern.transmitted().into_iter().map(|i| bits[i]).collect())
}

/// Inverse of [`apply_pattern`]: spreads `received` back to length N with
/// `fill` at the punctured positions.
pub fn reinsert<T: Copy>(
    received: &[T],
    pattern: &PuncturingPattern,
    fill: T,
) -> Result<Vec<T>, PunctureError> {
    let positions = pattern.transmitted();
    if received.len() != positions.len() {
        return Err(PunctureError::LengthMismatch {
            expected: positions.len(),
            got: received.len(),
        });
    }
    let mut out = vec![fill; pattern.n];
    for (&p, &x) in positions.iter().zip(received) {
        out[p] = x;
    }
    Ok(out)
}

pub fn save_pattern(
    pattern: &PuncturingPattern,
    path: impl AsRef<Path>,
) -> Result<(), PunctureError> {
    std::fs::write(path, serde_json::to_string_pretty(pattern)? + "\n")?;
    Ok(())
}

/// Reads a pattern and verifies it against its mother code.
pub fn load_pattern(
    path: impl AsRef<Path>,
    mother: &SparseBinaryMatrix,
) -> Result<PuncturingPattern, PunctureError> {
    let pattern: PuncturingPattern = serde_json::from_str(&std::fs::read_to_string(path)?)?;
    pattern.check_mother(mother)?;
    pattern.validate()?;
    Ok(pattern)
}
