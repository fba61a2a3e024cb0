//! Irregular mother-code construction.

mod degree;
mod peg;

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};
use thiserror::Error;

pub use degree::{quantize_degrees, DegreeDistribution, DegreeProfile, EdgePolynomial};
pub use peg::{peg_construct, peg_from_profile, random_from_profile, AceParams, PegStats};

use crate::cycles::girth;
use crate::gf2::{rank_gf2, SparseBinaryMatrix};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ConstructionError {
    #[error("invalid degree distribution: {0}")]
    InvalidDistribution(String),
    #[error("invalid dimensions: {0}")]
    InvalidDimensions(String),
    #[error("design rate {design:.4} is not within 0.02 of the target rate {target:.4}")]
    RateMismatch { design: f64, target: f64 },
    #[error("infeasible degree profile: {0}")]
    Infeasible(String),
}

fn default_ace_depth() -> usize {
    AceParams::default().depth
}

fn default_ace_threshold() -> i64 {
    AceParams::default().threshold
}

/// Mother-code construction parameters, read from and written to JSON as
/// `{N, M, mu, nu, seed, ace_depth, ace_threshold}`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConstructionConfig {
    #[serde(rename = "N")]
    pub n: usize,
    #[serde(rename = "M")]
    pub m: usize,
    #[serde(flatten)]
    pub distribution: DegreeDistribution,
    pub seed: u64,
    #[serde(default = "default_ace_depth")]
    pub ace_depth: usize,
    #[serde(default = "default_ace_threshold")]
    pub ace_threshold: i64,
}

impl ConstructionConfig {
    pub fn new(n: usize, m: usize, distribution: DegreeDistribution, seed: u64) -> Self {
        Self {
            n,
            m,
            distribution,
            seed,
            ace_depth: default_ace_depth(),
            ace_threshold: default_ace_threshold(),
        }
    }

    /// (N − M)/N.
    pub fn target_rate(&self) -> f64 {
        (self.n - self.m) as f64 / self.n as f64
    }

    pub fn ace_params(&self) -> AceParams {
        AceParams {
            depth: self.ace_depth,
            threshold: self.ace_threshold,
        }
    }

    pub fn validate(&self) -> Result<(), ConstructionError> {
        if !(self.n > self.m && self.m > 0) {
            return Err(ConstructionError::InvalidDimensions(format!(
                "need N > M > 0, got N = {}, M = {}",
                self.n, self.m
            )));
        }
        self.distribution.validate()?;
        let design = self.distribution.design_rate();
        let target = self.target_rate();
        if (design - target).abs() > 0.02 {
            return Err(ConstructionError::RateMismatch { design, target });
        }
        Ok(())
    }
}

/// Summary of a parity-check matrix.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConstructionReport {
    #[serde(rename = "N")]
    pub n: usize,
    #[serde(rename = "M")]
    pub m: usize,
    /// N − M, the design dimension.
    #[serde(rename = "K")]
    pub k: usize,
    pub rank: usize,
    pub rate: f64,
    /// `None` when the Tanner graph has no cycles.
    pub girth: Option<usize>,
    pub edges: usize,
    pub variable_degrees: BTreeMap<usize, usize>,
    pub check_degrees: BTreeMap<usize, usize>,
}

pub fn construction_report(h: &SparseBinaryMatrix) -> ConstructionReport {
    let histogram = |degrees: Vec<usize>| {
        let mut hist = BTreeMap::new();
        for d in degrees {
            *hist.entry(d).or_insert(0) += 1;
        }
        hist
    };
    let n = h.num_cols();
    let m = h.num_rows();
    let k = n.saturating_sub(m);
    ConstructionReport {
        n,
        m,
        k,
        rank: rank_gf2(h),
        rate: if n == 0 { 0.0 } else { k as f64 / n as f64 },
        girth: girth(h),
        edges: h.num_edges(),
        variable_degrees: histogram(h.col_degrees()),
        check_degrees: histogram(h.row_degrees()),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn code_a(seed: u64) -> ConstructionConfig {
        ConstructionConfig::new(
            1000,
            500,
            DegreeDistribution::new(
                vec![(0.21, 5), (0.25, 3), (0.25, 2), (0.29, 1)],
                vec![(1.0, 5)],
            ),
            seed,
        )
    }

    fn regular_36(n: usize, seed: u64) -> ConstructionConfig {
        ConstructionConfig::new(
            n,
            n / 2,
            DegreeDistribution::new(vec![(1.0, 2)], vec![(1.0, 5)]),
            seed,
        )
    }

    #[test]
    fn single_check_two_degree_one_nodes() {
        let profile = DegreeProfile {
            variable: vec![1, 1],
            check: vec![2],
        };
        let (h, stats) = peg_from_profile(&profile, 0, AceParams::default());
        assert_eq!(h.num_edges(), 2);
        assert_eq!(girth(&h), None);
        assert_eq!(stats, PegStats::default());
    }

    #[test]
    fn regular_36_has_no_four_cycles() {
        let h = peg_construct(&regular_36(100, 1)).unwrap();
        let g = girth(&h).unwrap();
        assert!(g >= 6, "girth {g}");
        assert!(h.col_degrees().iter().all(|&d| d == 3));
        assert!(h.row_degrees().iter().all(|&d| d == 6));
    }

    #[test]
    fn deterministic_given_seed() {
        let a = peg_construct(&regular_36(60, 9)).unwrap();
        let b = peg_construct(&regular_36(60, 9)).unwrap();
        let c = peg_construct(&regular_36(60, 10)).unwrap();
        assert_eq!(a, b);
        assert_ne!(a, c);
    }

    #[test]
    fn code_a_degree_fidelity_and_girth() {
        let cfg = code_a(1);
        let profile = quantize_degrees(&cfg.distribution, cfg.n, cfg.m).unwrap();
        let (h, stats) = peg_from_profile(&profile, cfg.seed, cfg.ace_params());
        assert_eq!(stats.capacity_overflows, 0);
        assert_eq!(h.col_degrees(), profile.variable);
        let mut rows = h.row_degrees();
        rows.sort_unstable_by(|a, b| b.cmp(a));
        assert_eq!(rows, profile.check);
        assert!(h.col_degrees().windows(2).all(|w| w[0] >= w[1]));
        let report = construction_report(&h);
        assert_eq!(report.rate, 0.5);
        assert_eq!(report.k, 500);
        assert_eq!(report.girth, Some(8));
    }

    #[test]
    fn seeds_change_wiring_not_histograms() {
        let a = construction_report(&peg_construct(&code_a(2)).unwrap());
        let b = construction_report(&peg_construct(&code_a(3)).unwrap());
        assert_eq!(a.variable_degrees, b.variable_degrees);
        assert_eq!(a.check_degrees, b.check_degrees);
    }

    #[test]
    fn report_for_all_ones() {
        let h = SparseBinaryMatrix::from_dense(&[&[1, 1], &[1, 1]]);
        let r = construction_report(&h);
        assert_eq!((r.n, r.m, r.girth, r.edges), (2, 2, Some(4), 4));
    }

    #[test]
    fn config_json_shape() {
        let cfg = code_a(7);
        let json = serde_json::to_value(&cfg).unwrap();
        for key in ["N", "M", "mu", "nu", "seed", "ace_depth", "ace_threshold"] {
            assert!(json.get(key).is_some(), "missing {key}");
        }
        let text = r#"{"N": 1000, "M": 500, "mu": [[0.21,5],[0.25,3],[0.25,2],[0.29,1]], "nu": [[1.0,5]], "seed": 7}"#;
        let parsed: ConstructionConfig = serde_json::from_str(text).unwrap();
        assert_eq!(parsed, cfg);
    }

    #[test]
    fn config_rejects_inconsistent_rate() {
        let mut cfg = code_a(1);
        cfg.m = 300;
        assert!(matches!(
            cfg.validate(),
            Err(ConstructionError::RateMismatch { .. })
        ));
        cfg.m = 1000;
        assert!(matches!(
            cfg.validate(),
            Err(ConstructionError::InvalidDimensions(_))
        ));
    }

    #[test]
    fn random_profile_graph_matches_degrees() {
        let profile = DegreeProfile {
            variable: vec![3; 40],
            check: vec![6; 20],
        };
        let h = random_from_profile(&profile, 4);
        assert_eq!(h.num_edges(), 120);
        assert!(h.col_degrees().iter().all(|&d| d == 3));
    }
}
