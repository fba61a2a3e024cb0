//! Simulation-based pattern search: draw Q random patterns, measure each by
//! Monte Carlo and keep the one with the lowest average BER.

use rand::seq::index;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use serde_json::json;

use super::{PunctureError, PuncturingPattern, Scheme};
use crate::channel::{noise_variance, SnrKind};
use crate::decoder::BpDecoder;
use crate::gf2::{GeneratorMatrix, SparseBinaryMatrix};
use crate::rng;
use crate::scalar::Real;
use crate::sim::simulate_frame;
use crate::Rate;

fn default_training_bits() -> usize {
    1000
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SimPuncturingConfig {
    /// Number of random candidate patterns, Q.
    pub q: usize,
    /// E_b/N_0 grid in dB (rate of the punctured code), T points.
    pub snr_db: Vec<f64>,
    /// Repetitions per grid point, r.
    pub repetitions: usize,
    /// Information bits per trial; rounded up to whole frames.
    #[serde(default = "default_training_bits")]
    pub training_bits: usize,
    pub max_iters: usize,
    pub seed: u64,
}

impl SimPuncturingConfig {
    pub fn validate(&self) -> Result<(), PunctureError> {
        if self.q == 0 || self.repetitions == 0 || self.training_bits == 0 {
            return Err(PunctureError::InvalidConfig(
                "Q, r and the training length must be positive".into(),
            ));
        }
        if self.snr_db.is_empty() || self.snr_db.iter().any(|s| s.is_nan()) {
            return Err(PunctureError::InvalidConfig(
                "SNR grid must be a nonempty list of numbers".into(),
            ));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PatternScore {
    pub index: usize,
    pub indices: Vec<usize>,
    /// BER of each trial, SNR-major: `trial_ber[t * r + rep]`.
    pub trial_ber: Vec<f64>,
    /// Mean of `trial_ber`.
    pub mean_ber: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SimSearch {
    pub pattern: PuncturingPattern,
    pub winner: usize,
    pub scores: Vec<PatternScore>,
}

/// Searches Q random patterns of size `p` over the parity region.
///
/// Pattern `q` is drawn from a stream keyed by `(seed, q)`. Every pattern is
/// measured on the same messages and noise (streams keyed by SNR point,
/// repetition and frame), so the comparison between patterns is not diluted
/// by independent sampling noise. The lowest mean BER wins; ties go to the
/// lower pattern index.
pub fn sim_puncture<T: Real>(
    h: &SparseBinaryMatrix,
    g: &GeneratorMatrix,
    k: usize,
    p: usize,
    cfg: &SimPuncturingConfig,
) -> Result<SimSearch, PunctureError> {
    cfg.validate()?;
    let n = h.num_cols();
    if g.n() != n {
        return Err(PunctureError::LengthMismatch {
            expected: n,
            got: g.n(),
        });
    }
    if g.k() != k {
        return Err(PunctureError::LengthMismatch {
            expected: k,
            got: g.k(),
        });
    }
    if p >= n - k {
        return Err(PunctureError::TooMany { p, parity: n - k });
    }
    let decoder = BpDecoder::<T>::new(h);
    let rate = Rate::new(k as u64, (n - p) as u64);
    let frames = cfg.training_bits.div_ceil(k) as u64;
    let reps = cfg.repetitions;

    let scores: Vec<PatternScore> = (0..cfg.q)
        .into_par_iter()
        .map(|q| {
            let mut r = rng::stream(cfg.seed, &[0, q as u64]);
            let indices: Vec<usize> = index::sample(&mut r, n - k, p)
                .into_iter()
                .map(|i| i + k)
                .collect();
            let mut gone = vec![false; n];
            for &i in &indices {
                gone[i] = true;
            }
            let transmitted: Vec<usize> = (0..n).filter(|&i| !gone[i]).collect();
            let mut trial_ber = Vec::with_capacity(cfg.snr_db.len() * reps);
            for (t, &snr) in cfg.snr_db.iter().enumerate() {
                let sigma2 = noise_variance(snr, SnrKind::EbN0, rate);
                for rep in 0..reps {
                    let errors: u64 = (0..frames)
                        .map(|f| {
                            let mut fr = rng::stream(cfg.seed, &[1, t as u64, rep as u64, f]);
                            simulate_frame(
                                &decoder,
                                g,
                                &transmitted,
                                sigma2,
                                cfg.max_iters,
                                &mut fr,
                            )
                            .bit_errors
                        })
                        .sum();
                    trial_ber.push(errors as f64 / (frames * k as u64) as f64);
                }
            }
            let mean_ber = trial_ber.iter().sum::<f64>() / trial_ber.len() as f64;
            PatternScore {
                index: q,
                indices,
                trial_ber,
                mean_ber,
            }
        })
        .collect();

    let winner = scores.iter().fold(0, |best, s| {
        if s.mean_ber < scores[best].mean_ber {
            s.index
        } else {
            best
        }
    });
    let params = json!({
        "q": cfg.q,
        "snr_db": cfg.snr_db,
        "repetitions": cfg.repetitions,
        "training_bits": cfg.training_bits,
        "max_iters": cfg.max_iters,
        "seed": cfg.seed,
        "winner": winner,
        "mean_ber": scores[winner].mean_ber,
    });
    let pattern = PuncturingPattern::new(h, k, scores[winner].indices.clone(), Scheme::Sim, params);
    Ok(SimSearch {
        pattern,
        winner,
        scores,
    })
}
