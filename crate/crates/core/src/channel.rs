//! BPSK over the real AWGN channel and channel LLRs.

use num_rational::Ratio;
use rand::Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::rng;
use crate::scalar::Real;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ChannelError {
    #[error("expected {expected} received values, got {got}")]
    LengthMismatch { expected: usize, got: usize },
    #[error("punctured position {index} is outside the block of length {n}")]
    PositionOutOfRange { index: usize, n: usize },
}

/// Which energy the SNR value refers to.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub enum SnrKind {
    /// Energy per information bit; converted with the transmitted code rate.
    #[default]
    #[serde(rename = "EbN0")]
    EbN0,
    /// Energy per transmitted symbol.
    #[serde(rename = "EsN0")]
    EsN0,
}

/// `snr_db = +∞` is a valid noiseless setting.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ChannelConfig {
    pub snr_db: f64,
    pub kind: SnrKind,
    /// Rate of the code actually on the air (after puncturing or extension).
    pub rate: Ratio<u64>,
    pub seed: u64,
}

impl ChannelConfig {
    pub fn new(snr_db: f64, kind: SnrKind, rate: Ratio<u64>, seed: u64) -> Self {
        Self {
            snr_db,
            kind,
            rate,
            seed,
        }
    }

    /// E_s/N_0 as a linear ratio.
    pub fn es_n0(&self) -> f64 {
        let lin = 10f64.powf(self.snr_db / 10.0);
        match self.kind {
            SnrKind::EsN0 => lin,
            SnrKind::EbN0 => lin * (*self.rate.numer() as f64 / *self.rate.denom() as f64),
        }
    }

    /// σ² of the noise for unit-energy BPSK, 1/(2·E_s/N_0).
    pub fn noise_variance(&self) -> f64 {
        noise_variance(self.snr_db, self.kind, self.rate)
    }
}

pub fn noise_variance(snr_db: f64, kind: SnrKind, rate: Ratio<u64>) -> f64 {
    if snr_db == f64::INFINITY {
        return 0.0;
    }
    let es_n0 = ChannelConfig::new(snr_db, kind, rate, 0).es_n0();
    1.0 / (2.0 * es_n0)
}

/// 0 → +1, 1 → −1, plus N(0, σ²) noise drawn from `rng`.
pub fn transmit_with<T: Real, R: Rng>(bits: &[u8], sigma2: f64, rng: &mut R) -> Vec<T> {
    let sigma = sigma2.sqrt();
    bits.iter()
        .map(|&b| {
            let x = if b & 1 == 0 { 1.0 } else { -1.0 };
            let noise: f64 = if sigma > 0.0 {
                rng.sample::<f64, _>(StandardNormal) * sigma
            } else {
                0.0
            };
            T::lit(x + noise)
        })
        .collect()
}

/// Transmission with noise from the configuration's own seed.
pub fn transmit<T: Real>(bits: &[u8], cfg: &ChannelConfig) -> Vec<T> {
    transmit_with(bits, cfg.noise_variance(), &mut rng::seeded(cfg.seed))
}

/// Channel LLRs in mother-code indexing with a punctured mask.
#[derive(Debug, Clone, PartialEq)]
pub struct LlrVector<T> {
    pub values: Vec<T>,
    pub punctured: Vec<bool>,
}

impl<T: Real> LlrVector<T> {
    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    /// All-erased vector of length `n`.
    pub fn erased(n: usize) -> Self {
        Self {
            values: vec![T::zero(); n],
            punctured: vec![true; n],
        }
    }

    /// Writes fresh observations at `positions` (in order), clearing their
    /// punctured flags.
    pub fn reveal(
        &mut self,
        positions: &[usize],
        received: &[T],
        sigma2: f64,
    ) -> Result<(), ChannelError> {
        if positions.len() != received.len() {
            return Err(ChannelError::LengthMismatch {
                expected: positions.len(),
                got: received.len(),
            });
        }
        let scale = T::lit(2.0 / sigma2);
        for (&p, &y) in positions.iter().zip(received) {
            if p >= self.values.len() {
                return Err(ChannelError::PositionOutOfRange {
                    index: p,
                    n: self.values.len(),
                });
            }
            self.values[p] = llr_of(y, scale);
            self.punctured[p] = false;
        }
        Ok(())
    }
}

fn llr_of<T: Real>(y: T, scale: T) -> T {
    if scale.is_infinite() {
        // noiseless: any sign is certain
        if y > T::zero() {
            T::infinity()
        } else if y < T::zero() {
            T::neg_infinity()
        } else {
            T::zero()
        }
    } else {
        y * scale
    }
}

/// LLRs `2y/σ²` for a block of length `n` from which the sorted positions in
/// `punctured` were not sent; those positions get exactly 0.
pub fn form_llrs<T: Real>(
    received: &[T],
    sigma2: f64,
    n: usize,
    punctured: &[usize],
) -> Result<LlrVector<T>, ChannelError> {
    let mut mask = vec![false; n];
    for &p in punctured {
        if p >= n {
            return Err(ChannelError::PositionOutOfRange { index: p, n });
        }
        mask[p] = true;
    }
    let sent = mask.iter().filter(|&&m| !m).count();
    if received.len() != sent {
        return Err(ChannelError::LengthMismatch {
            expected: sent,
            got: received.len(),
        });
    }
    let scale = T::lit(2.0 / sigma2);
    let mut values = vec![T::zero(); n];
    let mut it = received.iter();
    for (v, &m) in values.iter_mut().zip(&mask) {
        if !m {
            *v = llr_of(*it.next().unwrap(), scale);
        }
    }
    Ok(LlrVector {
        values,
        punctured: mask,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn half() -> Ratio<u64> {
        Ratio::new(1, 2)
    }

    #[test]
    fn noiseless_sentinel() {
        let cfg = ChannelConfig::new(f64::INFINITY, SnrKind::EbN0, half(), 3);
        let y: Vec<f64> = transmit(&[0, 1, 1, 0], &cfg);
        assert_eq!(y, vec![1.0, -1.0, -1.0, 1.0]);
    }

    #[test]
    fn same_seed_same_noise() {
        let cfg = ChannelConfig::new(1.0, SnrKind::EbN0, half(), 42);
        let a: Vec<f64> = transmit(&[0; 64], &cfg);
        let b: Vec<f64> = transmit(&[0; 64], &cfg);
        assert_eq!(a, b);
        let c: Vec<f64> = transmit(&[0; 64], &ChannelConfig { seed: 43, ..cfg });
        assert_ne!(a, c);
    }

    #[test]
    fn empirical_variance_at_zero_db() {
        let cfg = ChannelConfig::new(0.0, SnrKind::EbN0, half(), 7);
        assert!((cfg.noise_variance() - 1.0).abs() < 1e-12);
        let n = 1_000_000;
        let y: Vec<f64> = transmit(&vec![0u8; n], &cfg);
        let var = y.iter().map(|v| (v - 1.0).powi(2)).sum::<f64>() / n as f64;
        assert!((var - 1.0).abs() < 0.01, "{var}");
    }

    #[test]
    fn es_and_eb_conventions() {
        let eb = noise_variance(3.0, SnrKind::EbN0, Ratio::new(5, 8));
        let es = noise_variance(
            3.0 + 10.0 * (5.0f64 / 8.0).log10(),
            SnrKind::EsN0,
            Ratio::new(5, 8),
        );
        assert!((eb - es).abs() < 1e-12);
    }

    #[test]
    fn llr_formula_and_puncturing() {
        let l = form_llrs(&[2.0f64], 1.0, 1, &[]).unwrap();
        assert_eq!(l.values, vec![4.0]);
        assert_eq!(l.punctured, vec![false]);

        let l = form_llrs(&[0.5f32, -0.5, 1.0], 0.5, 5, &[2, 3]).unwrap();
        assert_eq!(l.values, vec![2.0, -2.0, 0.0, 0.0, 4.0]);
        assert_eq!(l.punctured, vec![false, false, true, true, false]);
        assert!(form_llrs(&[0.5f32], 0.5, 5, &[2, 3]).is_err());
    }

    #[test]
    fn reveal_fills_erasures() {
        let mut l = LlrVector::<f64>::erased(4);
        l.reveal(&[1, 3], &[1.0, -1.0], 1.0).unwrap();
        assert_eq!(l.values, vec![0.0, 2.0, 0.0, -2.0]);
        assert_eq!(l.punctured, vec![true, false, true, false]);
    }
}
