//! Monte Carlo link simulation: BER/FER sweeps, hybrid-ARQ throughput and
//! report files.

mod arq;
mod report;
mod sweep;

use rand::Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

pub use arq::{
    run_arq_throughput, ArqConfig, ArqPolicy, ArqStage, StageInfo, ThroughputPoint,
    ThroughputReport,
};
pub use report::{
    emit_report, emit_throughput_report, write_csv, write_throughput_csv, ReportFormat,
    SWEEP_CSV_HEADER, THROUGHPUT_CSV_HEADER,
};
pub use sweep::{run_sweep, SimReport, SnrPoint, SweepConfig};

use crate::channel::{transmit_with, LlrVector};
use crate::decoder::BpDecoder;
use crate::gf2::{content_hash, GeneratorMatrix, SparseBinaryMatrix};
use crate::puncturing::PuncturingPattern;
use crate::scalar::Real;
use crate::Rate;

#[derive(Debug, Error)]
pub enum SimError {
    #[error("invalid configuration: {0}")]
    InvalidConfig(String),
    #[error("inconsistent code: {0}")]
    InconsistentCode(String),
    #[error("rate ladder is not incremental: {0}")]
    NonMonotoneLadder(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

/// A code as it goes on the air: decoding graph, encoder and the positions
/// left out of every transmission.
#[derive(Debug, Clone)]
pub struct CodeUnderTest {
    pub label: String,
    pub h: SparseBinaryMatrix,
    pub g: GeneratorMatrix,
    /// Sorted punctured positions.
    pub punctured: Vec<usize>,
    pub scheme: Option<String>,
}

impl CodeUnderTest {
    pub fn new(
        label: impl Into<String>,
        h: SparseBinaryMatrix,
        g: GeneratorMatrix,
    ) -> Result<Self, SimError> {
        if g.n() != h.num_cols() {
            return Err(SimError::InconsistentCode(format!(
                "generator length {} differs from the {} columns of H",
                g.n(),
                h.num_cols()
            )));
        }
        Ok(Self {
            label: label.into(),
            h,
            g,
            punctured: Vec::new(),
            scheme: None,
        })
    }

    pub fn with_pattern(mut self, pattern: &PuncturingPattern) -> Result<Self, SimError> {
        pattern
            .check_mother(&self.h)
            .map_err(|e| SimError::InconsistentCode(e.to_string()))?;
        self.punctured = pattern.sorted();
        self.scheme = Some(pattern.scheme.to_string());
        Ok(self)
    }

    pub fn n(&self) -> usize {
        self.h.num_cols()
    }

    pub fn k(&self) -> usize {
        self.g.k()
    }

    pub fn transmitted(&self) -> Vec<usize> {
        let mut gone = vec![false; self.n()];
        for &p in &self.punctured {
            gone[p] = true;
        }
        (0..self.n()).filter(|&i| !gone[i]).collect()
    }

    /// K/(N − P).
    pub fn rate(&self) -> Rate {
        Rate::new(self.k() as u64, (self.n() - self.punctured.len()) as u64)
    }

    pub fn info(&self) -> CodeInfo {
        CodeInfo {
            label: self.label.clone(),
            hash: content_hash(&self.h),
            n: self.n(),
            k: self.k(),
            punctured: self.punctured.len(),
            rate: self.rate(),
            scheme: self.scheme.clone(),
        }
    }
}

/// Identity of a simulated code, recorded in every report.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CodeInfo {
    pub label: String,
    pub hash: String,
    #[serde(rename = "N")]
    pub n: usize,
    #[serde(rename = "K")]
    pub k: usize,
    pub punctured: usize,
    pub rate: Rate,
    pub scheme: Option<String>,
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub(crate) struct FrameTally {
    pub bit_errors: u64,
    pub frame_error: bool,
    pub iterations: usize,
}

/// One frame: random message, encode, BPSK/AWGN on every position (so codes
/// sharing a mother see the same noise), keep the `transmitted` positions,
/// decode and count message bit errors.
pub(crate) fn simulate_frame<T: Real, R: Rng>(
    decoder: &BpDecoder<T>,
    g: &GeneratorMatrix,
    transmitted: &[usize],
    sigma2: f64,
    max_iters: usize,
    rng: &mut R,
) -> FrameTally {
    let message: Vec<u8> = (0..g.k()).map(|_| rng.random_range(0..2u8)).collect();
    let word = g.encode(&message).expect("message length equals K");
    let y: Vec<T> = transmit_with(word.bits(), sigma2, rng);
    let mut llr = LlrVector::erased(g.n());
    let sent: Vec<T> = transmitted.iter().map(|&i| y[i]).collect();
    llr.reveal(transmitted, &sent, sigma2)
        .expect("positions inside the block");
    let result = decoder.decode(&llr.values, max_iters);
    let bit_errors = g
        .info_positions()
        .iter()
        .zip(&message)
        .filter(|&(&pos, &m)| result.codeword[pos] != m)
        .count() as u64;
    FrameTally {
        bit_errors,
        frame_error: bit_errors > 0,
        iterations: result.iterations,
    }
}

/// Serde helpers for SNR values, which may be `+∞` (written as `"inf"`).
pub(crate) mod snr_serde {
    use serde::{Deserialize, Deserializer, Serialize, Serializer};

    #[derive(Serialize, Deserialize)]
    #[serde(untagged)]
    enum Repr {
        Num(f64),
        Text(String),
    }

    fn to_repr(x: f64) -> Repr {
        if x.is_finite() {
            Repr::Num(x)
        } else if x > 0.0 {
            Repr::Text("inf".into())
        } else {
            Repr::Text("-inf".into())
        }
    }

    fn from_repr<E: serde::de::Error>(r: Repr) -> Result<f64, E> {
        match r {
            Repr::Num(x) => Ok(x),
            Repr::Text(s) => match s.as_str() {
                "inf" | "+inf" | "Infinity" => Ok(f64::INFINITY),
                "-inf" | "-Infinity" => Ok(f64::NEG_INFINITY),
                other => Err(E::custom(format!("invalid SNR value {other:?}"))),
            },
        }
    }

    pub fn serialize<S: Serializer>(x: &f64, s: S) -> Result<S::Ok, S::Error> {
        to_repr(*x).serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<f64, D::Error> {
        from_repr(Repr::deserialize(d)?)
    }

    pub mod vec {
        use super::*;

        pub fn serialize<S: Serializer>(xs: &[f64], s: S) -> Result<S::Ok, S::Error> {
            xs.iter()
                .map(|&x| to_repr(x))
                .collect::<Vec<_>>()
                .serialize(s)
        }

        pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<f64>, D::Error> {
            Vec::<Repr>::deserialize(d)?
                .into_iter()
                .map(from_repr)
                .collect()
        }
    }
}
