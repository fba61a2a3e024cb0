use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::{simulate_frame, snr_serde, CodeInfo, CodeUnderTest, FrameTally, SimError};
use crate::channel::{noise_variance, SnrKind};
use crate::decoder::BpDecoder;
use crate::rng;
use crate::scalar::Real;

fn default_min_frame_errors() -> u64 {
    100
}

fn default_batch() -> usize {
    64
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepConfig {
    #[serde(with = "snr_serde::vec")]
    pub snr_db: Vec<f64>,
    #[serde(default)]
    pub snr_kind: SnrKind,
    pub max_frames: u64,
    #[serde(default = "default_min_frame_errors")]
    pub min_frame_errors: u64,
    pub max_iters: usize,
    pub seed: u64,
    /// Frames handed to the workers at once. Never changes the results.
    #[serde(default = "default_batch")]
    pub batch: usize,
}

impl SweepConfig {
    pub fn new(
        snr_db: Vec<f64>,
        max_frames: u64,
        min_frame_errors: u64,
        max_iters: usize,
        seed: u64,
    ) -> Self {
        Self {
            snr_db,
            snr_kind: SnrKind::EbN0,
            max_frames,
            min_frame_errors,
            max_iters,
            seed,
            batch: default_batch(),
        }
    }

    pub fn validate(&self) -> Result<(), SimError> {
        if self.snr_db.is_empty() {
            return Err(SimError::InvalidConfig("empty SNR grid".into()));
        }
        if self
            .snr_db
            .iter()
            .any(|s| s.is_nan() || *s == f64::NEG_INFINITY)
        {
            return Err(SimError::InvalidConfig(
                "SNR values must be numbers or +inf".into(),
            ));
        }
        if self.max_frames == 0 || self.min_frame_errors == 0 || self.batch == 0 {
            return Err(SimError::InvalidConfig(
                "max_frames, min_frame_errors and batch must be positive".into(),
            ));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SnrPoint {
    #[serde(with = "snr_serde")]
    pub snr_db: f64,
    pub frames: u64,
    pub bit_errors: u64,
    pub frame_errors: u64,
    pub ber: f64,
    pub fer: f64,
    pub mean_iters: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SimReport {
    pub code: CodeInfo,
    pub config: SweepConfig,
    /// Decoder arithmetic, `"f64"` or `"f32"`.
    pub precision: String,
    pub points: Vec<SnrPoint>,
}

impl SimReport {
    pub fn point(&self, snr_db: f64) -> Option<&SnrPoint> {
        self.points.iter().find(|p| p.snr_db == snr_db)
    }
}

/// BER/FER of `code` at every grid point.
///
/// Frame `f` at SNR `s` always draws from the stream keyed by
/// `(seed, s, f)`, and the stop rule is applied in frame order, so the report
/// does not depend on the batch size or on the number of workers.
pub fn run_sweep<T: Real>(code: &CodeUnderTest, cfg: &SweepConfig) -> Result<SimReport, SimError> {
    cfg.validate()?;
    let decoder = BpDecoder::<T>::new(&code.h);
    let transmitted = code.transmitted();
    let k = code.k() as u64;
    let rate = code.rate();

    let points = cfg
        .snr_db
        .iter()
        .map(|&snr| {
            let sigma2 = noise_variance(snr, cfg.snr_kind, rate);
            let (mut frames, mut bit_errors, mut frame_errors, mut iters) =
                (0u64, 0u64, 0u64, 0u64);
            'outer: while frames < cfg.max_frames && frame_errors < cfg.min_frame_errors {
                let end = (frames + cfg.batch as u64).min(cfg.max_frames);
                let batch: Vec<FrameTally> = (frames..end)
                    .into_par_iter()
                    .map(|f| {
                        let mut r = rng::stream(cfg.seed, &[snr.to_bits(), f]);
                        simulate_frame(
                            &decoder,
                            &code.g,
                            &transmitted,
                            sigma2,
                            cfg.max_iters,
                            &mut r,
                        )
                    })
                    .collect();
                for t in batch {
                    frames += 1;
                    bit_errors += t.bit_errors;
                    frame_errors += t.frame_error as u64;
                    iters += t.iterations as u64;
                    if frame_errors >= cfg.min_frame_errors {
                        break 'outer;
                    }
                }
            }
            SnrPoint {
                snr_db: snr,
                frames,
                bit_errors,
                frame_errors,
                ber: bit_errors as f64 / (frames * k) as f64,
                fer: frame_errors as f64 / frames as f64,
                mean_iters: iters as f64 / frames as f64,
            }
        })
        .collect();

    Ok(SimReport {
        code: code.info(),
        config: cfg.clone(),
        precision: std::any::type_name::<T>().to_string(),
        points,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::construction::{peg_from_profile, AceParams, DegreeProfile};
    use crate::gf2::systematize;

    fn small_code() -> CodeUnderTest {
        let profile = DegreeProfile {
            variable: vec![3; 96],
            check: vec![6; 48],
        };
        let (h, _) = peg_from_profile(&profile, 11, AceParams::default());
        let g = systematize(&h).unwrap();
        CodeUnderTest::new("regular-96", h, g).unwrap()
    }

    #[test]
    fn noiseless_channel_has_no_errors() {
        let code = small_code();
        let cfg = SweepConfig::new(vec![f64::INFINITY], 40, 5, 20, 1);
        let rep = run_sweep::<f64>(&code, &cfg).unwrap();
        let p = &rep.points[0];
        assert_eq!((p.frames, p.bit_errors, p.frame_errors), (40, 0, 0));
        assert_eq!((p.ber, p.fer, p.mean_iters), (0.0, 0.0, 0.0));
    }

    #[test]
    fn stop_rule_and_batch_independence() {
        let code = small_code();
        let mut cfg = SweepConfig::new(vec![1.0, 2.0], 300, 7, 30, 3);
        let a = run_sweep::<f64>(&code, &cfg).unwrap();
        cfg.batch = 5;
        let mut b = run_sweep::<f64>(&code, &cfg).unwrap();
        b.config.batch = a.config.batch;
        assert_eq!(a, b);
        for p in &a.points {
            assert!(p.frame_errors >= 7 || p.frames == 300);
            assert!(p.frame_errors <= 7);
            assert!(p.bit_errors <= p.frames * code.k() as u64);
            assert!(p.ber <= 1.0 && p.fer <= 1.0);
        }
    }

    #[test]
    fn repeated_runs_are_identical() {
        let code = small_code();
        let cfg = SweepConfig::new(vec![1.5], 100, 10, 25, 9);
        assert_eq!(
            run_sweep::<f64>(&code, &cfg).unwrap(),
            run_sweep::<f64>(&code, &cfg).unwrap()
        );
    }

    #[test]
    fn rejects_bad_config() {
        let code = small_code();
        assert!(run_sweep::<f64>(&code, &SweepConfig::new(vec![], 1, 1, 1, 0)).is_err());
        assert!(run_sweep::<f64>(&code, &SweepConfig::new(vec![1.0], 0, 1, 1, 0)).is_err());
    }

    #[test]
    fn config_accepts_inf_in_json() {
        let cfg: SweepConfig = serde_json::from_str(
            r#"{"snr_db":[1.0,"inf"],"max_frames":10,"max_iters":5,"seed":2}"#,
        )
        .unwrap();
        assert_eq!(cfg.snr_db, vec![1.0, f64::INFINITY]);
        assert_eq!(cfg.min_frame_errors, 100);
        let back: SweepConfig =
            serde_json::from_str(&serde_json::to_string(&cfg).unwrap()).unwrap();
        assert_eq!(back, cfg);
    }
}
