//! Type-II hybrid ARQ with incremental redundancy over a rate-compatible
//! family.
//!
//! The transmitter starts with the highest-rate member. Each negative
//! acknowledgement releases the bits the next member adds, and the receiver
//! decodes that member with everything received so far (earlier LLRs are
//! kept, new positions fill their erasures). Feedback is ideal: error free
//! and free of cost. A frame still undecoded at the lowest rate is sent again
//! from scratch, up to `max_transmissions` times in total.

use rand::Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::{snr_serde, SimError};
use crate::channel::{noise_variance, transmit_with, LlrVector, SnrKind};
use crate::decoder::BpDecoder;
use crate::extension::ExtensionLadder;
use crate::gf2::{GeneratorMatrix, SparseBinaryMatrix};
use crate::puncturing::PuncturingPattern;
use crate::rng;
use crate::scalar::Real;
use crate::Rate;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ArqStage {
    pub label: String,
    /// Index into [`ArqPolicy::matrices`] of the graph decoded at this stage.
    pub matrix: usize,
    /// Every position sent up to and including this stage, ascending.
    pub sent: Vec<usize>,
}

/// A rate ladder ordered from the highest rate to the lowest.
///
/// All members share one encoder: `generator` belongs to the longest matrix,
/// and each shorter matrix must be satisfied by the corresponding prefix of
/// its codewords.
#[derive(Debug, Clone)]
pub struct ArqPolicy {
    pub matrices: Vec<SparseBinaryMatrix>,
    pub generator: GeneratorMatrix,
    pub stages: Vec<ArqStage>,
    pub max_transmissions: usize,
}

impl ArqPolicy {
    pub fn k(&self) -> usize {
        self.generator.k()
    }

    pub fn stage_rate(&self, s: usize) -> Rate {
        Rate::new(self.k() as u64, self.stages[s].sent.len() as u64)
    }

    /// Rejects ladders that are not incremental or not served by the shared
    /// encoder.
    pub fn validate(&self) -> Result<(), SimError> {
        let bad = |msg: String| Err(SimError::NonMonotoneLadder(msg));
        if self.stages.is_empty() {
            return bad("no stages".into());
        }
        if self.max_transmissions == 0 {
            return Err(SimError::InvalidConfig(
                "max_transmissions must be at least 1".into(),
            ));
        }
        let n = self.generator.n();
        let mut prev_cols = 0;
        let mut prev: &[usize] = &[];
        for (s, stage) in self.stages.iter().enumerate() {
            let Some(h) = self.matrices.get(stage.matrix) else {
                return Err(SimError::InvalidConfig(format!(
                    "stage {s} names missing matrix {}",
                    stage.matrix
                )));
            };
            let cols = h.num_cols();
            if cols > n || cols < prev_cols {
                return bad(format!(
                    "stage {s} decodes a graph of {cols} columns after one of {prev_cols}"
                ));
            }
            if stage.sent.windows(2).any(|w| w[0] >= w[1])
                || stage.sent.last().is_some_and(|&x| x >= cols)
            {
                return Err(SimError::InvalidConfig(format!(
                    "stage {s} sent set not ascending inside 0..{cols}"
                )));
            }
            if stage.sent.len() <= prev.len() || !is_subset(prev, &stage.sent) {
                return bad(format!("stage {s} does not add to the bits already sent"));
            }
            if let Some(&p) = self.generator.info_positions().iter().find(|&&p| p >= cols) {
                return Err(SimError::InconsistentCode(format!(
                    "information position {p} lies outside stage {s}"
                )));
            }
            prev_cols = cols;
            prev = &stage.sent;
        }
        if prev_cols != n {
            return Err(SimError::InconsistentCode(format!(
                "lowest-rate graph has {prev_cols} columns, encoder {n}"
            )));
        }
        // the shared encoder must produce codewords of every member
        let mut r = rng::seeded(0);
        for _ in 0..8 {
            let m: Vec<u8> = (0..self.k()).map(|_| r.random_range(0..2u8)).collect();
            let c = self.generator.encode(&m).expect("message length equals K");
            for (i, h) in self.matrices.iter().enumerate() {
                if !h.is_codeword(&c.bits()[..h.num_cols()]) {
                    return Err(SimError::InconsistentCode(format!(
                        "encoder output violates matrix {i}"
                    )));
                }
            }
        }
        Ok(())
    }
}

impl ArqPolicy {
    /// The ladder of one mother code: punctured members first (one per entry
    /// of `punctures`, each puncturing that many leading indices of
    /// `pattern`), then the mother itself, then every extension level.
    ///
    /// `punctures` must be strictly decreasing. The shared encoder is the
    /// deepest level's generator, or `mother_g` without a ladder.
    pub fn family(
        mother: &SparseBinaryMatrix,
        mother_g: &GeneratorMatrix,
        pattern: Option<(&PuncturingPattern, &[usize])>,
        ladder: Option<&ExtensionLadder>,
        max_transmissions: usize,
    ) -> Result<Self, SimError> {
        let n = mother.num_cols();
        let mut stages = Vec::new();
        if let Some((pattern, punctures)) = pattern {
            pattern
                .check_mother(mother)
                .map_err(|e| SimError::InconsistentCode(e.to_string()))?;
            if punctures.windows(2).any(|w| w[0] <= w[1])
                || punctures.iter().any(|&p| p == 0 || p > pattern.len())
            {
                return Err(SimError::NonMonotoneLadder(format!(
                    "puncture counts {punctures:?} must decrease strictly within 1..={}",
                    pattern.len()
                )));
            }
            for &p in punctures {
                let member = pattern.prefix(p);
                stages.push(ArqStage {
                    label: format!("punctured P={p} ({})", member.rate()),
                    matrix: 0,
                    sent: member.transmitted(),
                });
            }
        }
        stages.push(ArqStage {
            label: format!("mother ({})", Rate::new(mother_g.k() as u64, n as u64)),
            matrix: 0,
            sent: (0..n).collect(),
        });
        let mut matrices = vec![mother.clone()];
        let mut generator = mother_g.clone();
        if let Some(ladder) = ladder {
            if ladder.mother != *mother {
                return Err(SimError::InconsistentCode(
                    "extension ladder was built on a different mother".into(),
                ));
            }
            for lvl in &ladder.levels {
                stages.push(ArqStage {
                    label: format!("level {} ({})", lvl.level, lvl.rate()),
                    matrix: matrices.len(),
                    sent: (0..lvl.h.num_cols()).collect(),
                });
                matrices.push(lvl.h.clone());
            }
            generator = ladder.deepest().g.clone();
        }
        let policy = Self {
            matrices,
            generator,
            stages,
            max_transmissions,
        };
        policy.validate()?;
        Ok(policy)
    }
}

fn is_subset(small: &[usize], big: &[usize]) -> bool {
    let mut it = big.iter();
    small.iter().all(|x| it.by_ref().any(|y| y == x))
}

fn default_max_frames() -> u64 {
    1000
}

/// SNR values are E_s/N_0 in dB: the ladder has no single rate to convert
/// E_b/N_0 with.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ArqConfig {
    #[serde(with = "snr_serde::vec")]
    pub es_n0_db: Vec<f64>,
    #[serde(default = "default_max_frames")]
    pub frames: u64,
    pub max_iters: usize,
    pub seed: u64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ThroughputPoint {
    #[serde(with = "snr_serde")]
    pub es_n0_db: f64,
    pub frames: u64,
    /// Frames delivered after the given number of stages (index 0: first
    /// stage), summed over all transmission attempts.
    pub stage_successes: Vec<u64>,
    pub transmissions: u64,
    pub lost_frames: u64,
    pub delivered_bits: u64,
    pub channel_uses: u64,
    /// delivered_bits / channel_uses.
    pub throughput: f64,
    /// log2(1 + E_s/N_0).
    #[serde(with = "snr_serde")]
    pub capacity: f64,
    /// 0.5·log2(1 + 2·E_s/N_0), the capacity of the real-valued channel.
    #[serde(with = "snr_serde")]
    pub capacity_real: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StageInfo {
    pub label: String,
    pub rate: Rate,
    pub bits_sent: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ThroughputReport {
    pub stages: Vec<StageInfo>,
    pub k: usize,
    pub max_transmissions: usize,
    pub feedback: String,
    pub config: ArqConfig,
    pub points: Vec<ThroughputPoint>,
}

#[derive(Debug, Clone, Default)]
struct FrameOutcome {
    /// Stage that decoded, if any attempt succeeded.
    success_stage: Option<usize>,
    transmissions: u64,
    channel_uses: u64,
}

fn run_frame<T: Real, R: Rng>(
    policy: &ArqPolicy,
    decoders: &[BpDecoder<T>],
    sigma2: f64,
    max_iters: usize,
    rng: &mut R,
) -> FrameOutcome {
    let g = &policy.generator;
    let message: Vec<u8> = (0..g.k()).map(|_| rng.random_range(0..2u8)).collect();
    let word = g.encode(&message).expect("message length equals K");
    let mut out = FrameOutcome::default();
    for _ in 0..policy.max_transmissions {
        out.transmissions += 1;
        let y: Vec<T> = transmit_with(word.bits(), sigma2, rng);
        let mut llr = LlrVector::<T>::erased(g.n());
        let mut prev: &[usize] = &[];
        for (s, stage) in policy.stages.iter().enumerate() {
            let fresh: Vec<usize> = stage
                .sent
                .iter()
                .copied()
                .filter(|x| prev.binary_search(x).is_err())
                .collect();
            let values: Vec<T> = fresh.iter().map(|&i| y[i]).collect();
            llr.reveal(&fresh, &values, sigma2)
                .expect("positions inside the block");
            prev = &stage.sent;
            let dec = &decoders[stage.matrix];
            let result = dec.decode(&llr.values[..dec.block_length()], max_iters);
            let ok = g
                .info_positions()
                .iter()
                .zip(&message)
                .all(|(&p, &m)| result.codeword[p] == m);
            if ok {
                out.channel_uses += stage.sent.len() as u64;
                out.success_stage = Some(s);
                return out;
            }
        }
        out.channel_uses += prev.len() as u64;
    }
    out
}

/// Throughput K·(delivered frames) / (channel uses) at every E_s/N_0.
pub fn run_arq_throughput<T: Real>(
    policy: &ArqPolicy,
    cfg: &ArqConfig,
) -> Result<ThroughputReport, SimError> {
    policy.validate()?;
    if cfg.es_n0_db.is_empty() || cfg.frames == 0 {
        return Err(SimError::InvalidConfig(
            "ARQ run needs SNR points and frames".into(),
        ));
    }
    let decoders: Vec<BpDecoder<T>> = policy.matrices.iter().map(BpDecoder::new).collect();
    let k = policy.k() as u64;
    let unit = Rate::from_integer(1);

    let points = cfg
        .es_n0_db
        .iter()
        .map(|&snr| {
            let sigma2 = noise_variance(snr, SnrKind::EsN0, unit);
            let outcomes: Vec<FrameOutcome> = (0..cfg.frames)
                .into_par_iter()
                .map(|f| {
                    let mut r = rng::stream(cfg.seed, &[snr.to_bits(), f]);
                    run_frame(policy, &decoders, sigma2, cfg.max_iters, &mut r)
                })
                .collect();
            let mut stage_successes = vec![0u64; policy.stages.len()];
            let (mut transmissions, mut lost, mut uses) = (0, 0, 0);
            for o in &outcomes {
                transmissions += o.transmissions;
                uses += o.channel_uses;
                match o.success_stage {
                    Some(s) => stage_successes[s] += 1,
                    None => lost += 1,
                }
            }
            let delivered = k * (cfg.frames - lost);
            let es_n0 = 10f64.powf(snr / 10.0);
            ThroughputPoint {
                es_n0_db: snr,
                frames: cfg.frames,
                stage_successes,
                transmissions,
                lost_frames: lost,
                delivered_bits: delivered,
                channel_uses: uses,
                throughput: delivered as f64 / uses as f64,
                capacity: (1.0 + es_n0).log2(),
                capacity_real: 0.5 * (1.0 + 2.0 * es_n0).log2(),
            }
        })
        .collect();

    Ok(ThroughputReport {
        stages: policy
            .stages
            .iter()
            .enumerate()
            .map(|(s, st)| StageInfo { label: st.label.clone(), rate: policy.stage_rate(s), bits_sent: st.sent.len() })
            .collect(),
        k: policy.k(),
        max_transmissions: policy.max_transmissions,
        feedback: "ideal: error-free, zero-cost ACK/NACK; throughput = delivered information bits / channel uses".into(),
        config: cfg.clone(),
        points,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::construction::{peg_from_profile, AceParams, DegreeProfile};
    use crate::gf2::systematize;

    fn mother() -> (SparseBinaryMatrix, GeneratorMatrix) {
        let profile = DegreeProfile {
            variable: vec![3; 96],
            check: vec![6; 48],
        };
        let (h, _) = peg_from_profile(&profile, 5, AceParams::default());
        let g = systematize(&h).unwrap();
        (h, g)
    }

    /// Two stages on one graph: a heavily punctured first stage, then the
    /// full mother code.
    fn two_stage(first_len: usize) -> ArqPolicy {
        let (h, g) = mother();
        let parity = g.parity_positions().to_vec();
        let mut first: Vec<usize> = g.info_positions().to_vec();
        first.extend(&parity[..first_len - first.len()]);
        first.sort_unstable();
        ArqPolicy {
            matrices: vec![h],
            stages: vec![
                ArqStage {
                    label: "punctured".into(),
                    matrix: 0,
                    sent: first,
                },
                ArqStage {
                    label: "mother".into(),
                    matrix: 0,
                    sent: (0..96).collect(),
                },
            ],
            generator: g,
            max_transmissions: 2,
        }
    }

    fn cfg(es: Vec<f64>, frames: u64) -> ArqConfig {
        ArqConfig {
            es_n0_db: es,
            frames,
            max_iters: 30,
            seed: 4,
        }
    }

    #[test]
    fn noiseless_single_stage_delivers_its_rate() {
        let (h, g) = mother();
        let policy = ArqPolicy {
            matrices: vec![h],
            stages: vec![ArqStage {
                label: "mother".into(),
                matrix: 0,
                sent: (0..96).collect(),
            }],
            generator: g,
            max_transmissions: 1,
        };
        let rep = run_arq_throughput::<f64>(&policy, &cfg(vec![f64::INFINITY], 20)).unwrap();
        let p = &rep.points[0];
        assert_eq!(p.throughput, 48.0 / 96.0);
        assert_eq!(p.transmissions, 20);
        let json = serde_json::to_string(&rep).unwrap();
        assert_eq!(
            serde_json::from_str::<ThroughputReport>(&json).unwrap(),
            rep
        );
    }

    #[test]
    fn systematic_first_stage_accounting() {
        let policy = two_stage(48);
        let rep = run_arq_throughput::<f64>(&policy, &cfg(vec![20.0], 30)).unwrap();
        let p = &rep.points[0];
        assert_eq!(p.lost_frames, 0);
        assert_eq!(p.delivered_bits, 30 * 48);
        assert_eq!(p.stage_successes.iter().sum::<u64>(), 30);
        assert_eq!(
            p.channel_uses,
            48 * p.stage_successes[0] + 96 * p.stage_successes[1]
        );
        assert!((p.throughput - p.delivered_bits as f64 / p.channel_uses as f64).abs() < 1e-12);
    }

    #[test]
    fn failing_first_stage_pays_for_the_second() {
        // one bit cannot determine a random message; the noiseless full
        // word always can
        let (h, g) = mother();
        let first = vec![g.parity_positions()[0]];
        let policy = ArqPolicy {
            matrices: vec![h],
            stages: vec![
                ArqStage {
                    label: "probe".into(),
                    matrix: 0,
                    sent: first,
                },
                ArqStage {
                    label: "mother".into(),
                    matrix: 0,
                    sent: (0..96).collect(),
                },
            ],
            generator: g,
            max_transmissions: 1,
        };
        let rep = run_arq_throughput::<f64>(&policy, &cfg(vec![f64::INFINITY], 25)).unwrap();
        let p = &rep.points[0];
        assert_eq!(p.stage_successes, vec![0, 25]);
        assert_eq!(p.throughput, 48.0 / 96.0);
    }

    #[test]
    fn throughput_respects_bounds() {
        let policy = two_stage(64);
        let rep = run_arq_throughput::<f64>(&policy, &cfg(vec![-2.0, 0.0, 2.0, 6.0], 60)).unwrap();
        for p in &rep.points {
            assert!(p.throughput <= 48.0 / 64.0 + 1e-12);
            assert!(p.throughput <= p.capacity);
            assert!((p.throughput - p.delivered_bits as f64 / p.channel_uses as f64).abs() < 1e-12);
        }
        let again =
            run_arq_throughput::<f64>(&policy, &cfg(vec![-2.0, 0.0, 2.0, 6.0], 60)).unwrap();
        assert_eq!(rep, again);
    }

    #[test]
    fn rejects_non_incremental_ladders() {
        let mut policy = two_stage(64);
        policy.stages.swap(0, 1);
        assert!(matches!(
            policy.validate(),
            Err(SimError::NonMonotoneLadder(_))
        ));
        let mut policy = two_stage(64);
        let dropped = policy.stages[0].sent[0];
        policy.stages[1].sent.retain(|&x| x != dropped);
        assert!(matches!(
            policy.validate(),
            Err(SimError::NonMonotoneLadder(_))
        ));
    }

    #[test]
    fn family_orders_punctured_mother_and_levels() {
        use crate::extension::{extend, plan_levels};
        use crate::puncturing::ace_puncture;
        let dist = crate::construction::DegreeDistribution::new(
            vec![(0.21, 5), (0.25, 3), (0.25, 2), (0.29, 1)],
            vec![(1.0, 5)],
        );
        let profile = crate::construction::quantize_degrees(&dist, 96, 48).unwrap();
        let (raw, _) = peg_from_profile(&profile, 3, AceParams::default());
        let h = crate::gf2::information_first(&raw).unwrap();
        let g = systematize(&h).unwrap();
        let pattern = ace_puncture(&h, 48, 16).unwrap();
        let plan = plan_levels(48, 96, 48, &[Rate::new(48, 112), Rate::new(48, 128)]).unwrap();
        let h_ext = SparseBinaryMatrix::identity(16);
        let ladder = extend(&h, &h_ext, &plan).unwrap();

        let policy =
            ArqPolicy::family(&h, &g, Some((&pattern, &[16, 8])), Some(&ladder), 2).unwrap();
        let rates: Vec<Rate> = (0..policy.stages.len())
            .map(|s| policy.stage_rate(s))
            .collect();
        assert_eq!(
            rates,
            [
                Rate::new(48, 80),
                Rate::new(48, 88),
                Rate::new(48, 96),
                Rate::new(48, 112),
                Rate::new(48, 128)
            ]
        );
        assert_eq!(policy.matrices.len(), 3);
        assert_eq!(policy.generator.n(), 128);

        assert!(matches!(
            ArqPolicy::family(&h, &g, Some((&pattern, &[8, 16])), None, 1),
            Err(SimError::NonMonotoneLadder(_))
        ));
        let other = SparseBinaryMatrix::identity(96);
        assert!(ArqPolicy::family(&other, &g, None, Some(&ladder), 1).is_err());
    }

    #[test]
    fn subset_helper() {
        assert!(is_subset(&[1, 3], &[0, 1, 2, 3]));
        assert!(!is_subset(&[1, 4], &[0, 1, 2, 3]));
        assert!(is_subset(&[], &[]));
    }
}
