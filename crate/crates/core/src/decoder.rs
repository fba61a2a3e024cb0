//! Log-domain sum-product decoding with a flooding schedule.

use crate::channel::LlrVector;
use crate::gf2::{GeneratorMatrix, SparseBinaryMatrix};
use crate::scalar::Real;

/// Default bound on message magnitudes.
pub const DEFAULT_CLAMP: f64 = 30.0;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DecodeResult {
    /// Hard decisions on the posterior LLRs; an LLR of exactly 0 decides 0.
    pub codeword: Vec<u8>,
    /// The hard decisions satisfy every check.
    pub converged: bool,
    /// Message-passing iterations performed (0 when the channel decisions
    /// already form a codeword).
    pub iterations: usize,
}

impl DecodeResult {
    /// The message estimate read from the systematic positions of `g`.
    pub fn message(&self, g: &GeneratorMatrix) -> Vec<u8> {
        g.extract_message(&self.codeword)
    }
}

/// Decoder bound to one parity-check matrix. Edges are numbered row by row.
#[derive(Debug, Clone)]
pub struct BpDecoder<T> {
    n: usize,
    check_start: Vec<usize>,
    edge_var: Vec<usize>,
    var_start: Vec<usize>,
    var_edges: Vec<usize>,
    clamp: T,
}

impl<T: Real> BpDecoder<T> {
    pub fn new(h: &SparseBinaryMatrix) -> Self {
        let n = h.num_cols();
        let mut check_start = Vec::with_capacity(h.num_rows() + 1);
        let mut edge_var = Vec::with_capacity(h.num_edges());
        let mut per_var: Vec<Vec<usize>> = vec![Vec::new(); n];
        check_start.push(0);
        for row in h.rows() {
            for &v in row {
                per_var[v].push(edge_var.len());
                edge_var.push(v);
            }
            check_start.push(edge_var.len());
        }
        let mut var_start = Vec::with_capacity(n + 1);
        let mut var_edges = Vec::with_capacity(edge_var.len());
        var_start.push(0);
        for list in per_var {
            var_edges.extend(list);
            var_start.push(var_edges.len());
        }
        Self {
            n,
            check_start,
            edge_var,
            var_start,
            var_edges,
            clamp: T::lit(DEFAULT_CLAMP),
        }
    }

    pub fn with_clamp(mut self, clamp: f64) -> Self {
        self.clamp = T::lit(clamp);
        self
    }

    pub fn block_length(&self) -> usize {
        self.n
    }

    fn clip(&self, x: T) -> T {
        x.max(-self.clamp).min(self.clamp)
    }

    fn syndrome_ok(&self, bits: &[u8]) -> bool {
        self.check_start.windows(2).all(|w| {
            self.edge_var[w[0]..w[1]]
                .iter()
                .fold(0u8, |acc, &v| acc ^ bits[v])
                == 0
        })
    }

    fn decide(posterior: &[T], bits: &mut [u8]) {
        for (b, &l) in bits.iter_mut().zip(posterior) {
            *b = (l < T::zero()) as u8;
        }
    }

    /// Runs at most `max_iters` flooding iterations on channel LLRs `llr`
    /// (punctured positions 0). Stops as soon as the hard decisions satisfy
    /// every check.
    pub fn decode(&self, llr: &[T], max_iters: usize) -> DecodeResult {
        assert_eq!(
            llr.len(),
            self.n,
            "LLR vector length does not match the code"
        );
        let channel: Vec<T> = llr.iter().map(|&l| self.clip(l)).collect();
        let mut posterior = channel.clone();
        let mut bits = vec![0u8; self.n];
        Self::decide(&posterior, &mut bits);
        if self.syndrome_ok(&bits) {
            return DecodeResult {
                codeword: bits,
                converged: true,
                iterations: 0,
            };
        }

        let edges = self.edge_var.len();
        let half = T::lit(0.5);
        let two = T::lit(2.0);
        let mut to_check: Vec<T> = self.edge_var.iter().map(|&v| channel[v]).collect();
        let mut to_var = vec![T::zero(); edges];
        let mut t = vec![T::zero(); edges];
        let mut suffix: Vec<T> = Vec::new();

        for iter in 1..=max_iters {
            for w in self.check_start.windows(2) {
                let (a, b) = (w[0], w[1]);
                for e in a..b {
                    t[e] = (to_check[e] * half).tanh();
                }
                // leave-one-out products from both sides
                suffix.clear();
                suffix.resize(b - a + 1, T::one());
                for i in (0..b - a).rev() {
                    suffix[i] = suffix[i + 1] * t[a + i];
                }
                let mut prefix = T::one();
                for i in 0..b - a {
                    let p = prefix * suffix[i + 1];
                    to_var[a + i] = self.clip(two * p.atanh());
                    prefix = prefix * t[a + i];
                }
            }
            for v in 0..self.n {
                let ids = &self.var_edges[self.var_start[v]..self.var_start[v + 1]];
                let total = ids.iter().fold(channel[v], |acc, &e| acc + to_var[e]);
                posterior[v] = total;
                for &e in ids {
                    to_check[e] = self.clip(total - to_var[e]);
                }
            }
            Self::decide(&posterior, &mut bits);
            if self.syndrome_ok(&bits) {
                return DecodeResult {
                    codeword: bits,
                    converged: true,
                    iterations: iter,
                };
            }
        }
        DecodeResult {
            codeword: bits,
            converged: false,
            iterations: max_iters,
        }
    }
}

/// One-shot decode of an [`LlrVector`].
pub fn bp_decode<T: Real>(
    h: &SparseBinaryMatrix,
    llr: &LlrVector<T>,
    max_iters: usize,
) -> DecodeResult {
    BpDecoder::new(h).decode(&llr.values, max_iters)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::channel::{form_llrs, transmit_with};
    use crate::construction::{peg_from_profile, AceParams, DegreeProfile};
    use crate::gf2::systematize;
    use crate::rng;
    use rand::Rng;

    fn regular_code(n: usize, seed: u64) -> SparseBinaryMatrix {
        let profile = DegreeProfile {
            variable: vec![3; n],
            check: vec![6; n / 2],
        };
        peg_from_profile(&profile, seed, AceParams::default()).0
    }

    #[test]
    fn confident_zero_word_needs_no_iterations() {
        let h = regular_code(20, 1);
        let r = BpDecoder::<f64>::new(&h).decode(&[50.0; 20], 10);
        assert_eq!((r.converged, r.iterations), (true, 0));
        assert!(r.codeword.iter().all(|&b| b == 0));
    }

    #[test]
    fn recovers_punctured_bit() {
        let h = regular_code(20, 2);
        let g = systematize(&h).unwrap();
        let mut rng = rng::seeded(5);
        let msg: Vec<u8> = (0..g.k()).map(|_| rng.random_range(0..2)).collect();
        let c = g.encode(&msg).unwrap();
        let p = *g.parity_positions().last().unwrap();
        assert!(h.col_degree(p) >= 2);
        let sent: Vec<u8> = c
            .bits()
            .iter()
            .enumerate()
            .filter(|&(i, _)| i != p)
            .map(|(_, &b)| b)
            .collect();
        let y: Vec<f64> = transmit_with(&sent, 0.0, &mut rng);
        let llr = form_llrs(&y, 0.25, 20, &[p]).unwrap();
        assert_eq!(llr.values[p], 0.0);
        let r = bp_decode(&h, &llr, 20);
        assert!(r.converged);
        assert!(r.iterations >= 1 && r.iterations <= 3);
        assert_eq!(r.codeword, c.bits());
        assert_eq!(r.message(&g), msg);
    }

    #[test]
    fn all_zero_llrs_decide_the_zero_word() {
        // every decision ties at 0, and the all-zero word satisfies any H
        let h = regular_code(20, 3);
        let r = BpDecoder::<f64>::new(&h).decode(&[0.0; 20], 7);
        assert!(r.codeword.iter().all(|&b| b == 0));
        assert_eq!((r.converged, r.iterations), (true, 0));
    }

    #[test]
    fn symmetric_under_global_negation() {
        // even check degrees make the all-ones word a codeword
        let h = regular_code(60, 4);
        let dec = BpDecoder::<f64>::new(&h);
        let mut rng = rng::seeded(9);
        let y: Vec<f64> = transmit_with(&[0u8; 60], 0.8, &mut rng);
        let llr: Vec<f64> = y.iter().map(|v| 2.0 * v / 0.8).collect();
        let neg: Vec<f64> = llr.iter().map(|v| -v).collect();
        let a = dec.decode(&llr, 30);
        let b = dec.decode(&neg, 30);
        assert_eq!(a.converged, b.converged);
        assert_eq!(a.iterations, b.iterations);
        assert!(a.codeword.iter().zip(&b.codeword).all(|(x, y)| x ^ y == 1));
    }

    #[test]
    fn hard_decisions_invariant_to_scaling_at_start() {
        let h = regular_code(40, 6);
        let mut rng = rng::seeded(2);
        let y: Vec<f64> = transmit_with(&[0u8; 40], 1.0, &mut rng);
        let a = BpDecoder::<f64>::new(&h).decode(&y.iter().map(|v| 2.0 * v).collect::<Vec<_>>(), 0);
        let b = BpDecoder::<f64>::new(&h).decode(&y.iter().map(|v| 7.0 * v).collect::<Vec<_>>(), 0);
        assert_eq!(a.codeword, b.codeword);
    }

    #[test]
    fn more_iterations_keep_converged_result() {
        let h = regular_code(60, 7);
        let dec = BpDecoder::<f64>::new(&h);
        let mut rng = rng::seeded(3);
        for _ in 0..20 {
            let y: Vec<f64> = transmit_with(&[0u8; 60], 0.6, &mut rng);
            let llr: Vec<f64> = y.iter().map(|v| 2.0 * v / 0.6).collect();
            let short = dec.decode(&llr, 5);
            let long = dec.decode(&llr, 50);
            if short.converged {
                assert_eq!(short, long);
            }
        }
    }

    #[test]
    fn single_precision_agrees_on_easy_frames() {
        let h = regular_code(60, 8);
        let mut rng = rng::seeded(4);
        let y: Vec<f64> = transmit_with(&[0u8; 60], 0.4, &mut rng);
        let l64: Vec<f64> = y.iter().map(|v| 2.0 * v / 0.4).collect();
        let l32: Vec<f32> = l64.iter().map(|&v| v as f32).collect();
        let a = BpDecoder::<f64>::new(&h).decode(&l64, 40);
        let b = BpDecoder::<f32>::new(&h).decode(&l32, 40);
        assert!(a.converged && b.converged);
        assert_eq!(a.codeword, b.codeword);
    }
}
