//! Rate-compatible LDPC code families.
//!
//! Builds irregular mother codes by progressive edge growth, derives
//! higher-rate members by cycle-aware puncturing and lower-rate members by
//! multi-level extension, and measures every member over BPSK/AWGN with
//! log-domain belief propagation.

pub mod channel;
pub mod construction;
pub mod cycles;
pub mod decoder;
pub mod extension;
pub mod gf2;
pub mod puncturing;
pub mod rng;
pub mod scalar;
pub mod sim;

/// Exact code rate.
pub type Rate = num_rational::Ratio<u64>;

pub type BpDecoder64 = decoder::BpDecoder<f64>;
pub type BpDecoder32 = decoder::BpDecoder<f32>;
pub type LlrVector64 = channel::LlrVector<f64>;
pub type LlrVector32 = channel::LlrVector<f32>;
