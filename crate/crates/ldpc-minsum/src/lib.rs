//! LDPC decoding with min-sum scaling schedules and the offline design
//! pipeline that picks those schedules.
//!
//! The crate has three layers:
//!
//! - **Decoding**: sparse parity-check matrices ([`code`]), BPSK / square-QAM
//!   AWGN channels with exact LLR demapping ([`channel`]), and an iterative
//!   message-passing decoder ([`decoder`]) with pluggable check rules (SPA,
//!   min-sum) and per-iteration scaling schedules (constant, SVS, GSVS,
//!   degree-based 2D correction).
//! - **Design**: discretized density evolution for the min-sum family
//!   ([`de`]) and Nelder-Mead optimization of the GSVS schedule parameters
//!   `(alpha0, S)` over the hardware-friendly scaling grid ([`optimize`]).
//! - **Measurement**: a Monte-Carlo word/bit error rate harness with
//!   deterministic counter-based seeding and CSV output ([`harness`]).
//!
//! Every runnable capability has an example under `examples/`; the thin
//! `ldpcsim` binary exposes the `simulate`, `threshold` and `optimize`
//! subcommands on top of the same library calls.

pub mod channel;
pub mod code;
pub mod de;
pub mod decoder;
pub mod harness;
pub mod optimize;

/// Saturation bound for LLR values, shared by the channel demapper, the
/// decoder's message clipping and the density evolution grid.
pub const LLR_MAX: f64 = 25.0;

pub use channel::{ChannelModel, LlrWord, Modulation};
pub use code::{DegreeDistributions, Encoder, ParityCheckMatrix};
pub use de::{QuantizedPmf, ThresholdResult};
pub use decoder::{DecodeResult, Decoder, DecoderConfig, DecodeRule, ScalingSchedule};
pub use harness::{SimConfig, SimPoint};
