//! BPSK and Gray-mapped square QAM over AWGN: modulation, seeded noise,
//! exact LLR demapping and Eb/N0 conversion.
//!
//! Constellations are normalized to unit average symbol energy, and noise
//! is specified per real dimension, so `sigma` always means the same thing
//! regardless of modulation order.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use thiserror::Error;

use crate::LLR_MAX;

#[derive(Debug, Error)]
pub enum ChannelError {
    #[error("code rate must lie in (0, 1], got {0}")]
    InvalidRate(f64),
    #[error("sigma must be positive, got {0}")]
    InvalidSigma(f64),
    #[error("unsupported QAM order {0} (expected 4, 16, 64 or 256)")]
    UnsupportedOrder(usize),
    #[error("bit count {bits} is not divisible by {per_symbol} bits per symbol")]
    BitCount { bits: usize, per_symbol: usize },
    #[error("channel LLR is NaN at position {0}")]
    NanLlr(usize),
}

/// One complex channel use.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Symbol {
    pub re: f64,
    pub im: f64,
}

/// Modulation scheme: BPSK on the real axis or Gray-mapped square M-QAM.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Modulation {
    Bpsk,
    Qam(usize),
}

impl Modulation {
    pub fn bits_per_symbol(&self) -> usize {
        match self {
            Modulation::Bpsk => 1,
            Modulation::Qam(m) => m.ilog2() as usize,
        }
    }

    fn validate(&self) -> Result<(), ChannelError> {
        match self {
            Modulation::Bpsk => Ok(()),
            Modulation::Qam(4 | 16 | 64 | 256) => Ok(()),
            Modulation::Qam(m) => Err(ChannelError::UnsupportedOrder(*m)),
        }
    }

    /// 2^(bits per axis) amplitude levels of one PAM axis, scaled for unit
    /// average symbol energy, indexed ascending.
    fn pam_levels(&self) -> Vec<f64> {
        match self {
            Modulation::Bpsk => vec![-1.0, 1.0],
            Modulation::Qam(m) => {
                let levels = (*m as f64).sqrt() as usize;
                let scale = (3.0 / (2.0 * (*m as f64 - 1.0))).sqrt();
                (0..levels)
                    .map(|i| (2.0 * i as f64 - (levels - 1) as f64) * scale)
                    .collect()
            }
        }
    }
}

/// PAM levels of one axis, shared with density evolution.
pub(crate) fn axis_levels(modulation: &Modulation) -> Vec<f64> {
    modulation.pam_levels()
}

/// Gray label of the PAM level with index `idx` (ascending amplitude), for
/// `bits` bits per axis. The most significant bit is the sign bit and the
/// all-zero label sits on the largest positive amplitude.
pub(crate) fn gray_label(idx: usize, bits: usize) -> usize {
    let descending = (1 << bits) - 1 - idx;
    descending ^ (descending >> 1)
}

/// Inverse of [`gray_label`]: level index for a per-axis bit pattern.
fn level_of_label(label: usize, bits: usize) -> usize {
    let mut descending = label;
    let mut shift = label >> 1;
    while shift != 0 {
        descending ^= shift;
        shift >>= 1;
    }
    (1 << bits) - 1 - descending
}

/// Channel parameterization used by the demapper and the simulation
/// harness.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ChannelModel {
    pub modulation: Modulation,
    pub sigma: f64,
    pub code_rate: f64,
}

impl ChannelModel {
    pub fn new(modulation: Modulation, sigma: f64, code_rate: f64) -> Result<Self, ChannelError> {
        modulation.validate()?;
        if !(sigma > 0.0) {
            return Err(ChannelError::InvalidSigma(sigma));
        }
        if !(code_rate > 0.0 && code_rate <= 1.0) {
            return Err(ChannelError::InvalidRate(code_rate));
        }
        Ok(Self {
            modulation,
            sigma,
            code_rate,
        })
    }

    /// Model at a given Eb/N0 operating point.
    pub fn from_ebn0(
        modulation: Modulation,
        ebn0_db: f64,
        code_rate: f64,
    ) -> Result<Self, ChannelError> {
        modulation.validate()?;
        let sigma = ebn0_to_sigma(ebn0_db, code_rate, modulation.bits_per_symbol())?;
        Self::new(modulation, sigma, code_rate)
    }
}

/// Noise standard deviation per real dimension for a unit-energy
/// constellation: `sigma = sqrt(1 / (2 * rate * bits_per_symbol *
/// 10^(ebn0_db/10)))`.
pub fn ebn0_to_sigma(ebn0_db: f64, rate: f64, bits_per_symbol: usize) -> Result<f64, ChannelError> {
    if !(rate > 0.0 && rate <= 1.0) {
        return Err(ChannelError::InvalidRate(rate));
    }
    assert!(bits_per_symbol >= 1);
    let ebn0 = 10f64.powf(ebn0_db / 10.0);
    Ok((1.0 / (2.0 * rate * bits_per_symbol as f64 * ebn0)).sqrt())
}

/// Maps bits to symbols. BPSK sends `1 - 2b` on the real axis; QAM sends
/// the first half of each symbol's bits on the in-phase axis and the rest
/// on the quadrature axis, Gray-coded per axis.
pub fn modulate(bits: &[u8], model: &ChannelModel) -> Result<Vec<Symbol>, ChannelError> {
    let bps = model.modulation.bits_per_symbol();
    if !bits.len().is_multiple_of(bps) {
        return Err(ChannelError::BitCount {
            bits: bits.len(),
            per_symbol: bps,
        });
    }
    let levels = model.modulation.pam_levels();
    let out = match model.modulation {
        Modulation::Bpsk => bits
            .iter()
            .map(|&b| Symbol {
                re: 1.0 - 2.0 * (b & 1) as f64,
                im: 0.0,
            })
            .collect(),
        Modulation::Qam(_) => {
            let axis_bits = bps / 2;
            let pack = |chunk: &[u8]| {
                chunk
                    .iter()
                    .fold(0usize, |acc, &b| (acc << 1) | (b & 1) as usize)
            };
            bits.chunks(bps)
                .map(|sym| Symbol {
                    re: levels[level_of_label(pack(&sym[..axis_bits]), axis_bits)],
                    im: levels[level_of_label(pack(&sym[axis_bits..]), axis_bits)],
                })
                .collect()
        }
    };
    Ok(out)
}

/// Adds independent zero-mean Gaussian noise with standard deviation
/// `sigma` per real dimension. Deterministic for a fixed seed.
pub fn awgn(symbols: &[Symbol], sigma: f64, seed: u64) -> Vec<Symbol> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    symbols
        .iter()
        .map(|s| {
            let n_re: f64 = StandardNormal.sample(&mut rng);
            let n_im: f64 = StandardNormal.sample(&mut rng);
            Symbol {
                re: s.re + sigma * n_re,
                im: s.im + sigma * n_im,
            }
        })
        .collect()
}

/// Length-n vector of channel LLRs (positive favors bit 0), saturated to
/// `±LLR_MAX`.
#[derive(Debug, Clone, PartialEq)]
pub struct LlrWord {
    values: Vec<f64>,
}

impl LlrWord {
    /// Wraps raw LLRs, saturating magnitudes to `LLR_MAX`. NaN entries are
    /// rejected.
    pub fn new(values: Vec<f64>) -> Result<Self, ChannelError> {
        let mut values = values;
        for (i, v) in values.iter_mut().enumerate() {
            if v.is_nan() {
                return Err(ChannelError::NanLlr(i));
            }
            *v = v.clamp(-LLR_MAX, LLR_MAX);
        }
        Ok(Self { values })
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }
}

/// Exact per-bit LLR of one PAM axis observation: `log(sum_{levels with
/// bit=0} exp(-(r-w)^2/2s^2) / sum_{levels with bit=1} ...)`, evaluated
/// with log-sum-exp for stability.
pub(crate) fn pam_bit_llrs(r: f64, levels: &[f64], axis_bits: usize, sigma: f64, out: &mut [f64]) {
    let inv = 1.0 / (2.0 * sigma * sigma);
    // log-sum-exp accumulators per bit position and bit value.
    let mut max0 = vec![f64::NEG_INFINITY; axis_bits];
    let mut max1 = vec![f64::NEG_INFINITY; axis_bits];
    let exps: Vec<f64> = levels.iter().map(|w| -(r - w) * (r - w) * inv).collect();
    for (idx, &e) in exps.iter().enumerate() {
        let label = gray_label(idx, axis_bits);
        for (z, (m0, m1)) in max0.iter_mut().zip(max1.iter_mut()).enumerate() {
            if label >> (axis_bits - 1 - z) & 1 == 0 {
                *m0 = m0.max(e);
            } else {
                *m1 = m1.max(e);
            }
        }
    }
    for z in 0..axis_bits {
        let (mut s0, mut s1) = (0.0, 0.0);
        for (idx, &e) in exps.iter().enumerate() {
            let label = gray_label(idx, axis_bits);
            if label >> (axis_bits - 1 - z) & 1 == 0 {
                s0 += (e - max0[z]).exp();
            } else {
                s1 += (e - max1[z]).exp();
            }
        }
        out[z] = (max0[z] + s0.ln()) - (max1[z] + s1.ln());
    }
}

/// Demaps received symbols to channel LLRs. BPSK uses `2 y / sigma^2`; QAM
/// evaluates the exact log-sum LLR independently per axis (valid for
/// Gray-labelled square constellations). Results saturate at `±LLR_MAX`.
pub fn demap_llr(received: &[Symbol], model: &ChannelModel) -> Result<LlrWord, ChannelError> {
    let sigma2 = model.sigma * model.sigma;
    let values = match model.modulation {
        Modulation::Bpsk => received.iter().map(|s| 2.0 * s.re / sigma2).collect(),
        Modulation::Qam(_) => {
            let levels = model.modulation.pam_levels();
            let axis_bits = model.modulation.bits_per_symbol() / 2;
            let mut values = Vec::with_capacity(received.len() * axis_bits * 2);
            let mut scratch = vec![0.0; axis_bits];
            for s in received {
                for axis in [s.re, s.im] {
                    pam_bit_llrs(axis, &levels, axis_bits, model.sigma, &mut scratch);
                    values.extend_from_slice(&scratch);
                }
            }
            values
        }
    };
    LlrWord::new(values)
}
