//! Monte-Carlo WER/BER/average-iteration measurement.
//!
//! Every simulated word is a pure function of `(base seed, decoder name,
//! Eb/N0, word index)`: the per-word seed is derived by mixing those values
//! through SplitMix64, so results never depend on the worker count or
//! scheduling. Words are processed in fixed-size batches; the stop rule is
//! evaluated at batch boundaries, which keeps the set of simulated words
//! deterministic too.

mod config;

pub use config::{
    parse_modulation, parse_sim_config, CodeSpec, ConfigError, DecoderSpec, FailIters, SimConfig,
};

use std::io::Write;
use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use thiserror::Error;

use crate::channel::{awgn, demap_llr, modulate, ChannelError, ChannelModel, LlrWord};
use crate::code::{
    build_encoder, generate_irregular_code, generate_regular_code, load_alist, AlistError,
    CodeError, Encoder, GenerateError, ParityCheckMatrix,
};
use crate::decoder::{Decoder, DecoderConfig, DecoderError};

#[derive(Debug, Error)]
pub enum HarnessError {
    #[error(transparent)]
    Config(#[from] ConfigError),
    #[error("failed to read {path}: {source}")]
    Io {
        path: String,
        source: std::io::Error,
    },
    #[error(transparent)]
    Alist(#[from] AlistError),
    #[error(transparent)]
    Generate(#[from] GenerateError),
    #[error(transparent)]
    Code(#[from] CodeError),
    #[error(transparent)]
    Decoder(#[from] DecoderError),
    #[error(transparent)]
    Channel(#[from] ChannelError),
    #[error("no decoder named {0:?} in the configuration")]
    UnknownDecoder(String),
    #[error("csv write failed: {0}")]
    Csv(#[from] std::io::Error),
}

/// One measured operating point.
#[derive(Debug, Clone, PartialEq)]
pub struct SimPoint {
    pub config_name: String,
    pub ebn0_db: f64,
    pub words: u64,
    pub word_errors: u64,
    pub bit_errors: u64,
    pub wer: f64,
    pub ber: f64,
    pub avg_iterations: f64,
    pub seconds: f64,
}

/// Exact CSV schema written by `run_curve`.
pub const CSV_HEADER: &str = "config,ebn0_db,words,word_errors,bit_errors,wer,ber,avg_iters,seconds";

impl SimPoint {
    pub fn csv_row(&self) -> String {
        format!(
            "{},{},{},{},{},{:.6e},{:.6e},{:.3},{:.3}",
            self.config_name,
            self.ebn0_db,
            self.words,
            self.word_errors,
            self.bit_errors,
            self.wer,
            self.ber,
            self.avg_iterations,
            self.seconds
        )
    }

    /// Wilson score interval for the word error rate.
    pub fn wer_confidence_interval(&self, z: f64) -> (f64, f64) {
        wilson_interval(self.word_errors, self.words, z)
    }

    /// Fields that must be identical across reruns (everything but the
    /// wall time).
    pub fn deterministic_fields(&self) -> (String, u64, u64, u64, u64, u64) {
        (
            self.config_name.clone(),
            self.ebn0_db.to_bits(),
            self.words,
            self.word_errors,
            self.bit_errors,
            self.avg_iterations.to_bits(),
        )
    }
}

/// Wilson score interval for a binomial proportion.
pub fn wilson_interval(successes: u64, trials: u64, z: f64) -> (f64, f64) {
    if trials == 0 {
        return (0.0, 1.0);
    }
    let n = trials as f64;
    let p = successes as f64 / n;
    let z2 = z * z;
    let denom = 1.0 + z2 / n;
    let center = (p + z2 / (2.0 * n)) / denom;
    let half = z * (p * (1.0 - p) / n + z2 / (4.0 * n * n)).sqrt() / denom;
    ((center - half).max(0.0), (center + half).min(1.0))
}

fn splitmix64(state: &mut u64) {
    *state = state.wrapping_add(0x9e3779b97f4a7c15);
    let mut z = *state;
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58476d1ce4e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d049bb133111eb);
    *state = z ^ (z >> 31);
}

fn fnv1a(text: &str) -> u64 {
    let mut hash = 0xcbf29ce484222325u64;
    for b in text.bytes() {
        hash ^= b as u64;
        hash = hash.wrapping_mul(0x100000001b3);
    }
    hash
}

/// Counter-based per-word seed: a pure function of the run identity and
/// the word index.
fn word_seed(base_seed: u64, decoder_name: &str, ebn0_db: f64, word_index: u64) -> u64 {
    let mut state = base_seed ^ fnv1a(decoder_name);
    splitmix64(&mut state);
    state ^= ebn0_db.to_bits();
    splitmix64(&mut state);
    state ^= word_index;
    splitmix64(&mut state);
    state
}

/// Worker count: `LDPC_THREADS` overrides the configuration, which
/// overrides the machine's available parallelism.
pub fn effective_threads(configured: Option<usize>) -> usize {
    if let Ok(text) = std::env::var("LDPC_THREADS") {
        if let Ok(t) = text.trim().parse::<usize>() {
            if t >= 1 {
                return t;
            }
        }
    }
    configured.unwrap_or_else(|| {
        std::thread::available_parallelism()
            .map(|t| t.get())
            .unwrap_or(1)
    })
}

struct WordOutcome {
    word_error: bool,
    bit_errors: u64,
    iterations: u64,
    success: bool,
}

/// Stop rules are checked once per batch of this many words.
const BATCH_SIZE: u64 = 256;

/// A simulation run bound to one code: matrix loaded or generated, encoder
/// built, decoders constructed and shared across workers.
pub struct SimRunner {
    config: SimConfig,
    h: ParityCheckMatrix,
    encoder: Encoder,
    decoders: Vec<(String, Decoder)>,
}

impl SimRunner {
    pub fn new(config: SimConfig) -> Result<Self, HarnessError> {
        config.validate()?;
        let h = load_code(&config.code)?;
        let encoder = build_encoder(&h);
        let mut decoders = Vec::with_capacity(config.decoders.len());
        for spec in &config.decoders {
            let decoder_config = DecoderConfig::new(spec.rule, spec.schedule.clone())
                .with_max_iterations(config.max_iterations);
            decoders.push((spec.name.clone(), Decoder::new(&h, decoder_config)?));
        }
        Ok(Self {
            config,
            h,
            encoder,
            decoders,
        })
    }

    pub fn config(&self) -> &SimConfig {
        &self.config
    }

    pub fn matrix(&self) -> &ParityCheckMatrix {
        &self.h
    }

    pub fn encoder(&self) -> &Encoder {
        &self.encoder
    }

    /// Effective code rate used for the Eb/N0 conversion.
    pub fn rate(&self) -> f64 {
        self.encoder.rate()
    }

    fn decoder(&self, name: &str) -> Result<&Decoder, HarnessError> {
        self.decoders
            .iter()
            .find(|(n, _)| n == name)
            .map(|(_, d)| d)
            .ok_or_else(|| HarnessError::UnknownDecoder(name.to_string()))
    }

    fn simulate_word(
        &self,
        decoder: &Decoder,
        model: &ChannelModel,
        seed: u64,
    ) -> Result<WordOutcome, HarnessError> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let info: Vec<u8> = (0..self.encoder.k())
            .map(|_| rng.random_range(0..2u8))
            .collect();
        let mut codeword = self.encoder.encode(&info)?;

        // Pad to a whole number of symbols; the padded LLRs are dropped
        // after demapping.
        let bps = model.modulation.bits_per_symbol();
        let n = codeword.len();
        let padded = n.div_ceil(bps) * bps;
        codeword.resize(padded, 0);
        let tx = modulate(&codeword, model)?;
        codeword.truncate(n);

        let noise_seed = rng.random::<u64>();
        let rx = awgn(&tx, model.sigma, noise_seed);
        let mut llrs = demap_llr(&rx, model)?.values().to_vec();
        llrs.truncate(n);
        let word = LlrWord::new(llrs)?;

        let result = decoder.decode(&word)?;
        let bit_errors = result
            .bits
            .iter()
            .zip(&codeword)
            .filter(|(a, b)| a != b)
            .count() as u64;
        Ok(WordOutcome {
            word_error: bit_errors > 0,
            bit_errors,
            iterations: result.iterations_used as u64,
            success: result.success,
        })
    }

    /// Simulates one decoder at one Eb/N0 until the stop rule fires:
    /// `min_word_errors` collected or `max_words` simulated, checked at
    /// batch granularity.
    pub fn run_point(&self, decoder_name: &str, ebn0_db: f64) -> Result<SimPoint, HarnessError> {
        let decoder = self.decoder(decoder_name)?;
        let model = ChannelModel::from_ebn0(self.config.modulation, ebn0_db, self.rate())?;
        let threads = effective_threads(self.config.threads);
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(threads)
            .build()
            .expect("thread pool");

        let start = Instant::now();
        let mut words = 0u64;
        let mut word_errors = 0u64;
        let mut bit_errors = 0u64;
        let mut iter_sum = 0u64;
        let mut success_iter_sum = 0u64;
        let mut successes = 0u64;

        while words < self.config.max_words && word_errors < self.config.min_word_errors {
            let batch = BATCH_SIZE.min(self.config.max_words - words);
            let outcomes: Result<Vec<WordOutcome>, HarnessError> = pool.install(|| {
                (words..words + batch)
                    .into_par_iter()
                    .map(|w| {
                        let seed = word_seed(self.config.base_seed, decoder_name, ebn0_db, w);
                        self.simulate_word(decoder, &model, seed)
                    })
                    .collect()
            });
            for outcome in outcomes? {
                words += 1;
                word_errors += outcome.word_error as u64;
                bit_errors += outcome.bit_errors;
                iter_sum += outcome.iterations;
                if outcome.success {
                    successes += 1;
                    success_iter_sum += outcome.iterations;
                }
            }
        }

        let avg_iterations = match self.config.fail_iters {
            FailIters::Max => iter_sum as f64 / words as f64,
            FailIters::Exclude => {
                if successes > 0 {
                    success_iter_sum as f64 / successes as f64
                } else {
                    self.config.max_iterations as f64
                }
            }
        };
        Ok(SimPoint {
            config_name: decoder_name.to_string(),
            ebn0_db,
            words,
            word_errors,
            bit_errors,
            wer: word_errors as f64 / words as f64,
            ber: bit_errors as f64 / (words as f64 * self.h.n() as f64),
            avg_iterations,
            seconds: start.elapsed().as_secs_f64(),
        })
    }

    /// Runs the whole sweep for every configured decoder, appending one CSV
    /// row per completed point to `out` (flushed immediately so partial
    /// results survive interruption).
    pub fn run_curve(&self, out: &mut dyn Write) -> Result<Vec<SimPoint>, HarnessError> {
        writeln!(
            out,
            "# fail_iters={}: {}",
            match self.config.fail_iters {
                FailIters::Max => "max",
                FailIters::Exclude => "exclude",
            },
            match self.config.fail_iters {
                FailIters::Max => "failed words count max_iterations in avg_iters",
                FailIters::Exclude => "failed words are excluded from avg_iters",
            }
        )?;
        writeln!(out, "{CSV_HEADER}")?;
        out.flush()?;
        let mut points = Vec::new();
        for spec in &self.config.decoders {
            for ebn0 in self.config.ebn0_points() {
                let point = self.run_point(&spec.name, ebn0)?;
                writeln!(out, "{}", point.csv_row())?;
                out.flush()?;
                points.push(point);
            }
        }
        Ok(points)
    }
}

/// Loads or generates the parity-check matrix named by a [`CodeSpec`].
pub fn load_code(spec: &CodeSpec) -> Result<ParityCheckMatrix, HarnessError> {
    match spec {
        CodeSpec::Alist(path) => {
            let text = std::fs::read_to_string(path).map_err(|source| HarnessError::Io {
                path: path.display().to_string(),
                source,
            })?;
            Ok(load_alist(&text)?)
        }
        CodeSpec::Regular { n, dv, dc, seed } => {
            Ok(generate_regular_code(*n, *dv, *dc, *seed)?)
        }
        CodeSpec::Irregular { degrees, dc, seed } => {
            Ok(generate_irregular_code(degrees, *dc, *seed)?)
        }
    }
}
