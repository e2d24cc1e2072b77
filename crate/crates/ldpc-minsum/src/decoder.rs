//! Iterative message-passing decoding with pluggable check-node rules and
//! per-iteration scaling schedules.
//!
//! One iteration of the flooding schedule: every check node computes its
//! replies from the current variable messages (horizontal step), every
//! variable node combines the channel LLR with the incoming replies
//! (vertical step), hard decisions are taken from the aggregated LLRs and
//! the syndrome is checked. Decoding stops on a zero syndrome or when the
//! iteration budget is exhausted.
//!
//! The scaling schedules: a constant factor, the SVS stair sequence
//! `alpha_i = 1 - 2^(-ceil(i/S))`, its generalization GSVS
//! `alpha_i = 1 - (1 - alpha0) * 2^(-(ceil(i/S) - 1))` which starts at
//! `alpha0` instead of 0.5, and degree-dependent two-dimensional correction
//! factors.

use std::collections::BTreeMap;
use std::sync::atomic::{AtomicUsize, Ordering};

use thiserror::Error;

use crate::channel::LlrWord;
use crate::code::ParityCheckMatrix;
use crate::LLR_MAX;

pub const DEFAULT_MAX_ITERATIONS: usize = 40;

#[derive(Debug, Error)]
pub enum DecoderError {
    #[error("schedule {0:?} does not define a per-iteration factor")]
    NoIterationFactor(&'static str),
    #[error("iteration index must be >= 1")]
    IterationIndex,
    #[error("invalid schedule parameter: {0}")]
    InvalidSchedule(String),
    #[error("max_iterations must be >= 1")]
    InvalidIterations,
    #[error("two-dimensional correction requires the min-sum rule")]
    TwoDimWithSpa,
    #[error("check node {0} has degree < 2")]
    DegenerateCheck(usize),
    #[error("LLR word has length {got}, expected {expected}")]
    LengthMismatch { got: usize, expected: usize },
}

/// Per-iteration scaling rule applied to check-node outputs.
#[derive(Debug, Clone, PartialEq)]
pub enum ScalingSchedule {
    /// Plain min-sum (or SPA): no scaling.
    None,
    /// Constant factor `alpha` in (0, 1].
    Constant(f64),
    /// Stair sequence starting at 0.5, doubling period `step`.
    Svs { step: usize },
    /// Stair sequence starting at `alpha0`, doubling period `step`.
    Gsvs { alpha0: f64, step: usize },
    /// Degree-dependent factors for check outputs and, at the variable
    /// nodes, for the incoming check-message sums.
    TwoDim {
        check_factors: BTreeMap<usize, f64>,
        var_factors: BTreeMap<usize, f64>,
    },
}

impl ScalingSchedule {
    /// The reference two-dimensional correction factors: check degrees
    /// 4..=7 scaled by 0.94, 0.92, 0.88, 0.86 and variable degrees 1, 2, 3,
    /// 8 scaled by 1.00, 1.00, 0.91, 0.83.
    pub fn two_dim_default() -> Self {
        ScalingSchedule::TwoDim {
            check_factors: BTreeMap::from([(4, 0.94), (5, 0.92), (6, 0.88), (7, 0.86)]),
            var_factors: BTreeMap::from([(1, 1.0), (2, 1.0), (3, 0.91), (8, 0.83)]),
        }
    }

    /// Scaling factor for iteration `i >= 1`. Defined for the constant, SVS
    /// and GSVS kinds; `None` and `TwoDim` have no single per-iteration
    /// factor.
    pub fn alpha(&self, i: usize) -> Result<f64, DecoderError> {
        if i == 0 {
            return Err(DecoderError::IterationIndex);
        }
        match *self {
            ScalingSchedule::Constant(a) => Ok(a),
            ScalingSchedule::Svs { step } => {
                let block = i.div_ceil(step) as i32;
                Ok(1.0 - 2f64.powi(-block))
            }
            ScalingSchedule::Gsvs { alpha0, step } => {
                let block = i.div_ceil(step) as i32;
                Ok(1.0 - (1.0 - alpha0) * 2f64.powi(-(block - 1)))
            }
            ScalingSchedule::None => Err(DecoderError::NoIterationFactor("None")),
            ScalingSchedule::TwoDim { .. } => Err(DecoderError::NoIterationFactor("TwoDim")),
        }
    }

    pub fn validate(&self) -> Result<(), DecoderError> {
        match self {
            ScalingSchedule::None | ScalingSchedule::TwoDim { .. } => Ok(()),
            ScalingSchedule::Constant(a) => {
                if *a > 0.0 && *a <= 1.0 {
                    Ok(())
                } else {
                    Err(DecoderError::InvalidSchedule(format!(
                        "constant factor {a} outside (0, 1]"
                    )))
                }
            }
            ScalingSchedule::Svs { step } => {
                if *step >= 1 {
                    Ok(())
                } else {
                    Err(DecoderError::InvalidSchedule("svs step must be >= 1".into()))
                }
            }
            ScalingSchedule::Gsvs { alpha0, step } => {
                if !(*alpha0 > 0.0 && *alpha0 <= 1.0) {
                    Err(DecoderError::InvalidSchedule(format!(
                        "gsvs alpha0 {alpha0} outside (0, 1]"
                    )))
                } else if *step < 1 {
                    Err(DecoderError::InvalidSchedule("gsvs step must be >= 1".into()))
                } else {
                    Ok(())
                }
            }
        }
    }

    /// Parses the schedule grammar `none | const:<a> | svs:<S> |
    /// gsvs:<a0>,<S> | 2d`.
    pub fn parse(text: &str) -> Result<Self, DecoderError> {
        let bad = |msg: &str| DecoderError::InvalidSchedule(format!("{msg} in {text:?}"));
        let schedule = match text.trim() {
            "none" => ScalingSchedule::None,
            "2d" => ScalingSchedule::two_dim_default(),
            other => {
                let (kind, args) = other
                    .split_once(':')
                    .ok_or_else(|| bad("expected kind:args"))?;
                match kind {
                    "const" => ScalingSchedule::Constant(
                        args.parse().map_err(|_| bad("bad constant factor"))?,
                    ),
                    "svs" => ScalingSchedule::Svs {
                        step: args.parse().map_err(|_| bad("bad step"))?,
                    },
                    "gsvs" => {
                        let (a, s) = args.split_once(',').ok_or_else(|| bad("expected a0,S"))?;
                        ScalingSchedule::Gsvs {
                            alpha0: a.trim().parse().map_err(|_| bad("bad alpha0"))?,
                            step: s.trim().parse().map_err(|_| bad("bad step"))?,
                        }
                    }
                    _ => return Err(bad("unknown schedule kind")),
                }
            }
        };
        schedule.validate()?;
        Ok(schedule)
    }
}

impl std::fmt::Display for ScalingSchedule {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            ScalingSchedule::None => write!(f, "none"),
            ScalingSchedule::Constant(a) => write!(f, "const:{a}"),
            ScalingSchedule::Svs { step } => write!(f, "svs:{step}"),
            ScalingSchedule::Gsvs { alpha0, step } => write!(f, "gsvs:{alpha0},{step}"),
            ScalingSchedule::TwoDim { .. } => write!(f, "2d"),
        }
    }
}

/// Check-node update rule.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DecodeRule {
    /// Exact tanh-domain sum-product.
    Spa,
    /// Sign-product times minimum magnitude.
    MinSum,
}

#[derive(Debug, Clone, PartialEq)]
pub struct DecoderConfig {
    pub rule: DecodeRule,
    /// Scaling schedule; ignored by the SPA rule.
    pub schedule: ScalingSchedule,
    pub max_iterations: usize,
    /// Messages are clipped to this magnitude after every update. Set to
    /// `f64::INFINITY` to disable clipping.
    pub llr_clip: f64,
}

impl DecoderConfig {
    pub fn new(rule: DecodeRule, schedule: ScalingSchedule) -> Self {
        Self {
            rule,
            schedule,
            max_iterations: DEFAULT_MAX_ITERATIONS,
            llr_clip: LLR_MAX,
        }
    }

    pub fn with_max_iterations(mut self, max_iterations: usize) -> Self {
        self.max_iterations = max_iterations;
        self
    }

    pub fn with_llr_clip(mut self, llr_clip: f64) -> Self {
        self.llr_clip = llr_clip;
        self
    }

    pub fn validate(&self) -> Result<(), DecoderError> {
        if self.max_iterations == 0 {
            return Err(DecoderError::InvalidIterations);
        }
        if self.rule == DecodeRule::Spa && matches!(self.schedule, ScalingSchedule::TwoDim { .. }) {
            return Err(DecoderError::TwoDimWithSpa);
        }
        self.schedule.validate()
    }
}

/// Outcome of one decode call.
#[derive(Debug, Clone, PartialEq)]
pub struct DecodeResult {
    /// Hard decisions, 0/1 per variable node.
    pub bits: Vec<u8>,
    /// True iff `bits` satisfies every parity check.
    pub success: bool,
    /// Iterations actually run; equals `max_iterations` on failure.
    pub iterations_used: usize,
    /// Aggregated decision LLRs of the final iteration.
    pub final_llrs: LlrWord,
}

/// Min-sum check update: each outgoing edge carries the sign product and
/// minimum magnitude over the other edges, scaled by `alpha`. `sign(0)`
/// counts as positive.
pub fn check_update_minsum(incoming: &[f64], alpha: f64) -> Vec<f64> {
    let mut out = vec![0.0; incoming.len()];
    check_update_minsum_into(incoming, alpha, &mut out);
    out
}

fn check_update_minsum_into(incoming: &[f64], alpha: f64, out: &mut [f64]) {
    debug_assert!(incoming.len() >= 2);
    let mut min1 = f64::INFINITY;
    let mut min2 = f64::INFINITY;
    let mut argmin = 0usize;
    let mut sign_product = 1.0f64;
    for (e, &v) in incoming.iter().enumerate() {
        let mag = v.abs();
        if mag < min1 {
            min2 = min1;
            min1 = mag;
            argmin = e;
        } else if mag < min2 {
            min2 = mag;
        }
        if v < 0.0 {
            sign_product = -sign_product;
        }
    }
    for (e, &v) in incoming.iter().enumerate() {
        let mag = if e == argmin { min2 } else { min1 };
        let sign = if v < 0.0 { -sign_product } else { sign_product };
        out[e] = alpha * sign * mag;
    }
}

/// Tanh-domain SPA check update, computed with prefix/suffix products so no
/// division by a near-zero tanh is needed. Outputs are clipped to
/// `±LLR_MAX` to keep `atanh` finite.
pub fn check_update_spa(incoming: &[f64]) -> Vec<f64> {
    let mut out = vec![0.0; incoming.len()];
    let mut prefix = vec![0.0; incoming.len()];
    check_update_spa_into(incoming, &mut out, &mut prefix);
    out
}

fn check_update_spa_into(incoming: &[f64], out: &mut [f64], prefix: &mut [f64]) {
    debug_assert!(incoming.len() >= 2);
    let d = incoming.len();
    let mut acc = 1.0;
    for e in 0..d {
        prefix[e] = acc;
        acc *= (incoming[e] * 0.5).tanh();
    }
    let mut suffix = 1.0;
    for e in (0..d).rev() {
        let product = prefix[e] * suffix;
        let clamped = product.clamp(-1.0 + 1e-15, 1.0 - 1e-15);
        out[e] = (2.0 * clamped.atanh()).clamp(-LLR_MAX, LLR_MAX);
        suffix *= (incoming[e] * 0.5).tanh();
    }
}

/// Min-sum check update scaled by the factor registered for this check
/// degree. Returns the outputs and whether the degree was missing from the
/// table (in which case the factor falls back to 1.0).
pub fn check_update_2d(
    incoming: &[f64],
    check_degree: usize,
    factors: &BTreeMap<usize, f64>,
) -> (Vec<f64>, bool) {
    let (alpha, missing) = match factors.get(&check_degree) {
        Some(&f) => (f, false),
        None => (1.0, true),
    };
    (check_update_minsum(incoming, alpha), missing)
}

enum IterationScaling {
    Spa,
    Alpha(Vec<f64>),
    TwoDim,
}

/// Message-passing decoder bound to one parity-check matrix and
/// configuration. Immutable after construction, so one instance can serve
/// many concurrent decode calls; per-call state lives on the caller's
/// stack.
pub struct Decoder {
    h: ParityCheckMatrix,
    config: DecoderConfig,
    // Flat edge layout: edge e belongs to variable var_of_edge[e]; edges of
    // variable j are var_edges[j].clone(); check i reads/writes the edge
    // indices in check_edges[i].
    var_edge_start: Vec<usize>,
    check_edges: Vec<Vec<usize>>,
    scaling: IterationScaling,
    check_factor: Vec<f64>,
    var_factor: Vec<f64>,
    factor_warnings: AtomicUsize,
}

impl Decoder {
    pub fn new(h: &ParityCheckMatrix, config: DecoderConfig) -> Result<Self, DecoderError> {
        config.validate()?;
        if let Some(i) = h.rows().iter().position(|r| r.len() < 2) {
            return Err(DecoderError::DegenerateCheck(i));
        }

        let mut var_edge_start = Vec::with_capacity(h.n() + 1);
        var_edge_start.push(0usize);
        for j in 0..h.n() {
            var_edge_start.push(var_edge_start[j] + h.col(j).len());
        }
        let check_edges: Vec<Vec<usize>> = h
            .rows()
            .iter()
            .enumerate()
            .map(|(i, row)| {
                row.iter()
                    .map(|&j| {
                        let pos = h.col(j).binary_search(&i).expect("consistent adjacency");
                        var_edge_start[j] + pos
                    })
                    .collect()
            })
            .collect();

        let mut factor_warnings = 0usize;
        let (scaling, check_factor, var_factor) = match (&config.rule, &config.schedule) {
            (DecodeRule::Spa, _) => (IterationScaling::Spa, Vec::new(), Vec::new()),
            (DecodeRule::MinSum, ScalingSchedule::TwoDim { check_factors, var_factors }) => {
                let mut resolve = |degrees: Vec<usize>, table: &BTreeMap<usize, f64>| {
                    degrees
                        .into_iter()
                        .map(|d| match table.get(&d) {
                            Some(&f) => f,
                            None => {
                                factor_warnings += 1;
                                1.0
                            }
                        })
                        .collect::<Vec<f64>>()
                };
                let cf = resolve(h.rows().iter().map(Vec::len).collect(), check_factors);
                let vf = resolve(h.cols().iter().map(Vec::len).collect(), var_factors);
                (IterationScaling::TwoDim, cf, vf)
            }
            (DecodeRule::MinSum, schedule) => {
                let alphas = match schedule {
                    ScalingSchedule::None => vec![1.0; config.max_iterations],
                    other => (1..=config.max_iterations)
                        .map(|i| other.alpha(i))
                        .collect::<Result<_, _>>()?,
                };
                (IterationScaling::Alpha(alphas), Vec::new(), Vec::new())
            }
        };

        Ok(Self {
            h: h.clone(),
            config,
            var_edge_start,
            check_edges,
            scaling,
            check_factor,
            var_factor,
            factor_warnings: AtomicUsize::new(factor_warnings),
        })
    }

    pub fn config(&self) -> &DecoderConfig {
        &self.config
    }

    pub fn matrix(&self) -> &ParityCheckMatrix {
        &self.h
    }

    /// Number of nodes whose degree had no two-dimensional factor and fell
    /// back to 1.0.
    pub fn factor_warnings(&self) -> usize {
        self.factor_warnings.load(Ordering::Relaxed)
    }

    /// Decodes one word of channel LLRs.
    pub fn decode(&self, channel_llrs: &LlrWord) -> Result<DecodeResult, DecoderError> {
        self.decode_inner(channel_llrs, None)
    }

    /// As [`Decoder::decode`], additionally returning the hard-decision
    /// vector of every iteration run.
    pub fn decode_traced(
        &self,
        channel_llrs: &LlrWord,
    ) -> Result<(DecodeResult, Vec<Vec<u8>>), DecoderError> {
        let mut trace = Vec::new();
        let result = self.decode_inner(channel_llrs, Some(&mut trace))?;
        Ok((result, trace))
    }

    fn decode_inner(
        &self,
        channel_llrs: &LlrWord,
        mut trace: Option<&mut Vec<Vec<u8>>>,
    ) -> Result<DecodeResult, DecoderError> {
        let n = self.h.n();
        if channel_llrs.len() != n {
            return Err(DecoderError::LengthMismatch {
                got: channel_llrs.len(),
                expected: n,
            });
        }
        let clip = self.config.llr_clip;
        let u_ch = channel_llrs.values();
        let num_edges = self.var_edge_start[n];

        // var_to_check[e] and check_to_var[e] in the variable-major edge
        // order.
        let mut var_to_check = vec![0.0f64; num_edges];
        let mut check_to_var = vec![0.0f64; num_edges];
        for j in 0..n {
            for e in self.var_edge_start[j]..self.var_edge_start[j + 1] {
                var_to_check[e] = u_ch[j];
            }
        }

        let mut bits = vec![0u8; n];
        let mut totals = vec![0.0f64; n];
        let max_degree = self.check_edges.iter().map(Vec::len).max().unwrap_or(0);
        let mut gather = vec![0.0f64; max_degree];
        let mut replies = vec![0.0f64; max_degree];
        let mut scratch = vec![0.0f64; max_degree];

        let mut iterations_used = self.config.max_iterations;
        let mut success = false;

        for iteration in 1..=self.config.max_iterations {
            // Horizontal step.
            for (ci, edges) in self.check_edges.iter().enumerate() {
                let d = edges.len();
                for (slot, &e) in edges.iter().enumerate() {
                    gather[slot] = var_to_check[e];
                }
                match &self.scaling {
                    IterationScaling::Spa => {
                        check_update_spa_into(&gather[..d], &mut replies[..d], &mut scratch[..d]);
                    }
                    IterationScaling::Alpha(alphas) => {
                        check_update_minsum_into(
                            &gather[..d],
                            alphas[iteration - 1],
                            &mut replies[..d],
                        );
                    }
                    IterationScaling::TwoDim => {
                        check_update_minsum_into(
                            &gather[..d],
                            self.check_factor[ci],
                            &mut replies[..d],
                        );
                    }
                }
                for (slot, &e) in edges.iter().enumerate() {
                    check_to_var[e] = replies[slot].clamp(-clip, clip);
                }
            }

            // Vertical step and decisions.
            for j in 0..n {
                let start = self.var_edge_start[j];
                let end = self.var_edge_start[j + 1];
                let beta = match &self.scaling {
                    IterationScaling::TwoDim => self.var_factor[j],
                    _ => 1.0,
                };
                let sum: f64 = check_to_var[start..end].iter().sum();
                let total = u_ch[j] + beta * sum;
                totals[j] = total;
                for e in start..end {
                    var_to_check[e] =
                        (u_ch[j] + beta * (sum - check_to_var[e])).clamp(-clip, clip);
                }
                bits[j] = (total < 0.0) as u8;
            }

            if let Some(trace) = trace.as_deref_mut() {
                trace.push(bits.clone());
            }
            if self.h.is_codeword(&bits) {
                success = true;
                iterations_used = iteration;
                break;
            }
        }

        Ok(DecodeResult {
            bits,
            success,
            iterations_used,
            final_llrs: LlrWord::new(totals).expect("decision LLRs are finite"),
        })
    }
}
