//! Discretized density evolution for min-sum based decoders.
//!
//! The state is the PMF of a message LLR on a fixed symmetric grid. One
//! iteration maps the edge-averaged variable-to-check PMF through the
//! scaled min-sum check transform (averaged over the check edge-degree
//! distribution), then convolves the channel PMF with copies of the result
//! (averaged over the variable edge-degree distribution). The per-iteration
//! bit error rate is read off the node-perspective decision PMF, and the
//! threshold search bisects Eb/N0 on "reaches the target BER within the
//! iteration budget".
//!
//! BPSK initializes from the all-zero-codeword channel LLR distribution,
//! a Gaussian with mean `2/sigma^2` and variance `4/sigma^2`. For QAM the
//! all-zero assumption is invalid; instead the PMF of `U * (1 - 2V)` (the
//! LLR of receiving the transmitted bit) is accumulated by deterministic
//! quadrature over every PAM level and bit position of one axis, then
//! renormalized.

mod pmf;

pub use pmf::{check_pmf, convolve_saturating, pairwise_min_combine, var_pmf, Grid, QuantizedPmf};

use thiserror::Error;

use crate::channel::{self, ebn0_to_sigma, Modulation};
use crate::code::DegreeDistributions;
use crate::decoder::ScalingSchedule;

#[derive(Debug, Error)]
pub enum DeError {
    #[error("pmf grids differ")]
    GridMismatch,
    #[error("degree {0} is outside the supported range")]
    BadDegree(usize),
    #[error("schedule has no per-iteration factor usable in density evolution")]
    UnsupportedSchedule,
    #[error("target BER must lie in (0, 0.5), got {0}")]
    BadTarget(f64),
    #[error("no threshold bracket inside [{lo}, {hi}] dB")]
    BracketNotFound { lo: f64, hi: f64 },
    #[error(transparent)]
    Channel(#[from] channel::ChannelError),
}

/// Channel-LLR PMF for BPSK over AWGN at the given operating point: the
/// all-zero codeword gives `U ~ N(2/sigma^2, 4/sigma^2)`.
pub fn init_pmf_bpsk(ebn0_db: f64, rate: f64, grid: Grid) -> Result<QuantizedPmf, DeError> {
    let sigma = ebn0_to_sigma(ebn0_db, rate, 1)?;
    let s2 = sigma * sigma;
    Ok(QuantizedPmf::from_gaussian(grid, 2.0 / s2, 2.0 / sigma))
}

/// Channel-LLR PMF for Gray square M-QAM: the averaged distribution of
/// `U * (1 - 2V)` over the bit positions and PAM levels of one axis,
/// accumulated by quadrature over the received value.
pub fn init_pmf_qam(
    ebn0_db: f64,
    rate: f64,
    order: usize,
    grid: Grid,
) -> Result<QuantizedPmf, DeError> {
    let modulation = Modulation::Qam(order);
    let bits_per_symbol = match order {
        4 | 16 | 64 | 256 => modulation.bits_per_symbol(),
        _ => return Err(channel::ChannelError::UnsupportedOrder(order).into()),
    };
    let sigma = ebn0_to_sigma(ebn0_db, rate, bits_per_symbol)?;
    let axis_bits = bits_per_symbol / 2;
    let levels = channel::axis_levels(&modulation);
    let span = levels[levels.len() - 1] - levels[0];

    // Step size keeps the LLR change per quadrature step below half a grid
    // bin (the LLR slope is bounded by span/sigma^2), with a floor on the
    // point count blowup at very small noise where the LLRs saturate
    // anyway.
    let reach = 8.5 * sigma;
    let h = (grid.step() * sigma * sigma / (2.0 * span))
        .min(sigma / 8.0)
        .max(2.0 * reach / 200_000.0);
    let steps = (2.0 * reach / h).ceil() as usize;
    let norm = 1.0 / ((2.0 * std::f64::consts::PI).sqrt() * sigma);

    let mut pmf = QuantizedPmf::zero(grid);
    let mut llrs = vec![0.0; axis_bits];
    for (idx, &level) in levels.iter().enumerate() {
        let label = channel::gray_label(idx, axis_bits);
        for k in 0..steps {
            let r = level - reach + (k as f64 + 0.5) * h;
            let d = (r - level) / sigma;
            let weight = norm * (-0.5 * d * d).exp() * h;
            channel::pam_bit_llrs(r, &levels, axis_bits, sigma, &mut llrs);
            for (z, &llr) in llrs.iter().enumerate() {
                let bit = label >> (axis_bits - 1 - z) & 1;
                let aligned = if bit == 0 { llr } else { -llr };
                pmf.deposit(aligned, weight);
            }
        }
    }
    pmf.normalize();
    Ok(pmf)
}

/// Channel-LLR PMF for any supported modulation.
pub fn channel_llr_pmf(
    modulation: Modulation,
    ebn0_db: f64,
    rate: f64,
    grid: Grid,
) -> Result<QuantizedPmf, DeError> {
    match modulation {
        Modulation::Bpsk => init_pmf_bpsk(ebn0_db, rate, grid),
        Modulation::Qam(order) => init_pmf_qam(ebn0_db, rate, order, grid),
    }
}

fn de_alpha(schedule: &ScalingSchedule, iteration: usize) -> Result<f64, DeError> {
    match schedule {
        ScalingSchedule::None => Ok(1.0),
        ScalingSchedule::TwoDim { .. } => Err(DeError::UnsupportedSchedule),
        other => other.alpha(iteration).map_err(|_| DeError::UnsupportedSchedule),
    }
}

/// Runs density evolution and returns the BER trajectory: entry 0 is the
/// channel-only error probability, entry `i` the BER after iteration `i`.
pub fn de_ber(
    dists: &DegreeDistributions,
    channel_pmf: &QuantizedPmf,
    schedule: &ScalingSchedule,
    max_iter: usize,
) -> Result<Vec<f64>, DeError> {
    de_ber_with_stop(dists, channel_pmf, schedule, max_iter, None)
}

/// As [`de_ber`], but stops early once the BER drops to `stop_below`.
pub fn de_ber_with_stop(
    dists: &DegreeDistributions,
    channel_pmf: &QuantizedPmf,
    schedule: &ScalingSchedule,
    max_iter: usize,
    stop_below: Option<f64>,
) -> Result<Vec<f64>, DeError> {
    let grid = channel_pmf.grid();
    let max_dv = *dists.var_node.keys().max().ok_or(DeError::BadDegree(0))?;
    let mut trajectory = Vec::with_capacity(max_iter + 1);
    trajectory.push(channel_pmf.error_probability());

    let mut v_pmf = channel_pmf.clone();
    for iteration in 1..=max_iter {
        let alpha = de_alpha(schedule, iteration)?;

        // Edge-averaged check output.
        let mut u_pmf = QuantizedPmf::zero(grid);
        for (&dc, &fraction) in &dists.check_edge {
            u_pmf.accumulate_scaled(&check_pmf(&v_pmf, dc, alpha)?, fraction);
        }
        u_pmf.normalize();

        // Convolution powers channel * u^k, shared between the edge- and
        // node-perspective averages.
        let mut power = channel_pmf.clone();
        let mut next_v = QuantizedPmf::zero(grid);
        let mut decision = QuantizedPmf::zero(grid);
        for k in 0..=max_dv {
            if let Some(&fraction) = dists.var_edge.get(&(k + 1)) {
                next_v.accumulate_scaled(&power, fraction);
            }
            if let Some(&fraction) = dists.var_node.get(&k) {
                decision.accumulate_scaled(&power, fraction);
            }
            if k < max_dv {
                power = convolve_saturating(&power, &u_pmf)?;
            }
        }
        next_v.normalize();
        decision.normalize();
        v_pmf = next_v;

        let ber = decision.error_probability();
        debug_assert!((-1e-12..=0.5 + 1e-9).contains(&ber));
        trajectory.push(ber);
        if stop_below.is_some_and(|t| ber <= t) {
            break;
        }
    }
    Ok(trajectory)
}

/// Knobs of the threshold search; the defaults mirror the decoder's
/// iteration budget.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ThresholdOptions {
    pub target_ber: f64,
    pub max_iter: usize,
    pub grid: Grid,
    /// Final bracket width in dB.
    pub resolution_db: f64,
    pub search_window_db: (f64, f64),
    pub initial_guess_db: f64,
}

impl Default for ThresholdOptions {
    fn default() -> Self {
        Self {
            target_ber: 1e-6,
            max_iter: 40,
            grid: Grid::default(),
            resolution_db: 0.01,
            search_window_db: (-2.0, 20.0),
            initial_guess_db: 2.0,
        }
    }
}

/// Result of a threshold search: density evolution at `ebn0_min_db` reaches
/// the target BER within the iteration budget, and fails to at
/// `ebn0_min_db - resolution`.
#[derive(Debug, Clone, PartialEq)]
pub struct ThresholdResult {
    pub ebn0_min_db: f64,
    /// Trajectory at the returned threshold.
    pub ber_trajectory: Vec<f64>,
    /// Iteration at which the trajectory first met the target.
    pub converged_iteration: usize,
    /// Final failing/succeeding bracket.
    pub search_bracket: (f64, f64),
}

/// Minimum Eb/N0 at which density evolution reaches the target BER within
/// the iteration budget: outward doubling to bracket, then bisection to
/// the requested resolution. The success predicate is monotone in Eb/N0
/// (more noise can only slow convergence), which the bracketing relies on.
pub fn threshold_search(
    dists: &DegreeDistributions,
    modulation: Modulation,
    rate: f64,
    schedule: &ScalingSchedule,
    opts: &ThresholdOptions,
) -> Result<ThresholdResult, DeError> {
    if !(opts.target_ber > 0.0 && opts.target_ber < 0.5) {
        return Err(DeError::BadTarget(opts.target_ber));
    }
    let (window_lo, window_hi) = opts.search_window_db;
    let evaluate = |e: f64| -> Result<Option<(usize, Vec<f64>)>, DeError> {
        let pmf = channel_llr_pmf(modulation, e, rate, opts.grid)?;
        let traj = de_ber_with_stop(dists, &pmf, schedule, opts.max_iter, Some(opts.target_ber))?;
        Ok(traj
            .iter()
            .position(|&b| b <= opts.target_ber)
            .map(|i| (i, traj)))
    };

    let mut lo; // highest Eb/N0 known to fail
    let mut hi; // lowest Eb/N0 known to succeed
    let mut best;
    let not_found = DeError::BracketNotFound {
        lo: window_lo,
        hi: window_hi,
    };
    let guess = opts.initial_guess_db.clamp(window_lo, window_hi);
    match evaluate(guess)? {
        Some(hit) => {
            hi = guess;
            best = hit;
            let mut step = 0.25;
            loop {
                let cand = (hi - step).max(window_lo);
                match evaluate(cand)? {
                    Some(hit) => {
                        hi = cand;
                        best = hit;
                        if cand <= window_lo {
                            return Err(not_found);
                        }
                    }
                    None => {
                        lo = cand;
                        break;
                    }
                }
                step *= 2.0;
            }
        }
        None => {
            lo = guess;
            let mut step = 0.25;
            loop {
                let cand = (lo + step).min(window_hi);
                match evaluate(cand)? {
                    Some(hit) => {
                        hi = cand;
                        best = hit;
                        break;
                    }
                    None => {
                        lo = cand;
                        if cand >= window_hi {
                            return Err(not_found);
                        }
                    }
                }
                step *= 2.0;
            }
        }
    }

    while hi - lo > opts.resolution_db {
        let mid = 0.5 * (lo + hi);
        match evaluate(mid)? {
            Some(hit) => {
                hi = mid;
                best = hit;
            }
            None => lo = mid,
        }
    }

    let (converged_iteration, ber_trajectory) = best;
    Ok(ThresholdResult {
        ebn0_min_db: hi,
        ber_trajectory,
        converged_iteration,
        search_bracket: (lo, hi),
    })
}
