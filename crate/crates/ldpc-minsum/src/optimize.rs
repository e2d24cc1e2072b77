//! Nelder-Mead minimization of the density-evolution threshold over the
//! GSVS parameters `(alpha0, S)`, with snapping of `alpha0` to the
//! hardware-friendly grid of factors whose complement is `2^-i` or
//! `2^-j + 2^-k`.
//!
//! The step size `S` is treated as continuous inside the simplex and
//! rounded to an integer by the cost function; a final sweep over the
//! snapped point's grid neighbors removes the rounding bias.

use std::collections::HashMap;

use crate::code::DegreeDistributions;
use crate::channel::Modulation;
use crate::de::{threshold_search, DeError, ThresholdOptions, ThresholdResult};
use crate::decoder::ScalingSchedule;

/// Optimization domain: `alpha0` within `[0.5, 0.99]`, `S` within
/// `[1, max_iterations]`. Out-of-range vertices are projected back.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Domain {
    pub alpha0: (f64, f64),
    pub step: (f64, f64),
}

impl Domain {
    pub fn for_max_iterations(max_iter: usize) -> Self {
        Self {
            alpha0: (0.5, 0.99),
            step: (1.0, max_iter as f64),
        }
    }

    fn clamp(&self, p: [f64; 2]) -> [f64; 2] {
        [
            p[0].clamp(self.alpha0.0, self.alpha0.1),
            p[1].clamp(self.step.0, self.step.1),
        ]
    }
}

/// Admissible initial scaling factors: `1 - alpha0` must be `2^-i` or
/// `2^-j + 2^-k` with exponents up to 6, so the scaling multiplier reduces
/// to one or two shifts.
#[derive(Debug, Clone, PartialEq)]
pub struct HardwareGrid {
    values: Vec<f64>,
}

impl HardwareGrid {
    pub fn new() -> Self {
        let mut values = Vec::new();
        for i in 1..=6u32 {
            values.push(1.0 - 2f64.powi(-(i as i32)));
        }
        for j in 1..=6u32 {
            for k in j..=6u32 {
                let complement = 2f64.powi(-(j as i32)) + 2f64.powi(-(k as i32));
                if complement < 1.0 {
                    values.push(1.0 - complement);
                }
            }
        }
        values.sort_by(|a, b| a.partial_cmp(b).unwrap());
        values.dedup();
        Self { values }
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    /// Grid values inside a closed interval.
    pub fn values_in(&self, lo: f64, hi: f64) -> Vec<f64> {
        self.values
            .iter()
            .copied()
            .filter(|&v| v >= lo - 1e-12 && v <= hi + 1e-12)
            .collect()
    }

    /// Nearest admissible value; ties resolve toward the larger factor.
    pub fn snap(&self, alpha0: f64) -> f64 {
        let mut best = self.values[0];
        let mut best_dist = (alpha0 - best).abs();
        for &v in &self.values[1..] {
            let dist = (alpha0 - v).abs();
            if dist < best_dist || (dist == best_dist && v > best) {
                best = v;
                best_dist = dist;
            }
        }
        best
    }

    /// Neighboring grid values of `value` (the value itself plus the next
    /// one down and up, where they exist).
    fn neighbors(&self, value: f64) -> Vec<f64> {
        let idx = self
            .values
            .iter()
            .position(|&v| (v - value).abs() < 1e-12)
            .unwrap_or_else(|| {
                self.values
                    .iter()
                    .position(|&v| (v - self.snap(value)).abs() < 1e-12)
                    .unwrap()
            });
        let mut out = Vec::with_capacity(3);
        if idx > 0 {
            out.push(self.values[idx - 1]);
        }
        out.push(self.values[idx]);
        if idx + 1 < self.values.len() {
            out.push(self.values[idx + 1]);
        }
        out
    }
}

impl Default for HardwareGrid {
    fn default() -> Self {
        Self::new()
    }
}

/// Nearest hardware-grid scaling factor; ties go to the larger value.
pub fn snap_alpha0(alpha0: f64) -> f64 {
    HardwareGrid::new().snap(alpha0)
}

/// Nelder-Mead settings. `diameter_tol` stops when the simplex has shrunk
/// in parameter space; `spread_tol` when the vertex costs agree to within
/// the stated dB.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NelderMeadOptions {
    pub diameter_tol: f64,
    pub spread_tol: f64,
    pub max_evals: usize,
}

impl Default for NelderMeadOptions {
    fn default() -> Self {
        Self {
            diameter_tol: 1e-3,
            spread_tol: 0.005,
            max_evals: 200,
        }
    }
}

/// Default starting simplex for the `(alpha0, S)` search.
pub fn default_simplex() -> [[f64; 2]; 3] {
    [[0.6, 5.0], [0.8, 5.0], [0.7, 15.0]]
}

#[derive(Debug, Clone, PartialEq)]
pub struct NelderMeadResult {
    pub point: [f64; 2],
    pub cost: f64,
    pub evaluations: usize,
    pub iterations: usize,
}

/// Standard Nelder-Mead over the clamped 2D domain with coefficients
/// (reflection 1, expansion 2, contraction 0.5, shrink 0.5). Non-finite
/// costs are treated as +inf so the search continues around them. The best
/// vertex cost never increases.
pub fn nelder_mead<F>(
    mut cost: F,
    initial: [[f64; 2]; 3],
    domain: &Domain,
    opts: &NelderMeadOptions,
) -> NelderMeadResult
where
    F: FnMut([f64; 2]) -> f64,
{
    let sanitize = |c: f64| if c.is_finite() { c } else { f64::INFINITY };
    let mut evals = 0usize;
    let mut eval = |p: [f64; 2], evals: &mut usize| -> f64 {
        *evals += 1;
        sanitize(cost(p))
    };

    let mut simplex: Vec<([f64; 2], f64)> = initial
        .iter()
        .map(|&p| {
            let p = domain.clamp(p);
            let c = eval(p, &mut evals);
            (p, c)
        })
        .collect();

    let mut iterations = 0usize;
    loop {
        simplex.sort_by(|a, b| a.1.partial_cmp(&b.1).unwrap());
        let best = simplex[0];
        let worst = simplex[2];

        let diameter = simplex
            .iter()
            .flat_map(|a| simplex.iter().map(move |b| dist(a.0, b.0)))
            .fold(0.0f64, f64::max);
        let spread = worst.1 - best.1;
        if diameter < opts.diameter_tol
            || (spread.is_finite() && spread < opts.spread_tol)
            || evals >= opts.max_evals
        {
            return NelderMeadResult {
                point: best.0,
                cost: best.1,
                evaluations: evals,
                iterations,
            };
        }
        iterations += 1;

        let centroid = [
            0.5 * (simplex[0].0[0] + simplex[1].0[0]),
            0.5 * (simplex[0].0[1] + simplex[1].0[1]),
        ];
        let reflect = domain.clamp([
            centroid[0] + (centroid[0] - worst.0[0]),
            centroid[1] + (centroid[1] - worst.0[1]),
        ]);
        let reflect_cost = eval(reflect, &mut evals);

        if reflect_cost < best.1 {
            // Expansion.
            let expand = domain.clamp([
                centroid[0] + 2.0 * (reflect[0] - centroid[0]),
                centroid[1] + 2.0 * (reflect[1] - centroid[1]),
            ]);
            let expand_cost = eval(expand, &mut evals);
            simplex[2] = if expand_cost < reflect_cost {
                (expand, expand_cost)
            } else {
                (reflect, reflect_cost)
            };
        } else if reflect_cost < simplex[1].1 {
            simplex[2] = (reflect, reflect_cost);
        } else {
            // Contraction, outside or inside of the worst vertex.
            let (contract, base_cost) = if reflect_cost < worst.1 {
                (
                    domain.clamp([
                        centroid[0] + 0.5 * (reflect[0] - centroid[0]),
                        centroid[1] + 0.5 * (reflect[1] - centroid[1]),
                    ]),
                    reflect_cost,
                )
            } else {
                (
                    domain.clamp([
                        centroid[0] - 0.5 * (centroid[0] - worst.0[0]),
                        centroid[1] - 0.5 * (centroid[1] - worst.0[1]),
                    ]),
                    worst.1,
                )
            };
            let contract_cost = eval(contract, &mut evals);
            if contract_cost < base_cost {
                simplex[2] = (contract, contract_cost);
            } else {
                // Shrink toward the best vertex.
                for vertex in simplex.iter_mut().skip(1) {
                    let p = domain.clamp([
                        best.0[0] + 0.5 * (vertex.0[0] - best.0[0]),
                        best.0[1] + 0.5 * (vertex.0[1] - best.0[1]),
                    ]);
                    let c = eval(p, &mut evals);
                    *vertex = (p, c);
                }
            }
        }
    }
}

fn dist(a: [f64; 2], b: [f64; 2]) -> f64 {
    ((a[0] - b[0]).powi(2) + (a[1] - b[1]).powi(2)).sqrt()
}

/// One threshold evaluation in the log.
#[derive(Debug, Clone, PartialEq)]
pub struct CostEvaluation {
    pub alpha0: f64,
    pub step: usize,
    pub ebn0_min_db: f64,
}

/// Result of [`optimize_schedule`]: the snapped optimum, its threshold, and
/// every distinct DE evaluation performed.
#[derive(Debug, Clone)]
pub struct OptimizedSchedule {
    pub alpha0: f64,
    pub step: usize,
    pub threshold: ThresholdResult,
    pub evaluations: Vec<CostEvaluation>,
    pub nm_evaluations: usize,
}

impl OptimizedSchedule {
    pub fn schedule(&self) -> ScalingSchedule {
        ScalingSchedule::Gsvs {
            alpha0: self.alpha0,
            step: self.step,
        }
    }
}

/// Threshold cost with memoization. Keys are `alpha0` rounded to 1e-4 and
/// the effective step `min(S, max_iter)` (larger steps cannot change the
/// first `max_iter` factors).
pub struct ThresholdCost<'a> {
    dists: &'a DegreeDistributions,
    modulation: Modulation,
    rate: f64,
    opts: ThresholdOptions,
    cache: HashMap<(u64, usize), Option<(f64, ThresholdResult)>>,
    log: Vec<CostEvaluation>,
}

impl<'a> ThresholdCost<'a> {
    pub fn new(
        dists: &'a DegreeDistributions,
        modulation: Modulation,
        rate: f64,
        opts: ThresholdOptions,
    ) -> Self {
        Self {
            dists,
            modulation,
            rate,
            opts,
            cache: HashMap::new(),
            log: Vec::new(),
        }
    }

    fn effective_step(&self, step: usize) -> usize {
        step.clamp(1, self.opts.max_iter)
    }

    /// Threshold of `GSVS(alpha0, step)`, or +inf when the search fails.
    pub fn cost(&mut self, alpha0: f64, step: usize) -> f64 {
        self.lookup(alpha0, step)
            .map(|(c, _)| c)
            .unwrap_or(f64::INFINITY)
    }

    pub fn result_for(&mut self, alpha0: f64, step: usize) -> Option<ThresholdResult> {
        self.lookup(alpha0, step).map(|(_, r)| r)
    }

    fn lookup(&mut self, alpha0: f64, step: usize) -> Option<(f64, ThresholdResult)> {
        let eff = self.effective_step(step);
        let key = ((alpha0 * 1e4).round() as u64, eff);
        if let Some(entry) = self.cache.get(&key) {
            return entry.clone();
        }
        let schedule = ScalingSchedule::Gsvs { alpha0, step: eff };
        let outcome = threshold_search(self.dists, self.modulation, self.rate, &schedule, &self.opts)
            .ok()
            .map(|r| (r.ebn0_min_db, r));
        if let Some((c, _)) = &outcome {
            self.log.push(CostEvaluation {
                alpha0,
                step: eff,
                ebn0_min_db: *c,
            });
        }
        self.cache.insert(key, outcome.clone());
        outcome
    }

    pub fn log(&self) -> &[CostEvaluation] {
        &self.log
    }
}

/// Jointly optimizes `(alpha0, S)` for the GSVS schedule on an ensemble:
/// Nelder-Mead over the continuous domain, snap to the hardware grid and
/// integer steps, then sweep the snapped point's neighbors and keep the
/// best.
pub fn optimize_schedule(
    dists: &DegreeDistributions,
    modulation: Modulation,
    rate: f64,
    opts: &ThresholdOptions,
    nm_opts: &NelderMeadOptions,
) -> Result<OptimizedSchedule, DeError> {
    let mut evaluator = ThresholdCost::new(dists, modulation, rate, *opts);
    let domain = Domain::for_max_iterations(opts.max_iter);
    let grid = HardwareGrid::new();

    let nm = nelder_mead(
        |p| evaluator.cost(p[0], p[1].round().max(1.0) as usize),
        default_simplex(),
        &domain,
        nm_opts,
    );

    let snapped_alpha = grid.snap(nm.point[0]);
    let snapped_step = (nm.point[1].round() as usize).clamp(1, opts.max_iter);

    let mut candidates = Vec::new();
    for &a in &grid.neighbors(snapped_alpha) {
        if a < domain.alpha0.0 - 1e-12 || a > domain.alpha0.1 + 1e-12 {
            continue;
        }
        for s in [snapped_step.saturating_sub(1), snapped_step, snapped_step + 1] {
            let s = s.clamp(1, opts.max_iter);
            candidates.push((a, s));
        }
    }
    candidates.sort_by(|x, y| x.partial_cmp(y).unwrap());
    candidates.dedup();

    let mut best: Option<(f64, f64, usize)> = None;
    for (a, s) in candidates {
        let c = evaluator.cost(a, s);
        let better = match &best {
            None => c.is_finite(),
            Some((bc, _, _)) => c < *bc,
        };
        if better {
            best = Some((c, a, s));
        }
    }
    let (_, alpha0, step) = best.ok_or(DeError::BracketNotFound {
        lo: opts.search_window_db.0,
        hi: opts.search_window_db.1,
    })?;
    let threshold = evaluator
        .result_for(alpha0, step)
        .expect("best candidate has a threshold");

    Ok(OptimizedSchedule {
        alpha0,
        step,
        threshold,
        evaluations: evaluator.log.clone(),
        nm_evaluations: nm.evaluations,
    })
}
