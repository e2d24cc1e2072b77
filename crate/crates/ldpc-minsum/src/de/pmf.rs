//! Probability mass functions on a fixed symmetric LLR grid, plus the
//! min-sum message transforms: sign/min combination for check nodes and
//! saturating convolution for variable nodes.

use super::DeError;

/// Symmetric uniform grid over `[-l_max, +l_max]` with spacing `step`.
/// `half_bins * step = l_max`, so there are `2 * half_bins + 1` grid points
/// including zero.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Grid {
    step: f64,
    half_bins: usize,
}

impl Grid {
    pub fn new(l_max: f64, step: f64) -> Self {
        assert!(l_max > 0.0 && step > 0.0 && l_max >= step);
        let half_bins = (l_max / step).round() as usize;
        Self { step, half_bins }
    }

    pub fn step(&self) -> f64 {
        self.step
    }

    pub fn l_max(&self) -> f64 {
        self.half_bins as f64 * self.step
    }

    pub fn bins(&self) -> usize {
        2 * self.half_bins + 1
    }

    pub fn center(&self) -> usize {
        self.half_bins
    }

    pub fn value(&self, index: usize) -> f64 {
        (index as f64 - self.half_bins as f64) * self.step
    }
}

impl Default for Grid {
    /// The working default: `l_max = 25`, `step = 0.05`, i.e. 1001 bins.
    fn default() -> Self {
        Grid::new(crate::LLR_MAX, 0.05)
    }
}

/// Probability mass function of a message LLR on a [`Grid`]. All operations
/// that produce a `QuantizedPmf` check that raw probability mass is
/// conserved to 1e-9 and then renormalize exactly.
#[derive(Debug, Clone, PartialEq)]
pub struct QuantizedPmf {
    grid: Grid,
    mass: Vec<f64>,
}

pub(crate) const MASS_TOLERANCE: f64 = 1e-9;

impl QuantizedPmf {
    pub fn zero(grid: Grid) -> Self {
        Self {
            grid,
            mass: vec![0.0; grid.bins()],
        }
    }

    /// Unit mass at `value`, split over the two nearest grid points.
    pub fn point_mass(grid: Grid, value: f64) -> Self {
        let mut pmf = Self::zero(grid);
        pmf.deposit(value, 1.0);
        pmf
    }

    /// Gaussian with the given moments, integrated bin by bin; tail mass
    /// folds into the end bins.
    pub fn from_gaussian(grid: Grid, mean: f64, std: f64) -> Self {
        assert!(std > 0.0);
        let phi = |x: f64| 0.5 * libm::erfc(-(x - mean) / (std * std::f64::consts::SQRT_2));
        let half = grid.step * 0.5;
        let bins = grid.bins();
        let mut mass = vec![0.0; bins];
        let mut below = 0.0; // CDF at the lower edge of the current bin
        for (i, m) in mass.iter_mut().enumerate() {
            let upper = if i + 1 == bins {
                1.0
            } else {
                phi(grid.value(i) + half)
            };
            *m = (upper - below).max(0.0);
            below = upper;
        }
        let mut pmf = Self { grid, mass };
        pmf.normalize();
        pmf
    }

    pub fn grid(&self) -> Grid {
        self.grid
    }

    pub fn mass(&self) -> &[f64] {
        &self.mass
    }

    pub fn total_mass(&self) -> f64 {
        self.mass.iter().sum()
    }

    pub fn mean(&self) -> f64 {
        self.mass
            .iter()
            .enumerate()
            .map(|(i, &m)| m * self.grid.value(i))
            .sum()
    }

    pub fn variance(&self) -> f64 {
        let mean = self.mean();
        self.mass
            .iter()
            .enumerate()
            .map(|(i, &m)| {
                let d = self.grid.value(i) - mean;
                m * d * d
            })
            .sum()
    }

    pub fn mean_abs(&self) -> f64 {
        self.mass
            .iter()
            .enumerate()
            .map(|(i, &m)| m * self.grid.value(i).abs())
            .sum()
    }

    /// Probability of a wrong hard decision: mass below zero plus half the
    /// zero bin.
    pub fn error_probability(&self) -> f64 {
        let c = self.grid.center();
        self.mass[..c].iter().sum::<f64>() + 0.5 * self.mass[c]
    }

    /// Half the L1 distance between two distributions on the same grid.
    pub fn total_variation(&self, other: &QuantizedPmf) -> Result<f64, DeError> {
        check_grids(self, other)?;
        Ok(self
            .mass
            .iter()
            .zip(&other.mass)
            .map(|(a, b)| (a - b).abs())
            .sum::<f64>()
            * 0.5)
    }

    /// Adds `weight` of probability mass at `value`, clamping to the grid
    /// range and splitting between the two neighboring grid points.
    pub fn deposit(&mut self, value: f64, weight: f64) {
        let bins = self.grid.bins();
        let pos = value.clamp(-self.grid.l_max(), self.grid.l_max()) / self.grid.step
            + self.grid.half_bins as f64;
        let lo = pos.floor();
        let frac = pos - lo;
        let lo = (lo as usize).min(bins - 1);
        self.mass[lo] += weight * (1.0 - frac);
        if frac > 0.0 && lo + 1 < bins {
            self.mass[lo + 1] += weight * frac;
        }
    }

    /// Rescales the mass to total exactly 1.
    pub fn normalize(&mut self) {
        let sum = self.total_mass();
        assert!(sum > 0.0, "cannot normalize an empty pmf");
        for m in &mut self.mass {
            *m /= sum;
        }
    }

    /// Flips the distribution around zero.
    pub fn mirrored(&self) -> Self {
        let mut mass = self.mass.clone();
        mass.reverse();
        Self {
            grid: self.grid,
            mass,
        }
    }

    pub(crate) fn accumulate_scaled(&mut self, other: &QuantizedPmf, weight: f64) {
        debug_assert_eq!(self.grid, other.grid);
        for (a, b) in self.mass.iter_mut().zip(&other.mass) {
            *a += weight * b;
        }
    }

    fn finish(mut self, raw_expected: f64) -> Self {
        let sum = self.total_mass();
        assert!(
            (sum - raw_expected).abs() <= MASS_TOLERANCE,
            "pmf operation lost probability mass: {sum} vs {raw_expected}"
        );
        self.normalize();
        self
    }
}

fn check_grids(a: &QuantizedPmf, b: &QuantizedPmf) -> Result<(), DeError> {
    if a.grid != b.grid {
        return Err(DeError::GridMismatch);
    }
    Ok(())
}

/// Distribution of `Z = sign(X) * sign(Y) * min(|X|, |Y|)` for independent
/// `X ~ p`, `Y ~ q`. Zero counts as positive sign with magnitude zero.
///
/// Runs in O(bins) using strict complementary magnitude tails per sign: for
/// each magnitude `a`, the pairs with `min = a` split into "one variable at
/// `±a`, the other strictly larger in magnitude" plus "both at magnitude
/// `a`".
pub fn pairwise_min_combine(p: &QuantizedPmf, q: &QuantizedPmf) -> Result<QuantizedPmf, DeError> {
    check_grids(p, q)?;
    let grid = p.grid;
    let c = grid.center();
    let half = grid.half_bins;

    // Positive/negative mass by magnitude a = 1..=half, plus strict tails.
    let split = |pmf: &QuantizedPmf| {
        let mut pos = vec![0.0; half + 1];
        let mut neg = vec![0.0; half + 1];
        for a in 1..=half {
            pos[a] = pmf.mass[c + a];
            neg[a] = pmf.mass[c - a];
        }
        let mut tail_pos = vec![0.0; half + 2];
        let mut tail_neg = vec![0.0; half + 2];
        for a in (1..=half).rev() {
            tail_pos[a] = tail_pos[a + 1] + pos[a];
            tail_neg[a] = tail_neg[a + 1] + neg[a];
        }
        (pos, neg, tail_pos, tail_neg)
    };
    let (pp, pn, tpp, tpn) = split(p);
    let (qp, qn, tqp, tqn) = split(q);
    let p0 = p.mass[c];
    let q0 = q.mass[c];

    let mut out = QuantizedPmf::zero(grid);
    out.mass[c] = p0 + q0 - p0 * q0;
    for a in 1..=half {
        out.mass[c + a] = pp[a] * tqp[a + 1]
            + qp[a] * tpp[a + 1]
            + pp[a] * qp[a]
            + pn[a] * tqn[a + 1]
            + qn[a] * tpn[a + 1]
            + pn[a] * qn[a];
        out.mass[c - a] = pp[a] * tqn[a + 1]
            + pn[a] * tqp[a + 1]
            + qp[a] * tpn[a + 1]
            + qn[a] * tpp[a + 1]
            + pp[a] * qn[a]
            + pn[a] * qp[a];
    }
    Ok(out.finish(p.total_mass() * q.total_mass()))
}

/// Density-evolution image of the scaled min-sum check update for degree
/// `dc`: fold [`pairwise_min_combine`] over the `dc - 1` incoming messages,
/// then shrink the support by `alpha` with mass-preserving two-bin
/// interpolation.
pub fn check_pmf(msg: &QuantizedPmf, dc: usize, alpha: f64) -> Result<QuantizedPmf, DeError> {
    if dc < 2 {
        return Err(DeError::BadDegree(dc));
    }
    let mut acc = msg.clone();
    for _ in 0..dc - 2 {
        acc = pairwise_min_combine(&acc, msg)?;
    }
    if alpha == 1.0 {
        return Ok(acc);
    }
    let grid = acc.grid;
    let mut scaled = QuantizedPmf::zero(grid);
    for (i, &m) in acc.mass.iter().enumerate() {
        if m != 0.0 {
            scaled.deposit(alpha * grid.value(i), m);
        }
    }
    Ok(scaled.finish(acc.total_mass()))
}

/// Density-evolution image of the variable update for degree `dv`: the
/// channel PMF convolved with `dv - 1` copies of the check-message PMF.
/// Out-of-range mass saturates into the end bins.
pub fn var_pmf(
    channel: &QuantizedPmf,
    check_msg: &QuantizedPmf,
    dv: usize,
) -> Result<QuantizedPmf, DeError> {
    if dv < 1 {
        return Err(DeError::BadDegree(dv));
    }
    let mut acc = channel.clone();
    for _ in 0..dv - 1 {
        acc = convolve_saturating(&acc, check_msg)?;
    }
    Ok(acc)
}

/// Discrete convolution of two PMFs with the sum clamped to the grid
/// range; overflow mass accumulates in the end bins.
pub fn convolve_saturating(a: &QuantizedPmf, b: &QuantizedPmf) -> Result<QuantizedPmf, DeError> {
    check_grids(a, b)?;
    let grid = a.grid;
    let bins = grid.bins();
    let c = grid.center();
    let mut out = QuantizedPmf::zero(grid);
    for (i, &ma) in a.mass.iter().enumerate() {
        if ma == 0.0 {
            continue;
        }
        for (j, &mb) in b.mass.iter().enumerate() {
            if mb == 0.0 {
                continue;
            }
            let k = (i + j).saturating_sub(c).min(bins - 1);
            out.mass[k] += ma * mb;
        }
    }
    Ok(out.finish(a.total_mass() * b.total_mass()))
}
