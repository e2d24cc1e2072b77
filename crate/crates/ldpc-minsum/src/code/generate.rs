//! Random test-code construction: a Gallager-style socket matching between
//! variable stubs and check slots, with deterministic repair of duplicate
//! edges.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use super::{CodeError, ParityCheckMatrix};

#[derive(Debug, Error)]
pub enum GenerateError {
    #[error("n*dv = {edges} is not divisible by dc = {dc}")]
    NotDivisible { edges: usize, dc: usize },
    #[error("degrees must satisfy dv >= 1 and dc >= 2 (got dv spec min {dv}, dc {dc})")]
    BadDegrees { dv: usize, dc: usize },
    #[error("could not remove duplicate edges within {0} repair sweeps")]
    RepairExhausted(usize),
    #[error("generated matrix is invalid: {0}")]
    Invalid(#[from] CodeError),
}

const MAX_REPAIR_SWEEPS: usize = 100;

/// Random `(dv, dc)`-regular code of length `n`. Requires `n*dv` divisible
/// by `dc`; the result then has `m = n*dv/dc` checks, every column of
/// degree `dv` and every row of degree `dc`. Deterministic for a fixed
/// seed.
pub fn generate_regular_code(
    n: usize,
    dv: usize,
    dc: usize,
    seed: u64,
) -> Result<ParityCheckMatrix, GenerateError> {
    let stubs: Vec<usize> = (0..n).flat_map(|j| std::iter::repeat_n(j, dv)).collect();
    build_from_stubs(stubs, dv, dc, seed)
}

/// Random check-regular code with a prescribed variable-degree profile.
/// `var_degree_counts` lists `(degree, how_many_columns)`; the total edge
/// count must be divisible by `dc`. Used to build irregular surrogates when
/// no standardized matrix is at hand.
pub fn generate_irregular_code(
    var_degree_counts: &[(usize, usize)],
    dc: usize,
    seed: u64,
) -> Result<ParityCheckMatrix, GenerateError> {
    let mut stubs = Vec::new();
    let mut var = 0usize;
    let mut min_dv = usize::MAX;
    for &(degree, count) in var_degree_counts {
        for _ in 0..count {
            stubs.extend(std::iter::repeat_n(var, degree));
            var += 1;
        }
        min_dv = min_dv.min(degree);
    }
    build_from_stubs(stubs, min_dv, dc, seed)
}

fn build_from_stubs(
    mut stubs: Vec<usize>,
    min_dv: usize,
    dc: usize,
    seed: u64,
) -> Result<ParityCheckMatrix, GenerateError> {
    if min_dv < 1 || dc < 2 {
        return Err(GenerateError::BadDegrees { dv: min_dv, dc });
    }
    let edges = stubs.len();
    if !edges.is_multiple_of(dc) {
        return Err(GenerateError::NotDivisible { edges, dc });
    }
    let m = edges / dc;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    stubs.shuffle(&mut rng);

    // Check c owns stub slots [c*dc, (c+1)*dc). Offending slots are
    // repaired by swapping with a random slot of another check, in bounded
    // deterministic sweeps. Duplicate variables within a check must be
    // eliminated; 4-cycles (two checks sharing a variable pair) are broken
    // best-effort, since girth 6 is infeasible for very small codes but
    // matters for waterfall measurements on large ones.
    let mut cleanup = Cleanup {
        stubs: &mut stubs,
        dc,
        m,
        rng: &mut rng,
    };
    if !cleanup.clear_duplicates() {
        return Err(GenerateError::RepairExhausted(MAX_REPAIR_SWEEPS));
    }
    let mut best_cycles = usize::MAX;
    let mut stalled = 0;
    for _ in 0..MAX_REPAIR_SWEEPS {
        let cycles = cleanup.break_cycles_sweep();
        if !cleanup.clear_duplicates() {
            return Err(GenerateError::RepairExhausted(MAX_REPAIR_SWEEPS));
        }
        if cycles == 0 {
            break;
        }
        if cycles >= best_cycles {
            stalled += 1;
            if stalled >= 3 {
                break; // girth 6 unreachable; keep the duplicate-free graph
            }
        } else {
            best_cycles = cycles;
            stalled = 0;
        }
    }

    let n = stubs.iter().copied().max().unwrap_or(0) + 1;
    let rows: Vec<Vec<usize>> = (0..m).map(|c| stubs[c * dc..(c + 1) * dc].to_vec()).collect();
    Ok(ParityCheckMatrix::from_rows(n, rows)?)
}

struct Cleanup<'a> {
    stubs: &'a mut [usize],
    dc: usize,
    m: usize,
    rng: &'a mut ChaCha8Rng,
}

impl Cleanup<'_> {
    /// Swaps `slot` (owned by `check`) with a random slot of another check.
    fn swap_out(&mut self, slot: usize, check: usize) {
        let edges = self.stubs.len();
        let other = self.rng.random_range(0..edges - self.dc);
        let other = if other >= check * self.dc {
            other + self.dc
        } else {
            other
        };
        self.stubs.swap(slot, other);
    }

    /// Repeated sweeps until no check contains a variable twice. Returns
    /// false if the sweep budget runs out.
    fn clear_duplicates(&mut self) -> bool {
        for _ in 0..MAX_REPAIR_SWEEPS {
            let mut duplicates = 0;
            for c in 0..self.m {
                let start = c * self.dc;
                for a in start..start + self.dc {
                    if (start..a).any(|b| self.stubs[b] == self.stubs[a]) {
                        duplicates += 1;
                        self.swap_out(a, c);
                    }
                }
            }
            if duplicates == 0 {
                return true;
            }
        }
        false
    }

    /// One sweep over all checks: each check participating in a 4-cycle
    /// (its variable pair already seen at an earlier check) gets one slot
    /// swapped out. Returns the number of cycles seen.
    fn break_cycles_sweep(&mut self) -> usize {
        let mut cycles = 0;
        let mut pair_seen: std::collections::HashMap<(usize, usize), usize> =
            std::collections::HashMap::with_capacity(self.m * self.dc * (self.dc - 1) / 2);
        for c in 0..self.m {
            let base = c * self.dc;
            let mut swap_slot = None;
            for i in 0..self.dc {
                for j in i + 1..self.dc {
                    let (a, b) = (self.stubs[base + i], self.stubs[base + j]);
                    let pair = if a < b { (a, b) } else { (b, a) };
                    if pair_seen.insert(pair, c).is_some_and(|first| first != c) {
                        cycles += 1;
                        swap_slot.get_or_insert(base + j);
                    }
                }
            }
            if let Some(slot) = swap_slot {
                self.swap_out(slot, c);
            }
        }
        cycles
    }
}
