//! Systematic GF(2) encoder built by Gaussian elimination with column
//! pivoting. Generic over any parity-check matrix; rank deficiency is
//! tolerated and simply enlarges the information set.

use super::{CodeError, ParityCheckMatrix};

/// Dense bit matrix, one `Vec<u64>` row of packed bits per row.
struct BitMatrix {
    words: usize,
    rows: Vec<Vec<u64>>,
}

impl BitMatrix {
    fn zero(m: usize, n: usize) -> Self {
        let words = n.div_ceil(64);
        Self {
            words,
            rows: vec![vec![0u64; words]; m],
        }
    }

    fn set(&mut self, r: usize, c: usize) {
        self.rows[r][c / 64] |= 1u64 << (c % 64);
    }

    fn get(&self, r: usize, c: usize) -> bool {
        self.rows[r][c / 64] >> (c % 64) & 1 == 1
    }

    fn xor_rows(&mut self, target: usize, source: usize) {
        let (lo, hi) = if target < source {
            let (a, b) = self.rows.split_at_mut(source);
            (&mut a[target], &b[0])
        } else {
            let (a, b) = self.rows.split_at_mut(target);
            (&mut b[0], &a[source])
        };
        for (t, s) in lo.iter_mut().zip(hi.iter()) {
            *t ^= *s;
        }
        let _ = self.words;
    }
}

/// Systematic encoder for a specific parity-check matrix.
///
/// `info_positions` and `parity_positions` partition the code's columns;
/// together they record the column permutation found by the elimination.
/// Each parity bit is an XOR combination of information bits, stored as one
/// packed bit row per parity position.
#[derive(Debug, Clone)]
pub struct Encoder {
    n: usize,
    info_positions: Vec<usize>,
    parity_positions: Vec<usize>,
    // combination[p] holds k bits: parity bit p = XOR of selected info bits.
    combination: Vec<Vec<u64>>,
}

impl Encoder {
    /// Effective information length `n - rank(H)`.
    pub fn k(&self) -> usize {
        self.info_positions.len()
    }

    /// Code length.
    pub fn n(&self) -> usize {
        self.n
    }

    /// Rank of the parity-check matrix.
    pub fn rank(&self) -> usize {
        self.parity_positions.len()
    }

    /// Effective code rate `k / n`.
    pub fn rate(&self) -> f64 {
        self.k() as f64 / self.n as f64
    }

    /// Columns carrying information bits, in the order `encode` consumes
    /// them.
    pub fn info_positions(&self) -> &[usize] {
        &self.info_positions
    }

    /// Columns carrying parity bits (the pivot columns).
    pub fn parity_positions(&self) -> &[usize] {
        &self.parity_positions
    }

    /// Maps `info` (length `k`) to a codeword with zero syndrome.
    pub fn encode(&self, info: &[u8]) -> Result<Vec<u8>, CodeError> {
        if info.len() != self.k() {
            return Err(CodeError::LengthMismatch {
                got: info.len(),
                expected: self.k(),
            });
        }
        let words = self.k().div_ceil(64).max(1);
        let mut packed = vec![0u64; words];
        for (idx, &b) in info.iter().enumerate() {
            if b & 1 == 1 {
                packed[idx / 64] |= 1u64 << (idx % 64);
            }
        }
        let mut bits = vec![0u8; self.n];
        for (idx, &pos) in self.info_positions.iter().enumerate() {
            bits[pos] = info[idx] & 1;
        }
        for (row, &pos) in self.combination.iter().zip(&self.parity_positions) {
            let acc = row
                .iter()
                .zip(&packed)
                .fold(0u64, |acc, (a, b)| acc ^ (a & b));
            bits[pos] = (acc.count_ones() & 1) as u8;
        }
        Ok(bits)
    }

    /// Recovers the information word from a codeword via the stored column
    /// permutation.
    pub fn extract_info(&self, bits: &[u8]) -> Result<Vec<u8>, CodeError> {
        if bits.len() != self.n {
            return Err(CodeError::LengthMismatch {
                got: bits.len(),
                expected: self.n,
            });
        }
        Ok(self.info_positions.iter().map(|&p| bits[p] & 1).collect())
    }
}

/// Reduces `H` to reduced row-echelon form and reads off the parity
/// combinations. Pivot columns become parity positions, the rest carry
/// information; redundant (dependent) rows only lower the rank.
pub fn build_encoder(h: &ParityCheckMatrix) -> Encoder {
    let (m, n) = (h.m(), h.n());
    let mut mat = BitMatrix::zero(m, n);
    for (i, row) in h.rows().iter().enumerate() {
        for &j in row {
            mat.set(i, j);
        }
    }

    let mut pivot_cols = Vec::new();
    let mut pivot_row_of_col = Vec::new();
    let mut next_row = 0usize;
    for col in 0..n {
        if next_row == m {
            break;
        }
        let Some(pr) = (next_row..m).find(|&r| mat.get(r, col)) else {
            continue;
        };
        mat.rows.swap(next_row, pr);
        for r in 0..m {
            if r != next_row && mat.get(r, col) {
                mat.xor_rows(r, next_row);
            }
        }
        pivot_cols.push(col);
        pivot_row_of_col.push(next_row);
        next_row += 1;
    }

    let is_pivot = {
        let mut mask = vec![false; n];
        for &c in &pivot_cols {
            mask[c] = true;
        }
        mask
    };
    let info_positions: Vec<usize> = (0..n).filter(|&c| !is_pivot[c]).collect();
    let k = info_positions.len();
    let kwords = k.div_ceil(64).max(1);

    // Row `r` of the RREF reads: c[pivot_r] + sum over info columns with a
    // one in row r = 0, so each parity bit is that XOR of info bits.
    let combination: Vec<Vec<u64>> = pivot_row_of_col
        .iter()
        .map(|&r| {
            let mut packed = vec![0u64; kwords];
            for (idx, &c) in info_positions.iter().enumerate() {
                if mat.get(r, c) {
                    packed[idx / 64] |= 1u64 << (idx % 64);
                }
            }
            packed
        })
        .collect();

    Encoder {
        n,
        info_positions,
        parity_positions: pivot_cols,
        combination,
    }
}
