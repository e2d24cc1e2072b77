//! Parity-check matrices, Tanner-graph adjacency, degree statistics,
//! GF(2) encoding and synthetic test-code generation.

mod alist;
mod encoder;
mod generate;

pub use alist::{load_alist, save_alist, AlistError};
pub use encoder::{build_encoder, Encoder};
pub use generate::{generate_irregular_code, generate_regular_code, GenerateError};

use std::collections::BTreeMap;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum CodeError {
    #[error("variable index {index} out of range for code length {n}")]
    IndexOutOfRange { index: usize, n: usize },
    #[error("duplicate entry {index} in {kind} {at}")]
    DuplicateEntry {
        kind: &'static str,
        at: usize,
        index: usize,
    },
    #[error("{kind} {at} is empty")]
    EmptyNode { kind: &'static str, at: usize },
    #[error("bit vector has length {got}, expected {expected}")]
    LengthMismatch { got: usize, expected: usize },
}

/// Sparse binary parity-check matrix `H` together with its Tanner-graph
/// adjacency. `rows[i]` lists the variable nodes of check `i` (the set
/// V{i}); `cols[j]` lists the check nodes of variable `j` (the set C{j}).
/// Both sides are sorted, duplicate-free and mutually consistent.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParityCheckMatrix {
    n: usize,
    m: usize,
    rows: Vec<Vec<usize>>,
    cols: Vec<Vec<usize>>,
}

impl ParityCheckMatrix {
    /// Builds a matrix from per-check variable lists. Lists may be unsorted;
    /// they are sorted here. Fails on out-of-range indices, duplicates
    /// within a row or column, or empty rows/columns.
    pub fn from_rows(n: usize, rows: Vec<Vec<usize>>) -> Result<Self, CodeError> {
        let m = rows.len();
        let mut cols: Vec<Vec<usize>> = vec![Vec::new(); n];
        let mut sorted_rows = Vec::with_capacity(m);
        for (i, mut row) in rows.into_iter().enumerate() {
            row.sort_unstable();
            if row.is_empty() {
                return Err(CodeError::EmptyNode {
                    kind: "row",
                    at: i,
                });
            }
            for w in row.windows(2) {
                if w[0] == w[1] {
                    return Err(CodeError::DuplicateEntry {
                        kind: "row",
                        at: i,
                        index: w[0],
                    });
                }
            }
            for &j in &row {
                if j >= n {
                    return Err(CodeError::IndexOutOfRange { index: j, n });
                }
                cols[j].push(i);
            }
            sorted_rows.push(row);
        }
        for (j, col) in cols.iter().enumerate() {
            if col.is_empty() {
                return Err(CodeError::EmptyNode {
                    kind: "column",
                    at: j,
                });
            }
            // Built row-by-row, so each column is already sorted and any
            // duplicate would have been caught as a row duplicate.
        }
        Ok(Self {
            n,
            m,
            rows: sorted_rows,
            cols,
        })
    }

    /// Builds a matrix from a dense row-major 0/1 array (test helper).
    pub fn from_dense(m: usize, n: usize, data: &[u8]) -> Result<Self, CodeError> {
        assert_eq!(data.len(), m * n, "dense data must be m*n entries");
        let rows = (0..m)
            .map(|i| (0..n).filter(|&j| data[i * n + j] != 0).collect())
            .collect();
        Self::from_rows(n, rows)
    }

    /// Code length (number of variable nodes / columns).
    pub fn n(&self) -> usize {
        self.n
    }

    /// Number of parity checks (rows).
    pub fn m(&self) -> usize {
        self.m
    }

    /// Nominal information length `n - m`, assuming full row rank.
    pub fn nominal_k(&self) -> usize {
        self.n.saturating_sub(self.m)
    }

    /// Nominal code rate `(n - m) / n`.
    pub fn nominal_rate(&self) -> f64 {
        self.nominal_k() as f64 / self.n as f64
    }

    /// Variable nodes of check `i`, sorted.
    pub fn row(&self, i: usize) -> &[usize] {
        &self.rows[i]
    }

    /// Check nodes of variable `j`, sorted.
    pub fn col(&self, j: usize) -> &[usize] {
        &self.cols[j]
    }

    pub fn rows(&self) -> &[Vec<usize>] {
        &self.rows
    }

    pub fn cols(&self) -> &[Vec<usize>] {
        &self.cols
    }

    /// Total number of edges (ones in `H`).
    pub fn num_edges(&self) -> usize {
        self.rows.iter().map(Vec::len).sum()
    }

    /// Syndrome `H * bits` over GF(2); the all-zero vector signals a valid
    /// codeword.
    pub fn syndrome(&self, bits: &[u8]) -> Result<Vec<u8>, CodeError> {
        if bits.len() != self.n {
            return Err(CodeError::LengthMismatch {
                got: bits.len(),
                expected: self.n,
            });
        }
        Ok(self
            .rows
            .iter()
            .map(|row| row.iter().fold(0u8, |acc, &j| acc ^ (bits[j] & 1)))
            .collect())
    }

    /// True if `bits` satisfies every parity check.
    pub fn is_codeword(&self, bits: &[u8]) -> bool {
        bits.len() == self.n
            && self
                .rows
                .iter()
                .all(|row| row.iter().fold(0u8, |acc, &j| acc ^ (bits[j] & 1)) == 0)
    }
}

/// Node- and edge-perspective degree distributions of a parity-check
/// matrix. Node maps give the fraction of nodes with each degree;
/// edge maps give the fraction of edges incident to nodes of each degree
/// (`d * node_fraction_d / average_degree`).
#[derive(Debug, Clone, PartialEq)]
pub struct DegreeDistributions {
    pub check_node: BTreeMap<usize, f64>,
    pub var_node: BTreeMap<usize, f64>,
    pub check_edge: BTreeMap<usize, f64>,
    pub var_edge: BTreeMap<usize, f64>,
}

impl DegreeDistributions {
    /// Design rate of the ensemble, `1 - E[dv] / E[dc]`.
    pub fn design_rate(&self) -> f64 {
        let avg_var: f64 = self.var_node.iter().map(|(&d, &f)| d as f64 * f).sum();
        let avg_check: f64 = self.check_node.iter().map(|(&d, &f)| d as f64 * f).sum();
        1.0 - avg_var / avg_check
    }

    /// Ensemble with a prescribed variable-degree profile and regular check
    /// degree, without materializing a matrix.
    pub fn from_profile(var_degree_counts: &[(usize, usize)], dc: usize) -> Self {
        let nodes: usize = var_degree_counts.iter().map(|&(_, c)| c).sum();
        let edges: usize = var_degree_counts.iter().map(|&(d, c)| d * c).sum();
        let var_node = var_degree_counts
            .iter()
            .map(|&(d, c)| (d, c as f64 / nodes as f64))
            .collect();
        let var_edge = var_degree_counts
            .iter()
            .map(|&(d, c)| (d, (d * c) as f64 / edges as f64))
            .collect();
        Self {
            check_node: BTreeMap::from([(dc, 1.0)]),
            var_node,
            check_edge: BTreeMap::from([(dc, 1.0)]),
            var_edge,
        }
    }

    /// Regular `(dv, dc)` ensemble.
    pub fn regular(dv: usize, dc: usize) -> Self {
        Self::from_profile(&[(dv, 1)], dc)
    }
}

fn node_and_edge_maps(degrees: impl Iterator<Item = usize>) -> (BTreeMap<usize, f64>, BTreeMap<usize, f64>) {
    let mut counts: BTreeMap<usize, usize> = BTreeMap::new();
    let mut nodes = 0usize;
    let mut edges = 0usize;
    for d in degrees {
        *counts.entry(d).or_insert(0) += 1;
        nodes += 1;
        edges += d;
    }
    let node = counts
        .iter()
        .map(|(&d, &c)| (d, c as f64 / nodes as f64))
        .collect();
    let edge = counts
        .iter()
        .map(|(&d, &c)| (d, (d * c) as f64 / edges as f64))
        .collect();
    (node, edge)
}

/// Degree statistics of `H`, used to average density evolution over
/// irregular ensembles.
pub fn degree_distributions(h: &ParityCheckMatrix) -> DegreeDistributions {
    let (check_node, check_edge) = node_and_edge_maps(h.rows().iter().map(Vec::len));
    let (var_node, var_edge) = node_and_edge_maps(h.cols().iter().map(Vec::len));
    DegreeDistributions {
        check_node,
        var_node,
        check_edge,
        var_edge,
    }
}
