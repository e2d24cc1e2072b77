//! MacKay alist reader/writer.
//!
//! Layout: line 1 `n m`; line 2 `max_col_deg max_row_deg`; line 3 the n
//! column degrees; line 4 the m row degrees; then n column lists and m row
//! lists of 1-based indices, zero-padded up to the maximum degree.

use thiserror::Error;

use super::{CodeError, ParityCheckMatrix};

#[derive(Debug, Error)]
pub enum AlistError {
    #[error("line {line}: {message}")]
    Malformed { line: usize, message: String },
    #[error("line {line}: index {index} out of range 1..={max}")]
    IndexOutOfRange {
        line: usize,
        index: usize,
        max: usize,
    },
    #[error("line {line}: column list for variable {var} disagrees with row lists")]
    Inconsistent { line: usize, var: usize },
    #[error("alist describes an invalid matrix: {0}")]
    Invalid(#[from] CodeError),
}

struct Lines<'a> {
    inner: std::str::Lines<'a>,
    line_no: usize,
}

impl<'a> Lines<'a> {
    fn new(text: &'a str) -> Self {
        Self {
            inner: text.lines(),
            line_no: 0,
        }
    }

    /// Next non-blank line as whitespace-separated integers.
    fn numbers(&mut self, what: &str) -> Result<(usize, Vec<usize>), AlistError> {
        loop {
            let line = self.inner.next().ok_or_else(|| AlistError::Malformed {
                line: self.line_no + 1,
                message: format!("unexpected end of file, expected {what}"),
            })?;
            self.line_no += 1;
            if line.trim().is_empty() {
                continue;
            }
            let mut out = Vec::new();
            for tok in line.split_whitespace() {
                let v = tok.parse::<usize>().map_err(|_| AlistError::Malformed {
                    line: self.line_no,
                    message: format!("expected integer in {what}, found {tok:?}"),
                })?;
                out.push(v);
            }
            return Ok((self.line_no, out));
        }
    }
}

/// Parses alist text into a validated [`ParityCheckMatrix`]. Zero entries
/// pad short lists and are dropped; row and column lists must describe the
/// same matrix.
pub fn load_alist(text: &str) -> Result<ParityCheckMatrix, AlistError> {
    let mut lines = Lines::new(text);

    let (ln, header) = lines.numbers("header \"n m\"")?;
    let &[n, m] = header.as_slice() else {
        return Err(AlistError::Malformed {
            line: ln,
            message: format!("header must be two integers, found {}", header.len()),
        });
    };
    if n == 0 || m == 0 {
        return Err(AlistError::Malformed {
            line: ln,
            message: "n and m must be positive".into(),
        });
    }

    let (ln, maxdeg) = lines.numbers("max degrees")?;
    if maxdeg.len() != 2 {
        return Err(AlistError::Malformed {
            line: ln,
            message: "expected \"max_col_deg max_row_deg\"".into(),
        });
    }

    let (ln, col_degs) = lines.numbers("column degrees")?;
    if col_degs.len() != n {
        return Err(AlistError::Malformed {
            line: ln,
            message: format!("expected {n} column degrees, found {}", col_degs.len()),
        });
    }
    let (ln, row_degs) = lines.numbers("row degrees")?;
    if row_degs.len() != m {
        return Err(AlistError::Malformed {
            line: ln,
            message: format!("expected {m} row degrees, found {}", row_degs.len()),
        });
    }

    // Index lists: 1-based, zeros are padding.
    let mut list =
        |what: &str, count: usize, degs: &[usize], max: usize| -> Result<Vec<(usize, Vec<usize>)>, AlistError> {
            let mut all = Vec::with_capacity(count);
            for (k, &deg) in degs.iter().enumerate() {
                let (ln, raw) = lines.numbers(what)?;
                let mut entries = Vec::with_capacity(deg);
                for &v in &raw {
                    if v == 0 {
                        continue; // padding
                    }
                    if v > max {
                        return Err(AlistError::IndexOutOfRange {
                            line: ln,
                            index: v,
                            max,
                        });
                    }
                    entries.push(v - 1);
                }
                if entries.len() != deg {
                    return Err(AlistError::Malformed {
                        line: ln,
                        message: format!(
                            "{what} {k} lists {} entries but degree line declares {deg}",
                            entries.len()
                        ),
                    });
                }
                all.push((ln, entries));
            }
            Ok(all)
        };

    let col_lists = list("column list", n, &col_degs, m)?;
    let row_lists = list("row list", m, &row_degs, n)?;

    let rows: Vec<Vec<usize>> = row_lists.iter().map(|(_, r)| r.clone()).collect();
    let h = ParityCheckMatrix::from_rows(n, rows)?;

    // The column lists are redundant; verify they agree with the rows.
    for (j, (ln, mut listed)) in col_lists.into_iter().enumerate() {
        listed.sort_unstable();
        if h.col(j) != listed.as_slice() {
            return Err(AlistError::Inconsistent { line: ln, var: j });
        }
    }
    Ok(h)
}

/// Writes `h` in canonical alist form (zero-padded lists, 1-based indices).
pub fn save_alist(h: &ParityCheckMatrix) -> String {
    let max_col = h.cols().iter().map(Vec::len).max().unwrap_or(0);
    let max_row = h.rows().iter().map(Vec::len).max().unwrap_or(0);
    let mut out = String::new();
    out.push_str(&format!("{} {}\n", h.n(), h.m()));
    out.push_str(&format!("{max_col} {max_row}\n"));
    let degs = |lists: &[Vec<usize>]| {
        lists
            .iter()
            .map(|l| l.len().to_string())
            .collect::<Vec<_>>()
            .join(" ")
    };
    out.push_str(&degs(h.cols()));
    out.push('\n');
    out.push_str(&degs(h.rows()));
    out.push('\n');
    let mut lists = |side: &[Vec<usize>], width: usize| {
        for l in side {
            let padded: Vec<String> = l
                .iter()
                .map(|&i| (i + 1).to_string())
                .chain(std::iter::repeat_with(|| "0".to_string()))
                .take(width)
                .collect();
            out.push_str(&padded.join(" "));
            out.push('\n');
        }
    };
    lists(h.cols(), max_col);
    lists(h.rows(), max_row);
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::code::generate_regular_code;

    const TOY: &str = "3 2\n2 2\n1 2 1\n2 2\n1\n1 2\n2\n1 2\n2 3\n";

    #[test]
    fn parses_smallest_consistent_case() {
        let h = load_alist(TOY).unwrap();
        assert_eq!(h.n(), 3);
        assert_eq!(h.m(), 2);
        assert_eq!(h.col(0), &[0]);
        assert_eq!(h.col(1), &[0, 1]);
        assert_eq!(h.col(2), &[1]);
        assert_eq!(h.row(0), &[0, 1]);
        assert_eq!(h.row(1), &[1, 2]);
    }

    #[test]
    fn padding_zeros_are_dropped() {
        let padded = "3 2\n2 2\n1 2 1\n2 2\n1 0\n1 2\n2 0\n1 2\n2 3\n";
        assert_eq!(load_alist(padded).unwrap(), load_alist(TOY).unwrap());
    }

    #[test]
    fn contradictory_row_and_column_lists_error() {
        // Column 0 claims membership in check 2 while the rows say check 1.
        let bad = "3 2\n2 2\n1 2 1\n2 2\n2\n1 2\n2\n1 2\n2 3\n";
        match load_alist(bad) {
            Err(AlistError::Inconsistent { var: 0, .. }) => {}
            other => panic!("expected inconsistency error, got {other:?}"),
        }
    }

    #[test]
    fn malformed_header_names_line() {
        match load_alist("3\n") {
            Err(AlistError::Malformed { line: 1, .. }) => {}
            other => panic!("expected malformed header, got {other:?}"),
        }
        match load_alist("3 2\n2 2\n1 2\n2 2\n") {
            Err(AlistError::Malformed { line: 3, .. }) => {}
            other => panic!("expected bad degree count on line 3, got {other:?}"),
        }
    }

    #[test]
    fn out_of_range_index_errors() {
        let bad = "3 2\n2 2\n1 2 1\n2 2\n3\n1 2\n2\n1 2\n2 3\n";
        assert!(matches!(
            load_alist(bad),
            Err(AlistError::IndexOutOfRange { index: 3, max: 2, .. })
        ));
    }

    #[test]
    fn save_then_load_round_trips() {
        let h = generate_regular_code(24, 3, 6, 7).unwrap();
        let text = save_alist(&h);
        assert_eq!(load_alist(&text).unwrap(), h);
    }
}
