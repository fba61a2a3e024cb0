//! MacKay alist reading and writing.
//!
//! Layout (all indices 1-based in the body):
//!
//! ```text
//! N M
//! max_col_degree max_row_degree
//! col_degree[0] .. col_degree[N-1]
//! row_degree[0] .. row_degree[M-1]
//! N lines: row indices of each column, zero padded to max_col_degree
//! M lines: column indices of each row, zero padded to max_row_degree
//! ```
//!
//! Lines holding no entries are written as a single `0` when the maximum
//! degree is zero. Blank lines are skipped on input.

use std::fmt::Write as _;
use std::path::Path;

use sha2::{Digest, Sha256};
use thiserror::Error;

use super::SparseBinaryMatrix;

#[derive(Debug, Error)]
pub enum AlistError {
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error("unexpected end of file: {0}")]
    Truncated(&'static str),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

fn parse_err(line: usize, message: impl Into<String>) -> AlistError {
    AlistError::Parse {
        line,
        message: message.into(),
    }
}

struct Lines<'a> {
    inner: std::iter::Enumerate<std::str::Lines<'a>>,
}

impl<'a> Lines<'a> {
    fn next_numbers(&mut self, what: &'static str) -> Result<(usize, Vec<usize>), AlistError> {
        for (i, raw) in self.inner.by_ref() {
            let raw = raw.trim();
            if raw.is_empty() {
                continue;
            }
            let line = i + 1;
            let nums = raw
                .split_whitespace()
                .map(|t| {
                    t.parse::<usize>()
                        .map_err(|_| parse_err(line, format!("invalid integer {t:?}")))
                })
                .collect::<Result<Vec<_>, _>>()?;
            return Ok((line, nums));
        }
        Err(AlistError::Truncated(what))
    }
}

/// Parses alist text.
pub fn parse_alist(text: &str) -> Result<SparseBinaryMatrix, AlistError> {
    let mut lines = Lines {
        inner: text.lines().enumerate(),
    };

    let (line, dims) = lines.next_numbers("dimensions")?;
    let [n, m] = dims[..] else {
        return Err(parse_err(line, "header must hold exactly two numbers: N M"));
    };
    let (line, maxes) = lines.next_numbers("maximum degrees")?;
    let [max_col, max_row] = maxes[..] else {
        return Err(parse_err(
            line,
            "second line must hold the two maximum degrees",
        ));
    };
    let (line, col_deg) = if n == 0 {
        (0, Vec::new())
    } else {
        lines.next_numbers("column degrees")?
    };
    if col_deg.len() != n {
        return Err(parse_err(
            line,
            format!("expected {n} column degrees, found {}", col_deg.len()),
        ));
    }
    if let Some(&d) = col_deg.iter().find(|&&d| d > max_col || d > m) {
        return Err(parse_err(
            line,
            format!("column degree {d} exceeds the declared maximum or row count"),
        ));
    }
    let (line, row_deg) = if m == 0 {
        (0, Vec::new())
    } else {
        lines.next_numbers("row degrees")?
    };
    if row_deg.len() != m {
        return Err(parse_err(
            line,
            format!("expected {m} row degrees, found {}", row_deg.len()),
        ));
    }
    if let Some(&d) = row_deg.iter().find(|&&d| d > max_row || d > n) {
        return Err(parse_err(
            line,
            format!("row degree {d} exceeds the declared maximum or column count"),
        ));
    }

    let mut col_lists = Vec::with_capacity(n);
    for (c, &deg) in col_deg.iter().enumerate() {
        let (line, nums) = lines.next_numbers("column lists")?;
        col_lists.push(read_list(line, &nums, deg, m, "row", c)?);
    }
    let mut rows = Vec::with_capacity(m);
    let mut row_lines = Vec::with_capacity(m);
    for (r, &deg) in row_deg.iter().enumerate() {
        let (line, nums) = lines.next_numbers("row lists")?;
        rows.push(read_list(line, &nums, deg, n, "column", r)?);
        row_lines.push(line);
    }

    let h = SparseBinaryMatrix::from_rows(n, rows).map_err(|e| {
        let line = match e {
            super::MatrixError::DuplicateEntry { row, .. }
            | super::MatrixError::ColumnOutOfRange { row, .. } => row_lines[row],
            super::MatrixError::LengthMismatch { .. } => 0,
        };
        parse_err(line, e.to_string())
    })?;
    for (c, mut list) in col_lists.into_iter().enumerate() {
        list.sort_unstable();
        if list != h.col(c) {
            return Err(parse_err(
                0,
                format!("column {} list disagrees with the row lists", c + 1),
            ));
        }
    }
    Ok(h)
}

fn read_list(
    line: usize,
    nums: &[usize],
    degree: usize,
    bound: usize,
    kind: &str,
    owner: usize,
) -> Result<Vec<usize>, AlistError> {
    let entries: Vec<usize> = nums.iter().copied().take_while(|&x| x != 0).collect();
    if nums[entries.len()..].iter().any(|&x| x != 0) {
        return Err(parse_err(line, "nonzero index after zero padding"));
    }
    if entries.len() != degree {
        return Err(parse_err(
            line,
            format!(
                "declared degree {degree} but {} {kind} indices listed for entry {}",
                entries.len(),
                owner + 1
            ),
        ));
    }
    entries
        .into_iter()
        .map(|x| {
            if x > bound {
                Err(parse_err(
                    line,
                    format!("{kind} index {x} out of range 1..={bound}"),
                ))
            } else {
                Ok(x - 1)
            }
        })
        .collect()
}

/// Renders a matrix as alist text.
pub fn to_alist_string(h: &SparseBinaryMatrix) -> String {
    let n = h.num_cols();
    let m = h.num_rows();
    let col_deg = h.col_degrees();
    let row_deg = h.row_degrees();
    let max_col = col_deg.iter().copied().max().unwrap_or(0);
    let max_row = row_deg.iter().copied().max().unwrap_or(0);

    let mut out = String::new();
    writeln!(out, "{n} {m}").unwrap();
    writeln!(out, "{max_col} {max_row}").unwrap();
    out.push_str(&join(&col_deg));
    out.push('\n');
    out.push_str(&join(&row_deg));
    out.push('\n');
    for c in 0..n {
        out.push_str(&padded(h.col(c), max_col));
        out.push('\n');
    }
    for r in 0..m {
        out.push_str(&padded(h.row(r), max_row));
        out.push('\n');
    }
    out
}

fn join(xs: &[usize]) -> String {
    xs.iter()
        .map(usize::to_string)
        .collect::<Vec<_>>()
        .join(" ")
}

fn padded(list: &[usize], width: usize) -> String {
    let mut items: Vec<String> = list.iter().map(|&x| (x + 1).to_string()).collect();
    items.resize(width.max(1).max(list.len()), "0".to_string());
    items.join(" ")
}

pub fn load_alist(path: impl AsRef<Path>) -> Result<SparseBinaryMatrix, AlistError> {
    parse_alist(&std::fs::read_to_string(path)?)
}

pub fn save_alist(h: &SparseBinaryMatrix, path: impl AsRef<Path>) -> Result<(), AlistError> {
    std::fs::write(path, to_alist_string(h))?;
    Ok(())
}

/// SHA-256 of the canonical alist rendering, hex encoded. Identifies a code
/// independently of the file it was read from.
pub fn content_hash(h: &SparseBinaryMatrix) -> String {
    hex::encode(Sha256::digest(to_alist_string(h).as_bytes()))
}
