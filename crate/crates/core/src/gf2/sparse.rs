//! Sparse parity-check matrices over GF(2).

use thiserror::Error;

/// Structural problems found while assembling a [`SparseBinaryMatrix`].
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum MatrixError {
    #[error("row {row}: column index {col} out of range for {cols} columns")]
    ColumnOutOfRange { row: usize, col: usize, cols: usize },
    #[error("row {row}: duplicate entry in column {col}")]
    DuplicateEntry { row: usize, col: usize },
    #[error("vector of length {got} does not match {expected} columns")]
    LengthMismatch { expected: usize, got: usize },
}

/// An M×N binary matrix stored as sorted per-row column lists, with the
/// transposed (per-column) view kept alongside for Tanner-graph walks.
///
/// Immutable once built; every algorithm that changes the graph builds a new
/// matrix.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct SparseBinaryMatrix {
    cols: usize,
    rows: Vec<Vec<usize>>,
    columns: Vec<Vec<usize>>,
}

impl SparseBinaryMatrix {
    /// Builds a matrix from per-row column lists. Rows are sorted; duplicates
    /// and out-of-range indices are rejected.
    pub fn from_rows(cols: usize, rows: Vec<Vec<usize>>) -> Result<Self, MatrixError> {
        let mut rows = rows;
        for (r, row) in rows.iter_mut().enumerate() {
            row.sort_unstable();
            for w in row.windows(2) {
                if w[0] == w[1] {
                    return Err(MatrixError::DuplicateEntry { row: r, col: w[0] });
                }
            }
            if let Some(&last) = row.last() {
                if last >= cols {
                    return Err(MatrixError::ColumnOutOfRange {
                        row: r,
                        col: last,
                        cols,
                    });
                }
            }
        }
        let mut columns = vec![Vec::new(); cols];
        for (r, row) in rows.iter().enumerate() {
            for &c in row {
                columns[c].push(r);
            }
        }
        Ok(Self {
            cols,
            rows,
            columns,
        })
    }

    /// Builds a matrix from `(row, col)` coordinates.
    pub fn from_entries<I>(num_rows: usize, cols: usize, entries: I) -> Result<Self, MatrixError>
    where
        I: IntoIterator<Item = (usize, usize)>,
    {
        let mut rows = vec![Vec::new(); num_rows];
        for (r, c) in entries {
            rows[r].push(c);
        }
        Self::from_rows(cols, rows)
    }

    pub fn zeros(num_rows: usize, cols: usize) -> Self {
        Self {
            cols,
            rows: vec![Vec::new(); num_rows],
            columns: vec![Vec::new(); cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        Self {
            cols: n,
            rows: (0..n).map(|i| vec![i]).collect(),
            columns: (0..n).map(|i| vec![i]).collect(),
        }
    }

    /// Builds a matrix from a dense 0/1 table, mostly useful in tests.
    pub fn from_dense(table: &[&[u8]]) -> Self {
        let cols = table.first().map_or(0, |r| r.len());
        let rows = table
            .iter()
            .map(|r| {
                r.iter()
                    .enumerate()
                    .filter(|(_, &b)| b != 0)
                    .map(|(c, _)| c)
                    .collect()
            })
            .collect();
        Self::from_rows(cols, rows).expect("dense table is always well formed")
    }

    pub fn num_rows(&self) -> usize {
        self.rows.len()
    }

    pub fn num_cols(&self) -> usize {
        self.cols
    }

    /// Number of nonzero entries (Tanner-graph edges).
    pub fn num_edges(&self) -> usize {
        self.rows.iter().map(Vec::len).sum()
    }

    /// Sorted column indices of row `r`.
    pub fn row(&self, r: usize) -> &[usize] {
        &self.rows[r]
    }

    /// Sorted row indices of column `c`.
    pub fn col(&self, c: usize) -> &[usize] {
        &self.columns[c]
    }

    pub fn rows(&self) -> impl ExactSizeIterator<Item = &[usize]> + '_ {
        self.rows.iter().map(Vec::as_slice)
    }

    pub fn row_degree(&self, r: usize) -> usize {
        self.rows[r].len()
    }

    pub fn col_degree(&self, c: usize) -> usize {
        self.columns[c].len()
    }

    pub fn col_degrees(&self) -> Vec<usize> {
        self.columns.iter().map(Vec::len).collect()
    }

    pub fn row_degrees(&self) -> Vec<usize> {
        self.rows.iter().map(Vec::len).collect()
    }

    pub fn get(&self, r: usize, c: usize) -> bool {
        self.rows[r].binary_search(&c).is_ok()
    }

    /// All `(row, col)` entries in row-major order.
    pub fn entries(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.rows
            .iter()
            .enumerate()
            .flat_map(|(r, row)| row.iter().map(move |&c| (r, c)))
    }

    /// H·xᵀ over GF(2) for a 0/1 vector `x`.
    pub fn syndrome(&self, x: &[u8]) -> Result<Vec<u8>, MatrixError> {
        if x.len() != self.cols {
            return Err(MatrixError::LengthMismatch {
                expected: self.cols,
                got: x.len(),
            });
        }
        Ok(self
            .rows
            .iter()
            .map(|row| row.iter().fold(0u8, |acc, &c| acc ^ (x[c] & 1)))
            .collect())
    }

    /// True when every check is satisfied by `x`. Panics on length mismatch.
    pub fn is_codeword(&self, x: &[u8]) -> bool {
        assert_eq!(x.len(), self.cols, "vector length does not match matrix");
        self.rows
            .iter()
            .all(|row| row.iter().fold(0u8, |acc, &c| acc ^ (x[c] & 1)) == 0)
    }

    /// Keeps only the listed columns (in the given order), renumbering them
    /// `0..keep.len()`. Used to form the residual graph of a punctured code.
    pub fn select_columns(&self, keep: &[usize]) -> Self {
        let mut remap = vec![usize::MAX; self.cols];
        for (new, &old) in keep.iter().enumerate() {
            remap[old] = new;
        }
        let rows = self
            .rows
            .iter()
            .map(|row| {
                row.iter()
                    .filter_map(|&c| (remap[c] != usize::MAX).then_some(remap[c]))
                    .collect()
            })
            .collect();
        Self::from_rows(keep.len(), rows).expect("column selection preserves validity")
    }

    /// Drops the listed rows.
    pub fn without_rows(&self, drop: &[usize]) -> Self {
        let rows = self
            .rows
            .iter()
            .enumerate()
            .filter(|(r, _)| !drop.contains(r))
            .map(|(_, row)| row.clone())
            .collect();
        Self::from_rows(self.cols, rows).expect("row removal preserves validity")
    }

    /// The top-left `num_rows × cols` block.
    pub fn leading_block(&self, num_rows: usize, cols: usize) -> Self {
        let rows = self.rows[..num_rows.min(self.rows.len())]
            .iter()
            .map(|row| row.iter().copied().filter(|&c| c < cols).collect())
            .collect();
        Self::from_rows(cols, rows).expect("block extraction preserves validity")
    }

    /// Returns a copy with one entry removed; no-op when absent.
    pub fn without_entry(&self, r: usize, c: usize) -> Self {
        let mut rows = self.rows.clone();
        rows[r].retain(|&x| x != c);
        Self::from_rows(self.cols, rows).expect("entry removal preserves validity")
    }
}
