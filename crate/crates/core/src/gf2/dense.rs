//! Bit-packed dense binary matrices.

/// Row-major dense binary matrix, 64 columns per word.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct BitMatrix {
    rows: usize,
    cols: usize,
    words_per_row: usize,
    data: Vec<u64>,
}

impl BitMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        let words_per_row = cols.div_ceil(64);
        Self {
            rows,
            cols,
            words_per_row,
            data: vec![0; rows * words_per_row],
        }
    }

    pub(crate) fn from_words(rows: usize, cols: usize, data: Vec<u64>) -> Self {
        let words_per_row = cols.div_ceil(64);
        assert_eq!(data.len(), rows * words_per_row);
        Self {
            rows,
            cols,
            words_per_row,
            data,
        }
    }

    pub fn num_rows(&self) -> usize {
        self.rows
    }

    pub fn num_cols(&self) -> usize {
        self.cols
    }

    pub fn words_per_row(&self) -> usize {
        self.words_per_row
    }

    #[inline]
    pub fn get(&self, r: usize, c: usize) -> bool {
        (self.data[r * self.words_per_row + c / 64] >> (c % 64)) & 1 == 1
    }

    #[inline]
    pub fn set(&mut self, r: usize, c: usize, value: bool) {
        let w = &mut self.data[r * self.words_per_row + c / 64];
        let mask = 1u64 << (c % 64);
        if value {
            *w |= mask;
        } else {
            *w &= !mask;
        }
    }

    pub fn row_words(&self, r: usize) -> &[u64] {
        &self.data[r * self.words_per_row..(r + 1) * self.words_per_row]
    }

    pub(crate) fn words(&self) -> &[u64] {
        &self.data
    }

    /// row[dst] ^= row[src]
    pub fn xor_row_into(&mut self, src: usize, dst: usize) {
        debug_assert_ne!(src, dst);
        let w = self.words_per_row;
        let (a, b) = if src < dst {
            let (lo, hi) = self.data.split_at_mut(dst * w);
            (&lo[src * w..(src + 1) * w], &mut hi[..w])
        } else {
            let (lo, hi) = self.data.split_at_mut(src * w);
            (&hi[..w], &mut lo[dst * w..(dst + 1) * w])
        };
        for (d, s) in b.iter_mut().zip(a) {
            *d ^= *s;
        }
    }

    pub fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        let w = self.words_per_row;
        for i in 0..w {
            self.data.swap(a * w + i, b * w + i);
        }
    }

    pub fn row_is_zero(&self, r: usize) -> bool {
        self.row_words(r).iter().all(|&w| w == 0)
    }

    /// Highest set column in row `r`.
    pub fn last_one(&self, r: usize) -> Option<usize> {
        let words = self.row_words(r);
        words
            .iter()
            .enumerate()
            .rev()
            .find(|(_, &w)| w != 0)
            .map(|(i, &w)| i * 64 + 63 - w.leading_zeros() as usize)
    }
}

impl From<&super::SparseBinaryMatrix> for BitMatrix {
    fn from(h: &super::SparseBinaryMatrix) -> Self {
        let mut m = BitMatrix::zeros(h.num_rows(), h.num_cols());
        for (r, c) in h.entries() {
            m.set(r, c, true);
        }
        m
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn set_get_and_xor() {
        let mut m = BitMatrix::zeros(2, 130);
        m.set(0, 0, true);
        m.set(0, 129, true);
        m.set(1, 129, true);
        assert_eq!(m.last_one(0), Some(129));
        m.xor_row_into(1, 0);
        assert!(m.get(0, 0));
        assert!(!m.get(0, 129));
        assert_eq!(m.last_one(0), Some(0));
        m.xor_row_into(0, 1);
        assert!(m.get(1, 0) && m.get(1, 129));
        m.swap_rows(0, 1);
        assert!(m.get(0, 129));
        m.set(0, 129, false);
        m.set(0, 0, false);
        assert!(m.row_is_zero(0));
        assert_eq!(m.last_one(0), None);
    }
}
