//! Gauss-Jordan systematization, generator matrices and encoding.

use std::io::{Read, Write};
use std::path::Path;

use thiserror::Error;

use super::{BitMatrix, SparseBinaryMatrix};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("parity-check matrix has rank {rank} < {rows} rows; dependent rows {dependent_rows:?}")]
pub struct RankDeficient {
    pub rank: usize,
    pub rows: usize,
    /// Rows (in original order) lying in the span of the rows before them.
    pub dependent_rows: Vec<usize>,
}

#[derive(Debug, Error)]
pub enum EncodeError {
    #[error("message has length {got}, code dimension is {expected}")]
    LengthMismatch { expected: usize, got: usize },
}

#[derive(Debug, Error)]
pub enum GeneratorFileError {
    #[error("bad magic number; not a generator file")]
    BadMagic,
    #[error("generator file is inconsistent: {0}")]
    Corrupt(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

/// A binary codeword of length N.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Codeword {
    bits: Vec<u8>,
}

impl Codeword {
    pub fn new(bits: Vec<u8>) -> Self {
        Self { bits }
    }

    pub fn bits(&self) -> &[u8] {
        &self.bits
    }

    pub fn len(&self) -> usize {
        self.bits.len()
    }

    pub fn is_empty(&self) -> bool {
        self.bits.is_empty()
    }

    pub fn into_bits(self) -> Vec<u8> {
        self.bits
    }
}

/// Systematic generator in compact form.
///
/// Codeword positions are those of the parity-check matrix it was derived
/// from: message bit `i` is copied to `info_positions[i]`, and parity bit `r`
/// (stored at `parity_positions[r]`) is the XOR of the message bits whose row
/// of `parity_part` has bit `r` set. The column permutation that brings the
/// code into `[I_K | P]` form is `info_positions ++ parity_positions`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GeneratorMatrix {
    n: usize,
    info_positions: Vec<usize>,
    parity_positions: Vec<usize>,
    parity_part: BitMatrix,
}

impl GeneratorMatrix {
    pub fn k(&self) -> usize {
        self.info_positions.len()
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn info_positions(&self) -> &[usize] {
        &self.info_positions
    }

    pub fn parity_positions(&self) -> &[usize] {
        &self.parity_positions
    }

    /// The dense K×(N−K) systematic block.
    pub fn parity_part(&self) -> &BitMatrix {
        &self.parity_part
    }

    /// Column order taking codeword positions to systematic form.
    pub fn permutation(&self) -> Vec<usize> {
        self.info_positions
            .iter()
            .chain(&self.parity_positions)
            .copied()
            .collect()
    }

    /// Row `i` of G in codeword coordinates.
    pub fn row(&self, i: usize) -> Vec<u8> {
        let mut out = vec![0u8; self.n];
        out[self.info_positions[i]] = 1;
        for (r, &pos) in self.parity_positions.iter().enumerate() {
            out[pos] = self.parity_part.get(i, r) as u8;
        }
        out
    }

    pub fn encode(&self, message: &[u8]) -> Result<Codeword, EncodeError> {
        if message.len() != self.k() {
            return Err(EncodeError::LengthMismatch {
                expected: self.k(),
                got: message.len(),
            });
        }
        let mut acc = vec![0u64; self.parity_part.words_per_row()];
        let mut bits = vec![0u8; self.n];
        for (i, (&pos, &b)) in self.info_positions.iter().zip(message).enumerate() {
            let b = b & 1;
            bits[pos] = b;
            if b == 1 {
                for (a, w) in acc.iter_mut().zip(self.parity_part.row_words(i)) {
                    *a ^= *w;
                }
            }
        }
        for (r, &pos) in self.parity_positions.iter().enumerate() {
            bits[pos] = ((acc[r / 64] >> (r % 64)) & 1) as u8;
        }
        Ok(Codeword::new(bits))
    }

    /// Reads the message back out of a codeword (or hard-decision word).
    pub fn extract_message(&self, word: &[u8]) -> Vec<u8> {
        self.info_positions.iter().map(|&p| word[p]).collect()
    }
}

/// Row-reduces `h` in index order. Each new row is reduced against the
/// pivots found so far and then pivots on its highest remaining column, so
/// pivots land on the rightmost columns whenever those are independent.
struct Echelon {
    rows: BitMatrix,
    /// pivot column for each independent row of `rows`
    pivots: Vec<usize>,
    dependent: Vec<usize>,
}

fn echelon(h: &SparseBinaryMatrix) -> Echelon {
    let mut a = BitMatrix::from(h);
    let m = h.num_rows();
    let mut pivots: Vec<usize> = Vec::new();
    let mut dependent = Vec::new();
    let mut next = 0usize;
    for r in 0..m {
        a.swap_rows(next, r);
        for (pr, &pc) in pivots.iter().enumerate() {
            if a.get(next, pc) {
                a.xor_row_into(pr, next);
            }
        }
        match a.last_one(next) {
            Some(pc) => {
                pivots.push(pc);
                next += 1;
            }
            None => dependent.push(r),
        }
    }
    Echelon {
        rows: a,
        pivots,
        dependent,
    }
}

/// GF(2) rank.
pub fn rank_gf2(h: &SparseBinaryMatrix) -> usize {
    echelon(h).pivots.len()
}

/// Gauss-Jordan elimination to systematic form.
///
/// Pivots are taken from the highest column index available, so a matrix
/// already in `[A | I]` form keeps its column order (identity permutation)
/// and information bits stay in the leftmost columns whenever the rightmost
/// M columns are invertible.
pub fn systematize(h: &SparseBinaryMatrix) -> Result<GeneratorMatrix, RankDeficient> {
    let Echelon {
        rows: mut a,
        pivots,
        dependent,
    } = echelon(h);
    if !dependent.is_empty() {
        return Err(RankDeficient {
            rank: pivots.len(),
            rows: h.num_rows(),
            dependent_rows: dependent,
        });
    }
    // back substitution: clear every pivot column from the other rows
    for (pr, &pc) in pivots.iter().enumerate() {
        for other in 0..pivots.len() {
            if other != pr && a.get(other, pc) {
                a.xor_row_into(pr, other);
            }
        }
    }
    let n = h.num_cols();
    let mut is_pivot = vec![false; n];
    for &p in &pivots {
        is_pivot[p] = true;
    }
    let info_positions: Vec<usize> = (0..n).filter(|&c| !is_pivot[c]).collect();
    let mut order: Vec<usize> = (0..pivots.len()).collect();
    order.sort_by_key(|&r| pivots[r]);
    let parity_positions: Vec<usize> = order.iter().map(|&r| pivots[r]).collect();

    let mut parity_part = BitMatrix::zeros(info_positions.len(), parity_positions.len());
    for (j, &row) in order.iter().enumerate() {
        for (i, &col) in info_positions.iter().enumerate() {
            if a.get(row, col) {
                parity_part.set(i, j, true);
            }
        }
    }
    Ok(GeneratorMatrix {
        n,
        info_positions,
        parity_positions,
        parity_part,
    })
}

/// Reorders the columns of `h` so that [`systematize`] places the
/// information bits in the first K columns (information columns first, then
/// parity columns, each in their original order). `None` if `h` is rank
/// deficient.
pub fn information_first(h: &SparseBinaryMatrix) -> Option<SparseBinaryMatrix> {
    let g = systematize(h).ok()?;
    if g.info_positions().iter().enumerate().all(|(i, &p)| i == p) {
        return Some(h.clone());
    }
    let order: Vec<usize> = g
        .info_positions()
        .iter()
        .chain(g.parity_positions())
        .copied()
        .collect();
    Some(h.select_columns(&order))
}

const GENERATOR_MAGIC: &[u8; 8] = b"RCLDPCG1";

/// Writes a generator as: magic `RCLDPCG1`, `k` and `n` as little-endian
/// u32, the K information positions then the N−K parity positions (u32 LE
/// each), then K packed rows of the systematic block, each `ceil((N−K)/64)`
/// little-endian u64 words with column `r` at bit `r % 64` of word `r / 64`.
pub fn write_generator<W: Write>(g: &GeneratorMatrix, mut w: W) -> std::io::Result<()> {
    w.write_all(GENERATOR_MAGIC)?;
    w.write_all(&(g.k() as u32).to_le_bytes())?;
    w.write_all(&(g.n as u32).to_le_bytes())?;
    for &p in g.info_positions.iter().chain(&g.parity_positions) {
        w.write_all(&(p as u32).to_le_bytes())?;
    }
    for word in g.parity_part.words() {
        w.write_all(&word.to_le_bytes())?;
    }
    Ok(())
}

pub fn read_generator<R: Read>(mut r: R) -> Result<GeneratorMatrix, GeneratorFileError> {
    let mut magic = [0u8; 8];
    r.read_exact(&mut magic)?;
    if &magic != GENERATOR_MAGIC {
        return Err(GeneratorFileError::BadMagic);
    }
    let mut u32buf = [0u8; 4];
    let mut read_u32 = |r: &mut R| -> std::io::Result<usize> {
        r.read_exact(&mut u32buf)?;
        Ok(u32::from_le_bytes(u32buf) as usize)
    };
    let k = read_u32(&mut r)?;
    let n = read_u32(&mut r)?;
    if k > n {
        return Err(GeneratorFileError::Corrupt(format!(
            "k = {k} exceeds n = {n}"
        )));
    }
    let mut positions = Vec::with_capacity(n);
    for _ in 0..n {
        positions.push(read_u32(&mut r)?);
    }
    let mut seen = vec![false; n];
    for &p in &positions {
        if p >= n || std::mem::replace(&mut seen[p], true) {
            return Err(GeneratorFileError::Corrupt(format!(
                "position {p} invalid or repeated"
            )));
        }
    }
    let parity_positions = positions.split_off(k);
    let words = (n - k).div_ceil(64) * k;
    let mut data = Vec::with_capacity(words);
    let mut buf = [0u8; 8];
    for _ in 0..words {
        r.read_exact(&mut buf)?;
        data.push(u64::from_le_bytes(buf));
    }
    Ok(GeneratorMatrix {
        n,
        info_positions: positions,
        parity_positions,
        parity_part: BitMatrix::from_words(k, n - k, data),
    })
}

pub fn save_generator(g: &GeneratorMatrix, path: impl AsRef<Path>) -> std::io::Result<()> {
    let mut f = std::io::BufWriter::new(std::fs::File::create(path)?);
    write_generator(g, &mut f)?;
    f.flush()
}

pub fn load_generator(path: impl AsRef<Path>) -> Result<GeneratorMatrix, GeneratorFileError> {
    read_generator(std::io::BufReader::new(std::fs::File::open(path)?))
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn random_sparse(m: usize, n: usize, row_weight: usize, seed: u64) -> SparseBinaryMatrix {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let rows = (0..m)
            .map(|_| rand::seq::index::sample(&mut rng, n, row_weight).into_vec())
            .collect();
        SparseBinaryMatrix::from_rows(n, rows).unwrap()
    }

    /// G·Hᵀ = 0, checked row by row of G.
    fn assert_orthogonal(g: &GeneratorMatrix, h: &SparseBinaryMatrix) {
        for i in 0..g.k() {
            assert!(h.is_codeword(&g.row(i)), "row {i} of G violates H");
        }
    }

    #[test]
    fn rank_examples() {
        assert_eq!(rank_gf2(&SparseBinaryMatrix::zeros(3, 4)), 0);
        assert_eq!(rank_gf2(&SparseBinaryMatrix::identity(5)), 5);
        let h = SparseBinaryMatrix::from_dense(&[&[1, 1, 0, 1], &[0, 1, 1, 0], &[1, 0, 1, 1]]);
        assert_eq!(rank_gf2(&h), 2);
    }

    #[test]
    fn small_full_rank_code_exhaustive() {
        let h = SparseBinaryMatrix::from_dense(&[&[1, 1, 0], &[0, 1, 1]]);
        let g = systematize(&h).unwrap();
        assert_eq!(g.k(), 1);
        assert_eq!(g.row(0), vec![1, 1, 1]);
        // every one of the 2^1 messages encodes to a codeword; the code has
        // exactly the two words 000 and 111
        let words: Vec<Vec<u8>> = (0..2u8)
            .map(|b| g.encode(&[b]).unwrap().into_bits())
            .collect();
        assert_eq!(words, vec![vec![0, 0, 0], vec![1, 1, 1]]);
        let all_codewords = (0..8u8)
            .map(|x| vec![x & 1, (x >> 1) & 1, (x >> 2) & 1])
            .filter(|w| h.is_codeword(w))
            .count();
        assert_eq!(all_codewords, 2);
    }

    #[test]
    fn identity_has_no_information_bits() {
        let g = systematize(&SparseBinaryMatrix::identity(4)).unwrap();
        assert_eq!(g.k(), 0);
        assert_eq!(g.encode(&[]).unwrap().bits(), &[0, 0, 0, 0]);
    }

    #[test]
    fn already_systematic_keeps_identity_permutation() {
        let h = SparseBinaryMatrix::from_dense(&[
            &[1, 0, 1, 1, 0, 0],
            &[1, 1, 0, 0, 1, 0],
            &[0, 1, 1, 0, 0, 1],
        ]);
        let g = systematize(&h).unwrap();
        assert_eq!(g.permutation(), (0..6).collect::<Vec<_>>());
        assert_orthogonal(&g, &h);
    }

    #[test]
    fn rank_deficient_reports_dependent_rows() {
        let h = SparseBinaryMatrix::from_dense(&[
            &[1, 1, 0, 1],
            &[0, 1, 1, 0],
            &[1, 0, 1, 1],
            &[0, 0, 0, 1],
        ]);
        let err = systematize(&h).unwrap_err();
        assert_eq!(err.rank, 3);
        assert_eq!(err.dependent_rows, vec![2]);
        let g = systematize(&h.without_rows(&err.dependent_rows)).unwrap();
        assert_orthogonal(&g, &h);
    }

    #[test]
    fn unit_message_gives_generator_row() {
        let h = random_sparse(20, 40, 6, 3);
        let h = match systematize(&h) {
            Ok(_) => h,
            Err(e) => h.without_rows(&e.dependent_rows),
        };
        let g = systematize(&h).unwrap();
        let mut m = vec![0u8; g.k()];
        assert!(g.encode(&m).unwrap().bits().iter().all(|&b| b == 0));
        m[0] = 1;
        assert_eq!(g.encode(&m).unwrap().into_bits(), g.row(0));
        assert_eq!(g.extract_message(&g.row(0)), m);
    }

    #[test]
    fn random_100x200_orthogonality_and_encoding() {
        let h = random_sparse(100, 200, 6, 19);
        let h = match systematize(&h) {
            Ok(_) => h,
            Err(e) => h.without_rows(&e.dependent_rows),
        };
        let g = systematize(&h).unwrap();
        assert_eq!(g.k(), 200 - rank_gf2(&h));
        assert_orthogonal(&g, &h);
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for _ in 0..100 {
            let m: Vec<u8> = (0..g.k()).map(|_| rng.random_range(0..2)).collect();
            let c = g.encode(&m).unwrap();
            assert!(h.is_codeword(c.bits()));
            assert_eq!(g.extract_message(c.bits()), m);
        }
        assert!(matches!(
            g.encode(&[0]),
            Err(EncodeError::LengthMismatch { .. })
        ));
    }

    #[test]
    fn generator_file_round_trip_and_magic() {
        let h = random_sparse(30, 70, 5, 23);
        let h = match systematize(&h) {
            Ok(_) => h,
            Err(e) => h.without_rows(&e.dependent_rows),
        };
        let g = systematize(&h).unwrap();
        let mut buf = Vec::new();
        write_generator(&g, &mut buf).unwrap();
        assert_eq!(&buf[..8], b"RCLDPCG1");
        assert_eq!(read_generator(&buf[..]).unwrap(), g);
        buf[0] = b'X';
        assert!(matches!(
            read_generator(&buf[..]),
            Err(GeneratorFileError::BadMagic)
        ));
    }

    proptest! {
        #[test]
        fn encode_always_satisfies_checks(seed in any::<u64>(), m in 2usize..15, extra in 1usize..15) {
            let n = m + extra;
            let h = random_sparse(m, n, 3.min(n), seed);
            let h = match systematize(&h) { Ok(_) => h, Err(e) => h.without_rows(&e.dependent_rows) };
            let g = systematize(&h).unwrap();
            let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x55);
            let msg: Vec<u8> = (0..g.k()).map(|_| rng.random_range(0..2)).collect();
            prop_assert!(h.is_codeword(g.encode(&msg).unwrap().bits()));
        }
    }

    #[test]
    fn information_first_moves_info_columns_left() {
        // the right 2×2 block is singular, so column 1 becomes a parity column
        let h = SparseBinaryMatrix::from_dense(&[&[1, 1, 1, 1], &[0, 1, 1, 1]]);
        let g = systematize(&h).unwrap();
        assert_ne!(g.info_positions(), &[0, 1]);
        let p = information_first(&h).unwrap();
        let gp = systematize(&p).unwrap();
        assert_eq!(gp.info_positions(), &[0, 1]);
        assert_eq!(rank_gf2(&p), 2);
        let dependent = SparseBinaryMatrix::from_dense(&[&[1, 1, 0], &[1, 1, 0]]);
        assert!(information_first(&dependent).is_none());
    }
}
