//! Binary linear algebra: sparse parity-check matrices, alist I/O,
//! Gauss-Jordan systematization and encoding.

pub mod alist;
mod dense;
mod sparse;
mod systematic;

pub use alist::{content_hash, load_alist, parse_alist, save_alist, to_alist_string, AlistError};
pub use dense::BitMatrix;
pub use sparse::{MatrixError, SparseBinaryMatrix};
pub use systematic::{
    information_first, load_generator, rank_gf2, read_generator, save_generator, systematize,
    write_generator, Codeword, EncodeError, GeneratorFileError, GeneratorMatrix, RankDeficient,
};
