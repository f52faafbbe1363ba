//! Rank, select and access over grammar-compressed sequences.
//!
//! The crate provides `rsa` structures (rank/select/access) for sequences
//! `S[1,n]` over an alphabet `[1, sigma]`:
//!
//! - [`gcc::GccIndex`]: RePair grammar with per-rule length and symbol
//!   counters plus position samples, regular either in `S` or in the reduced
//!   sequence `C`. Aimed at repetitive sequences over small alphabets.
//! - [`wavelet::WaveletTree`] and [`wavelet::WaveletMatrix`]: balanced,
//!   Huffman-shaped and multi-ary variants whose node sequences can be plain,
//!   RRR, sparse or grammar-compressed.
//! - [`appart::ApIndex`]: alphabet partitioning, optionally with grammar
//!   compression of the class sequence and of the first classes.
//! - [`fmindex::FmIndex`]: FM-index `count` on top of any of the above.
//!
//! Positions follow the usual conventions: `access(i)` takes `1 <= i <= n`,
//! `rank(a, i)` counts occurrences of `a` in `S[1,i]` for `0 <= i <= n`, and
//! `select(a, j)` returns the position of the `j`-th occurrence of `a`, with
//! `select(a, 0) = 0`.

pub mod appart;
pub mod bench;
pub mod bitio;
pub mod bitvector;
pub mod container;
pub mod corpus;
pub mod dac;
pub mod fmindex;
pub mod gcc;
pub mod huffman;
pub mod intvec;
pub mod oracle;
pub mod persist;
pub mod repair;
pub mod seq;
pub mod wavelet;

mod error;

pub use error::{Error, Result};
pub use seq::{Rsa, SeqIndex, StructureSpec};

/// Number of bits needed to write any value in `0..=max` (at least 1).
pub(crate) fn bits_for(max: u64) -> u8 {
    (64 - max.leading_zeros()).max(1) as u8
}

/// `ceil(lg x)` for `x >= 1`, with `ceil(lg 1) = 0`.
pub(crate) fn ceil_log2(x: u64) -> u32 {
    if x <= 1 {
        0
    } else {
        64 - (x - 1).leading_zeros()
    }
}
