//! Bitmaps with rank and select.
//!
//! Three representations share the [`RankSelect`] interface:
//!
//! | type | space | rank | select |
//! | --- | --- | --- | --- |
//! | [`PlainBitmap`] | `n + n/8` | `O(1)` | `O(log n)` |
//! | [`RrrBitmap`] | `nH0(B) + o(n)` | `O(1)` | `O(log n)` |
//! | [`DeltaBitmap`] | `~ m lg(n/m)` for `m` ones | `O(log m)` | `O(1)` sampled |
//!
//! The raw accessor [`RankSelect::get`] is 0-based. The checked operations
//! follow the crate-wide 1-based conventions: `rank(b, i)` counts `b` in
//! `B[1,i]` and `select(b, j)` returns the position of the `j`-th `b`.

mod delta;
mod plain;
mod rrr;

pub use delta::{DeltaBitmap, DEFAULT_DELTA_SAMPLE};
pub use plain::PlainBitmap;
pub use rrr::{RrrBitmap, DEFAULT_RRR_SAMPLE, RRR_BLOCK};

use crate::persist::{Persist, Reader, Writer};
use crate::{Error, Result};

pub trait RankSelect {
    fn len(&self) -> usize;

    fn is_empty(&self) -> bool {
        self.len() == 0
    }

    fn count_ones(&self) -> usize;

    /// Bit at 0-based position `i`.
    fn get(&self, i: usize) -> bool;

    /// Number of ones in the first `i` bits, `i <= len`.
    fn rank1(&self, i: usize) -> usize;

    fn rank0(&self, i: usize) -> usize {
        i - self.rank1(i)
    }

    /// Position (1-based) of the `j`-th one; `Some(0)` for `j = 0`, `None`
    /// when there are fewer than `j` ones.
    fn select1(&self, j: usize) -> Option<usize>;

    fn select0(&self, j: usize) -> Option<usize>;

    fn size_in_bits(&self) -> usize;

    fn access(&self, i: usize) -> Result<bool> {
        if i == 0 || i > self.len() {
            return Err(Error::PositionOutOfRange {
                pos: i,
                len: self.len(),
            });
        }
        Ok(self.get(i - 1))
    }

    fn rank(&self, bit: bool, i: usize) -> Result<usize> {
        if i > self.len() {
            return Err(Error::PositionOutOfRange {
                pos: i,
                len: self.len(),
            });
        }
        Ok(if bit { self.rank1(i) } else { self.rank0(i) })
    }

    fn select(&self, bit: bool, j: usize) -> Result<usize> {
        let res = if bit {
            self.select1(j)
        } else {
            self.select0(j)
        };
        res.ok_or_else(|| Error::RankOutOfRange {
            symbol: bit as u64,
            rank: j,
            count: if bit {
                self.count_ones()
            } else {
                self.len() - self.count_ones()
            },
        })
    }
}

/// Kind of bitmap representation.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum BitmapKind {
    Plain,
    Rrr,
    Delta,
}

/// Any of the bitmap representations.
#[derive(Clone, Debug)]
pub enum Bitmap {
    Plain(PlainBitmap),
    Rrr(RrrBitmap),
    Delta(DeltaBitmap),
}

impl Bitmap {
    pub fn build(kind: BitmapKind, bits: &[bool]) -> Self {
        match kind {
            BitmapKind::Plain => Bitmap::Plain(PlainBitmap::from_bools(bits)),
            BitmapKind::Rrr => Bitmap::Rrr(RrrBitmap::from_bools(bits)),
            BitmapKind::Delta => Bitmap::Delta(DeltaBitmap::from_bools(bits)),
        }
    }

    pub fn kind(&self) -> BitmapKind {
        match self {
            Bitmap::Plain(_) => BitmapKind::Plain,
            Bitmap::Rrr(_) => BitmapKind::Rrr,
            Bitmap::Delta(_) => BitmapKind::Delta,
        }
    }
}

macro_rules! delegate {
    ($self:ident, $b:ident => $e:expr) => {
        match $self {
            Bitmap::Plain($b) => $e,
            Bitmap::Rrr($b) => $e,
            Bitmap::Delta($b) => $e,
        }
    };
}

impl RankSelect for Bitmap {
    fn len(&self) -> usize {
        delegate!(self, b => b.len())
    }
    fn count_ones(&self) -> usize {
        delegate!(self, b => b.count_ones())
    }
    #[inline]
    fn get(&self, i: usize) -> bool {
        delegate!(self, b => b.get(i))
    }
    #[inline]
    fn rank1(&self, i: usize) -> usize {
        delegate!(self, b => b.rank1(i))
    }
    fn select1(&self, j: usize) -> Option<usize> {
        delegate!(self, b => b.select1(j))
    }
    fn select0(&self, j: usize) -> Option<usize> {
        delegate!(self, b => b.select0(j))
    }
    fn size_in_bits(&self) -> usize {
        delegate!(self, b => b.size_in_bits())
    }
}

impl Persist for Bitmap {
    fn save(&self, w: &mut Writer) {
        match self {
            Bitmap::Plain(b) => {
                w.u8(0);
                b.save(w);
            }
            Bitmap::Rrr(b) => {
                w.u8(1);
                b.save(w);
            }
            Bitmap::Delta(b) => {
                w.u8(2);
                b.save(w);
            }
        }
    }

    fn load(r: &mut Reader) -> Result<Self> {
        Ok(match r.u8()? {
            0 => Bitmap::Plain(PlainBitmap::load(r)?),
            1 => Bitmap::Rrr(RrrBitmap::load(r)?),
            2 => Bitmap::Delta(DeltaBitmap::load(r)?),
            t => return Err(Error::corrupt(format!("unknown bitmap tag {t}"))),
        })
    }
}

/// Select the `k`-th (1-based) set bit of `word`, returning its 0-based index.
#[inline]
pub(crate) fn select_in_word(mut word: u64, k: u32) -> u32 {
    debug_assert!(k >= 1 && k <= word.count_ones());
    for _ in 1..k {
        word &= word - 1;
    }
    word.trailing_zeros()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::oracle::{naive_bit_rank, naive_bit_select};
    use proptest::prelude::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn all_kinds(bits: &[bool]) -> Vec<Bitmap> {
        vec![
            Bitmap::build(BitmapKind::Plain, bits),
            Bitmap::build(BitmapKind::Rrr, bits),
            Bitmap::build(BitmapKind::Delta, bits),
            Bitmap::Rrr(RrrBitmap::with_sample_rate(bits, 2)),
            Bitmap::Delta(DeltaBitmap::with_sample_rate(bits, 3)),
        ]
    }

    fn check_against_oracle(bits: &[bool]) {
        let ones = bits.iter().filter(|&&b| b).count();
        for bm in all_kinds(bits) {
            assert_eq!(bm.len(), bits.len());
            assert_eq!(bm.count_ones(), ones);
            for (i, &b) in bits.iter().enumerate() {
                assert_eq!(bm.get(i), b, "{:?} get {i}", bm.kind());
            }
            for i in 0..=bits.len() {
                assert_eq!(
                    bm.rank1(i),
                    naive_bit_rank(bits, true, i),
                    "{:?} rank1 {i}",
                    bm.kind()
                );
            }
            for j in 0..=ones + 1 {
                assert_eq!(
                    bm.select1(j),
                    naive_bit_select(bits, true, j),
                    "{:?} select1 {j}",
                    bm.kind()
                );
            }
            for j in 0..=(bits.len() - ones) + 1 {
                assert_eq!(
                    bm.select0(j),
                    naive_bit_select(bits, false, j),
                    "{:?} select0 {j}",
                    bm.kind()
                );
            }
        }
    }

    #[test]
    fn small_example() {
        let bits: Vec<bool> = "10110".chars().map(|c| c == '1').collect();
        for bm in all_kinds(&bits) {
            assert_eq!(bm.rank(true, 3).unwrap(), 2);
            assert_eq!(bm.select(false, 2).unwrap(), 5);
            assert_eq!(bm.rank(true, 0).unwrap(), 0);
            assert_eq!(bm.rank(false, 0).unwrap(), 0);
            assert_eq!(bm.select(true, 0).unwrap(), 0);
            assert_eq!(bm.select(false, 0).unwrap(), 0);
            assert!(bm.access(0).is_err());
            assert!(bm.access(6).is_err());
            assert!(bm.rank(true, 6).is_err());
            assert!(bm.select(true, 4).is_err());
            assert!(bm.select(false, 3).is_err());
        }
    }

    #[test]
    fn random_densities_match_oracle() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for &density in &[0.01, 0.1, 0.5, 0.9] {
            for &n in &[0usize, 1, 14, 15, 16, 63, 64, 65, 511, 512, 513, 3000] {
                let bits: Vec<bool> = (0..n).map(|_| rng.gen_bool(density)).collect();
                check_against_oracle(&bits);
            }
        }
    }

    #[test]
    fn rrr_smaller_than_plain_on_sparse() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for &density in &[0.01, 0.1] {
            let bits: Vec<bool> = (0..1_000_000).map(|_| rng.gen_bool(density)).collect();
            let plain = PlainBitmap::from_bools(&bits);
            let rrr = RrrBitmap::from_bools(&bits);
            assert!(
                rrr.size_in_bits() < plain.size_in_bits(),
                "density {density}: rrr {} plain {}",
                rrr.size_in_bits(),
                plain.size_in_bits()
            );
        }
    }

    proptest! {
        #[test]
        fn rank_select_inverse(bits in proptest::collection::vec(any::<bool>(), 0..700)) {
            for bm in all_kinds(&bits) {
                for b in [false, true] {
                    let total = if b { bm.count_ones() } else { bm.len() - bm.count_ones() };
                    for j in 1..=total {
                        let p = bm.select(b, j).unwrap();
                        prop_assert_eq!(bm.rank(b, p).unwrap(), j);
                        prop_assert_eq!(bm.get(p - 1), b);
                    }
                    for i in 0..=bm.len() {
                        let r = bm.rank(b, i).unwrap();
                        prop_assert!(bm.select(b, r).unwrap() <= i);
                    }
                }
            }
        }
    }
}
