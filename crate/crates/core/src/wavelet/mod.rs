//! Wavelet trees and wavelet matrices.
//!
//! Both decompose a sequence along the digits of a prefix code (see
//! [`crate::huffman`]). A tree keeps one node per code prefix; a matrix keeps
//! one sequence per level and stably sorts the entries by their digit when
//! moving down, so no child pointers are needed. Codes may be balanced or
//! Huffman-shaped, and the arity may exceed 2.
//!
//! Each node or level stores a [`DigitSeq`], whose representation is chosen
//! by a [`BackendPolicy`]: plain, RRR, delta-coded, grammar-compressed, or
//! whichever of grammar, RRR and plain turns out smallest.

mod matrix;
mod packed;
mod tree;

pub use matrix::WaveletMatrix;
pub use packed::PackedDigits;
pub use tree::WaveletTree;

use crate::bitvector::{Bitmap, BitmapKind, RankSelect};
use crate::gcc::{GccConfig, GccIndex};
use crate::huffman::{CodeShape, Codebook};
use crate::persist::{Persist, Reader, Writer};
use crate::seq::Rsa;
use crate::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Backend {
    Plain,
    Rrr,
    Delta,
    Gcc,
    /// The least space among grammar, RRR and plain.
    Smallest,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct BackendPolicy {
    pub backend: Backend,
    /// Configuration of grammar-compressed nodes.
    pub gcc: GccConfig,
    /// With `Gcc`, only the first levels use grammars; deeper ones use RRR.
    pub grammar_levels: Option<usize>,
}

impl BackendPolicy {
    pub fn new(backend: Backend) -> Self {
        Self {
            backend,
            gcc: GccConfig::default(),
            grammar_levels: None,
        }
    }

    fn at_level(&self, level: usize) -> Backend {
        match (self.backend, self.grammar_levels) {
            (Backend::Gcc, Some(cut)) if level >= cut => Backend::Rrr,
            (b, _) => b,
        }
    }
}

/// A sequence over `[0, arity)` with rank and select.
#[derive(Clone, Debug)]
pub enum DigitSeq {
    Bits(Bitmap),
    Packed(PackedDigits),
    /// Balanced binary wavelet tree over `digit + 1`.
    Nested(Box<WaveletTree>),
    /// Grammar-compressed over `digit + 1`.
    Gcc(Box<GccIndex>),
}

impl DigitSeq {
    pub fn build(digits: &[u8], arity: u32, policy: &BackendPolicy, level: usize) -> Result<Self> {
        let nested = |kind: BitmapKind| -> Result<Self> {
            let s: Vec<u32> = digits.iter().map(|&d| d as u32 + 1).collect();
            let inner = BackendPolicy::new(match kind {
                BitmapKind::Plain => Backend::Plain,
                BitmapKind::Rrr => Backend::Rrr,
                BitmapKind::Delta => Backend::Delta,
            });
            Ok(DigitSeq::Nested(Box::new(WaveletTree::build(
                &s,
                arity,
                CodeShape::Balanced,
                2,
                &inner,
            )?)))
        };
        let plain = || -> Self {
            if arity == 2 {
                DigitSeq::Bits(Bitmap::build(BitmapKind::Plain, &to_bools(digits)))
            } else {
                DigitSeq::Packed(PackedDigits::new(digits, arity))
            }
        };
        let compressed = |kind: BitmapKind| -> Result<Self> {
            if digits.is_empty() {
                return Ok(plain());
            }
            if arity == 2 {
                Ok(DigitSeq::Bits(Bitmap::build(kind, &to_bools(digits))))
            } else {
                nested(kind)
            }
        };
        let gcc = |cfg: GccConfig| -> Result<Self> {
            if digits.is_empty() {
                return Ok(plain());
            }
            let s: Vec<u32> = digits.iter().map(|&d| d as u32 + 1).collect();
            Ok(DigitSeq::Gcc(Box::new(GccIndex::build(&s, arity, cfg)?)))
        };
        match policy.at_level(level) {
            Backend::Plain => Ok(plain()),
            Backend::Rrr => compressed(BitmapKind::Rrr),
            Backend::Delta => compressed(BitmapKind::Delta),
            Backend::Gcc => gcc(policy.gcc),
            Backend::Smallest => {
                let mut best = plain();
                for cand in [
                    compressed(BitmapKind::Rrr)?,
                    gcc(GccConfig::sequence(1024, 8, 1))?,
                ] {
                    if cand.size_in_bits() < best.size_in_bits() {
                        best = cand;
                    }
                }
                Ok(best)
            }
        }
    }

    pub fn len(&self) -> usize {
        match self {
            DigitSeq::Bits(b) => b.len(),
            DigitSeq::Packed(p) => p.len(),
            DigitSeq::Nested(t) => t.len(),
            DigitSeq::Gcc(g) => g.len(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Digit at 0-based position `i`.
    #[inline]
    pub fn get(&self, i: usize) -> u8 {
        match self {
            DigitSeq::Bits(b) => b.get(i) as u8,
            DigitSeq::Packed(p) => p.get(i),
            DigitSeq::Nested(t) => t.access(i + 1).expect("position in range") as u8 - 1,
            DigitSeq::Gcc(g) => g.access(i + 1).expect("position in range") as u8 - 1,
        }
    }

    /// Occurrences of `d` among the first `i` digits.
    #[inline]
    pub fn rank(&self, d: u8, i: usize) -> usize {
        match self {
            DigitSeq::Bits(b) => {
                if d == 1 {
                    b.rank1(i)
                } else {
                    b.rank0(i)
                }
            }
            DigitSeq::Packed(p) => p.rank(d, i),
            DigitSeq::Nested(t) => t.rank(d as u32 + 1, i).expect("valid query"),
            DigitSeq::Gcc(g) => g.rank(d as u32 + 1, i).expect("valid query"),
        }
    }

    /// 1-based position of the `j`-th `d`.
    pub fn select(&self, d: u8, j: usize) -> Option<usize> {
        match self {
            DigitSeq::Bits(b) => {
                if d == 1 {
                    b.select1(j)
                } else {
                    b.select0(j)
                }
            }
            DigitSeq::Packed(p) => p.select(d, j),
            DigitSeq::Nested(t) => t.select(d as u32 + 1, j).ok(),
            DigitSeq::Gcc(g) => g.select(d as u32 + 1, j).ok(),
        }
    }

    pub fn size_in_bits(&self) -> usize {
        match self {
            DigitSeq::Bits(b) => b.size_in_bits(),
            DigitSeq::Packed(p) => p.size_in_bits(),
            DigitSeq::Nested(t) => t.size_in_bits(),
            DigitSeq::Gcc(g) => g.size_in_bits(),
        }
    }

    /// Short name of the representation.
    pub fn kind_name(&self) -> &'static str {
        match self {
            DigitSeq::Bits(Bitmap::Plain(_)) => "plain",
            DigitSeq::Bits(Bitmap::Rrr(_)) => "rrr",
            DigitSeq::Bits(Bitmap::Delta(_)) => "delta",
            DigitSeq::Packed(_) => "packed",
            DigitSeq::Nested(_) => "nested",
            DigitSeq::Gcc(_) => "gcc",
        }
    }
}

fn to_bools(digits: &[u8]) -> Vec<bool> {
    digits.iter().map(|&d| d == 1).collect()
}

impl Persist for DigitSeq {
    fn save(&self, w: &mut Writer) {
        match self {
            DigitSeq::Bits(b) => {
                w.u8(0);
                b.save(w);
            }
            DigitSeq::Packed(p) => {
                w.u8(1);
                p.save(w);
            }
            DigitSeq::Nested(t) => {
                w.u8(2);
                t.save(w);
            }
            DigitSeq::Gcc(g) => {
                w.u8(3);
                g.save(w);
            }
        }
    }

    fn load(r: &mut Reader) -> Result<Self> {
        Ok(match r.u8()? {
            0 => DigitSeq::Bits(Bitmap::load(r)?),
            1 => DigitSeq::Packed(PackedDigits::load(r)?),
            2 => DigitSeq::Nested(Box::new(WaveletTree::load(r)?)),
            3 => DigitSeq::Gcc(Box::new(GccIndex::load(r)?)),
            t => return Err(Error::corrupt(format!("unknown digit sequence tag {t}"))),
        })
    }
}

impl Persist for BackendPolicy {
    fn save(&self, w: &mut Writer) {
        w.u8(match self.backend {
            Backend::Plain => 0,
            Backend::Rrr => 1,
            Backend::Delta => 2,
            Backend::Gcc => 3,
            Backend::Smallest => 4,
        });
        self.gcc.save(w);
        w.usize(self.grammar_levels.map_or(usize::MAX, |c| c));
    }

    fn load(r: &mut Reader) -> Result<Self> {
        let backend = match r.u8()? {
            0 => Backend::Plain,
            1 => Backend::Rrr,
            2 => Backend::Delta,
            3 => Backend::Gcc,
            4 => Backend::Smallest,
            _ => return Err(Error::corrupt("unknown backend")),
        };
        let gcc = GccConfig::load(r)?;
        let cut = r.usize()?;
        Ok(Self {
            backend,
            gcc,
            grammar_levels: (cut != usize::MAX).then_some(cut),
        })
    }
}

/// Code table for `s`, balanced over `sigma` or Huffman on the frequencies.
pub(crate) fn make_codes(s: &[u32], sigma: u32, shape: CodeShape, arity: u32) -> Result<Codebook> {
    match shape {
        CodeShape::Balanced => Codebook::balanced(sigma, arity),
        CodeShape::Huffman => {
            let mut freqs = vec![0u64; sigma as usize];
            for &x in s {
                freqs[x as usize - 1] += 1;
            }
            Codebook::huffman(&freqs, arity)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::oracle::NaiveSeq;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn policies() -> Vec<BackendPolicy> {
        let small_gcc = BackendPolicy {
            backend: Backend::Gcc,
            gcc: GccConfig::sequence(8, 2, 1),
            grammar_levels: None,
        };
        let cut = BackendPolicy {
            grammar_levels: Some(1),
            ..small_gcc
        };
        vec![
            BackendPolicy::new(Backend::Plain),
            BackendPolicy::new(Backend::Rrr),
            BackendPolicy::new(Backend::Delta),
            small_gcc,
            cut,
            BackendPolicy::new(Backend::Smallest),
        ]
    }

    fn check<T: Rsa>(idx: &T, s: &[u32], sigma: u32, what: &str) {
        let naive = NaiveSeq::new(s.to_vec(), sigma);
        assert_eq!(idx.len(), s.len());
        for i in 1..=s.len() {
            assert_eq!(idx.access(i).unwrap(), s[i - 1], "{what} access {i}");
        }
        for a in 1..=sigma {
            for i in 0..=s.len() {
                assert_eq!(
                    idx.rank(a, i).unwrap(),
                    naive.rank(a, i),
                    "{what} rank {a} {i}"
                );
            }
            let c = naive.count(a);
            for j in 0..=c {
                assert_eq!(
                    Some(idx.select(a, j).unwrap()),
                    naive.select(a, j),
                    "{what} select {a} {j}"
                );
            }
            assert!(idx.select(a, c + 1).is_err());
        }
        assert!(idx.access(0).is_err());
        assert!(idx.rank(sigma + 1, 0).is_err());
        assert!(idx.rank(1, s.len() + 1).is_err());
    }

    fn check_all_variants(s: &[u32], sigma: u32) {
        for policy in policies() {
            for shape in [CodeShape::Balanced, CodeShape::Huffman] {
                for arity in [2u32, 4, 16] {
                    let what = format!("{shape:?} arity {arity} {:?}", policy.backend);
                    let t = WaveletTree::build(s, sigma, shape, arity, &policy).unwrap();
                    check(&t, s, sigma, &format!("tree {what}"));
                    let m = WaveletMatrix::build(s, sigma, shape, arity, &policy).unwrap();
                    check(&m, s, sigma, &format!("matrix {what}"));
                }
            }
        }
    }

    const FIG: [u32; 13] = [5, 8, 7, 6, 4, 3, 2, 1, 3, 2, 5, 2, 8];

    #[test]
    fn figure_sequence() {
        let p = BackendPolicy::new(Backend::Plain);
        let t = WaveletTree::build(&FIG, 8, CodeShape::Balanced, 2, &p).unwrap();
        let m = WaveletMatrix::build(&FIG, 8, CodeShape::Balanced, 2, &p).unwrap();
        for idx in [&t as &dyn Rsa, &m as &dyn Rsa] {
            assert_eq!(idx.access(4).unwrap(), 6);
            assert_eq!(idx.rank(2, 13).unwrap(), 3);
            assert_eq!(idx.select(8, 2).unwrap(), 13);
        }
        assert_eq!(t.depth(), 3);
        assert_eq!(m.num_levels(), 3);
        let m4 = WaveletMatrix::build(&FIG, 8, CodeShape::Balanced, 4, &p).unwrap();
        assert_eq!(m4.num_levels(), 2);
        let t4 = WaveletTree::build(&FIG, 8, CodeShape::Balanced, 4, &p).unwrap();
        assert_eq!(t4.depth(), 2);
        // first level of the balanced binary matrix holds the top bit of a - 1
        let top: String = FIG
            .iter()
            .map(|&a| if (a - 1) >> 2 & 1 == 1 { '1' } else { '0' })
            .collect();
        assert_eq!(m.level_bits(0), top);
        check_all_variants(&FIG, 8);
    }

    #[test]
    fn binary_alphabet_single_node() {
        let s = [1, 2, 2, 1, 2];
        let t = WaveletTree::build(
            &s,
            2,
            CodeShape::Balanced,
            2,
            &BackendPolicy::new(Backend::Plain),
        )
        .unwrap();
        assert_eq!(t.num_nodes(), 1);
        check_all_variants(&s, 2);
    }

    #[test]
    fn unary_and_sparse_alphabets() {
        check_all_variants(&[1, 1, 1], 1);
        check_all_variants(&[3, 3, 7, 3], 9);
        check_all_variants(&[5], 5);
    }

    #[test]
    fn random_sequences() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for &sigma in &[3u32, 4, 17, 40] {
            let s: Vec<u32> = (0..150)
                .map(|_| {
                    // skewed so Huffman shapes are irregular
                    let x: f64 = rng.gen();
                    ((x * x * x * sigma as f64) as u32).min(sigma - 1) + 1
                })
                .collect();
            check_all_variants(&s, sigma);
        }
    }

    #[test]
    fn huffman_depth_bounded_by_entropy() {
        let s: Vec<u32> = (0..2000u32)
            .map(|i| [1, 1, 1, 1, 2, 2, 3, 4, 5, 6][(i * 7 % 10) as usize])
            .collect();
        let m = WaveletMatrix::build(
            &s,
            6,
            CodeShape::Huffman,
            2,
            &BackendPolicy::new(Backend::Plain),
        )
        .unwrap();
        let h0 = crate::oracle::naive_entropy(&s, 0);
        assert!(m.average_code_length() <= h0 + 1.0);
    }

    #[test]
    fn persist_roundtrip() {
        let s: Vec<u32> = (0..300u32).map(|i| (i * i % 11) + 1).collect();
        for policy in policies() {
            let t = WaveletTree::build(&s, 11, CodeShape::Huffman, 4, &policy).unwrap();
            let m = WaveletMatrix::build(&s, 11, CodeShape::Huffman, 2, &policy).unwrap();
            let mut w = Writer::new();
            t.save(&mut w);
            m.save(&mut w);
            let bytes = w.into_bytes();
            let mut r = Reader::new(&bytes);
            let t2 = WaveletTree::load(&mut r).unwrap();
            let m2 = WaveletMatrix::load(&mut r).unwrap();
            assert_eq!(t2.extract_all(), s);
            assert_eq!(m2.extract_all(), s);
            assert_eq!(t2.size_in_bits(), t.size_in_bits());
            assert_eq!(m2.size_in_bits(), m.size_in_bits());
        }
    }
}
