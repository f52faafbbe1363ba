//! The common query interface and a dynamic wrapper over all structures.

use crate::appart::{ApConfig, ApIndex};
use crate::gcc::{GccConfig, GccIndex};
use crate::huffman::CodeShape;
use crate::persist::{Persist, Reader, Writer};
use crate::wavelet::{BackendPolicy, WaveletMatrix, WaveletTree};
use crate::{Error, Result};

/// Rank, select and access over a sequence `S[1,n]` on `[1, sigma]`.
pub trait Rsa {
    fn len(&self) -> usize;

    fn is_empty(&self) -> bool {
        self.len() == 0
    }

    fn sigma(&self) -> u32;

    /// `S[i]` for `1 <= i <= n`.
    fn access(&self, i: usize) -> Result<u32>;

    /// Occurrences of `a` in `S[1,i]` for `0 <= i <= n`.
    fn rank(&self, a: u32, i: usize) -> Result<usize>;

    /// Position of the `j`-th occurrence of `a`; `select(a, 0) = 0`.
    fn select(&self, a: u32, j: usize) -> Result<usize>;

    fn size_in_bits(&self) -> usize;

    /// The whole sequence.
    fn extract_all(&self) -> Vec<u32> {
        (1..=self.len())
            .map(|i| self.access(i).expect("position in range"))
            .collect()
    }

    fn bits_per_symbol(&self) -> f64 {
        if self.is_empty() {
            0.0
        } else {
            self.size_in_bits() as f64 / self.len() as f64
        }
    }
}

#[inline]
pub(crate) fn check_access(i: usize, n: usize) -> Result<()> {
    if i == 0 || i > n {
        Err(Error::PositionOutOfRange { pos: i, len: n })
    } else {
        Ok(())
    }
}

#[inline]
pub(crate) fn check_rank(a: u32, i: usize, n: usize, sigma: u32) -> Result<()> {
    check_symbol(a, sigma)?;
    if i > n {
        Err(Error::PositionOutOfRange { pos: i, len: n })
    } else {
        Ok(())
    }
}

#[inline]
pub(crate) fn check_symbol(a: u32, sigma: u32) -> Result<()> {
    if a == 0 || a > sigma {
        Err(Error::InvalidSymbol {
            symbol: a as u64,
            sigma: sigma as u64,
        })
    } else {
        Ok(())
    }
}

/// Validates a raw input sequence over `[1, sigma]`.
pub fn validate_input(s: &[u32], sigma: u32) -> Result<()> {
    if s.is_empty() {
        return Err(Error::EmptyInput);
    }
    if sigma == 0 {
        return Err(Error::param("alphabet size must be positive"));
    }
    if let Some(&bad) = s.iter().find(|&&x| x == 0 || x > sigma) {
        return Err(Error::InvalidSymbol {
            symbol: bad as u64,
            sigma: sigma as u64,
        });
    }
    Ok(())
}

pub(crate) fn rank_error(a: u32, j: usize, count: usize) -> Error {
    Error::RankOutOfRange {
        symbol: a as u64,
        rank: j,
        count,
    }
}

/// How to build a [`SeqIndex`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum StructureSpec {
    Gcc(GccConfig),
    Tree {
        shape: CodeShape,
        arity: u32,
        policy: BackendPolicy,
    },
    Matrix {
        shape: CodeShape,
        arity: u32,
        policy: BackendPolicy,
    },
    Ap(ApConfig),
}

impl StructureSpec {
    pub fn build(&self, s: &[u32], sigma: u32) -> Result<SeqIndex> {
        Ok(match self {
            StructureSpec::Gcc(cfg) => SeqIndex::Gcc(GccIndex::build(s, sigma, *cfg)?),
            StructureSpec::Tree {
                shape,
                arity,
                policy,
            } => SeqIndex::Tree(WaveletTree::build(s, sigma, *shape, *arity, policy)?),
            StructureSpec::Matrix {
                shape,
                arity,
                policy,
            } => SeqIndex::Matrix(WaveletMatrix::build(s, sigma, *shape, *arity, policy)?),
            StructureSpec::Ap(cfg) => SeqIndex::Ap(Box::new(ApIndex::build(s, sigma, cfg)?)),
        })
    }
}

/// Any of the sequence structures behind one type.
#[allow(clippy::large_enum_variant)]
#[derive(Clone, Debug)]
pub enum SeqIndex {
    Gcc(GccIndex),
    Tree(WaveletTree),
    Matrix(WaveletMatrix),
    Ap(Box<ApIndex>),
}

macro_rules! each {
    ($self:ident, $x:ident => $e:expr) => {
        match $self {
            SeqIndex::Gcc($x) => $e,
            SeqIndex::Tree($x) => $e,
            SeqIndex::Matrix($x) => $e,
            SeqIndex::Ap($x) => $e,
        }
    };
}

impl SeqIndex {
    /// Short name of the outer structure.
    pub fn kind_name(&self) -> &'static str {
        match self {
            SeqIndex::Gcc(_) => "gcc",
            SeqIndex::Tree(_) => "tree",
            SeqIndex::Matrix(_) => "matrix",
            SeqIndex::Ap(_) => "ap",
        }
    }
}

impl Rsa for SeqIndex {
    fn len(&self) -> usize {
        each!(self, x => x.len())
    }
    fn sigma(&self) -> u32 {
        each!(self, x => x.sigma())
    }
    #[inline]
    fn access(&self, i: usize) -> Result<u32> {
        each!(self, x => x.access(i))
    }
    #[inline]
    fn rank(&self, a: u32, i: usize) -> Result<usize> {
        each!(self, x => x.rank(a, i))
    }
    #[inline]
    fn select(&self, a: u32, j: usize) -> Result<usize> {
        each!(self, x => x.select(a, j))
    }
    fn size_in_bits(&self) -> usize {
        each!(self, x => x.size_in_bits())
    }
    fn extract_all(&self) -> Vec<u32> {
        each!(self, x => x.extract_all())
    }
}

impl Persist for SeqIndex {
    fn save(&self, w: &mut Writer) {
        match self {
            SeqIndex::Gcc(x) => {
                w.u8(0);
                x.save(w);
            }
            SeqIndex::Tree(x) => {
                w.u8(1);
                x.save(w);
            }
            SeqIndex::Matrix(x) => {
                w.u8(2);
                x.save(w);
            }
            SeqIndex::Ap(x) => {
                w.u8(3);
                x.save(w);
            }
        }
    }

    fn load(r: &mut Reader) -> Result<Self> {
        Ok(match r.u8()? {
            0 => SeqIndex::Gcc(GccIndex::load(r)?),
            1 => SeqIndex::Tree(WaveletTree::load(r)?),
            2 => SeqIndex::Matrix(WaveletMatrix::load(r)?),
            3 => SeqIndex::Ap(Box::new(ApIndex::load(r)?)),
            t => return Err(Error::corrupt(format!("unknown structure tag {t}"))),
        })
    }
}
