//! Alphabet partitioning.
//!
//! Symbols are ranked by decreasing frequency (ties by id). The `2^cut` most
//! frequent ones are written directly in the class sequence `K`. A symbol of
//! rank `t > 2^cut` belongs to class `floor(lg t)`, so class `j` holds fewer
//! than `2^j` symbols. `M[a]` gives the class (or direct id) of symbol `a`,
//! `K[i] = M[S[i]]`, and each class `j` keeps the subsequence `S_j` of local
//! ids `rank_j(M, a)` of its symbols in text order. Queries compose rank and
//! select on `M`, `K` and `S_j`.
//!
//! In the grammar-compressed variant `K` is a GCC index and so are the first
//! `cut_o` classes; the remaining classes use the fallback representation.
//! The plain variant uses a wavelet tree with RRR bitmaps for `K` and the
//! fallback for every class.

use crate::gcc::GccConfig;
use crate::huffman::CodeShape;
use crate::persist::{Persist, Reader, Writer};
use crate::seq::{
    check_access, check_rank, check_symbol, rank_error, validate_input, Rsa, SeqIndex,
    StructureSpec,
};
use crate::wavelet::{Backend, BackendPolicy, WaveletTree};
use crate::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ApVariant {
    /// `K` on an RRR wavelet tree, every class on the fallback.
    Plain,
    /// `K` and the first `cut_o` classes grammar-compressed.
    Rp,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ApFallback {
    /// Balanced wavelet matrix with plain bitmaps.
    WmPlain,
    /// Balanced wavelet matrix choosing the smallest of grammar, RRR and plain per level.
    WmRp,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ApConfig {
    pub cut: u32,
    pub cut_o: usize,
    pub variant: ApVariant,
    pub fallback: ApFallback,
    pub gcc: GccConfig,
}

impl ApConfig {
    pub fn plain(cut: u32) -> Self {
        Self {
            cut,
            cut_o: 0,
            variant: ApVariant::Plain,
            fallback: ApFallback::WmPlain,
            gcc: GccConfig::default(),
        }
    }

    pub fn rp(cut: u32, cut_o: usize, fallback: ApFallback) -> Self {
        Self {
            cut,
            cut_o,
            variant: ApVariant::Rp,
            fallback,
            gcc: GccConfig::default(),
        }
    }

    fn fallback_spec(&self) -> StructureSpec {
        StructureSpec::Matrix {
            shape: CodeShape::Balanced,
            arity: 2,
            policy: BackendPolicy::new(match self.fallback {
                ApFallback::WmPlain => Backend::Plain,
                ApFallback::WmRp => Backend::Smallest,
            }),
        }
    }
}

/// Frequency-rank partition of an alphabet.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Partition {
    /// Direct symbols in rank order; direct id `t` is `direct[t - 1]`.
    pub direct: Vec<u32>,
    /// `floor(lg t)` of each non-empty class, ascending.
    pub class_levels: Vec<u32>,
    /// `m[a - 1]` = id of symbol `a` in `K`'s alphabet, or `absent_id`.
    pub m: Vec<u32>,
    pub absent_id: u32,
}

impl Partition {
    pub fn new(s: &[u32], sigma: u32, cut: u32) -> Result<Self> {
        if cut > 31 {
            return Err(Error::param("cut must be at most 31"));
        }
        let mut freq = vec![0u64; sigma as usize];
        for &x in s {
            freq[x as usize - 1] += 1;
        }
        let mut order: Vec<u32> = (1..=sigma).filter(|&a| freq[a as usize - 1] > 0).collect();
        order.sort_by_key(|&a| (std::cmp::Reverse(freq[a as usize - 1]), a));
        let ndirect = order.len().min(1usize << cut);
        let direct = order[..ndirect].to_vec();
        let mut class_levels: Vec<u32> = Vec::new();
        let mut level_of = vec![0u32; order.len()];
        for (t0, lvl) in level_of.iter_mut().enumerate().skip(ndirect) {
            let t = t0 as u64 + 1;
            *lvl = 63 - t.leading_zeros();
            if class_levels.last() != Some(lvl) {
                class_levels.push(*lvl);
            }
        }
        let absent_id = (ndirect + class_levels.len() + 1) as u32;
        let mut m = vec![absent_id; sigma as usize];
        for (t0, &a) in order.iter().enumerate() {
            m[a as usize - 1] = if t0 < ndirect {
                t0 as u32 + 1
            } else {
                let c = class_levels
                    .binary_search(&level_of[t0])
                    .expect("class recorded");
                (ndirect + c + 1) as u32
            };
        }
        Ok(Self {
            direct,
            class_levels,
            m,
            absent_id,
        })
    }

    /// Alphabet of `K`: direct ids then classes.
    pub fn k_sigma(&self) -> u32 {
        (self.direct.len() + self.class_levels.len()) as u32
    }
}

#[derive(Clone, Debug)]
pub struct ApIndex {
    n: usize,
    sigma: u32,
    config: ApConfig,
    direct: Vec<u32>,
    absent_id: u32,
    class_levels: Vec<u32>,
    m: WaveletTree,
    k: SeqIndex,
    classes: Vec<SeqIndex>,
}

impl ApIndex {
    pub fn build(s: &[u32], sigma: u32, config: &ApConfig) -> Result<Self> {
        validate_input(s, sigma)?;
        let part = Partition::new(s, sigma, config.cut)?;
        let ndirect = part.direct.len() as u32;
        let nclasses = part.class_levels.len();
        let m_sigma = part.absent_id;
        let m = WaveletTree::build(
            &part.m,
            m_sigma,
            CodeShape::Balanced,
            2,
            &BackendPolicy::new(Backend::Plain),
        )?;
        let kseq: Vec<u32> = s.iter().map(|&a| part.m[a as usize - 1]).collect();
        let k_spec = match config.variant {
            ApVariant::Rp => StructureSpec::Gcc(config.gcc),
            ApVariant::Plain => StructureSpec::Tree {
                shape: CodeShape::Balanced,
                arity: 2,
                policy: BackendPolicy::new(Backend::Rrr),
            },
        };
        let k = k_spec.build(&kseq, part.k_sigma())?;
        // local ids: v = rank_j(M, a), i.e. position of a among its class's symbols
        let mut local = vec![0u32; sigma as usize];
        let mut class_size = vec![0u32; nclasses];
        for (slot, &id) in local.iter_mut().zip(&part.m) {
            if id > ndirect && id != part.absent_id {
                let c = (id - ndirect - 1) as usize;
                class_size[c] += 1;
                *slot = class_size[c];
            }
        }
        let mut subseqs: Vec<Vec<u32>> = vec![Vec::new(); nclasses];
        for &a in s {
            let id = part.m[a as usize - 1];
            if id > ndirect {
                subseqs[(id - ndirect - 1) as usize].push(local[a as usize - 1]);
            }
        }
        let mut classes = Vec::with_capacity(nclasses);
        for (c, sub) in subseqs.iter().enumerate() {
            let spec = if config.variant == ApVariant::Rp && c < config.cut_o {
                StructureSpec::Gcc(config.gcc)
            } else {
                config.fallback_spec()
            };
            classes.push(spec.build(sub, class_size[c])?);
        }
        Ok(Self {
            n: s.len(),
            sigma,
            config: *config,
            direct: part.direct,
            absent_id: part.absent_id,
            class_levels: part.class_levels,
            m,
            k,
            classes,
        })
    }

    pub fn config(&self) -> &ApConfig {
        &self.config
    }

    pub fn num_direct(&self) -> usize {
        self.direct.len()
    }

    /// `floor(lg t)` of each non-empty class.
    pub fn class_levels(&self) -> &[u32] {
        &self.class_levels
    }

    pub fn class_seqs(&self) -> &[SeqIndex] {
        &self.classes
    }

    pub fn k_seq(&self) -> &SeqIndex {
        &self.k
    }

    pub fn m_tree(&self) -> &WaveletTree {
        &self.m
    }

    /// Class `(index, local id)` of a symbol, `None` for direct or absent ones.
    fn locate(&self, a: u32) -> Lookup {
        let id = self.m.access(a as usize).expect("symbol checked");
        let nd = self.direct.len() as u32;
        if id == self.absent_id {
            Lookup::Absent
        } else if id <= nd {
            Lookup::Direct(id)
        } else {
            let v = self.m.rank(id, a as usize).expect("symbol in range");
            Lookup::Class(id, v as u32)
        }
    }
}

enum Lookup {
    Absent,
    Direct(u32),
    Class(u32, u32),
}

impl Rsa for ApIndex {
    fn len(&self) -> usize {
        self.n
    }

    fn sigma(&self) -> u32 {
        self.sigma
    }

    fn access(&self, i: usize) -> Result<u32> {
        check_access(i, self.n)?;
        let j = self.k.access(i)?;
        let nd = self.direct.len() as u32;
        if j <= nd {
            return Ok(self.direct[j as usize - 1]);
        }
        let r = self.k.rank(j, i)?;
        let v = self.classes[(j - nd - 1) as usize].access(r)?;
        let a = self.m.select(j, v as usize)?;
        Ok(a as u32)
    }

    fn rank(&self, a: u32, i: usize) -> Result<usize> {
        check_rank(a, i, self.n, self.sigma)?;
        match self.locate(a) {
            Lookup::Absent => Ok(0),
            Lookup::Direct(j) => self.k.rank(j, i),
            Lookup::Class(j, v) => {
                let r = self.k.rank(j, i)?;
                if r == 0 {
                    return Ok(0);
                }
                let nd = self.direct.len() as u32;
                self.classes[(j - nd - 1) as usize].rank(v, r)
            }
        }
    }

    fn select(&self, a: u32, j: usize) -> Result<usize> {
        check_symbol(a, self.sigma)?;
        if j == 0 {
            return Ok(0);
        }
        let out = match self.locate(a) {
            Lookup::Absent => Err(rank_error(a, j, 0)),
            Lookup::Direct(c) => self.k.select(c, j),
            Lookup::Class(c, v) => {
                let nd = self.direct.len() as u32;
                self.classes[(c - nd - 1) as usize]
                    .select(v, j)
                    .and_then(|p| self.k.select(c, p))
            }
        };
        out.map_err(|e| match e {
            Error::RankOutOfRange { .. } => rank_error(a, j, self.rank(a, self.n).unwrap_or(0)),
            other => other,
        })
    }

    fn size_in_bits(&self) -> usize {
        self.m.size_in_bits()
            + self.k.size_in_bits()
            + self.classes.iter().map(|c| c.size_in_bits()).sum::<usize>()
            + 32 * self.direct.len()
    }
}

impl Persist for ApConfig {
    fn save(&self, w: &mut Writer) {
        w.u32(self.cut);
        w.usize(self.cut_o);
        w.u8(match self.variant {
            ApVariant::Plain => 0,
            ApVariant::Rp => 1,
        });
        w.u8(match self.fallback {
            ApFallback::WmPlain => 0,
            ApFallback::WmRp => 1,
        });
        self.gcc.save(w);
    }

    fn load(r: &mut Reader) -> Result<Self> {
        let cut = r.u32()?;
        let cut_o = r.usize()?;
        let variant = match r.u8()? {
            0 => ApVariant::Plain,
            1 => ApVariant::Rp,
            _ => return Err(Error::corrupt("unknown partition variant")),
        };
        let fallback = match r.u8()? {
            0 => ApFallback::WmPlain,
            1 => ApFallback::WmRp,
            _ => return Err(Error::corrupt("unknown partition fallback")),
        };
        Ok(Self {
            cut,
            cut_o,
            variant,
            fallback,
            gcc: GccConfig::load(r)?,
        })
    }
}

impl Persist for ApIndex {
    fn save(&self, w: &mut Writer) {
        w.usize(self.n);
        w.u32(self.sigma);
        self.config.save(w);
        w.u32s(&self.direct);
        w.u32(self.absent_id);
        w.u32s(&self.class_levels);
        self.m.save(w);
        self.k.save(w);
        w.seq(&self.classes);
    }

    fn load(r: &mut Reader) -> Result<Self> {
        let n = r.usize()?;
        let sigma = r.u32()?;
        let config = ApConfig::load(r)?;
        let direct = r.u32s()?;
        let absent_id = r.u32()?;
        let class_levels = r.u32s()?;
        let m = WaveletTree::load(r)?;
        let k = SeqIndex::load(r)?;
        let classes: Vec<SeqIndex> = r.seq()?;
        let nd = direct.len();
        if m.len() != sigma as usize
            || m.sigma() != absent_id
            || absent_id as usize != nd + classes.len() + 1
            || class_levels.len() != classes.len()
            || k.len() != n
            || k.sigma() as usize != nd + classes.len()
            || direct.iter().any(|&a| a == 0 || a > sigma)
        {
            return Err(Error::corrupt("alphabet partition shape"));
        }
        for (c, cls) in classes.iter().enumerate() {
            let id = (nd + c + 1) as u32;
            if cls.len() != k.rank(id, n)? || cls.sigma() as usize != m.rank(id, sigma as usize)? {
                return Err(Error::corrupt("alphabet partition class shape"));
            }
        }
        Ok(Self {
            n,
            sigma,
            config,
            direct,
            absent_id,
            class_levels,
            m,
            k,
            classes,
        })
    }
}
