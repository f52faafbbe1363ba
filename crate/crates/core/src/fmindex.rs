//! FM-index `count` by backward search over a BWT held in any sequence structure.
//!
//! The text is extended with a terminator smaller than every symbol. In the
//! stored BWT the terminator is symbol 1 and text symbol `a` becomes `a + 1`.

use crate::persist::{Persist, Reader, Writer};
use crate::seq::{validate_input, Rsa, SeqIndex, StructureSpec};
use crate::{Error, Result};

/// Suffix array of `text` followed by a terminator smaller than every
/// symbol, by prefix doubling with radix sorting. Entries are 0-based
/// starting positions in `[0, n]`; entry 0 is always `n`.
pub fn suffix_array(text: &[u32]) -> Vec<u32> {
    let n = text.len() + 1;
    assert!(
        n <= u32::MAX as usize,
        "text too long for 32-bit suffix array"
    );
    let mut sa: Vec<u32> = (0..n as u32).collect();
    let key = |i: u32| {
        if (i as usize) < text.len() {
            text[i as usize] as u64 + 1
        } else {
            0
        }
    };
    sa.sort_unstable_by_key(|&i| key(i));
    let mut rank = vec![0u32; n];
    let mut classes = 0u32;
    for t in 0..n {
        if t > 0 && key(sa[t]) != key(sa[t - 1]) {
            classes += 1;
        }
        rank[sa[t] as usize] = classes;
    }
    let mut tmp = vec![0u32; n];
    let mut cnt = vec![0u32; n + 1];
    let mut h = 1usize;
    while (classes as usize) < n - 1 {
        // order by second key: suffixes whose second half is past the end come first
        let mut k = 0;
        for i in n - h.min(n)..n {
            tmp[k] = i as u32;
            k += 1;
        }
        for &p in &sa {
            if p as usize >= h {
                tmp[k] = p - h as u32;
                k += 1;
            }
        }
        // stable counting sort by first key
        cnt[..=classes as usize + 1].fill(0);
        for &r in &rank {
            cnt[r as usize + 1] += 1;
        }
        for c in 1..=classes as usize + 1 {
            cnt[c] += cnt[c - 1];
        }
        for &p in &tmp {
            let r = rank[p as usize] as usize;
            sa[cnt[r] as usize] = p;
            cnt[r] += 1;
        }
        // new ranks
        let second = |i: u32| {
            let j = i as usize + h;
            if j < n {
                rank[j] as i64
            } else {
                -1
            }
        };
        tmp[sa[0] as usize] = 0;
        let mut c = 0u32;
        for t in 1..n {
            let (a, b) = (sa[t - 1], sa[t]);
            if rank[a as usize] != rank[b as usize] || second(a) != second(b) {
                c += 1;
            }
            tmp[b as usize] = c;
        }
        std::mem::swap(&mut rank, &mut tmp);
        classes = c;
        h *= 2;
    }
    sa
}

/// BWT of `text` plus terminator, with the terminator written as 0 and
/// symbols unchanged.
pub fn bwt(text: &[u32]) -> Vec<u32> {
    suffix_array(text)
        .into_iter()
        .map(|p| if p == 0 { 0 } else { text[p as usize - 1] })
        .collect()
}

/// Equal-symbol runs of the BWT.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct BwtStats {
    pub runs: usize,
    /// `runs / n` with `n` the text length.
    pub ratio: f64,
}

pub fn bwt_runs(text: &[u32]) -> BwtStats {
    let b = bwt(text);
    let runs = 1 + b.windows(2).filter(|w| w[0] != w[1]).count();
    BwtStats {
        runs,
        ratio: if text.is_empty() {
            0.0
        } else {
            runs as f64 / text.len() as f64
        },
    }
}

#[derive(Clone, Debug)]
pub struct FmIndex {
    n: usize,
    sigma: u32,
    /// `c[x]` = entries of the stored BWT smaller than `x`, for `x` in `[1, sigma + 2]`.
    c: Vec<u64>,
    bwt: SeqIndex,
}

impl FmIndex {
    pub fn build(text: &[u32], sigma: u32, spec: &StructureSpec) -> Result<Self> {
        validate_input(text, sigma)?;
        if sigma == u32::MAX {
            return Err(Error::param("alphabet too large for a terminator"));
        }
        let stored: Vec<u32> = bwt(text).into_iter().map(|x| x + 1).collect();
        let mut c = vec![0u64; sigma as usize + 3];
        for &x in &stored {
            c[x as usize + 1] += 1;
        }
        for x in 1..c.len() {
            c[x] += c[x - 1];
        }
        let bwt = spec.build(&stored, sigma + 1)?;
        Ok(Self {
            n: text.len(),
            sigma,
            c,
            bwt,
        })
    }

    /// Text length, excluding the terminator.
    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    pub fn sigma(&self) -> u32 {
        self.sigma
    }

    /// The stored BWT (terminator 1, text symbol `a` as `a + 1`).
    pub fn bwt_index(&self) -> &SeqIndex {
        &self.bwt
    }

    pub fn size_in_bits(&self) -> usize {
        self.bwt.size_in_bits() + 64 * self.c.len()
    }

    /// Occurrences of `pattern` in the text, overlaps included. Symbols
    /// outside the alphabet simply do not occur.
    pub fn count(&self, pattern: &[u32]) -> Result<usize> {
        if pattern.is_empty() {
            return Err(Error::param("empty pattern"));
        }
        let (mut sp, mut ep) = (1usize, self.n + 1);
        for &a in pattern.iter().rev() {
            if a == 0 || a > self.sigma {
                return Ok(0);
            }
            let x = a + 1;
            let base = self.c[x as usize] as usize;
            sp = base + self.bwt.rank(x, sp - 1)? + 1;
            ep = base + self.bwt.rank(x, ep)?;
            if sp > ep {
                return Ok(0);
            }
        }
        Ok(ep + 1 - sp)
    }

    /// `LF(i)` for a row `i` of the sorted suffixes.
    pub fn lf(&self, i: usize) -> Result<usize> {
        let x = self.bwt.access(i)?;
        Ok(self.c[x as usize] as usize + self.bwt.rank(x, i)?)
    }

    /// Recovers the text by walking LF from the terminator's row.
    pub fn invert(&self) -> Result<Vec<u32>> {
        let mut out = vec![0u32; self.n];
        let mut i = 1usize;
        for k in (0..self.n).rev() {
            let x = self.bwt.access(i)?;
            if x == 1 {
                return Err(Error::corrupt("terminator reached early"));
            }
            out[k] = x - 1;
            i = self.c[x as usize] as usize + self.bwt.rank(x, i)?;
        }
        Ok(out)
    }
}

impl Persist for FmIndex {
    fn save(&self, w: &mut Writer) {
        w.usize(self.n);
        w.u32(self.sigma);
        w.words(&self.c);
        self.bwt.save(w);
    }

    fn load(r: &mut Reader) -> Result<Self> {
        let n = r.usize()?;
        let sigma = r.u32()?;
        let c = r.words()?;
        let bwt = SeqIndex::load(r)?;
        let shape_ok = sigma < u32::MAX
            && c.len() == sigma as usize + 3
            && bwt.len() == n + 1
            && bwt.sigma() == sigma + 1
            && c[c.len() - 1] == n as u64 + 1
            && c.windows(2).all(|w| w[0] <= w[1]);
        if !shape_ok {
            return Err(Error::corrupt("fm-index shape"));
        }
        for x in 1..=sigma + 1 {
            if c[x as usize + 1] - c[x as usize] != bwt.rank(x, n + 1)? as u64 {
                return Err(Error::corrupt("fm-index symbol counts"));
            }
        }
        Ok(Self { n, sigma, c, bwt })
    }
}
