use super::{make_codes, BackendPolicy, DigitSeq};
use crate::huffman::{CodeShape, Codebook};
use crate::persist::{Persist, Reader, Writer};
use crate::seq::{check_access, check_rank, check_symbol, rank_error, validate_input, Rsa};
use crate::{Error, Result};

#[derive(Clone, Debug)]
struct Level {
    seq: DigitSeq,
    /// `starts[d]` = entries moving to the next level with a digit below `d`.
    starts: Vec<u64>,
}

/// Wavelet matrix: one digit sequence per level, entries stably sorted by
/// digit from one level to the next. Entries whose code ends are dropped.
#[derive(Clone, Debug)]
pub struct WaveletMatrix {
    n: usize,
    sigma: u32,
    codes: Codebook,
    levels: Vec<Level>,
}

impl WaveletMatrix {
    pub fn build(
        s: &[u32],
        sigma: u32,
        shape: CodeShape,
        arity: u32,
        policy: &BackendPolicy,
    ) -> Result<Self> {
        validate_input(s, sigma)?;
        let codes = make_codes(s, sigma, shape, arity)?;
        let k = arity as usize;
        let mut cur = s.to_vec();
        let mut levels = Vec::with_capacity(codes.max_len());
        for l in 0..codes.max_len() {
            let digits: Vec<u8> = cur.iter().map(|&a| codes.code(a)[l]).collect();
            let seq = DigitSeq::build(&digits, arity, policy, l)?;
            let mut buckets: Vec<Vec<u32>> = vec![Vec::new(); k];
            for (&a, &d) in cur.iter().zip(&digits) {
                if codes.code(a).len() > l + 1 {
                    buckets[d as usize].push(a);
                }
            }
            let mut starts = Vec::with_capacity(k + 1);
            let mut acc = 0u64;
            for b in &buckets {
                starts.push(acc);
                acc += b.len() as u64;
            }
            starts.push(acc);
            levels.push(Level { seq, starts });
            cur = buckets.concat();
        }
        Ok(Self {
            n: s.len(),
            sigma,
            codes,
            levels,
        })
    }

    pub fn num_levels(&self) -> usize {
        self.levels.len()
    }

    pub fn codes(&self) -> &Codebook {
        &self.codes
    }

    /// Digits of level `l` as a string (binary levels read as `0`/`1`).
    pub fn level_bits(&self, l: usize) -> String {
        let seq = &self.levels[l].seq;
        (0..seq.len())
            .map(|i| char::from_digit(seq.get(i) as u32, 36).unwrap_or('?'))
            .collect()
    }

    /// Representation name of each level.
    pub fn level_kinds(&self) -> Vec<&'static str> {
        self.levels.iter().map(|l| l.seq.kind_name()).collect()
    }

    /// Average code length over the indexed sequence.
    pub fn average_code_length(&self) -> f64 {
        self.levels.iter().map(|l| l.seq.len()).sum::<usize>() as f64 / self.n as f64
    }

    /// Returns the range start and prefix end at the last level of `a`'s
    /// code, for the prefix `[0, i)` of the sequence.
    fn descend(&self, code: &[u8], i: usize) -> (usize, usize) {
        let (mut p, mut e) = (0usize, i);
        for (l, &d) in code[..code.len() - 1].iter().enumerate() {
            let lv = &self.levels[l];
            p = lv.starts[d as usize] as usize + lv.seq.rank(d, p);
            e = lv.starts[d as usize] as usize + lv.seq.rank(d, e);
        }
        (p, e)
    }

    fn rank_unchecked(&self, a: u32, i: usize) -> usize {
        let code = self.codes.code(a);
        if code.is_empty() || i == 0 {
            return 0;
        }
        let (p, e) = self.descend(code, i);
        let last = &self.levels[code.len() - 1].seq;
        let d = code[code.len() - 1];
        last.rank(d, e) - last.rank(d, p)
    }
}

impl Rsa for WaveletMatrix {
    fn len(&self) -> usize {
        self.n
    }

    fn sigma(&self) -> u32 {
        self.sigma
    }

    fn access(&self, i: usize) -> Result<u32> {
        check_access(i, self.n)?;
        let mut pos = i - 1;
        let mut v = 0u128;
        for (l, lv) in self.levels.iter().enumerate() {
            let d = lv.seq.get(pos);
            v += d as u128 * self.codes.weight(l);
            if self.codes.first_leaf(l + 1).is_some_and(|f| v >= f) {
                return self
                    .codes
                    .leaf_symbol(l + 1, v)
                    .ok_or_else(|| Error::corrupt("wavelet matrix reached an unused code"));
            }
            pos = lv.starts[d as usize] as usize + lv.seq.rank(d, pos);
        }
        Err(Error::corrupt(
            "wavelet matrix code runs past the last level",
        ))
    }

    fn rank(&self, a: u32, i: usize) -> Result<usize> {
        check_rank(a, i, self.n, self.sigma)?;
        Ok(self.rank_unchecked(a, i))
    }

    fn select(&self, a: u32, j: usize) -> Result<usize> {
        check_symbol(a, self.sigma)?;
        let count = self.rank_unchecked(a, self.n);
        if j > count {
            return Err(rank_error(a, j, count));
        }
        if j == 0 {
            return Ok(0);
        }
        let code = self.codes.code(a);
        let (p, _) = self.descend(code, 0);
        let last = code.len() - 1;
        let d = code[last];
        let lv = &self.levels[last];
        let mut x = lv
            .seq
            .select(d, lv.seq.rank(d, p) + j)
            .expect("count checked above");
        for l in (0..last).rev() {
            let lv = &self.levels[l];
            let d = code[l];
            x = lv
                .seq
                .select(d, x - lv.starts[d as usize] as usize)
                .expect("entry exists");
        }
        Ok(x)
    }

    fn size_in_bits(&self) -> usize {
        let codes = match self.codes.shape() {
            CodeShape::Balanced => 0,
            CodeShape::Huffman => self.codes.size_in_bits(),
        };
        codes
            + self
                .levels
                .iter()
                .map(|l| l.seq.size_in_bits() + 64 * l.starts.len())
                .sum::<usize>()
    }
}

impl Persist for WaveletMatrix {
    fn save(&self, w: &mut Writer) {
        w.usize(self.n);
        w.u32(self.sigma);
        self.codes.save(w);
        w.usize(self.levels.len());
        for l in &self.levels {
            l.seq.save(w);
            w.words(&l.starts);
        }
    }

    fn load(r: &mut Reader) -> Result<Self> {
        let n = r.usize()?;
        let sigma = r.u32()?;
        let codes = Codebook::load(r)?;
        let count = r.usize()?;
        if codes.sigma() != sigma || count != codes.max_len() {
            return Err(Error::corrupt("wavelet matrix header"));
        }
        let k = codes.arity() as usize;
        let mut levels: Vec<Level> = Vec::with_capacity(count);
        let mut expect = n;
        for _ in 0..count {
            let seq = DigitSeq::load(r)?;
            let starts = r.words()?;
            if seq.len() != expect
                || starts.len() != k + 1
                || starts.windows(2).any(|w| w[0] > w[1])
            {
                return Err(Error::corrupt("wavelet matrix level shape"));
            }
            expect = starts[k] as usize;
            levels.push(Level { seq, starts });
        }
        if expect != 0 {
            return Err(Error::corrupt("wavelet matrix levels incomplete"));
        }
        Ok(Self {
            n,
            sigma,
            codes,
            levels,
        })
    }
}
