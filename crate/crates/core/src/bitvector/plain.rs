use super::{select_in_word, RankSelect};
use crate::bitio::BitBuffer;
use crate::persist::{Persist, Reader, Writer};
use crate::{Error, Result};

const WORDS_PER_BLOCK: usize = 8;
const BLOCK_BITS: usize = WORDS_PER_BLOCK * 64;

/// Uncompressed bitmap with one absolute rank counter every 512 bits.
#[derive(Clone, Debug, Default)]
pub struct PlainBitmap {
    words: Vec<u64>,
    len: usize,
    ones: usize,
    /// `counters[k]` = ones before bit `k * 512`, with a final sentinel.
    counters: Vec<u64>,
}

impl PlainBitmap {
    pub fn from_bools(bits: &[bool]) -> Self {
        Self::from_buffer(BitBuffer::from_bits(bits.iter().copied()))
    }

    pub fn from_buffer(buf: BitBuffer) -> Self {
        let len = buf.len();
        Self::from_words_unchecked(buf.into_words(), len)
    }

    fn from_words_unchecked(words: Vec<u64>, len: usize) -> Self {
        let mut counters = Vec::with_capacity(words.len() / WORDS_PER_BLOCK + 1);
        let mut acc = 0u64;
        for (k, w) in words.iter().enumerate() {
            if k % WORDS_PER_BLOCK == 0 {
                counters.push(acc);
            }
            acc += w.count_ones() as u64;
        }
        if words.len().is_multiple_of(WORDS_PER_BLOCK) {
            counters.push(acc);
        }
        Self {
            words,
            len,
            ones: acc as usize,
            counters,
        }
    }

    pub fn words(&self) -> &[u64] {
        &self.words
    }
}

impl RankSelect for PlainBitmap {
    fn len(&self) -> usize {
        self.len
    }

    fn count_ones(&self) -> usize {
        self.ones
    }

    #[inline]
    fn get(&self, i: usize) -> bool {
        debug_assert!(i < self.len);
        (self.words[i / 64] >> (i % 64)) & 1 == 1
    }

    #[inline]
    fn rank1(&self, i: usize) -> usize {
        debug_assert!(i <= self.len);
        let block = i / BLOCK_BITS;
        let mut r = self.counters[block] as usize;
        let last = i / 64;
        for w in &self.words[block * WORDS_PER_BLOCK..last] {
            r += w.count_ones() as usize;
        }
        let rem = i % 64;
        if rem > 0 {
            r += (self.words[last] & ((1u64 << rem) - 1)).count_ones() as usize;
        }
        r
    }

    fn select1(&self, j: usize) -> Option<usize> {
        if j == 0 {
            return Some(0);
        }
        if j > self.ones {
            return None;
        }
        // last block whose counter is < j
        let block = self.counters.partition_point(|&c| (c as usize) < j) - 1;
        let mut left = j - self.counters[block] as usize;
        let mut k = block * WORDS_PER_BLOCK;
        loop {
            let c = self.words[k].count_ones() as usize;
            if c >= left {
                return Some(k * 64 + select_in_word(self.words[k], left as u32) as usize + 1);
            }
            left -= c;
            k += 1;
        }
    }

    fn select0(&self, j: usize) -> Option<usize> {
        if j == 0 {
            return Some(0);
        }
        if j > self.len - self.ones {
            return None;
        }
        let zeros_before = |k: usize| k * BLOCK_BITS - self.counters[k] as usize;
        let block = self.counters.partition_point_idx(|k| zeros_before(k) < j) - 1;
        let mut left = j - zeros_before(block);
        let mut k = block * WORDS_PER_BLOCK;
        loop {
            let inv = !self.words[k];
            let c = inv.count_ones() as usize;
            if c >= left {
                let p = k * 64 + select_in_word(inv, left as u32) as usize + 1;
                return Some(p);
            }
            left -= c;
            k += 1;
        }
    }

    fn size_in_bits(&self) -> usize {
        self.words.len() * 64 + self.counters.len() * 64
    }
}

trait PartitionIdx {
    fn partition_point_idx(&self, pred: impl Fn(usize) -> bool) -> usize;
}

impl<T> PartitionIdx for [T] {
    /// Like `partition_point` but the predicate receives the index.
    fn partition_point_idx(&self, pred: impl Fn(usize) -> bool) -> usize {
        let (mut lo, mut hi) = (0, self.len());
        while lo < hi {
            let mid = (lo + hi) / 2;
            if pred(mid) {
                lo = mid + 1;
            } else {
                hi = mid;
            }
        }
        lo
    }
}

impl Persist for PlainBitmap {
    fn save(&self, w: &mut Writer) {
        w.usize(self.len);
        w.words(&self.words);
    }

    fn load(r: &mut Reader) -> Result<Self> {
        let len = r.usize()?;
        let words = r.words()?;
        // rejects wrong word counts; stray bits past `len` are cleared
        let buf =
            BitBuffer::from_words(words, len).map_err(|_| Error::corrupt("plain bitmap shape"))?;
        Ok(Self::from_buffer(buf))
    }
}
