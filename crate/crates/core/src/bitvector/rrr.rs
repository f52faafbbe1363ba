use std::sync::OnceLock;

use super::{select_in_word, RankSelect};
use crate::bitio::{read_field, BitBuffer};
use crate::intvec::IntVector;
use crate::persist::{Persist, Reader, Writer};
use crate::{bits_for, Error, Result};

/// Bits per block.
pub const RRR_BLOCK: usize = 15;
/// Blocks per superblock sample.
pub const DEFAULT_RRR_SAMPLE: usize = 32;

const CLASS_BITS: u8 = 4;
const BLOCK_MASK: u64 = (1 << RRR_BLOCK) - 1;

struct Tables {
    /// `offset_bits[c] = ceil(lg C(15, c))`.
    offset_bits: [u8; RRR_BLOCK + 1],
    /// Offset of each 15-bit value within its class.
    encode: Vec<u16>,
    /// `decode[c][o]` is the `o`-th value of class `c` in increasing order.
    decode: Vec<Vec<u16>>,
}

fn tables() -> &'static Tables {
    static T: OnceLock<Tables> = OnceLock::new();
    T.get_or_init(|| {
        let mut decode = vec![Vec::new(); RRR_BLOCK + 1];
        let mut encode = vec![0u16; 1 << RRR_BLOCK];
        for v in 0..(1u32 << RRR_BLOCK) {
            let c = v.count_ones() as usize;
            encode[v as usize] = decode[c].len() as u16;
            decode[c].push(v as u16);
        }
        let mut offset_bits = [0u8; RRR_BLOCK + 1];
        for (c, d) in decode.iter().enumerate() {
            offset_bits[c] = crate::ceil_log2(d.len() as u64) as u8;
        }
        Tables {
            offset_bits,
            encode,
            decode,
        }
    })
}

/// Compressed bitmap in the Raman–Raman–Rao style: each block of 15 bits is
/// stored as its class (popcount) and its offset among the blocks of that
/// class. Every `sample` blocks the absolute rank and the offset pointer are
/// kept.
#[derive(Clone, Debug)]
pub struct RrrBitmap {
    len: usize,
    ones: usize,
    sample: usize,
    classes: IntVector,
    offsets: BitBuffer,
    sb_rank: IntVector,
    sb_ptr: IntVector,
}

impl RrrBitmap {
    pub fn from_bools(bits: &[bool]) -> Self {
        Self::with_sample_rate(bits, DEFAULT_RRR_SAMPLE)
    }

    /// `sample` is the number of blocks between absolute samples.
    pub fn with_sample_rate(bits: &[bool], sample: usize) -> Self {
        let t = tables();
        let sample = sample.max(1);
        let nblocks = bits.len().div_ceil(RRR_BLOCK);
        let mut classes = IntVector::with_width(CLASS_BITS);
        let mut offsets = BitBuffer::new();
        for b in 0..nblocks {
            let mut v = 0u64;
            for (k, &bit) in bits[b * RRR_BLOCK..((b + 1) * RRR_BLOCK).min(bits.len())]
                .iter()
                .enumerate()
            {
                v |= (bit as u64) << k;
            }
            let c = v.count_ones() as usize;
            classes.push(c as u64);
            offsets.append_int(t.encode[v as usize] as u64, t.offset_bits[c] as usize);
        }
        Self::assemble(bits.len(), sample, classes, offsets)
    }

    fn assemble(len: usize, sample: usize, classes: IntVector, offsets: BitBuffer) -> Self {
        let t = tables();
        let mut ranks = Vec::with_capacity(classes.len() / sample + 1);
        let mut ptrs = Vec::with_capacity(classes.len() / sample + 1);
        let (mut r, mut p) = (0u64, 0u64);
        for b in 0..classes.len() {
            if b % sample == 0 {
                ranks.push(r);
                ptrs.push(p);
            }
            let c = classes.get(b);
            r += c;
            p += t.offset_bits[c as usize] as u64;
        }
        ranks.push(r);
        ptrs.push(p);
        Self {
            len,
            ones: r as usize,
            sample,
            classes,
            offsets,
            sb_rank: IntVector::from_slice_width(&ranks, bits_for(r)),
            sb_ptr: IntVector::from_slice_width(&ptrs, bits_for(p)),
        }
    }

    pub fn sample_rate(&self) -> usize {
        self.sample
    }

    /// Returns (ones before block `b`, offset pointer of block `b`).
    #[inline]
    fn seek(&self, b: usize) -> (usize, usize) {
        let t = tables();
        let sb = b / self.sample;
        let mut r = self.sb_rank.get(sb) as usize;
        let mut p = self.sb_ptr.get(sb) as usize;
        for k in sb * self.sample..b {
            let c = self.classes.get(k) as usize;
            r += c;
            p += t.offset_bits[c] as usize;
        }
        (r, p)
    }

    #[inline]
    fn decode_block(&self, b: usize, ptr: usize) -> u64 {
        let t = tables();
        let c = self.classes.get(b) as usize;
        let o = read_field(self.offsets.words(), ptr, t.offset_bits[c] as usize);
        t.decode[c][o as usize] as u64
    }

    /// Scans blocks from superblock `sb` until the `left`-th matching bit;
    /// `ones` selects which bit value is counted.
    fn select_from(&self, sb: usize, mut left: usize, ones: bool) -> usize {
        let t = tables();
        let mut b = sb * self.sample;
        let mut p = self.sb_ptr.get(sb) as usize;
        loop {
            let c = self.classes.get(b) as usize;
            let cnt = if ones { c } else { RRR_BLOCK - c };
            if cnt >= left {
                let mut v = self.decode_block(b, p);
                if !ones {
                    v = !v & BLOCK_MASK;
                }
                return b * RRR_BLOCK + select_in_word(v, left as u32) as usize + 1;
            }
            left -= cnt;
            p += t.offset_bits[c] as usize;
            b += 1;
        }
    }
}

impl RankSelect for RrrBitmap {
    fn len(&self) -> usize {
        self.len
    }

    fn count_ones(&self) -> usize {
        self.ones
    }

    fn get(&self, i: usize) -> bool {
        debug_assert!(i < self.len);
        let b = i / RRR_BLOCK;
        let (_, p) = self.seek(b);
        (self.decode_block(b, p) >> (i % RRR_BLOCK)) & 1 == 1
    }

    fn rank1(&self, i: usize) -> usize {
        debug_assert!(i <= self.len);
        let b = i / RRR_BLOCK;
        let (r, p) = self.seek(b);
        let rem = i % RRR_BLOCK;
        if rem == 0 {
            return r;
        }
        r + (self.decode_block(b, p) & ((1u64 << rem) - 1)).count_ones() as usize
    }

    fn select1(&self, j: usize) -> Option<usize> {
        if j == 0 {
            return Some(0);
        }
        if j > self.ones {
            return None;
        }
        let (mut lo, mut hi) = (0, self.sb_rank.len());
        while lo < hi {
            let mid = (lo + hi) / 2;
            if (self.sb_rank.get(mid) as usize) < j {
                lo = mid + 1;
            } else {
                hi = mid;
            }
        }
        let sb = lo - 1;
        Some(self.select_from(sb, j - self.sb_rank.get(sb) as usize, true))
    }

    fn select0(&self, j: usize) -> Option<usize> {
        if j == 0 {
            return Some(0);
        }
        if j > self.len - self.ones {
            return None;
        }
        // zeros before a superblock, counting block padding; padding only
        // trails the last real bit so it never precedes a wanted zero
        let zeros = |sb: usize| sb * self.sample * RRR_BLOCK - self.sb_rank.get(sb) as usize;
        let (mut lo, mut hi) = (0, self.sb_rank.len());
        while lo < hi {
            let mid = (lo + hi) / 2;
            if zeros(mid) < j {
                lo = mid + 1;
            } else {
                hi = mid;
            }
        }
        let sb = lo - 1;
        Some(self.select_from(sb, j - zeros(sb), false))
    }

    fn size_in_bits(&self) -> usize {
        self.classes.size_in_bits()
            + self.offsets.size_in_bits()
            + self.sb_rank.size_in_bits()
            + self.sb_ptr.size_in_bits()
    }
}

impl Persist for RrrBitmap {
    fn save(&self, w: &mut Writer) {
        w.usize(self.len);
        w.usize(self.sample);
        self.classes.save(w);
        w.usize(self.offsets.len());
        w.words(self.offsets.words());
    }

    fn load(r: &mut Reader) -> Result<Self> {
        let t = tables();
        let len = r.usize()?;
        let sample = r.usize()?;
        let classes = IntVector::load(r)?;
        let off_len = r.usize()?;
        let offsets = BitBuffer::from_words(r.words()?, off_len)?;
        if sample == 0 || classes.width() != CLASS_BITS || classes.len() != len.div_ceil(RRR_BLOCK)
        {
            return Err(Error::corrupt("rrr bitmap shape"));
        }
        let mut p = 0usize;
        for b in 0..classes.len() {
            let c = classes.get(b) as usize;
            if c > RRR_BLOCK {
                return Err(Error::corrupt("rrr class out of range"));
            }
            let w = t.offset_bits[c] as usize;
            if p + w > off_len || read_field(offsets.words(), p, w) as usize >= t.decode[c].len() {
                return Err(Error::corrupt("rrr offset out of range"));
            }
            p += w;
        }
        if p != off_len {
            return Err(Error::corrupt("rrr offset stream length"));
        }
        let bm = Self::assemble(len, sample, classes, offsets);
        // padding bits of the last block must be zero
        if len % RRR_BLOCK != 0 && bm.rank1(len) != bm.ones {
            return Err(Error::corrupt("rrr padding bits set"));
        }
        Ok(bm)
    }
}
