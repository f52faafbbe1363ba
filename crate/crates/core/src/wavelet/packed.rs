use crate::intvec::IntVector;
use crate::persist::{Persist, Reader, Writer};
use crate::{bits_for, Error, Result};

const BLOCK: usize = 256;

/// Digits packed at `ceil(lg arity)` bits with, every 256 positions, the
/// number of occurrences of each digit so far.
#[derive(Clone, Debug)]
pub struct PackedDigits {
    arity: u32,
    data: IntVector,
    /// `counts[b * arity + d]` = occurrences of `d` before position `b * 256`.
    counts: IntVector,
}

impl PackedDigits {
    pub fn new(digits: &[u8], arity: u32) -> Self {
        let width = bits_for(arity as u64 - 1);
        let data = IntVector::from_iter_width(digits.iter().map(|&d| d as u64), width);
        let mut acc = vec![0u64; arity as usize];
        let mut counts = Vec::with_capacity((digits.len() / BLOCK + 1) * arity as usize);
        for (i, &d) in digits.iter().enumerate() {
            if i % BLOCK == 0 {
                counts.extend_from_slice(&acc);
            }
            acc[d as usize] += 1;
        }
        if digits.len().is_multiple_of(BLOCK) {
            counts.extend_from_slice(&acc);
        }
        Self {
            arity,
            data,
            counts: IntVector::from_slice_width(&counts, bits_for(digits.len() as u64)),
        }
    }

    pub fn len(&self) -> usize {
        self.data.len()
    }

    pub fn is_empty(&self) -> bool {
        self.data.is_empty()
    }

    #[inline]
    pub fn get(&self, i: usize) -> u8 {
        self.data.get(i) as u8
    }

    /// Occurrences of `d` in positions `[0, i)`.
    pub fn rank(&self, d: u8, i: usize) -> usize {
        let b = i / BLOCK;
        let mut r = self.counts.get(b * self.arity as usize + d as usize) as usize;
        for k in b * BLOCK..i {
            r += (self.data.get(k) == d as u64) as usize;
        }
        r
    }

    /// 1-based position of the `j`-th `d`.
    pub fn select(&self, d: u8, j: usize) -> Option<usize> {
        if j == 0 {
            return Some(0);
        }
        let nblocks = self.counts.len() / self.arity as usize;
        let at = |b: usize| self.counts.get(b * self.arity as usize + d as usize) as usize;
        if at(nblocks - 1) + self.tail_count(d, nblocks - 1) < j {
            return None;
        }
        let (mut lo, mut hi) = (0, nblocks);
        while lo < hi {
            let mid = (lo + hi) / 2;
            if at(mid) < j {
                lo = mid + 1;
            } else {
                hi = mid;
            }
        }
        let b = lo - 1;
        let mut left = j - at(b);
        for k in b * BLOCK..self.len() {
            if self.data.get(k) == d as u64 {
                left -= 1;
                if left == 0 {
                    return Some(k + 1);
                }
            }
        }
        None
    }

    fn tail_count(&self, d: u8, b: usize) -> usize {
        (b * BLOCK..self.len())
            .filter(|&k| self.data.get(k) == d as u64)
            .count()
    }

    pub fn size_in_bits(&self) -> usize {
        self.data.size_in_bits() + self.counts.size_in_bits()
    }
}

impl Persist for PackedDigits {
    fn save(&self, w: &mut Writer) {
        w.u32(self.arity);
        self.data.save(w);
    }

    fn load(r: &mut Reader) -> Result<Self> {
        let arity = r.u32()?;
        let data = IntVector::load(r)?;
        if !(2..=256).contains(&arity) || data.iter().any(|d| d >= arity as u64) {
            return Err(Error::corrupt("packed digits out of range"));
        }
        let digits: Vec<u8> = data.iter().map(|d| d as u8).collect();
        Ok(Self::new(&digits, arity))
    }
}
