use super::RankSelect;
use crate::bitio::{read_delta, write_delta, BitBuffer};
use crate::intvec::IntVector;
use crate::persist::{Persist, Reader, Writer};
use crate::{bits_for, Error, Result};

/// Ones between position samples.
pub const DEFAULT_DELTA_SAMPLE: usize = 128;

/// Sparse bitmap: the gaps between consecutive ones are delta-coded. Every
/// `sample` ones the absolute position and the code pointer are stored.
#[derive(Clone, Debug)]
pub struct DeltaBitmap {
    len: usize,
    ones: usize,
    sample: usize,
    codes: BitBuffer,
    /// 1-based position of one number `k * sample` (0 for `k = 0`).
    samp_pos: IntVector,
    /// Code pointer of the gap leading to one number `k * sample + 1`.
    samp_ptr: IntVector,
}

impl DeltaBitmap {
    pub fn from_bools(bits: &[bool]) -> Self {
        Self::with_sample_rate(bits, DEFAULT_DELTA_SAMPLE)
    }

    pub fn with_sample_rate(bits: &[bool], sample: usize) -> Self {
        let positions: Vec<usize> = bits
            .iter()
            .enumerate()
            .filter(|(_, &b)| b)
            .map(|(i, _)| i + 1)
            .collect();
        Self::from_positions(bits.len(), &positions, sample)
    }

    /// Builds from the sorted 1-based positions of the ones.
    pub fn from_positions(len: usize, positions: &[usize], sample: usize) -> Self {
        let sample = sample.max(1);
        let mut codes = BitBuffer::new();
        let mut pos = Vec::with_capacity(positions.len() / sample + 1);
        let mut ptr = Vec::with_capacity(positions.len() / sample + 1);
        let mut prev = 0usize;
        for (q, &p) in positions.iter().enumerate() {
            assert!(
                p > prev && p <= len,
                "positions must be increasing and within range"
            );
            if q % sample == 0 {
                pos.push(prev as u64);
                ptr.push(codes.len() as u64);
            }
            write_delta(&mut codes, (p - prev) as u64).expect("gap is positive");
            prev = p;
        }
        Self {
            len,
            ones: positions.len(),
            sample,
            samp_pos: IntVector::from_slice_width(&pos, bits_for(len as u64)),
            samp_ptr: IntVector::from_slice_width(&ptr, bits_for(codes.len() as u64)),
            codes,
        }
    }

    #[inline]
    fn gap(&self, ptr: usize) -> (usize, usize) {
        let (g, next) = read_delta(&self.codes, ptr).expect("validated code stream");
        (g as usize, next)
    }

    /// Last sample `k` satisfying `pred(k)`; `pred` must be monotone and hold at 0.
    fn last_sample(&self, pred: impl Fn(usize) -> bool) -> usize {
        let (mut lo, mut hi) = (0, self.samp_pos.len());
        while lo < hi {
            let mid = (lo + hi) / 2;
            if pred(mid) {
                lo = mid + 1;
            } else {
                hi = mid;
            }
        }
        lo - 1
    }

    /// Returns (ones with position `<= i`, position of the last of them).
    fn rank_pos(&self, i: usize) -> (usize, usize) {
        if self.ones == 0 {
            return (0, 0);
        }
        let k = self.last_sample(|k| self.samp_pos.get(k) as usize <= i);
        let mut q = k * self.sample;
        let mut p = self.samp_pos.get(k) as usize;
        let mut ptr = self.samp_ptr.get(k) as usize;
        while q < self.ones {
            let (g, next) = self.gap(ptr);
            if p + g > i {
                break;
            }
            p += g;
            ptr = next;
            q += 1;
        }
        (q, p)
    }
}

impl RankSelect for DeltaBitmap {
    fn len(&self) -> usize {
        self.len
    }

    fn count_ones(&self) -> usize {
        self.ones
    }

    fn get(&self, i: usize) -> bool {
        debug_assert!(i < self.len);
        let (q, p) = self.rank_pos(i + 1);
        q > 0 && p == i + 1
    }

    fn rank1(&self, i: usize) -> usize {
        self.rank_pos(i).0
    }

    fn select1(&self, j: usize) -> Option<usize> {
        if j == 0 {
            return Some(0);
        }
        if j > self.ones {
            return None;
        }
        let k = (j - 1) / self.sample;
        let mut p = self.samp_pos.get(k) as usize;
        let mut ptr = self.samp_ptr.get(k) as usize;
        for _ in k * self.sample..j {
            let (g, next) = self.gap(ptr);
            p += g;
            ptr = next;
        }
        Some(p)
    }

    fn select0(&self, j: usize) -> Option<usize> {
        if j == 0 {
            return Some(0);
        }
        if j > self.len - self.ones {
            return None;
        }
        if self.ones == 0 {
            return Some(j);
        }
        // zeros before the one numbered k * sample is pos - k * sample
        let zeros_at = |k: usize| self.samp_pos.get(k) as usize - k * self.sample;
        let k = self.last_sample(|k| k == 0 || zeros_at(k) < j);
        let mut q = k * self.sample;
        let mut p = self.samp_pos.get(k) as usize;
        let mut ptr = self.samp_ptr.get(k) as usize;
        while q < self.ones {
            let (g, next) = self.gap(ptr);
            // zeros before the next one
            if p + g - (q + 1) >= j {
                break;
            }
            p += g;
            ptr = next;
            q += 1;
        }
        Some(j + q)
    }

    fn size_in_bits(&self) -> usize {
        self.codes.size_in_bits() + self.samp_pos.size_in_bits() + self.samp_ptr.size_in_bits()
    }
}

impl Persist for DeltaBitmap {
    fn save(&self, w: &mut Writer) {
        w.usize(self.len);
        w.usize(self.sample);
        w.usize(self.codes.len());
        w.words(self.codes.words());
    }

    fn load(r: &mut Reader) -> Result<Self> {
        let len = r.usize()?;
        let sample = r.usize()?;
        let code_len = r.usize()?;
        let codes = BitBuffer::from_words(r.words()?, code_len)?;
        if sample == 0 {
            return Err(Error::corrupt("delta bitmap sample rate"));
        }
        let mut positions = Vec::new();
        let (mut ptr, mut p) = (0usize, 0usize);
        while ptr < code_len {
            let (g, next) = read_delta(&codes, ptr)?;
            p = p
                .checked_add(g as usize)
                .filter(|&x| x <= len)
                .ok_or_else(|| Error::corrupt("delta bitmap position out of range"))?;
            positions.push(p);
            ptr = next;
        }
        Ok(Self::from_positions(len, &positions, sample))
    }
}
