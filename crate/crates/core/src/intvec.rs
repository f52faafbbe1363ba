//! Fixed-width packed integer arrays.

use crate::bitio::read_field;
use crate::persist::{Persist, Reader, Writer};
use crate::{bits_for, Error, Result};

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct IntVector {
    words: Vec<u64>,
    width: u8,
    len: usize,
}

impl IntVector {
    pub fn with_width(width: u8) -> Self {
        assert!(width <= 64);
        Self {
            words: Vec::new(),
            width,
            len: 0,
        }
    }

    /// Packs `values` using the smallest width that fits the maximum.
    pub fn from_slice(values: &[u64]) -> Self {
        let max = values.iter().copied().max().unwrap_or(0);
        Self::from_slice_width(values, bits_for(max))
    }

    pub fn from_slice_width(values: &[u64], width: u8) -> Self {
        let mut v = Self::with_width(width);
        v.words
            .reserve((values.len() * width as usize).div_ceil(64));
        for &x in values {
            v.push(x);
        }
        v
    }

    pub fn from_iter_width<I: IntoIterator<Item = u64>>(iter: I, width: u8) -> Self {
        let mut v = Self::with_width(width);
        for x in iter {
            v.push(x);
        }
        v
    }

    #[inline]
    pub fn push(&mut self, value: u64) {
        let w = self.width as usize;
        debug_assert!(
            w == 64 || value >> w == 0,
            "value {value} exceeds width {w}"
        );
        if w == 0 {
            self.len += 1;
            return;
        }
        let pos = self.len * w;
        let end = pos + w;
        while self.words.len() < end.div_ceil(64) {
            self.words.push(0);
        }
        let idx = pos / 64;
        let off = pos % 64;
        self.words[idx] |= value << off;
        if off + w > 64 {
            self.words[idx + 1] |= value >> (64 - off);
        }
        self.len += 1;
    }

    #[inline]
    pub fn get(&self, i: usize) -> u64 {
        debug_assert!(i < self.len);
        read_field(&self.words, i * self.width as usize, self.width as usize)
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn width(&self) -> u8 {
        self.width
    }

    pub fn iter(&self) -> impl Iterator<Item = u64> + '_ {
        (0..self.len).map(move |i| self.get(i))
    }

    /// Payload bits, `len * width`.
    pub fn payload_bits(&self) -> usize {
        self.len * self.width as usize
    }

    pub fn size_in_bits(&self) -> usize {
        self.words.len() * 64
    }
}

impl Persist for IntVector {
    fn save(&self, w: &mut Writer) {
        w.u8(self.width);
        w.usize(self.len);
        w.words(&self.words);
    }

    fn load(r: &mut Reader) -> Result<Self> {
        let width = r.u8()?;
        let len = r.usize()?;
        let words = r.words()?;
        if width > 64 || words.len() != (len * width as usize).div_ceil(64) {
            return Err(Error::corrupt("int vector shape mismatch"));
        }
        Ok(Self { words, width, len })
    }
}
