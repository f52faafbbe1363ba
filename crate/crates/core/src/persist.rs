//! Little-endian binary encoding used by the index container.
//!
//! Integers are written little-endian at their natural width, `usize` as
//! 64 bits, and bit arrays as a word count followed by 64-bit words.

use crate::{Error, Result};

pub trait Persist: Sized {
    fn save(&self, w: &mut Writer);
    fn load(r: &mut Reader) -> Result<Self>;
}

#[derive(Default)]
pub struct Writer {
    buf: Vec<u8>,
}

impl Writer {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn into_bytes(self) -> Vec<u8> {
        self.buf
    }

    pub fn bytes(&mut self, b: &[u8]) {
        self.buf.extend_from_slice(b);
    }

    pub fn u8(&mut self, v: u8) {
        self.buf.push(v);
    }

    pub fn bool(&mut self, v: bool) {
        self.buf.push(v as u8);
    }

    pub fn u16(&mut self, v: u16) {
        self.buf.extend_from_slice(&v.to_le_bytes());
    }

    pub fn u32(&mut self, v: u32) {
        self.buf.extend_from_slice(&v.to_le_bytes());
    }

    pub fn u64(&mut self, v: u64) {
        self.buf.extend_from_slice(&v.to_le_bytes());
    }

    pub fn usize(&mut self, v: usize) {
        self.u64(v as u64);
    }

    pub fn words(&mut self, words: &[u64]) {
        self.usize(words.len());
        for &w in words {
            self.u64(w);
        }
    }

    pub fn u32s(&mut self, vals: &[u32]) {
        self.usize(vals.len());
        for &v in vals {
            self.u32(v);
        }
    }

    pub fn seq<T: Persist>(&mut self, items: &[T]) {
        self.usize(items.len());
        for it in items {
            it.save(self);
        }
    }

    pub fn option<T: Persist>(&mut self, item: &Option<T>) {
        match item {
            None => self.u8(0),
            Some(x) => {
                self.u8(1);
                x.save(self);
            }
        }
    }
}

pub struct Reader<'a> {
    buf: &'a [u8],
    pos: usize,
}

impl<'a> Reader<'a> {
    pub fn new(buf: &'a [u8]) -> Self {
        Self { buf, pos: 0 }
    }

    pub fn position(&self) -> usize {
        self.pos
    }

    pub fn remaining(&self) -> usize {
        self.buf.len() - self.pos
    }

    pub fn take(&mut self, n: usize) -> Result<&'a [u8]> {
        if self.remaining() < n {
            return Err(Error::corrupt("unexpected end of data"));
        }
        let s = &self.buf[self.pos..self.pos + n];
        self.pos += n;
        Ok(s)
    }

    pub fn u8(&mut self) -> Result<u8> {
        Ok(self.take(1)?[0])
    }

    pub fn bool(&mut self) -> Result<bool> {
        match self.u8()? {
            0 => Ok(false),
            1 => Ok(true),
            _ => Err(Error::corrupt("invalid boolean")),
        }
    }

    pub fn u16(&mut self) -> Result<u16> {
        Ok(u16::from_le_bytes(self.take(2)?.try_into().unwrap()))
    }

    pub fn u32(&mut self) -> Result<u32> {
        Ok(u32::from_le_bytes(self.take(4)?.try_into().unwrap()))
    }

    pub fn u64(&mut self) -> Result<u64> {
        Ok(u64::from_le_bytes(self.take(8)?.try_into().unwrap()))
    }

    pub fn usize(&mut self) -> Result<usize> {
        let v = self.u64()?;
        usize::try_from(v).map_err(|_| Error::corrupt("length does not fit in usize"))
    }

    /// Reads a length prefix, rejecting values that cannot fit in the
    /// remaining input given a minimum encoded size per element.
    fn len_prefix(&mut self, min_elem_bytes: usize) -> Result<usize> {
        let n = self.usize()?;
        if min_elem_bytes > 0 && n > self.remaining() / min_elem_bytes {
            return Err(Error::corrupt("length prefix exceeds input"));
        }
        Ok(n)
    }

    pub fn words(&mut self) -> Result<Vec<u64>> {
        let n = self.len_prefix(8)?;
        (0..n).map(|_| self.u64()).collect()
    }

    pub fn u32s(&mut self) -> Result<Vec<u32>> {
        let n = self.len_prefix(4)?;
        (0..n).map(|_| self.u32()).collect()
    }

    pub fn seq<T: Persist>(&mut self) -> Result<Vec<T>> {
        let n = self.len_prefix(1)?;
        (0..n).map(|_| T::load(self)).collect()
    }

    pub fn option<T: Persist>(&mut self) -> Result<Option<T>> {
        match self.u8()? {
            0 => Ok(None),
            1 => Ok(Some(T::load(self)?)),
            _ => Err(Error::corrupt("invalid option tag")),
        }
    }
}
