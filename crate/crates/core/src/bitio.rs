//! Bit buffers and variable-length integer codes.
//!
//! Bits are addressed from 0; bit `p` lives in word `p / 64` at bit `p % 64`.
//! Fixed-width fields written with [`BitBuffer::write_int`] store their least
//! significant bit first. The prefix codes (gamma, delta) are written in
//! stream order, most significant payload bit first. The unary part of a code
//! for a number of bit length `k` is `k - 1` zeros followed by a one.

use std::fmt;

use crate::{Error, Result};

#[derive(Clone, Default, PartialEq, Eq)]
pub struct BitBuffer {
    words: Vec<u64>,
    len: usize,
}

impl BitBuffer {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn with_capacity(bits: usize) -> Self {
        Self {
            words: Vec::with_capacity(bits.div_ceil(64)),
            len: 0,
        }
    }

    /// A buffer of `len` zero bits.
    pub fn zeros(len: usize) -> Self {
        Self {
            words: vec![0; len.div_ceil(64)],
            len,
        }
    }

    pub fn from_words(words: Vec<u64>, len: usize) -> Result<Self> {
        if words.len() != len.div_ceil(64) {
            return Err(Error::corrupt("bit buffer word count mismatch"));
        }
        let mut buf = Self { words, len };
        buf.clear_tail();
        Ok(buf)
    }

    pub fn from_bits<I: IntoIterator<Item = bool>>(bits: I) -> Self {
        let mut buf = Self::new();
        for b in bits {
            buf.push(b);
        }
        buf
    }

    /// Parses a string of `'0'`/`'1'` characters; other characters are ignored.
    pub fn from_bit_str(s: &str) -> Self {
        Self::from_bits(
            s.chars()
                .filter(|c| *c == '0' || *c == '1')
                .map(|c| c == '1'),
        )
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn words(&self) -> &[u64] {
        &self.words
    }

    pub fn into_words(self) -> Vec<u64> {
        self.words
    }

    fn clear_tail(&mut self) {
        let rem = self.len % 64;
        if rem != 0 {
            if let Some(last) = self.words.last_mut() {
                *last &= (1u64 << rem) - 1;
            }
        }
    }

    #[inline]
    pub fn push(&mut self, bit: bool) {
        let off = self.len % 64;
        if off == 0 {
            self.words.push(0);
        }
        if bit {
            *self.words.last_mut().unwrap() |= 1u64 << off;
        }
        self.len += 1;
    }

    #[inline]
    pub fn get(&self, pos: usize) -> bool {
        debug_assert!(pos < self.len);
        (self.words[pos / 64] >> (pos % 64)) & 1 == 1
    }

    #[inline]
    pub fn set(&mut self, pos: usize, bit: bool) {
        debug_assert!(pos < self.len);
        let mask = 1u64 << (pos % 64);
        if bit {
            self.words[pos / 64] |= mask;
        } else {
            self.words[pos / 64] &= !mask;
        }
    }

    /// Appends the `width` low bits of `value`, least significant first.
    #[inline]
    pub fn append_int(&mut self, value: u64, width: usize) {
        if width == 0 {
            return;
        }
        debug_assert!(width <= 64);
        let pos = self.len;
        let new_len = pos + width;
        while self.words.len() < new_len.div_ceil(64) {
            self.words.push(0);
        }
        self.len = new_len;
        self.write_int(pos, value, width);
    }

    /// Overwrites `width` bits at `pos` with the low bits of `value`.
    #[inline]
    pub fn write_int(&mut self, pos: usize, value: u64, width: usize) {
        if width == 0 {
            return;
        }
        debug_assert!(pos + width <= self.len);
        let value = if width == 64 {
            value
        } else {
            value & ((1u64 << width) - 1)
        };
        let w = pos / 64;
        let off = pos % 64;
        let low_mask = if width == 64 {
            u64::MAX
        } else {
            (1u64 << width) - 1
        };
        self.words[w] &= !(low_mask << off);
        self.words[w] |= value << off;
        if off + width > 64 {
            let spill = off + width - 64;
            let hi_mask = (1u64 << spill) - 1;
            self.words[w + 1] &= !hi_mask;
            self.words[w + 1] |= value >> (64 - off);
        }
    }

    /// Reads `width` bits at `pos` as an integer (least significant bit first).
    #[inline]
    pub fn read_int(&self, pos: usize, width: usize) -> u64 {
        read_field(&self.words, pos, width)
    }

    /// Appends `width` low bits of `value`, most significant first.
    pub fn append_msb(&mut self, value: u64, width: usize) {
        if width == 0 {
            return;
        }
        let rev = value.reverse_bits() >> (64 - width);
        self.append_int(rev, width);
    }

    /// Reads `width` bits at `pos` interpreting the first as most significant.
    pub fn read_msb(&self, pos: usize, width: usize) -> u64 {
        if width == 0 {
            return 0;
        }
        self.read_int(pos, width).reverse_bits() >> (64 - width)
    }

    /// Counts zeros starting at `pos` up to the next one bit. Returns the
    /// number of zeros, or `None` if the buffer ends first.
    pub fn count_zeros_from(&self, pos: usize) -> Option<usize> {
        let mut p = pos;
        while p < self.len {
            let w = self.words[p / 64] >> (p % 64);
            if w != 0 {
                let z = w.trailing_zeros() as usize;
                return if p + z < self.len {
                    Some(p + z - pos)
                } else {
                    None
                };
            }
            p = (p / 64 + 1) * 64;
        }
        None
    }

    pub fn size_in_bits(&self) -> usize {
        self.words.len() * 64
    }

    pub fn iter(&self) -> impl Iterator<Item = bool> + '_ {
        (0..self.len).map(move |i| self.get(i))
    }

    pub fn to_bit_string(&self) -> String {
        self.iter().map(|b| if b { '1' } else { '0' }).collect()
    }
}

impl fmt::Debug for BitBuffer {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "BitBuffer({})", self.to_bit_string())
    }
}

#[inline]
pub(crate) fn read_field(words: &[u64], pos: usize, width: usize) -> u64 {
    if width == 0 {
        return 0;
    }
    let w = pos / 64;
    let off = pos % 64;
    let mut v = words[w] >> off;
    if off + width > 64 {
        v |= words[w + 1] << (64 - off);
    }
    if width == 64 {
        v
    } else {
        v & ((1u64 << width) - 1)
    }
}

/// Bit length of `x`, `|x| = floor(lg x) + 1` for `x >= 1`.
#[inline]
fn bit_len(x: u64) -> usize {
    64 - x.leading_zeros() as usize
}

pub fn write_gamma(buf: &mut BitBuffer, x: u64) -> Result<()> {
    if x == 0 {
        return Err(Error::param("gamma code is undefined for 0"));
    }
    let k = bit_len(x);
    buf.append_int(0, k - 1);
    buf.push(true);
    buf.append_msb(x, k - 1);
    Ok(())
}

pub fn read_gamma(buf: &BitBuffer, pos: usize) -> Result<(u64, usize)> {
    let zeros = buf.count_zeros_from(pos).ok_or(Error::Truncated(pos))?;
    if zeros > 63 {
        return Err(Error::corrupt("gamma code longer than 64 bits"));
    }
    let payload = pos + zeros + 1;
    if payload + zeros > buf.len() {
        return Err(Error::Truncated(pos));
    }
    let low = buf.read_msb(payload, zeros);
    Ok(((1u64 << zeros) | low, payload + zeros))
}

pub fn write_delta(buf: &mut BitBuffer, x: u64) -> Result<()> {
    if x == 0 {
        return Err(Error::param("delta code is undefined for 0"));
    }
    let k = bit_len(x);
    write_gamma(buf, k as u64)?;
    buf.append_msb(x, k - 1);
    Ok(())
}

pub fn read_delta(buf: &BitBuffer, pos: usize) -> Result<(u64, usize)> {
    let (k, payload) = read_gamma(buf, pos)?;
    if k == 0 || k > 64 {
        return Err(Error::corrupt("delta code length out of range"));
    }
    let low_bits = (k - 1) as usize;
    if payload + low_bits > buf.len() {
        return Err(Error::Truncated(pos));
    }
    let low = buf.read_msb(payload, low_bits);
    let high = if low_bits == 64 { 0 } else { 1u64 << low_bits };
    Ok((high | low, payload + low_bits))
}

pub fn encode_gamma(x: u64) -> Result<BitBuffer> {
    let mut b = BitBuffer::new();
    write_gamma(&mut b, x)?;
    Ok(b)
}

pub fn decode_gamma(buf: &BitBuffer, pos: usize) -> Result<(u64, usize)> {
    read_gamma(buf, pos)
}

pub fn encode_delta(x: u64) -> Result<BitBuffer> {
    let mut b = BitBuffer::new();
    write_delta(&mut b, x)?;
    Ok(b)
}

pub fn decode_delta(buf: &BitBuffer, pos: usize) -> Result<(u64, usize)> {
    read_delta(buf, pos)
}

/// Appends the VByte code of `x`: 7-bit chunks, least significant first; the
/// high bit of each byte is set iff another byte follows.
pub fn encode_vbyte(mut x: u64, out: &mut Vec<u8>) {
    loop {
        let chunk = (x & 0x7f) as u8;
        x >>= 7;
        if x == 0 {
            out.push(chunk);
            return;
        }
        out.push(chunk | 0x80);
    }
}

pub fn decode_vbyte(bytes: &[u8], pos: usize) -> Result<(u64, usize)> {
    let mut value = 0u64;
    let mut shift = 0u32;
    let mut p = pos;
    loop {
        let byte = *bytes.get(p).ok_or(Error::Truncated(p * 8))?;
        p += 1;
        let chunk = (byte & 0x7f) as u64;
        if shift >= 64 || (shift > 57 && chunk >> (64 - shift) != 0) {
            return Err(Error::corrupt("vbyte value overflows 64 bits"));
        }
        value |= chunk << shift;
        if byte & 0x80 == 0 {
            return Ok((value, p));
        }
        shift += 7;
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn gamma_examples() {
        assert_eq!(encode_gamma(1).unwrap().to_bit_string(), "1");
        assert_eq!(encode_gamma(5).unwrap().to_bit_string(), "00101");
        assert_eq!(encode_gamma(8).unwrap().to_bit_string(), "0001000");
        assert!(encode_gamma(0).is_err());
        for (s, v) in [("1", 1), ("00101", 5), ("0001000", 8)] {
            let b = BitBuffer::from_bit_str(s);
            assert_eq!(decode_gamma(&b, 0).unwrap(), (v, s.len()));
        }
    }

    #[test]
    fn delta_examples() {
        assert_eq!(encode_delta(1).unwrap().to_bit_string(), "1");
        assert_eq!(encode_delta(5).unwrap().to_bit_string(), "01101");
        assert_eq!(encode_delta(17).unwrap().to_bit_string(), "001010001");
        assert!(encode_delta(0).is_err());
        for v in [1u64, 5, 17] {
            let b = encode_delta(v).unwrap();
            assert_eq!(decode_delta(&b, 0).unwrap(), (v, b.len()));
        }
    }

    #[test]
    fn truncated_codes() {
        let b = BitBuffer::from_bit_str("001");
        assert!(matches!(decode_gamma(&b, 0), Err(Error::Truncated(_))));
        let b = BitBuffer::from_bit_str("0000");
        assert!(decode_gamma(&b, 0).is_err());
        let b = BitBuffer::from_bit_str("00101");
        assert!(decode_delta(&b, 0).is_err());
        assert!(decode_vbyte(&[0x80], 0).is_err());
    }

    #[test]
    fn vbyte_examples() {
        let mut out = Vec::new();
        encode_vbyte(127, &mut out);
        assert_eq!(out, [0x7f]);
        out.clear();
        encode_vbyte(128, &mut out);
        assert_eq!(out, [0x80, 0x01]);
        out.clear();
        encode_vbyte(0, &mut out);
        assert_eq!(out, [0x00]);
        for v in [0u64, 127, 128] {
            let mut out = Vec::new();
            encode_vbyte(v, &mut out);
            assert_eq!(decode_vbyte(&out, 0).unwrap(), (v, out.len()));
        }
        let mut out = Vec::new();
        encode_vbyte(u64::MAX, &mut out);
        assert_eq!(decode_vbyte(&out, 0).unwrap().0, u64::MAX);
    }

    #[test]
    fn codes_of_large_values() {
        for v in [u64::MAX, 1 << 63, (1 << 40) + 3] {
            let b = encode_gamma(v).unwrap();
            assert_eq!(decode_gamma(&b, 0).unwrap().0, v);
            let b = encode_delta(v).unwrap();
            assert_eq!(decode_delta(&b, 0).unwrap().0, v);
        }
    }

    #[test]
    fn fields_across_word_boundaries() {
        let mut b = BitBuffer::new();
        b.append_int(0b101, 3);
        b.append_int(u64::MAX, 64);
        b.append_int(0x1234, 13);
        assert_eq!(b.read_int(0, 3), 0b101);
        assert_eq!(b.read_int(3, 64), u64::MAX);
        assert_eq!(b.read_int(67, 13), 0x1234 & 0x1fff);
        b.write_int(60, 0, 8);
        assert_eq!(b.read_int(60, 8), 0);
        assert_eq!(b.read_int(0, 3), 0b101);
        assert_eq!(b.read_int(68, 12), (0x1234 & 0x1fff) >> 1);
    }
}
