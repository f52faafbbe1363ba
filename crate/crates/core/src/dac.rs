//! Directly addressable codes.
//!
//! Each value is cut into chunks, least significant first. Layer `l` holds
//! the `l`-th chunk of every value that reaches it, together with a bitmap
//! telling whether that value continues in layer `l + 1`. Accessing `X[i]`
//! follows `i <- rank1(B_l, i)` down the layers.

use crate::bitvector::{PlainBitmap, RankSelect};
use crate::intvec::IntVector;
use crate::persist::{Persist, Reader, Writer};
use crate::{Error, Result};

/// Chunk widths per layer.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum DacWidths {
    /// The same width for every layer.
    Fixed(u8),
    /// One width per layer; the last one repeats for deeper layers.
    PerLayer(Vec<u8>),
}

impl DacWidths {
    fn width(&self, layer: usize) -> u8 {
        match self {
            DacWidths::Fixed(b) => *b,
            DacWidths::PerLayer(v) => v[layer.min(v.len() - 1)],
        }
    }

    fn validate(&self) -> Result<()> {
        let ok = match self {
            DacWidths::Fixed(b) => (1..=64).contains(b),
            DacWidths::PerLayer(v) => !v.is_empty() && v.iter().all(|b| (1..=64).contains(b)),
        };
        if ok {
            Ok(())
        } else {
            Err(Error::param("chunk widths must be between 1 and 64"))
        }
    }
}

#[derive(Clone, Debug)]
struct Layer {
    chunks: IntVector,
    cont: PlainBitmap,
}

#[derive(Clone, Debug, Default)]
pub struct Dac {
    len: usize,
    layers: Vec<Layer>,
}

impl Dac {
    /// Encodes with widths chosen by [`optimize_widths`].
    pub fn new(values: &[u64]) -> Self {
        Self::with_widths(values, &DacWidths::PerLayer(optimize_widths(values)))
            .expect("optimized widths are valid")
    }

    pub fn with_widths(values: &[u64], widths: &DacWidths) -> Result<Self> {
        widths.validate()?;
        let mut layers = Vec::new();
        let mut cur: Vec<u64> = values.to_vec();
        let mut l = 0;
        while !cur.is_empty() {
            let b = widths.width(l) as u32;
            let mask = if b == 64 { u64::MAX } else { (1u64 << b) - 1 };
            let mut chunks = IntVector::with_width(b as u8);
            let mut cont = Vec::with_capacity(cur.len());
            let mut next = Vec::new();
            for &x in &cur {
                chunks.push(x & mask);
                let rest = x.checked_shr(b).unwrap_or(0);
                cont.push(rest > 0);
                if rest > 0 {
                    next.push(rest);
                }
            }
            layers.push(Layer {
                chunks,
                cont: PlainBitmap::from_bools(&cont),
            });
            cur = next;
            l += 1;
        }
        Ok(Self {
            len: values.len(),
            layers,
        })
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn num_layers(&self) -> usize {
        self.layers.len()
    }

    /// Value at 0-based index `i`.
    #[inline]
    pub fn get(&self, mut i: usize) -> u64 {
        debug_assert!(i < self.len);
        let mut layer = &self.layers[0];
        let mut v = layer.chunks.get(i);
        let mut shift = layer.chunks.width() as u32;
        let mut l = 0;
        while layer.cont.get(i) {
            i = layer.cont.rank1(i);
            l += 1;
            layer = &self.layers[l];
            v |= layer.chunks.get(i) << shift;
            shift += layer.chunks.width() as u32;
        }
        v
    }

    pub fn iter(&self) -> impl Iterator<Item = u64> + '_ {
        (0..self.len).map(move |i| self.get(i))
    }

    /// Chunk values of layer `l`, for inspection.
    pub fn layer_chunks(&self, l: usize) -> Vec<u64> {
        self.layers[l].chunks.iter().collect()
    }

    /// Continuation bits of layer `l` as a `0`/`1` string.
    pub fn layer_bits(&self, l: usize) -> String {
        let c = &self.layers[l].cont;
        (0..c.len())
            .map(|i| if c.get(i) { '1' } else { '0' })
            .collect()
    }

    pub fn size_in_bits(&self) -> usize {
        self.layers
            .iter()
            .map(|l| l.chunks.size_in_bits() + l.cont.size_in_bits())
            .sum()
    }
}

/// Chooses per-layer widths minimizing the payload plus one continuation bit
/// per stored chunk, `sum_layers N_l (b_l + 1)`, by dynamic programming over
/// the bit positions where layers are cut.
pub fn optimize_widths(values: &[u64]) -> Vec<u8> {
    let maxbits = values
        .iter()
        .map(|&x| 64 - x.leading_zeros() as usize)
        .max()
        .unwrap_or(0)
        .max(1);
    // reach[c] = number of values stored in a layer starting at bit c
    let mut hist = vec![0usize; 65];
    for &x in values {
        hist[64 - x.leading_zeros() as usize] += 1;
    }
    let mut reach = vec![0usize; maxbits + 1];
    reach[0] = values.len();
    let mut above = values.len() - hist[0];
    for (c, r) in reach.iter_mut().enumerate().skip(1) {
        above -= hist[c];
        *r = above;
    }
    let mut best = vec![u128::MAX; maxbits + 1];
    let mut choice = vec![0usize; maxbits + 1];
    best[maxbits] = 0;
    for c in (0..maxbits).rev() {
        for nc in c + 1..=maxbits {
            let cost = reach[c] as u128 * (nc - c + 1) as u128 + best[nc];
            if cost < best[c] {
                best[c] = cost;
                choice[c] = nc;
            }
        }
    }
    let mut widths = Vec::new();
    let mut c = 0;
    while c < maxbits {
        widths.push((choice[c] - c) as u8);
        c = choice[c];
    }
    widths
}

impl Persist for Dac {
    fn save(&self, w: &mut Writer) {
        w.usize(self.len);
        w.usize(self.layers.len());
        for l in &self.layers {
            l.chunks.save(w);
            l.cont.save(w);
        }
    }

    fn load(r: &mut Reader) -> Result<Self> {
        let len = r.usize()?;
        let nl = r.usize()?;
        if nl > 64 {
            return Err(Error::corrupt("too many dac layers"));
        }
        let mut layers = Vec::with_capacity(nl);
        let mut expect = len;
        for _ in 0..nl {
            let chunks = IntVector::load(r)?;
            let cont = PlainBitmap::load(r)?;
            if chunks.len() != expect || cont.len() != expect || chunks.width() == 0 {
                return Err(Error::corrupt("dac layer shape"));
            }
            expect = cont.count_ones();
            layers.push(Layer { chunks, cont });
        }
        if expect != 0 || (len > 0 && layers.is_empty()) {
            return Err(Error::corrupt("dac layers incomplete"));
        }
        Ok(Self { len, layers })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn layered_example() {
        let x = [4, 1, 9, 17, 1, 2, 5, 11];
        let d = Dac::with_widths(&x, &DacWidths::Fixed(2)).unwrap();
        assert_eq!(d.num_layers(), 3);
        assert_eq!(d.layer_bits(0), "10110011");
        assert_eq!(d.layer_chunks(0), vec![0, 1, 1, 1, 1, 2, 1, 3]);
        assert_eq!(d.layer_bits(1), "00100");
        assert_eq!(d.layer_chunks(1), vec![1, 2, 0, 1, 2]);
        assert_eq!(d.layer_bits(2), "0");
        assert_eq!(d.layer_chunks(2), vec![1]);
        assert_eq!(d.iter().collect::<Vec<_>>(), x);
    }

    #[test]
    fn zero_width_rejected() {
        assert!(Dac::with_widths(&[1], &DacWidths::Fixed(0)).is_err());
        assert!(Dac::with_widths(&[1], &DacWidths::PerLayer(vec![2, 0])).is_err());
        assert!(Dac::with_widths(&[1], &DacWidths::PerLayer(vec![])).is_err());
    }

    #[test]
    fn zeros_and_extremes() {
        let x = [0, 0, u64::MAX, 1, 0];
        for w in [
            DacWidths::Fixed(1),
            DacWidths::Fixed(7),
            DacWidths::Fixed(64),
            DacWidths::PerLayer(vec![3, 5]),
        ] {
            let d = Dac::with_widths(&x, &w).unwrap();
            assert_eq!(d.iter().collect::<Vec<_>>(), x);
        }
        assert_eq!(Dac::new(&[]).len(), 0);
    }

    #[test]
    fn optimized_widths_not_worse_than_fixed() {
        let x: Vec<u64> = (0..5000u64)
            .map(|i| if i % 17 == 0 { i * 1000 } else { i % 7 })
            .collect();
        let opt = Dac::new(&x);
        assert_eq!(opt.iter().collect::<Vec<_>>(), x);
        let payload = |d: &Dac| -> usize {
            d.layers
                .iter()
                .map(|l| l.chunks.payload_bits() + l.cont.len())
                .sum()
        };
        for b in 1..=24 {
            let f = Dac::with_widths(&x, &DacWidths::Fixed(b)).unwrap();
            assert!(payload(&opt) <= payload(&f), "width {b}");
        }
    }

    proptest! {
        #[test]
        fn roundtrip(x in proptest::collection::vec(any::<u64>().prop_map(|v| v >> (v % 64)), 0..300), b in 1u8..=64) {
            let d = Dac::with_widths(&x, &DacWidths::Fixed(b)).unwrap();
            prop_assert_eq!(d.iter().collect::<Vec<_>>(), x.clone());
            let d = Dac::new(&x);
            prop_assert_eq!(d.iter().collect::<Vec<_>>(), x.clone());
            let mut w = Writer::new();
            d.save(&mut w);
            let bytes = w.into_bytes();
            let back = Dac::load(&mut Reader::new(&bytes)).unwrap();
            prop_assert_eq!(back.iter().collect::<Vec<_>>(), x);
        }
    }
}
