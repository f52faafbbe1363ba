//! Prefix codes for the wavelet structures.
//!
//! A [`Codebook`] maps each symbol to a string of digits in `[0, arity)`.
//! Codes are either balanced (the bits of `a - 1`, most significant first)
//! or Huffman-shaped (binary or k-ary).
//!
//! Huffman codes are assigned per depth so that they also work for a wavelet
//! matrix. Identify a node at depth `t` with the value `sum_{u<t} c_u k^u`
//! of its digits. At every depth the smallest values are internal nodes,
//! then come the leaves, then the unused slots. For any fixed digit, the
//! children of internal nodes then precede the children that are leaves,
//! which is what the matrix needs to skip leaves when it moves down a level.

use std::cmp::Reverse;
use std::collections::BinaryHeap;

use crate::persist::{Persist, Reader, Writer};
use crate::{ceil_log2, Error, Result};

pub const MAX_ARITY: u32 = 256;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CodeShape {
    Balanced,
    Huffman,
}

#[derive(Clone, Debug)]
pub struct Codebook {
    shape: CodeShape,
    arity: u32,
    sigma: u32,
    /// Code of symbol `a` is `digits[offsets[a - 1]..offsets[a]]`.
    offsets: Vec<u32>,
    digits: Vec<u8>,
    max_len: usize,
    /// Per depth, sorted node values of the leaves and their symbols.
    leaf_vals: Vec<Vec<u128>>,
    leaf_syms: Vec<Vec<u32>>,
}

/// Huffman code lengths for `freqs[a - 1]`, in a tree of the given arity.
/// Absent symbols (frequency 0) get length 0. A lone symbol gets length 1.
/// Ties are broken by `(frequency, creation order)`, leaves ordered by id.
pub fn huffman_lengths(freqs: &[u64], arity: u32) -> Result<Vec<u32>> {
    if !(2..=MAX_ARITY).contains(&arity) {
        return Err(Error::param(format!("arity must be in [2, {MAX_ARITY}]")));
    }
    let k = arity as usize;
    let present: Vec<usize> = (0..freqs.len()).filter(|&a| freqs[a] > 0).collect();
    let mut lens = vec![0u32; freqs.len()];
    let m = present.len();
    if m == 0 {
        return Ok(lens);
    }
    if m == 1 {
        lens[present[0]] = 1;
        return Ok(lens);
    }
    // pad with zero-weight leaves so that every merge takes exactly k nodes
    let dummies = (k - 1 - (m - 1) % (k - 1)) % (k - 1);
    let total = m + dummies;
    let mut parent = vec![usize::MAX; total + total / (k - 1) + 1];
    let mut heap = BinaryHeap::new();
    let mut order = 0usize;
    for _ in 0..dummies {
        heap.push(Reverse((0u64, order, usize::MAX)));
        order += 1;
    }
    for (leaf, &a) in present.iter().enumerate() {
        heap.push(Reverse((freqs[a], order, leaf)));
        order += 1;
    }
    // node ids: leaves 0..m, internal nodes m.. in creation order
    let mut next_id = m;
    while heap.len() > 1 {
        let mut w = 0u64;
        let id = next_id;
        next_id += 1;
        for _ in 0..k {
            let Reverse((f, _, child)) = heap.pop().expect("padding guarantees k nodes");
            w = w.saturating_add(f);
            if child != usize::MAX {
                parent[child] = id;
            }
        }
        heap.push(Reverse((w, order, id)));
        order += 1;
    }
    let root = next_id - 1;
    let mut depth = vec![0u32; next_id];
    for id in (0..root).rev() {
        depth[id] = depth[parent[id]] + 1;
    }
    for (leaf, &a) in present.iter().enumerate() {
        lens[a] = depth[leaf];
    }
    Ok(lens)
}

fn pow_u128(k: u32, t: usize) -> Result<u128> {
    (k as u128)
        .checked_pow(t as u32)
        .ok_or_else(|| Error::param("code too long"))
}

impl Codebook {
    /// Balanced codes: the `w = max(1, ceil(lg sigma))` bits of `a - 1`, cut
    /// into digits of `lg arity` bits from the least significant end, so
    /// the first digit may be narrower. `arity` must be a power of two.
    pub fn balanced(sigma: u32, arity: u32) -> Result<Self> {
        if sigma == 0 {
            return Err(Error::param("alphabet size must be positive"));
        }
        if !(2..=MAX_ARITY).contains(&arity) || !arity.is_power_of_two() {
            return Err(Error::param("balanced codes need a power-of-two arity"));
        }
        let b = arity.trailing_zeros() as usize;
        let w = (ceil_log2(sigma as u64) as usize).max(1);
        let levels = w.div_ceil(b);
        let first = w - (levels - 1) * b;
        let mut offsets = Vec::with_capacity(sigma as usize + 1);
        let mut digits = Vec::with_capacity(sigma as usize * levels);
        offsets.push(0);
        for a in 0..sigma as u64 {
            let mut rem = w;
            for t in 0..levels {
                let width = if t == 0 { first } else { b };
                rem -= width;
                digits.push(((a >> rem) & ((1u64 << width) - 1)) as u8);
            }
            offsets.push(digits.len() as u32);
        }
        Self::finish(CodeShape::Balanced, arity, sigma, offsets, digits)
    }

    /// Huffman codes for `freqs[a - 1]`; absent symbols get no code.
    pub fn huffman(freqs: &[u64], arity: u32) -> Result<Self> {
        let lens = huffman_lengths(freqs, arity)?;
        Self::from_lengths(&lens, arity)
    }

    /// Canonical per-depth assignment for the given code lengths.
    pub fn from_lengths(lens: &[u32], arity: u32) -> Result<Self> {
        if !(2..=MAX_ARITY).contains(&arity) {
            return Err(Error::param(format!("arity must be in [2, {MAX_ARITY}]")));
        }
        let sigma = u32::try_from(lens.len()).map_err(|_| Error::param("alphabet too large"))?;
        let k = arity as usize;
        let max_len = lens.iter().copied().max().unwrap_or(0) as usize;
        pow_u128(arity, max_len)?;
        let mut leaves_at = vec![Vec::new(); max_len + 1];
        for (a, &l) in lens.iter().enumerate() {
            if l > 0 {
                leaves_at[l as usize].push(a as u32 + 1);
            }
        }
        // internal nodes needed per depth, bottom-up
        let mut internal = vec![0usize; max_len + 1];
        for t in (0..max_len).rev() {
            internal[t] = (internal[t + 1] + leaves_at[t + 1].len()).div_ceil(k);
        }
        if max_len > 0 && internal[0] != 1 {
            return Err(Error::param("code lengths violate the Kraft inequality"));
        }
        let mut code_val = vec![0u128; sigma as usize];
        let mut parents: Vec<u128> = vec![0];
        for t in 1..=max_len {
            let weight = pow_u128(arity, t - 1)?;
            let mut slots: Vec<u128> = Vec::with_capacity(parents.len() * k);
            for &p in &parents {
                for d in 0..k as u128 {
                    slots.push(p + d * weight);
                }
            }
            slots.sort_unstable();
            let ni = internal[t];
            for (&sym, &v) in leaves_at[t].iter().zip(&slots[ni..]) {
                code_val[sym as usize - 1] = v;
            }
            slots.truncate(ni);
            parents = slots;
        }
        let mut offsets = Vec::with_capacity(sigma as usize + 1);
        let mut digits = Vec::new();
        offsets.push(0);
        for (a, &l) in lens.iter().enumerate() {
            let mut v = code_val[a];
            for _ in 0..l {
                digits.push((v % k as u128) as u8);
                v /= k as u128;
            }
            offsets.push(digits.len() as u32);
        }
        Self::finish(CodeShape::Huffman, arity, sigma, offsets, digits)
    }

    fn finish(
        shape: CodeShape,
        arity: u32,
        sigma: u32,
        offsets: Vec<u32>,
        digits: Vec<u8>,
    ) -> Result<Self> {
        let mut cb = Self {
            shape,
            arity,
            sigma,
            offsets,
            digits,
            max_len: 0,
            leaf_vals: Vec::new(),
            leaf_syms: Vec::new(),
        };
        cb.max_len = (1..=sigma).map(|a| cb.code(a).len()).max().unwrap_or(0);
        let mut per_depth: Vec<Vec<(u128, u32)>> = vec![Vec::new(); cb.max_len + 1];
        for a in 1..=sigma {
            let c = cb.code(a);
            if !c.is_empty() {
                per_depth[c.len()].push((cb.value(c), a));
            }
        }
        for mut v in per_depth {
            v.sort_unstable();
            cb.leaf_vals.push(v.iter().map(|x| x.0).collect());
            cb.leaf_syms.push(v.iter().map(|x| x.1).collect());
        }
        Ok(cb)
    }

    /// Node value of a digit string, `sum c_t k^t`.
    pub fn value(&self, digits: &[u8]) -> u128 {
        digits
            .iter()
            .rev()
            .fold(0u128, |acc, &d| acc * self.arity as u128 + d as u128)
    }

    pub fn shape(&self) -> CodeShape {
        self.shape
    }

    pub fn arity(&self) -> u32 {
        self.arity
    }

    pub fn sigma(&self) -> u32 {
        self.sigma
    }

    pub fn max_len(&self) -> usize {
        self.max_len
    }

    /// Digits of symbol `a`; empty when `a` has no code.
    #[inline]
    pub fn code(&self, a: u32) -> &[u8] {
        let a = a as usize;
        &self.digits[self.offsets[a - 1] as usize..self.offsets[a] as usize]
    }

    pub fn lengths(&self) -> Vec<u32> {
        (1..=self.sigma)
            .map(|a| self.code(a).len() as u32)
            .collect()
    }

    /// Smallest leaf value at `depth`, if any leaf lives there.
    #[inline]
    pub fn first_leaf(&self, depth: usize) -> Option<u128> {
        self.leaf_vals.get(depth).and_then(|v| v.first().copied())
    }

    /// Symbol whose code has node value `v` at `depth`.
    pub fn leaf_symbol(&self, depth: usize, v: u128) -> Option<u32> {
        let vals = self.leaf_vals.get(depth)?;
        vals.binary_search(&v)
            .ok()
            .map(|k| self.leaf_syms[depth][k])
    }

    /// `k^t` as used in node values.
    pub fn weight(&self, t: usize) -> u128 {
        (self.arity as u128).pow(t as u32)
    }

    /// Sum over symbols of `freqs[a - 1] * |code(a)|`.
    pub fn weighted_length(&self, freqs: &[u64]) -> u64 {
        (1..=self.sigma)
            .map(|a| freqs[a as usize - 1] * self.code(a).len() as u64)
            .sum()
    }

    pub fn size_in_bits(&self) -> usize {
        self.offsets.len() * 32
            + self.digits.len() * 8
            + self.leaf_vals.iter().map(|v| v.len() * 160).sum::<usize>()
    }
}

impl Persist for Codebook {
    fn save(&self, w: &mut Writer) {
        w.u32(self.arity);
        w.u32(self.sigma);
        match self.shape {
            CodeShape::Balanced => w.u8(0),
            CodeShape::Huffman => {
                w.u8(1);
                w.bytes(&self.lengths().iter().map(|&l| l as u8).collect::<Vec<_>>());
            }
        }
    }

    fn load(r: &mut Reader) -> Result<Self> {
        let arity = r.u32()?;
        let sigma = r.u32()?;
        match r.u8()? {
            0 => Self::balanced(sigma, arity),
            1 => {
                let lens: Vec<u32> = r.take(sigma as usize)?.iter().map(|&l| l as u32).collect();
                Self::from_lengths(&lens, arity)
            }
            _ => Err(Error::corrupt("unknown code shape")),
        }
    }
}
