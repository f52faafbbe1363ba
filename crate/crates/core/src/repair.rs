//! RePair grammar compression.
//!
//! The compressor repeatedly replaces the most frequent pair of adjacent
//! symbols by a fresh nonterminal, until no pair appears twice. Pair
//! frequencies live in buckets of doubly linked lists, which gives linear
//! expected time. When `balanced` is set, pairs created in the current step
//! are queued behind older pairs of the same frequency, which keeps the
//! parse tree shallow in practice.

use rustc_hash::FxHashMap;

use crate::bitio::{read_field, BitBuffer};
use crate::persist::{Persist, Reader, Writer};
use crate::{ceil_log2, Error, Result};

const NONE: u32 = u32::MAX;
/// Marks positions that are not in any occurrence list.
const UNLISTED: u32 = u32::MAX - 1;

/// Output of RePair: rules numbered from `sigma + 1` and the reduced sequence.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Grammar {
    sigma: u32,
    rules: Vec<(u32, u32)>,
    seq: Vec<u32>,
    n: usize,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct GrammarStats {
    /// Terminals plus rules.
    pub r: usize,
    /// Length of the reduced sequence.
    pub c: usize,
    /// `(2(r - sigma) + c) * ceil(lg r)`.
    pub bits_plain: u64,
    pub height: usize,
}

impl Grammar {
    /// Builds a grammar from its parts, checking that rules only reference
    /// earlier symbols and that `seq` expands to `n` symbols.
    pub fn from_parts(sigma: u32, rules: Vec<(u32, u32)>, seq: Vec<u32>, n: usize) -> Result<Self> {
        let g = Self {
            sigma,
            rules,
            seq,
            n,
        };
        g.validate()?;
        Ok(g)
    }

    fn validate(&self) -> Result<()> {
        if self.sigma == 0 {
            return Err(Error::corrupt("grammar alphabet is empty"));
        }
        for (k, &(l, r)) in self.rules.iter().enumerate() {
            let x = self.sigma as u64 + 1 + k as u64;
            if l == 0 || r == 0 || l as u64 >= x || r as u64 >= x {
                return Err(Error::corrupt(format!(
                    "rule {x} references an invalid symbol"
                )));
            }
        }
        let r = self.r() as u64;
        if self.seq.iter().any(|&x| x == 0 || x as u64 > r) {
            return Err(Error::corrupt(
                "reduced sequence references an invalid symbol",
            ));
        }
        let lens = self.rule_lengths();
        let total: u64 = self.seq.iter().map(|&x| lens[x as usize]).sum();
        if total != self.n as u64 {
            return Err(Error::corrupt("grammar length mismatch"));
        }
        Ok(())
    }

    pub fn sigma(&self) -> u32 {
        self.sigma
    }

    /// Number of terminals plus rules.
    pub fn r(&self) -> usize {
        self.sigma as usize + self.rules.len()
    }

    pub fn c(&self) -> usize {
        self.seq.len()
    }

    /// Length of the original sequence.
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn rules(&self) -> &[(u32, u32)] {
        &self.rules
    }

    pub fn seq(&self) -> &[u32] {
        &self.seq
    }

    /// Right-hand side of nonterminal `x > sigma`.
    #[inline]
    pub fn rule(&self, x: u32) -> (u32, u32) {
        self.rules[(x - self.sigma - 1) as usize]
    }

    /// `lens[x]` is the expansion length of symbol `x`; index 0 is unused.
    pub fn rule_lengths(&self) -> Vec<u64> {
        let mut lens = vec![1u64; self.r() + 1];
        lens[0] = 0;
        for (k, &(l, r)) in self.rules.iter().enumerate() {
            lens[self.sigma as usize + 1 + k] = lens[l as usize] + lens[r as usize];
        }
        lens
    }

    pub fn decompress(&self) -> Vec<u32> {
        let mut out = Vec::with_capacity(self.n);
        let mut stack = Vec::new();
        for &x in &self.seq {
            self.expand_into(x, &mut stack, &mut out, usize::MAX);
        }
        out
    }

    /// First `k` terminals of the expansion of `x`.
    pub fn expand_prefix(&self, x: u32, k: usize) -> Vec<u32> {
        let mut out = Vec::with_capacity(k.min(1 << 16));
        self.expand_into(x, &mut Vec::new(), &mut out, k);
        out
    }

    fn expand_into(&self, x: u32, stack: &mut Vec<u32>, out: &mut Vec<u32>, limit: usize) {
        let stop = out.len().saturating_add(limit);
        stack.clear();
        stack.push(x);
        while let Some(y) = stack.pop() {
            if out.len() >= stop {
                break;
            }
            if y <= self.sigma {
                out.push(y);
            } else {
                let (l, r) = self.rule(y);
                stack.push(r);
                stack.push(l);
            }
        }
    }

    /// Height of each symbol's parse tree; terminals have height 0.
    pub fn rule_heights(&self) -> Vec<u32> {
        let mut h = vec![0u32; self.r() + 1];
        for (k, &(l, r)) in self.rules.iter().enumerate() {
            h[self.sigma as usize + 1 + k] = 1 + h[l as usize].max(h[r as usize]);
        }
        h
    }

    /// Maximum derivation depth over the symbols of the reduced sequence.
    pub fn parse_height(&self) -> usize {
        let h = self.rule_heights();
        self.seq
            .iter()
            .map(|&x| h[x as usize] as usize)
            .max()
            .unwrap_or(0)
    }

    /// Width used for symbols in the plain representation, at least 1.
    pub fn symbol_width(&self) -> usize {
        (ceil_log2(self.r() as u64) as usize).max(1)
    }

    pub fn stats(&self) -> GrammarStats {
        let r = self.r();
        GrammarStats {
            r,
            c: self.c(),
            bits_plain: (2 * self.rules.len() as u64 + self.c() as u64)
                * self.symbol_width() as u64,
            height: self.parse_height(),
        }
    }

    /// Header `sigma, r, c, n` as little-endian 64-bit words, then the rule
    /// pairs and `C` as fixed-width fields of `ceil(lg r)` bits holding
    /// `symbol - 1`.
    pub fn to_bytes(&self) -> Vec<u8> {
        let mut out = Vec::new();
        for v in [
            self.sigma as u64,
            self.r() as u64,
            self.c() as u64,
            self.n as u64,
        ] {
            out.extend_from_slice(&v.to_le_bytes());
        }
        let w = self.symbol_width();
        let mut bits = BitBuffer::with_capacity((2 * self.rules.len() + self.c()) * w);
        for &(l, r) in &self.rules {
            bits.append_int(l as u64 - 1, w);
            bits.append_int(r as u64 - 1, w);
        }
        for &x in &self.seq {
            bits.append_int(x as u64 - 1, w);
        }
        let nbytes = bits.len().div_ceil(8);
        for (k, word) in bits.words().iter().enumerate() {
            let b = word.to_le_bytes();
            let take = (nbytes - 8 * k).min(8);
            out.extend_from_slice(&b[..take]);
        }
        out
    }

    pub fn from_bytes(bytes: &[u8]) -> Result<Self> {
        if bytes.len() < 32 {
            return Err(Error::corrupt("grammar header truncated"));
        }
        let hdr = |k: usize| u64::from_le_bytes(bytes[8 * k..8 * k + 8].try_into().unwrap());
        let (sigma, r, c, n) = (hdr(0), hdr(1), hdr(2), hdr(3));
        if sigma == 0
            || sigma > u32::MAX as u64
            || r < sigma
            || r >= UNLISTED as u64
            || c > u32::MAX as u64
        {
            return Err(Error::corrupt("grammar header out of range"));
        }
        let nrules = (r - sigma) as usize;
        let w = (ceil_log2(r) as usize).max(1);
        let total_bits = (2 * nrules + c as usize)
            .checked_mul(w)
            .ok_or_else(|| Error::corrupt("grammar size overflow"))?;
        let body = &bytes[32..];
        if body.len() != total_bits.div_ceil(8) {
            return Err(Error::corrupt("grammar body length mismatch"));
        }
        let mut words = vec![0u64; body.len().div_ceil(8)];
        for (k, chunk) in body.chunks(8).enumerate() {
            let mut b = [0u8; 8];
            b[..chunk.len()].copy_from_slice(chunk);
            words[k] = u64::from_le_bytes(b);
        }
        let field = |k: usize| read_field(&words, k * w, w) as u32 + 1;
        let rules = (0..nrules)
            .map(|k| (field(2 * k), field(2 * k + 1)))
            .collect();
        let seq = (0..c as usize).map(|k| field(2 * nrules + k)).collect();
        let n = usize::try_from(n).map_err(|_| Error::corrupt("grammar length too large"))?;
        Self::from_parts(sigma as u32, rules, seq, n)
    }
}

impl Persist for Grammar {
    fn save(&self, w: &mut Writer) {
        let b = self.to_bytes();
        w.usize(b.len());
        w.bytes(&b);
    }

    fn load(r: &mut Reader) -> Result<Self> {
        let len = r.usize()?;
        Grammar::from_bytes(r.take(len)?)
    }
}

#[derive(Clone, Copy)]
struct Pair {
    a: u32,
    b: u32,
    freq: u32,
    /// First position in the occurrence list.
    head: u32,
    qprev: u32,
    qnext: u32,
    /// Nonterminal whose creation produced this pair, 0 for initial pairs.
    born: u32,
}

struct Compressor {
    sym: Vec<u32>,
    next: Vec<u32>,
    prev: Vec<u32>,
    occ_next: Vec<u32>,
    occ_prev: Vec<u32>,
    pairs: Vec<Pair>,
    free: Vec<u32>,
    index: FxHashMap<(u32, u32), u32>,
    bucket_head: Vec<u32>,
    bucket_tail: Vec<u32>,
    balanced: bool,
    current: u32,
}

impl Compressor {
    /// Checks every stored frequency against a recount of `C`, where a run
    /// of `len` equal symbols holds `floor(len / 2)` occurrences of its pair.
    #[cfg(test)]
    fn check_counts(&self, x: u32) {
        let mut c = Vec::new();
        let mut i = 0u32;
        while i != NONE {
            c.push(self.sym[i as usize]);
            i = self.next[i as usize];
        }
        let mut counts: FxHashMap<(u32, u32), u32> = FxHashMap::default();
        let mut t = 0;
        while t + 1 < c.len() {
            *counts.entry((c[t], c[t + 1])).or_default() += 1;
            let run = c[t] == c[t + 1] && c.get(t + 2) == Some(&c[t]);
            t += if run { 2 } else { 1 };
        }
        for (k, &want) in &counts {
            let got = self
                .index
                .get(k)
                .map_or(0, |&p| self.pairs[p as usize].freq);
            assert_eq!(got, want, "after rule {x}: pair {k:?} in {c:?}");
        }
        assert_eq!(
            counts.len(),
            self.index.len(),
            "after rule {x}: stale pairs"
        );
    }

    fn bucket_unlink(&mut self, p: u32) {
        let Pair {
            freq, qprev, qnext, ..
        } = self.pairs[p as usize];
        let f = freq as usize;
        if qprev == NONE {
            self.bucket_head[f] = qnext;
        } else {
            self.pairs[qprev as usize].qnext = qnext;
        }
        if qnext == NONE {
            self.bucket_tail[f] = qprev;
        } else {
            self.pairs[qnext as usize].qprev = qprev;
        }
    }

    fn bucket_insert(&mut self, p: u32, at_tail: bool) {
        let f = self.pairs[p as usize].freq as usize;
        if at_tail {
            let t = self.bucket_tail[f];
            self.pairs[p as usize].qprev = t;
            self.pairs[p as usize].qnext = NONE;
            if t == NONE {
                self.bucket_head[f] = p;
            } else {
                self.pairs[t as usize].qnext = p;
            }
            self.bucket_tail[f] = p;
        } else {
            let h = self.bucket_head[f];
            self.pairs[p as usize].qprev = NONE;
            self.pairs[p as usize].qnext = h;
            if h == NONE {
                self.bucket_tail[f] = p;
            } else {
                self.pairs[h as usize].qprev = p;
            }
            self.bucket_head[f] = p;
        }
    }

    /// Adds position `i` as an occurrence of the pair starting there.
    fn add_occurrence(&mut self, i: u32) {
        let j = self.next[i as usize];
        if j == NONE || self.occ_prev[i as usize] != UNLISTED {
            return;
        }
        let (a, b) = (self.sym[i as usize], self.sym[j as usize]);
        if a == b {
            // runs of equal symbols only count every other position
            let h = self.prev[i as usize];
            if h != NONE && self.sym[h as usize] == a && self.occ_prev[h as usize] != UNLISTED {
                return;
            }
            let k = self.next[j as usize];
            if k != NONE && self.sym[k as usize] == a && self.occ_prev[j as usize] != UNLISTED {
                return;
            }
        }
        let p = match self.index.get(&(a, b)) {
            Some(&p) => {
                self.bucket_unlink(p);
                self.pairs[p as usize].freq += 1;
                p
            }
            None => {
                let rec = Pair {
                    a,
                    b,
                    freq: 1,
                    head: NONE,
                    qprev: NONE,
                    qnext: NONE,
                    born: self.current,
                };
                let p = match self.free.pop() {
                    Some(p) => {
                        self.pairs[p as usize] = rec;
                        p
                    }
                    None => {
                        self.pairs.push(rec);
                        (self.pairs.len() - 1) as u32
                    }
                };
                self.index.insert((a, b), p);
                p
            }
        };
        let newly = self.current != 0 && self.pairs[p as usize].born == self.current;
        self.bucket_insert(p, newly && self.balanced);
        let h = self.pairs[p as usize].head;
        self.occ_prev[i as usize] = NONE;
        self.occ_next[i as usize] = h;
        if h != NONE {
            self.occ_prev[h as usize] = i;
        }
        self.pairs[p as usize].head = i;
    }

    /// Removes position `i` from its occurrence list, if listed.
    fn remove_occurrence(&mut self, i: u32) {
        if self.occ_prev[i as usize] == UNLISTED {
            return;
        }
        let j = self.next[i as usize];
        let key = (self.sym[i as usize], self.sym[j as usize]);
        let p = self.index[&key];
        self.unlink_occurrence(p, i);
        self.bucket_unlink(p);
        self.pairs[p as usize].freq -= 1;
        if self.pairs[p as usize].freq == 0 {
            self.index.remove(&key);
            self.free.push(p);
        } else {
            self.bucket_insert(p, false);
        }
    }

    fn unlink_occurrence(&mut self, p: u32, i: u32) {
        let (op, on) = (self.occ_prev[i as usize], self.occ_next[i as usize]);
        if op == NONE {
            self.pairs[p as usize].head = on;
        } else {
            self.occ_next[op as usize] = on;
        }
        if on != NONE {
            self.occ_prev[on as usize] = op;
        }
        self.occ_prev[i as usize] = UNLISTED;
        self.occ_next[i as usize] = UNLISTED;
    }

    fn replace(&mut self, p: u32, x: u32) {
        self.current = x;
        let (a, b) = (self.pairs[p as usize].a, self.pairs[p as usize].b);
        self.bucket_unlink(p);
        // park the pair at frequency 0 so removals from its own list keep
        // the bucket bookkeeping consistent
        self.pairs[p as usize].freq = 0;
        self.bucket_insert(p, false);
        let mut made = Vec::new();
        loop {
            let i = self.pairs[p as usize].head;
            if i == NONE {
                break;
            }
            self.unlink_occurrence(p, i);
            let j = self.next[i as usize];
            debug_assert!(self.sym[i as usize] == a && self.sym[j as usize] == b);
            let h = self.prev[i as usize];
            let k = self.next[j as usize];
            if h != NONE {
                self.remove_occurrence_of_other(h, p);
            }
            if k != NONE {
                self.remove_occurrence_of_other(j, p);
            }
            self.sym[i as usize] = x;
            made.push(i);
            self.next[i as usize] = k;
            if k != NONE {
                self.prev[k as usize] = i;
            }
            self.next[j as usize] = NONE;
            self.prev[j as usize] = NONE;
            if h != NONE {
                self.add_occurrence(h);
            }
            self.add_occurrence(i);
            // a run that lost its first element pairs up from its new start
            if k != NONE && self.sym[k as usize] == b && a != b {
                self.relist_run(k);
            }
        }
        // runs of the new symbol were paired in list order; pair them from the left
        for i in made {
            let h = self.prev[i as usize];
            let j = self.next[i as usize];
            if (h == NONE || self.sym[h as usize] != x) && j != NONE && self.sym[j as usize] == x {
                self.relist_run(i);
            }
        }
        self.bucket_unlink(p);
        self.index.remove(&(a, b));
        self.free.push(p);
    }

    /// Re-pairs the run of equal symbols starting at `start` from its
    /// beginning, so that it counts `floor(len / 2)` occurrences.
    fn relist_run(&mut self, start: u32) {
        let a = self.sym[start as usize];
        let mut t = start;
        while self.next[t as usize] != NONE && self.sym[self.next[t as usize] as usize] == a {
            self.remove_occurrence(t);
            t = self.next[t as usize];
        }
        let mut t = start;
        while self.next[t as usize] != NONE && self.sym[self.next[t as usize] as usize] == a {
            self.add_occurrence(t);
            t = self.next[t as usize];
        }
    }

    /// Like `remove_occurrence`, but occurrences of the pair being replaced
    /// are only unlinked.
    fn remove_occurrence_of_other(&mut self, i: u32, replacing: u32) {
        if self.occ_prev[i as usize] == UNLISTED {
            return;
        }
        let j = self.next[i as usize];
        let key = (self.sym[i as usize], self.sym[j as usize]);
        let p = self.index[&key];
        if p == replacing {
            self.unlink_occurrence(p, i);
        } else {
            self.remove_occurrence(i);
        }
    }
}

/// Compresses `s` over `[1, sigma]`.
pub fn compress(s: &[u32], sigma: u32, balanced: bool) -> Result<Grammar> {
    if s.is_empty() {
        return Err(Error::EmptyInput);
    }
    if sigma == 0 {
        return Err(Error::param("alphabet size must be positive"));
    }
    if s.len() >= UNLISTED as usize {
        return Err(Error::param("sequence too long"));
    }
    if let Some(&bad) = s.iter().find(|&&x| x == 0 || x > sigma) {
        return Err(Error::InvalidSymbol {
            symbol: bad as u64,
            sigma: sigma as u64,
        });
    }
    let n = s.len();
    let mut cp = Compressor {
        sym: s.to_vec(),
        next: (1..=n as u32)
            .map(|x| if x as usize == n { NONE } else { x })
            .collect(),
        prev: (0..n as u32)
            .map(|x| if x == 0 { NONE } else { x - 1 })
            .collect(),
        occ_next: vec![UNLISTED; n],
        occ_prev: vec![UNLISTED; n],
        pairs: Vec::new(),
        free: Vec::new(),
        index: FxHashMap::default(),
        bucket_head: Vec::new(),
        bucket_tail: Vec::new(),
        balanced,
        current: 0,
    };
    // frequencies can only reach n / 2 for equal pairs and n - 1 otherwise
    cp.bucket_head = vec![NONE; n + 1];
    cp.bucket_tail = vec![NONE; n + 1];
    for i in 0..n.saturating_sub(1) {
        cp.add_occurrence(i as u32);
    }
    let mut max_freq = n;
    let mut rules = Vec::new();
    loop {
        while max_freq >= 2 && cp.bucket_head[max_freq] == NONE {
            max_freq -= 1;
        }
        if max_freq < 2 {
            break;
        }
        let p = cp.bucket_head[max_freq];
        let x = sigma
            .checked_add(1 + rules.len() as u32)
            .filter(|&x| x < UNLISTED)
            .ok_or_else(|| Error::param("too many rules"))?;
        rules.push((cp.pairs[p as usize].a, cp.pairs[p as usize].b));
        cp.replace(p, x);
        #[cfg(test)]
        cp.check_counts(x);
    }
    let mut seq = Vec::new();
    let mut i = 0u32;
    while i != NONE {
        seq.push(cp.sym[i as usize]);
        i = cp.next[i as usize];
    }
    Ok(Grammar {
        sigma,
        rules,
        seq,
        n,
    })
}
