//! Grammar compression with counters.
//!
//! A RePair grammar `(R, C)` is extended with, for a subset of the rules, the
//! expansion length `l(X)` and the number of occurrences of each symbol in
//! `exp(X)`. A rule is sampled when resolving it otherwise would expand more
//! than `2 delta` unsampled rules, so any length or count is obtained after
//! at most `2 delta` rule expansions.
//!
//! Position samples let queries start close to their target:
//!
//! - [`Sampling::Sequence`] (GCC.N) samples every `s` positions of `S`. For
//!   sample `k` it records the index `p` of the symbol of `C` covering
//!   position `k s`, the offset `o = k s - L(p)` and the ranks `lrnk[a]` of
//!   every symbol just before `L(p)`. Absolute values are kept every `s'`
//!   samples and the others are stored as differences in DACs.
//! - [`Sampling::Reduced`] (GCC.C) samples every `s` symbols of `C`,
//!   recording the starting position and the ranks before it. A predecessor
//!   search locates the sample.
//!
//! For `sigma = 2` only the counts of symbol 1 are stored and those of
//! symbol 2 are derived from lengths; for `sigma = 1` only lengths are kept.

use crate::bitvector::{PlainBitmap, RankSelect};
use crate::dac::{Dac, DacWidths};
use crate::intvec::IntVector;
use crate::persist::{Persist, Reader, Writer};
use crate::repair::{self, Grammar};
use crate::seq::{check_access, check_rank, check_symbol, rank_error, validate_input, Rsa};
use crate::{bits_for, Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Sampling {
    /// Every `period` positions of `S`, with absolute records every
    /// `super_period` samples.
    Sequence { period: usize, super_period: usize },
    /// Every `period` symbols of `C`.
    Reduced { period: usize },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct GccConfig {
    pub sampling: Sampling,
    /// Expansion budget; 0 stores counters for every rule.
    pub delta: u32,
    /// Fixed DAC chunk width for counters, or `None` for optimized widths.
    pub counter_width: Option<u8>,
    /// Use the balancing heuristic when building the grammar.
    pub balanced: bool,
}

impl GccConfig {
    /// GCC.N with sample period `s`, superblock period `s2` and budget `delta`.
    pub fn sequence(s: usize, s2: usize, delta: u32) -> Self {
        Self {
            sampling: Sampling::Sequence {
                period: s,
                super_period: s2,
            },
            delta,
            counter_width: None,
            balanced: true,
        }
    }

    /// GCC.C with sample period `s` over `C`.
    pub fn reduced(s: usize, delta: u32) -> Self {
        Self {
            sampling: Sampling::Reduced { period: s },
            delta,
            counter_width: None,
            balanced: true,
        }
    }

    fn validate(&self) -> Result<()> {
        match self.sampling {
            Sampling::Sequence {
                period,
                super_period,
            } if period == 0 || super_period == 0 => {
                Err(Error::param("sample periods must be positive"))
            }
            Sampling::Reduced { period: 0 } => Err(Error::param("sample period must be positive")),
            _ => match self.counter_width {
                Some(w) if w == 0 || w > 64 => {
                    Err(Error::param("counter width must be in [1, 64]"))
                }
                _ => Ok(()),
            },
        }
    }
}

impl Default for GccConfig {
    fn default() -> Self {
        Self::sequence(1024, 8, 1)
    }
}

/// Space used by each component, in bits.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct GccSpace {
    pub grammar: usize,
    pub counters: usize,
    pub samples: usize,
}

impl GccSpace {
    pub fn total(&self) -> usize {
        self.grammar + self.counters + self.samples
    }
}

/// Symbols whose counts are stored explicitly.
fn stored_symbols(sigma: u32) -> usize {
    match sigma {
        1 => 0,
        2 => 1,
        s => s as usize,
    }
}

#[derive(Clone, Debug)]
struct SamplesN {
    period: usize,
    super_period: usize,
    /// Number of samples; sample `k` (1-based) covers position `k * period`.
    count: usize,
    sup_p: IntVector,
    /// `stored` absolute ranks per superblock.
    sup_rank: IntVector,
    p_diff: Dac,
    offs: Dac,
    rank_diff: Vec<Dac>,
}

#[derive(Clone, Debug)]
struct SamplesC {
    period: usize,
    /// Symbols before `C[k * period]`.
    before: IntVector,
    /// `stored` ranks per sample.
    ranks: IntVector,
}

#[derive(Clone, Debug)]
enum Samples {
    N(SamplesN),
    C(SamplesC),
}

/// Where a scan over `C` starts.
#[derive(Clone, Copy, Debug)]
struct Start {
    p: usize,
    before: u64,
    rank: u64,
}

#[derive(Clone, Debug)]
pub struct GccIndex {
    n: usize,
    sigma: u32,
    config: GccConfig,
    /// Rule sides and `C`, storing `symbol - 1`.
    left: IntVector,
    right: IntVector,
    cseq: IntVector,
    /// Marks sampled rules; absent when every rule is sampled.
    sampled: Option<PlainBitmap>,
    lens: Dac,
    counts: Vec<Dac>,
    totals: Vec<u64>,
    samples: Samples,
}

impl GccIndex {
    pub fn build(s: &[u32], sigma: u32, config: GccConfig) -> Result<Self> {
        validate_input(s, sigma)?;
        config.validate()?;
        let g = repair::compress(s, sigma, config.balanced)?;
        Self::from_grammar(s, &g, config)
    }

    /// Builds on an existing grammar of `s`, so several configurations can
    /// share one compression run.
    pub fn from_grammar(s: &[u32], g: &Grammar, config: GccConfig) -> Result<Self> {
        validate_input(s, g.sigma())?;
        config.validate()?;
        if g.n() != s.len() {
            return Err(Error::param("grammar does not describe the sequence"));
        }
        let sigma = g.sigma();
        let sigma_us = sigma as usize;
        let r = g.r();
        let nrules = g.rules().len();
        let width = g.symbol_width() as u8;
        let rule_lens = g.rule_lengths();

        // sampled rules: cost(X) = 0 if sampled, else 1 + cost(Y) + cost(Z)
        let budget = 2 * config.delta as u64;
        let mut cost = vec![0u64; r + 1];
        let mut is_sampled = vec![false; nrules];
        for (k, &(y, z)) in g.rules().iter().enumerate() {
            let c = 1 + cost[y as usize] + cost[z as usize];
            let x = sigma_us + 1 + k;
            if c > budget {
                is_sampled[k] = true;
                cost[x] = 0;
            } else {
                cost[x] = c;
            }
        }
        let all_sampled = is_sampled.iter().all(|&b| b);
        let sampled = if all_sampled {
            None
        } else {
            Some(PlainBitmap::from_bools(&is_sampled))
        };
        let widths = |vals: &[u64]| match config.counter_width {
            Some(w) => Dac::with_widths(vals, &DacWidths::Fixed(w)),
            None => Ok(Dac::new(vals)),
        };
        let sampled_rules: Vec<usize> = (0..nrules).filter(|&k| is_sampled[k]).collect();
        let lens = widths(
            &sampled_rules
                .iter()
                .map(|&k| rule_lens[sigma_us + 1 + k])
                .collect::<Vec<_>>(),
        )?;
        let stored = stored_symbols(sigma);
        let mut counts = Vec::with_capacity(stored);
        let mut cnt = vec![0u64; r + 1];
        for a in 1..=stored {
            cnt.iter_mut().for_each(|c| *c = 0);
            cnt[a] = 1;
            for (k, &(y, z)) in g.rules().iter().enumerate() {
                cnt[sigma_us + 1 + k] = cnt[y as usize] + cnt[z as usize];
            }
            counts.push(widths(
                &sampled_rules
                    .iter()
                    .map(|&k| cnt[sigma_us + 1 + k])
                    .collect::<Vec<_>>(),
            )?);
        }

        let mut totals = vec![0u64; sigma_us];
        for &x in s {
            totals[x as usize - 1] += 1;
        }
        let samples = build_samples(s, g, &rule_lens, config.sampling, stored)?;

        Ok(Self {
            n: s.len(),
            sigma,
            config,
            left: IntVector::from_iter_width(g.rules().iter().map(|&(y, _)| y as u64 - 1), width),
            right: IntVector::from_iter_width(g.rules().iter().map(|&(_, z)| z as u64 - 1), width),
            cseq: IntVector::from_iter_width(g.seq().iter().map(|&x| x as u64 - 1), width),
            sampled,
            lens,
            counts,
            totals,
            samples,
        })
    }

    pub fn config(&self) -> GccConfig {
        self.config
    }

    /// Terminals plus rules.
    pub fn r(&self) -> usize {
        self.sigma as usize + self.left.len()
    }

    /// Length of the reduced sequence.
    pub fn c(&self) -> usize {
        self.cseq.len()
    }

    pub fn num_sampled_rules(&self) -> usize {
        self.lens.len()
    }

    /// Reconstructs the grammar.
    pub fn grammar(&self) -> Grammar {
        let rules = (0..self.left.len())
            .map(|k| (self.left.get(k) as u32 + 1, self.right.get(k) as u32 + 1))
            .collect();
        let seq = self.cseq.iter().map(|x| x as u32 + 1).collect();
        Grammar::from_parts(self.sigma, rules, seq, self.n).expect("index holds a valid grammar")
    }

    pub fn space(&self) -> GccSpace {
        let grammar =
            self.left.size_in_bits() + self.right.size_in_bits() + self.cseq.size_in_bits();
        let counters = self.sampled.as_ref().map_or(0, |b| b.size_in_bits())
            + self.lens.size_in_bits()
            + self.counts.iter().map(Dac::size_in_bits).sum::<usize>()
            + self.totals.len() * 64;
        let samples = match &self.samples {
            Samples::N(sn) => {
                sn.sup_p.size_in_bits()
                    + sn.sup_rank.size_in_bits()
                    + sn.p_diff.size_in_bits()
                    + sn.offs.size_in_bits()
                    + sn.rank_diff.iter().map(Dac::size_in_bits).sum::<usize>()
            }
            Samples::C(sc) => sc.before.size_in_bits() + sc.ranks.size_in_bits(),
        };
        GccSpace {
            grammar,
            counters,
            samples,
        }
    }

    #[inline]
    fn rule(&self, x: u32) -> (u32, u32) {
        let k = (x - self.sigma - 1) as usize;
        (self.left.get(k) as u32 + 1, self.right.get(k) as u32 + 1)
    }

    #[inline]
    fn c_at(&self, p: usize) -> u32 {
        self.cseq.get(p) as u32 + 1
    }

    /// Counter slot of rule `x`, if sampled.
    #[inline]
    fn slot(&self, x: u32) -> Option<usize> {
        let k = (x - self.sigma - 1) as usize;
        match &self.sampled {
            None => Some(k),
            Some(b) => b.get(k).then(|| b.rank1(k)),
        }
    }

    #[inline]
    fn stored_count(&self, slot: usize, a: u32, len: u64) -> u64 {
        match self.sigma {
            1 => len,
            2 => {
                let c1 = self.counts[0].get(slot);
                if a == 1 {
                    c1
                } else {
                    len - c1
                }
            }
            _ => self.counts[a as usize - 1].get(slot),
        }
    }

    fn len_of(&self, x: u32) -> u64 {
        if x <= self.sigma {
            return 1;
        }
        match self.slot(x) {
            Some(k) => self.lens.get(k),
            None => {
                let (y, z) = self.rule(x);
                self.len_of(y) + self.len_of(z)
            }
        }
    }

    fn cnt_of(&self, x: u32, a: u32) -> u64 {
        if x <= self.sigma {
            return (x == a) as u64;
        }
        match self.slot(x) {
            Some(k) if self.sigma >= 3 => self.counts[a as usize - 1].get(k),
            Some(k) => self.stored_count(k, a, self.lens.get(k)),
            None => {
                let (y, z) = self.rule(x);
                self.cnt_of(y, a) + self.cnt_of(z, a)
            }
        }
    }

    fn len_cnt(&self, x: u32, a: u32) -> (u64, u64) {
        if x <= self.sigma {
            return (1, (x == a) as u64);
        }
        match self.slot(x) {
            Some(k) => {
                let l = self.lens.get(k);
                (l, self.stored_count(k, a, l))
            }
            None => {
                let (y, z) = self.rule(x);
                let (ly, cy) = self.len_cnt(y, a);
                let (lz, cz) = self.len_cnt(z, a);
                (ly + lz, cy + cz)
            }
        }
    }

    fn check_symbol_id(&self, x: u32) -> Result<()> {
        if x == 0 || x as usize > self.r() {
            Err(Error::InvalidSymbol {
                symbol: x as u64,
                sigma: self.r() as u64,
            })
        } else {
            Ok(())
        }
    }

    /// `l(x)` for any terminal or rule `x`.
    pub fn resolve_length(&self, x: u32) -> Result<u64> {
        self.check_symbol_id(x)?;
        Ok(self.len_of(x))
    }

    /// Occurrences of terminal `a` in `exp(x)`.
    pub fn resolve_count(&self, x: u32, a: u32) -> Result<u64> {
        self.check_symbol_id(x)?;
        check_symbol(a, self.sigma)?;
        Ok(self.cnt_of(x, a))
    }

    /// Number of unsampled rules expanded while resolving `x`.
    pub fn resolve_visits(&self, x: u32) -> Result<usize> {
        self.check_symbol_id(x)?;
        fn go(g: &GccIndex, x: u32) -> usize {
            if x <= g.sigma || g.slot(x).is_some() {
                return 0;
            }
            let (y, z) = g.rule(x);
            1 + go(g, y) + go(g, z)
        }
        Ok(go(self, x))
    }

    fn sample_rank(&self, stored_ranks: impl Fn(usize) -> u64, a: u32, before: u64) -> u64 {
        match self.sigma {
            1 => before,
            2 => {
                let r1 = stored_ranks(0);
                if a == 1 {
                    r1
                } else {
                    before - r1
                }
            }
            _ => stored_ranks(a as usize - 1),
        }
    }

    /// Sample `idx` (0-based, i.e. position `(idx + 1) s`) of GCC.N.
    fn sample_n(&self, sn: &SamplesN, idx: usize, a: Option<u32>) -> Start {
        let stored = self.counts.len();
        let sb = idx / sn.super_period;
        let k = (idx + 1) as u64;
        let p = (sn.sup_p.get(sb) + sn.p_diff.get(idx)) as usize;
        let before = k * sn.period as u64 - sn.offs.get(idx) - 1;
        let rank = match a {
            Some(a) => self.sample_rank(
                |t| sn.sup_rank.get(sb * stored + t) + sn.rank_diff[t].get(idx),
                a,
                before,
            ),
            None => 0,
        };
        Start { p, before, rank }
    }

    fn sample_c(&self, sc: &SamplesC, k: usize, a: Option<u32>) -> Start {
        let stored = self.counts.len();
        let before = sc.before.get(k);
        let rank = match a {
            Some(a) => self.sample_rank(|t| sc.ranks.get(k * stored + t), a, before),
            None => 0,
        };
        Start {
            p: k * sc.period,
            before,
            rank,
        }
    }

    /// Start for a scan reaching position `i >= 1`.
    fn start_for_pos(&self, i: usize, a: Option<u32>) -> Start {
        match &self.samples {
            Samples::N(sn) => {
                let k = i / sn.period;
                if k == 0 {
                    Start {
                        p: 0,
                        before: 0,
                        rank: 0,
                    }
                } else {
                    self.sample_n(sn, k - 1, a)
                }
            }
            Samples::C(sc) => {
                // last sample starting at or before position i
                let (mut lo, mut hi) = (0, sc.before.len());
                while lo < hi {
                    let mid = (lo + hi) / 2;
                    if (sc.before.get(mid) as usize) < i {
                        lo = mid + 1;
                    } else {
                        hi = mid;
                    }
                }
                self.sample_c(sc, lo - 1, a)
            }
        }
    }

    /// Last sample whose rank of `a` is below `j`.
    fn start_for_rank(&self, a: u32, j: u64) -> Start {
        let last_true = |lo: usize, hi: usize, pred: &dyn Fn(usize) -> bool| -> Option<usize> {
            let (mut lo2, mut hi2) = (lo, hi);
            while lo2 < hi2 {
                let mid = (lo2 + hi2) / 2;
                if pred(mid) {
                    lo2 = mid + 1;
                } else {
                    hi2 = mid;
                }
            }
            (lo2 > lo).then(|| lo2 - 1)
        };
        match &self.samples {
            Samples::N(sn) => {
                let nsup = sn.count.div_ceil(sn.super_period);
                let below = |idx: usize| self.sample_n(sn, idx, Some(a)).rank < j;
                let Some(sb) = last_true(0, nsup, &|b| below(b * sn.super_period)) else {
                    return Start {
                        p: 0,
                        before: 0,
                        rank: 0,
                    };
                };
                let lo = sb * sn.super_period;
                let hi = (lo + sn.super_period).min(sn.count);
                let idx =
                    last_true(lo, hi, &below).expect("superblock head satisfies the predicate");
                self.sample_n(sn, idx, Some(a))
            }
            Samples::C(sc) => {
                let k = last_true(0, sc.before.len(), &|k| {
                    self.sample_c(sc, k, Some(a)).rank < j
                })
                .expect("first sample has rank 0");
                self.sample_c(sc, k, Some(a))
            }
        }
    }

    fn access_unchecked(&self, i: usize) -> u32 {
        let i = i as u64;
        let st = self.start_for_pos(i as usize, None);
        let (mut p, mut before) = (st.p, st.before);
        let mut x = self.c_at(p);
        loop {
            let l = self.len_of(x);
            if before + l >= i {
                break;
            }
            before += l;
            p += 1;
            x = self.c_at(p);
        }
        while x > self.sigma {
            let (y, z) = self.rule(x);
            let ly = self.len_of(y);
            if before + ly >= i {
                x = y;
            } else {
                before += ly;
                x = z;
            }
        }
        x
    }

    fn rank_unchecked(&self, a: u32, i: usize) -> usize {
        if i == 0 {
            return 0;
        }
        if i == self.n {
            return self.totals[a as usize - 1] as usize;
        }
        let i = i as u64;
        let st = self.start_for_pos(i as usize, Some(a));
        let (mut p, mut before, mut rank) = (st.p, st.before, st.rank);
        let mut x;
        loop {
            x = self.c_at(p);
            let (l, c) = self.len_cnt(x, a);
            if before + l > i {
                break;
            }
            before += l;
            rank += c;
            p += 1;
            if before == i {
                return rank as usize;
            }
        }
        // before < i < before + l(x), so x is a rule
        loop {
            let (y, z) = self.rule(x);
            let (ly, cy) = self.len_cnt(y, a);
            if before + ly > i {
                x = y;
            } else {
                before += ly;
                rank += cy;
                if before == i {
                    return rank as usize;
                }
                x = z;
            }
        }
    }

    fn select_unchecked(&self, a: u32, j: usize) -> usize {
        let j = j as u64;
        let st = self.start_for_rank(a, j);
        let (mut p, mut before, mut rank) = (st.p, st.before, st.rank);
        let mut x;
        loop {
            x = self.c_at(p);
            let (l, c) = self.len_cnt(x, a);
            if rank + c >= j {
                break;
            }
            rank += c;
            before += l;
            p += 1;
        }
        while x > self.sigma {
            let (y, z) = self.rule(x);
            let (ly, cy) = self.len_cnt(y, a);
            if rank + cy >= j {
                x = y;
            } else {
                rank += cy;
                before += ly;
                x = z;
            }
        }
        debug_assert_eq!(x, a);
        (before + 1) as usize
    }
}

impl Rsa for GccIndex {
    fn len(&self) -> usize {
        self.n
    }

    fn sigma(&self) -> u32 {
        self.sigma
    }

    fn access(&self, i: usize) -> Result<u32> {
        check_access(i, self.n)?;
        Ok(self.access_unchecked(i))
    }

    fn rank(&self, a: u32, i: usize) -> Result<usize> {
        check_rank(a, i, self.n, self.sigma)?;
        Ok(self.rank_unchecked(a, i))
    }

    fn select(&self, a: u32, j: usize) -> Result<usize> {
        check_symbol(a, self.sigma)?;
        let total = self.totals[a as usize - 1] as usize;
        if j > total {
            return Err(rank_error(a, j, total));
        }
        if j == 0 {
            return Ok(0);
        }
        Ok(self.select_unchecked(a, j))
    }

    fn size_in_bits(&self) -> usize {
        self.space().total()
    }

    fn extract_all(&self) -> Vec<u32> {
        let mut out = Vec::with_capacity(self.n);
        let mut stack = Vec::new();
        for p in 0..self.cseq.len() {
            stack.push(self.c_at(p));
            while let Some(x) = stack.pop() {
                if x <= self.sigma {
                    out.push(x);
                } else {
                    let (y, z) = self.rule(x);
                    stack.push(z);
                    stack.push(y);
                }
            }
        }
        out
    }
}

fn build_samples(
    s: &[u32],
    g: &Grammar,
    rule_lens: &[u64],
    sampling: Sampling,
    stored: usize,
) -> Result<Samples> {
    let n = s.len();
    let mut counts = vec![0u64; stored];
    let bump = |counts: &mut [u64], range: &[u32]| {
        for &x in range {
            if (x as usize) <= stored {
                counts[x as usize - 1] += 1;
            }
        }
    };
    match sampling {
        Sampling::Sequence {
            period,
            super_period,
        } => {
            let total = n / period;
            let mut sup_p = Vec::new();
            let mut sup_rank = Vec::new();
            let mut p_diff = Vec::with_capacity(total);
            let mut offs = Vec::with_capacity(total);
            let mut rank_diff = vec![Vec::with_capacity(total); stored];
            let mut pos = 0usize;
            let mut k = 1usize;
            for (p, &x) in g.seq().iter().enumerate() {
                let l = rule_lens[x as usize] as usize;
                while k <= total && k * period <= pos + l {
                    let idx = k - 1;
                    if idx.is_multiple_of(super_period) {
                        sup_p.push(p as u64);
                        sup_rank.extend_from_slice(&counts);
                    }
                    let sb = idx / super_period;
                    p_diff.push(p as u64 - sup_p[sb]);
                    offs.push((k * period - (pos + 1)) as u64);
                    for (t, rd) in rank_diff.iter_mut().enumerate() {
                        rd.push(counts[t] - sup_rank[sb * stored + t]);
                    }
                    k += 1;
                }
                bump(&mut counts, &s[pos..pos + l]);
                pos += l;
            }
            Ok(Samples::N(SamplesN {
                period,
                super_period,
                count: total,
                sup_p: IntVector::from_slice(&sup_p),
                sup_rank: IntVector::from_slice_width(&sup_rank, bits_for(n as u64)),
                p_diff: Dac::new(&p_diff),
                offs: Dac::new(&offs),
                rank_diff: rank_diff.iter().map(|v| Dac::new(v)).collect(),
            }))
        }
        Sampling::Reduced { period } => {
            let mut before = Vec::new();
            let mut ranks = Vec::new();
            let mut pos = 0usize;
            for (p, &x) in g.seq().iter().enumerate() {
                if p % period == 0 {
                    before.push(pos as u64);
                    ranks.extend_from_slice(&counts);
                }
                let l = rule_lens[x as usize] as usize;
                bump(&mut counts, &s[pos..pos + l]);
                pos += l;
            }
            Ok(Samples::C(SamplesC {
                period,
                before: IntVector::from_slice_width(&before, bits_for(n as u64)),
                ranks: IntVector::from_slice_width(&ranks, bits_for(n as u64)),
            }))
        }
    }
}

impl Persist for GccConfig {
    fn save(&self, w: &mut Writer) {
        match self.sampling {
            Sampling::Sequence {
                period,
                super_period,
            } => {
                w.u8(0);
                w.usize(period);
                w.usize(super_period);
            }
            Sampling::Reduced { period } => {
                w.u8(1);
                w.usize(period);
                w.usize(0);
            }
        }
        w.u32(self.delta);
        w.u8(self.counter_width.unwrap_or(0));
        w.bool(self.balanced);
    }

    fn load(r: &mut Reader) -> Result<Self> {
        let tag = r.u8()?;
        let period = r.usize()?;
        let super_period = r.usize()?;
        let sampling = match tag {
            0 => Sampling::Sequence {
                period,
                super_period,
            },
            1 => Sampling::Reduced { period },
            _ => return Err(Error::corrupt("unknown sampling kind")),
        };
        let delta = r.u32()?;
        let cw = r.u8()?;
        let cfg = Self {
            sampling,
            delta,
            counter_width: (cw > 0).then_some(cw),
            balanced: r.bool()?,
        };
        cfg.validate()
            .map_err(|_| Error::corrupt("invalid gcc configuration"))?;
        Ok(cfg)
    }
}

impl Persist for GccIndex {
    fn save(&self, w: &mut Writer) {
        w.usize(self.n);
        w.u32(self.sigma);
        self.config.save(w);
        self.left.save(w);
        self.right.save(w);
        self.cseq.save(w);
        w.option(&self.sampled);
        self.lens.save(w);
        w.seq(&self.counts);
        w.words(&self.totals);
        match &self.samples {
            Samples::N(sn) => {
                w.u8(0);
                w.usize(sn.count);
                sn.sup_p.save(w);
                sn.sup_rank.save(w);
                sn.p_diff.save(w);
                sn.offs.save(w);
                w.seq(&sn.rank_diff);
            }
            Samples::C(sc) => {
                w.u8(1);
                sc.before.save(w);
                sc.ranks.save(w);
            }
        }
    }

    fn load(r: &mut Reader) -> Result<Self> {
        let bad = |m: &str| Error::corrupt(format!("gcc index: {m}"));
        let n = r.usize()?;
        let sigma = r.u32()?;
        let config = GccConfig::load(r)?;
        let left = IntVector::load(r)?;
        let right = IntVector::load(r)?;
        let cseq = IntVector::load(r)?;
        let sampled: Option<PlainBitmap> = r.option()?;
        let lens = Dac::load(r)?;
        let counts: Vec<Dac> = r.seq()?;
        let totals = r.words()?;
        let samples = match r.u8()? {
            0 => {
                let count = r.usize()?;
                let (period, super_period) = match config.sampling {
                    Sampling::Sequence {
                        period,
                        super_period,
                    } => (period, super_period),
                    _ => return Err(bad("sampling kind mismatch")),
                };
                Samples::N(SamplesN {
                    period,
                    super_period,
                    count,
                    sup_p: IntVector::load(r)?,
                    sup_rank: IntVector::load(r)?,
                    p_diff: Dac::load(r)?,
                    offs: Dac::load(r)?,
                    rank_diff: r.seq()?,
                })
            }
            1 => {
                let period = match config.sampling {
                    Sampling::Reduced { period } => period,
                    _ => return Err(bad("sampling kind mismatch")),
                };
                Samples::C(SamplesC {
                    period,
                    before: IntVector::load(r)?,
                    ranks: IntVector::load(r)?,
                })
            }
            _ => return Err(bad("unknown sampling tag")),
        };
        // shape checks; the grammar itself is validated by rebuilding it
        let stored = stored_symbols(sigma);
        let nrules = left.len();
        let nsampled = sampled.as_ref().map_or(nrules, |b| b.count_ones());
        if sigma == 0
            || n == 0
            || right.len() != nrules
            || sampled.as_ref().is_some_and(|b| b.len() != nrules)
            || lens.len() != nsampled
            || counts.len() != stored
            || counts.iter().any(|c| c.len() != nsampled)
            || totals.len() != sigma as usize
            || totals.iter().sum::<u64>() != n as u64
            || cseq.is_empty()
        {
            return Err(bad("component shapes"));
        }
        match &samples {
            Samples::N(sn) => {
                let nsup = sn.count.div_ceil(sn.super_period);
                if sn.count != n / sn.period
                    || sn.sup_p.len() != nsup
                    || sn.sup_rank.len() != nsup * stored
                    || sn.p_diff.len() != sn.count
                    || sn.offs.len() != sn.count
                    || sn.rank_diff.len() != stored
                    || sn.rank_diff.iter().any(|d| d.len() != sn.count)
                {
                    return Err(bad("sample shapes"));
                }
            }
            Samples::C(sc) => {
                if sc.before.len() != cseq.len().div_ceil(sc.period)
                    || sc.ranks.len() != sc.before.len() * stored
                {
                    return Err(bad("sample shapes"));
                }
            }
        }
        let idx = Self {
            n,
            sigma,
            config,
            left,
            right,
            cseq,
            sampled,
            lens,
            counts,
            totals,
            samples,
        };
        let rules: Vec<(u32, u32)> = (0..nrules)
            .map(|k| (idx.left.get(k) as u32 + 1, idx.right.get(k) as u32 + 1))
            .collect();
        let seq: Vec<u32> = idx.cseq.iter().map(|x| x as u32 + 1).collect();
        let g = Grammar::from_parts(sigma, rules, seq, n)?;
        // stored lengths must agree with the grammar
        let lens_all = g.rule_lengths();
        for k in 0..nrules {
            let x = sigma + 1 + k as u32;
            if let Some(slot) = idx.slot(x) {
                if idx.lens.get(slot) != lens_all[x as usize] {
                    return Err(bad("rule length mismatch"));
                }
            }
        }
        Ok(idx)
    }
}
