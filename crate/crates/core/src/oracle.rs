//! Straightforward reference implementations used to check the compressed
//! structures. Everything here is linear scans over plain vectors.

use std::collections::HashMap;

/// Ones (or zeros) among the first `i` bits.
pub fn naive_bit_rank(bits: &[bool], bit: bool, i: usize) -> usize {
    bits[..i].iter().filter(|&&b| b == bit).count()
}

/// 1-based position of the `j`-th `bit`; `Some(0)` for `j = 0`.
pub fn naive_bit_select(bits: &[bool], bit: bool, j: usize) -> Option<usize> {
    if j == 0 {
        return Some(0);
    }
    bits.iter()
        .enumerate()
        .filter(|(_, &b)| b == bit)
        .nth(j - 1)
        .map(|(p, _)| p + 1)
}

/// Plain sequence answering rank/select/access by scanning.
#[derive(Clone, Debug)]
pub struct NaiveSeq {
    pub data: Vec<u32>,
    pub sigma: u32,
}

impl NaiveSeq {
    pub fn new(data: Vec<u32>, sigma: u32) -> Self {
        Self { data, sigma }
    }

    pub fn len(&self) -> usize {
        self.data.len()
    }

    pub fn is_empty(&self) -> bool {
        self.data.is_empty()
    }

    pub fn access(&self, i: usize) -> Option<u32> {
        if i == 0 {
            return None;
        }
        self.data.get(i - 1).copied()
    }

    pub fn rank(&self, a: u32, i: usize) -> usize {
        self.data[..i].iter().filter(|&&c| c == a).count()
    }

    pub fn select(&self, a: u32, j: usize) -> Option<usize> {
        if j == 0 {
            return Some(0);
        }
        self.data
            .iter()
            .enumerate()
            .filter(|(_, &c)| c == a)
            .nth(j - 1)
            .map(|(p, _)| p + 1)
    }

    pub fn count(&self, a: u32) -> usize {
        self.rank(a, self.data.len())
    }
}

/// Occurrences of `pattern` in `text`, overlaps included.
pub fn naive_count(text: &[u32], pattern: &[u32]) -> usize {
    if pattern.is_empty() || pattern.len() > text.len() {
        return 0;
    }
    text.windows(pattern.len())
        .filter(|w| *w == pattern)
        .count()
}

/// Empirical entropy of order `k`, in bits per symbol, normalized by `n`.
/// For `k = 0` this is `sum n_a/n lg(n/n_a)`. For `k > 0` the first `k`
/// positions have no full context and contribute nothing.
pub fn naive_entropy(s: &[u32], k: usize) -> f64 {
    let n = s.len();
    if n == 0 {
        return 0.0;
    }
    let mut groups: HashMap<&[u32], HashMap<u32, usize>> = HashMap::new();
    for i in k..n {
        *groups
            .entry(&s[i - k..i])
            .or_default()
            .entry(s[i])
            .or_default() += 1;
    }
    let mut total = 0.0;
    for counts in groups.values() {
        let m: usize = counts.values().sum();
        for &c in counts.values() {
            total += c as f64 * (m as f64 / c as f64).log2();
        }
    }
    total / n as f64
}

/// Burrows–Wheeler transform of `s` followed by a unique terminator smaller
/// than every symbol, by sorting all rotations. The terminator is returned
/// as 0.
pub fn naive_bwt(s: &[u32]) -> Vec<u32> {
    let mut t: Vec<u32> = s.iter().map(|&c| c + 1).collect();
    t.push(0);
    let n = t.len();
    let mut rot: Vec<usize> = (0..n).collect();
    rot.sort_by(|&a, &b| {
        let ra = t[a..].iter().chain(t[..a].iter());
        let rb = t[b..].iter().chain(t[..b].iter());
        ra.cmp(rb)
    });
    rot.iter()
        .map(|&r| {
            let c = t[(r + n - 1) % n];
            if c == 0 {
                0
            } else {
                c - 1
            }
        })
        .collect()
}

/// Number of maximal runs of equal symbols.
pub fn runs(s: &[u32]) -> usize {
    if s.is_empty() {
        return 0;
    }
    1 + s.windows(2).filter(|w| w[0] != w[1]).count()
}

/// Expands a grammar given as rules `X -> (left, right)` numbered from
/// `sigma + 1`, applied to the reduced sequence `c`.
pub fn naive_expand(sigma: u32, rules: &[(u32, u32)], c: &[u32]) -> Vec<u32> {
    fn go(x: u32, sigma: u32, rules: &[(u32, u32)], out: &mut Vec<u32>) {
        if x <= sigma {
            out.push(x);
        } else {
            let (l, r) = rules[(x - sigma - 1) as usize];
            go(l, sigma, rules, out);
            go(r, sigma, rules, out);
        }
    }
    let mut out = Vec::new();
    for &x in c {
        go(x, sigma, rules, &mut out);
    }
    out
}
