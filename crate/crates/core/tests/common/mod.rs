//! Helpers shared by the integration tests: a catalogue of structures, a
//! test corpus, and an oracle built from per-symbol occurrence lists.

#![allow(dead_code)]

use gcseq::appart::{ApConfig, ApFallback};
use gcseq::corpus::{gen_dna, random_sequence};
use gcseq::gcc::GccConfig;
use gcseq::huffman::CodeShape;
use gcseq::wavelet::{Backend, BackendPolicy};
use gcseq::{Rsa, StructureSpec};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub const BACKENDS: [Backend; 4] = [Backend::Plain, Backend::Rrr, Backend::Delta, Backend::Gcc];

pub fn policy(backend: Backend) -> BackendPolicy {
    let mut p = BackendPolicy::new(backend);
    p.gcc = GccConfig::sequence(64, 4, 1);
    p
}

pub fn tree(shape: CodeShape, arity: u32, backend: Backend) -> StructureSpec {
    StructureSpec::Tree {
        shape,
        arity,
        policy: policy(backend),
    }
}

pub fn matrix(shape: CodeShape, arity: u32, backend: Backend) -> StructureSpec {
    StructureSpec::Matrix {
        shape,
        arity,
        policy: policy(backend),
    }
}

/// One instance of every structure family. `turn` rotates the node
/// backends and grammar parameters so that repeated calls cover all of them.
pub fn catalogue(turn: usize) -> Vec<(String, StructureSpec)> {
    use CodeShape::{Balanced, Huffman};
    let b = |k: usize| BACKENDS[(turn + k) % BACKENDS.len()];
    let s = [64, 1024][turn % 2];
    let s2 = [5, 8][(turn / 2) % 2];
    let delta = [0, 1, 2, 4][(turn / 4) % 4];
    let mut ap_rp = ApConfig::rp(
        3 + (turn % 4) as u32,
        [1, 3, 5][turn % 3],
        [ApFallback::WmPlain, ApFallback::WmRp][turn % 2],
    );
    ap_rp.gcc = GccConfig::sequence(s, s2, delta);
    vec![
        (
            format!("GCC.N s={s} s'={s2} d={delta}"),
            StructureSpec::Gcc(GccConfig::sequence(s, s2, delta)),
        ),
        (
            format!("GCC.C s={} d={delta}", s / 16),
            StructureSpec::Gcc(GccConfig::reduced(s / 16, delta)),
        ),
        (format!("WT {:?}", b(0)), tree(Balanced, 2, b(0))),
        (format!("WTH {:?}", b(1)), tree(Huffman, 2, b(1))),
        (format!("WM {:?}", b(2)), matrix(Balanced, 2, b(2))),
        (format!("WMH {:?}", b(3)), matrix(Huffman, 2, b(3))),
        (format!("MWT4 {:?}", b(0)), tree(Balanced, 4, b(0))),
        (format!("MWT16 {:?}", b(1)), tree(Balanced, 16, b(1))),
        (format!("MWTH4 {:?}", b(2)), tree(Huffman, 4, b(2))),
        (format!("MWTH16 {:?}", b(3)), tree(Huffman, 16, b(3))),
        (format!("WM4 {:?}", b(1)), matrix(Balanced, 4, b(1))),
        (
            "AP".to_string(),
            StructureSpec::Ap(ApConfig::plain(3 + (turn % 4) as u32)),
        ),
        (
            format!("AP.RP {:?}", ap_rp.fallback),
            StructureSpec::Ap(ap_rp),
        ),
    ]
}

/// Answers from per-symbol occurrence lists.
pub struct Oracle {
    pub s: Vec<u32>,
    pub sigma: u32,
    occ: Vec<Vec<usize>>,
}

impl Oracle {
    pub fn new(s: &[u32], sigma: u32) -> Self {
        let mut occ = vec![Vec::new(); sigma as usize + 1];
        for (i, &a) in s.iter().enumerate() {
            occ[a as usize].push(i + 1);
        }
        Self {
            s: s.to_vec(),
            sigma,
            occ,
        }
    }

    pub fn count(&self, a: u32) -> usize {
        self.occ[a as usize].len()
    }

    pub fn rank(&self, a: u32, i: usize) -> usize {
        self.occ[a as usize].partition_point(|&p| p <= i)
    }

    pub fn select(&self, a: u32, j: usize) -> Option<usize> {
        if j == 0 {
            Some(0)
        } else {
            self.occ[a as usize].get(j - 1).copied()
        }
    }

    /// Symbols worth querying: all of them for small alphabets, otherwise
    /// those present plus a sample of absent ones.
    pub fn query_symbols(&self, rng: &mut impl Rng) -> Vec<u32> {
        if self.sigma <= 256 {
            return (1..=self.sigma).collect();
        }
        let mut v: Vec<u32> = (1..=self.sigma).filter(|&a| self.count(a) > 0).collect();
        v.extend((0..16).map(|_| rng.gen_range(1..=self.sigma)));
        v.push(1);
        v.push(self.sigma);
        v
    }
}

/// Compares `idx` with the oracle. Small sequences are checked exhaustively
/// (every position, every prefix and every occurrence of each query symbol),
/// larger ones with `sampled` random queries of each kind. Returns the
/// number of queries issued, or a description of the first disagreement.
pub fn compare<R: Rsa>(
    idx: &R,
    o: &Oracle,
    exhaustive_limit: usize,
    sampled: usize,
    seed: u64,
) -> Result<usize, String> {
    let n = o.s.len();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut issued = 0usize;
    macro_rules! same {
        ($got:expr, $want:expr, $what:expr) => {{
            issued += 1;
            let got = $got;
            if got != $want {
                return Err(format!("{}: got {:?}, want {:?}", $what, got, $want));
            }
        }};
    }
    if idx.len() != n || idx.sigma() != o.sigma {
        return Err(format!("shape: len {} sigma {}", idx.len(), idx.sigma()));
    }
    if n <= exhaustive_limit {
        for i in 1..=n {
            same!(idx.access(i).ok(), Some(o.s[i - 1]), format!("access({i})"));
        }
        for a in o.query_symbols(&mut rng) {
            for i in 0..=n {
                same!(
                    idx.rank(a, i).ok(),
                    Some(o.rank(a, i)),
                    format!("rank({a},{i})")
                );
            }
            for j in 0..=o.count(a) {
                same!(
                    idx.select(a, j).ok(),
                    o.select(a, j),
                    format!("select({a},{j})")
                );
            }
            same!(
                idx.select(a, o.count(a) + 1).is_err(),
                true,
                format!("select({a}, past end)")
            );
        }
    } else {
        for _ in 0..sampled {
            let i = rng.gen_range(1..=n);
            same!(idx.access(i).ok(), Some(o.s[i - 1]), format!("access({i})"));
            let a = o.s[rng.gen_range(0..n)];
            let i = rng.gen_range(0..=n);
            same!(
                idx.rank(a, i).ok(),
                Some(o.rank(a, i)),
                format!("rank({a},{i})")
            );
            let j = rng.gen_range(1..=o.count(a));
            same!(
                idx.select(a, j).ok(),
                o.select(a, j),
                format!("select({a},{j})")
            );
            // an arbitrary symbol, usually absent for large alphabets
            let b = rng.gen_range(1..=o.sigma);
            same!(
                idx.rank(b, i).ok(),
                Some(o.rank(b, i)),
                format!("rank({b},{i})")
            );
        }
    }
    Ok(issued)
}

/// A test sequence: uniformly random or mutated copies of a random block.
pub fn sequence(n: usize, sigma: u32, repetitive: bool, seed: u64) -> Vec<u32> {
    if !repetitive || sigma == 1 || sigma > 256 && n < 64 {
        return random_sequence(n, sigma, seed);
    }
    if sigma > 256 {
        // copies of a random block with a few symbols replaced
        let block = random_sequence((n / 8).max(1), sigma, seed);
        let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x5eed);
        return block
            .iter()
            .cycle()
            .take(n)
            .map(|&a| {
                if rng.gen_bool(0.01) {
                    rng.gen_range(1..=sigma)
                } else {
                    a
                }
            })
            .collect();
    }
    let block = (n / 10).max(1);
    let copies = n.div_ceil(block);
    let mut s = gen_dna(
        &random_sequence(block, sigma, seed),
        sigma,
        copies,
        0.005,
        seed + 1,
    )
    .unwrap();
    s.truncate(n);
    s
}
