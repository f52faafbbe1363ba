//! Synthetic repetitive collections, empirical entropy and dataset reports,
//! plus the two on-disk sequence formats.
//!
//! Randomness comes from ChaCha8 seeded with a `u64`, so generated corpora
//! are bit-identical across platforms.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rustc_hash::FxHashMap;

use crate::fmindex::bwt_runs;
use crate::repair;
use crate::seq::validate_input;
use crate::{Error, Result};

/// Highest context order supported by [`entropy_hk`].
pub const MAX_ORDER: usize = 3;

/// Letters used when writing 4-symbol sequences as text.
pub const DNA: &[u8; 4] = b"ACGT";

/// Uniformly random sequence over `[1, sigma]`.
pub fn random_sequence(n: usize, sigma: u32, seed: u64) -> Vec<u32> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..n).map(|_| rng.gen_range(1..=sigma)).collect()
}

/// Concatenates `copies` copies of `base`, replacing each copied symbol
/// with probability `mutation_prob` by a uniformly chosen different symbol
/// of `[1, sigma]`.
pub fn gen_dna(
    base: &[u32],
    sigma: u32,
    copies: usize,
    mutation_prob: f64,
    seed: u64,
) -> Result<Vec<u32>> {
    validate_input(base, sigma)?;
    if sigma > 256 {
        return Err(Error::param("alphabet larger than 256"));
    }
    if !(0.0..=1.0).contains(&mutation_prob) {
        return Err(Error::param("mutation probability outside [0, 1]"));
    }
    if sigma == 1 && mutation_prob > 0.0 {
        return Err(Error::param("cannot mutate over a unary alphabet"));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::with_capacity(base.len() * copies);
    for _ in 0..copies {
        for &a in base {
            if mutation_prob > 0.0 && rng.gen_bool(mutation_prob) {
                let b = rng.gen_range(1..sigma);
                out.push(if b >= a { b + 1 } else { b });
            } else {
                out.push(a);
            }
        }
    }
    Ok(out)
}

/// Zero-order empirical entropy in bits per symbol.
pub fn entropy_h0(s: &[u32]) -> f64 {
    entropy_hk(s, 0).expect("order 0 is always supported")
}

/// Order-`k` empirical entropy in bits per symbol. The context of position
/// `i` is the `k` symbols before it; the first `k` positions have no full
/// context and add nothing, while the total is still divided by `n`.
pub fn entropy_hk(s: &[u32], k: usize) -> Result<f64> {
    if k > MAX_ORDER {
        return Err(Error::param(format!("entropy order above {MAX_ORDER}")));
    }
    let n = s.len();
    if n <= k {
        return Ok(0.0);
    }
    let mut pairs: FxHashMap<(u128, u32), u64> = FxHashMap::default();
    let mut ctx = 0u128;
    for (i, &a) in s.iter().enumerate() {
        if i >= k {
            *pairs.entry((ctx, a)).or_default() += 1;
        }
        if k > 0 {
            // keep only the last k symbols in the context word
            ctx = ((ctx << 32) | a as u128) & ((1u128 << (32 * k)) - 1);
        }
    }
    let mut totals: FxHashMap<u128, u64> = FxHashMap::default();
    for (&(c, _), &m) in &pairs {
        *totals.entry(c).or_default() += m;
    }
    let bits: f64 = pairs
        .iter()
        .map(|(&(c, _), &m)| m as f64 * (totals[&c] as f64 / m as f64).log2())
        .sum();
    Ok(bits / n as f64)
}

/// One row of a dataset table.
#[derive(Clone, Debug, PartialEq)]
pub struct CorpusReport {
    pub dataset: String,
    pub n: usize,
    pub sigma: u32,
    /// `h[k]` is the order-`k` entropy.
    pub h: [f64; MAX_ORDER + 1],
    /// Plain-grammar bits per symbol, `(2(r - sigma) + c) ceil(lg r) / n`.
    pub repair_bps: f64,
    /// BWT runs over `n`.
    pub bwt_runs_ratio: f64,
}

impl CorpusReport {
    pub const CSV_HEADER: &'static str = "dataset,n,sigma,h0,h1,h2,h3,repair_bps,bwt_runs_ratio";

    pub fn csv_row(&self) -> String {
        format!(
            "{},{},{},{:.6},{:.6},{:.6},{:.6},{:.6},{:.6}",
            self.dataset,
            self.n,
            self.sigma,
            self.h[0],
            self.h[1],
            self.h[2],
            self.h[3],
            self.repair_bps,
            self.bwt_runs_ratio
        )
    }
}

/// Plain-grammar bits per symbol of balanced RePair on `s`.
pub fn repair_bps(s: &[u32], sigma: u32) -> Result<f64> {
    let g = repair::compress(s, sigma, true)?;
    Ok(g.stats().bits_plain as f64 / s.len() as f64)
}

pub fn report(dataset: &str, s: &[u32], sigma: u32) -> Result<CorpusReport> {
    validate_input(s, sigma)?;
    let mut h = [0.0; MAX_ORDER + 1];
    for (k, slot) in h.iter_mut().enumerate() {
        *slot = entropy_hk(s, k)?;
    }
    Ok(CorpusReport {
        dataset: dataset.to_string(),
        n: s.len(),
        sigma,
        h,
        repair_bps: repair_bps(s, sigma)?,
        bwt_runs_ratio: bwt_runs(s).ratio,
    })
}

/// On-disk sequence formats.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Format {
    /// One byte per symbol. Distinct byte values are mapped to `1..=sigma`
    /// in increasing order.
    Raw8,
    /// `"GCSQ"`, version, `n` and `sigma` as little-endian `u32`, then `n`
    /// little-endian `u32` symbols.
    U32le,
}

pub const U32LE_MAGIC: &[u8; 4] = b"GCSQ";
pub const U32LE_VERSION: u32 = 1;

/// A decoded input sequence.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Loaded {
    pub seq: Vec<u32>,
    pub sigma: u32,
    /// For raw input, the byte behind each symbol (`bytes[a - 1]`).
    pub bytes: Option<Vec<u8>>,
}

pub fn decode(data: &[u8], format: Format) -> Result<Loaded> {
    match format {
        Format::Raw8 => decode_raw8(data),
        Format::U32le => decode_u32le(data),
    }
}

fn decode_raw8(data: &[u8]) -> Result<Loaded> {
    if data.is_empty() {
        return Err(Error::EmptyInput);
    }
    let mut present = [false; 256];
    for &b in data {
        present[b as usize] = true;
    }
    let bytes: Vec<u8> = (0..=255u8).filter(|&b| present[b as usize]).collect();
    let mut map = [0u32; 256];
    for (i, &b) in bytes.iter().enumerate() {
        map[b as usize] = i as u32 + 1;
    }
    Ok(Loaded {
        seq: data.iter().map(|&b| map[b as usize]).collect(),
        sigma: bytes.len() as u32,
        bytes: Some(bytes),
    })
}

fn decode_u32le(data: &[u8]) -> Result<Loaded> {
    if data.len() < 16 {
        return Err(Error::corrupt("sequence header shorter than 16 bytes"));
    }
    if &data[..4] != U32LE_MAGIC {
        return Err(Error::corrupt("bad sequence magic"));
    }
    let field = |k: usize| u32::from_le_bytes(data[4 * k..4 * k + 4].try_into().expect("4 bytes"));
    let (version, n, sigma) = (field(1), field(2) as usize, field(3));
    if version != U32LE_VERSION {
        return Err(Error::corrupt(format!(
            "unsupported sequence version {version}"
        )));
    }
    let body = &data[16..];
    if body.len() != 4 * n {
        return Err(Error::corrupt(format!(
            "expected {n} symbols, found {} bytes",
            body.len()
        )));
    }
    let seq: Vec<u32> = body
        .chunks_exact(4)
        .map(|c| u32::from_le_bytes(c.try_into().expect("4 bytes")))
        .collect();
    validate_input(&seq, sigma)?;
    Ok(Loaded {
        seq,
        sigma,
        bytes: None,
    })
}

/// Writes `s` over `[1, sigma]` in the 32-bit format.
pub fn encode_u32le(s: &[u32], sigma: u32) -> Result<Vec<u8>> {
    validate_input(s, sigma)?;
    let n = u32::try_from(s.len()).map_err(|_| Error::param("sequence longer than 2^32 - 1"))?;
    let mut out = Vec::with_capacity(16 + 4 * s.len());
    out.extend_from_slice(U32LE_MAGIC);
    for v in [U32LE_VERSION, n, sigma] {
        out.extend_from_slice(&v.to_le_bytes());
    }
    for &a in s {
        out.extend_from_slice(&a.to_le_bytes());
    }
    Ok(out)
}

/// Writes `s` one byte per symbol, symbol `a` as `alphabet[a - 1]`.
pub fn encode_raw8(s: &[u32], alphabet: &[u8]) -> Result<Vec<u8>> {
    s.iter()
        .map(|&a| {
            alphabet
                .get((a as usize).wrapping_sub(1))
                .copied()
                .ok_or(Error::InvalidSymbol {
                    symbol: a as u64,
                    sigma: alphabet.len() as u64,
                })
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::oracle::naive_entropy;

    #[test]
    fn entropy_examples() {
        assert!((entropy_h0(&[1, 1, 2, 2]) - 1.0).abs() < 1e-12);
        assert_eq!(entropy_hk(&[1, 2, 1, 2, 1, 2, 1, 2], 1).unwrap(), 0.0);
        assert_eq!(entropy_h0(&[5; 100]), 0.0);
        assert!(entropy_hk(&[1, 2], 4).is_err());
        let u = random_sequence(1_000_000, 4, 1);
        assert!((entropy_h0(&u) - 2.0).abs() < 0.01);
    }

    #[test]
    fn entropy_matches_oracle_and_chain() {
        for seed in 0..5 {
            let base = random_sequence(500, 6, seed);
            let s = gen_dna(&base, 6, 8, 0.05, seed).unwrap();
            let mut prev = (6f64).log2() + 1e-12;
            for k in 0..=MAX_ORDER {
                let h = entropy_hk(&s, k).unwrap();
                assert!((h - naive_entropy(&s, k)).abs() < 1e-9);
                assert!(h <= prev + 1e-12);
                prev = h;
            }
        }
    }

    #[test]
    fn dna_generation() {
        let base = random_sequence(1000, 4, 7);
        let exact = gen_dna(&base, 4, 3, 0.0, 1).unwrap();
        assert_eq!(exact, base.repeat(3));
        let flipped = gen_dna(&[1, 2, 2, 1], 2, 2, 1.0, 1).unwrap();
        assert_eq!(flipped, vec![2, 1, 1, 2, 2, 1, 1, 2]);
        assert_eq!(
            gen_dna(&base, 4, 5, 0.01, 9).unwrap(),
            gen_dna(&base, 4, 5, 0.01, 9).unwrap()
        );
        assert!(gen_dna(&[], 4, 2, 0.1, 0).is_err());
        assert!(gen_dna(&base, 4, 2, 1.5, 0).is_err());
    }

    #[test]
    fn mutation_rate_within_binomial_band() {
        let base = random_sequence(10_000, 4, 3);
        let p = 0.02;
        let s = gen_dna(&base, 4, 20, p, 11).unwrap();
        let total = s.len() as f64;
        let changed = s
            .iter()
            .zip(base.iter().cycle())
            .filter(|(a, b)| a != b)
            .count() as f64;
        let sd = (total * p * (1.0 - p)).sqrt();
        assert!((changed - total * p).abs() <= 3.0 * sd, "changed {changed}");
    }

    #[test]
    fn report_row() {
        let base = random_sequence(2000, 4, 1);
        let s = gen_dna(&base, 4, 50, 0.0001, 2).unwrap();
        let r = report("dna", &s, 4).unwrap();
        assert!(r.repair_bps < 0.15 * r.h[0]);
        assert!(r.bwt_runs_ratio < 0.1);
        assert_eq!(
            r.csv_row().split(',').count(),
            CorpusReport::CSV_HEADER.split(',').count()
        );
        assert!(r.csv_row().starts_with("dna,100000,4,"));
        let one = report("one", &[1; 50], 1).unwrap();
        assert_eq!(one.h[0], 0.0);
    }

    #[test]
    fn formats_roundtrip() {
        let s = vec![3, 1, 2, 3, 3];
        let bytes = encode_u32le(&s, 3).unwrap();
        assert_eq!(&bytes[..4], b"GCSQ");
        let l = decode(&bytes, Format::U32le).unwrap();
        assert_eq!((l.seq, l.sigma), (s.clone(), 3));
        assert!(decode(&bytes[..bytes.len() - 1], Format::U32le).is_err());
        let mut bad = bytes.clone();
        bad[16] = 9;
        assert!(decode(&bad, Format::U32le).is_err());

        let raw = encode_raw8(&[1, 4, 2, 3], DNA).unwrap();
        assert_eq!(raw, b"ATCG");
        let l = decode(b"zaz!", Format::Raw8).unwrap();
        assert_eq!(l.seq, vec![3, 2, 3, 1]);
        assert_eq!(l.sigma, 3);
        assert_eq!(l.bytes.unwrap(), b"!az".to_vec());
        assert!(decode(b"", Format::Raw8).is_err());
        assert!(encode_raw8(&[5], DNA).is_err());
    }
}
