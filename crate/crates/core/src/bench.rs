//! Query workloads and timing.
//!
//! Workloads follow the usual protocol: `access` at uniform positions;
//! `rank` at a uniform position `p` for the symbol `S[p]`; `select` for the
//! symbol `S[p]` with a rank uniform in `[1, rank_{S[p]}(S, n)]`; `count`
//! for patterns cut from uniform text positions.

use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::container::AnyIndex;
use crate::oracle::naive_count;
use crate::seq::Rsa;
use crate::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Op {
    Access,
    Rank,
    Select,
    Count,
}

impl Op {
    pub fn name(self) -> &'static str {
        match self {
            Op::Access => "access",
            Op::Rank => "rank",
            Op::Select => "select",
            Op::Count => "count",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        [Op::Access, Op::Rank, Op::Select, Op::Count]
            .into_iter()
            .find(|o| o.name() == s)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Query {
    Access(usize),
    Rank(u32, usize),
    Select(u32, usize),
    Count(Vec<u32>),
}

/// Builds `q` queries of kind `op` over the sequence `s`. Patterns for
/// `count` have length `pattern_len` (clipped to `n`).
pub fn workload(s: &[u32], op: Op, q: usize, seed: u64, pattern_len: usize) -> Result<Vec<Query>> {
    if q == 0 {
        return Err(Error::param("query count must be positive"));
    }
    if s.is_empty() {
        return Err(Error::EmptyInput);
    }
    let n = s.len();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let counts = if op == Op::Select {
        let sigma = *s.iter().max().expect("non-empty") as usize;
        let mut c = vec![0usize; sigma + 1];
        for &a in s {
            c[a as usize] += 1;
        }
        c
    } else {
        Vec::new()
    };
    let m = pattern_len.clamp(1, n);
    Ok((0..q)
        .map(|_| {
            let p = rng.gen_range(1..=n);
            match op {
                Op::Access => Query::Access(p),
                Op::Rank => Query::Rank(s[p - 1], p),
                Op::Select => {
                    let a = s[p - 1];
                    Query::Select(a, rng.gen_range(1..=counts[a as usize]))
                }
                Op::Count => {
                    let start = rng.gen_range(0..=n - m);
                    Query::Count(s[start..start + m].to_vec())
                }
            }
        })
        .collect())
}

/// Answers one query. Structures without `count` reject it, and the
/// FM-index only answers `count`.
pub fn answer(index: &AnyIndex, q: &Query) -> Result<u64> {
    match (index, q) {
        (AnyIndex::Seq(x), Query::Access(i)) => x.access(*i).map(u64::from),
        (AnyIndex::Seq(x), Query::Rank(a, i)) => x.rank(*a, *i).map(|v| v as u64),
        (AnyIndex::Seq(x), Query::Select(a, j)) => x.select(*a, *j).map(|v| v as u64),
        (AnyIndex::Fm(f), Query::Count(p)) => f.count(p).map(|v| v as u64),
        (AnyIndex::Seq(_), Query::Count(_)) => Err(Error::param("count needs an FM-index")),
        (AnyIndex::Fm(_), _) => Err(Error::param("an FM-index answers only count")),
    }
}

/// Answers and average time per query in microseconds.
#[derive(Clone, Debug)]
pub struct Timing {
    pub answers: Vec<u64>,
    pub avg_micros: f64,
}

/// Runs `queries` from `threads` readers sharing `index`. Each thread takes
/// a contiguous slice; the reported time is the summed per-thread busy time
/// over the number of queries.
pub fn run(index: &AnyIndex, queries: &[Query], threads: usize) -> Result<Timing> {
    if queries.is_empty() {
        return Err(Error::param("query count must be positive"));
    }
    let threads = threads.clamp(1, queries.len());
    let chunk = queries.len().div_ceil(threads);
    let parts: Vec<Result<(Vec<u64>, f64)>> = std::thread::scope(|scope| {
        let handles: Vec<_> = queries
            .chunks(chunk)
            .map(|part| {
                scope.spawn(move || {
                    let start = Instant::now();
                    let mut out = Vec::with_capacity(part.len());
                    for q in part {
                        out.push(answer(index, q)?);
                    }
                    Ok((out, start.elapsed().as_secs_f64()))
                })
            })
            .collect();
        handles
            .into_iter()
            .map(|h| h.join().expect("query thread panicked"))
            .collect()
    });
    let mut answers = Vec::with_capacity(queries.len());
    let mut busy = 0.0;
    for p in parts {
        let (a, t) = p?;
        answers.extend(a);
        busy += t;
    }
    Ok(Timing {
        answers,
        avg_micros: busy * 1e6 / queries.len() as f64,
    })
}

/// Answers queries from the plain sequence: occurrence lists for symbol
/// queries and a sliding scan for `count`.
pub struct Reference<'a> {
    s: &'a [u32],
    occ: Vec<Vec<usize>>,
}

impl<'a> Reference<'a> {
    pub fn new(s: &'a [u32]) -> Self {
        let sigma = s.iter().copied().max().unwrap_or(0) as usize;
        let mut occ = vec![Vec::new(); sigma + 1];
        for (i, &a) in s.iter().enumerate() {
            occ[a as usize].push(i + 1);
        }
        Self { s, occ }
    }

    pub fn answer(&self, q: &Query) -> Option<u64> {
        let list = |a: u32| self.occ.get(a as usize).map(Vec::as_slice).unwrap_or(&[]);
        match q {
            Query::Access(i) => self.s.get(i.checked_sub(1)?).map(|&a| a as u64),
            Query::Rank(a, i) => Some(list(*a).partition_point(|&p| p <= *i) as u64),
            Query::Select(_, 0) => Some(0),
            Query::Select(a, j) => list(*a).get(j - 1).map(|&p| p as u64),
            Query::Count(p) => Some(naive_count(self.s, p) as u64),
        }
    }
}

/// Number of answers that disagree with [`Reference`].
pub fn verify(s: &[u32], queries: &[Query], answers: &[u64]) -> usize {
    let reference = Reference::new(s);
    queries
        .iter()
        .zip(answers)
        .filter(|(q, &a)| reference.answer(q) != Some(a))
        .count()
}

/// The sequence behind an index: the indexed sequence, or the FM-index text.
pub fn source_sequence(index: &AnyIndex) -> Result<Vec<u32>> {
    match index {
        AnyIndex::Seq(x) => Ok(x.extract_all()),
        AnyIndex::Fm(f) => f.invert(),
    }
}

/// One benchmark CSV row.
#[derive(Clone, Debug)]
pub struct BenchRow {
    pub structure: String,
    pub op: Op,
    pub bits_per_symbol: f64,
    pub avg_micros: f64,
}

impl BenchRow {
    pub const CSV_HEADER: &'static str = "structure,op,bits_per_symbol,avg_microseconds";

    pub fn csv_row(&self) -> String {
        format!(
            "{},{},{:.4},{:.4}",
            self.structure,
            self.op.name(),
            self.bits_per_symbol,
            self.avg_micros
        )
    }
}
