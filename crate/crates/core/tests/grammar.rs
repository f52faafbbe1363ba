mod common;

use common::sequence;
use gcseq::fmindex::{bwt, FmIndex};
use gcseq::gcc::{GccConfig, GccIndex};
use gcseq::oracle::{naive_bwt, naive_count, naive_expand};
use gcseq::repair::{compress, Grammar};
use gcseq::{Rsa, StructureSpec};
use proptest::prelude::*;

fn check_grammar(g: &Grammar, s: &[u32], sigma: u32) {
    assert_eq!(g.decompress(), s);
    assert_eq!(naive_expand(sigma, g.rules(), g.seq()), s);
    for (k, &(y, z)) in g.rules().iter().enumerate() {
        let x = sigma + 1 + k as u32;
        assert!(y < x && z < x && y >= 1 && z >= 1);
    }
    // no pair of adjacent symbols in C repeats without overlap
    let c = g.seq();
    let mut seen = std::collections::HashMap::new();
    for i in 0..c.len().saturating_sub(1) {
        if let Some(&j) = seen.get(&(c[i], c[i + 1])) {
            assert!(i == j + 1, "pair {:?} repeats in C", (c[i], c[i + 1]));
        } else {
            seen.insert((c[i], c[i + 1]), i);
        }
    }
    let back = Grammar::from_bytes(&g.to_bytes()).unwrap();
    assert_eq!(&back, g);
}

#[test]
fn repetitive_input_compresses() {
    let s = sequence(20_000, 4, true, 1);
    let g = compress(&s, 4, true).unwrap();
    check_grammar(&g, &s, 4);
    let st = g.stats();
    assert!(st.bits_plain < 2 * s.len() as u64);
    assert!(st.height as f64 <= 8.0 * (s.len() as f64).log2());
}

#[test]
fn resolve_matches_expansion() {
    let s = sequence(5000, 6, true, 2);
    for delta in [0, 1, 2, 4] {
        let g = GccIndex::build(&s, 6, GccConfig::sequence(256, 4, delta)).unwrap();
        let gr = g.grammar();
        for x in (1..=g.r() as u32).step_by(3) {
            let exp = if x <= 6 {
                vec![x]
            } else {
                gr.expand_prefix(x, usize::MAX)
            };
            assert_eq!(g.resolve_length(x).unwrap(), exp.len() as u64);
            for a in 1..=6 {
                let want = exp.iter().filter(|&&b| b == a).count() as u64;
                assert_eq!(g.resolve_count(x, a).unwrap(), want);
            }
            if delta > 0 {
                assert!(g.resolve_visits(x).unwrap() <= 2 * delta as usize);
            }
        }
    }
}

#[test]
fn sampling_more_rules_costs_more_counters() {
    let s = sequence(30_000, 4, true, 5);
    let sizes: Vec<usize> = [0, 1, 2, 4]
        .iter()
        .map(|&d| {
            GccIndex::build(&s, 4, GccConfig::sequence(1024, 8, d))
                .unwrap()
                .space()
                .counters
        })
        .collect();
    assert!(sizes.windows(2).all(|w| w[0] >= w[1]), "{sizes:?}");
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn repair_roundtrip(raw in prop::collection::vec(0u32..5, 1..600), balanced in any::<bool>()) {
        let s: Vec<u32> = raw.iter().map(|x| x + 1).collect();
        let g = compress(&s, 5, balanced).unwrap();
        check_grammar(&g, &s, 5);
    }

    #[test]
    fn repair_roundtrip_periodic(period in prop::collection::vec(1u32..4, 1..12), copies in 1usize..80) {
        let s = period.repeat(copies);
        let g = compress(&s, 3, true).unwrap();
        check_grammar(&g, &s, 3);
    }

    #[test]
    fn bwt_and_counts(raw in prop::collection::vec(0u32..4, 1..300), pat in prop::collection::vec(1u32..=4, 1..5)) {
        let t: Vec<u32> = raw.iter().map(|x| x + 1).collect();
        prop_assert_eq!(bwt(&t), naive_bwt(&t));
        let fm = FmIndex::build(&t, 4, &StructureSpec::Gcc(GccConfig::sequence(32, 4, 1))).unwrap();
        prop_assert_eq!(fm.count(&pat).unwrap(), naive_count(&t, &pat));
        prop_assert_eq!(fm.invert().unwrap(), t.clone());
        // the stored BWT is the transform shifted by one
        let stored = fm.bwt_index().extract_all();
        prop_assert_eq!(stored, bwt(&t).iter().map(|x| x + 1).collect::<Vec<_>>());
    }
}
