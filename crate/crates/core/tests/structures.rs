mod common;

use common::{catalogue, compare, sequence, Oracle};
use gcseq::container::AnyIndex;
use gcseq::{Rsa, SeqIndex};
use proptest::prelude::*;

fn check_all(s: &[u32], sigma: u32, turn: usize) {
    let o = Oracle::new(s, sigma);
    for (name, spec) in catalogue(turn) {
        let idx = spec
            .build(s, sigma)
            .unwrap_or_else(|e| panic!("{name}: {e}"));
        if let Err(e) = compare(&idx, &o, 300, 300, turn as u64) {
            panic!("{name} on n={} sigma={sigma}: {e}", s.len());
        }
    }
}

#[test]
fn single_position() {
    for sigma in [1, 2, 7, 300] {
        for turn in 0..4 {
            check_all(&[sigma], sigma, turn);
            check_all(&[1], sigma, turn);
        }
    }
}

#[test]
fn unary_alphabet() {
    for turn in 0..4 {
        check_all(&[1; 700], 1, turn);
    }
}

#[test]
fn symbols_absent_from_the_sequence() {
    // only even symbols occur
    let s: Vec<u32> = (0..600u32).map(|i| 2 * (i * 7 % 9 + 1)).collect();
    for turn in 0..4 {
        check_all(&s, 20, turn);
    }
}

#[test]
fn every_configuration_on_repetitive_input() {
    let s = sequence(4000, 16, true, 3);
    for turn in 0..16 {
        check_all(&s, 16, turn);
    }
}

#[test]
fn container_roundtrip_for_every_structure() {
    let s = sequence(3000, 40, true, 9);
    for turn in 0..4 {
        for (name, spec) in catalogue(turn) {
            let idx = spec.build(&s, 40).unwrap();
            let any = AnyIndex::Seq(idx.clone());
            let back = match AnyIndex::from_bytes(&any.to_bytes()).unwrap() {
                AnyIndex::Seq(b) => b,
                AnyIndex::Fm(_) => panic!("{name}: wrong kind"),
            };
            assert_eq!(back.size_in_bits(), idx.size_in_bits(), "{name}");
            assert_eq!(back.extract_all(), s, "{name}");
        }
    }
}

#[test]
fn errors_are_reported() {
    for (name, spec) in catalogue(0) {
        assert!(spec.build(&[], 3).is_err(), "{name}");
        assert!(spec.build(&[1, 4], 3).is_err(), "{name}");
        assert!(spec.build(&[0], 3).is_err(), "{name}");
        let idx: SeqIndex = spec.build(&[1, 2, 3], 3).unwrap();
        assert!(idx.access(0).is_err(), "{name}");
        assert!(idx.access(4).is_err(), "{name}");
        assert!(idx.rank(4, 1).is_err(), "{name}");
        assert!(idx.rank(1, 4).is_err(), "{name}");
        assert!(idx.select(0, 1).is_err(), "{name}");
        assert!(idx.select(1, 2).is_err(), "{name}");
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn random_sequences_agree_with_oracle(
        sigma in prop::sample::select(vec![1u32, 2, 3, 4, 16, 100, 300]),
        raw in prop::collection::vec(any::<u32>(), 1..400),
        turn in 0usize..16,
    ) {
        let s: Vec<u32> = raw.iter().map(|x| x % sigma + 1).collect();
        check_all(&s, sigma, turn);
    }

    #[test]
    fn rank_of_select_is_identity(
        raw in prop::collection::vec(0u32..6, 1..300),
        turn in 0usize..16,
    ) {
        let s: Vec<u32> = raw.iter().map(|x| x + 1).collect();
        for (name, spec) in catalogue(turn) {
            let idx = spec.build(&s, 6).unwrap();
            for a in 1..=6 {
                let total = idx.rank(a, s.len()).unwrap();
                for j in 1..=total {
                    let p = idx.select(a, j).unwrap();
                    prop_assert_eq!(idx.rank(a, p).unwrap(), j, "{}", name);
                    prop_assert_eq!(idx.access(p).unwrap(), a, "{}", name);
                }
            }
        }
    }
}
