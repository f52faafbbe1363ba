use gcseq::bitio::{
    decode_delta, decode_gamma, decode_vbyte, encode_delta, encode_gamma, encode_vbyte, read_delta,
    read_gamma, write_delta, write_gamma, BitBuffer,
};
use gcseq::bitvector::{Bitmap, BitmapKind, RankSelect};
use gcseq::dac::{optimize_widths, Dac, DacWidths};
use gcseq::oracle::{naive_bit_rank, naive_bit_select};
use gcseq::persist::{Persist, Reader, Writer};
use proptest::prelude::*;

/// Length of the gamma code of `x`, from its definition.
fn gamma_len(x: u64) -> usize {
    2 * (63 - x.leading_zeros() as usize) + 1
}

#[test]
fn gamma_and_delta_code_lengths() {
    assert_eq!(encode_gamma(1).unwrap().to_bit_string(), "1");
    assert_eq!(encode_gamma(5).unwrap().to_bit_string(), "00101");
    assert_eq!(encode_delta(1).unwrap().to_bit_string(), "1");
    assert_eq!(encode_delta(5).unwrap().to_bit_string(), "01101");
    for x in 1..=1u64 << 12 {
        assert_eq!(encode_gamma(x).unwrap().len(), gamma_len(x));
        let k = 64 - x.leading_zeros() as u64;
        assert_eq!(
            encode_delta(x).unwrap().len(),
            gamma_len(k) + k as usize - 1
        );
    }
    assert!(encode_gamma(0).is_err());
    assert!(encode_delta(0).is_err());
}

#[test]
fn extreme_values() {
    for x in [u64::MAX, u64::MAX - 1, 1 << 63, (1 << 63) - 1] {
        assert_eq!(read_delta(&encode_delta(x).unwrap(), 0).unwrap().0, x);
        assert_eq!(read_gamma(&encode_gamma(x).unwrap(), 0).unwrap().0, x);
        let mut v = Vec::new();
        encode_vbyte(x, &mut v);
        assert_eq!(decode_vbyte(&v, 0).unwrap(), (x, v.len()));
    }
    let mut v = Vec::new();
    encode_vbyte(0, &mut v);
    assert_eq!(v, vec![0]);
}

#[test]
fn truncated_streams_fail() {
    let b = encode_delta(1000).unwrap();
    let cut = BitBuffer::from_bits(b.iter().take(b.len() - 1));
    assert!(decode_delta(&cut, 0).is_err());
    let g = encode_gamma(1000).unwrap();
    let cut = BitBuffer::from_bits(g.iter().take(g.len() - 1));
    assert!(decode_gamma(&cut, 0).is_err());
    assert!(decode_vbyte(&[0x80, 0x80], 0).is_err());
    assert!(decode_vbyte(&[0xff; 11], 0).is_err());
}

#[test]
fn concatenated_streams_decode_in_order() {
    let values: Vec<u64> = (1..2000u64).map(|i| i * i * 31 % 100_003 + 1).collect();
    let mut buf = BitBuffer::new();
    for &v in &values {
        write_gamma(&mut buf, v).unwrap();
        write_delta(&mut buf, v).unwrap();
    }
    let mut pos = 0;
    for &v in &values {
        let (g, p) = read_gamma(&buf, pos).unwrap();
        let (d, q) = read_delta(&buf, p).unwrap();
        assert_eq!((g, d), (v, v));
        pos = q;
    }
    assert_eq!(pos, buf.len());
}

#[test]
fn dac_layers_follow_the_chunks() {
    // widths 2: 5 = 01|01, 1 = 01, 9 = 10|01
    let d = Dac::with_widths(&[5, 1, 9], &DacWidths::Fixed(2)).unwrap();
    assert_eq!(d.num_layers(), 2);
    assert_eq!(d.layer_chunks(0), vec![1, 1, 1]);
    assert_eq!(d.layer_chunks(1), vec![1, 2]);
    assert_eq!(d.iter().collect::<Vec<_>>(), vec![5, 1, 9]);
    assert!(Dac::with_widths(&[1], &DacWidths::Fixed(0)).is_err());
    assert!(Dac::with_widths(&[1], &DacWidths::PerLayer(vec![])).is_err());
    let empty = Dac::new(&[]);
    assert!(empty.is_empty());
}

#[test]
fn optimized_widths_never_lose_to_fixed_widths() {
    let values: Vec<u64> = (0..5000u64)
        .map(|i| if i % 50 == 0 { i * 1000 } else { i % 7 })
        .collect();
    let best = Dac::new(&values).size_in_bits();
    for b in 1..=16u8 {
        let fixed = Dac::with_widths(&values, &DacWidths::Fixed(b)).unwrap();
        assert!(best <= fixed.size_in_bits(), "width {b}");
    }
    assert!(!optimize_widths(&values).is_empty());
}

proptest! {
    #[test]
    fn codes_roundtrip(x in 1u64..=u64::MAX) {
        prop_assert_eq!(decode_gamma(&encode_gamma(x).unwrap(), 0).unwrap().0, x);
        prop_assert_eq!(decode_delta(&encode_delta(x).unwrap(), 0).unwrap().0, x);
        let mut v = Vec::new();
        encode_vbyte(x, &mut v);
        prop_assert_eq!(decode_vbyte(&v, 0).unwrap().0, x);
    }

    #[test]
    fn dac_roundtrip(values in prop::collection::vec(prop_oneof![0u64..16, 0u64..100_000, any::<u64>()], 0..500),
                     width in 1u8..=64) {
        let d = Dac::new(&values);
        prop_assert_eq!(d.len(), values.len());
        for (i, &v) in values.iter().enumerate() {
            prop_assert_eq!(d.get(i), v);
        }
        let f = Dac::with_widths(&values, &DacWidths::Fixed(width)).unwrap();
        prop_assert_eq!(f.iter().collect::<Vec<_>>(), values.clone());
        let mut w = Writer::new();
        d.save(&mut w);
        let bytes = w.into_bytes();
        let back = Dac::load(&mut Reader::new(&bytes)).unwrap();
        prop_assert_eq!(back.iter().collect::<Vec<_>>(), values);
    }

    #[test]
    fn bitmaps_agree_with_oracle(bits in prop::collection::vec(prop::bool::weighted(0.2), 0..3000)) {
        let ones = bits.iter().filter(|&&b| b).count();
        for kind in [BitmapKind::Plain, BitmapKind::Rrr, BitmapKind::Delta] {
            let b = Bitmap::build(kind, &bits);
            prop_assert_eq!(b.len(), bits.len());
            prop_assert_eq!(b.count_ones(), ones);
            for i in (0..=bits.len()).step_by(7) {
                prop_assert_eq!(b.rank1(i), naive_bit_rank(&bits, true, i));
                prop_assert_eq!(b.rank0(i), naive_bit_rank(&bits, false, i));
            }
            for j in 0..=ones + 1 {
                prop_assert_eq!(b.select1(j), naive_bit_select(&bits, true, j));
            }
            for j in (0..=bits.len() - ones + 1).step_by(5) {
                prop_assert_eq!(b.select0(j), naive_bit_select(&bits, false, j));
            }
        }
    }
}
