mod common;

use setecc::ecc::{rs_correct, rs_redundancy, RsCode};
use setecc::BitString;

#[test]
fn hamming_7_4_and_15_11_exhaustive() {
    assert_eq!(common::hamming_exhaustive(4), (16 * 7, 0));
    assert_eq!(common::hamming_exhaustive(11), (2048 * 15, 0));
}

#[test]
fn rs_gf16_full_length_sampled() {
    let (checked, failed) = common::rs_full_length(20, 3);
    assert_eq!(checked, 20 * 23851);
    assert_eq!(failed, 0);
}

#[test]
fn rs_gf16_matches_nearest_codeword() {
    let (checked, failed) = common::rs_nearest_oracle(2, 5);
    assert_eq!(checked, 2 * 4831);
    assert_eq!(failed, 0);
}

#[test]
fn rs_binary_redundancy_length() {
    let data = BitString::from_bits((0..256).map(|i| i % 3 == 0));
    assert_eq!(rs_redundancy(&data, 2).unwrap().len(), 32);
    let zeros = BitString::zeros(256);
    assert_eq!(rs_redundancy(&zeros, 2).unwrap(), BitString::zeros(32));
}

#[test]
fn rs_binary_corrects_flips_in_budget_symbols() {
    let data = BitString::from_bits((0..300).map(|i| (i * 7) % 5 < 2));
    let red = rs_redundancy(&data, 2).unwrap();
    assert_eq!(rs_correct(&data, &red, 2).unwrap(), data);
    let code = RsCode::for_data_bits(300, 2).unwrap();
    let m = code.m() as usize;
    // Every bit of two whole symbols flipped at once.
    let mut bad = data.clone();
    for p in (m..2 * m).chain(10 * m..11 * m) {
        bad.flip(p);
    }
    assert_eq!(rs_correct(&bad, &red, 2).unwrap(), data);
}
