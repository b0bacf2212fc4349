mod common;

use std::sync::Arc;

use num_bigint::BigUint;
use setecc::codec::ensemble::{count_lower_bound, AnchorEnsemble};
use setecc::codec::EnsembleGuard;
use setecc::sim::{check, simulate, trial_rng, Outcome, PatternMode, Tally};
use setecc::{
    apply_pattern, AnchorCodec, AnchorMessage, BitString, ImprovedCodec, MultiSubCodec, Params,
    SetCodec, SingleSubCodec, SubstitutionPattern,
};

fn params(m: usize, l: usize, k: usize) -> Params {
    Params::new(m, l, k).unwrap()
}

#[test]
fn single_round_trip_distance_and_injectivity() {
    let codec = SingleSubCodec::new(params(32, 192, 1)).unwrap();
    let lay = codec.layout();
    assert_eq!((lay.t, lay.h, lay.d_len), (13, 5, 14));
    let mut words = Vec::new();
    for i in 0..40 {
        let s = common::sample(&codec, 11, i);
        assert_eq!(codec.decode_value(&s.word).unwrap(), s.value);
        assert!(s.word.min_distance().unwrap() >= 3);
        words.push((s.word, s.value));
    }
    words.sort();
    for w in words.windows(2) {
        assert!(w[0].0 != w[1].0 || w[0].1 == w[1].1);
    }
}

#[test]
fn single_exhaustive_flips() {
    let codec = SingleSubCodec::new(params(32, 192, 1)).unwrap();
    let t = simulate(&codec, 1, 2, PatternMode::Exhaustive).unwrap();
    assert_eq!(t.words, 2 * 6145);
    assert!(t.all_recovered(), "{t:?}");
}

#[test]
fn single_two_of_three_vectors_survive() {
    let codec = SingleSubCodec::new(params(32, 192, 1)).unwrap();
    let s = common::sample(&codec, 4, 0);
    let clean = codec.trace(&s.word).unwrap();
    assert!(clean.iter().all(Option::is_some));
    for pat in setecc::sim::single_flips(32, 192) {
        let got = codec.trace(&apply_pattern(&s.word, &pat).unwrap()).unwrap();
        let agree = got.iter().zip(&clean).filter(|(a, b)| a == b).count();
        assert!(agree >= 2, "{pat:?}");
    }
}

#[test]
fn single_scrambling_flip_in_first_part() {
    let codec = SingleSubCodec::new(params(32, 192, 1)).unwrap();
    let s = common::sample(&codec, 8, 0);
    // The top bit of a first-part identifier moves that row in the part-0 sort.
    for r in 0..32 {
        let w = apply_pattern(&s.word, &SubstitutionPattern::single(r, 0)).unwrap();
        assert_eq!(check(&codec, &w, &s.value), Outcome::Recovered);
    }
}

#[test]
fn single_rejects_two_flip_adversary_without_panicking() {
    let codec = SingleSubCodec::new(params(32, 192, 1)).unwrap();
    let s = common::sample(&codec, 9, 0);
    let pats = common::random_patterns(32, 192, 2, 200, 9);
    for p in pats.iter().filter(|p| p.weight() == 2) {
        // Beyond the budget the decoder may fail or miscorrect, never panic.
        let _ = codec.decode_value(&apply_pattern(&s.word, p).unwrap());
    }
}

#[test]
fn improved_layout_and_flips() {
    let codec = ImprovedCodec::new(params(32, 128, 1)).unwrap();
    let lay = codec.layout();
    assert_eq!((lay.payload, lay.t, lay.slack), (18, 12, 0));
    let t = simulate(&codec, 2, 2, PatternMode::Exhaustive).unwrap();
    assert!(t.all_recovered(), "{t:?}");
}

#[test]
fn improved_targeted_flips() {
    let codec = ImprovedCodec::new(params(32, 128, 1)).unwrap();
    for i in 0..3 {
        let s = common::sample(&codec, 21, i);
        let clean = codec.read_indicator(&s.word).unwrap();
        assert_eq!(clean.parity, clean.indicator);
        let (copies, second) = common::improved_targets(&codec, &s.word);
        for p in &copies {
            let w = apply_pattern(&s.word, p).unwrap();
            assert_eq!(codec.read_indicator(&w).unwrap().indicator, clean.indicator);
            assert_eq!(check(&codec, &w, &s.value), Outcome::Recovered);
        }
        for p in &second {
            let w = apply_pattern(&s.word, p).unwrap();
            let r = codec.read_indicator(&w).unwrap();
            assert_ne!(r.parity, r.indicator);
            assert_eq!(r.trusted_part, 0);
        }
        let mut tally = Tally::default();
        common::run_patterns(&codec, &s, &second, &mut tally);
        assert!(tally.all_recovered());
        let first = SubstitutionPattern::single(5, 3);
        let r = codec
            .read_indicator(&apply_pattern(&s.word, &first).unwrap())
            .unwrap();
        assert_eq!(r.trusted_part, 1);
    }
}

#[test]
fn improved_redundancy_in_bound() {
    let codec = ImprovedCodec::new(params(32, 128, 1)).unwrap();
    let r = setecc::analysis::bounds::redundancy(&codec);
    assert!(r <= 2.0 * 12.0 + 6.0 + 3.0);
}

#[test]
fn multi_random_and_adversarial() {
    let codec = MultiSubCodec::new(params(128, 1280, 2)).unwrap();
    let lay = codec.layout();
    assert_eq!(
        (lay.part_count, lay.d_len, lay.d_region, lay.s_region),
        (5, 28, 28, 72)
    );
    let s = common::sample(&codec, 31, 0);
    assert_eq!(codec.decode_value(&s.word).unwrap(), s.value);
    let mut tally = Tally::default();
    common::run_patterns(
        &codec,
        &s,
        &common::random_patterns(128, 1280, 2, 150, 31),
        &mut tally,
    );
    common::run_patterns(
        &codec,
        &s,
        &common::multi_adversarial(&codec, &s.word, 31, 4),
        &mut tally,
    );
    assert!(tally.all_recovered(), "{tally:?}");
}

#[test]
fn multi_one_substitution_agrees_with_single_flips() {
    let codec = MultiSubCodec::new(params(64, 384, 1)).unwrap();
    let s = common::sample(&codec, 41, 0);
    let mut tally = Tally::default();
    let pats: Vec<_> = setecc::sim::single_flips(64, 384).step_by(7).collect();
    common::run_patterns(&codec, &s, &pats, &mut tally);
    assert!(tally.all_recovered(), "{tally:?}");
}

#[test]
fn multi_fails_loudly_beyond_budget() {
    let codec = MultiSubCodec::new(params(128, 1280, 2)).unwrap();
    let s = common::sample(&codec, 51, 0);
    let g = codec.geometry();
    // Three rows with the top bit of part 0 flipped: three parts can disagree.
    let p = SubstitutionPattern::new([(0, 0), (1, g.ident_start(1)), (2, g.ident_start(2))], 3)
        .unwrap();
    if let Err(e) = codec.decode_value(&apply_pattern(&s.word, &p).unwrap()) {
        assert!(e.is_decode_failure(), "{e:?}");
    }
}

#[test]
fn anchor_structure_and_flips() {
    let codec = AnchorCodec::build(params(2, 64, 1), &EnsembleGuard::default()).unwrap();
    let lay = codec.layout();
    assert_eq!(
        (
            lay.anchor_len,
            lay.char_redundancy,
            lay.inner_region,
            lay.s_region,
            lay.d2_len
        ),
        (8, 32, 10, 14, 56)
    );
    assert_eq!(codec.ensemble().count(), 219);
    assert_eq!(BigUint::from(219u32), count_lower_bound(8, 2, 1));
    let s = common::sample(&codec, 61, 0);
    // The all-ones anchor sorts last.
    assert_eq!(s.word.rows()[1].slice(0, 8), BitString::ones(8));
    let t = simulate(&codec, 61, 30, PatternMode::Exhaustive).unwrap();
    assert!(t.all_recovered(), "{t:?}");
}

#[test]
fn anchor_row_one_redundancy_flips() {
    let codec = AnchorCodec::build(params(2, 64, 1), &EnsembleGuard::default()).unwrap();
    let lay = codec.layout();
    for d1 in [0u64, 100, 218] {
        let msg = AnchorMessage {
            d1,
            d2: BitString::from_bits((0..lay.d2_len).map(|i| (i + d1 as usize).is_multiple_of(3))),
        };
        let value = codec.pack(&msg).unwrap();
        let word = codec.encode(&msg).unwrap();
        let top = word.size() - 1;
        for c in 0..lay.anchor_len + lay.char_redundancy + lay.inner_region {
            let w = apply_pattern(&word, &SubstitutionPattern::single(top, c)).unwrap();
            assert_eq!(check(&codec, &w, &value), Outcome::Recovered, "col {c}");
        }
    }
}

#[test]
fn anchor_shared_ensemble_and_larger_m() {
    let guard = EnsembleGuard::default();
    let e = Arc::new(AnchorEnsemble::build(3, 1, &guard).unwrap());
    assert!(BigUint::from(e.count()) >= count_lower_bound(e.anchor_len(), 3, 1));
    let codec = AnchorCodec::new(params(3, 96, 1), e).unwrap();
    let t = simulate(&codec, 71, 3, PatternMode::Exhaustive).unwrap();
    assert!(t.all_recovered(), "{t:?}");
}

#[test]
fn anchor_two_substitutions() {
    let guard = EnsembleGuard::default();
    let codec = AnchorCodec::build(params(2, 512, 2), &guard).unwrap();
    let mut rng = trial_rng(81, 0);
    let s = common::sample(&codec, 81, 0);
    let mut tally = Tally::default();
    let pats: Vec<_> = (0..300)
        .map(|_| setecc::sim::random_pattern(&mut rng, 2, 512, 2))
        .collect();
    common::run_patterns(&codec, &s, &pats, &mut tally);
    assert!(tally.all_recovered(), "{tally:?}");
}

#[test]
fn hex_round_trip_of_messages() {
    use setecc::codec::message::{from_hex, to_hex};
    let codec = SingleSubCodec::new(params(32, 192, 1)).unwrap();
    let s = common::sample(&codec, 91, 0);
    assert_eq!(from_hex(&to_hex(&s.value)).unwrap(), s.value);
    assert!(codec.encode_value(&codec.message_space()).is_err());
}
