use std::hint::black_box;

use criterion::{criterion_group, criterion_main, Criterion};
use setecc::analysis::{enumerate_ball, greedy_packing, WorkGuard};
use setecc::codec::EnsembleGuard;
use setecc::ecc::RsCode;
use setecc::sim::{random_below, random_pattern, trial_rng};
use setecc::{
    apply_pattern, AnchorCodec, BitString, ImprovedCodec, MultiSubCodec, Params, SetCodec,
    SingleSubCodec, Word,
};

fn params(m: usize, l: usize, k: usize) -> Params {
    Params::new(m, l, k).unwrap()
}

fn codec_pair(c: &mut Criterion, codec: &dyn SetCodec) {
    let p = codec.params();
    let mut rng = trial_rng(1, 0);
    let value = random_below(&mut rng, &codec.message_space());
    let word = codec.encode_value(&value).unwrap();
    let noisy = apply_pattern(&word, &random_pattern(&mut rng, p.m, p.l, p.k)).unwrap();
    let expect = codec.fingerprint(&value).unwrap();
    let name = codec.name();
    c.bench_function(&format!("{name}/encode"), |b| {
        b.iter(|| codec.encode_value(black_box(&value)).unwrap())
    });
    c.bench_function(&format!("{name}/decode_noisy"), |b| {
        b.iter(|| assert_eq!(codec.decode_fingerprint(black_box(&noisy)).unwrap(), expect))
    });
}

fn codecs(c: &mut Criterion) {
    codec_pair(c, &SingleSubCodec::new(params(32, 192, 1)).unwrap());
    codec_pair(c, &ImprovedCodec::new(params(32, 128, 1)).unwrap());
    codec_pair(
        c,
        &AnchorCodec::build(params(2, 64, 1), &EnsembleGuard::default()).unwrap(),
    );
    let mut g = c.benchmark_group("multi");
    g.sample_size(10);
    let multi = MultiSubCodec::new(params(128, 1280, 2)).unwrap();
    let mut rng = trial_rng(1, 0);
    let value = random_below(&mut rng, &multi.message_space());
    let word = multi.encode_value(&value).unwrap();
    let noisy = apply_pattern(&word, &random_pattern(&mut rng, 128, 1280, 2)).unwrap();
    g.bench_function("decode_noisy", |b| {
        b.iter(|| multi.decode_parts(black_box(&noisy)).unwrap())
    });
    g.finish();
}

fn substrate(c: &mut Criterion) {
    let rs = RsCode::for_data_bits(163_200, 2).unwrap();
    let data = BitString::from_bits((0..163_200).map(|i| i % 3 == 0));
    let red = rs.redundancy(&data).unwrap();
    let mut noisy = data.clone();
    noisy.flip(10);
    noisy.flip(90_000);
    c.bench_function("rs/correct_two_of_163200_bits", |b| {
        b.iter(|| {
            let mut d = noisy.clone();
            rs.correct_in_place(&mut d, &red).unwrap();
            d
        })
    });
    let guard = WorkGuard::default();
    let w = Word::parse_rows(&["00110", "01011", "11100"]).unwrap();
    c.bench_function("ball/M3_L5_K2", |b| {
        b.iter(|| enumerate_ball(black_box(&w), 2, &guard).unwrap())
    });
    c.bench_function("packing/M2_L4_K1", |b| {
        b.iter(|| greedy_packing(params(2, 4, 1), &guard).unwrap())
    });
}

criterion_group!(benches, codecs, substrate);
criterion_main!(benches);
