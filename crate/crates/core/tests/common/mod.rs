//! Harnesses shared by the integration tests and the acceptance run.
#![allow(dead_code)]

use num_bigint::BigUint;
use rand::seq::index::sample as pick;
use rand::Rng;
use setecc::codec::parts::PartGeometry;
use setecc::ecc::{HammingCode, RsCode};
use setecc::sim::{check_fingerprint, random_below, random_pattern, trial_rng, Outcome, Tally};
use setecc::{
    apply_pattern, BitString, ImprovedCodec, MultiSubCodec, SetCodec, SubstitutionPattern, Word,
};

/// Every data word and every single flip of the whole codeword; returns
/// `(checked, failures)`.
pub fn hamming_exhaustive(data_len: usize) -> (u64, u64) {
    let code = HammingCode::for_data_len(data_len).unwrap();
    let t = code.t();
    let (mut checked, mut failed) = (0, 0);
    for d in 0u64..1 << data_len {
        let data = BitString::from_u64(d, data_len);
        let red = code.redundancy(&data).unwrap();
        for pos in 0..data_len + t {
            let (mut dd, mut rr) = (data.clone(), red.clone());
            if pos < data_len {
                dd.flip(pos);
            } else {
                rr.flip(pos - data_len);
            }
            checked += 1;
            if code.correct(&dd, &rr).ok().as_ref() != Some(&data) {
                failed += 1;
            }
        }
    }
    (checked, failed)
}

type ErrorVisitor<'a> = dyn FnMut(&[(usize, u32)]) + 'a;

/// Every error vector touching at most `e` of `n` positions, each nonzero
/// in GF(2^m), applied to `word`.
fn for_each_error(n: usize, e: usize, order: u32, mut f: impl FnMut(&[(usize, u32)])) {
    fn rec(
        n: usize,
        e: usize,
        order: u32,
        start: usize,
        cur: &mut Vec<(usize, u32)>,
        f: &mut ErrorVisitor,
    ) {
        f(cur);
        if cur.len() == e {
            return;
        }
        for p in start..n {
            for v in 1..=order {
                cur.push((p, v));
                rec(n, e, order, p + 1, cur, f);
                cur.pop();
            }
        }
    }
    rec(n, e, order, 0, &mut Vec::new(), &mut f);
}

fn random_codeword<R: Rng>(code: &RsCode, rng: &mut R) -> Vec<u32> {
    let q = 1u32 << code.m();
    let mut w: Vec<u32> = (0..code.k_symbols())
        .map(|_| rng.random_range(0..q))
        .collect();
    let parity = code.encode_symbols(&w);
    w.extend(parity);
    w
}

/// GF(16), `[15, 11]`: random codewords under every error pattern of at
/// most two symbols must decode back.
pub fn rs_full_length(codewords: u64, seed: u64) -> (u64, u64) {
    let code = RsCode::new(4, 11, 2).unwrap();
    let (mut checked, mut failed) = (0, 0);
    for i in 0..codewords {
        let cw = random_codeword(&code, &mut trial_rng(seed, i));
        for_each_error(15, 2, 15, |errs| {
            let mut w = cw.clone();
            for &(p, v) in errs {
                w[p] ^= v;
            }
            checked += 1;
            if code.decode_symbols(&mut w).is_err() || w != cw {
                failed += 1;
            }
        });
    }
    (checked, failed)
}

/// GF(16), shortened `[7, 3]`: the decoder must agree with a scan over all
/// 4096 codewords for the nearest one, for every error of at most two
/// symbols.
pub fn rs_nearest_oracle(codewords: u64, seed: u64) -> (u64, u64) {
    let code = RsCode::new(4, 3, 2).unwrap();
    let all: Vec<Vec<u32>> = (0u32..4096)
        .map(|x| {
            let mut w = vec![x >> 8, x >> 4 & 15, x & 15];
            let parity = code.encode_symbols(&w);
            w.extend(parity);
            w
        })
        .collect();
    let dist = |a: &[u32], b: &[u32]| a.iter().zip(b).filter(|(x, y)| x != y).count();
    let (mut checked, mut failed) = (0, 0);
    for i in 0..codewords {
        let cw = random_codeword(&code, &mut trial_rng(seed, i));
        for_each_error(7, 2, 15, |errs| {
            let mut w = cw.clone();
            for &(p, v) in errs {
                w[p] ^= v;
            }
            let mut best = (usize::MAX, 0usize, 0usize);
            for (j, c) in all.iter().enumerate() {
                let d = dist(&w, c);
                if d < best.0 {
                    best = (d, j, 1);
                } else if d == best.0 {
                    best.2 += 1;
                }
            }
            let nearest = &all[best.1];
            let ok =
                best.2 == 1 && best.0 <= 2 && code.decode_symbols(&mut w).is_ok() && &w == nearest;
            checked += 1;
            if !ok {
                failed += 1;
            }
        });
    }
    (checked, failed)
}

/// Encoded random message with its fingerprint.
pub struct Sample {
    pub word: Word,
    pub value: BigUint,
    pub expect: setecc::Fingerprint,
}

pub fn sample<C: SetCodec + ?Sized>(codec: &C, seed: u64, i: u64) -> Sample {
    let mut rng = trial_rng(seed, i);
    let value = random_below(&mut rng, &codec.message_space());
    Sample {
        word: codec.encode_value(&value).unwrap(),
        expect: codec.fingerprint(&value).unwrap(),
        value,
    }
}

pub fn run_patterns<C: SetCodec + ?Sized>(
    codec: &C,
    s: &Sample,
    patterns: &[SubstitutionPattern],
    tally: &mut Tally,
) {
    for p in patterns {
        tally.record(&check_fingerprint(
            codec,
            &apply_pattern(&s.word, p).unwrap(),
            &s.expect,
        ));
    }
}

/// Flip position of part-ordered slot `slot` of reserved column `j`.
fn reserved_cell(g: &PartGeometry, word: &Word, j: usize, slot: usize) -> (usize, usize) {
    let order = g.order_by_part(word.rows(), j);
    (order[slot], g.reserved_col(j))
}

/// The four indicator copies, then every second-half cell that is not one.
pub fn improved_targets(
    codec: &ImprovedCodec,
    word: &Word,
) -> (Vec<SubstitutionPattern>, Vec<SubstitutionPattern>) {
    let g = codec.geometry();
    let mut copies = Vec::new();
    for j in 0..2 {
        for slot in [g.m - 2, g.m - 1] {
            let (r, c) = reserved_cell(&g, word, j, slot);
            copies.push(SubstitutionPattern::single(r, c));
        }
    }
    let second = (0..g.m)
        .flat_map(|r| (g.width..g.l).map(move |c| SubstitutionPattern::single(r, c)))
        .filter(|p| !copies.contains(p))
        .collect();
    (copies, second)
}

/// Adversarial weight-2 patterns for the `2K+1`-part codec: both flips in
/// one part's identifiers, flips in reserved columns, and flips in the RS
/// redundancy regions of the columns.
pub fn multi_adversarial(
    codec: &MultiSubCodec,
    word: &Word,
    seed: u64,
    per_class: usize,
) -> Vec<SubstitutionPattern> {
    let g = codec.geometry();
    let lay = codec.layout();
    let mut rng = trial_rng(seed, u64::MAX);
    let mut out = Vec::new();
    let pair = |a: (usize, usize), b: (usize, usize)| SubstitutionPattern::new([a, b], 2).unwrap();
    for j in 0..g.parts {
        let start = g.ident_start(j);
        // Same part, random rows (possibly the same row).
        for _ in 0..per_class {
            let idx = pick(&mut rng, g.m * g.ident, 2);
            let cell = |p: usize| (p / g.ident, start + p % g.ident);
            out.push(pair(cell(idx.index(0)), cell(idx.index(1))));
        }
        // Same row, same part: can reorder the part and scramble one row.
        for _ in 0..per_class {
            let r = rng.random_range(0..g.m);
            let cs = pick(&mut rng, g.ident, 2);
            out.push(pair((r, start + cs.index(0)), (r, start + cs.index(1))));
        }
        // Top bits of two rows, which move them the furthest in the sort.
        for _ in 0..per_class {
            let rs = pick(&mut rng, g.m, 2);
            out.push(pair((rs.index(0), start), (rs.index(1), start)));
        }
    }
    // Reserved columns: in one column and across columns.
    for _ in 0..per_class * g.parts {
        let j1 = rng.random_range(0..g.parts);
        let j2 = rng.random_range(0..g.parts);
        let rs = pick(&mut rng, g.m, 2);
        out.push(pair(
            (rs.index(0), g.reserved_col(j1)),
            (rs.index(1), g.reserved_col(j2)),
        ));
    }
    // RS redundancy regions, addressed through each part's own order.
    let d_red = lay.d_len..lay.d_len + lay.d_redundancy;
    let s_start = lay.d_len + lay.d_region;
    let s_red = s_start..s_start + lay.s_redundancy;
    for j in 0..g.parts {
        let slots: Vec<usize> = d_red.clone().chain(s_red.clone()).collect();
        for _ in 0..per_class {
            let a = slots[rng.random_range(0..slots.len())];
            let b = slots[rng.random_range(0..slots.len())];
            let ca = reserved_cell(&g, word, j, a);
            let cb = reserved_cell(&g, word, j, b);
            if ca == cb {
                out.push(SubstitutionPattern::single(ca.0, ca.1));
            } else {
                out.push(pair(ca, cb));
            }
        }
        // One redundancy flip plus one identifier flip in the same part.
        for _ in 0..per_class {
            let a = slots[rng.random_range(0..slots.len())];
            let ca = reserved_cell(&g, word, j, a);
            let cb = (
                rng.random_range(0..g.m),
                g.ident_start(j) + rng.random_range(0..g.ident),
            );
            out.push(pair(ca, cb));
        }
    }
    out
}

/// Random patterns of weight `1..=max_weight`.
pub fn random_patterns(
    m: usize,
    l: usize,
    max_weight: usize,
    n: usize,
    seed: u64,
) -> Vec<SubstitutionPattern> {
    let mut rng = trial_rng(seed, u64::MAX - 1);
    (0..n)
        .map(|_| {
            let w = rng.random_range(1..=max_weight);
            random_pattern(&mut rng, m, l, w)
        })
        .collect()
}

pub fn outcome_ok(o: &Outcome) -> bool {
    *o == Outcome::Recovered
}
