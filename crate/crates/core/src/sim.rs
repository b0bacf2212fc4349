//! Seeded channel simulation: random messages, random or exhaustive
//! substitution patterns, and a tally of decoder outcomes.

use std::collections::BTreeMap;

use num_bigint::BigUint;
use num_traits::Zero;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::codec::{Fingerprint, SetCodec};
use crate::error::Result;
use crate::word::{apply_pattern, SubstitutionPattern, Word};

pub fn splitmix64(mut x: u64) -> u64 {
    x = x.wrapping_add(0x9e37_79b9_7f4a_7c15);
    x = (x ^ (x >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    x = (x ^ (x >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    x ^ (x >> 31)
}

/// Generator for trial `i` of a run seeded with `seed`.
pub fn trial_rng(seed: u64, i: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(splitmix64(seed ^ i))
}

/// Uniform integer in `[0, n)` by rejection sampling. `n` must be positive.
pub fn random_below<R: Rng + ?Sized>(rng: &mut R, n: &BigUint) -> BigUint {
    assert!(!n.is_zero(), "empty range");
    let bits = n.bits();
    let bytes = bits.div_ceil(8) as usize;
    let excess = bytes as u64 * 8 - bits;
    let mut buf = vec![0u8; bytes];
    loop {
        rng.fill(buf.as_mut_slice());
        buf[0] &= 0xff >> excess;
        let x = BigUint::from_bytes_be(&buf);
        if &x < n {
            return x;
        }
    }
}

/// `weight` distinct positions in an `m x l` word, chosen uniformly.
pub fn random_pattern<R: Rng + ?Sized>(
    rng: &mut R,
    m: usize,
    l: usize,
    weight: usize,
) -> SubstitutionPattern {
    let idx = rand::seq::index::sample(rng, m * l, weight.min(m * l));
    SubstitutionPattern::from_distinct(idx.iter().map(|p| (p / l, p % l)).collect(), weight)
        .expect("weight within budget")
}

/// Every single-flip pattern, row major.
pub fn single_flips(m: usize, l: usize) -> impl Iterator<Item = SubstitutionPattern> {
    (0..m).flat_map(move |r| (0..l).map(move |c| SubstitutionPattern::single(r, c)))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Outcome {
    Recovered,
    /// Decoding succeeded but produced another message.
    Wrong,
    /// Decoding failed with the given error kind.
    Failed(&'static str),
}

/// Full integer decode of `word` against `value`.
pub fn check<C: SetCodec + ?Sized>(codec: &C, word: &Word, value: &BigUint) -> Outcome {
    match codec.decode_value(word) {
        Ok(v) if &v == value => Outcome::Recovered,
        Ok(_) => Outcome::Wrong,
        Err(e) => Outcome::Failed(e.kind()),
    }
}

/// Decode of `word` compared on fingerprints.
pub fn check_fingerprint<C: SetCodec + ?Sized>(
    codec: &C,
    word: &Word,
    expect: &Fingerprint,
) -> Outcome {
    match codec.decode_fingerprint(word) {
        Ok(f) if &f == expect => Outcome::Recovered,
        Ok(_) => Outcome::Wrong,
        Err(e) => Outcome::Failed(e.kind()),
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Tally {
    pub words: u64,
    pub recovered: u64,
    pub wrong: u64,
    /// Failure counts by error kind.
    pub failures: BTreeMap<String, u64>,
}

impl Tally {
    pub fn record(&mut self, o: &Outcome) {
        self.words += 1;
        match o {
            Outcome::Recovered => self.recovered += 1,
            Outcome::Wrong => self.wrong += 1,
            Outcome::Failed(k) => *self.failures.entry((*k).to_string()).or_default() += 1,
        }
    }

    pub fn merge(&mut self, other: &Tally) {
        self.words += other.words;
        self.recovered += other.recovered;
        self.wrong += other.wrong;
        for (k, v) in &other.failures {
            *self.failures.entry(k.clone()).or_default() += v;
        }
    }

    pub fn all_recovered(&self) -> bool {
        self.recovered == self.words
    }

    pub fn rate(&self) -> f64 {
        if self.words == 0 {
            1.0
        } else {
            self.recovered as f64 / self.words as f64
        }
    }
}

/// How patterns are chosen for each message.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum PatternMode {
    /// Every single flip.
    Exhaustive,
    /// `per_message` random patterns, each of weight uniform in `1..=max_weight`,
    /// or clean copies when `max_weight` is 0.
    Random { per_message: u64, max_weight: usize },
}

/// Encodes `messages` random messages and decodes every chosen corruption
/// of each. The clean word is checked by full integer decode, corruptions
/// by fingerprint.
pub fn simulate<C: SetCodec + ?Sized>(
    codec: &C,
    seed: u64,
    messages: u64,
    mode: PatternMode,
) -> Result<Tally> {
    let p = codec.params();
    let space = codec.message_space();
    let mut tally = Tally::default();
    for i in 0..messages {
        let mut rng = trial_rng(seed, i);
        let value = random_below(&mut rng, &space);
        let word = codec.encode_value(&value)?;
        tally.record(&check(codec, &word, &value));
        let expect = codec.fingerprint(&value)?;
        match mode {
            PatternMode::Exhaustive => {
                for pat in single_flips(p.m, p.l) {
                    tally.record(&check_fingerprint(
                        codec,
                        &apply_pattern(&word, &pat)?,
                        &expect,
                    ));
                }
            }
            PatternMode::Random {
                per_message,
                max_weight,
            } => {
                for _ in 0..per_message {
                    let w = if max_weight == 0 {
                        0
                    } else {
                        rng.random_range(1..=max_weight)
                    };
                    let pat = random_pattern(&mut rng, p.m, p.l, w);
                    tally.record(&check_fingerprint(
                        codec,
                        &apply_pattern(&word, &pat)?,
                        &expect,
                    ));
                }
            }
        }
    }
    Ok(tally)
}
