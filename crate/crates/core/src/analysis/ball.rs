//! Substitution balls `B_K(W)`.

use std::collections::BTreeSet;

use itertools::Itertools;
use num_bigint::BigUint;
use serde::{Deserialize, Serialize};

use crate::analysis::WorkGuard;
use crate::combinatorics::binomial_u64;
use crate::error::{Error, Result};
use crate::word::Word;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BallReport {
    pub center: Word,
    pub k: usize,
    /// Distinct members in ascending order.
    pub members: Vec<Word>,
    pub count: usize,
}

/// `sum_{l <= K} C(ML, l)`, the number of flip sets of weight at most `K`.
pub fn ball_upper(bits: usize, k: usize) -> BigUint {
    (0..=k.min(bits))
        .map(|i| binomial_u64(bits as u64, i))
        .sum()
}

/// Every set reachable from `w` by at most `k` substitutions.
pub fn enumerate_ball(w: &Word, k: usize, guard: &WorkGuard) -> Result<BallReport> {
    let (m, l) = (w.size(), w.string_len());
    guard.charge("ball enumeration", &ball_upper(m * l, k))?;
    let mut members = BTreeSet::new();
    let rows = w.rows();
    for weight in 0..=k.min(m * l) {
        for flips in (0..m * l).combinations(weight) {
            let mut out = rows.to_vec();
            for p in flips {
                out[p / l].flip(p % l);
            }
            members.insert(Word::new(out)?);
        }
    }
    let members: Vec<Word> = members.into_iter().collect();
    Ok(BallReport {
        center: w.clone(),
        k,
        count: members.len(),
        members,
    })
}

/// Largest string length handled by the bitmask enumerators.
pub const SMALL_MAX_LEN: usize = 6;

/// Ball of a set of `l`-bit strings given as integers (MSB first), each
/// member returned as a bitmask over `{0,1}^l`. Sorted, deduplicated.
pub fn small_ball(rows: &[u32], l: usize, k: usize) -> Result<Vec<u64>> {
    if l > SMALL_MAX_LEN {
        return Err(Error::InvalidParams(format!(
            "bitmask sets need L <= {SMALL_MAX_LEN}"
        )));
    }
    let m = rows.len();
    let mut out = Vec::new();
    let mut cur = rows.to_vec();
    for weight in 0..=k.min(m * l) {
        for flips in (0..m * l).combinations(weight) {
            cur.copy_from_slice(rows);
            for p in flips {
                cur[p / l] ^= 1 << (l - 1 - p % l);
            }
            out.push(cur.iter().fold(0u64, |acc, &x| acc | 1 << x));
        }
    }
    out.sort_unstable();
    out.dedup();
    Ok(out)
}

/// Members of a bitmask set in ascending order.
pub fn mask_members(mask: u64) -> Vec<u32> {
    (0..64).filter(|&i| mask >> i & 1 == 1).collect()
}
