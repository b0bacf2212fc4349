//! Confusable sets and the greedy packing code over tiny universes, with
//! every set of strings held as a bitmask over `{0,1}^L`.

use std::collections::HashMap;

use itertools::Itertools;
use num_bigint::BigUint;
use serde::{Deserialize, Serialize};

use crate::analysis::ball::{ball_upper, mask_members, small_ball, SMALL_MAX_LEN};
use crate::analysis::WorkGuard;
use crate::bits::BitString;
use crate::combinatorics::binomial_u64;
use crate::error::{Error, Result};
use crate::params::Params;
use crate::word::Word;

#[derive(Clone, Debug, PartialEq, Eq)]
struct Bitset(Vec<u64>);

impl Bitset {
    fn new(n: usize) -> Self {
        Bitset(vec![0; n.div_ceil(64)])
    }

    fn set(&mut self, i: usize) {
        self.0[i / 64] |= 1 << (i % 64);
    }

    fn get(&self, i: usize) -> bool {
        self.0[i / 64] >> (i % 64) & 1 == 1
    }

    fn or_assign(&mut self, o: &Bitset) {
        for (a, b) in self.0.iter_mut().zip(&o.0) {
            *a |= b;
        }
    }

    fn and_not_assign(&mut self, o: &Bitset) {
        for (a, b) in self.0.iter_mut().zip(&o.0) {
            *a &= !b;
        }
    }

    fn count(&self) -> usize {
        self.0.iter().map(|w| w.count_ones() as usize).sum()
    }

    fn iter(&self) -> impl Iterator<Item = usize> + '_ {
        self.0.iter().enumerate().flat_map(|(i, &w)| {
            (0..64)
                .filter(move |b| w >> b & 1 == 1)
                .map(move |b| i * 64 + b)
        })
    }
}

/// All `M`-subsets of `{0,1}^L` in lexicographic order of their sorted
/// member lists, with the inverted ball index `V -> R_K(V)`.
#[derive(Clone, Debug)]
pub struct SmallUniverse {
    m: usize,
    l: usize,
    k: usize,
    words: Vec<u64>,
    index: HashMap<u64, usize>,
    balls: Vec<Vec<u64>>,
    recv: HashMap<u64, Bitset>,
}

impl SmallUniverse {
    pub fn new(params: Params, guard: &WorkGuard) -> Result<Self> {
        let Params { m, l, k } = params;
        if l > SMALL_MAX_LEN || m > 1 << l {
            return Err(Error::InvalidParams(format!(
                "tiny universe needs L <= {SMALL_MAX_LEN} and M <= 2^L"
            )));
        }
        let total = binomial_u64(1 << l, m);
        guard.charge("word enumeration", &(&total * ball_upper(m * l, k)))?;
        let words: Vec<u64> = (0u32..1 << l)
            .combinations(m)
            .map(|c| c.iter().fold(0u64, |a, &x| a | 1 << x))
            .collect();
        let index = words.iter().enumerate().map(|(i, &w)| (w, i)).collect();
        let balls = words
            .iter()
            .map(|&w| small_ball(&mask_members(w), l, k))
            .collect::<Result<Vec<_>>>()?;
        let mut recv: HashMap<u64, Bitset> = HashMap::new();
        for (i, ball) in balls.iter().enumerate() {
            for &v in ball {
                recv.entry(v)
                    .or_insert_with(|| Bitset::new(words.len()))
                    .set(i);
            }
        }
        Ok(SmallUniverse {
            m,
            l,
            k,
            words,
            index,
            balls,
            recv,
        })
    }

    pub fn len(&self) -> usize {
        self.words.len()
    }

    pub fn is_empty(&self) -> bool {
        self.words.is_empty()
    }

    pub fn mask(&self, i: usize) -> u64 {
        self.words[i]
    }

    pub fn position(&self, mask: u64) -> Option<usize> {
        self.index.get(&mask).copied()
    }

    pub fn ball(&self, i: usize) -> &[u64] {
        &self.balls[i]
    }

    /// Every channel output with its `|R_K|`, in mask order.
    pub fn receiver_sizes(&self) -> Vec<(u64, usize)> {
        let mut out: Vec<(u64, usize)> = self.recv.iter().map(|(&v, r)| (v, r.count())).collect();
        out.sort_unstable();
        out
    }

    /// `R_K(V)` as candidate indices.
    pub fn receivers(&self, v: u64) -> Vec<usize> {
        self.recv
            .get(&v)
            .map(|r| r.iter().collect())
            .unwrap_or_default()
    }

    fn confusable_set(&self, i: usize) -> Bitset {
        let mut d = Bitset::new(self.words.len());
        for v in &self.balls[i] {
            d.or_assign(&self.recv[v]);
        }
        d
    }

    /// `D_K(W)` as candidate indices.
    pub fn confusable(&self, i: usize) -> Vec<usize> {
        self.confusable_set(i).iter().collect()
    }

    pub fn max_confusable(&self) -> usize {
        (0..self.len())
            .map(|i| self.confusable_set(i).count())
            .max()
            .unwrap_or(0)
    }

    pub fn to_word(&self, mask: u64) -> Word {
        Word::new(
            mask_members(mask)
                .into_iter()
                .map(|x| BitString::from_u64(x as u64, self.l)),
        )
        .expect("nonempty mask")
    }

    pub fn params(&self) -> Params {
        Params {
            m: self.m,
            l: self.l,
            k: self.k,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PackingReport {
    pub params: Params,
    pub candidates: usize,
    pub code: Vec<Word>,
    /// `D = max_W |D_K(W)|`.
    pub max_confusable: usize,
    /// `floor(C(2^L, M) / D)`.
    pub floor_bound: BigUint,
    pub size_bound_holds: bool,
    /// Balls of distinct codewords never meet.
    pub disjoint: bool,
}

/// Scans candidates in lexicographic order, keeping each survivor and
/// striking out its confusable set.
pub fn greedy_packing(params: Params, guard: &WorkGuard) -> Result<PackingReport> {
    let u = SmallUniverse::new(params, guard)?;
    let mut alive = Bitset::new(u.len());
    for i in 0..u.len() {
        alive.set(i);
    }
    let mut kept = Vec::new();
    for i in 0..u.len() {
        if alive.get(i) {
            kept.push(i);
            alive.and_not_assign(&u.confusable_set(i));
        }
    }
    let mut seen: HashMap<u64, usize> = HashMap::new();
    let mut disjoint = true;
    for &c in &kept {
        for &v in u.ball(c) {
            if seen.insert(v, c).is_some() {
                disjoint = false;
            }
        }
    }
    let d = u.max_confusable();
    let floor_bound = BigUint::from(u.len()) / d.max(1);
    Ok(PackingReport {
        params,
        candidates: u.len(),
        code: kept.iter().map(|&i| u.to_word(u.mask(i))).collect(),
        max_confusable: d,
        size_bound_holds: BigUint::from(kept.len()) >= floor_bound,
        floor_bound,
        disjoint,
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConfusableReport {
    pub center: Word,
    pub k: usize,
    /// `|R_K(V)|` for each `V` in the ball of the center.
    pub receivers: Vec<(Word, usize)>,
    pub confusable: Vec<Word>,
    pub size: usize,
}

pub fn enumerate_confusable(w: &Word, k: usize, guard: &WorkGuard) -> Result<ConfusableReport> {
    let params = Params::new(w.size(), w.string_len(), k)?;
    let u = SmallUniverse::new(params, guard)?;
    let mask = w.rows().iter().fold(0u64, |a, r| a | 1 << r.to_u64());
    let i = u.position(mask).expect("every M-set is a candidate");
    let receivers = u
        .ball(i)
        .iter()
        .map(|&v| (u.to_word(v), u.receivers(v).len()))
        .collect();
    let confusable: Vec<Word> = u
        .confusable(i)
        .into_iter()
        .map(|j| u.to_word(u.mask(j)))
        .collect();
    Ok(ConfusableReport {
        center: w.clone(),
        k,
        receivers,
        size: confusable.len(),
        confusable,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn candidates_in_lexicographic_order() {
        let u = SmallUniverse::new(Params::new(2, 2, 1).unwrap(), &WorkGuard::default()).unwrap();
        let words: Vec<Vec<u32>> = (0..u.len()).map(|i| mask_members(u.mask(i))).collect();
        assert_eq!(
            words,
            vec![
                vec![0, 1],
                vec![0, 2],
                vec![0, 3],
                vec![1, 2],
                vec![1, 3],
                vec![2, 3]
            ]
        );
    }

    #[test]
    fn bitset_ops() {
        let mut a = Bitset::new(130);
        a.set(3);
        a.set(129);
        let mut b = Bitset::new(130);
        b.set(129);
        assert_eq!(a.iter().collect::<Vec<_>>(), vec![3, 129]);
        a.and_not_assign(&b);
        assert_eq!(a.count(), 1);
        a.or_assign(&b);
        assert!(a.get(129));
    }
}
