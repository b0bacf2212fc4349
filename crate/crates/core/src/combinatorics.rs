//! Ranking and unranking of subsets, permutations, and (subset, permutation)
//! pairs with arbitrary-precision ranks. All ranks are 0-based.
//!
//! Subsets are ordered lexicographically as ascending tuples, permutations by
//! their Lehmer code, and a pair `(S, p)` has rank `rank(S) * m! + rank(p)`.

use num_bigint::BigUint;
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// `C(n, k)` by the exact multiplicative formula.
pub fn binomial(n: &BigUint, k: usize) -> BigUint {
    let kb = BigUint::from(k);
    if &kb > n {
        return BigUint::zero();
    }
    // Use the smaller of k and n - k when n is small enough to matter.
    let k = match (n - &kb).to_usize() {
        Some(rest) if rest < k => rest,
        _ => k,
    };
    let mut acc = BigUint::one();
    for i in 0..k {
        acc *= n - BigUint::from(i);
        acc /= BigUint::from(i + 1);
    }
    acc
}

pub fn binomial_u64(n: u64, k: usize) -> BigUint {
    binomial(&BigUint::from(n), k)
}

pub fn factorial(m: usize) -> BigUint {
    (2..=m).fold(BigUint::one(), |acc, i| acc * BigUint::from(i))
}

/// An `m`-subset of `{0, ..., n-1}` by rank.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SubsetRank {
    pub n: BigUint,
    pub m: usize,
    pub rank: BigUint,
}

impl SubsetRank {
    pub fn new(n: BigUint, m: usize, rank: BigUint) -> Result<Self> {
        if rank >= binomial(&n, m) {
            return Err(Error::OutOfRange {
                what: "subset rank",
            });
        }
        Ok(SubsetRank { n, m, rank })
    }

    pub fn unrank(&self) -> Vec<BigUint> {
        unrank_subset(&self.n, self.m, &self.rank).expect("validated at construction")
    }
}

/// The `rank`-th `m`-subset of `[0, n)` as an ascending list.
pub fn unrank_subset(n: &BigUint, m: usize, rank: &BigUint) -> Result<Vec<BigUint>> {
    let total = binomial(n, m);
    if rank >= &total {
        return Err(Error::OutOfRange {
            what: "subset rank",
        });
    }
    if m == 0 {
        return Ok(Vec::new());
    }
    // Lex rank r corresponds to colex rank total-1-r of the reflected set
    // {n-1-c}. Greedy colex unranking picks, for i = m..1, the largest e with
    // C(e, i) <= remaining.
    let mut rem = total - BigUint::one() - rank;
    let mut reflected = Vec::with_capacity(m);
    let mut fact = factorial(m);
    for i in (1..=m).rev() {
        // rem * i! bounds e^i from above; C(e,i) <= e^i/i! gives e >= x and
        // C(e,i) >= (e-i+1)^i/i! gives e < x + i.
        let x = (&rem * &fact).nth_root(i as u32);
        let mut e = x;
        let mut c = binomial(&e, i);
        loop {
            // C(e+1, i) = C(e, i) * (e+1) / (e+1-i)
            let e1 = &e + BigUint::one();
            let ib = BigUint::from(i);
            let next = if e1 < ib {
                BigUint::zero()
            } else if e1 == ib {
                BigUint::one()
            } else {
                &c * &e1 / (&e1 - &ib)
            };
            if next > rem {
                break;
            }
            e = e1;
            c = next;
        }
        rem -= &c;
        reflected.push(e);
        fact /= BigUint::from(i);
    }
    // reflected is descending; map back and return ascending.
    let top = n - BigUint::one();
    Ok(reflected.into_iter().map(|e| &top - e).collect())
}

/// Rank of an `m`-subset of `[0, n)`; elements may come in any order.
pub fn rank_subset(n: &BigUint, elems: &[BigUint]) -> Result<BigUint> {
    let mut sorted: Vec<&BigUint> = elems.iter().collect();
    sorted.sort_unstable();
    if sorted.windows(2).any(|w| w[0] == w[1]) {
        return Err(Error::Malformed("subset has repeated elements".into()));
    }
    if sorted.last().is_some_and(|&x| x >= n) {
        return Err(Error::OutOfRange {
            what: "subset element",
        });
    }
    Ok(rank_sorted_subset(n, &sorted))
}

/// Rank of an ascending, duplicate-free subset already known to lie in `[0, n)`.
pub fn rank_sorted_subset(n: &BigUint, sorted: &[&BigUint]) -> BigUint {
    let m = sorted.len();
    if m == 0 {
        return BigUint::zero();
    }
    let top = n - BigUint::one();
    let mut colex = BigUint::zero();
    for (k, c) in sorted.iter().enumerate() {
        colex += binomial(&(&top - *c), m - k);
    }
    binomial(n, m) - BigUint::one() - colex
}

/// A permutation of `[0, m)` by Lehmer rank.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PermRank {
    pub m: usize,
    pub rank: BigUint,
}

impl PermRank {
    pub fn new(m: usize, rank: BigUint) -> Result<Self> {
        if rank >= factorial(m) {
            return Err(Error::OutOfRange {
                what: "permutation rank",
            });
        }
        Ok(PermRank { m, rank })
    }

    pub fn unrank(&self) -> Vec<usize> {
        unrank_perm(self.m, &self.rank).expect("validated at construction")
    }
}

pub fn unrank_perm(m: usize, rank: &BigUint) -> Result<Vec<usize>> {
    if rank >= &factorial(m) {
        return Err(Error::OutOfRange {
            what: "permutation rank",
        });
    }
    // Peel factoradic digits from the least significant end.
    let mut lehmer = vec![0usize; m];
    let mut r = rank.clone();
    for (i, slot) in lehmer.iter_mut().enumerate().rev() {
        let radix = BigUint::from(m - i);
        let (q, d) = r.div_rem(&radix);
        *slot = d.to_usize().unwrap();
        r = q;
    }
    let mut pool: Vec<usize> = (0..m).collect();
    Ok(lehmer.into_iter().map(|d| pool.remove(d)).collect())
}

pub fn rank_perm(p: &[usize]) -> Result<BigUint> {
    let m = p.len();
    let mut seen = vec![false; m];
    for &x in p {
        if x >= m || seen[x] {
            return Err(Error::Malformed("not a permutation".into()));
        }
        seen[x] = true;
    }
    let mut rank = BigUint::zero();
    for i in 0..m {
        let smaller_after = p[i + 1..].iter().filter(|&&y| y < p[i]).count();
        rank = rank * BigUint::from(m - i) + BigUint::from(smaller_after);
    }
    Ok(rank)
}

/// Rank of a pair (subset of `[0, n)` of size `m`, permutation of `[0, m)`).
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SetPermRank {
    pub n: BigUint,
    pub m: usize,
    pub rank: BigUint,
}

impl SetPermRank {
    pub fn new(n: BigUint, m: usize, rank: BigUint) -> Result<Self> {
        if rank >= binomial(&n, m) * factorial(m) {
            return Err(Error::OutOfRange {
                what: "combined rank",
            });
        }
        Ok(SetPermRank { n, m, rank })
    }

    pub fn split(&self) -> (SubsetRank, PermRank) {
        let (q, r) = self.rank.div_rem(&factorial(self.m));
        (
            SubsetRank {
                n: self.n.clone(),
                m: self.m,
                rank: q,
            },
            PermRank { m: self.m, rank: r },
        )
    }

    pub fn join(subset: &SubsetRank, perm: &PermRank) -> Result<Self> {
        if subset.m != perm.m {
            return Err(Error::Malformed(
                "subset and permutation sizes differ".into(),
            ));
        }
        SetPermRank::new(
            subset.n.clone(),
            subset.m,
            &subset.rank * factorial(subset.m) + &perm.rank,
        )
    }
}

/// `rank = q * m! + s` with `s < m!`.
pub fn split_combined(rank: &BigUint, m: usize) -> (BigUint, BigUint) {
    rank.div_rem(&factorial(m))
}

pub fn join_combined(subset_rank: &BigUint, perm_rank: &BigUint, m: usize) -> BigUint {
    subset_rank * factorial(m) + perm_rank
}
