//! Edge boundary and total influence of the indicator of a word, and the
//! special `K`-subsets of the boundary.

use std::collections::HashSet;

use num_bigint::BigUint;
use num_traits::{One, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::analysis::ball::enumerate_ball;
use crate::analysis::WorkGuard;
use crate::combinatorics::binomial_u64;
use crate::error::{Error, Result};
use crate::word::Word;

/// Boundary facts about `f_W`, the indicator of `W` on `{0,1}^L`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BoundaryReport {
    pub m: usize,
    pub l: usize,
    /// `|boundary f_W|`, edges with exactly one endpoint in `W`.
    pub boundary_size: u64,
    /// `sum_i #{x : f(x) != f(x ^ e_i)}`; the influence is this over `2^L`.
    pub influence_numerator: u64,
    pub influence: f64,
    /// `1 - log2(M)/L`.
    pub epsilon: f64,
    /// `min(M, 2^L - M) / 2^L`.
    pub alpha: f64,
    pub ball1_size: usize,
    /// `I(f_W) 2^{L-1} = |boundary f_W|`, checked on integers.
    pub identity_holds: bool,
    /// `|B_1(W)| >= |boundary f_W|`.
    pub ball_bound_holds: bool,
    /// For words with pairwise distance at least 2: whether
    /// `|B_1(W)| = |boundary f_W| + 1` (the center itself is the extra member).
    pub ball_bound_tight: Option<bool>,
    /// `|boundary f_W| >= epsilon M L`.
    pub epsilon_bound_holds: bool,
}

pub(crate) fn row_values(w: &Word) -> Result<Vec<u64>> {
    if w.string_len() > 63 {
        return Err(Error::InvalidParams(
            "boundary enumeration needs L <= 63".into(),
        ));
    }
    Ok(w.rows().iter().map(|r| r.to_u64()).collect())
}

/// Outside neighbours of each member of `W`, in row order.
pub fn outside_degrees(w: &Word) -> Result<Vec<u64>> {
    let l = w.string_len();
    let vals = row_values(w)?;
    let set: HashSet<u64> = vals.iter().copied().collect();
    Ok(vals
        .iter()
        .map(|&x| (0..l).filter(|&i| !set.contains(&(x ^ 1 << i))).count() as u64)
        .collect())
}

pub fn epsilon(m: usize, l: usize) -> f64 {
    1.0 - (m as f64).log2() / l as f64
}

pub fn boundary_and_influence(w: &Word, guard: &WorkGuard) -> Result<BoundaryReport> {
    let (m, l) = (w.size(), w.string_len());
    guard.charge("hypercube scan", &(BigUint::from(l) << l))?;
    let boundary_size: u64 = outside_degrees(w)?.iter().sum();

    // Influence from its definition: a scan over every point and direction.
    let set: HashSet<u64> = row_values(w)?.into_iter().collect();
    let mut influence_numerator = 0u64;
    for x in 0..1u64 << l {
        let fx = set.contains(&x);
        for i in 0..l {
            if fx != set.contains(&(x ^ 1 << i)) {
                influence_numerator += 1;
            }
        }
    }
    let identity_holds = 2 * boundary_size == influence_numerator;

    let ball1_size = enumerate_ball(w, 1, guard)?.count;
    let eps = epsilon(m, l);
    let ball_bound_tight = match w.min_distance() {
        Some(d) if d < 2 => None,
        _ => Some(ball1_size as u64 == boundary_size + 1),
    };
    let space = 2f64.powi(l as i32);
    Ok(BoundaryReport {
        m,
        l,
        boundary_size,
        influence_numerator,
        influence: influence_numerator as f64 / space,
        epsilon: eps,
        alpha: (m as f64).min(space - m as f64) / space,
        ball1_size,
        identity_holds,
        ball_bound_holds: ball1_size as u64 >= boundary_size,
        ball_bound_tight,
        epsilon_bound_holds: boundary_size as f64 + 1e-9 >= eps * (m * l) as f64,
    })
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SpecialBound {
    /// Smallest `c` with `K <= c epsilon sqrt(M)`.
    pub c: f64,
    /// `(1 - c^2) C(|boundary|, K)`.
    pub bound: f64,
    pub holds: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SpecialReport {
    pub k: usize,
    pub boundary_size: u64,
    /// Number of `K`-subsets of boundary edges with distinct in-set endpoints.
    pub count: BigUint,
    pub ball_size: usize,
    /// `|B_K(W)| K^K >= count`.
    pub ball_bound_holds: bool,
    /// Present only when some `c < 1` satisfies `K <= c epsilon sqrt(M)`.
    pub constant_bound: Option<SpecialBound>,
}

/// Elementary symmetric polynomial `e_k` of the given values.
fn elementary_symmetric(values: &[u64], k: usize) -> BigUint {
    let mut e = vec![BigUint::zero(); k + 1];
    e[0] = BigUint::one();
    for &v in values {
        for j in (1..=k).rev() {
            let add = &e[j - 1] * v;
            e[j] += add;
        }
    }
    e.swap_remove(k)
}

pub fn count_special_subsets(w: &Word, k: usize, guard: &WorkGuard) -> Result<SpecialReport> {
    let (m, l) = (w.size(), w.string_len());
    guard.charge("hypercube scan", &(BigUint::from(l) << l))?;
    let degrees = outside_degrees(w)?;
    let boundary_size: u64 = degrees.iter().sum();
    // A special subset picks K distinct members of W and one outside edge at each.
    let count = elementary_symmetric(&degrees, k);
    let ball_size = enumerate_ball(w, k, guard)?.count;
    let kk = BigUint::from(k).pow(k as u32);
    let ball_bound_holds = BigUint::from(ball_size) * kk >= count;

    let eps = epsilon(m, l);
    let constant_bound = (eps > 0.0)
        .then(|| k as f64 / (eps * (m as f64).sqrt()))
        .filter(|&c| c < 1.0)
        .map(|c| {
            let total = binomial_u64(boundary_size, k)
                .to_f64()
                .unwrap_or(f64::INFINITY);
            let bound = (1.0 - c * c) * total;
            SpecialBound {
                c,
                bound,
                holds: count.to_f64().unwrap_or(f64::INFINITY) + 1e-9 >= bound,
            }
        });
    Ok(SpecialReport {
        k,
        boundary_size,
        count,
        ball_size,
        ball_bound_holds,
        constant_bound,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn elementary_symmetric_small() {
        assert_eq!(elementary_symmetric(&[1, 2, 3], 2), BigUint::from(11u32));
        assert_eq!(elementary_symmetric(&[1, 2, 3], 3), BigUint::from(6u32));
        assert_eq!(elementary_symmetric(&[4, 5], 0), BigUint::one());
    }

    #[test]
    fn full_cube_has_no_boundary() {
        let w = Word::parse_rows(&["00", "01", "10", "11"]).unwrap();
        let r = boundary_and_influence(&w, &WorkGuard::default()).unwrap();
        assert_eq!(r.boundary_size, 0);
        assert_eq!(r.influence, 0.0);
    }
}
