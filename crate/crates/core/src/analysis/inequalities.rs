//! Numeric instance grids for two auxiliary inequalities used by the bounds.

use num_bigint::BigUint;
use num_traits::One;
use serde::{Deserialize, Serialize};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GridReport {
    pub name: String,
    pub checked: u64,
    /// Offending grid points.
    pub violations: Vec<(u64, u64)>,
    /// Smallest `rhs - lhs` seen, in the log domain where one applies.
    pub min_slack: f64,
}

impl GridReport {
    pub fn holds(&self) -> bool {
        self.violations.is_empty()
    }
}

/// `M^2 (3 log M + 4K^2 + 1)^{2K} <= 2^{3 log M + 4K^2 + 1}` for
/// `M in 1..=max_m`, `K in 1..=max_k`, compared in the log domain. At powers
/// of two the logs are integers and the comparison is also made exactly.
pub fn anchor_length_grid(max_m: u64, max_k: u64) -> GridReport {
    let mut r = GridReport {
        name: "M^2 (3 log M + 4K^2 + 1)^{2K} <= 2^{3 log M + 4K^2 + 1}".into(),
        checked: 0,
        violations: Vec::new(),
        min_slack: f64::INFINITY,
    };
    for m in 1..=max_m {
        let lm = (m as f64).log2();
        for k in 1..=max_k {
            let base = 3.0 * lm + (4 * k * k + 1) as f64;
            let lhs = 2.0 * lm + (2 * k) as f64 * base.log2();
            let slack = base - lhs;
            r.min_slack = r.min_slack.min(slack);
            let mut ok = slack >= -1e-9;
            if m.is_power_of_two() {
                let y = m.trailing_zeros() as u64;
                let base = 3 * y + 4 * k * k + 1;
                let lhs = BigUint::from(m).pow(2) * BigUint::from(base).pow(2 * k as u32);
                ok &= lhs <= BigUint::one() << base;
            }
            r.checked += 1;
            if !ok {
                r.violations.push((m, k));
            }
        }
    }
    r
}

/// `(1 + T/P)^P < (1 + T/(P+1))^{P+1}`, i.e.
/// `(P+T)^P (P+1)^{P+1} < (P+1+T)^{P+1} P^P`, exactly on integers, for
/// `T, P in 1..=max`.
pub fn monotone_power_grid(max: u64) -> GridReport {
    let mut r = GridReport {
        name: "(1 + T/P)^P strictly increasing in P".into(),
        checked: 0,
        violations: Vec::new(),
        min_slack: f64::INFINITY,
    };
    for t in 1..=max {
        for p in 1..max {
            let pe = p as u32;
            let lhs = BigUint::from(p + t).pow(pe) * BigUint::from(p + 1).pow(pe + 1);
            let rhs = BigUint::from(p + 1 + t).pow(pe + 1) * BigUint::from(p).pow(pe);
            let g = |q: f64| q * (1.0 + t as f64 / q).ln();
            r.min_slack = r.min_slack.min(g((p + 1) as f64) - g(p as f64));
            r.checked += 1;
            if lhs >= rhs {
                r.violations.push((t, p));
            }
        }
    }
    r
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn anchor_grid_is_tight_at_two() {
        // M = 2, K = 1: 4 * 8^2 = 2^8.
        let r = anchor_length_grid(2, 1);
        assert!(r.holds());
        assert!(r.min_slack.abs() < 1e-12);
    }

    #[test]
    fn power_grid_small() {
        let r = monotone_power_grid(5);
        assert!(r.holds());
        assert_eq!(r.checked, 5 * 4);
    }
}
