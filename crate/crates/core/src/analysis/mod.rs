//! Brute-force oracles and bound evaluators for the set channel: balls,
//! confusable sets, greedy packings, hypercube boundaries and redundancy.

use num_bigint::BigUint;

use crate::error::{Error, Result};

pub mod ball;
pub mod boundary;
pub mod bounds;
pub mod inequalities;
pub mod packing;
pub mod suite;

pub use ball::{ball_upper, enumerate_ball, BallReport};
pub use boundary::{boundary_and_influence, count_special_subsets, BoundaryReport, SpecialReport};
pub use bounds::{evaluate_bounds, log2_big, log2_ratio, BoundReport, ChainLine, ChainReport};
pub use packing::{greedy_packing, PackingReport, SmallUniverse};
pub use suite::{run_lemma_suite, LemmaResult, SuiteConfig, SuiteReport};

/// Cap on the number of objects an enumerator may visit.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct WorkGuard {
    pub max_work: u64,
}

impl Default for WorkGuard {
    fn default() -> Self {
        WorkGuard { max_work: 1 << 24 }
    }
}

impl WorkGuard {
    pub fn new(max_work: u64) -> Self {
        WorkGuard { max_work }
    }

    pub fn charge(&self, what: &'static str, needed: &BigUint) -> Result<()> {
        if *needed > BigUint::from(self.max_work) {
            return Err(Error::GuardExceeded {
                what,
                needed: needed.to_string(),
                limit: self.max_work,
            });
        }
        Ok(())
    }

    pub fn charge_u64(&self, what: &'static str, needed: u64) -> Result<()> {
        self.charge(what, &BigUint::from(needed))
    }
}
