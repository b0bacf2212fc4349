//! Exhaustive check of the ball, boundary and packing inequalities over
//! every word at small parameters.

use num_bigint::BigUint;
use serde::{Deserialize, Serialize};

use crate::analysis::ball::ball_upper;
use crate::analysis::boundary::{boundary_and_influence, count_special_subsets};
use crate::analysis::inequalities::{anchor_length_grid, monotone_power_grid};
use crate::analysis::packing::{greedy_packing, SmallUniverse};
use crate::analysis::WorkGuard;
use crate::codec::ensemble::{count_lower_bound, AnchorEnsemble, EnsembleGuard};
use crate::error::Result;
use crate::params::Params;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SuiteConfig {
    pub max_m: usize,
    pub max_l: usize,
    pub max_k: usize,
    /// Largest greedy packing run, as a number of candidate words.
    pub max_packing_words: u64,
    pub max_work: u64,
}

impl Default for SuiteConfig {
    fn default() -> Self {
        SuiteConfig {
            max_m: 3,
            max_l: 5,
            max_k: 2,
            max_packing_words: 5000,
            max_work: WorkGuard::default().max_work,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LemmaResult {
    pub name: String,
    pub checked: u64,
    pub violations: u64,
    pub first_violation: Option<String>,
}

impl LemmaResult {
    fn new(name: &str) -> Self {
        LemmaResult {
            name: name.into(),
            checked: 0,
            violations: 0,
            first_violation: None,
        }
    }

    fn record(&mut self, ok: bool, what: impl FnOnce() -> String) {
        self.checked += 1;
        if !ok {
            self.violations += 1;
            if self.first_violation.is_none() {
                self.first_violation = Some(what());
            }
        }
    }

    pub fn passed(&self) -> bool {
        self.violations == 0
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SuiteReport {
    pub config: SuiteConfig,
    pub lemmas: Vec<LemmaResult>,
    pub passed: bool,
}

impl SuiteReport {
    pub fn lemma(&self, name: &str) -> Option<&LemmaResult> {
        self.lemmas.iter().find(|l| l.name == name)
    }
}

pub const BALL_UPPER: &str = "ball upper bound";
pub const BALL_UPPER_TIGHT: &str = "ball upper bound tight at distance 2K+1";
pub const RECEIVERS: &str = "|R_K| <= 2(2ML)^K";
pub const PACKING: &str = "greedy packing size and disjointness";
pub const BOUNDARY_BALL: &str = "|B_1| >= |boundary|";
pub const BOUNDARY_TIGHT: &str = "|B_1| = |boundary| + 1 at distance 2";
pub const INFLUENCE: &str = "I 2^{L-1} = |boundary|";
pub const EPSILON: &str = "|boundary| >= eps ML";
pub const SPECIAL: &str = "|B_K| K^K >= special";
pub const SPECIAL_CONSTANT: &str = "special >= (1-c^2) C(|boundary|, K)";
pub const ENSEMBLE: &str = "ensemble count >= product bound";
pub const ANCHOR_GRID: &str = "anchor length inequality grid";
pub const POWER_GRID: &str = "(1+T/P)^P monotone grid";

pub fn run_lemma_suite(config: &SuiteConfig) -> Result<SuiteReport> {
    let guard = WorkGuard::new(config.max_work);
    let mut ball = LemmaResult::new(BALL_UPPER);
    let mut tight = LemmaResult::new(BALL_UPPER_TIGHT);
    let mut recv = LemmaResult::new(RECEIVERS);
    let mut packing = LemmaResult::new(PACKING);
    let mut b_ball = LemmaResult::new(BOUNDARY_BALL);
    let mut b_tight = LemmaResult::new(BOUNDARY_TIGHT);
    let mut influence = LemmaResult::new(INFLUENCE);
    let mut eps = LemmaResult::new(EPSILON);
    let mut special = LemmaResult::new(SPECIAL);
    let mut special_c = LemmaResult::new(SPECIAL_CONSTANT);

    for m in 1..=config.max_m {
        for l in 1..=config.max_l {
            if m > 1 << l {
                continue;
            }
            for k in 1..=config.max_k {
                let params = Params::new(m, l, k)?;
                let u = SmallUniverse::new(params, &guard)?;
                let upper = ball_upper(m * l, k);
                for i in 0..u.len() {
                    let w = u.to_word(u.mask(i));
                    let size = BigUint::from(u.ball(i).len());
                    ball.record(size <= upper, || format!("{params:?} W={w:?}"));
                    if w.min_distance().is_none_or(|d| d > 2 * k) {
                        tight.record(size == upper, || format!("{params:?} W={w:?}"));
                    }
                    if k == 1 {
                        let b = boundary_and_influence(&w, &guard)?;
                        let at = || format!("M={m} L={l} W={w:?}");
                        b_ball.record(b.ball_bound_holds, at);
                        if let Some(t) = b.ball_bound_tight {
                            b_tight.record(t, at);
                        }
                        influence.record(b.identity_holds, at);
                        eps.record(b.epsilon_bound_holds, at);
                    }
                    let s = count_special_subsets(&w, k, &guard)?;
                    special.record(s.ball_bound_holds, || format!("{params:?} W={w:?}"));
                    if let Some(c) = &s.constant_bound {
                        special_c.record(c.holds, || format!("{params:?} W={w:?}"));
                    }
                }
                let limit = BigUint::from(2u32) * BigUint::from(2 * m * l).pow(k as u32);
                for (v, n) in u.receiver_sizes() {
                    if (v.count_ones() as usize) + k >= m {
                        recv.record(BigUint::from(n) <= limit, || format!("{params:?} V={v:#b}"));
                    }
                }
                if u.len() as u64 <= config.max_packing_words {
                    let p = greedy_packing(params, &guard)?;
                    packing.record(p.disjoint && p.size_bound_holds, || {
                        format!("{params:?} size {} floor {}", p.code.len(), p.floor_bound)
                    });
                }
            }
        }
    }

    let mut ensemble = LemmaResult::new(ENSEMBLE);
    let eguard = EnsembleGuard {
        max_work: config.max_work,
        ..EnsembleGuard::default()
    };
    for k in 1..=config.max_k.min(1) {
        for m in 2..=config.max_m {
            for lp in 2 * k + 1..=10 {
                let bound = count_lower_bound(lp, m, k);
                let e = AnchorEnsemble::build_with_len(lp, m, k, &eguard)?;
                ensemble.record(BigUint::from(e.count()) >= bound, || {
                    format!("L'={lp} M={m} K={k}: {} < {bound}", e.count())
                });
            }
        }
    }

    let mut grids = Vec::new();
    for (name, g) in [
        (ANCHOR_GRID, anchor_length_grid(1024, 8)),
        (POWER_GRID, monotone_power_grid(64)),
    ] {
        let mut r = LemmaResult::new(name);
        r.checked = g.checked;
        r.violations = g.violations.len() as u64;
        r.first_violation = g.violations.first().map(|v| format!("{v:?}"));
        grids.push(r);
    }

    let mut lemmas = vec![
        ball, tight, recv, packing, b_ball, b_tight, influence, eps, special, special_c, ensemble,
    ];
    lemmas.extend(grids);
    let passed = lemmas.iter().all(LemmaResult::passed);
    Ok(SuiteReport {
        config: *config,
        lemmas,
        passed,
    })
}
