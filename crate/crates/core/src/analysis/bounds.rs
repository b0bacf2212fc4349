//! Exact redundancy of the constructed codecs, the chains of inequalities
//! that bound it, and the general upper and lower bound formulas.

use std::f64::consts::{E, LN_2};

use num_bigint::BigUint;
use num_traits::{One, ToPrimitive};
use serde::{Deserialize, Serialize};

use crate::codec::ensemble::count_lower_bound;
use crate::codec::{AnchorCodec, ImprovedCodec, MultiSubCodec, SetCodec, SingleSubCodec};
use crate::combinatorics::{binomial, factorial};
use crate::params::{ceil_log2, Params};

/// Tolerance on every real-valued comparison, in bits.
pub const TOLERANCE: f64 = 1e-6;

/// Shift and top 64 bits of a positive integer.
fn split(x: &BigUint) -> (u64, u64) {
    let bits = x.bits();
    if bits <= 64 {
        (0, x.to_u64().expect("fits"))
    } else {
        let shift = bits - 64;
        (shift, (x >> shift).to_u64().expect("fits"))
    }
}

pub fn log2_big(x: &BigUint) -> f64 {
    assert!(x.bits() > 0, "log of zero");
    let (s, top) = split(x);
    s as f64 + (top as f64).log2()
}

/// `log2(a / b)`, accurate even when both are enormous.
pub fn log2_ratio(a: &BigUint, b: &BigUint) -> f64 {
    let (sa, ta) = split(a);
    let (sb, tb) = split(b);
    (sa as f64 - sb as f64) + ((ta as f64).log2() - (tb as f64).log2())
}

/// `C(2^L, M)`.
pub fn universe_words(m: usize, l: usize) -> BigUint {
    binomial(&(BigUint::one() << l), m)
}

/// `r(C) = log2 C(2^L, M) - log2 |C|` for a codec's message space.
pub fn redundancy<C: SetCodec + ?Sized>(codec: &C) -> f64 {
    let p = codec.params();
    log2_ratio(&universe_words(p.m, p.l), &codec.message_space())
}

/// `-log2(1 - x)` for small `x`.
fn neg_log2_1m(x: f64) -> f64 {
    -(-x).ln_1p() / LN_2
}

/// `log2(2^w / (2^w - 2M))`.
fn crowding(w: usize, m: usize) -> f64 {
    neg_log2_1m(2.0 * m as f64 * 2f64.powi(-(w as i32)))
}

fn log2f(x: usize) -> f64 {
    (x as f64).log2()
}

fn clog(x: usize) -> f64 {
    ceil_log2(x as u64) as f64
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ChainLine {
    pub label: String,
    pub value: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ChainStep {
    pub from: usize,
    pub to: usize,
    /// `"="` or `"<="`.
    pub relation: String,
    pub holds: bool,
    /// Whether the step counts toward `holds`; unasserted steps are reported only.
    pub asserted: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ChainReport {
    pub codec: String,
    pub params: Params,
    pub r: f64,
    pub lines: Vec<ChainLine>,
    pub steps: Vec<ChainStep>,
    /// Final bound that `r` must not exceed.
    pub target: f64,
    pub holds: bool,
}

struct Chain {
    lines: Vec<ChainLine>,
    steps: Vec<ChainStep>,
}

impl Chain {
    fn new(r: f64) -> Self {
        Chain {
            lines: vec![ChainLine {
                label: "r".into(),
                value: r,
            }],
            steps: Vec::new(),
        }
    }

    fn push(&mut self, relation: &str, label: &str, value: f64) {
        self.push_from(self.lines.len() - 1, relation, label, value, true);
    }

    fn push_from(&mut self, from: usize, relation: &str, label: &str, value: f64, asserted: bool) {
        let a = self.lines[from].value;
        let holds = match relation {
            "=" => (a - value).abs() <= TOLERANCE,
            _ => a <= value + TOLERANCE,
        };
        self.lines.push(ChainLine {
            label: label.into(),
            value,
        });
        self.steps.push(ChainStep {
            from,
            to: self.lines.len() - 1,
            relation: relation.into(),
            holds,
            asserted,
        });
    }

    fn finish(self, codec: &str, params: Params, target: f64) -> ChainReport {
        let r = self.lines[0].value;
        let holds = r <= target + TOLERANCE && self.steps.iter().all(|s| s.holds || !s.asserted);
        ChainReport {
            codec: codec.into(),
            params,
            r,
            lines: self.lines,
            steps: self.steps,
            target,
            holds,
        }
    }
}

/// `log2 prod_i (2^L - i) / (2^w - 2i)^P`.
fn product_term(m: usize, l: usize, w: usize, parts: usize) -> f64 {
    let big = BigUint::one() << l;
    let small = BigUint::one() << w;
    let mut num = BigUint::one();
    let mut den = BigUint::one();
    for i in 0..m {
        num *= &big - i;
        den *= &small - 2 * i;
    }
    log2_ratio(&num, &den.pow(parts as u32))
}

/// Chain for codecs with `P` identifier parts of width `w` and `P` reserved
/// columns carrying `d_len` payload bits each. `column_cost` is the
/// redundancy allotted to one column.
fn parts_chain(
    r: f64,
    params: Params,
    parts: usize,
    w: usize,
    d_len: usize,
    column_cost: f64,
) -> Chain {
    let Params { m, l, .. } = params;
    let pf = parts as f64;
    let mf = m as f64;
    let mut c = Chain::new(r);
    let used = (m - d_len) as f64;
    c.push(
        "=",
        "log prod (2^L - i)/(2^w - 2i)^P + P(M - d)",
        product_term(m, l, w, parts) + pf * used,
    );
    let head = pf * mf * crowding(w, m);
    c.push("<=", "PM log(2^w/(2^w - 2M)) + P(M - d)", head + pf * used);
    c.push(
        "<=",
        "PM log(2^w/(2^w - 2M)) + P col",
        head + pf * column_cost,
    );
    c.push(
        "<=",
        "P log((1 + 4/M)^M) + P col",
        pf * mf * (4.0 / mf).ln_1p() / LN_2 + pf * column_cost,
    );
    c
}

/// Three-part codec against `12 log e + 3 ceil(log ML) + 3 ceil(log M) + 6`.
pub fn single_chain(codec: &SingleSubCodec) -> ChainReport {
    let p = codec.params();
    let lay = codec.layout();
    let col = clog(p.m * p.l) + clog(p.m) + 2.0;
    let mut c = parts_chain(redundancy(codec), p, 3, lay.part_width, lay.d_len, col);
    let target = 12.0 * E.log2() + 3.0 * col;
    c.push(
        "<=",
        "12 log e + 3 ceil(log ML) + 3 ceil(log M) + 6",
        target,
    );
    c.finish(codec.name(), p, target)
}

/// `2K+1`-part codec against
/// `(2K+1) log e + 2K(2K+1)(ceil(log ML) + ceil(log M))`.
///
/// The last step from `(2K+1) log((1+4/M)^M)` to `(2K+1) log e` drops a
/// factor of 4, so it is reported but not asserted; the step to
/// `4(2K+1) log e` is asserted instead.
pub fn multi_chain(codec: &MultiSubCodec) -> ChainReport {
    let p = codec.params();
    let lay = codec.layout();
    let parts = lay.part_count;
    let pf = parts as f64;
    let col = 2.0 * p.k as f64 * (clog(p.m * p.l) + clog(p.m));
    let mut c = parts_chain(redundancy(codec), p, parts, lay.part_width, lay.d_len, col);
    let from = c.lines.len() - 1;
    let target = pf * E.log2() + pf * col;
    c.push_from(
        from,
        "<=",
        "4P log e + P col",
        4.0 * pf * E.log2() + pf * col,
        true,
    );
    c.push_from(
        from,
        "<=",
        "P log e + 2KP(ceil(log ML) + ceil(log M))",
        target,
        false,
    );
    c.finish(codec.name(), p, target)
}

/// Two-part codec against `2 ceil(log ML) + ceil(log 2M) + 3`.
pub fn improved_chain(codec: &ImprovedCodec) -> ChainReport {
    let p = codec.params();
    let lay = codec.layout();
    let mut c = Chain::new(redundancy(codec));
    let exact = product_term(p.m, p.l, lay.half_width, 2) + 2.0 * (p.m - lay.payload) as f64;
    c.push("=", "log prod (2^L - i)/(2^{L/2} - 2i)^2 + 2(M - n)", exact);
    let target = 2.0 * clog(p.m * p.l) + clog(2 * p.m) + 3.0;
    c.push("<=", "2 ceil(log ML) + ceil(log 2M) + 3", target);
    c.finish(codec.name(), p, target)
}

/// Anchor codec, line by line through the proof of its redundancy bound.
pub fn anchor_chain(codec: &AnchorCodec) -> ChainReport {
    let p = codec.params();
    let Params { m, l, k } = p;
    let lay = codec.layout();
    let lp = lay.anchor_len;
    let (mf, kf, lpf) = (m as f64, k as f64, lp as f64);
    let q = crate::codec::ensemble::ball_size(lp, k);
    let space = BigUint::one() << lp;
    let mq = &q * m;
    let mut c = Chain::new(redundancy(codec));

    let bound = count_lower_bound(lp, m, k);
    let d2_formula = m * (l - lp)
        - 4 * k * lp
        - 2 * k * ceil_log2((4 * k * lp) as u64) as usize
        - 2 * k * ceil_log2((m * l) as u64) as usize;
    let c1 = log2_ratio(&universe_words(m, l), &bound) - d2_formula as f64;
    c.push("<=", "log C(2^L,M) - log ceil(bound) - |d2|", c1);

    if mq >= space {
        // The closing lines need 2^{L'} > MQ.
        return c.finish(codec.name(), p, f64::INFINITY);
    }
    let free = &space - &mq;
    let log_free = log2_big(&free);
    let log4klp = log2f(4 * k * lp);
    let logml = log2f(m * l);
    let c2 = (l * m) as f64
        - log2_big(&factorial(m))
        - ((mf - 1.0) * log_free - log2_big(&factorial(m - 1)))
        - ((m * (l - lp)) as f64
            - 4.0 * kf * lpf
            - 2.0 * kf * (log4klp + 1.0)
            - 2.0 * kf * (logml + 1.0));
    c.push(
        "<=",
        "log(2^{LM}/M!) - log((2^{L'}-MQ)^{M-1}/(M-1)!) - [...]",
        c2,
    );
    let tail = 4.0 * kf * lpf + 2.0 * kf * log4klp + 2.0 * kf * logml + 4.0 * kf - mf.log2();
    let c3 = mf * lpf - (mf - 1.0) * log_free + tail;
    c.push(
        "=",
        "ML' - log (2^{L'}-MQ)^{M-1} + 4KL' + 2K log 4KL' + 2K log ML + 4K - log M",
        c3,
    );
    let c4 = (mf - 1.0) * log2_ratio(&space, &free) + lpf + tail;
    c.push("=", "(M-1) log(2^{L'}/(2^{L'}-MQ)) + L' + ...", c4);
    let target = E.log2() + lpf + 1.0 + tail;
    c.push(
        "<=",
        "log e + L' + 4KL' + 2K log(4KL') + 2K log ML + 1 + 4K - log M",
        target,
    );
    c.finish(codec.name(), p, target)
}

/// General bounds on the best achievable redundancy.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BoundReport {
    pub m: usize,
    pub l: usize,
    pub k: usize,
    /// `1 - log2(M)/L`.
    pub epsilon: f64,
    /// `log2 min(M, 2^L - M) - L`.
    pub alpha_log2: f64,
    /// `2K log(ML) + 3`.
    pub upper: f64,
    /// `log((sum_{l<=K} C(ML,l)) (2ML)^K)`, the bound before simplification.
    pub upper_exact: f64,
    /// `log(epsilon ML)`, for `K = 1`.
    pub lower_single: Option<f64>,
    /// `K(log ML - 2 log K)`, without its constant.
    pub lower_main: f64,
    /// `log((1-c^2) C(epsilon ML, K) / K^K)` with `c = K/(epsilon sqrt M)`,
    /// when `c < 1`.
    pub lower_chain: Option<f64>,
    pub r: Option<f64>,
    pub ratio_upper: Option<f64>,
    pub ratio_lower_single: Option<f64>,
    pub ratio_lower_main: Option<f64>,
}

pub fn evaluate_bounds(params: Params, r: Option<f64>) -> BoundReport {
    let Params { m, l, k } = params;
    let (mf, kf) = (m as f64, k as f64);
    let ml = (m * l) as f64;
    let eps = 1.0 - mf.log2() / l as f64;
    let small = if l < 64 {
        BigUint::from(m).min((BigUint::one() << l) - m)
    } else {
        BigUint::from(m)
    };
    let alpha_log2 = log2_big(&small) - l as f64;
    let ball: BigUint = (0..=k.min(m * l))
        .map(|i| binomial(&BigUint::from(m * l), i))
        .sum();
    let upper_exact = log2_big(&ball) + kf * (2.0 * ml).log2();
    let lower_single = (k == 1 && eps > 0.0).then(|| (eps * ml).log2());
    let lower_main = kf * (ml.log2() - 2.0 * kf.log2());
    let lower_chain = (eps > 0.0 && k > 0)
        .then(|| kf / (eps * mf.sqrt()))
        .filter(|&c| c < 1.0)
        .and_then(|c| {
            let n = eps * ml;
            let mut log_binom = 0.0;
            for i in 0..k {
                let t = (n - i as f64) / (i + 1) as f64;
                if t <= 0.0 {
                    return None;
                }
                log_binom += t.log2();
            }
            Some((1.0 - c * c).log2() + log_binom - kf * kf.log2())
        });
    let upper = 2.0 * kf * ml.log2() + 3.0;
    let ratio = |b: Option<f64>| r.zip(b).filter(|&(_, b)| b > 0.0).map(|(r, b)| r / b);
    BoundReport {
        m,
        l,
        k,
        epsilon: eps,
        alpha_log2,
        upper,
        upper_exact,
        lower_single,
        lower_main,
        lower_chain,
        r,
        ratio_upper: ratio(Some(upper)),
        ratio_lower_single: ratio(lower_single),
        ratio_lower_main: ratio(Some(lower_main)),
    }
}
