//! The anchor ensemble: every `M`-set of `L'`-bit strings that contains the
//! all-ones string and has pairwise distance at least `2K+1`.
//!
//! Members are stored as descending tuples `a_1 = 1_{L'} > a_2 > ... > a_M`
//! and ranked in the order a depth-first scan produces them, which is
//! descending lexicographic order on the tuples.

use std::fs;
use std::io::{BufRead, BufReader, Write};
use std::path::Path;

use num_bigint::BigUint;
use num_traits::{One, Zero};

use crate::bits::BitString;
use crate::combinatorics::{binomial_u64, factorial};
use crate::error::{Error, Result};
use crate::params::ceil_log2;

const CACHE_MAGIC: &str = "setecc-ensemble v1";

/// Limits on brute-force enumeration.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct EnsembleGuard {
    /// Upper bound on `M * 2^{L'}`.
    pub max_work: u64,
    pub max_members: u64,
}

impl Default for EnsembleGuard {
    fn default() -> Self {
        EnsembleGuard {
            max_work: 1 << 26,
            max_members: 1 << 22,
        }
    }
}

/// Anchor length `3 ceil(log M) + 4K^2 + 1`.
pub fn anchor_length(m: usize, k: usize) -> usize {
    3 * ceil_log2(m as u64) as usize + 4 * k * k + 1
}

/// Size of a radius-`2K` Hamming ball in `{0,1}^{L'}`.
pub fn ball_size(anchor_len: usize, k: usize) -> BigUint {
    (0..=(2 * k).min(anchor_len))
        .map(|i| binomial_u64(anchor_len as u64, i))
        .sum()
}

/// `ceil(prod_{i=1}^{M-1} (2^{L'} - iQ) / (M-1)!)`, or zero once a factor
/// is no longer positive.
pub fn count_lower_bound(anchor_len: usize, m: usize, k: usize) -> BigUint {
    let q = ball_size(anchor_len, k);
    let space = BigUint::one() << anchor_len;
    let mut prod = BigUint::one();
    for i in 1..m {
        let used = &q * i;
        if used >= space {
            return BigUint::zero();
        }
        prod *= &space - used;
    }
    let f = factorial(m - 1);
    (prod + &f - 1u32) / f
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AnchorEnsemble {
    anchor_len: usize,
    m: usize,
    k: usize,
    /// Members back to back, `m` anchors each.
    flat: Vec<u32>,
}

impl AnchorEnsemble {
    /// Ensemble at the anchor length the codec uses.
    pub fn build(m: usize, k: usize, guard: &EnsembleGuard) -> Result<Self> {
        Self::build_with_len(anchor_length(m, k), m, k, guard)
    }

    pub fn build_with_len(
        anchor_len: usize,
        m: usize,
        k: usize,
        guard: &EnsembleGuard,
    ) -> Result<Self> {
        if m < 2 || k == 0 {
            return Err(Error::InvalidParams(
                "ensemble needs M >= 2 and K >= 1".into(),
            ));
        }
        if anchor_len == 0 || anchor_len > 31 {
            return Err(Error::InvalidParams(format!(
                "anchor length {anchor_len} outside 1..=31"
            )));
        }
        let work = (m as u128) << anchor_len;
        if work > guard.max_work as u128 {
            return Err(Error::GuardExceeded {
                what: "ensemble enumeration",
                needed: format!("M * 2^{anchor_len} = {work}"),
                limit: guard.max_work,
            });
        }
        let ones = (1u32 << anchor_len) - 1;
        let min_dist = 2 * k as u32 + 1;
        let mut flat = Vec::new();
        let mut tuple = vec![ones];
        let mut members = 0u64;
        // Depth-first over descending tuples; `next[d]` is the next value to
        // try at depth d.
        let mut next = vec![ones];
        loop {
            let depth = tuple.len();
            if depth == m {
                members += 1;
                if members > guard.max_members {
                    return Err(Error::GuardExceeded {
                        what: "ensemble members",
                        needed: format!("more than {}", guard.max_members),
                        limit: guard.max_members,
                    });
                }
                flat.extend_from_slice(&tuple);
                tuple.pop();
                continue;
            }
            if next.len() == depth {
                next.push(*tuple.last().unwrap());
            }
            let cur = next[depth];
            let found = (0..cur)
                .rev()
                .find(|&v| tuple.iter().all(|&a| (a ^ v).count_ones() >= min_dist));
            match found {
                Some(v) => {
                    next[depth] = v;
                    tuple.push(v);
                    next.truncate(depth + 1);
                }
                None => {
                    next.truncate(depth);
                    if tuple.len() == 1 {
                        break;
                    }
                    tuple.pop();
                }
            }
        }
        Ok(AnchorEnsemble {
            anchor_len,
            m,
            k,
            flat,
        })
    }

    pub fn anchor_len(&self) -> usize {
        self.anchor_len
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn count(&self) -> usize {
        self.flat.len() / self.m
    }

    pub fn members(&self) -> impl Iterator<Item = &[u32]> + '_ {
        self.flat.chunks_exact(self.m)
    }

    /// The member of rank `rank`, anchors in descending order.
    pub fn unrank(&self, rank: u64) -> Result<&[u32]> {
        let r = usize::try_from(rank).ok().filter(|&r| r < self.count());
        let r = r.ok_or(Error::OutOfRange {
            what: "ensemble rank",
        })?;
        Ok(&self.flat[r * self.m..(r + 1) * self.m])
    }

    /// Rank of a descending tuple, if it is a member.
    pub fn rank(&self, anchors: &[u32]) -> Option<u64> {
        if anchors.len() != self.m {
            return None;
        }
        let n = self.count();
        let (mut lo, mut hi) = (0, n);
        while lo < hi {
            let mid = (lo + hi) / 2;
            let probe = &self.flat[mid * self.m..(mid + 1) * self.m];
            // Members descend, so larger tuples come first.
            match anchors.cmp(probe) {
                std::cmp::Ordering::Equal => return Some(mid as u64),
                std::cmp::Ordering::Greater => hi = mid,
                std::cmp::Ordering::Less => lo = mid + 1,
            }
        }
        None
    }

    pub fn anchor_bits(&self, a: u32) -> BitString {
        BitString::from_u64(a as u64, self.anchor_len)
    }

    /// The `2^{L'}`-bit indicator of `anchors`.
    pub fn characteristic(&self, anchors: &[u32]) -> BitString {
        let mut v = BitString::zeros(1 << self.anchor_len);
        for &a in anchors {
            v.set(a as usize, true);
        }
        v
    }

    pub fn header(&self) -> String {
        format!(
            "{CACHE_MAGIC} L'={} M={} K={} count={}",
            self.anchor_len,
            self.m,
            self.k,
            self.count()
        )
    }

    pub fn save(&self, path: &Path) -> Result<()> {
        let mut out = std::io::BufWriter::new(fs::File::create(path)?);
        writeln!(out, "{}", self.header())?;
        for member in self.members() {
            let line: Vec<String> = member
                .iter()
                .map(|&a| self.anchor_bits(a).to_string())
                .collect();
            writeln!(out, "{}", line.join(" "))?;
        }
        out.flush()?;
        Ok(())
    }

    /// Reads a cache file written by [`save`](Self::save) for the given key.
    pub fn load(path: &Path, anchor_len: usize, m: usize, k: usize) -> Result<Self> {
        let mut lines = BufReader::new(fs::File::open(path)?).lines();
        let header = lines
            .next()
            .ok_or_else(|| Error::Malformed("empty ensemble cache".into()))??;
        let prefix = format!("{CACHE_MAGIC} L'={anchor_len} M={m} K={k} count=");
        let count: usize = header
            .strip_prefix(&prefix)
            .and_then(|c| c.trim().parse().ok())
            .ok_or_else(|| {
                Error::Malformed(format!("cache header {header:?} does not match {prefix:?}"))
            })?;
        let mut flat = Vec::with_capacity(count * m);
        for line in lines {
            let line = line?;
            if line.trim().is_empty() {
                continue;
            }
            let before = flat.len();
            for tok in line.split_whitespace() {
                let b: BitString = tok.parse()?;
                if b.len() != anchor_len {
                    return Err(Error::Malformed(format!(
                        "anchor {tok} is not {anchor_len} bits"
                    )));
                }
                flat.push(b.to_u64() as u32);
            }
            if flat.len() - before != m {
                return Err(Error::Malformed(format!(
                    "member line has {} anchors",
                    flat.len() - before
                )));
            }
        }
        let e = AnchorEnsemble {
            anchor_len,
            m,
            k,
            flat,
        };
        if e.count() != count {
            return Err(Error::Malformed(format!(
                "cache lists {} members, header says {count}",
                e.count()
            )));
        }
        let ones = (1u32 << anchor_len) - 1;
        let ordered = e
            .members()
            .all(|t| t[0] == ones && t.windows(2).all(|w| w[0] > w[1]))
            && e.flat
                .chunks_exact(m)
                .zip(e.flat.chunks_exact(m).skip(1))
                .all(|(a, b)| a > b);
        if !ordered {
            return Err(Error::Malformed(
                "cache members are not in canonical order".into(),
            ));
        }
        Ok(e)
    }

    /// Loads the cache at `path` if present, otherwise builds and writes it.
    pub fn load_or_build(path: &Path, m: usize, k: usize, guard: &EnsembleGuard) -> Result<Self> {
        let len = anchor_length(m, k);
        if path.exists() {
            return Self::load(path, len, m, k);
        }
        let e = Self::build_with_len(len, m, k, guard)?;
        e.save(path)?;
        Ok(e)
    }
}
