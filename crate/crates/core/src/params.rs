//! Channel parameters and shared bit-count arithmetic.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// `M` strings of `L` bits, at most `K` substitutions.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Params {
    pub m: usize,
    pub l: usize,
    pub k: usize,
}

impl Params {
    pub fn new(m: usize, l: usize, k: usize) -> Result<Self> {
        if m == 0 || l == 0 {
            return Err(Error::InvalidParams("M and L must be positive".into()));
        }
        Ok(Params { m, l, k })
    }

    /// Total number of bits in a word.
    pub fn total_bits(&self) -> usize {
        self.m * self.l
    }

    /// Width of each part when the string is cut into `parts` slices.
    pub fn part_width(&self, parts: usize) -> Result<usize> {
        if parts == 0 || !self.l.is_multiple_of(parts) {
            return Err(Error::InvalidParams(format!(
                "L = {} is not divisible into {parts} parts",
                self.l
            )));
        }
        Ok(self.l / parts)
    }
}

/// Smallest `c` with `2^c >= n`; `ceil_log2(1) = 0`.
pub fn ceil_log2(n: u64) -> u32 {
    assert!(n > 0, "log of zero");
    if n == 1 {
        0
    } else {
        64 - (n - 1).leading_zeros()
    }
}

/// Redundancy of the shortest Hamming code covering `data` bits: the
/// smallest `t` with `2^t - t - 1 >= data`.
pub fn hamming_t(data: usize) -> usize {
    let mut t = 2;
    while (1usize << t) - t - 1 < data {
        t += 1;
    }
    t
}
