//! Arithmetic in GF(2^m) for 2 <= m <= 20 through log/antilog tables.

use std::sync::OnceLock;

use crate::error::{Error, Result};

pub const MIN_DEGREE: u32 = 2;
pub const MAX_DEGREE: u32 = 20;

/// Primitive polynomials, with the leading term, indexed by degree.
///
/// | m | polynomial | m | polynomial |
/// |---|------------|---|------------|
/// | 2 | x^2+x+1 | 12 | x^12+x^6+x^4+x+1 |
/// | 3 | x^3+x+1 | 13 | x^13+x^4+x^3+x+1 |
/// | 4 | x^4+x+1 | 14 | x^14+x^10+x^6+x+1 |
/// | 5 | x^5+x^2+1 | 15 | x^15+x+1 |
/// | 6 | x^6+x+1 | 16 | x^16+x^12+x^3+x+1 |
/// | 7 | x^7+x^3+1 | 17 | x^17+x^3+1 |
/// | 8 | x^8+x^4+x^3+x^2+1 | 18 | x^18+x^7+1 |
/// | 9 | x^9+x^4+1 | 19 | x^19+x^5+x^2+x+1 |
/// | 10 | x^10+x^3+1 | 20 | x^20+x^3+1 |
/// | 11 | x^11+x^2+1 | | |
pub const PRIMITIVE_POLYS: [u32; 21] = [
    0, 0, 0x7, 0xB, 0x13, 0x25, 0x43, 0x89, 0x11D, 0x211, 0x409, 0x805, 0x1053, 0x201B, 0x4443,
    0x8003, 0x1100B, 0x20009, 0x40081, 0x80027, 0x100009,
];

#[derive(Debug)]
pub struct Field {
    m: u32,
    order: u32,
    exp: Vec<u32>,
    log: Vec<u32>,
}

static FIELDS: [OnceLock<Field>; 21] = [const { OnceLock::new() }; 21];

impl Field {
    /// The shared table for GF(2^m).
    pub fn get(m: u32) -> Result<&'static Field> {
        if !(MIN_DEGREE..=MAX_DEGREE).contains(&m) {
            return Err(Error::InvalidParams(format!(
                "field degree {m} unsupported"
            )));
        }
        Ok(FIELDS[m as usize].get_or_init(|| Field::build(m)))
    }

    fn build(m: u32) -> Field {
        let poly = PRIMITIVE_POLYS[m as usize];
        let order = (1u32 << m) - 1;
        let mut exp = vec![0u32; 2 * order as usize];
        let mut log = vec![0u32; order as usize + 1];
        let mut x = 1u32;
        for i in 0..order {
            exp[i as usize] = x;
            assert!(i == 0 || x != 1, "polynomial {poly:#x} is not primitive");
            log[x as usize] = i;
            x <<= 1;
            if x >> m != 0 {
                x ^= poly;
            }
        }
        assert_eq!(x, 1, "polynomial {poly:#x} is not primitive");
        for i in order..2 * order {
            exp[i as usize] = exp[(i - order) as usize];
        }
        Field { m, order, exp, log }
    }

    pub fn degree(&self) -> u32 {
        self.m
    }

    /// Multiplicative group order `2^m - 1`.
    pub fn order(&self) -> u32 {
        self.order
    }

    /// `alpha^i` for any `i`.
    #[inline]
    pub fn alpha_pow(&self, i: u64) -> u32 {
        self.exp[(i % self.order as u64) as usize]
    }

    /// `alpha^e` for `e < 2(2^m - 1)`.
    #[inline]
    pub fn exp_log(&self, e: u32) -> u32 {
        self.exp[e as usize]
    }

    #[inline]
    pub fn mul(&self, a: u32, b: u32) -> u32 {
        if a == 0 || b == 0 {
            0
        } else {
            self.exp[(self.log[a as usize] + self.log[b as usize]) as usize]
        }
    }

    /// `a * alpha^lb` for `lb < 2^m - 1`.
    #[inline]
    pub fn mul_by_log(&self, a: u32, lb: u32) -> u32 {
        if a == 0 {
            0
        } else {
            self.exp[(self.log[a as usize] + lb) as usize]
        }
    }

    #[inline]
    pub fn inv(&self, a: u32) -> u32 {
        assert!(a != 0, "inverse of zero");
        self.exp[((self.order - self.log[a as usize]) % self.order) as usize]
    }

    #[inline]
    pub fn div(&self, a: u32, b: u32) -> u32 {
        self.mul(a, self.inv(b))
    }

    #[inline]
    pub fn log(&self, a: u32) -> u32 {
        assert!(a != 0, "log of zero");
        self.log[a as usize]
    }

    /// Evaluates `p(x)` with coefficients in ascending degree order.
    pub fn eval(&self, p: &[u32], x: u32) -> u32 {
        p.iter().rev().fold(0, |acc, &c| self.mul(acc, x) ^ c)
    }
}
