//! Mixed-radix packing of message tuples into one integer, and hex I/O.

use num_bigint::BigUint;
use num_integer::Integer;
use num_traits::{One, Zero};

use crate::bits::BitString;
use crate::error::{Error, Result};

/// Digits and radices of a mixed-radix number, most significant first.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MixedRadix {
    radices: Vec<BigUint>,
}

impl MixedRadix {
    pub fn new(radices: Vec<BigUint>) -> Self {
        assert!(radices.iter().all(|r| !r.is_zero()), "zero radix");
        MixedRadix { radices }
    }

    /// Product of all radices.
    pub fn space(&self) -> BigUint {
        self.radices.iter().fold(BigUint::one(), |a, r| a * r)
    }

    pub fn compose(&self, digits: &[BigUint]) -> Result<BigUint> {
        if digits.len() != self.radices.len() {
            return Err(Error::Malformed(
                "wrong number of message components".into(),
            ));
        }
        let mut acc = BigUint::zero();
        for (d, r) in digits.iter().zip(&self.radices) {
            if d >= r {
                return Err(Error::OutOfRange {
                    what: "message component",
                });
            }
            acc = acc * r + d;
        }
        Ok(acc)
    }

    pub fn decompose(&self, value: &BigUint) -> Result<Vec<BigUint>> {
        if value >= &self.space() {
            return Err(Error::OutOfRange { what: "message" });
        }
        let mut v = value.clone();
        let mut digits: Vec<BigUint> = self
            .radices
            .iter()
            .rev()
            .map(|r| {
                let (q, d) = v.div_rem(r);
                v = q;
                d
            })
            .collect();
        digits.reverse();
        Ok(digits)
    }
}

/// Radix `2^bits` for a payload of `bits` bits.
pub fn pow2(bits: usize) -> BigUint {
    BigUint::one() << bits
}

pub fn payload_digit(bits: &BitString) -> BigUint {
    bits.to_uint()
}

pub fn payload_bits(digit: &BigUint, len: usize) -> Result<BitString> {
    BitString::from_uint(digit, len)
}

/// Lowercase hex without prefix; zero is `"0"`.
pub fn to_hex(value: &BigUint) -> String {
    value.to_str_radix(16)
}

/// Parses hex, accepting an optional `0x` prefix, surrounding whitespace and
/// `_` separators.
pub fn from_hex(text: &str) -> Result<BigUint> {
    let t = text.trim();
    let t = t
        .strip_prefix("0x")
        .or_else(|| t.strip_prefix("0X"))
        .unwrap_or(t);
    let cleaned: String = t.chars().filter(|&c| c != '_').collect();
    if cleaned.is_empty() {
        return Err(Error::Malformed("empty hex message".into()));
    }
    BigUint::parse_bytes(cleaned.as_bytes(), 16)
        .ok_or_else(|| Error::Malformed("invalid hex message".into()))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn compose_decompose() {
        let mr = MixedRadix::new(vec![3u32.into(), 4u32.into(), 5u32.into()]);
        assert_eq!(mr.space(), BigUint::from(60u32));
        for v in 0..60u32 {
            let d = mr.decompose(&v.into()).unwrap();
            assert_eq!(mr.compose(&d).unwrap(), v.into());
        }
        // most significant first
        let d = mr.decompose(&BigUint::from(59u32)).unwrap();
        assert_eq!(d, vec![2u32.into(), 3u32.into(), 4u32.into()]);
        assert!(mr.decompose(&BigUint::from(60u32)).is_err());
        assert!(mr
            .compose(&[3u32.into(), 0u32.into(), 0u32.into()])
            .is_err());
    }

    #[test]
    fn hex() {
        assert_eq!(from_hex("0x1f").unwrap(), BigUint::from(31u32));
        assert_eq!(from_hex(" FF_00 \n").unwrap(), BigUint::from(0xff00u32));
        assert_eq!(to_hex(&BigUint::zero()), "0");
        assert!(from_hex("xyz").is_err());
        assert!(from_hex("").is_err());
    }
}
