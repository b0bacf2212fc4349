//! Packed binary strings.
//!
//! Bits are stored most-significant first: position 0 is the leftmost bit
//! and the most significant one under lexicographic comparison. Unused bits
//! of the last word are always zero, so equality, hashing and ordering can
//! work on the packed words.

use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use num_bigint::BigUint;
use num_traits::Zero;
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use smallvec::SmallVec;

use crate::error::{Error, Result};

type Words = SmallVec<[u64; 4]>;

#[derive(Clone, Default, PartialEq, Eq, Hash)]
pub struct BitString {
    words: Words,
    len: usize,
}

#[inline]
fn words_for(len: usize) -> usize {
    len.div_ceil(64)
}

#[inline]
fn low_mask(n: usize) -> u64 {
    if n >= 64 {
        u64::MAX
    } else {
        (1u64 << n) - 1
    }
}

impl BitString {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn with_capacity(bits: usize) -> Self {
        BitString {
            words: SmallVec::with_capacity(words_for(bits)),
            len: 0,
        }
    }

    pub fn zeros(len: usize) -> Self {
        BitString {
            words: smallvec::smallvec![0; words_for(len)],
            len,
        }
    }

    pub fn ones(len: usize) -> Self {
        let mut s = BitString {
            words: smallvec::smallvec![u64::MAX; words_for(len)],
            len,
        };
        s.clear_tail();
        s
    }

    pub fn from_bits<I: IntoIterator<Item = bool>>(bits: I) -> Self {
        let mut s = BitString::new();
        for b in bits {
            s.push(b);
        }
        s
    }

    /// The `len`-bit big-endian encoding of `value`; errors if it does not fit.
    pub fn from_uint(value: &BigUint, len: usize) -> Result<Self> {
        if value.bits() as usize > len {
            return Err(Error::OutOfRange {
                what: "integer for bit width",
            });
        }
        let mut s = BitString::zeros(len);
        let digits = value.to_u64_digits();
        // digit 0 holds bits [len-64, len) counted from the right.
        for (i, &d) in digits.iter().enumerate() {
            for b in 0..64 {
                if d >> b & 1 == 1 {
                    let from_right = i * 64 + b;
                    s.set(len - 1 - from_right, true);
                }
            }
        }
        Ok(s)
    }

    pub fn from_u64(value: u64, len: usize) -> Self {
        assert!(len <= 64 && (len == 64 || value >> len == 0));
        let mut s = BitString::with_capacity(len);
        s.push_bits(value, len);
        s
    }

    pub fn to_uint(&self) -> BigUint {
        if self.len == 0 {
            return BigUint::zero();
        }
        let mut bytes = Vec::with_capacity(self.words.len() * 8);
        for w in &self.words {
            bytes.extend_from_slice(&w.to_be_bytes());
        }
        let value = BigUint::from_bytes_be(&bytes);
        let pad = self.words.len() * 64 - self.len;
        value >> pad
    }

    /// Value of the string as an unsigned integer; only for `len <= 64`.
    pub fn to_u64(&self) -> u64 {
        assert!(self.len <= 64);
        if self.len == 0 {
            0
        } else {
            self.words[0] >> (64 - self.len)
        }
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.len
    }

    #[inline]
    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    #[inline]
    pub fn get(&self, i: usize) -> bool {
        debug_assert!(i < self.len);
        self.words[i / 64] >> (63 - i % 64) & 1 == 1
    }

    #[inline]
    pub fn set(&mut self, i: usize, v: bool) {
        debug_assert!(i < self.len);
        let mask = 1u64 << (63 - i % 64);
        if v {
            self.words[i / 64] |= mask;
        } else {
            self.words[i / 64] &= !mask;
        }
    }

    #[inline]
    pub fn flip(&mut self, i: usize) {
        debug_assert!(i < self.len);
        self.words[i / 64] ^= 1u64 << (63 - i % 64);
    }

    pub fn push(&mut self, v: bool) {
        if self.len.is_multiple_of(64) {
            self.words.push(0);
        }
        self.len += 1;
        if v {
            self.set(self.len - 1, true);
        }
    }

    /// Appends the low `n` bits of `value`, most significant first.
    pub fn push_bits(&mut self, value: u64, n: usize) {
        debug_assert!(n <= 64);
        if n == 0 {
            return;
        }
        let value = value & low_mask(n);
        let off = self.len % 64;
        if off == 0 {
            self.words.push(value << (64 - n));
        } else {
            let free = 64 - off;
            let last = self.words.last_mut().unwrap();
            if n <= free {
                *last |= value << (free - n);
            } else {
                *last |= value >> (n - free);
                self.words.push(value << (64 - (n - free)));
            }
        }
        self.len += n;
    }

    /// Reads `n <= 64` bits starting at `start` as an integer.
    #[inline]
    pub fn read_bits(&self, start: usize, n: usize) -> u64 {
        debug_assert!(n <= 64 && start + n <= self.len);
        if n == 0 {
            return 0;
        }
        self.window(start) >> (64 - n)
    }

    /// 64 bits starting at `pos`, left aligned, zero filled past the end.
    #[inline]
    fn window(&self, pos: usize) -> u64 {
        let w = pos / 64;
        let off = pos % 64;
        let hi = self.words.get(w).copied().unwrap_or(0) << off;
        if off == 0 {
            hi
        } else {
            hi | self.words.get(w + 1).copied().unwrap_or(0) >> (64 - off)
        }
    }

    pub fn extend_from(&mut self, other: &BitString) {
        self.extend_from_range(other, 0, other.len);
    }

    pub fn extend_from_range(&mut self, src: &BitString, start: usize, len: usize) {
        debug_assert!(start + len <= src.len);
        let mut done = 0;
        while done < len {
            let n = (len - done).min(64);
            self.push_bits(src.window(start + done) >> (64 - n), n);
            done += n;
        }
    }

    pub fn slice(&self, start: usize, len: usize) -> BitString {
        let mut s = BitString::with_capacity(len);
        s.extend_from_range(self, start, len);
        s
    }

    /// Overwrites `[start, start + src.len())` with `src`.
    pub fn write(&mut self, start: usize, src: &BitString) {
        debug_assert!(start + src.len <= self.len);
        for i in 0..src.len {
            self.set(start + i, src.get(i));
        }
    }

    pub fn concat(parts: &[&BitString]) -> BitString {
        let total = parts.iter().map(|p| p.len).sum();
        let mut s = BitString::with_capacity(total);
        for p in parts {
            s.extend_from(p);
        }
        s
    }

    pub fn count_ones(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn hamming_distance(&self, other: &BitString) -> usize {
        assert_eq!(self.len, other.len, "distance between unequal lengths");
        self.words
            .iter()
            .zip(&other.words)
            .map(|(a, b)| (a ^ b).count_ones() as usize)
            .sum()
    }

    /// Hamming distance between equal-length windows of two strings.
    pub fn range_distance(
        &self,
        start: usize,
        other: &BitString,
        other_start: usize,
        len: usize,
    ) -> usize {
        let mut d = 0;
        let mut done = 0;
        while done < len {
            let n = (len - done).min(64);
            let a = self.window(start + done) >> (64 - n);
            let b = other.window(other_start + done) >> (64 - n);
            d += (a ^ b).count_ones() as usize;
            done += n;
        }
        d
    }

    /// Lexicographic comparison of two equal-length windows.
    pub fn cmp_range(
        &self,
        start: usize,
        other: &BitString,
        other_start: usize,
        len: usize,
    ) -> Ordering {
        let mut done = 0;
        while done < len {
            let n = (len - done).min(64);
            let a = self.window(start + done) >> (64 - n);
            let b = other.window(other_start + done) >> (64 - n);
            match a.cmp(&b) {
                Ordering::Equal => done += n,
                ord => return ord,
            }
        }
        Ordering::Equal
    }

    /// Bitwise XOR in place; lengths must agree.
    pub fn xor_assign(&mut self, other: &BitString) {
        assert_eq!(self.len, other.len);
        for (a, b) in self.words.iter_mut().zip(&other.words) {
            *a ^= b;
        }
    }

    /// Indices of set bits, ascending.
    pub fn ones_positions(&self) -> OnesIter<'_> {
        OnesIter {
            words: &self.words,
            word: 0,
            current: self.words.first().copied().unwrap_or(0),
        }
    }

    pub fn iter(&self) -> impl Iterator<Item = bool> + '_ {
        (0..self.len).map(move |i| self.get(i))
    }

    pub fn truncate(&mut self, len: usize) {
        if len >= self.len {
            return;
        }
        self.len = len;
        self.words.truncate(words_for(len));
        self.clear_tail();
    }

    fn clear_tail(&mut self) {
        let used = self.len % 64;
        if used != 0 {
            if let Some(last) = self.words.last_mut() {
                *last &= !(u64::MAX >> used);
            }
        }
    }
}

pub struct OnesIter<'a> {
    words: &'a [u64],
    word: usize,
    current: u64,
}

impl Iterator for OnesIter<'_> {
    type Item = usize;

    #[inline]
    fn next(&mut self) -> Option<usize> {
        loop {
            if self.current != 0 {
                let lz = self.current.leading_zeros() as usize;
                self.current &= !(1u64 << (63 - lz));
                return Some(self.word * 64 + lz);
            }
            self.word += 1;
            if self.word >= self.words.len() {
                return None;
            }
            self.current = self.words[self.word];
        }
    }
}

impl Ord for BitString {
    fn cmp(&self, other: &Self) -> Ordering {
        self.words
            .iter()
            .zip(&other.words)
            .map(|(a, b)| a.cmp(b))
            .find(|o| o.is_ne())
            .unwrap_or(Ordering::Equal)
            .then(self.len.cmp(&other.len))
    }
}

impl PartialOrd for BitString {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for BitString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for b in self.iter() {
            f.write_str(if b { "1" } else { "0" })?;
        }
        Ok(())
    }
}

impl fmt::Debug for BitString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "BitString({self})")
    }
}

impl FromStr for BitString {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let mut out = BitString::with_capacity(s.len());
        for c in s.chars() {
            match c {
                '0' => out.push(false),
                '1' => out.push(true),
                other => {
                    return Err(Error::Malformed(format!(
                        "unexpected symbol {other:?} in bit string"
                    )))
                }
            }
        }
        Ok(out)
    }
}

impl Serialize for BitString {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for BitString {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn bs(s: &str) -> BitString {
        s.parse().unwrap()
    }

    #[test]
    fn display_roundtrip() {
        assert_eq!(bs("0010110").to_string(), "0010110");
        assert_eq!(BitString::ones(3).to_string(), "111");
        assert!("01x".parse::<BitString>().is_err());
    }

    #[test]
    fn lexicographic_matches_integer_order_exhaustively() {
        for len in 1..=16usize {
            let strings: Vec<BitString> = (0..1u64 << len)
                .map(|v| BitString::from_u64(v, len))
                .collect();
            for w in strings.windows(2) {
                assert!(w[0] < w[1], "len {len}: {} !< {}", w[0], w[1]);
            }
        }
    }

    #[test]
    fn prefix_sorts_first() {
        assert!(bs("1") < bs("10"));
        assert!(bs("0") < bs("00"));
        assert!(bs("01") > bs("001"));
    }

    #[test]
    fn uint_conversion() {
        let s = bs("0000000000000000000000000000000000000000000000000000000000000000101");
        assert_eq!(s.to_uint(), BigUint::from(5u32));
        assert_eq!(
            BitString::from_uint(&BigUint::from(5u32), s.len()).unwrap(),
            s
        );
        assert!(BitString::from_uint(&BigUint::from(8u32), 3).is_err());
    }

    proptest! {
        #[test]
        fn packed_ops_agree_with_bool_vectors(
            a in proptest::collection::vec(any::<bool>(), 0..300),
            b in proptest::collection::vec(any::<bool>(), 0..300),
            start in 0usize..300,
            len in 0usize..300,
        ) {
            let sa = BitString::from_bits(a.iter().copied());
            let sb = BitString::from_bits(b.iter().copied());
            prop_assert_eq!(sa.iter().collect::<Vec<_>>(), a.clone());

            let mut cat = sa.clone();
            cat.extend_from(&sb);
            let mut expect = a.clone();
            expect.extend(&b);
            prop_assert_eq!(cat.iter().collect::<Vec<_>>(), expect.clone());
            prop_assert_eq!(cat.cmp(&sa.clone()), expect.cmp(&a));
            prop_assert_eq!(sa.cmp(&sb), a.cmp(&b));

            let start = start.min(expect.len());
            let len = len.min(expect.len() - start);
            let sl = cat.slice(start, len);
            prop_assert_eq!(sl.iter().collect::<Vec<_>>(), expect[start..start + len].to_vec());

            let ones: Vec<usize> = cat.ones_positions().collect();
            let expect_ones: Vec<usize> = expect.iter().enumerate().filter(|(_, &v)| v).map(|(i, _)| i).collect();
            prop_assert_eq!(ones, expect_ones);
            prop_assert_eq!(BitString::from_uint(&cat.to_uint(), cat.len()).unwrap(), cat);
        }
    }
}
