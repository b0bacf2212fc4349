//! Systematic binary Hamming codes.
//!
//! Position `p` in `1..2^t` of the parity-check matrix is the binary
//! expansion of `p`. Data bits occupy the positions that are not powers of
//! two, in increasing order, and redundancy bit `i` sits at position `2^i`.
//! Data shorter than `2^t - t - 1` is preceded by virtual zeros that are
//! never transmitted.

use crate::bits::BitString;
use crate::error::{Error, Result};
use crate::params::hamming_t;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HammingCode {
    t: usize,
    data_len: usize,
    padded_prefix: usize,
    /// Matrix position of each transmitted data bit.
    positions: Vec<u32>,
}

/// What a Hamming decoder changed.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Correction {
    None,
    /// Index of the flipped data bit.
    Data(usize),
    /// Index of the flipped redundancy bit.
    Redundancy(usize),
}

impl HammingCode {
    /// Shortest code whose data part holds `len` bits.
    pub fn for_data_len(len: usize) -> Result<Self> {
        if len == 0 {
            return Err(Error::InvalidParams("Hamming data must be nonempty".into()));
        }
        let t = hamming_t(len);
        let data_len = (1usize << t) - t - 1;
        let padded_prefix = data_len - len;
        let positions = (1u32..1 << t)
            .filter(|p| !p.is_power_of_two())
            .skip(padded_prefix)
            .collect();
        Ok(HammingCode {
            t,
            data_len,
            padded_prefix,
            positions,
        })
    }

    /// Redundancy bit count.
    pub fn t(&self) -> usize {
        self.t
    }

    /// Full data length `2^t - t - 1` including virtual padding.
    pub fn data_len(&self) -> usize {
        self.data_len
    }

    pub fn padded_prefix(&self) -> usize {
        self.padded_prefix
    }

    /// Number of transmitted data bits.
    pub fn len(&self) -> usize {
        self.positions.len()
    }

    pub fn is_empty(&self) -> bool {
        self.positions.is_empty()
    }

    /// XOR of the positions of the set data bits.
    fn data_syndrome(&self, data: &BitString) -> u32 {
        data.ones_positions().fold(0, |s, i| s ^ self.positions[i])
    }

    fn check_len(&self, data: &BitString) -> Result<()> {
        if data.len() != self.len() {
            return Err(Error::LengthMismatch {
                expected: self.len(),
                found: data.len(),
            });
        }
        Ok(())
    }

    pub fn redundancy(&self, data: &BitString) -> Result<BitString> {
        self.check_len(data)?;
        let s = self.data_syndrome(data);
        Ok(BitString::from_bits((0..self.t).map(|i| s >> i & 1 == 1)))
    }

    /// Corrects at most one flip in `data` or `red`, editing `data` in place.
    pub fn correct_in_place(&self, data: &mut BitString, red: &BitString) -> Result<Correction> {
        self.check_len(data)?;
        if red.len() != self.t {
            return Err(Error::LengthMismatch {
                expected: self.t,
                found: red.len(),
            });
        }
        let s = red
            .ones_positions()
            .fold(self.data_syndrome(data), |s, i| s ^ (1u32 << i));
        if s == 0 {
            return Ok(Correction::None);
        }
        if s.is_power_of_two() {
            return Ok(Correction::Redundancy(s.trailing_zeros() as usize));
        }
        // Data index of a non-power position p among all data positions.
        let full_index = s as usize - 1 - (s.ilog2() as usize + 1);
        if full_index < self.padded_prefix {
            return Err(Error::HammingFailure);
        }
        let i = full_index - self.padded_prefix;
        data.flip(i);
        Ok(Correction::Data(i))
    }

    pub fn correct(&self, data: &BitString, red: &BitString) -> Result<BitString> {
        let mut out = data.clone();
        self.correct_in_place(&mut out, red)?;
        Ok(out)
    }
}

/// Hamming redundancy of `data` under the shortest fitting code.
pub fn hamming_redundancy(data: &BitString) -> Result<BitString> {
    HammingCode::for_data_len(data.len())?.redundancy(data)
}

/// Corrects a single flip anywhere in `(data, red)`.
pub fn hamming_correct(data: &BitString, red: &BitString) -> Result<BitString> {
    HammingCode::for_data_len(data.len())?.correct(data, red)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    /// Syndrome of a full-length codeword given as a bit vector indexed by
    /// matrix position (index 0 unused), computed from the definition.
    fn matrix_syndrome(word: &[bool]) -> u32 {
        word.iter()
            .enumerate()
            .skip(1)
            .filter(|(_, &b)| b)
            .fold(0, |s, (p, _)| s ^ p as u32)
    }

    fn place(code: &HammingCode, data: &BitString, red: &BitString) -> Vec<bool> {
        let n = 1usize << code.t();
        let mut word = vec![false; n];
        for (i, &p) in code.positions.iter().enumerate() {
            word[p as usize] = data.get(i);
        }
        for i in 0..code.t() {
            word[1 << i] = red.get(i);
        }
        word
    }

    #[test]
    fn shapes() {
        let c = HammingCode::for_data_len(4).unwrap();
        assert_eq!((c.t(), c.data_len(), c.padded_prefix()), (3, 4, 0));
        let c = HammingCode::for_data_len(11).unwrap();
        assert_eq!((c.t(), c.data_len()), (4, 11));
        let c = HammingCode::for_data_len(6).unwrap();
        assert_eq!((c.t(), c.data_len(), c.padded_prefix()), (4, 11, 5));
        assert!(HammingCode::for_data_len(0).is_err());
    }

    #[test]
    fn zero_data_zero_redundancy() {
        for n in [1, 4, 7, 100, 6048] {
            let r = hamming_redundancy(&BitString::zeros(n)).unwrap();
            assert_eq!(r.count_ones(), 0);
        }
    }

    #[test]
    fn exhaustive_single_errors_t3_t4() {
        for n in [4usize, 11] {
            let code = HammingCode::for_data_len(n).unwrap();
            for v in 0..1u64 << n {
                let data = BitString::from_u64(v, n);
                let red = code.redundancy(&data).unwrap();
                assert_eq!(matrix_syndrome(&place(&code, &data, &red)), 0);
                assert_eq!(code.correct(&data, &red).unwrap(), data);
                for i in 0..n {
                    let mut bad = data.clone();
                    bad.flip(i);
                    let mut fixed = bad.clone();
                    assert_eq!(
                        code.correct_in_place(&mut fixed, &red).unwrap(),
                        Correction::Data(i)
                    );
                    assert_eq!(fixed, data);
                }
                for i in 0..code.t() {
                    let mut bad = red.clone();
                    bad.flip(i);
                    assert_eq!(code.correct(&data, &bad).unwrap(), data);
                }
            }
        }
    }

    #[test]
    fn padding_syndrome_is_failure() {
        // Shortened [15,11] carrying 6 bits: flipping two data bits whose
        // positions XOR to a virtual position must be flagged.
        let code = HammingCode::for_data_len(6).unwrap();
        let data = BitString::zeros(6);
        let red = code.redundancy(&data).unwrap();
        let mut seen_failure = false;
        for i in 0..6 {
            for j in i + 1..6 {
                let mut bad = data.clone();
                bad.flip(i);
                bad.flip(j);
                let s = code.positions[i] ^ code.positions[j];
                let virtual_pos = (1u32..16)
                    .filter(|p| !p.is_power_of_two())
                    .take(5)
                    .any(|p| p == s);
                let got = code.correct(&bad, &red);
                assert_eq!(got.is_err(), virtual_pos);
                seen_failure |= virtual_pos;
            }
        }
        assert!(seen_failure);
    }

    proptest! {
        #[test]
        fn random_single_flip(bits in proptest::collection::vec(any::<bool>(), 1..400), pos in any::<usize>()) {
            let data = BitString::from_bits(bits);
            let code = HammingCode::for_data_len(data.len()).unwrap();
            let red = code.redundancy(&data).unwrap();
            let total = data.len() + red.len();
            let pos = pos % total;
            let (mut d, mut r) = (data.clone(), red.clone());
            if pos < d.len() { d.flip(pos) } else { r.flip(pos - d.len()) }
            prop_assert_eq!(hamming_correct(&d, &r).unwrap(), data);
        }
    }
}
