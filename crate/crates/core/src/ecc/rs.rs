//! Systematic Reed-Solomon codes over GF(2^m) and their binary form.
//!
//! The generator polynomial has roots `alpha^1 .. alpha^(2e)`. A codeword is
//! the data symbols followed by the parity symbols; symbol `j` of an
//! `n`-symbol codeword is the coefficient of `x^(n-1-j)`. Decoding runs
//! syndromes, Berlekamp-Massey, a Chien search, and Forney's formula.
//!
//! In the binary form a bit string is cut into `m`-bit symbols, most
//! significant bit first, and the last symbol is padded with zeros.

use crate::bits::BitString;
use crate::ecc::gf::{Field, MAX_DEGREE, MIN_DEGREE};
use crate::error::{Error, Result};
use crate::params::ceil_log2;

#[derive(Clone, Debug)]
pub struct RsCode {
    field: &'static Field,
    n_symbols: usize,
    k_symbols: usize,
    budget: usize,
    /// Generator polynomial, ascending degree, monic.
    generator: Vec<u32>,
    /// Number of data bits in the binary form, if any.
    data_bits: usize,
}

impl RsCode {
    /// Code over GF(2^m) with `k` data symbols correcting `errors` symbol errors.
    pub fn new(m: u32, k_symbols: usize, errors: usize) -> Result<Self> {
        let field = Field::get(m)?;
        if errors == 0 {
            return Err(Error::InvalidParams(
                "RS error budget must be positive".into(),
            ));
        }
        if k_symbols == 0 {
            return Err(Error::InvalidParams("RS data must be nonempty".into()));
        }
        let n_symbols = k_symbols + 2 * errors;
        if n_symbols > field.order() as usize {
            return Err(Error::InvalidParams(format!(
                "RS length {n_symbols} exceeds 2^{m} - 1"
            )));
        }
        let mut generator = vec![1u32];
        for i in 1..=2 * errors as u64 {
            let root = field.alpha_pow(i);
            // generator *= (x + root)
            let mut next = vec![0u32; generator.len() + 1];
            for (d, &c) in generator.iter().enumerate() {
                next[d + 1] ^= c;
                next[d] ^= field.mul(c, root);
            }
            generator = next;
        }
        Ok(RsCode {
            field,
            n_symbols,
            k_symbols,
            budget: errors,
            generator,
            data_bits: k_symbols * m as usize,
        })
    }

    /// Binary code for `bits` data bits with symbols of
    /// `max(2, ceil(log2 bits))` bits, widened only if the code would
    /// otherwise be longer than the field allows.
    pub fn for_data_bits(bits: usize, errors: usize) -> Result<Self> {
        if bits == 0 {
            return Err(Error::InvalidParams("RS data must be nonempty".into()));
        }
        // Short inputs with a large budget may need a wider symbol than
        // ceil(log2 bits) for the code length to fit the field.
        let mut m = symbol_bits(bits);
        while m < MAX_DEGREE && bits.div_ceil(m as usize) + 2 * errors > (1usize << m) - 1 {
            m += 1;
        }
        if m > MAX_DEGREE {
            return Err(Error::InvalidParams(format!(
                "RS data of {bits} bits needs GF(2^{m}), above the supported 2^{MAX_DEGREE}"
            )));
        }
        let k = bits.div_ceil(m as usize);
        let mut code = RsCode::new(m, k, errors)?;
        code.data_bits = bits;
        Ok(code)
    }

    /// Binary code for `bits` data bits with a caller-chosen symbol size.
    pub fn with_symbol_bits(m: u32, bits: usize, errors: usize) -> Result<Self> {
        if bits == 0 {
            return Err(Error::InvalidParams("RS data must be nonempty".into()));
        }
        let mut code = RsCode::new(m, bits.div_ceil(m as usize), errors)?;
        code.data_bits = bits;
        Ok(code)
    }

    pub fn m(&self) -> u32 {
        self.field.degree()
    }

    pub fn n_symbols(&self) -> usize {
        self.n_symbols
    }

    pub fn k_symbols(&self) -> usize {
        self.k_symbols
    }

    /// Correctable symbol errors.
    pub fn correction_budget(&self) -> usize {
        self.budget
    }

    pub fn parity_symbols(&self) -> usize {
        2 * self.budget
    }

    pub fn data_bits(&self) -> usize {
        self.data_bits
    }

    pub fn redundancy_bits(&self) -> usize {
        self.parity_symbols() * self.m() as usize
    }

    /// Parity symbols for `data` (length `k`).
    pub fn encode_symbols(&self, data: &[u32]) -> Vec<u32> {
        assert_eq!(data.len(), self.k_symbols);
        let p = self.parity_symbols();
        // Remainder of data(x) * x^p modulo the generator, by LFSR division.
        // rem[0] is the highest-degree remainder coefficient.
        let mut rem = vec![0u32; p];
        let g = &self.generator;
        for &d in data {
            let fb = d ^ rem[0];
            rem.rotate_left(1);
            rem[p - 1] = 0;
            if fb != 0 {
                for (i, r) in rem.iter_mut().enumerate() {
                    // coefficient of x^(p-1-i) in the generator
                    *r ^= self.field.mul(fb, g[p - 1 - i]);
                }
            }
        }
        rem
    }

    /// Syndromes `c(alpha^1) .. c(alpha^(2e))`, summed term by term so the
    /// table lookups do not depend on each other.
    fn syndromes(&self, word: &[u32]) -> Vec<u32> {
        let f = self.field;
        let order = f.order();
        let n = word.len();
        let mut synd = vec![0u32; self.parity_symbols()];
        for (j, &c) in word.iter().enumerate() {
            if c == 0 {
                continue;
            }
            // c * x^pos evaluated at alpha^i is alpha^(log c + i pos).
            let pos = ((n - 1 - j) as u64 % order as u64) as u32;
            let mut e = f.log(c);
            for s in synd.iter_mut() {
                e += pos;
                if e >= order {
                    e -= order;
                }
                *s ^= f.exp_log(e);
            }
        }
        synd
    }

    /// Corrects a full codeword (data then parity) in place and returns the
    /// number of corrected symbols.
    pub fn decode_symbols(&self, word: &mut [u32]) -> Result<usize> {
        assert_eq!(word.len(), self.n_symbols);
        let f = self.field;
        let synd = self.syndromes(word);
        if synd.iter().all(|&s| s == 0) {
            return Ok(0);
        }
        let lambda = self.berlekamp_massey(&synd);
        let nu = lambda.len() - 1;
        if nu == 0 || nu > self.budget || lambda[nu] == 0 {
            return Err(Error::RsFailure);
        }
        // Omega(x) = S(x) Lambda(x) mod x^(2e)
        let two_e = self.parity_symbols();
        let mut omega = vec![0u32; two_e];
        for (i, &l) in lambda.iter().enumerate() {
            for (j, &s) in synd.iter().enumerate() {
                if i + j < two_e {
                    omega[i + j] ^= f.mul(l, s);
                }
            }
        }
        let n = self.n_symbols;
        let mut found = 0;
        let mut fixes = Vec::with_capacity(nu);
        // Chien search: term i of Lambda(alpha^-p) is alpha^(log lambda_i - i p),
        // so each step lowers every exponent by its degree.
        let order = f.order();
        let mut terms: Vec<(u32, u32)> = lambda
            .iter()
            .enumerate()
            .skip(1)
            .filter(|&(_, &l)| l != 0)
            .map(|(i, &l)| (f.log(l), (i as u64 % order as u64) as u32))
            .collect();
        for p in 0..n as u64 {
            if p > 0 {
                for (e, step) in terms.iter_mut() {
                    *e = if *e >= *step {
                        *e - *step
                    } else {
                        *e + order - *step
                    };
                }
            }
            if terms
                .iter()
                .fold(lambda[0], |acc, &(e, _)| acc ^ f.exp_log(e))
                != 0
            {
                continue;
            }
            // X^-1 = alpha^(-p)
            let xinv = f.alpha_pow(order as u64 - p);
            // Formal derivative keeps odd-degree terms.
            let mut deriv = 0u32;
            let mut xpow = 1u32;
            for (i, &l) in lambda.iter().enumerate().skip(1) {
                if i % 2 == 1 {
                    deriv ^= f.mul(l, xpow);
                }
                xpow = f.mul(xpow, xinv);
            }
            if deriv == 0 {
                return Err(Error::RsFailure);
            }
            let value = f.div(f.eval(&omega, xinv), deriv);
            fixes.push((n - 1 - p as usize, value));
            found += 1;
            if found == nu {
                break;
            }
        }
        if found != nu {
            return Err(Error::RsFailure);
        }
        // The corrected word is a codeword iff the error pattern alone
        // reproduces the syndromes.
        let mut residual = synd;
        for &(j, v) in &fixes {
            let pos = ((n - 1 - j) as u64 % order as u64) as u32;
            let mut e = f.log(v);
            for s in residual.iter_mut() {
                e += pos;
                if e >= order {
                    e -= order;
                }
                *s ^= f.exp_log(e);
            }
        }
        if residual.iter().any(|&s| s != 0) {
            return Err(Error::RsFailure);
        }
        for &(j, v) in &fixes {
            word[j] ^= v;
        }
        Ok(found)
    }

    /// Error locator polynomial (ascending degree) from syndromes.
    fn berlekamp_massey(&self, synd: &[u32]) -> Vec<u32> {
        let f = self.field;
        let mut c = vec![1u32];
        let mut b = vec![1u32];
        let mut l = 0usize;
        let mut shift = 1usize;
        let mut bd = 1u32;
        for r in 0..synd.len() {
            let mut d = synd[r];
            for i in 1..=l.min(c.len() - 1) {
                d ^= f.mul(c[i], synd[r - i]);
            }
            if d == 0 {
                shift += 1;
                continue;
            }
            let coef = f.div(d, bd);
            let mut next = c.clone();
            if next.len() < b.len() + shift {
                next.resize(b.len() + shift, 0);
            }
            for (i, &bi) in b.iter().enumerate() {
                next[i + shift] ^= f.mul(coef, bi);
            }
            if 2 * l <= r {
                l = r + 1 - l;
                b = c;
                bd = d;
                shift = 1;
            } else {
                shift += 1;
            }
            c = next;
        }
        c.resize(l + 1, 0);
        c
    }

    /// Symbols of the binary data, last symbol padded with zeros.
    pub fn data_symbols(&self, data: &BitString) -> Vec<u32> {
        let m = self.m() as usize;
        assert_eq!(data.len(), self.data_bits);
        (0..self.k_symbols)
            .map(|s| {
                let start = s * m;
                let take = m.min(data.len() - start);
                (data.read_bits(start, take) << (m - take)) as u32
            })
            .collect()
    }

    fn symbols_of(&self, bits: &BitString) -> Vec<u32> {
        let m = self.m() as usize;
        (0..bits.len() / m)
            .map(|s| bits.read_bits(s * m, m) as u32)
            .collect()
    }

    pub fn redundancy(&self, data: &BitString) -> Result<BitString> {
        if data.len() != self.data_bits {
            return Err(Error::LengthMismatch {
                expected: self.data_bits,
                found: data.len(),
            });
        }
        let parity = self.encode_symbols(&self.data_symbols(data));
        let mut out = BitString::with_capacity(self.redundancy_bits());
        for s in parity {
            out.push_bits(s as u64, self.m() as usize);
        }
        Ok(out)
    }

    pub fn correct(&self, data: &BitString, red: &BitString) -> Result<BitString> {
        let mut out = data.clone();
        self.correct_in_place(&mut out, red)?;
        Ok(out)
    }

    /// Corrects `data` in place against `red`; returns corrected symbol count.
    pub fn correct_in_place(&self, data: &mut BitString, red: &BitString) -> Result<usize> {
        if data.len() != self.data_bits {
            return Err(Error::LengthMismatch {
                expected: self.data_bits,
                found: data.len(),
            });
        }
        if red.len() != self.redundancy_bits() {
            return Err(Error::LengthMismatch {
                expected: self.redundancy_bits(),
                found: red.len(),
            });
        }
        let mut word = self.data_symbols(data);
        word.extend(self.symbols_of(red));
        let fixed = self.decode_symbols(&mut word)?;
        if fixed == 0 {
            return Ok(0);
        }
        let m = self.m() as usize;
        let tail = self.k_symbols * m - self.data_bits;
        if tail > 0 && word[self.k_symbols - 1] & ((1u32 << tail) - 1) != 0 {
            return Err(Error::RsFailure);
        }
        for (s, &sym) in word[..self.k_symbols].iter().enumerate() {
            let start = s * m;
            let take = m.min(self.data_bits - start);
            let v = (sym >> (m - take)) as u64;
            if data.read_bits(start, take) != v {
                for b in 0..take {
                    data.set(start + b, v >> (take - 1 - b) & 1 == 1);
                }
            }
        }
        Ok(fixed)
    }
}

/// Symbol size used for `bits` data bits.
pub fn symbol_bits(bits: usize) -> u32 {
    ceil_log2(bits as u64).max(MIN_DEGREE)
}

/// Redundancy bits of the binary RS code correcting `errors` symbols of `data`.
pub fn rs_redundancy(data: &BitString, errors: usize) -> Result<BitString> {
    RsCode::for_data_bits(data.len(), errors)?.redundancy(data)
}

pub fn rs_correct(data: &BitString, red: &BitString, errors: usize) -> Result<BitString> {
    RsCode::for_data_bits(data.len(), errors)?.correct(data, red)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn generator_roots() {
        let code = RsCode::new(4, 11, 2).unwrap();
        let f = Field::get(4).unwrap();
        for i in 1..=4 {
            assert_eq!(f.eval(&code.generator, f.alpha_pow(i)), 0);
        }
        assert_ne!(f.eval(&code.generator, f.alpha_pow(5)), 0);
    }

    #[test]
    fn codewords_have_zero_syndrome() {
        let code = RsCode::new(4, 11, 2).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for _ in 0..100 {
            let data: Vec<u32> = (0..11).map(|_| rng.random_range(0..16)).collect();
            let mut word = data.clone();
            word.extend(code.encode_symbols(&data));
            assert!(code.syndromes(&word).iter().all(|&s| s == 0));
        }
    }

    #[test]
    fn binary_lengths() {
        let code = RsCode::for_data_bits(256, 2).unwrap();
        assert_eq!(code.m(), 8);
        assert_eq!(code.redundancy_bits(), 32);
        assert_eq!(
            rs_redundancy(&BitString::zeros(256), 2).unwrap(),
            BitString::zeros(32)
        );
        let code = RsCode::for_data_bits(163_200, 2).unwrap();
        assert_eq!(code.m(), 18);
        assert!(RsCode::for_data_bits(10, 0).is_err());
        assert!(RsCode::for_data_bits(0, 1).is_err());
        // 3 bits in 2-bit symbols would give n = 4 > 3, so 3-bit symbols are used.
        assert_eq!(RsCode::for_data_bits(3, 1).unwrap().m(), 3);
    }

    #[test]
    fn binary_bit_flips_in_budget() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..200 {
            let bits = rng.random_range(5..3000);
            let k = rng.random_range(1..4);
            let Ok(code) = RsCode::for_data_bits(bits, k) else {
                continue;
            };
            let data = BitString::from_bits((0..bits).map(|_| rng.random_bool(0.5)));
            let red = code.redundancy(&data).unwrap();
            let (mut d, mut r) = (data.clone(), red.clone());
            for _ in 0..k {
                let p = rng.random_range(0..bits + red.len());
                if p < bits {
                    d.flip(p)
                } else {
                    r.flip(p - bits)
                }
            }
            assert_eq!(code.correct(&d, &r).unwrap(), data);
        }
    }

    #[test]
    fn beyond_budget_detected_on_minimal_code() {
        // [7,5] over GF(8) corrects one symbol; two symbol errors on a code
        // of minimum distance 3 are either detected or miscorrected, and the
        // decoder must never return the original in that case.
        let code = RsCode::new(3, 5, 1).unwrap();
        let data = vec![1, 2, 3, 4, 5];
        let mut word = data.clone();
        word.extend(code.encode_symbols(&data));
        let mut bad = word.clone();
        bad[0] ^= 1;
        bad[1] ^= 1;
        let res = code.decode_symbols(&mut bad);
        assert!(res.is_err() || bad[..5] != data[..]);
    }
}
