//! Three-part single-substitution codec.
//!
//! Every string is split into thirds. Each third carries an identifier from
//! a set of `M` distinct `(L/3 - 1)`-bit strings; the reserved column of each
//! third stores a payload, the Hamming redundancy of that payload, and the
//! Hamming redundancy of the part-major vectorization taken in that third's
//! sort order. A flip can disturb the sort order of at most one third, so two
//! of the three corrected vectorizations agree on the true structure.

use num_bigint::BigUint;
use serde::{Deserialize, Serialize};

use crate::bits::BitString;
use crate::codec::engine::{ColumnLayout, MajorityEngine, Recovered};
use crate::codec::message::{pow2, MixedRadix};
use crate::codec::parts::PartGeometry;
use crate::codec::{table_from_ranks, table_ranks, Fingerprint, SetCodec};
use crate::combinatorics::{binomial, factorial};
use crate::ecc::HammingCode;
use crate::error::{Error, Result};
use crate::params::{ceil_log2, hamming_t, Params};
use crate::word::Word;

/// Components of a message, all 0-based.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SingleSubMessage {
    /// Rank of the first third's identifier set.
    pub d1: BigUint,
    pub d2: BitString,
    /// Combined (set, permutation) rank of the second third.
    pub d3: BigUint,
    pub d4: BitString,
    /// Combined (set, permutation) rank of the last third.
    pub d5: BigUint,
    pub d6: BitString,
}

/// Bit budget of each reserved column.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SingleSubLayout {
    pub part_width: usize,
    /// Payload bits per column.
    pub d_len: usize,
    /// Hamming redundancy of the payload.
    pub h: usize,
    /// Hamming redundancy of the vectorization.
    pub t: usize,
    pub slack: usize,
}

#[derive(Clone, Debug)]
pub struct SingleSubCodec {
    params: Params,
    layout: SingleSubLayout,
    engine: MajorityEngine<HammingCode>,
    radix: MixedRadix,
}

impl SingleSubCodec {
    pub fn new(params: Params) -> Result<Self> {
        let Params { m, l, k } = params;
        if k != 1 {
            return Err(Error::InvalidParams(
                "this codec corrects exactly one substitution".into(),
            ));
        }
        if l % 3 != 0 {
            return Err(Error::InvalidParams(format!("3 must divide L = {l}")));
        }
        if m < 2 || (l / 6 < 64 && m as u64 > 1u64 << (l / 6)) {
            return Err(Error::InvalidParams(format!(
                "need 2 <= M <= 2^(L/6), got M = {m}"
            )));
        }
        let need = ceil_log2((m * l) as u64) as usize + ceil_log2(m as u64) as usize + 2;
        if need > m {
            return Err(Error::InvalidParams(format!(
                "ceil(log ML) + ceil(log M) + 2 = {need} exceeds M = {m}"
            )));
        }
        let g = PartGeometry::new(m, l, 3)?;
        let t = hamming_t(g.s_len());
        // Largest payload whose Hamming redundancy still fits the column.
        let room = m - t;
        let (d_len, h) = if room <= 2 {
            (0, 0)
        } else {
            let mut h = 2;
            while (1usize << h) - h - 1 < room - h {
                h += 1;
            }
            (room - h, h)
        };
        let (d_len, h) = if d_len == 0 { (0, 0) } else { (d_len, h) };
        let layout = SingleSubLayout {
            part_width: g.width,
            d_len,
            h,
            t,
            slack: m - t - h - d_len,
        };
        let s_code = HammingCode::for_data_len(g.s_len())?;
        let d_code = if d_len > 0 {
            Some(HammingCode::for_data_len(d_len)?)
        } else {
            None
        };
        debug_assert!(d_code.as_ref().is_none_or(|c| c.t() == h));
        let engine = MajorityEngine::new(
            g,
            ColumnLayout {
                d_len,
                d_region: h,
                s_region: t,
            },
            s_code,
            d_code,
            2,
        )?;
        let c = binomial(&g.universe(), m);
        let cm = &c * factorial(m);
        let p = pow2(d_len);
        let radix = MixedRadix::new(vec![c, p.clone(), cm.clone(), p.clone(), cm, p]);
        Ok(SingleSubCodec {
            params,
            layout,
            engine,
            radix,
        })
    }

    pub fn layout(&self) -> SingleSubLayout {
        self.layout
    }

    pub fn geometry(&self) -> PartGeometry {
        self.engine.geometry
    }

    pub fn engine(&self) -> &MajorityEngine<HammingCode> {
        &self.engine
    }

    pub fn structure(&self, msg: &SingleSubMessage) -> Result<Recovered> {
        let g = self.engine.geometry;
        let table = table_from_ranks(&g, &msg.d1, &[msg.d3.clone(), msg.d5.clone()])?;
        let payloads = vec![msg.d2.clone(), msg.d4.clone(), msg.d6.clone()];
        if payloads.iter().any(|p| p.len() != self.layout.d_len) {
            return Err(Error::LengthMismatch {
                expected: self.layout.d_len,
                found: payloads
                    .iter()
                    .map(BitString::len)
                    .find(|&n| n != self.layout.d_len)
                    .unwrap(),
            });
        }
        Ok(Recovered { table, payloads })
    }

    pub fn message_of(&self, rec: &Recovered) -> SingleSubMessage {
        let (d1, mut combined) = table_ranks(&self.engine.geometry, &rec.table);
        let d5 = combined.pop().unwrap();
        let d3 = combined.pop().unwrap();
        SingleSubMessage {
            d1,
            d2: rec.payloads[0].clone(),
            d3,
            d4: rec.payloads[1].clone(),
            d5,
            d6: rec.payloads[2].clone(),
        }
    }

    pub fn encode(&self, msg: &SingleSubMessage) -> Result<Word> {
        let rec = self.structure(msg)?;
        self.engine.encode(&rec.table, &rec.payloads)
    }

    /// Recovers the codeword structure without converting it to ranks.
    pub fn decode_parts(&self, word: &Word) -> Result<Recovered> {
        self.engine.decode(word)
    }

    pub fn decode(&self, word: &Word) -> Result<SingleSubMessage> {
        Ok(self.message_of(&self.decode_parts(word)?))
    }

    /// Corrected vectorization of each third, for checking which orderings
    /// survived a substitution.
    pub fn trace(&self, word: &Word) -> Result<Vec<Option<BitString>>> {
        self.engine.trace(word)
    }

    pub fn pack(&self, msg: &SingleSubMessage) -> Result<BigUint> {
        self.radix.compose(&[
            msg.d1.clone(),
            msg.d2.to_uint(),
            msg.d3.clone(),
            msg.d4.to_uint(),
            msg.d5.clone(),
            msg.d6.to_uint(),
        ])
    }

    pub fn unpack(&self, value: &BigUint) -> Result<SingleSubMessage> {
        let d = self.radix.decompose(value)?;
        let n = self.layout.d_len;
        Ok(SingleSubMessage {
            d1: d[0].clone(),
            d2: BitString::from_uint(&d[1], n)?,
            d3: d[2].clone(),
            d4: BitString::from_uint(&d[3], n)?,
            d5: d[4].clone(),
            d6: BitString::from_uint(&d[5], n)?,
        })
    }
}

impl SetCodec for SingleSubCodec {
    fn name(&self) -> &'static str {
        "single"
    }

    fn params(&self) -> Params {
        self.params
    }

    fn message_space(&self) -> BigUint {
        self.radix.space()
    }

    fn encode_value(&self, value: &BigUint) -> Result<Word> {
        self.encode(&self.unpack(value)?)
    }

    fn decode_value(&self, word: &Word) -> Result<BigUint> {
        self.pack(&self.decode(word)?)
    }

    fn fingerprint(&self, value: &BigUint) -> Result<Fingerprint> {
        Ok(Fingerprint::Structure(
            self.structure(&self.unpack(value)?)?,
        ))
    }

    fn decode_fingerprint(&self, word: &Word) -> Result<Fingerprint> {
        Ok(Fingerprint::Structure(self.decode_parts(word)?))
    }
}
