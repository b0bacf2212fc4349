//! `(2K+1)`-part codec correcting `K` substitutions.
//!
//! The construction of the three-part codec with `2K+1` parts and binary
//! Reed-Solomon subcodes. `K` flips disturb the sort order of at most `K`
//! parts, so at least `K+1` corrected vectorizations agree.

use num_bigint::BigUint;
use serde::{Deserialize, Serialize};

use crate::bits::BitString;
use crate::codec::engine::{ColumnLayout, MajorityEngine, Recovered};
use crate::codec::message::{pow2, MixedRadix};
use crate::codec::parts::PartGeometry;
use crate::codec::{table_from_ranks, table_ranks, Fingerprint, SetCodec};
use crate::combinatorics::{binomial, factorial};
use crate::ecc::RsCode;
use crate::error::{Error, Result};
use crate::params::{ceil_log2, Params};
use crate::word::Word;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MultiSubMessage {
    /// Subset rank of part 0.
    pub d1: BigUint,
    /// Combined (set, permutation) ranks of parts `1..=2K`.
    pub combined: Vec<BigUint>,
    /// Column payloads of parts `0..=2K`.
    pub payloads: Vec<BitString>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MultiSubLayout {
    pub part_count: usize,
    pub part_width: usize,
    pub d_len: usize,
    /// Region reserved for the payload redundancy, `2K ceil(log M)`.
    pub d_region: usize,
    /// Actual payload redundancy bits.
    pub d_redundancy: usize,
    /// Region reserved for the vector redundancy, `2K ceil(log ML)`.
    pub s_region: usize,
    pub s_redundancy: usize,
}

#[derive(Clone, Debug)]
pub struct MultiSubCodec {
    params: Params,
    layout: MultiSubLayout,
    engine: MajorityEngine<RsCode>,
    radix: MixedRadix,
}

impl MultiSubCodec {
    pub fn new(params: Params) -> Result<Self> {
        let Params { m, l, k } = params;
        if k == 0 {
            return Err(Error::InvalidParams("K must be positive".into()));
        }
        let parts = 2 * k + 1;
        if l % parts != 0 {
            return Err(Error::InvalidParams(format!(
                "2K+1 = {parts} must divide L = {l}"
            )));
        }
        let exp = l / (2 * parts);
        if m < 2 || (exp < 64 && m as u64 > 1u64 << exp) {
            return Err(Error::InvalidParams(format!(
                "need 2 <= M <= 2^(L/(2(2K+1))) = 2^{exp}, got M = {m}"
            )));
        }
        let lml = ceil_log2((m * l) as u64) as usize;
        let lm = ceil_log2(m as u64) as usize;
        let d_region = 2 * k * lm;
        let s_region = 2 * k * lml;
        if d_region + s_region > m {
            return Err(Error::InvalidParams(format!(
                "2K(ceil(log ML) + ceil(log M)) = {} exceeds M = {m}",
                d_region + s_region
            )));
        }
        let g = PartGeometry::new(m, l, parts)?;
        let d_len = m - d_region - s_region;
        let s_code = RsCode::for_data_bits(g.s_len(), k)?;
        let d_code = if d_len > 0 {
            Some(RsCode::for_data_bits(d_len, k)?)
        } else {
            None
        };
        let layout = MultiSubLayout {
            part_count: parts,
            part_width: g.width,
            d_len,
            d_region,
            d_redundancy: d_code.as_ref().map_or(0, |c| c.redundancy_bits()),
            s_region,
            s_redundancy: s_code.redundancy_bits(),
        };
        let engine = MajorityEngine::new(
            g,
            ColumnLayout {
                d_len,
                d_region,
                s_region,
            },
            s_code,
            d_code,
            k + 1,
        )?;
        let c = binomial(&g.universe(), m);
        let cm = &c * factorial(m);
        let mut radices = vec![c];
        radices.extend(std::iter::repeat_n(cm, 2 * k));
        radices.extend(std::iter::repeat_n(pow2(d_len), parts));
        Ok(MultiSubCodec {
            params,
            layout,
            engine,
            radix: MixedRadix::new(radices),
        })
    }

    pub fn layout(&self) -> MultiSubLayout {
        self.layout
    }

    pub fn geometry(&self) -> PartGeometry {
        self.engine.geometry
    }

    pub fn engine(&self) -> &MajorityEngine<RsCode> {
        &self.engine
    }

    pub fn structure(&self, msg: &MultiSubMessage) -> Result<Recovered> {
        let g = self.engine.geometry;
        if msg.combined.len() != g.parts - 1 || msg.payloads.len() != g.parts {
            return Err(Error::Malformed(
                "wrong number of message components".into(),
            ));
        }
        if let Some(p) = msg.payloads.iter().find(|p| p.len() != self.layout.d_len) {
            return Err(Error::LengthMismatch {
                expected: self.layout.d_len,
                found: p.len(),
            });
        }
        let table = table_from_ranks(&g, &msg.d1, &msg.combined)?;
        Ok(Recovered {
            table,
            payloads: msg.payloads.clone(),
        })
    }

    pub fn message_of(&self, rec: &Recovered) -> MultiSubMessage {
        let (d1, combined) = table_ranks(&self.engine.geometry, &rec.table);
        MultiSubMessage {
            d1,
            combined,
            payloads: rec.payloads.clone(),
        }
    }

    pub fn encode(&self, msg: &MultiSubMessage) -> Result<Word> {
        let rec = self.structure(msg)?;
        self.engine.encode(&rec.table, &rec.payloads)
    }

    pub fn encode_structure(&self, rec: &Recovered) -> Result<Word> {
        self.engine.encode(&rec.table, &rec.payloads)
    }

    pub fn decode_parts(&self, word: &Word) -> Result<Recovered> {
        self.engine.decode(word)
    }

    pub fn decode(&self, word: &Word) -> Result<MultiSubMessage> {
        Ok(self.message_of(&self.decode_parts(word)?))
    }

    pub fn trace(&self, word: &Word) -> Result<Vec<Option<BitString>>> {
        self.engine.trace(word)
    }

    pub fn pack(&self, msg: &MultiSubMessage) -> Result<BigUint> {
        let mut digits = vec![msg.d1.clone()];
        digits.extend(msg.combined.iter().cloned());
        digits.extend(msg.payloads.iter().map(BitString::to_uint));
        self.radix.compose(&digits)
    }

    pub fn unpack(&self, value: &BigUint) -> Result<MultiSubMessage> {
        let d = self.radix.decompose(value)?;
        let parts = self.layout.part_count;
        Ok(MultiSubMessage {
            d1: d[0].clone(),
            combined: d[1..parts].to_vec(),
            payloads: d[parts..]
                .iter()
                .map(|x| BitString::from_uint(x, self.layout.d_len))
                .collect::<Result<_>>()?,
        })
    }
}

impl SetCodec for MultiSubCodec {
    fn name(&self) -> &'static str {
        "multi"
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
