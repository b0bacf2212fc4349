//! Two-part single-substitution codec with a parity indicator.
//!
//! Strings are split into halves. The bit `b` is the parity of the second
//! half of the whole word, and four copies of it sit in the reserved columns
//! of the rows holding the two largest identifiers of each half. A flip in
//! the first half leaves the received second-half parity equal to `b`; a
//! flip in the second half changes it. Comparing the two tells the decoder
//! which half kept its sort order.
//!
//! Reserved column `j`, in part-`j` order, holds the payload `p_j`, then the
//! Hamming redundancy of `s_j || p_j`, then zero slack, then two indicator
//! copies in the last two rows.

use num_bigint::BigUint;
use serde::{Deserialize, Serialize};

use crate::bits::BitString;
use crate::codec::engine::Recovered;
use crate::codec::message::{pow2, MixedRadix};
use crate::codec::parts::{
    assemble_rows, match_rows_by_part, true_column, PartGeometry, PartTable,
};
use crate::codec::{table_from_ranks, table_ranks, Fingerprint, SetCodec};
use crate::combinatorics::{binomial, factorial};
use crate::ecc::HammingCode;
use crate::error::{Error, Result};
use crate::params::{hamming_t, Params};
use crate::word::Word;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ImprovedMessage {
    /// Subset rank of the first half's identifiers.
    pub d1: BigUint,
    /// Combined (set, permutation) rank of the second half.
    pub d2: BigUint,
    pub d3: BitString,
    pub d4: BitString,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ImprovedLayout {
    pub half_width: usize,
    /// Payload bits per column.
    pub payload: usize,
    /// Hamming redundancy of each `s_j || p_j`.
    pub t: usize,
    pub slack: usize,
    /// Indicator copies per column.
    pub indicators: usize,
}

#[derive(Clone, Debug)]
pub struct ImprovedCodec {
    params: Params,
    layout: ImprovedLayout,
    geometry: PartGeometry,
    code: HammingCode,
    radix: MixedRadix,
}

/// Which half the decoder trusted, with the indicator it read.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct IndicatorReading {
    pub indicator: bool,
    pub parity: bool,
    pub trusted_part: usize,
}

impl ImprovedCodec {
    pub fn new(params: Params) -> Result<Self> {
        let Params { m, l, k } = params;
        if k != 1 {
            return Err(Error::InvalidParams(
                "this codec corrects exactly one substitution".into(),
            ));
        }
        if l % 2 != 0 {
            return Err(Error::InvalidParams(format!("2 must divide L = {l}")));
        }
        if m < 2 || (l / 4 < 64 && m as u64 > 1u64 << (l / 4)) {
            return Err(Error::InvalidParams(format!(
                "need 2 <= M <= 2^(L/4), got M = {m}"
            )));
        }
        let g = PartGeometry::new(m, l, 2)?;
        let s = g.s_len();
        // Largest payload n with n + t(s + n) + 2 <= M.
        let mut best = None;
        for n in 0..=m {
            let t = hamming_t(s + n);
            if n + t + 2 <= m {
                best = Some((n, t));
            }
        }
        let (payload, t) = best.ok_or_else(|| {
            Error::InvalidParams(format!("M = {m} leaves no room for the column redundancy"))
        })?;
        let layout = ImprovedLayout {
            half_width: g.width,
            payload,
            t,
            slack: m - payload - t - 2,
            indicators: 2,
        };
        let code = HammingCode::for_data_len(s + payload)?;
        let c = binomial(&g.universe(), m);
        let cm = &c * factorial(m);
        let radix = MixedRadix::new(vec![c, cm, pow2(payload), pow2(payload)]);
        Ok(ImprovedCodec {
            params,
            layout,
            geometry: g,
            code,
            radix,
        })
    }

    pub fn layout(&self) -> ImprovedLayout {
        self.layout
    }

    pub fn geometry(&self) -> PartGeometry {
        self.geometry
    }

    pub fn structure(&self, msg: &ImprovedMessage) -> Result<Recovered> {
        let n = self.layout.payload;
        if let Some(p) = [&msg.d3, &msg.d4].into_iter().find(|p| p.len() != n) {
            return Err(Error::LengthMismatch {
                expected: n,
                found: p.len(),
            });
        }
        Ok(Recovered {
            table: table_from_ranks(&self.geometry, &msg.d1, std::slice::from_ref(&msg.d2))?,
            payloads: vec![msg.d3.clone(), msg.d4.clone()],
        })
    }

    pub fn message_of(&self, rec: &Recovered) -> ImprovedMessage {
        let (d1, combined) = table_ranks(&self.geometry, &rec.table);
        ImprovedMessage {
            d1,
            d2: combined[0].clone(),
            d3: rec.payloads[0].clone(),
            d4: rec.payloads[1].clone(),
        }
    }

    fn protected(&self, s: &BitString, p: &BitString) -> BitString {
        BitString::concat(&[s, p])
    }

    pub fn encode_structure(&self, rec: &Recovered) -> Result<Word> {
        let g = &self.geometry;
        let lay = &self.layout;
        rec.table.validate(g)?;
        let mut cols: Vec<BitString> = (0..2)
            .map(|j| {
                let p = &rec.payloads[j];
                let red = self
                    .code
                    .redundancy(&self.protected(&rec.table.s_vector(g, j), p))
                    .expect("length fixed by layout");
                let mut col = BitString::concat(&[p, &red]);
                col.extend_from(&BitString::zeros(lay.slack + 2));
                col
            })
            .collect();
        // Second-half parity with the column-L indicators still zero.
        let mut parity = cols[1].count_ones() % 2 == 1;
        for v in &rec.table.values[1] {
            parity ^= v.count_ones() % 2 == 1;
        }
        for col in &mut cols {
            col.set(g.m - 2, parity);
            col.set(g.m - 1, parity);
        }
        Word::from_distinct(assemble_rows(g, &rec.table, &cols))
    }

    pub fn encode(&self, msg: &ImprovedMessage) -> Result<Word> {
        self.encode_structure(&self.structure(msg)?)
    }

    /// Majority of the four indicator copies and the received parity.
    pub fn read_indicator(&self, word: &Word) -> Result<IndicatorReading> {
        self.check_shape(word)?;
        let g = &self.geometry;
        let rows = word.rows();
        let mut ones = 0;
        for j in 0..2 {
            let order = g.order_by_part(rows, j);
            let c = g.reserved_col(j);
            ones += rows[order[g.m - 2]].get(c) as usize + rows[order[g.m - 1]].get(c) as usize;
        }
        let indicator = match ones {
            0 | 1 => false,
            3 | 4 => true,
            _ => return Err(Error::NoIndicatorMajority),
        };
        let half = g.width;
        let parity = rows
            .iter()
            .map(|r| r.slice(half, half).count_ones())
            .sum::<usize>()
            % 2
            == 1;
        let trusted_part = if parity == indicator { 1 } else { 0 };
        Ok(IndicatorReading {
            indicator,
            parity,
            trusted_part,
        })
    }

    fn check_shape(&self, word: &Word) -> Result<()> {
        let g = &self.geometry;
        if word.string_len() != g.l {
            return Err(Error::LengthMismatch {
                expected: g.l,
                found: word.string_len(),
            });
        }
        if word.size() != g.m {
            return Err(Error::WordSize {
                expected: g.m,
                found: word.size(),
            });
        }
        Ok(())
    }

    pub fn decode_parts(&self, word: &Word) -> Result<Recovered> {
        let reading = self.read_indicator(word)?;
        let g = &self.geometry;
        let lay = &self.layout;
        let rows = word.rows();
        let sl = g.s_len();
        let j = reading.trusted_part;
        let other = 1 - j;

        let order = g.order_by_part(rows, j);
        let col = g.column(rows, &order, j);
        let mut data = self.protected(&g.vectorize(rows, &order), &col.slice(0, lay.payload));
        self.code
            .correct_in_place(&mut data, &col.slice(lay.payload, lay.t))?;
        let table = PartTable::from_s_vector(g, j, &data.slice(0, sl))?;
        let pj = data.slice(sl, lay.payload);

        let owner = match_rows_by_part(g, &table, rows, j)?;
        let col = true_column(g, &table, rows, &owner, other);
        let s_other = table.s_vector(g, other);
        let mut data = self.protected(&s_other, &col.slice(0, lay.payload));
        self.code
            .correct_in_place(&mut data, &col.slice(lay.payload, lay.t))?;
        if data.slice(0, sl) != s_other {
            return Err(Error::Inconsistent(
                "other half's vector disagrees with the table",
            ));
        }
        let po = data.slice(sl, lay.payload);
        let payloads = if j == 0 { vec![pj, po] } else { vec![po, pj] };
        Ok(Recovered { table, payloads })
    }

    pub fn decode(&self, word: &Word) -> Result<ImprovedMessage> {
        Ok(self.message_of(&self.decode_parts(word)?))
    }

    pub fn pack(&self, msg: &ImprovedMessage) -> Result<BigUint> {
        self.radix.compose(&[
            msg.d1.clone(),
            msg.d2.clone(),
            msg.d3.to_uint(),
            msg.d4.to_uint(),
        ])
    }

    pub fn unpack(&self, value: &BigUint) -> Result<ImprovedMessage> {
        let d = self.radix.decompose(value)?;
        let n = self.layout.payload;
        Ok(ImprovedMessage {
            d1: d[0].clone(),
            d2: d[1].clone(),
            d3: BitString::from_uint(&d[2], n)?,
            d4: BitString::from_uint(&d[3], n)?,
        })
    }
}

impl SetCodec for ImprovedCodec {
    fn name(&self) -> &'static str {
        "single-improved"
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
