//! Encoder and decoder shared by the three-part and `2K+1`-part codecs.
//!
//! Reserved column `j`, read in part-`j` order, holds the payload `d_j`, the
//! subcode redundancy of `d_j`, the subcode redundancy of `s_j`, and zero
//! slack, each region starting at a fixed offset.

use crate::bits::BitString;
use crate::codec::parts::{assemble_rows, match_rows, true_column, PartGeometry, PartTable};
use crate::ecc::{HammingCode, RsCode};
use crate::error::{Error, Result};
use crate::word::Word;

/// A systematic code protecting one bit string with separate redundancy.
pub trait Subcode: Clone + Send + Sync {
    fn data_bits(&self) -> usize;
    fn redundancy_bits(&self) -> usize;
    fn encode(&self, data: &BitString) -> BitString;
    fn correct(&self, data: &mut BitString, red: &BitString) -> Result<()>;
}

impl Subcode for HammingCode {
    fn data_bits(&self) -> usize {
        self.len()
    }

    fn redundancy_bits(&self) -> usize {
        self.t()
    }

    fn encode(&self, data: &BitString) -> BitString {
        self.redundancy(data).expect("length checked by caller")
    }

    fn correct(&self, data: &mut BitString, red: &BitString) -> Result<()> {
        self.correct_in_place(data, red).map(|_| ())
    }
}

impl Subcode for RsCode {
    fn data_bits(&self) -> usize {
        RsCode::data_bits(self)
    }

    fn redundancy_bits(&self) -> usize {
        RsCode::redundancy_bits(self)
    }

    fn encode(&self, data: &BitString) -> BitString {
        self.redundancy(data).expect("length checked by caller")
    }

    fn correct(&self, data: &mut BitString, red: &BitString) -> Result<()> {
        self.correct_in_place(data, red).map(|_| ())
    }
}

/// Column regions: `[0, d_len)` payload, then `d_region` bits for the
/// payload redundancy, then `s_region` bits for the vector redundancy.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ColumnLayout {
    pub d_len: usize,
    pub d_region: usize,
    pub s_region: usize,
}

impl ColumnLayout {
    pub fn used(&self) -> usize {
        self.d_len + self.d_region + self.s_region
    }

    pub fn s_offset(&self) -> usize {
        self.d_len + self.d_region
    }
}

/// A decoded codeword structure.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Recovered {
    pub table: PartTable,
    pub payloads: Vec<BitString>,
}

#[derive(Clone, Debug)]
pub struct MajorityEngine<C: Subcode> {
    pub geometry: PartGeometry,
    pub layout: ColumnLayout,
    s_code: C,
    d_code: Option<C>,
    /// Votes needed both for the table majority and for row matching.
    pub threshold: usize,
}

impl<C: Subcode> MajorityEngine<C> {
    pub fn new(
        geometry: PartGeometry,
        layout: ColumnLayout,
        s_code: C,
        d_code: Option<C>,
        threshold: usize,
    ) -> Result<Self> {
        if s_code.data_bits() != geometry.s_len() || s_code.redundancy_bits() > layout.s_region {
            return Err(Error::InvalidParams(
                "vector subcode does not fit its region".into(),
            ));
        }
        match &d_code {
            Some(c) if c.data_bits() != layout.d_len || c.redundancy_bits() > layout.d_region => {
                return Err(Error::InvalidParams(
                    "payload subcode does not fit its region".into(),
                ));
            }
            None if layout.d_len > 0 => {
                return Err(Error::InvalidParams("payload without a subcode".into()));
            }
            _ => {}
        }
        if 2 * threshold <= geometry.parts || threshold > geometry.parts {
            return Err(Error::InvalidParams(
                "vote threshold must be a strict majority of the parts".into(),
            ));
        }
        if layout.used() > geometry.m {
            return Err(Error::InvalidParams(format!(
                "column needs {} bits but M = {}",
                layout.used(),
                geometry.m
            )));
        }
        Ok(MajorityEngine {
            geometry,
            layout,
            s_code,
            d_code,
            threshold,
        })
    }

    pub fn s_code(&self) -> &C {
        &self.s_code
    }

    pub fn d_code(&self) -> Option<&C> {
        self.d_code.as_ref()
    }

    fn column(&self, table: &PartTable, j: usize, payload: &BitString) -> BitString {
        let g = &self.geometry;
        let lay = &self.layout;
        let mut col = BitString::with_capacity(g.m);
        col.extend_from(payload);
        let mut block = BitString::zeros(lay.d_region);
        if let Some(c) = &self.d_code {
            block.write(0, &c.encode(payload));
        }
        col.extend_from(&block);
        let mut block = BitString::zeros(lay.s_region);
        block.write(0, &self.s_code.encode(&table.s_vector(g, j)));
        col.extend_from(&block);
        col.extend_from(&BitString::zeros(g.m - lay.used()));
        col
    }

    pub fn encode(&self, table: &PartTable, payloads: &[BitString]) -> Result<Word> {
        let g = &self.geometry;
        table.validate(g)?;
        if payloads.len() != g.parts {
            return Err(Error::Malformed("one payload per part expected".into()));
        }
        if let Some(p) = payloads.iter().find(|p| p.len() != self.layout.d_len) {
            return Err(Error::LengthMismatch {
                expected: self.layout.d_len,
                found: p.len(),
            });
        }
        let cols: Vec<BitString> = (0..g.parts)
            .map(|j| self.column(table, j, &payloads[j]))
            .collect();
        Word::from_distinct(assemble_rows(g, table, &cols))
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

    /// Corrected vectorization from the rows sorted by part `j`.
    pub fn corrected_vector(&self, rows: &[BitString], j: usize) -> Result<BitString> {
        let g = &self.geometry;
        let order = g.order_by_part(rows, j);
        let mut s = g.vectorize(rows, &order);
        let col = g.column(rows, &order, j);
        let red = col.slice(self.layout.s_offset(), self.s_code.redundancy_bits());
        self.s_code.correct(&mut s, &red)?;
        Ok(s)
    }

    /// Per-part corrected vectors, `None` where correction failed.
    pub fn trace(&self, word: &Word) -> Result<Vec<Option<BitString>>> {
        self.check_shape(word)?;
        Ok((0..self.geometry.parts)
            .map(|j| self.corrected_vector(word.rows(), j).ok())
            .collect())
    }

    pub fn decode(&self, word: &Word) -> Result<Recovered> {
        self.check_shape(word)?;
        let g = &self.geometry;
        let rows = word.rows();
        // The threshold is a strict majority of the parts, so the first
        // table to reach it is the only one that can.
        let mut candidates: Vec<Option<PartTable>> = Vec::with_capacity(g.parts);
        let mut win = None;
        for j in 0..g.parts {
            let cand = self
                .corrected_vector(rows, j)
                .and_then(|s| PartTable::from_s_vector(g, j, &s))
                .ok();
            let votes = cand.as_ref().map_or(0, |t| {
                1 + candidates.iter().filter(|c| c.as_ref() == Some(t)).count()
            });
            candidates.push(cand);
            if votes >= self.threshold {
                win = Some(j);
                break;
            }
        }
        let win = win.ok_or(Error::NoMajority {
            needed: self.threshold,
        })?;
        let table = candidates
            .swap_remove(win)
            .expect("majority is a decoded table");
        let owner = match_rows(g, &table, rows, self.threshold)?;
        let lay = &self.layout;
        let mut payloads = Vec::with_capacity(g.parts);
        for j in 0..g.parts {
            let col = true_column(g, &table, rows, &owner, j);
            let mut d = col.slice(0, lay.d_len);
            if let Some(c) = &self.d_code {
                let red = col.slice(lay.d_len, c.redundancy_bits());
                c.correct(&mut d, &red)?;
            }
            payloads.push(d);
        }
        Ok(Recovered { table, payloads })
    }
}
