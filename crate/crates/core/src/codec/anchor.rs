//! Anchor-indexed codec correcting `K` substitutions.
//!
//! Row `i` starts with the `i`-th anchor of an ensemble member, so the rows
//! can be put back in order once the anchor set is known. The first row,
//! whose anchor is all ones, carries Reed-Solomon redundancy of the
//! characteristic vector of the anchor set followed by redundancy protecting
//! that block. The last row ends with redundancy of the whole concatenation.
//! Data fills the rest: the tail of row 1, rows `2..M-1` after their
//! anchors, then the head of row `M`.

use std::sync::Arc;

use num_bigint::BigUint;
use serde::{Deserialize, Serialize};

use crate::bits::BitString;
use crate::codec::ensemble::{anchor_length, AnchorEnsemble, EnsembleGuard};
use crate::codec::message::{pow2, MixedRadix};
use crate::codec::SetCodec;
use crate::ecc::RsCode;
use crate::error::{Error, Result};
use crate::params::{ceil_log2, Params};
use crate::word::Word;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct AnchorMessage {
    /// Rank of the anchor set in the ensemble.
    pub d1: u64,
    pub d2: BitString,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct AnchorLayout {
    pub anchor_len: usize,
    /// Redundancy of the characteristic vector, `4KL'`.
    pub char_redundancy: usize,
    /// Region protecting that redundancy, `2K ceil(log 4KL')`.
    pub inner_region: usize,
    /// Region for the redundancy of the concatenation, `2K ceil(log ML)`.
    pub s_region: usize,
    pub d2_len: usize,
}

#[derive(Clone, Debug)]
pub struct AnchorCodec {
    params: Params,
    layout: AnchorLayout,
    ensemble: Arc<AnchorEnsemble>,
    char_code: RsCode,
    inner_code: RsCode,
    s_code: RsCode,
    radix: MixedRadix,
}

impl AnchorCodec {
    pub fn build(params: Params, guard: &EnsembleGuard) -> Result<Self> {
        let e = AnchorEnsemble::build(params.m, params.k, guard)?;
        Self::new(params, Arc::new(e))
    }

    pub fn new(params: Params, ensemble: Arc<AnchorEnsemble>) -> Result<Self> {
        let Params { m, l, k } = params;
        if m < 2 || k == 0 {
            return Err(Error::InvalidParams(
                "anchor codec needs M >= 2 and K >= 1".into(),
            ));
        }
        let lp = anchor_length(m, k);
        if (ensemble.anchor_len(), ensemble.m(), ensemble.k()) != (lp, m, k) {
            return Err(Error::InvalidParams(format!(
                "ensemble is for L'={} M={} K={}, codec needs L'={lp} M={m} K={k}",
                ensemble.anchor_len(),
                ensemble.m(),
                ensemble.k()
            )));
        }
        let char_redundancy = 4 * k * lp;
        let inner_region = 2 * k * ceil_log2(char_redundancy as u64) as usize;
        let s_region = 2 * k * ceil_log2((m * l) as u64) as usize;
        let row1 = lp + char_redundancy + inner_region;
        if row1 > l {
            return Err(Error::InvalidParams(format!(
                "L' + 4KL' + 2K ceil(log 4KL') = {row1} exceeds L = {l}"
            )));
        }
        if lp + s_region > l {
            return Err(Error::InvalidParams(format!(
                "last row cannot hold L' + {s_region} bits"
            )));
        }
        let total = m * (l - lp);
        let d2_len = (total - char_redundancy - inner_region)
            .checked_sub(s_region)
            .ok_or_else(|| Error::InvalidParams("no room for data".into()))?;

        let char_code = RsCode::with_symbol_bits(lp as u32, 1 << lp, 2 * k)?;
        debug_assert_eq!(char_code.redundancy_bits(), char_redundancy);
        let inner_code = RsCode::for_data_bits(char_redundancy, k)?;
        let s_code = RsCode::for_data_bits(m * l - s_region, k)?;
        if inner_code.redundancy_bits() > inner_region || s_code.redundancy_bits() > s_region {
            return Err(Error::InvalidParams(
                "Reed-Solomon redundancy exceeds its region".into(),
            ));
        }
        let radix = MixedRadix::new(vec![BigUint::from(ensemble.count()), pow2(d2_len)]);
        Ok(AnchorCodec {
            params,
            layout: AnchorLayout {
                anchor_len: lp,
                char_redundancy,
                inner_region,
                s_region,
                d2_len,
            },
            ensemble,
            char_code,
            inner_code,
            s_code,
            radix,
        })
    }

    pub fn layout(&self) -> AnchorLayout {
        self.layout
    }

    pub fn ensemble(&self) -> &AnchorEnsemble {
        &self.ensemble
    }

    /// Data ranges as `(start, len)` in the row-major concatenation.
    pub fn d2_ranges(&self) -> Vec<(usize, usize)> {
        let Params { m, l, .. } = self.params;
        let lay = &self.layout;
        let lp = lay.anchor_len;
        let head = lp + lay.char_redundancy + lay.inner_region;
        let mut out = vec![(head, l - head)];
        out.extend((1..m - 1).map(|r| (r * l + lp, l - lp)));
        out.push(((m - 1) * l + lp, l - lp - lay.s_region));
        out.retain(|&(_, n)| n > 0);
        out
    }

    fn s_len(&self) -> usize {
        self.params.total_bits() - self.layout.s_region
    }

    pub fn encode(&self, msg: &AnchorMessage) -> Result<Word> {
        let Params { m, l, .. } = self.params;
        let lay = &self.layout;
        if msg.d2.len() != lay.d2_len {
            return Err(Error::LengthMismatch {
                expected: lay.d2_len,
                found: msg.d2.len(),
            });
        }
        let anchors = self.ensemble.unrank(msg.d1)?;
        let lp = lay.anchor_len;
        let mut cat = BitString::zeros(m * l);
        for (r, &a) in anchors.iter().enumerate() {
            cat.write(r * l, &self.ensemble.anchor_bits(a));
        }
        let char_red = self
            .char_code
            .redundancy(&self.ensemble.characteristic(anchors))?;
        cat.write(lp, &char_red);
        cat.write(
            lp + lay.char_redundancy,
            &self.inner_code.redundancy(&char_red)?,
        );
        let mut at = 0;
        for (start, n) in self.d2_ranges() {
            cat.write(start, &msg.d2.slice(at, n));
            at += n;
        }
        let s_red = self.s_code.redundancy(&cat.slice(0, self.s_len()))?;
        cat.write(self.s_len(), &s_red);
        Word::from_distinct((0..m).map(|r| cat.slice(r * l, l)))
    }

    pub fn decode(&self, word: &Word) -> Result<AnchorMessage> {
        let Params { m, l, k } = self.params;
        let lay = &self.layout;
        let lp = lay.anchor_len;
        if word.string_len() != l {
            return Err(Error::LengthMismatch {
                expected: l,
                found: word.string_len(),
            });
        }
        if word.size() != m {
            return Err(Error::WordSize {
                expected: m,
                found: word.size(),
            });
        }
        let rows = word.rows();
        let prefixes: Vec<u32> = rows.iter().map(|r| r.read_bits(0, lp) as u32).collect();

        // Step 1: the row whose anchor is within K of all ones.
        let heavy: Vec<usize> = (0..m)
            .filter(|&r| prefixes[r].count_ones() as usize + k >= lp)
            .collect();
        let &[first] = heavy.as_slice() else {
            return Err(Error::AnchorRow { found: heavy.len() });
        };
        let mut char_red = rows[first].slice(lp, lay.char_redundancy);
        let inner = rows[first].slice(lp + lay.char_redundancy, self.inner_code.redundancy_bits());
        self.inner_code.correct_in_place(&mut char_red, &inner)?;

        // Step 2: the anchor set from the received characteristic vector.
        let mut chi = self.ensemble.characteristic(&prefixes);
        self.char_code.correct_in_place(&mut chi, &char_red)?;
        let mut anchors: Vec<u32> = chi.ones_positions().map(|p| p as u32).collect();
        anchors.reverse();
        let d1 = self.ensemble.rank(&anchors).ok_or(Error::Inconsistent(
            "corrected anchor set is not an ensemble member",
        ))?;

        // Step 3: each received row to its unique anchor within distance K.
        let mut owner = vec![usize::MAX; m];
        for (r, &p) in prefixes.iter().enumerate() {
            let mut near = anchors
                .iter()
                .enumerate()
                .filter(|&(_, &a)| (a ^ p).count_ones() as usize <= k);
            let (i, _) = near.next().ok_or(Error::RowMatch)?;
            if near.next().is_some() || owner[i] != usize::MAX {
                return Err(Error::RowMatch);
            }
            owner[i] = r;
        }

        // Step 4: correct the concatenation in anchor order.
        let mut cat = BitString::with_capacity(m * l);
        for &r in &owner {
            cat.extend_from(&rows[r]);
        }
        let mut s = cat.slice(0, self.s_len());
        let red = cat.slice(self.s_len(), self.s_code.redundancy_bits());
        self.s_code.correct_in_place(&mut s, &red)?;
        if anchors
            .iter()
            .enumerate()
            .any(|(i, &a)| s.read_bits(i * l, lp) as u32 != a)
        {
            return Err(Error::Inconsistent(
                "corrected rows disagree with the anchor set",
            ));
        }
        let mut d2 = BitString::with_capacity(lay.d2_len);
        for (start, n) in self.d2_ranges() {
            d2.extend_from_range(&s, start, n);
        }
        Ok(AnchorMessage { d1, d2 })
    }

    pub fn pack(&self, msg: &AnchorMessage) -> Result<BigUint> {
        self.radix
            .compose(&[BigUint::from(msg.d1), msg.d2.to_uint()])
    }

    pub fn unpack(&self, value: &BigUint) -> Result<AnchorMessage> {
        let d = self.radix.decompose(value)?;
        let d1 = u64::try_from(&d[0]).map_err(|_| Error::OutOfRange {
            what: "ensemble rank",
        })?;
        Ok(AnchorMessage {
            d1,
            d2: BitString::from_uint(&d[1], self.layout.d2_len)?,
        })
    }
}

impl SetCodec for AnchorCodec {
    fn name(&self) -> &'static str {
        "anchor"
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
}
