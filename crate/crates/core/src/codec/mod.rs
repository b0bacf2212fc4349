//! Set codecs: every message maps to a word of `M` strings that survives the
//! codec's substitution budget.

pub mod anchor;
pub mod engine;
pub mod ensemble;
pub mod improved;
pub mod message;
pub mod multi;
pub mod parts;
pub mod single;

use num_bigint::BigUint;

use crate::combinatorics::{join_combined, split_combined};
use crate::error::Result;
use crate::params::Params;
use crate::word::Word;
use parts::{PartGeometry, PartTable};

pub use anchor::{AnchorCodec, AnchorMessage};
pub use engine::Recovered;
pub use ensemble::{AnchorEnsemble, EnsembleGuard};
pub use improved::{ImprovedCodec, ImprovedMessage};
pub use multi::{MultiSubCodec, MultiSubMessage};
pub use single::{SingleSubCodec, SingleSubMessage};

/// Decoder output in the form it is compared on.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Fingerprint {
    Value(BigUint),
    Structure(Recovered),
}

/// Common surface of all codecs, with messages as integers in
/// `[0, message_space)`.
pub trait SetCodec: Send + Sync {
    fn name(&self) -> &'static str;
    fn params(&self) -> Params;
    fn message_space(&self) -> BigUint;
    fn encode_value(&self, value: &BigUint) -> Result<Word>;
    fn decode_value(&self, word: &Word) -> Result<BigUint>;

    /// The comparable form of a decoded `value`. Codecs whose rank
    /// conversion is expensive compare decoded structures, which are in
    /// bijection with messages, instead of integers.
    fn fingerprint(&self, value: &BigUint) -> Result<Fingerprint> {
        Ok(Fingerprint::Value(value.clone()))
    }

    fn decode_fingerprint(&self, word: &Word) -> Result<Fingerprint> {
        self.decode_value(word).map(Fingerprint::Value)
    }

    /// Whether `word` decodes to `value`.
    fn decode_check(&self, word: &Word, value: &BigUint) -> Result<bool> {
        Ok(self.decode_fingerprint(word)? == self.fingerprint(value)?)
    }
}

/// Table from the part-0 subset rank and the combined ranks of parts `1..`.
pub(crate) fn table_from_ranks(
    g: &PartGeometry,
    d1: &BigUint,
    combined: &[BigUint],
) -> Result<PartTable> {
    let mut values = vec![PartTable::identifiers_from_rank(g, d1)?];
    let mut perms = vec![(0..g.m).collect::<Vec<_>>()];
    for c in combined {
        let (set, perm) = split_combined(c, g.m);
        values.push(PartTable::identifiers_from_rank(g, &set)?);
        perms.push(PartTable::perm_from_rank(g, &perm)?);
    }
    Ok(PartTable { values, perms })
}

/// Inverse of [`table_from_ranks`].
pub(crate) fn table_ranks(g: &PartGeometry, t: &PartTable) -> (BigUint, Vec<BigUint>) {
    let d1 = t.subset_rank(g, 0);
    let combined = (1..g.parts)
        .map(|j| join_combined(&t.subset_rank(g, j), &t.perm_rank(j), g.m))
        .collect();
    (d1, combined)
}
