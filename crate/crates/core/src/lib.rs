//! Codes that correct bit substitutions in data stored as an unordered set
//! of binary strings, together with exact brute-force checks of the ball,
//! boundary and redundancy statements that accompany them.

pub mod analysis;
pub mod bits;
pub mod codec;
pub mod combinatorics;
pub mod ecc;
pub mod error;
pub mod params;
pub mod sim;
pub mod word;

pub use bits::BitString;
pub use codec::{
    AnchorCodec, AnchorEnsemble, AnchorMessage, EnsembleGuard, Fingerprint, ImprovedCodec,
    ImprovedMessage, MultiSubCodec, MultiSubMessage, SetCodec, SingleSubCodec, SingleSubMessage,
};
pub use error::{Error, Result};
pub use params::Params;
pub use word::{apply_pattern, canonical_rows, SubstitutionPattern, Word};
