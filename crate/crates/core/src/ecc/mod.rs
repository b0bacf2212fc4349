//! Classical subcodes used inside the set codecs.

pub mod gf;
pub mod hamming;
pub mod rs;

pub use hamming::{hamming_correct, hamming_redundancy, Correction, HammingCode};
pub use rs::{rs_correct, rs_redundancy, RsCode};
