use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("inadmissible parameters: {0}")]
    InvalidParams(String),

    #[error("{what} out of range")]
    OutOfRange { what: &'static str },

    #[error("malformed input: {0}")]
    Malformed(String),

    #[error("length mismatch: expected {expected} bits, found {found}")]
    LengthMismatch { expected: usize, found: usize },

    /// The received set has fewer strings than a codeword; the codecs never
    /// produce this under their correction budget.
    #[error("received word has {found} strings, expected {expected}")]
    WordSize { expected: usize, found: usize },

    #[error("pattern has weight {weight}, budget is {budget}")]
    PatternWeight { weight: usize, budget: usize },

    #[error("position ({row}, {col}) outside a {rows}x{cols} word")]
    PositionOutOfRange {
        row: usize,
        col: usize,
        rows: usize,
        cols: usize,
    },

    #[error("Hamming decoding failed (syndrome points at padding)")]
    HammingFailure,

    #[error("Reed-Solomon decoding failed")]
    RsFailure,

    #[error("no candidate reached a majority ({needed} votes needed)")]
    NoMajority { needed: usize },

    #[error("indicator copies split 2-2")]
    NoIndicatorMajority,

    #[error("received strings could not be matched to codeword rows")]
    RowMatch,

    #[error("anchor row not unique ({found} candidates)")]
    AnchorRow { found: usize },

    #[error("decoded structure is inconsistent: {0}")]
    Inconsistent(&'static str),

    #[error("work guard exceeded for {what}: needs {needed}, limit {limit}")]
    GuardExceeded {
        what: &'static str,
        needed: String,
        limit: u64,
    },

    #[error("I/O: {0}")]
    Io(String),
}

impl Error {
    /// Stable short name used by failure taxonomies in reports.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::InvalidParams(_) => "invalid_params",
            Error::OutOfRange { .. } => "out_of_range",
            Error::Malformed(_) => "malformed",
            Error::LengthMismatch { .. } => "length_mismatch",
            Error::WordSize { .. } => "word_size",
            Error::PatternWeight { .. } => "pattern_weight",
            Error::PositionOutOfRange { .. } => "position_out_of_range",
            Error::HammingFailure => "hamming_failure",
            Error::RsFailure => "rs_failure",
            Error::NoMajority { .. } => "no_majority",
            Error::NoIndicatorMajority => "no_indicator_majority",
            Error::RowMatch => "row_match",
            Error::AnchorRow { .. } => "anchor_row",
            Error::Inconsistent(_) => "inconsistent",
            Error::GuardExceeded { .. } => "guard_exceeded",
            Error::Io(_) => "io",
        }
    }

    /// True for errors a decoder raises on a word it cannot explain.
    pub fn is_decode_failure(&self) -> bool {
        matches!(
            self,
            Error::WordSize { .. }
                | Error::HammingFailure
                | Error::RsFailure
                | Error::NoMajority { .. }
                | Error::NoIndicatorMajority
                | Error::RowMatch
                | Error::AnchorRow { .. }
                | Error::Inconsistent(_)
        )
    }
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}
