use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid unique word: {0}")]
    InvalidUw(String),

    #[error("unique word length {0} is not supported here (need L >= 2)")]
    UwTooShort(usize),

    #[error("{what}: size {got} exceeds the limit of {max}")]
    SizeCap {
        what: &'static str,
        got: usize,
        max: usize,
    },

    #[error("invalid codeword {codeword:?} for unique word {uw}")]
    InvalidCodeword { uw: String, codeword: String },

    #[error("framing error: {0}")]
    Framing(String),

    #[error("message index must be at least 1")]
    ZeroIndex,

    #[error("prefix of length {prefix} is longer than codeword length {n}")]
    PrefixTooLong { prefix: usize, n: usize },

    #[error("growth rate is 1 for unique word {0}; bound is undefined")]
    DegenerateGrowth(String),

    #[error("invalid source model: {0}")]
    Model(String),

    #[error("malformed container: {0}")]
    Container(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}
