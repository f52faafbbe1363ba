use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("position {pos} out of range (length {len})")]
    PositionOutOfRange { pos: usize, len: usize },

    #[error("symbol {symbol} outside alphabet [1, {sigma}]")]
    InvalidSymbol { symbol: u64, sigma: u64 },

    #[error("rank {rank} exceeds the {count} occurrences of symbol {symbol}")]
    RankOutOfRange {
        symbol: u64,
        rank: usize,
        count: usize,
    },

    #[error("empty input")]
    EmptyInput,

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("truncated bit stream at bit {0}")]
    Truncated(usize),

    #[error("corrupt data: {0}")]
    Corrupt(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    pub(crate) fn param(msg: impl Into<String>) -> Self {
        Error::InvalidParameter(msg.into())
    }

    pub(crate) fn corrupt(msg: impl Into<String>) -> Self {
        Error::Corrupt(msg.into())
    }
}
