use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("symbol {symbol} out of range for an alphabet of size {size}")]
    SymbolOutOfRange { symbol: usize, size: usize },

    #[error("invalid input: {0}")]
    Input(String),

    #[error("parse error at line {line}: {msg}")]
    Parse { line: usize, msg: String },

    #[error("budget exceeded: {0}")]
    Budget(String),

    #[error("{op} requires an irreducible system; select a single irreducible component first")]
    Reducible { op: &'static str },

    #[error("{0}: the system is empty")]
    Empty(&'static str),

    #[error("no good cylinders at depth {n}; the depth threshold has not been reached, try a larger n")]
    NoGoodCylinders { n: usize },

    #[error("inadmissible concatenations of selected words: {pairs:?}")]
    Concatenation { pairs: Vec<(usize, usize)> },

    #[error("insufficient word buffer: {needed} symbols required in the {direction} direction")]
    Buffer { needed: usize, direction: &'static str },

    #[error("singular configuration: {0}")]
    Singular(String),

    #[error("precondition failed: {0}")]
    Precondition(String),

    #[error("numerical failure: {0}")]
    Numerical(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
