use thiserror::Error;

pub type Result<T> = core::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("input matrix is empty or ragged")]
    EmptyOrRagged,
    #[error("non-finite probability at (x={x}, y={y})")]
    NonFinite { x: usize, y: usize },
    #[error("negative probability {value} at (x={x}, y={y})")]
    NegativeEntry { x: usize, y: usize, value: f64 },
    #[error("total mass {sum} deviates from 1 by more than 1e-9")]
    MassDeviationTooLarge { sum: f64 },
    #[error("marginal P_Y({y}) is zero")]
    ZeroMarginal { y: usize },
    #[error("symbol {symbol} out of range for alphabet of size {size}")]
    SymbolOutOfRange { symbol: usize, size: usize },
    #[error("alphabet mismatch: expected {expected:?}, got {got:?}")]
    AlphabetMismatch {
        expected: (usize, usize),
        got: (usize, usize),
    },
    #[error("invalid parameter `{name}` = {value}: {reason}")]
    InvalidParameter {
        name: &'static str,
        value: f64,
        reason: &'static str,
    },
    #[error("invalid mixture: {0}")]
    InvalidMixture(&'static str),
    #[error("block of {cells} cells exceeds the budget of {budget}")]
    BlockTooLarge { cells: u128, budget: usize },
    #[error("instance exceeds search budget: {0}")]
    InstanceTooLarge(&'static str),
    #[error("bitstring is not a codeword under y={y}")]
    MalformedBitstring { y: usize },
    #[error("codeword length {0} bits exceeds the supported maximum")]
    LengthOverflow(u32),
}

impl Error {
    /// Budget errors (block or search-space limits), as opposed to invalid input.
    pub fn is_budget(&self) -> bool {
        matches!(self, Error::BlockTooLarge { .. } | Error::InstanceTooLarge(_))
    }
}
