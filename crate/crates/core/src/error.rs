use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("denominator must be nonzero")]
    ZeroDenominator,
    #[error("cannot parse rational from {0:?}: expected \"p/q\" or an integer")]
    ParseRational(String),
    #[error("streams are 1-indexed; index 0 is not a generation")]
    ZeroIndex,
    #[error("alphabet must be non-empty")]
    EmptyAlphabet,
    #[error("alphabet must be strictly increasing (violated at position {0})")]
    UnsortedAlphabet(usize),
    #[error("stream period must be non-empty")]
    EmptyPeriod,
    #[error("alphabet index {index} out of range for alphabet of size {size}")]
    IndexOutOfAlphabet { index: usize, size: usize },
    #[error("cannot swap a coordinate with itself (i = j = {0})")]
    SelfSwap(u64),
    #[error("step h must be at least 1")]
    ZeroStep,
    #[error("pairing must have a non-empty block period")]
    EmptyBlockPeriod,
    #[error("block {block} has length {len}, expected step h = {step}")]
    BlockLength { block: usize, len: usize, step: usize },
    #[error("block {block} offset {offset} points to {partner}, outside 0..{step}")]
    PartnerOutOfBlock { block: usize, offset: usize, partner: usize, step: usize },
    #[error("pairing is not a fixed-point-free involution: {0}")]
    InvalidPairing(String),
    #[error("index set is malformed: {0}")]
    InvalidIndexSet(String),
    #[error("horizon must be at least 1")]
    ZeroHorizon,
    #[error("value list must be non-empty")]
    EmptyValues,
    #[error("naive oracle is capped at {cap} values, got {len}")]
    NaiveCapExceeded { len: usize, cap: usize },
    #[error("value generator exhausted after {produced} values, {needed} needed")]
    GeneratorExhausted { produced: usize, needed: usize },
    #[error("transfer cannot be applied: {0}")]
    Transfer(String),
    #[error("case-4 preconditions violated: {0}")]
    Case4Precondition(String),
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}
