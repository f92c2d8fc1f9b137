//! Error type shared by the whole crate.

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("{0} is not prime")]
    NotPrime(u64),

    #[error("bad parameter: {0}")]
    BadParameter(String),

    #[error("size cap exceeded: {what} = {got} > {cap}")]
    CapExceeded { what: &'static str, got: u128, cap: u128 },

    #[error("operands belong to different fields (GF({0}) vs GF({1}))")]
    FieldMismatch(u64, u64),

    #[error("division by zero in GF({0})")]
    DivisionByZero(u64),

    #[error("multiplicative order of zero is undefined")]
    ZeroOrder,

    #[error("group kind {0} cannot be enumerated")]
    NotEnumerable(String),

    #[error("element does not belong to the group")]
    UnknownElement,

    #[error("operation requires a matrix group element, got a permutation")]
    PermutationInput,

    #[error("class or element id {0} out of range")]
    IdOutOfRange(usize),

    #[error("objects come from different class decompositions")]
    DecompositionMismatch,

    #[error("construction produced a wrong-sized group: got {got}, closed form {expected}")]
    WrongOrder { got: u64, expected: u64 },

    #[error("internal verification failed: {0}")]
    Verification(String),

    #[error("integer overflow in {0}")]
    Overflow(&'static str),

    #[error("invalid symbol: {0}")]
    InvalidSymbol(String),

    #[error("degree formula did not produce an integer: {0}")]
    NonIntegral(String),

    #[error("matrix does not preserve the quadratic form")]
    FormNotPreserved,

    #[error("unknown scenario: {0}")]
    UnknownScenario(String),

    #[error("cache entry is stale or corrupt: {0}")]
    CacheInvalid(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}
