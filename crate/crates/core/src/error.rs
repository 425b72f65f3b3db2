use thiserror::Error;

/// Errors raised by the library.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("{0} is not a prime modulus fitting in 32 bits")]
    NotPrime(u64),
    #[error("zero has no multiplicative inverse")]
    NotInvertible,
    #[error("matrix is singular")]
    Singular,
    #[error("incompatible operands: {0}")]
    Incompatible(String),
    #[error("subgroup closure exceeded {bound} elements")]
    SizeBoundExceeded { bound: usize },
    #[error("element set is not a subgroup: {0}")]
    NotSubgroup(String),
    #[error("subgroup is not regular: {0}")]
    NotRegular(String),
    #[error("subgroup is not abelian")]
    NotAbelian,
    #[error("algebra is not radical: 1 + delta(x) is singular for some x")]
    NotRadical,
    #[error("algebra is not nilpotent")]
    NotNilpotent,
    #[error("structure constants are not associative at basis triple ({i}, {j}, {k})")]
    NotAssociative { i: usize, j: usize, k: usize },
    #[error("structure constants are not commutative at basis pair ({i}, {j})")]
    NotCommutative { i: usize, j: usize },
    #[error("{what} needs {needed} steps, bound is {bound}")]
    BoundExceeded {
        what: &'static str,
        needed: u128,
        bound: u128,
    },
    #[error("result falls beyond the known precision")]
    PrecisionExhausted,
    #[error("invalid parameters: {0}")]
    InvalidParameters(String),
    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error("element {index}: linear part is singular")]
    SingularElement { index: usize },
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
