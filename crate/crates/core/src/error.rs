use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    /// A size or arity argument outside the range an operation supports.
    #[error("size {size} outside supported range {min}..={max}")]
    SizeDomain { size: usize, min: usize, max: usize },

    /// Arithmetic result does not fit the integer type used for it.
    #[error("out of range: {0}")]
    Range(String),

    #[error("parse error at byte {offset}: {message}")]
    Parse { offset: usize, message: String },

    #[error("not a depth sequence: {0}")]
    NotDepthSequence(String),

    #[error("not a zag sequence: {0}")]
    NotZagSequence(String),

    /// Precondition of an operation violated by its arguments.
    #[error("{0}")]
    Domain(String),

    #[error("unknown family {0:?}")]
    UnknownFamily(String),

    /// Refused up front: the tables for `arity` would exceed the memory budget.
    #[error("arity {arity} needs up to {required} bytes, budget is {budget} bytes")]
    Resource {
        arity: usize,
        required: u128,
        budget: u64,
    },
}

impl Error {
    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }

    pub(crate) fn parse(offset: usize, msg: impl Into<String>) -> Self {
        Error::Parse {
            offset,
            message: msg.into(),
        }
    }
}
