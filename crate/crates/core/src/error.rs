use thiserror::Error;

use crate::lie::ElementParseError;
use crate::scalar::ScalarError;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error(transparent)]
    Scalar(#[from] ScalarError),
    #[error(transparent)]
    ElementParse(#[from] ElementParseError),
    #[error("bracket template does not declare index symbol `{0}`")]
    MissingIndexSymbol(String),
    #[error("parameter symbol `{0}` is reserved for index variables")]
    ReservedSymbol(String),
    #[error("declared degree bound {bound} in `{symbol}` is exceeded")]
    DegreeBoundViolated { symbol: String, bound: u32 },
    #[error("grid for `{symbol}` has {given} values, identity requires at least {required}")]
    InsufficientGrid {
        symbol: String,
        required: usize,
        given: usize,
    },
    #[error("grid values for `{0}` are not distinct")]
    DuplicateGridValue(String),
    #[error("symbolic coefficient `{0}` where a rational is required")]
    SymbolicCoefficient(String),
    #[error("element `{0}` lies outside the window")]
    OutOfWindow(String),
    #[error("invalid window: {0}")]
    InvalidWindow(String),
    #[error("q must be nonzero")]
    ZeroQ,
    #[error("negative level {level} in L[{grade},{level}]")]
    NegativeLevel { grade: i64, level: i64 },
    #[error("element `{element}` is not homogeneous of grade {grade}")]
    NotHomogeneous { element: String, grade: i64 },
    #[error("element must be nonzero")]
    ZeroElement,
    #[error("labels known up to horizon {given}, operation requires horizon {required}")]
    HorizonShortfall { required: usize, given: usize },
    #[error("quasipolynomial is unrealizable: c_{k} = {value} is nonzero at singular index {k}")]
    Unrealizable { k: usize, value: String },
    #[error("quasipolynomial must be nonzero")]
    ZeroQuasipolynomial,
    #[error("{0}")]
    InvalidArgument(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
