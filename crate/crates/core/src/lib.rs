//! Exact computations for the centrally extended Block type Lie algebras
//! `B(p,q)` and the family `B(p,q,mu,theta)` obtained by affinizing
//! Witt-type Novikov algebras.
//!
//! Everything runs over the rationals, with parameters either concrete or
//! kept as polynomial indeterminates. Identities are proved on finite grids by
//! polynomial identity testing whenever the structure constants are
//! polynomial in the indices with known degree bounds.

pub mod block;
pub mod error;
pub mod highest_weight;
pub mod intermediate;
pub mod lie;
pub mod linalg;
pub mod novikov;
pub mod scalar;

pub use error::{Error, Result};
pub use lie::{BasisIndex, Element};
pub use scalar::{parse_rational, rat, ratio, Poly, Rational, Symbol, SymbolTable};
