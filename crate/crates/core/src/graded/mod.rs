//! Free graded-commutative algebras on mixed even/odd generators.
//!
//! Elements are sparse rational combinations of [`Monomial`]s. Odd factors of a
//! monomial are always stored in generator declaration order, so each monomial
//! has exactly one representative and equality of elements is exact.

mod carrier;
mod element;
mod matrix;
mod monomial;
mod slice;

pub use carrier::{CarrierKind, CarrierSpec, Generator, Parity, Role};
pub use element::Element;
pub use matrix::RationalMatrix;
pub use monomial::Monomial;
pub use slice::{operator_matrix, slice_basis, Selector};

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum AlgebraError {
    #[error("elements live on different carriers")]
    CarrierMismatch,
    #[error("duplicate generator name {0:?}")]
    DuplicateGenerator(String),
    #[error("unbounded slice: the family {witness} lies in the selector for every k")]
    UnboundedSlice { witness: String },
    #[error("operator leaks outside the codomain: image of basis vector {basis_vector} contains {offending}")]
    Leakage {
        basis_vector: String,
        offending: String,
    },
}
