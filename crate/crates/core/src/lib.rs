//! Chambers of finite vector spaces, the Kneser graph on chambers, and
//! exact verification of its spectral structure, antidesigns, and
//! Erdős–Ko–Rado sets.
//!
//! Everything here is exact: field arithmetic is table driven, counts use
//! arbitrary-precision integers, and every closed-form identity is checked
//! against brute-force enumeration at desk scale.

pub mod antidesigns;
pub mod bits;
pub mod chambers;
pub mod ekr;
pub mod forms;
pub mod gf;
pub mod projspace;
pub mod spectral;

pub use chambers::{Chamber, ChamberUniverse, Flag};
pub use gf::FieldCtx;
pub use projspace::Subspace;

use thiserror::Error as ThisError;

#[derive(Debug, ThisError)]
pub enum Error {
    #[error("{0} is not prime")]
    NotPrime(u16),
    #[error("field order exceeds the lookup-table limit of 256")]
    FieldTooLarge,
    #[error("modulus is reducible")]
    ReducibleModulus,
    #[error("division by zero in the field")]
    DivisionByZero,
    #[error("field order {0} is not a square")]
    NotSquareOrder(u16),
    #[error("ambient dimension mismatch: {0} vs {1}")]
    AmbientMismatch(usize, usize),
    #[error("dimension out of range: {0}")]
    DimensionOutOfRange(String),
    #[error("universe cap exceeded: {got} chambers > cap {cap}")]
    CapExceeded { got: u64, cap: u64 },
    #[error("universe mismatch between operands")]
    UniverseMismatch,
    #[error("form is degenerate")]
    DegenerateForm,
    #[error("form kind mismatch: expected {0}")]
    FormKindMismatch(&'static str),
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("invalid parameter: {0}")]
    BadParameter(String),
}
