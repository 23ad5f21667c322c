//! Exact-arithmetic toolkit for filtered Frobenius-monodromy modules over a
//! p-adic base field with rational coefficients.
//!
//! Everything is computed over arbitrary-precision rationals: module
//! invariants (Newton and Hodge numbers, weak admissibility), complete stable
//! flags and their graded data, the graded monodromy operator with its marked
//! indices, the invariant vector read off perfect splittings, and the
//! first-order deformation identities tying Frobenius and weight derivatives
//! together. No floating point is used anywhere.

pub mod family;
pub mod field;
pub mod fixtures;
pub mod io;
pub mod linalg;
pub mod linvariant;
pub mod module;
pub mod pairing;
pub mod refinement;
pub mod sample;
pub mod scalar;
pub mod semilinear;

pub use field::FieldContext;
pub use linalg::{QMat, Subspace};
pub use module::{Filtration, PhiNModule};
pub use refinement::Refinement;
pub use scalar::{rat, rat_int, DualScalar, Scalar, Valuation};
pub use semilinear::{KMat, KVec, SemiScalar, Submodule};

use thiserror::Error;

/// Failure modes shared across the crate.
#[derive(Debug, Error)]
pub enum Error {
    #[error("not a unit: constant term is zero")]
    NotAUnit,
    #[error("frobenius value must be nonzero")]
    ZeroFrobenius,
    #[error("field context mismatch")]
    ContextMismatch,
    #[error("not stable: {0}")]
    NotStable(String),
    #[error("not free: {0}")]
    NotFree(String),
    #[error("not a flag: {0}")]
    NotAFlag(String),
    #[error("wrong graded rank: {0}")]
    WrongGradedRank(String),
    #[error("eigenvalue degeneracy: {0}")]
    EigenvalueDegeneracy(String),
    #[error("index {0} is not marked")]
    NotMarked(usize),
    #[error("index {0} is not strongly marked")]
    NotStronglyMarked(usize),
    #[error("no perfect decomposition exists for index {0}")]
    NoPerfectDecomposition(usize),
    #[error("singular constant term in deformation matrix")]
    SingularConstantTerm,
    #[error("index out of range: {0}")]
    IndexOutOfRange(String),
    #[error("validation failed: {0}")]
    Validation(String),
    #[error("parse error: {0}")]
    Parse(String),
}

/// Shorthand result type.
pub type Result<T> = std::result::Result<T, Error>;
