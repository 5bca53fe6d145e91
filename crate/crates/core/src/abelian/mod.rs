//! Exact integer linear algebra: Smith normal form, finitely generated
//! abelian groups and the homomorphisms between them.

mod group;
mod hom;
mod matrix;
mod primary;
mod snf;

use num_bigint::BigInt;
use thiserror::Error;

pub use group::{FgAbGroup, Subquotient};
pub use hom::GroupHom;
pub use matrix::IntMatrix;
pub use primary::{primary_decompose, two_adic_valuation, PrimaryDecomposition, PrimarySummand};
pub use snf::{kernel_basis, lattice_basis, smith_normal_form, solve_linear, LinearSolver, SnfResult};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum AbelianError {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("matrix shape mismatch: expected {expected:?}, found {found:?}")]
    ShapeMismatch {
        expected: (usize, usize),
        found: (usize, usize),
    },
    #[error("invalid invariant factors: {0}")]
    InvalidInvariantFactors(String),
    #[error("generator {generator} has order {order} but its image is not killed by {order}")]
    TorsionViolation { generator: usize, order: BigInt },
    #[error("vector does not lie in the numerator lattice")]
    NotInSubgroup,
}

/// The cokernel of `f`, with the quotient map out of `f.target()`.
pub fn hom_cokernel(f: &GroupHom) -> (FgAbGroup, GroupHom) {
    f.cokernel()
}
