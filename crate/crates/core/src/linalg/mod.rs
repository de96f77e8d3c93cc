//! Dense exact matrices and the lattice of subspaces of `K^n`.

mod matrix;
mod subspace;

use thiserror::Error;

use crate::field::FieldSpec;

pub use matrix::Matrix;
pub use subspace::{
    apply, is_decomposition, kernel, rref, subspace_contains, subspace_intersect, subspace_sum,
    sum_all, EchelonBuilder, SubspaceBasis,
};
pub(crate) use subspace::unit_vector;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LinalgError {
    #[error("ambient dimensions differ ({0} vs {1})")]
    AmbientMismatch(usize, usize),
    #[error("operands belong to different fields ({0} and {1})")]
    FieldMismatch(FieldSpec, FieldSpec),
    #[error("matrix is {0}x{1}, expected square")]
    NotSquare(usize, usize),
    #[error("shape mismatch: {0}")]
    ShapeMismatch(String),
}
