//! Exact sparse-matrix representations on a truncated occupation-number space.

pub mod basis;
pub mod eval;
pub mod rep;
pub mod sparse;

pub use basis::{Basis, BasisState, ModeSpec, DEFAULT_DIMENSION_CAP};
pub use eval::{
    adjoint_check, apply_expression, apply_term, check_relation, cyclic_subspace, evaluate,
    evaluate_term, evaluate_with, CheckResult, Substitution,
};
pub use rep::{Mutation, Representation};
pub use sparse::{SparseMatrix, SparseVector};
