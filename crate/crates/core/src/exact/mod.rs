//! Exact integer and rational linear algebra.

pub mod lp;
pub mod matrix;
pub mod smith;

pub use lp::{lp_feasible, maximize, minimize, Constraint, Feasibility, LpOutcome, StrictSystem};
pub use matrix::{
    determinant, integer_rank, inverse, kernel_basis, primitive_integer, rational_rank, solve_square,
    IntMatrix, Matrix, RatMatrix,
};
pub use smith::{smith_normal_form, SmithForm};
