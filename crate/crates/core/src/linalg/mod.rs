//! Exact sparse linear algebra over the rationals and integers.

pub mod echelon;
pub mod rational;
pub mod snf;
pub mod sparse;

pub use echelon::{
    cohomology_dim, image_basis, inverse, is_injective, is_invertible, kernel_basis, rank,
    solve_linear, CohomologyGroup, Echelon, Insertion, LinalgError, QuotientBasis, Subspace,
};
pub use rational::{format_rational, parse_rational, rat, ratio, Rational};
pub use snf::{integral_cohomology, integral_homology, smith_normal_form, IntMatrix, IntegralGroup, SmithForm};
pub use sparse::{ShapeError, SparseMatrix, SparseVec};
