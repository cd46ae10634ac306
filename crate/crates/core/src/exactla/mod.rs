//! Exact linear algebra over ℚ and prime fields.
//!
//! Tensor products use the row-major convention throughout the crate: the
//! basis vector `e_i ⊗ e_j` of `k^m ⊗ k^n` has index `i * n + j`.

mod echelon;
mod linmap;
pub mod poly;
mod quotient;
mod scalar;
pub mod sparse;
mod vector;

pub use echelon::{inverse, kernel, rank, solve, LinearSystem, Rref};
pub use linmap::{Discrepancy, LinMap};
pub use quotient::{quotient_by_span, QuotientSpace};
pub use scalar::{FieldSpec, Scalar};
pub use sparse::SparseVec;
pub use vector::Vector;
