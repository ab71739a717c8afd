//! Exact linear algebra over prime fields.

mod bilinear;
mod echelon;
mod field;
mod matrix;
mod subspace;
mod vector;

pub use bilinear::BilinearMap;
pub use echelon::Echelon;
pub use field::{is_prime, Fp};
pub use matrix::{image_basis, kernel_basis, rref, solve, FpMatrix, LinearSolver};
pub use subspace::Subspace;
pub use vector::FpVector;
