//! Exact linear algebra over the rationals.
//!
//! Everything in the crate is built on these types. There is no floating
//! point anywhere: equalities are literal, and a subspace is identified with
//! the reduced row-echelon form of any spanning set.
//!
//! Square matrices are flattened into coordinate vectors by stacking
//! columns, so entry `(i, j)` of an `n x n` matrix is coordinate `i + j*n`
//! and the `k`-th standard basis matrix is `E_{k mod n, k / n}`. Every module
//! uses this convention.

mod mat;
mod matrix;
mod rational;
mod subspace;

pub use mat::{standard_basis, Mat};
pub use matrix::{null_space, rref, solve, QMatrix, Rref};
pub use rational::{parse_rational, q, qf, Rational};
pub use subspace::Subspace;

/// Matrix of the linear map `f` on `n x n` matrices, in column-stacked
/// coordinates on both sides.
pub fn operator_matrix(n: usize, f: impl Fn(&Mat) -> Mat) -> QMatrix {
    let columns: Vec<Vec<Rational>> = standard_basis(n).iter().map(|e| f(e).to_vec()).collect();
    QMatrix::from_columns(n * n, &columns)
}
