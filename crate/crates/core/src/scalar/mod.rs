//! Exact ℚ(√2) scalars, small dense matrices, QR/LQ and the matrix exponential.

pub mod expm;
pub mod factor;
pub mod matrix;
pub mod qsqrt2;

pub use expm::{mat_exp, EXPM_TOL};
pub use factor::{lq_positive, qr_positive};
pub use matrix::{parse_matrix_literal, DenseMatrix, ExactMatrix, Matrix, Scalar};
pub use qsqrt2::{QSqrt2, Rational};
