//! Symplectic and metaplectic machinery for time-frequency analysis: exact
//! symplectic algebra, shift-invertible factorizations, discrete metaplectic
//! operators, metaplectic Wigner distributions and weighted mixed norms.

pub mod cli;
pub mod distributions;
pub mod error;
pub mod fourier;
pub mod grid;
pub mod matrix;
pub mod norms;
pub mod discrete;
pub mod random;
pub mod scalar;
pub mod shift_invertible;
pub mod symplectic;

pub use error::{Error, Result};
pub use matrix::{DynMatrix, FloatMatrix, Matrix, RatMatrix};
pub use scalar::{Rational, Scalar, ScalarMode};
