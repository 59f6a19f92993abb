//! Exact scalar arithmetic and dense linear algebra over the rationals.
//!
//! Everything downstream (point coordinates, barycentric weights, moment
//! matrices) is computed with these types; no floating point is involved
//! outside of [`crate::oracle`].

mod matrix;
mod radical;
mod rational;

pub use matrix::{rank, rat_solve, RationalMatrix};
pub use radical::{radical_mul, sqrt_rational, squarefree_decompose, RadicalScalar};
pub use rational::{dot, norm_sq, parse_rational, rat, serde_q, to_f64, Rational};

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ExactError {
    #[error("matrix is singular")]
    Singular,
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("square root of negative rational {0}")]
    NegativeSqrt(String),
    #[error("division by zero")]
    DivisionByZero,
}
