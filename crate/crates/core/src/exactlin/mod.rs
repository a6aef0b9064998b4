//! Exact linear algebra over the rationals.
//!
//! Every subspace is carried in reduced row-echelon form, so two subspaces
//! are equal exactly when their [`SubspaceBasis`] values compare equal. No
//! tolerance appears anywhere: all arithmetic is on arbitrary-precision
//! rationals.

mod matrix;
pub(crate) mod rational;
mod subspace;

pub use matrix::MatrixQ;
pub use rational::{parse_rational, format_rational, ParseRationalError, Rational};
pub use subspace::{
    image, intersect, kernel, preimage, quotient, rref, solve, sum, QuotientChart, SubspaceBasis,
};

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LinError {
    #[error("dimension mismatch in {context}: expected {expected}, found {found}")]
    DimensionMismatch {
        context: &'static str,
        expected: usize,
        found: usize,
    },
    #[error("matrix data has {found} entries, expected {rows}x{cols}")]
    BadShape {
        rows: usize,
        cols: usize,
        found: usize,
    },
}

pub(crate) fn check_dim(context: &'static str, expected: usize, found: usize) -> Result<(), LinError> {
    if expected == found {
        Ok(())
    } else {
        Err(LinError::DimensionMismatch {
            context,
            expected,
            found,
        })
    }
}
