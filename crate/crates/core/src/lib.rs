//! Dense complex matrix analysis centred on the numerical radius.
//!
//! The crate is organised bottom-up:
//!
//! * [`matrix`] holds [`ComplexMatrix`], the dense operand type, and its JSON file format.
//! * [`linalg`] provides the Hermitian eigensolver and everything built on it:
//!   `|S|`, fractional powers of positive matrices, operator and Schatten norms,
//!   spectral radii of positive products, the Cartesian decomposition and
//!   operator-class tests.
//! * [`radius`] computes numerical radii by a rotation sweep, with an
//!   independent ascent oracle.
//! * [`ensembles`] samples reproducible random matrices from each operator class.
//! * [`bounds`] evaluates each numerical-radius inequality on concrete matrices and
//!   reports its slack.

// Range checks are written `!(x > 0.0)` on purpose so that NaN is rejected.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod bounds;
pub mod ensembles;
mod error;
pub mod linalg;
pub mod matrix;
pub mod radius;

pub use error::{Error, Result};
pub use matrix::{ComplexMatrix, C64};
