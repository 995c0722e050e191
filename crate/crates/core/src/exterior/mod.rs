//! Exterior-algebra kernel: scalar backends, sparse alternating forms, and
//! matrices of forms.

pub mod form;
pub mod matrix;
pub mod scalar;

pub use form::{Form, MultiIndex, MAX_DIM, PRUNE_RELATIVE_EPS};
pub use matrix::FormMatrix;
pub use scalar::{Complex64, ComplexScalar, FloatLike, GaussianRational, Scalar};
