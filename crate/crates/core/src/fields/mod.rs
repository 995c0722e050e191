//! Numerical layer: charts, form fields backed by closures, differential
//! calculus by finite differences, and quadrature.

pub mod calculus;
pub mod chart;
pub mod field;
pub mod quadrature;

pub use calculus::{
    curvature_from_connection, exterior_derivative, integrate_top, matrix_exterior_derivative,
    pullback, pullback_matrix, DiffScheme, SmoothMap,
};
pub use chart::{Axis, Chart, MidpointGrid};
pub use field::{FormField, MatrixField};
pub use quadrature::{gauss_legendre, integrate_fn, parameter_integral, richardson_tail};
