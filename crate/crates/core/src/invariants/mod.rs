//! Algebraic invariants of curvature matrices: Pfaffians, determinants,
//! Chern, Euler, and Pontryagin forms, and the complex-to-real dictionary.

pub mod characteristic;
pub mod checks;
pub mod linalg;
pub mod pfaffian;
pub mod realify;
pub mod samples;

pub use characteristic::{
    chern_forms, euler_form, pontryagin_forms, total_chern_form, IMAG_RESIDUE_TOL,
};
pub use linalg::ScalarMat;
pub use pfaffian::{
    det_form, pfaffian, pfaffian_top_power, polarized_pfaffian, SKEW_TOL_REL,
};
pub use realify::{
    complex_from_realified, interleave_permutation, realify_curvature, realify_skew_hermitian,
};
