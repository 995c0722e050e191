//! Numerical laboratory for curvature and characteristic forms of model
//! vector bundles.
//!
//! The crate is organized in layers: an exterior-algebra kernel generic over
//! exact-rational and floating scalars (`exterior`), matrix invariants built
//! on it (Pfaffians, determinants, Chern / Euler / Pontryagin forms, and the
//! complex-to-real dictionary in `invariants`), chart-based form fields with
//! numerical calculus (`fields`), a zoo of model bundles with known answers
//! (`models`), sphere-bundle transgression and Thom forms (`transgression`),
//! and zero / degeneracy locus machinery for sections (`loci`).

pub mod error;
pub mod exterior;
pub mod fields;
pub mod invariants;
pub mod loci;
pub mod models;
pub mod transgression;

pub use error::{Error, Result};
