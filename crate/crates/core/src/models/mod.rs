//! Model bundles with explicit curvature over chart-covered bases, and the
//! machinery turning class monomials into numbers.

pub mod combinators;
pub mod line;
pub mod model;
pub mod projective;
pub mod surfaces;

pub use combinators::{direct_sum, projection_map, pullback_model, realify_model};
pub use line::{line_bundle, projective_line_chart};
pub use model::{
    canonical_monomial, characteristic_number, characteristic_number_extrapolated,
    class_form_field, monomial_degree, parse_monomial, BundleModel, ClassName, ConnectionRep,
    CurvatureRep, TruncationSpec,
};
pub use projective::{
    projective_line_tangent, projective_plane_chart, projective_plane_tangent,
};
pub use surfaces::{sphere_tangent, torus_tangent};

use crate::error::{Error, Result};

/// Looks up a model by CLI name: `s2`, `torus`, `cp1`, `cp2`, or `o<d>`
/// for the degree-d line bundle (d may be negative).
pub fn model_by_name(name: &str, radius: f64, cap: f64) -> Result<BundleModel> {
    match name {
        "s2" => sphere_tangent(cap),
        "torus" => torus_tangent(),
        "cp1" => projective_line_tangent(radius),
        "cp2" => projective_plane_tangent(radius),
        _ => {
            if let Some(rest) = name.strip_prefix('o') {
                if let Ok(d) = rest.parse::<i64>() {
                    return line_bundle(d, radius);
                }
            }
            Err(Error::UnknownName {
                kind: "model",
                name: name.to_string(),
            })
        }
    }
}

/// Builder form of `model_by_name` for radius extrapolation.
pub fn model_builder(name: &str, cap: f64) -> impl Fn(f64) -> Result<BundleModel> + '_ {
    move |radius| model_by_name(name, radius, cap)
}
