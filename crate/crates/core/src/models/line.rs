//! Degree-d line bundles over the projective line, in the polar chart of
//! an affine piece.
//!
//! With z = r e^{i theta} and rho = 1 + r^2, the metric |s|^2 = rho^-d on
//! the holomorphic frame gives, after normalizing to the unit-length frame
//! s rho^{d/2}, the u(1)-valued connection omega = -i d r^2 / rho d theta
//! and curvature Omega = -2 i d r / rho^2 dr ^ d theta; the first Chern
//! density is d r / (pi rho^2) dr ^ d theta, integrating to d.

use super::model::{BundleModel, ConnectionRep, CurvatureRep, TruncationSpec};
use crate::error::{Error, Result};
use crate::exterior::{Complex64, Form, FormMatrix};
use crate::fields::{Chart, MatrixField};
use std::f64::consts::TAU;

/// Chart of the affine piece in polar coordinates, truncated at `radius`.
pub fn projective_line_chart(radius: f64) -> Result<Chart> {
    if !(radius > 1.0) || !radius.is_finite() {
        return Err(Error::BadConfig(format!(
            "truncation radius {radius} must exceed 1"
        )));
    }
    Chart::new(
        "cp1_polar",
        &[("r", 0.0, radius, false), ("theta", 0.0, TAU, true)],
    )
}

/// The degree-d line bundle with its metric connection.
pub fn line_bundle(degree: i64, radius: f64) -> Result<BundleModel> {
    let chart = projective_line_chart(radius)?;
    let d = degree as f64;
    let curvature = MatrixField::from_fn(chart.clone(), 1, 1, move |p| {
        let r = p[0];
        let rho = 1.0 + r * r;
        let mut m = FormMatrix::zero(2, 1, 1);
        *m.entry_mut(0, 0) =
            Form::monomial(2, &[1, 2], Complex64::new(0.0, -2.0 * d * r / (rho * rho)))
                .expect("axes 1,2");
        m
    });
    let connection = MatrixField::from_fn(chart, 1, 1, move |p| {
        let r = p[0];
        let rho = 1.0 + r * r;
        let mut m = FormMatrix::zero(2, 1, 1);
        *m.entry_mut(0, 0) =
            Form::monomial(2, &[2], Complex64::new(0.0, -d * r * r / rho)).expect("axis 2");
        m
    });
    Ok(BundleModel {
        name: format!("o{degree}"),
        rank: 1,
        curvature: CurvatureRep::Complex(curvature),
        connection: Some(ConnectionRep::Complex(connection)),
        corrections: vec![],
        truncation: Some(TruncationSpec {
            axis: 0,
            decay_order: 2,
        }),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fields::{curvature_from_connection, DiffScheme};
    use crate::models::model::{characteristic_number, characteristic_number_extrapolated};

    #[test]
    fn first_chern_number_equals_degree() {
        for d in [-2i64, 1, 3] {
            let v = characteristic_number_extrapolated(
                &|radius| line_bundle(d, radius),
                "c1",
                30.0,
                &[3000, 8],
            )
            .unwrap();
            assert!((v - d as f64).abs() < 1e-4, "degree {d} integrated to {v}");
        }
    }

    #[test]
    fn truncation_alone_undershoots_but_extrapolation_recovers() {
        let raw = characteristic_number(&line_bundle(1, 20.0).unwrap(), "c1", &[2000, 8]).unwrap();
        assert!(raw < 1.0 - 1e-3);
        let fixed =
            characteristic_number_extrapolated(&|r| line_bundle(1, r), "c1", 20.0, &[2000, 8])
                .unwrap();
        assert!((fixed - 1.0).abs() < 5e-5);
    }

    #[test]
    fn metric_connection_reproduces_curvature() {
        let model = line_bundle(3, 10.0).unwrap();
        let (conn, curv) = match (&model.connection, &model.curvature) {
            (Some(ConnectionRep::Complex(c)), CurvatureRep::Complex(k)) => (c.clone(), k.clone()),
            _ => unreachable!("line bundle is complex"),
        };
        let derived = curvature_from_connection(&conn, DiffScheme::default()).unwrap();
        for p in [[0.7, 1.0], [2.5, 4.0], [6.0, 0.2]] {
            assert!(derived.eval(&p).distance(&curv.eval(&p)) < 1e-6);
        }
    }
}
