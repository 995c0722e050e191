//! Model surfaces: the round sphere's tangent bundle and the flat torus.

use super::model::{BundleModel, ConnectionRep, CurvatureRep};
use crate::error::{Error, Result};
use crate::exterior::{Form, FormMatrix};
use crate::fields::{Chart, MatrixField};
use std::f64::consts::{PI, TAU};

/// Tangent bundle of the unit sphere in the orthonormal coframe
/// (d theta, sin theta d phi), on the band theta in [cap, pi - cap].
///
/// Connection: omega_12 = cos(theta) d phi; curvature:
/// Omega_12 = -sin(theta) d theta ^ d phi. The two excluded polar caps
/// contribute exactly (1 - cos cap) each to the integral of the Euler
/// form, registered as a closed-form correction.
pub fn sphere_tangent(cap: f64) -> Result<BundleModel> {
    if !(cap > 0.0 && cap < PI / 2.0) {
        return Err(Error::BadConfig(format!(
            "cap angle {cap} must lie in (0, pi/2)"
        )));
    }
    let chart = Chart::new(
        "s2_band",
        &[("theta", cap, PI - cap, false), ("phi", 0.0, TAU, true)],
    )?;
    let curvature = MatrixField::from_fn(chart.clone(), 2, 2, |p| {
        let mut m = FormMatrix::zero(2, 2, 2);
        let w = Form::monomial(2, &[1, 2], -p[0].sin()).expect("axes 1,2");
        *m.entry_mut(1, 0) = w.neg();
        *m.entry_mut(0, 1) = w;
        m
    });
    let connection = MatrixField::from_fn(chart, 2, 2, |p| {
        let mut m = FormMatrix::zero(2, 2, 2);
        let w = Form::monomial(2, &[2], p[0].cos()).expect("axis 2");
        *m.entry_mut(1, 0) = w.neg();
        *m.entry_mut(0, 1) = w;
        m
    });
    Ok(BundleModel {
        name: "s2".to_string(),
        rank: 2,
        curvature: CurvatureRep::Real(curvature),
        connection: Some(ConnectionRep::Real(connection)),
        corrections: vec![("e".to_string(), 2.0 * (1.0 - cap.cos()))],
        truncation: None,
    })
}

/// Tangent bundle of the flat square torus: zero connection, zero
/// curvature, every characteristic number vanishes.
pub fn torus_tangent() -> Result<BundleModel> {
    let chart = Chart::new(
        "t2",
        &[("theta1", 0.0, TAU, true), ("theta2", 0.0, TAU, true)],
    )?;
    let zero = MatrixField::from_fn(chart.clone(), 2, 2, |_| FormMatrix::zero(2, 2, 2));
    let zero_conn = MatrixField::from_fn(chart, 2, 2, |_| FormMatrix::zero(2, 2, 2));
    Ok(BundleModel {
        name: "torus".to_string(),
        rank: 2,
        curvature: CurvatureRep::Real(zero),
        connection: Some(ConnectionRep::Real(zero_conn)),
        corrections: vec![],
        truncation: None,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fields::{curvature_from_connection, DiffScheme};
    use crate::models::model::characteristic_number;

    #[test]
    fn sphere_euler_number_is_two() {
        let model = sphere_tangent(0.05).unwrap();
        let v = characteristic_number(&model, "e", &[2000, 16]).unwrap();
        assert!((v - 2.0).abs() < 1e-6, "integral of e came out {v}");
    }

    #[test]
    fn sphere_connection_reproduces_curvature() {
        let model = sphere_tangent(0.2).unwrap();
        let (conn, curv) = match (&model.connection, &model.curvature) {
            (Some(ConnectionRep::Real(c)), CurvatureRep::Real(k)) => (c.clone(), k.clone()),
            _ => unreachable!("sphere model is real"),
        };
        let derived = curvature_from_connection(&conn, DiffScheme::default()).unwrap();
        for p in [[0.9, 1.0], [1.7, 4.0], [2.4, 0.3]] {
            assert!(derived.eval(&p).distance(&curv.eval(&p)) < 1e-9);
        }
    }

    #[test]
    fn torus_euler_number_vanishes() {
        let model = torus_tangent().unwrap();
        let v = characteristic_number(&model, "e", &[8, 8]).unwrap();
        assert_eq!(v, 0.0);
    }
}
