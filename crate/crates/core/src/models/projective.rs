//! Tangent bundles of the projective line and plane with the Fubini-Study
//! metric.
//!
//! On the affine chart with rho = 1 + |z|^2 the metric is
//! h_ij = (rho delta_ij - zbar_i z_j) / rho^2 and the curvature of its
//! metric connection, in the holomorphic frame, is
//!
//!   Omega_ij = sum_ab (delta_ij h_ab + delta_aj h_ib) dz_a ^ dzbar_b.
//!
//! That frame is not unitary, so the matrix is not skew-Hermitian; the
//! model conjugates by the inverse Cholesky factor of h (curvature is
//! tensorial, so no derivative terms appear) and ships the unitary-frame
//! curvature, which is.

use super::line::projective_line_chart;
use super::model::{BundleModel, CurvatureRep, TruncationSpec};
use crate::error::{Error, Result};
use crate::exterior::{Complex64, ComplexScalar, Form, FormMatrix, Scalar};
use crate::fields::{Chart, MatrixField};
use std::f64::consts::TAU;

fn fs_metric(z: &[Complex64]) -> Vec<Vec<Complex64>> {
    let n = z.len();
    let rho = 1.0 + z.iter().map(|w| w.norm_sqr()).sum::<f64>();
    let mut h = vec![vec![Complex64::new(0.0, 0.0); n]; n];
    for i in 0..n {
        for j in 0..n {
            let diag = if i == j {
                Complex64::new(rho, 0.0)
            } else {
                Complex64::new(0.0, 0.0)
            };
            h[i][j] = (diag - z[i].conj() * z[j]) / (rho * rho);
        }
    }
    h
}

fn holomorphic_curvature(
    dim: usize,
    h: &[Vec<Complex64>],
    dz: &[Form<Complex64>],
) -> FormMatrix<Complex64> {
    let n = h.len();
    let dzbar: Vec<Form<Complex64>> = dz.iter().map(Form::conj).collect();
    let mut omega = FormMatrix::zero(dim, n, n);
    for i in 0..n {
        for j in 0..n {
            let mut acc = Form::zero(dim);
            for a in 0..n {
                for b in 0..n {
                    let mut coeff = Complex64::new(0.0, 0.0);
                    if i == j {
                        coeff = coeff + h[a][b];
                    }
                    if a == j {
                        coeff = coeff + h[i][b];
                    }
                    if !Scalar::is_zero(&coeff) {
                        acc = acc.add(&dz[a].wedge(&dzbar[b]).scale(&coeff));
                    }
                }
            }
            *omega.entry_mut(i, j) = acc;
        }
    }
    omega
}

/// Lower Cholesky factor of a positive Hermitian matrix: h = L L^H.
fn cholesky(h: &[Vec<Complex64>]) -> Vec<Vec<Complex64>> {
    let n = h.len();
    let mut l = vec![vec![Complex64::new(0.0, 0.0); n]; n];
    for j in 0..n {
        let mut diag = h[j][j].re;
        for k in 0..j {
            diag -= l[j][k].norm_sqr();
        }
        debug_assert!(diag > 0.0, "metric must stay positive definite");
        l[j][j] = Complex64::new(diag.sqrt(), 0.0);
        for i in j + 1..n {
            let mut v = h[i][j];
            for k in 0..j {
                v -= l[i][k] * l[j][k].conj();
            }
            l[i][j] = v / l[j][j].re;
        }
    }
    l
}

fn lower_triangular_inverse(l: &[Vec<Complex64>]) -> Vec<Vec<Complex64>> {
    let n = l.len();
    let mut inv = vec![vec![Complex64::new(0.0, 0.0); n]; n];
    for i in 0..n {
        inv[i][i] = Complex64::new(1.0, 0.0) / l[i][i];
        for j in (0..i).rev() {
            let mut s = Complex64::new(0.0, 0.0);
            for k in j..i {
                s += l[i][k] * inv[k][j];
            }
            inv[i][j] = -s / l[i][i];
        }
    }
    inv
}

fn conjugate_by(
    left: &[Vec<Complex64>],
    m: &FormMatrix<Complex64>,
    right: &[Vec<Complex64>],
) -> FormMatrix<Complex64> {
    let n = m.rows();
    let dim = m.dim();
    let mut out = FormMatrix::zero(dim, n, n);
    for i in 0..n {
        for j in 0..n {
            let mut acc = Form::zero(dim);
            for k in 0..n {
                for p in 0..n {
                    let coeff = left[i][k] * right[p][j];
                    if !Scalar::is_zero(&coeff) {
                        acc = acc.add(&m.entry(k, p).scale(&coeff));
                    }
                }
            }
            *out.entry_mut(i, j) = acc;
        }
    }
    out
}

/// Unitary-frame Fubini-Study curvature from the point z and the chart
/// expressions of dz_1..dz_n.
pub fn fs_unitary_curvature(dim: usize, z: &[Complex64], dz: &[Form<Complex64>]) -> FormMatrix<Complex64> {
    let h = fs_metric(z);
    let omega_hol = holomorphic_curvature(dim, &h, dz);
    let l = cholesky(&h);
    let l_inv = lower_triangular_inverse(&l);
    conjugate_by(&l_inv, &omega_hol, &l)
}

/// Holomorphic-frame curvature at a point of the Cartesian chart
/// (x_1, y_1, ..., x_n, y_n), where dz_a = dx_a + i dy_a. Used by the
/// cross-check against the differentiated metric connection.
pub fn fs_holomorphic_curvature_cartesian(z: &[Complex64]) -> FormMatrix<Complex64> {
    let n = z.len();
    let dim = 2 * n;
    let i_unit = <Complex64 as ComplexScalar>::i();
    let dz: Vec<Form<Complex64>> = (0..n)
        .map(|a| {
            Form::basis_one_form(dim, 2 * a + 1)
                .add(&Form::basis_one_form(dim, 2 * a + 2).scale(&i_unit))
        })
        .collect();
    let h = fs_metric(z);
    holomorphic_curvature(dim, &h, &dz)
}

/// Metric connection theta = (del h) h^-1 in the holomorphic frame, at a
/// point of the Cartesian chart. Entry formula, with del_a rho = zbar_a:
/// del_a h_ij = (zbar_a d_ij - zbar_i d_aj)/rho^2 - 2 zbar_a h_ij / rho.
pub fn fs_holomorphic_connection_cartesian(z: &[Complex64]) -> FormMatrix<Complex64> {
    let n = z.len();
    let dim = 2 * n;
    let rho = 1.0 + z.iter().map(|w| w.norm_sqr()).sum::<f64>();
    let h = fs_metric(z);
    // h^-1 = rho (I + zbar z^T) entrywise: rho (d_kj + zbar_k z_j).
    let hinv = |k: usize, j: usize| -> Complex64 {
        let diag = if k == j { 1.0 } else { 0.0 };
        (Complex64::new(diag, 0.0) + z[k].conj() * z[j]) * rho
    };
    let i_unit = <Complex64 as ComplexScalar>::i();
    let dz: Vec<Form<Complex64>> = (0..n)
        .map(|a| {
            Form::basis_one_form(dim, 2 * a + 1)
                .add(&Form::basis_one_form(dim, 2 * a + 2).scale(&i_unit))
        })
        .collect();
    let mut theta = FormMatrix::zero(dim, n, n);
    for i in 0..n {
        for j in 0..n {
            let mut acc = Form::zero(dim);
            for a in 0..n {
                // del_a h_ik contracted with hinv_kj over k.
                let mut coeff = Complex64::new(0.0, 0.0);
                for k in 0..n {
                    let dik = if i == k { 1.0 } else { 0.0 };
                    let dak = if a == k { 1.0 } else { 0.0 };
                    let del = (z[a].conj() * dik - z[i].conj() * dak) / (rho * rho)
                        - z[a].conj() * h[i][k] * (2.0 / rho);
                    coeff += del * hinv(k, j);
                }
                if !Scalar::is_zero(&coeff) {
                    acc = acc.add(&dz[a].scale(&coeff));
                }
            }
            *theta.entry_mut(i, j) = acc;
        }
    }
    theta
}

/// Tangent bundle of the projective line in the affine polar chart.
pub fn projective_line_tangent(radius: f64) -> Result<BundleModel> {
    let chart = projective_line_chart(radius)?;
    let curvature = MatrixField::from_fn(chart, 1, 1, |p| {
        let (r, th) = (p[0], p[1]);
        let z = [Complex64::from_polar(r, th)];
        let phase = Complex64::from_polar(1.0, th);
        let i_unit = <Complex64 as ComplexScalar>::i();
        // dz = e^{i th} (dr + i r d theta).
        let dz = Form::basis_one_form(2, 1)
            .scale(&phase)
            .add(&Form::basis_one_form(2, 2).scale(&(phase * i_unit * r)));
        fs_unitary_curvature(2, &z, &[dz])
    });
    Ok(BundleModel {
        name: "cp1".to_string(),
        rank: 1,
        curvature: CurvatureRep::Complex(curvature),
        connection: None,
        corrections: vec![],
        truncation: Some(TruncationSpec {
            axis: 0,
            decay_order: 2,
        }),
    })
}

/// Chart of the affine piece of the projective plane in nested polar
/// coordinates: z_1 = r cos(a) e^{i t_1}, z_2 = r sin(a) e^{i t_2}. The
/// axis order (r, t_1, a, t_2) is positively oriented for the standard
/// complex orientation.
pub fn projective_plane_chart(radius: f64) -> Result<Chart> {
    if !(radius > 1.0) || !radius.is_finite() {
        return Err(Error::BadConfig(format!(
            "truncation radius {radius} must exceed 1"
        )));
    }
    Chart::new(
        "cp2_polar",
        &[
            ("r", 0.0, radius, false),
            ("t1", 0.0, TAU, true),
            ("a", 0.0, std::f64::consts::FRAC_PI_2, false),
            ("t2", 0.0, TAU, true),
        ],
    )
}

/// Tangent bundle of the projective plane in the nested polar chart.
pub fn projective_plane_tangent(radius: f64) -> Result<BundleModel> {
    let chart = projective_plane_chart(radius)?;
    let curvature = MatrixField::from_fn(chart, 2, 2, |p| {
        let (r, t1, a, t2) = (p[0], p[1], p[2], p[3]);
        let (sa, ca) = a.sin_cos();
        let z = [
            Complex64::from_polar(r * ca, t1),
            Complex64::from_polar(r * sa, t2),
        ];
        let e1 = Complex64::from_polar(1.0, t1);
        let e2 = Complex64::from_polar(1.0, t2);
        let i_unit = <Complex64 as ComplexScalar>::i();
        // dz_1 = e^{i t_1} (cos a dr + i r cos a dt_1 - r sin a da).
        let dz1 = Form::basis_one_form(4, 1)
            .scale(&(e1 * ca))
            .add(&Form::basis_one_form(4, 2).scale(&(e1 * i_unit * r * ca)))
            .add(&Form::basis_one_form(4, 3).scale(&(e1 * (-r * sa))));
        // dz_2 = e^{i t_2} (sin a dr + r cos a da + i r sin a dt_2).
        let dz2 = Form::basis_one_form(4, 1)
            .scale(&(e2 * sa))
            .add(&Form::basis_one_form(4, 3).scale(&(e2 * r * ca)))
            .add(&Form::basis_one_form(4, 4).scale(&(e2 * i_unit * r * sa)));
        fs_unitary_curvature(4, &z, &[dz1, dz2])
    });
    Ok(BundleModel {
        name: "cp2".to_string(),
        rank: 2,
        curvature: CurvatureRep::Complex(curvature),
        connection: None,
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
    use crate::models::line::line_bundle;
    use crate::models::model::{
        characteristic_number_extrapolated, class_form_field, parse_monomial, CurvatureRep,
    };

    #[test]
    fn unitary_frame_curvature_is_skew_hermitian() {
        let model = projective_plane_tangent(10.0).unwrap();
        let field = match &model.curvature {
            CurvatureRep::Complex(f) => f.clone(),
            _ => unreachable!(),
        };
        for p in [
            [0.3, 0.5, 0.4, 1.0],
            [2.0, 3.0, 1.2, 0.1],
            [7.5, 0.0, 0.9, 5.0],
        ] {
            let omega = field.eval(&p);
            let defect = omega.skew_hermitian_defect();
            assert!(
                defect < 1e-12 * (1.0 + omega.max_magnitude()),
                "defect {defect} at {p:?}"
            );
        }
    }

    #[test]
    fn line_tangent_curvature_matches_twist_two() {
        let fs = projective_line_tangent(10.0).unwrap();
        let o2 = line_bundle(2, 10.0).unwrap();
        let (a, b) = match (&fs.curvature, &o2.curvature) {
            (CurvatureRep::Complex(a), CurvatureRep::Complex(b)) => (a.clone(), b.clone()),
            _ => unreachable!(),
        };
        for p in [[0.4, 0.3], [1.5, 2.0], [6.0, 4.4]] {
            assert!(a.eval(&p).distance(&b.eval(&p)) < 1e-12);
        }
    }

    #[test]
    fn structure_formula_matches_differentiated_connection() {
        // Independent route: differentiate theta = (del h) h^-1 numerically
        // over the Cartesian chart and compare with the closed curvature
        // formula in the same holomorphic frame.
        let chart = Chart::new(
            "c2_cart",
            &[
                ("x1", -2.0, 2.0, false),
                ("y1", -2.0, 2.0, false),
                ("x2", -2.0, 2.0, false),
                ("y2", -2.0, 2.0, false),
            ],
        )
        .unwrap();
        let theta = MatrixField::from_fn(chart, 2, 2, |p| {
            let z = [Complex64::new(p[0], p[1]), Complex64::new(p[2], p[3])];
            fs_holomorphic_connection_cartesian(&z)
        });
        let derived = curvature_from_connection(&theta, DiffScheme::default()).unwrap();
        for p in [
            [0.3, -0.2, 0.5, 0.1],
            [1.0, 0.4, -0.8, 0.9],
            [-0.6, 1.2, 0.0, -0.3],
        ] {
            let z = [Complex64::new(p[0], p[1]), Complex64::new(p[2], p[3])];
            let closed = fs_holomorphic_curvature_cartesian(&z);
            let diff = derived.eval(&p).distance(&closed);
            assert!(diff < 1e-8, "mismatch {diff} at {p:?}");
        }
    }

    #[test]
    fn plane_pontryagin_density_equals_chern_combination() {
        // p_1 of the realified tangent bundle must equal c_1^2 - 2 c_2
        // pointwise as a form.
        let model = projective_plane_tangent(12.0).unwrap();
        let p1 = class_form_field(&model, &parse_monomial("p1").unwrap()).unwrap();
        let c1sq = class_form_field(&model, &parse_monomial("c1^2").unwrap()).unwrap();
        let c2 = class_form_field(&model, &parse_monomial("c2").unwrap()).unwrap();
        for p in [[0.5, 1.0, 0.7, 2.0], [3.0, 0.2, 1.1, 4.0]] {
            let lhs = p1.eval(&p);
            let rhs = c1sq.eval(&p).sub(&c2.eval(&p).scale_f64(2.0));
            assert!(lhs.distance(&rhs) < 1e-12 * (1.0 + rhs.max_magnitude()));
        }
    }

    #[test]
    fn line_first_chern_number_is_two() {
        let v = characteristic_number_extrapolated(
            &projective_line_tangent,
            "c1",
            20.0,
            &[2000, 8],
        )
        .unwrap();
        assert!((v - 2.0).abs() < 1e-4, "got {v}");
    }

    #[test]
    fn plane_second_chern_number_is_three() {
        let v = characteristic_number_extrapolated(
            &projective_plane_tangent,
            "c2",
            8.0,
            &[120, 4, 40, 4],
        )
        .unwrap();
        assert!((v - 3.0).abs() < 2e-2, "got {v}");
    }
}
