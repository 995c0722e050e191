//! Combinators building new bundle models from existing ones: direct sums,
//! realification, and pullback along smooth maps.

use super::model::{BundleModel, ConnectionRep, CurvatureRep};
use crate::error::{Error, Result};
use crate::fields::{pullback_matrix, Chart, MatrixField, SmoothMap};
use crate::invariants::realify_curvature;

/// Direct sum over a shared base chart. Corrections do not transfer to the
/// sum (they are tied to class monomials of the summands), so the result
/// carries none; the truncation marker survives only when both agree.
pub fn direct_sum(a: &BundleModel, b: &BundleModel) -> Result<BundleModel> {
    if !a.chart().same_box(b.chart()) {
        return Err(Error::ShapeMismatch(format!(
            "summands live on different charts {} and {}",
            a.chart().name(),
            b.chart().name()
        )));
    }
    let curvature = match (&a.curvature, &b.curvature) {
        (CurvatureRep::Real(fa), CurvatureRep::Real(fb)) => {
            CurvatureRep::Real(block_diag(fa, fb))
        }
        (CurvatureRep::Complex(fa), CurvatureRep::Complex(fb)) => {
            CurvatureRep::Complex(block_diag(fa, fb))
        }
        _ => {
            return Err(Error::Unsupported(
                "mixed real and complex summands; realify the complex one first".to_string(),
            ));
        }
    };
    let connection = match (&a.connection, &b.connection) {
        (Some(ConnectionRep::Real(fa)), Some(ConnectionRep::Real(fb))) => {
            Some(ConnectionRep::Real(block_diag(fa, fb)))
        }
        (Some(ConnectionRep::Complex(fa)), Some(ConnectionRep::Complex(fb))) => {
            Some(ConnectionRep::Complex(block_diag(fa, fb)))
        }
        _ => None,
    };
    let truncation = match (a.truncation, b.truncation) {
        (Some(ta), Some(tb)) if ta.axis == tb.axis && ta.decay_order == tb.decay_order => {
            Some(ta)
        }
        _ => None,
    };
    Ok(BundleModel {
        name: format!("{}+{}", a.name, b.name),
        rank: a.rank + b.rank,
        curvature,
        connection,
        corrections: vec![],
        truncation,
    })
}

fn block_diag<S: crate::exterior::FloatLike>(
    a: &MatrixField<S>,
    b: &MatrixField<S>,
) -> MatrixField<S> {
    let (a, b) = (a.clone(), b.clone());
    let (rows, cols) = (a.rows() + b.rows(), a.cols() + b.cols());
    MatrixField::from_fn(a.chart().clone(), rows, cols, move |x| {
        a.eval(x)
            .direct_sum(&b.eval(x))
            .expect("same chart, same ambient dimension")
    })
}

/// Underlying real bundle of a complex model, in the interleaved oriented
/// frame (s_1, i s_1, s_2, i s_2, ...). Curvature and connection both map
/// through the same Lie algebra embedding.
pub fn realify_model(m: &BundleModel) -> Result<BundleModel> {
    let field = match &m.curvature {
        CurvatureRep::Complex(f) => f.clone(),
        CurvatureRep::Real(_) => {
            return Err(Error::Unsupported(
                "model is already real".to_string(),
            ));
        }
    };
    let rank2 = 2 * m.rank;
    let real_curv = MatrixField::from_fn(field.chart().clone(), rank2, rank2, move |x| {
        realify_curvature(&field.eval(x)).expect("curvature stays skew-Hermitian")
    });
    let connection = match &m.connection {
        Some(ConnectionRep::Complex(f)) => {
            let f = f.clone();
            Some(ConnectionRep::Real(MatrixField::from_fn(
                f.chart().clone(),
                rank2,
                rank2,
                move |x| realify_curvature(&f.eval(x)).expect("connection stays skew-Hermitian"),
            )))
        }
        _ => None,
    };
    Ok(BundleModel {
        name: format!("real({})", m.name),
        rank: rank2,
        curvature: CurvatureRep::Real(real_curv),
        connection,
        corrections: m.corrections.clone(),
        truncation: m.truncation,
    })
}

/// Pullback of a model along a map into its base chart. Corrections and
/// truncation markers do not transfer; the caller chooses the new chart's
/// coverage.
pub fn pullback_model(map: &SmoothMap, m: &BundleModel, name: &str) -> Result<BundleModel> {
    let curvature = match &m.curvature {
        CurvatureRep::Real(f) => CurvatureRep::Real(pullback_matrix(map, f)?),
        CurvatureRep::Complex(f) => CurvatureRep::Complex(pullback_matrix(map, f)?),
    };
    let connection = match &m.connection {
        Some(ConnectionRep::Real(f)) => Some(ConnectionRep::Real(pullback_matrix(map, f)?)),
        Some(ConnectionRep::Complex(f)) => Some(ConnectionRep::Complex(pullback_matrix(map, f)?)),
        None => None,
    };
    Ok(BundleModel {
        name: name.to_string(),
        rank: m.rank,
        curvature,
        connection,
        corrections: vec![],
        truncation: None,
    })
}

/// Coordinate projection of a product chart onto its first or second
/// factor, with the constant 0/1 Jacobian attached.
pub fn projection_map(product: &Chart, first_dim: usize, first: bool) -> Result<SmoothMap> {
    let total = product.dim();
    if first_dim == 0 || first_dim >= total {
        return Err(Error::BadConfig(format!(
            "factor split {first_dim} does not divide chart of dimension {total}"
        )));
    }
    let (offset, target_dim) = if first {
        (0, first_dim)
    } else {
        (first_dim, total - first_dim)
    };
    let jac: Vec<Vec<f64>> = (0..target_dim)
        .map(|i| {
            let mut row = vec![0.0; total];
            row[offset + i] = 1.0;
            row
        })
        .collect();
    Ok(
        SmoothMap::new(product.clone(), target_dim, move |x: &[f64]| {
            x[offset..offset + target_dim].to_vec()
        })
        .with_jacobian(move |_| jac.clone()),
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::models::line::{line_bundle, projective_line_chart};
    use crate::models::model::{characteristic_number, class_form_field, parse_monomial};

    #[test]
    fn chern_of_sum_is_sum_for_line_bundles() {
        let a = line_bundle(2, 15.0).unwrap();
        let b = line_bundle(3, 15.0).unwrap();
        let sum = direct_sum(&a, &b).unwrap();
        assert_eq!(sum.rank, 2);
        let v = characteristic_number(&sum, "c1", &[300, 8]).unwrap();
        let va = characteristic_number(&a, "c1", &[300, 8]).unwrap();
        let vb = characteristic_number(&b, "c1", &[300, 8]).unwrap();
        assert!((v - (va + vb)).abs() < 1e-12);
    }

    #[test]
    fn euler_of_realified_line_bundle_matches_first_chern() {
        let l = line_bundle(2, 15.0).unwrap();
        let r = realify_model(&l).unwrap();
        assert_eq!(r.rank, 2);
        let e = class_form_field(&r, &parse_monomial("e").unwrap()).unwrap();
        let c1 = class_form_field(&l, &parse_monomial("c1").unwrap()).unwrap();
        for p in [[0.5, 1.0], [3.0, 4.0]] {
            assert!(e.eval(&p).distance(&c1.eval(&p)) < 1e-13);
        }
    }

    #[test]
    fn pullback_along_projection_keeps_factor_curvature() {
        let base = projective_line_chart(10.0).unwrap();
        let product = base.product(&base, "cp1xcp1").unwrap();
        let pr1 = projection_map(&product, 2, true).unwrap();
        let pulled = pullback_model(&pr1, &line_bundle(1, 10.0).unwrap(), "pr1_o1").unwrap();
        let field = match &pulled.curvature {
            crate::models::model::CurvatureRep::Complex(f) => f.clone(),
            _ => unreachable!(),
        };
        let omega = field.eval(&[1.5, 0.7, 9.0, 2.0]);
        // Entry lives purely in the first factor's axes 1, 2.
        let r = 1.5f64;
        let rho = 1.0 + r * r;
        let expect = -2.0 * r / (rho * rho);
        let got = omega
            .entry(0, 0)
            .coefficient(crate::exterior::MultiIndex::from_axes(&[1, 2]).unwrap());
        assert!((got.im - expect).abs() < 1e-13);
        assert!(omega.entry(0, 0).num_terms() == 1);
    }
}
