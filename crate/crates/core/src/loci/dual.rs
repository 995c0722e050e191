//! Pairing checks between characteristic forms and their supporting loci:
//! the chart integral of class wedge test form against the evaluation of
//! the test form on the locus itself.

use super::section::SectionField;
use super::zeros::{find_zeros, ZeroRecord};
use crate::error::{Error, Result};
use crate::exterior::MultiIndex;
use crate::fields::{
    exterior_derivative, integrate_top, pullback, DiffScheme, FormField, SmoothMap,
};
use crate::models::{class_form_field, BundleModel, ClassName};

/// How the locus enters the pairing: either a finite signed point set, or
/// a parametrized patch whose chart misses a region of known closed-form
/// contribution. A parametrized locus carries multiplicity one.
pub enum LocusSide {
    Points(Vec<ZeroRecord>),
    Param {
        map: SmoothMap,
        cells: Vec<usize>,
        correction: f64,
    },
}

#[derive(Clone, Debug)]
pub struct DualCheck {
    pub lhs: f64,
    pub rhs: f64,
    pub discrepancy: f64,
}

fn probe_cells(dim: usize) -> Vec<usize> {
    if dim <= 2 {
        vec![5; dim]
    } else {
        vec![3; dim]
    }
}

/// Compares the integral of the k-th chern form wedged with a closed test
/// form against the test form's own integral over the locus. The test
/// form must be closed and of complementary degree; both demands are
/// checked and violations are errors, not silent results.
pub fn poincare_dual_check(
    model: &BundleModel,
    k: usize,
    xi: &FormField<f64>,
    locus: &LocusSide,
    cells: &[usize],
) -> Result<DualCheck> {
    let chart = model.chart();
    if !xi.chart().same_box(chart) {
        return Err(Error::ShapeMismatch(
            "test form lives on a different chart than the model".to_string(),
        ));
    }
    let dim = chart.dim();
    if 2 * k > dim {
        return Err(Error::BadConfig(format!(
            "class degree {} exceeds chart dimension {dim}",
            2 * k
        )));
    }
    let expected_deg = dim - 2 * k;

    let probe: Vec<Vec<f64>> = chart.midpoint_grid(&probe_cells(dim))?.collect();
    let mut xi_scale: f64 = 0.0;
    for p in &probe {
        let v = xi.eval(p);
        xi_scale = xi_scale.max(v.max_magnitude());
        if v.max_magnitude() > 0.0 {
            match v.homogeneous_degree() {
                Some(d) if d == expected_deg => {}
                Some(d) => {
                    return Err(Error::DegreeMismatch {
                        monomial: format!("test form of degree {d}"),
                        degree: d,
                        dim: expected_deg,
                    });
                }
                None => {
                    return Err(Error::ShapeMismatch(
                        "test form mixes degrees".to_string(),
                    ));
                }
            }
        }
    }

    let dxi = exterior_derivative(xi, DiffScheme::default())?;
    let mut residual: f64 = 0.0;
    for p in &probe {
        residual = residual.max(dxi.eval(p).max_magnitude());
    }
    if residual > 1e-6 * (1.0 + xi_scale) {
        return Err(Error::ValidationFailed(format!(
            "test form is not closed: derivative magnitude {residual:.3e}"
        )));
    }

    let class = class_form_field(model, &[(ClassName::Chern(k), 1)])?;
    let lhs = integrate_top(&class.wedge(xi), cells)?;

    let rhs = match locus {
        LocusSide::Points(records) => {
            if expected_deg != 0 {
                return Err(Error::BadConfig(format!(
                    "a point locus pairs with degree-zero forms, not degree {expected_deg}"
                )));
            }
            let mut acc = 0.0;
            for r in records {
                if !r.reliable() {
                    return Err(Error::ValidationFailed(format!(
                        "record at {:?} is flagged and cannot enter the pairing",
                        r.location
                    )));
                }
                acc += r.index as f64 * xi.eval(&r.location).coefficient(MultiIndex::EMPTY);
            }
            acc
        }
        LocusSide::Param {
            map,
            cells: locus_cells,
            correction,
        } => {
            let pulled = pullback(map, xi)?;
            integrate_top(&pulled, locus_cells)? + correction
        }
    };

    Ok(DualCheck {
        lhs,
        rhs,
        discrepancy: (lhs - rhs).abs(),
    })
}

#[derive(Clone, Debug)]
pub struct SliceCount {
    pub count: f64,
    pub records: Vec<ZeroRecord>,
}

/// Signed zero count of a section restricted to an embedded slice. The
/// restricted section must be square on the slice chart; flagged records
/// make the count an error rather than a wrong number.
pub fn slice_zero_count(
    section: &SectionField,
    slice: &SmoothMap,
    cells: &[usize],
    tol: f64,
) -> Result<SliceCount> {
    let restricted = section.restrict(slice)?;
    let records = find_zeros(&restricted, cells, tol)?;
    let mut count = 0.0;
    for r in &records {
        if !r.reliable() {
            return Err(Error::ValidationFailed(format!(
                "zero at {:?} is flagged; refine the grid before counting",
                r.location
            )));
        }
        count += r.index as f64;
    }
    Ok(SliceCount { count, records })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exterior::Form;
    use crate::fields::Chart;
    use crate::models::line_bundle;

    #[test]
    fn non_closed_test_form_is_rejected() {
        let model = line_bundle(1, 10.0).unwrap();
        let chart = model.chart().clone();
        let xi = FormField::from_fn(chart.clone(), |p| Form::constant(2, p[0]));
        let locus = LocusSide::Points(vec![]);
        let err = poincare_dual_check(&model, 1, &xi, &locus, &[16, 8]).unwrap_err();
        assert!(matches!(err, Error::ValidationFailed(_)));
    }

    #[test]
    fn wrong_degree_test_form_is_rejected() {
        let model = line_bundle(1, 10.0).unwrap();
        let chart = model.chart().clone();
        let xi = FormField::from_fn(chart.clone(), |_| {
            Form::basis_one_form(2, 1)
        });
        let locus = LocusSide::Points(vec![]);
        let err = poincare_dual_check(&model, 1, &xi, &locus, &[16, 8]).unwrap_err();
        assert!(matches!(err, Error::DegreeMismatch { .. }));
    }

    #[test]
    fn class_heavier_than_the_chart_is_rejected() {
        let model = line_bundle(1, 10.0).unwrap();
        let chart = model.chart().clone();
        let xi = FormField::from_fn(chart, |_| Form::one(2));
        let locus = LocusSide::Points(vec![]);
        let err = poincare_dual_check(&model, 2, &xi, &locus, &[16, 8]).unwrap_err();
        assert!(matches!(err, Error::BadConfig(_)));
    }

    #[test]
    fn point_locus_with_positive_degree_form_is_rejected() {
        let chart = Chart::new(
            "t4",
            &[
                ("a", 0.0, 1.0, true),
                ("b", 0.0, 1.0, true),
                ("c", 0.0, 1.0, true),
                ("d", 0.0, 1.0, true),
            ],
        )
        .unwrap();
        let curv = crate::fields::MatrixField::from_fn(chart.clone(), 1, 1, |_| {
            crate::exterior::FormMatrix::zero(4, 1, 1)
        });
        let model = BundleModel {
            name: "flat4".to_string(),
            rank: 1,
            curvature: crate::models::CurvatureRep::Complex(curv),
            connection: None,
            corrections: vec![],
            truncation: None,
        };
        let xi = FormField::from_fn(chart, |_| {
            Form::basis_one_form(4, 1).wedge(&Form::basis_one_form(4, 2))
        });
        let locus = LocusSide::Points(vec![]);
        let err = poincare_dual_check(&model, 1, &xi, &locus, &[3, 3, 3, 3]).unwrap_err();
        assert!(matches!(err, Error::BadConfig(_)));
    }
}
