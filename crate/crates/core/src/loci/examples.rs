//! Ready-made sections, slices, and product models used by the counting
//! checks: rotation fields on the sphere caps, root sections of line
//! bundles, and rank-one and rank-two bundles over a product of two
//! projective lines.

use std::f64::consts::{FRAC_PI_4, PI, TAU};

use super::section::SectionField;
use crate::error::Result;
use crate::exterior::{Complex64, Form};
use crate::fields::{Chart, FormField, SmoothMap};
use crate::models::{
    direct_sum, line_bundle, projection_map, projective_line_chart, pullback_model, BundleModel,
};

/// The rotation field about the polar axis, written in the two polar cap
/// charts. Each cap holds one simple zero of index +1, so the signed count
/// over both caps is 2.
pub fn sphere_rotation_caps() -> Result<Vec<SectionField>> {
    let north = Chart::new(
        "s2_cap_north",
        &[("u", -1.2, 1.2, false), ("v", -1.2, 1.2, false)],
    )?;
    let south = Chart::new(
        "s2_cap_south",
        &[("u", -1.2, 1.2, false), ("v", -1.2, 1.2, false)],
    )?;
    let n = SectionField::real(north, 2, |p| vec![-p[1], p[0]])
        .with_jacobian(|_| vec![vec![0.0, -1.0], vec![1.0, 0.0]]);
    let s = SectionField::real(south, 2, |p| vec![p[1], -p[0]])
        .with_jacobian(|_| vec![vec![0.0, 1.0], vec![-1.0, 0.0]]);
    Ok(vec![n, s])
}

/// The section z^d - 1 of the degree-d line bundle in the polar chart.
/// Its zeros are the d-th roots of unity, each simple and of index +1.
pub fn line_roots_section(d: u32, radius: f64) -> Result<SectionField> {
    let chart = projective_line_chart(radius)?;
    let dd = d as f64;
    let value = move |p: &[f64]| {
        let (r, t) = (p[0], p[1]);
        vec![Complex64::from_polar(r.powi(d as i32), dd * t) - Complex64::new(1.0, 0.0)]
    };
    let jac = move |p: &[f64]| {
        let (r, t) = (p[0], p[1]);
        let dz_dr = Complex64::from_polar(dd * r.powi(d as i32 - 1), dd * t);
        let dz_dt = Complex64::i() * Complex64::from_polar(dd * r.powi(d as i32), dd * t);
        vec![vec![dz_dr.re, dz_dt.re], vec![dz_dr.im, dz_dt.im]]
    };
    Ok(SectionField::complex(chart, 1, value).with_jacobian(jac))
}

/// Polar product chart for two projective lines, both truncated at the
/// same radius.
pub fn product_polar_chart(radius: f64) -> Result<Chart> {
    Chart::new(
        "cp1_x_cp1",
        &[
            ("r1", 0.0, radius, false),
            ("theta1", 0.0, TAU, true),
            ("r2", 0.0, radius, false),
            ("theta2", 0.0, TAU, true),
        ],
    )
}

/// The degree-d line bundle pulled back from one factor of the product.
pub fn pulled_line_model(d: i64, radius: f64, first: bool) -> Result<BundleModel> {
    let chart = product_polar_chart(radius)?;
    let pr = projection_map(&chart, 2, first)?;
    let factor = line_bundle(d, radius)?;
    let tag = if first { 1 } else { 2 };
    pullback_model(&pr, &factor, &format!("o{d}_factor{tag}"))
}

/// Rank-two sum of line bundles pulled back from the two factors.
pub fn product_line_model(d1: i64, d2: i64, radius: f64) -> Result<BundleModel> {
    let a = pulled_line_model(d1, radius, true)?;
    let b = pulled_line_model(d2, radius, false)?;
    direct_sum(&a, &b)
}

/// Embedding of one projective line as a slice of the product at a fixed
/// point q of the other factor.
pub fn slice_embedding(radius: f64, q: (f64, f64), first_varies: bool) -> Result<SmoothMap> {
    let name = if first_varies { "slice_q2" } else { "slice_q1" };
    let domain = Chart::new(name, &[("r", 0.0, radius, false), ("theta", 0.0, TAU, true)])?;
    let (qr, qt) = q;
    let map = if first_varies {
        SmoothMap::new(domain, 4, move |y: &[f64]| vec![y[0], y[1], qr, qt]).with_jacobian(|_| {
            vec![
                vec![1.0, 0.0],
                vec![0.0, 1.0],
                vec![0.0, 0.0],
                vec![0.0, 0.0],
            ]
        })
    } else {
        SmoothMap::new(domain, 4, move |y: &[f64]| vec![qr, qt, y[0], y[1]]).with_jacobian(|_| {
            vec![
                vec![0.0, 0.0],
                vec![0.0, 0.0],
                vec![1.0, 0.0],
                vec![0.0, 1.0],
            ]
        })
    };
    Ok(map)
}

/// The section z1^d - 1 of the pulled back degree-d bundle, constant along
/// the second factor. Its zero set is d disjoint copies of the second
/// factor.
pub fn product_root_section(d: u32, radius: f64) -> Result<SectionField> {
    let chart = product_polar_chart(radius)?;
    let dd = d as f64;
    let value = move |p: &[f64]| {
        let (r, t) = (p[0], p[1]);
        vec![Complex64::from_polar(r.powi(d as i32), dd * t) - Complex64::new(1.0, 0.0)]
    };
    let jac = move |p: &[f64]| {
        let (r, t) = (p[0], p[1]);
        let dz_dr = Complex64::from_polar(dd * r.powi(d as i32 - 1), dd * t);
        let dz_dt = Complex64::i() * Complex64::from_polar(dd * r.powi(d as i32), dd * t);
        vec![
            vec![dz_dr.re, dz_dt.re, 0.0, 0.0],
            vec![dz_dr.im, dz_dt.im, 0.0, 0.0],
        ]
    };
    Ok(SectionField::complex(chart, 1, value).with_jacobian(jac))
}

/// A bidegree (1,1) curve in the product: s parametrizes reciprocal radii
/// and t opposite angles, so the curve meets each slice class once.
pub fn degree_sum_curve(radius: f64, span: f64) -> Result<SmoothMap> {
    let domain = Chart::new(
        "bidegree_curve",
        &[("s", -span, span, false), ("t", 0.0, TAU, true)],
    )?;
    let _ = radius;
    Ok(
        SmoothMap::new(domain, 4, move |p: &[f64]| {
            vec![p[0].exp(), p[1], (-p[0]).exp(), TAU - p[1]]
        })
        .with_jacobian(move |p: &[f64]| {
            vec![
                vec![p[0].exp(), 0.0],
                vec![0.0, 1.0],
                vec![-(-p[0]).exp(), 0.0],
                vec![0.0, -1.0],
            ]
        }),
    )
}

/// Chart for the product of a projective line with a sphere band.
pub fn mixed_product_chart(radius: f64, cap: f64) -> Result<Chart> {
    Chart::new(
        "cp1_x_s2",
        &[
            ("r1", 0.0, radius, false),
            ("theta1", 0.0, TAU, true),
            ("theta2", cap, PI - cap, false),
            ("phi2", 0.0, TAU, true),
        ],
    )
}

/// Degree-one line bundle pulled back from the projective line factor of
/// the mixed product.
pub fn mixed_line_model(radius: f64, cap: f64) -> Result<BundleModel> {
    let chart = mixed_product_chart(radius, cap)?;
    let pr = projection_map(&chart, 2, true)?;
    let factor = line_bundle(1, radius)?;
    pullback_model(&pr, &factor, "o1_over_mixed")
}

/// Unit-mass area form of the sphere factor, extended over the product.
pub fn sphere_area_form(radius: f64, cap: f64) -> Result<FormField<f64>> {
    let chart = mixed_product_chart(radius, cap)?;
    Ok(FormField::from_fn(chart, |p| {
        Form::monomial(4, &[3, 4], p[2].sin() / (2.0 * TAU)).expect("axes 3,4")
    }))
}

/// Parametrized copy of the sphere factor through the root of the section
/// z1 - e^{i pi/4}, with the closed-form mass of the two missing caps.
pub fn point_sphere_locus(cap: f64) -> Result<(SmoothMap, f64)> {
    let domain = Chart::new(
        "sphere_slice",
        &[("theta", cap, PI - cap, false), ("phi", 0.0, TAU, true)],
    )?;
    let map = SmoothMap::new(domain, 4, move |p: &[f64]| {
        vec![1.0, FRAC_PI_4, p[0], p[1]]
    })
    .with_jacobian(|_| {
        vec![
            vec![0.0, 0.0],
            vec![0.0, 0.0],
            vec![1.0, 0.0],
            vec![0.0, 1.0],
        ]
    });
    let correction = 1.0 - cap.cos();
    Ok((map, correction))
}

/// Section z1 - e^{i pi/4} of the mixed-product line bundle; its zero set
/// is the sphere factor over one base point.
pub fn mixed_point_section(radius: f64, cap: f64) -> Result<SectionField> {
    let chart = mixed_product_chart(radius, cap)?;
    let root = Complex64::from_polar(1.0, FRAC_PI_4);
    Ok(SectionField::complex(chart, 1, move |p| {
        vec![Complex64::from_polar(p[0], p[1]) - root]
    }))
}

/// A nowhere-zero section of the rank-two product bundle summed with its
/// conjugate pattern: the first component is pinned to 1, so no rank drop
/// occurs anywhere.
pub fn pinned_first_section(radius: f64) -> Result<SectionField> {
    let chart = product_polar_chart(radius)?;
    Ok(SectionField::complex(chart, 4, |p| {
        vec![
            Complex64::new(1.0, 0.0),
            Complex64::from_polar(p[2], p[3]),
            Complex64::new(0.0, 0.0),
            Complex64::new(0.0, 0.0),
        ]
    }))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fields::integrate_top;
    use crate::loci::zeros::{find_zeros, index_sum};
    use crate::models::{characteristic_number, class_form_field, parse_monomial};

    #[test]
    fn rotation_caps_sum_to_the_sphere_euler_number() {
        let caps = sphere_rotation_caps().unwrap();
        let mut total = 0;
        for field in &caps {
            let records = find_zeros(field, &[24, 24], 1e-7).unwrap();
            assert_eq!(records.len(), 1);
            total += index_sum(&records).unwrap();
        }
        assert_eq!(total, 2);
    }

    #[test]
    fn root_section_finds_all_roots_of_unity() {
        for d in [1u32, 2, 3] {
            let s = line_roots_section(d, 20.0).unwrap();
            let records = find_zeros(&s, &[96, 96], 1e-7).unwrap();
            assert_eq!(records.len(), d as usize, "degree {d}");
            for r in &records {
                assert!((r.location[0] - 1.0).abs() < 1e-8);
                assert_eq!(r.index, 1);
            }
            assert_eq!(index_sum(&records).unwrap(), d as i64);
        }
    }

    #[test]
    fn product_model_has_degree_two_square_and_unit_top_class() {
        let model = product_line_model(1, 1, 20.0).unwrap();
        let cells = [160, 4, 160, 4];
        let c1_sq = characteristic_number(&model, "c1^2", &cells).unwrap();
        assert!((c1_sq - 2.0).abs() < 2e-2, "c1^2 = {c1_sq}");
        let c2 = characteristic_number(&model, "c2", &cells).unwrap();
        assert!((c2 - 1.0).abs() < 1e-2, "c2 = {c2}");
    }

    #[test]
    fn bidegree_curve_carries_degree_two() {
        let model = product_line_model(1, 1, 20.0).unwrap();
        let curve = degree_sum_curve(20.0, 2.9).unwrap();
        let restricted = crate::models::pullback_model(&curve, &model, "sum_on_curve").unwrap();
        let deg = characteristic_number(&restricted, "c1", &[400, 8]).unwrap();
        assert!((deg - 2.0).abs() < 3e-2, "restricted degree {deg}");
    }

    #[test]
    fn mixed_area_form_splits_the_pairing_integral() {
        let model = mixed_line_model(20.0, 0.05).unwrap();
        let xi = sphere_area_form(20.0, 0.05).unwrap();
        let factors = parse_monomial("c1").unwrap();
        let class = class_form_field(&model, &factors).unwrap();
        let paired = class.wedge(&xi);
        let value = integrate_top(&paired, &[256, 6, 32, 6]).unwrap();
        let expected = (1.0 - 1.0 / 401.0) * (0.05f64).cos();
        assert!((value - expected).abs() < 2e-3, "pairing = {value}");
    }

    #[test]
    fn slice_restriction_recovers_the_factor_bundle() {
        let model = pulled_line_model(2, 20.0, true).unwrap();
        let slice = slice_embedding(20.0, (1.7, 0.6), true).unwrap();
        let restricted = crate::models::pullback_model(&slice, &model, "slice_o2").unwrap();
        let deg = characteristic_number(&restricted, "c1", &[2048, 8]).unwrap();
        let direct = characteristic_number(&line_bundle(2, 20.0).unwrap(), "c1", &[2048, 8]).unwrap();
        assert!((deg - direct).abs() < 1e-9, "slice {deg} vs factor {direct}");
    }
}
