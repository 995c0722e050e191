//! Locus commands: signed zero counts against class integrals, pairing
//! checks between classes and their supporting loci, slice intersection
//! counts, and degeneracy scans.

use anyhow::Result;
use serde_json::json;

use charlab::exterior::Form;
use charlab::fields::FormField;
use charlab::loci::{
    degeneracy_scan, find_zeros, fitted_dimension, genericity_check, line_roots_section,
    mixed_line_model, pinned_first_section, point_sphere_locus, poincare_dual_check,
    product_line_model, product_root_section, slice_embedding, slice_zero_count,
    sphere_area_form, sphere_rotation_caps, LocusSide, SectionField, ZeroRecord,
};
use charlab::models::{
    characteristic_number, characteristic_number_extrapolated, line_bundle, model_by_name,
    model_builder, pullback_model, realify_model,
};

use crate::record::{params, record_against, record_info, Emitter, Params};

fn zero_rows(records: &[ZeroRecord]) -> Vec<String> {
    records
        .iter()
        .map(|r| {
            let coords: Vec<String> = r.location.iter().map(|v| v.to_string()).collect();
            format!(
                "{},{},{},{},{}",
                coords.join(","),
                r.index,
                r.refine_residual,
                r.converged,
                r.on_margin
            )
        })
        .collect()
}

fn emit_zero_records(
    command: &str,
    base: &Params,
    records: &[ZeroRecord],
    em: &mut Emitter,
) -> bool {
    let mut all_reliable = true;
    for r in records {
        let mut p = base.clone();
        p.insert("location".to_string(), json!(r.location));
        p.insert("converged".to_string(), json!(r.converged));
        p.insert("on_margin".to_string(), json!(r.on_margin));
        p.insert("condition".to_string(), json!(r.condition));
        p.insert("unreliable".to_string(), json!(!r.reliable()));
        all_reliable &= r.reliable();
        let mut rec = record_info(
            command,
            p,
            "signed local index at an isolated zero",
            r.index as f64,
            em.elapsed_ms(),
        );
        if !r.reliable() {
            rec.pass = Some(false);
        }
        em.emit(rec);
    }
    all_reliable
}

pub struct ZerosArgs {
    pub section: String,
    pub grid: Option<Vec<usize>>,
    pub tol: f64,
    pub radius: f64,
    pub cap: f64,
}

pub fn zeros(a: &ZerosArgs, em: &mut Emitter) -> Result<()> {
    let base = params(&[
        ("section", json!(a.section)),
        ("tol", json!(a.tol)),
        ("radius", json!(a.radius)),
    ]);
    if a.section == "rotation" {
        let grid = a.grid.clone().unwrap_or_else(|| vec![24, 24]);
        let caps = sphere_rotation_caps()?;
        let mut total = 0.0;
        let mut reliable = true;
        let mut rows = Vec::new();
        for field in &caps {
            let records = find_zeros(field, &grid, a.tol)?;
            reliable &= emit_zero_records("zeros", &base, &records, em);
            total += records.iter().map(|r| r.index as f64).sum::<f64>();
            rows.extend(zero_rows(&records));
        }
        em.csv("u,v,index,residual,converged,on_margin", rows);
        let integral = characteristic_number(
            &model_by_name("s2", a.radius, a.cap)?,
            "e",
            &[512, 1024],
        )?;
        let mut rec = record_against(
            "zeros",
            base,
            "signed zero count of the rotation field minus the euler integral",
            total,
            integral,
            1e-3,
            "curvature integral route",
            em.elapsed_ms(),
        );
        if !reliable {
            rec.pass = Some(false);
        }
        em.emit(rec);
        return Ok(());
    }
    if let Some(rest) = a.section.strip_prefix("roots-") {
        let d: u32 = rest.parse().map_err(|_| charlab::Error::UnknownName {
            kind: "section",
            name: a.section.clone(),
        })?;
        if d == 0 || d > 6 {
            return Err(charlab::Error::BadConfig(format!(
                "root section degree {d} must be between 1 and 6"
            ))
            .into());
        }
        let grid = a.grid.clone().unwrap_or_else(|| vec![96, 96]);
        let section = line_roots_section(d, a.radius)?;
        let records = find_zeros(&section, &grid, a.tol)?;
        let reliable = emit_zero_records("zeros", &base, &records, em);
        em.csv(
            "r,theta,index,residual,converged,on_margin",
            zero_rows(&records),
        );
        let name = format!("o{d}");
        let builder = model_builder(&name, a.cap);
        let integral =
            characteristic_number_extrapolated(&builder, "c1", a.radius, &[3000, 8])?;
        let total: f64 = records.iter().map(|r| r.index as f64).sum();
        let mut rec = record_against(
            "zeros",
            base,
            "signed zero count of the root section minus the degree integral",
            total,
            integral,
            1e-2,
            "curvature integral route",
            em.elapsed_ms(),
        );
        if !reliable {
            rec.pass = Some(false);
        }
        em.emit(rec);
        return Ok(());
    }
    Err(charlab::Error::UnknownName {
        kind: "section",
        name: a.section.clone(),
    }
    .into())
}

pub struct DualArgs {
    pub example: String,
    pub grid: Option<Vec<usize>>,
    pub radius: f64,
    pub cap: f64,
}

pub fn dual_check(a: &DualArgs, em: &mut Emitter) -> Result<()> {
    let base = params(&[
        ("example", json!(a.example)),
        ("radius", json!(a.radius)),
        ("cap", json!(a.cap)),
    ]);
    let check = match a.example.as_str() {
        "unit-pairing" => {
            let model = line_bundle(2, a.radius)?;
            let xi = FormField::from_fn(model.chart().clone(), |_| Form::one(2));
            let section = line_roots_section(2, a.radius)?;
            let records = find_zeros(&section, &[96, 96], 1e-7)?;
            let grid = a.grid.clone().unwrap_or_else(|| vec![3000, 8]);
            poincare_dual_check(&model, 1, &xi, &LocusSide::Points(records), &grid)?
        }
        "area-pairing" => {
            let model = mixed_line_model(a.radius, a.cap)?;
            let xi = sphere_area_form(a.radius, a.cap)?;
            let (map, correction) = point_sphere_locus(a.cap)?;
            let locus = LocusSide::Param {
                map,
                cells: vec![64, 16],
                correction,
            };
            let grid = a.grid.clone().unwrap_or_else(|| vec![256, 6, 32, 6]);
            poincare_dual_check(&model, 1, &xi, &locus, &grid)?
        }
        other => {
            return Err(charlab::Error::UnknownName {
                kind: "pairing example",
                name: other.to_string(),
            }
            .into());
        }
    };
    em.emit(record_info(
        "dual-check",
        base.clone(),
        "chart integral of class wedge test form",
        check.lhs,
        em.elapsed_ms(),
    ));
    em.emit(record_info(
        "dual-check",
        base.clone(),
        "test form evaluated on the locus",
        check.rhs,
        em.elapsed_ms(),
    ));
    em.emit(record_against(
        "dual-check",
        base,
        "pairing discrepancy between chart and locus routes",
        check.lhs,
        check.rhs,
        2e-2,
        "locus evaluation route",
        em.elapsed_ms(),
    ));
    Ok(())
}

pub struct IntersectArgs {
    pub degree: u32,
    pub radius: f64,
    pub grid: Option<Vec<usize>>,
    pub slice: (f64, f64),
    pub alt_slice: (f64, f64),
}

pub fn intersect(a: &IntersectArgs, em: &mut Emitter) -> Result<()> {
    let d = a.degree;
    if d == 0 || d > 4 {
        return Err(charlab::Error::BadConfig(format!(
            "intersection degree {d} must be between 1 and 4"
        ))
        .into());
    }
    let grid = a.grid.clone().unwrap_or_else(|| vec![96, 96]);
    let base = params(&[
        ("degree", json!(d)),
        ("radius", json!(a.radius)),
        ("grid", json!(grid)),
        ("slice", json!([a.slice.0, a.slice.1])),
        ("alt_slice", json!([a.alt_slice.0, a.alt_slice.1])),
    ]);
    let section = product_root_section(d, a.radius)?;

    let slice = slice_embedding(a.radius, a.slice, true)?;
    let counted = slice_zero_count(&section, &slice, &grid, 1e-7)?;
    em.csv(
        "r,theta,index,residual,converged,on_margin",
        zero_rows(&counted.records),
    );
    let builder = |r: f64| line_bundle(d as i64, r);
    let integral = characteristic_number_extrapolated(&builder, "c1", a.radius, &[3000, 8])?;
    em.emit(record_against(
        "intersect",
        base.clone(),
        "signed count on the slice minus the restricted degree integral",
        counted.count,
        integral,
        1e-2,
        "curvature integral of the restricted bundle",
        em.elapsed_ms(),
    ));
    em.emit(record_against(
        "intersect",
        base.clone(),
        "signed count on the slice",
        counted.count,
        d as f64,
        0.0,
        "root count of the section",
        em.elapsed_ms(),
    ));

    let moved = slice_embedding(a.radius, a.alt_slice, true)?;
    let counted_moved = slice_zero_count(&section, &moved, &grid, 1e-7)?;
    em.emit(record_against(
        "intersect",
        base.clone(),
        "count difference between two parallel slices",
        counted.count - counted_moved.count,
        0.0,
        0.0,
        "deformation invariance of the count",
        em.elapsed_ms(),
    ));

    // A slice along the other factor misses the zero set entirely, and the
    // restricted curvature vanishes identically, so both routes give zero.
    let transverse = slice_embedding(a.radius, a.slice, false)?;
    let restricted = section.restrict(&transverse)?;
    let records = find_zeros(&restricted, &grid, 1e-7)?;
    let count: f64 = records.iter().map(|r| r.index as f64).sum();
    let pulled = pullback_model(
        &transverse,
        &charlab::loci::pulled_line_model(d as i64, a.radius, true)?,
        "flat_slice",
    )?;
    let flat_integral = characteristic_number(&pulled, "c1", &[64, 8])?;
    em.emit(record_against(
        "intersect",
        base.clone(),
        "signed count on a slice of the complementary class",
        count,
        flat_integral,
        1e-12,
        "curvature integral of the restricted bundle",
        em.elapsed_ms(),
    ));
    Ok(())
}

pub struct DegeneracyArgs {
    pub example: String,
    pub cells: Option<Vec<usize>>,
    pub tau: f64,
    pub radius: f64,
}

fn transverse_pair() -> Result<Vec<SectionField>> {
    use charlab::exterior::Complex64;
    use charlab::fields::Chart;
    let chart = Chart::new(
        "c2_box",
        &[
            ("x1", -1.0, 1.0, false),
            ("y1", -1.0, 1.0, false),
            ("x2", -1.0, 1.0, false),
            ("y2", -1.0, 1.0, false),
        ],
    )?;
    let z = |p: &[f64], k: usize| Complex64::new(p[2 * k], p[2 * k + 1]);
    let s1 = SectionField::complex(chart.clone(), 2, |_| {
        vec![Complex64::new(1.0, 0.0), Complex64::new(0.0, 0.0)]
    });
    let a = Complex64::new(0.4, 0.2);
    let b = Complex64::new(0.1, -0.15);
    let s2 = SectionField::complex(chart, 2, move |p| {
        vec![z(p, 1) * Complex64::new(0.3, 0.1), z(p, 0) - a * z(p, 1) - b]
    });
    Ok(vec![s1, s2])
}

pub fn degeneracy(a: &DegeneracyArgs, em: &mut Emitter) -> Result<()> {
    let base = params(&[
        ("example", json!(a.example)),
        ("tau", json!(a.tau)),
        ("radius", json!(a.radius)),
    ]);
    match a.example.as_str() {
        "transverse" => {
            let tuple = transverse_pair()?;
            let cells = a.cells.clone().unwrap_or_else(|| vec![10, 10, 10, 10]);
            let sample = degeneracy_scan(&tuple, 2, &cells, a.tau)?;
            let rows: Vec<String> = sample
                .points
                .iter()
                .map(|p| {
                    let coords: Vec<String> =
                        p.location.iter().map(|v| v.to_string()).collect();
                    format!("{},{}", coords.join(","), p.sigma_min)
                })
                .collect();
            em.csv("x1,y1,x2,y2,sigma_min", rows);
            em.emit(record_info(
                "degeneracy",
                base.clone(),
                "locus points recovered by the scan",
                sample.points.len() as f64,
                em.elapsed_ms(),
            ));
            let dim = fitted_dimension(&sample.points, 12)?;
            em.emit(record_against(
                "degeneracy",
                base.clone(),
                "fitted local dimension of the locus cloud",
                dim,
                2.0,
                0.2,
                "rank drop of one in a rank-two tuple",
                em.elapsed_ms(),
            ));
            let report = genericity_check(&tuple, 2, &sample)?;
            em.emit(record_against(
                "degeneracy",
                base,
                "fraction of sampled points passing the transversality gate",
                report
                    .per_point
                    .iter()
                    .filter(|p| p.pass)
                    .count() as f64
                    / report.per_point.len().max(1) as f64,
                1.0,
                0.0,
                "differential of the minors at the locus",
                em.elapsed_ms(),
            ));
        }
        "pinned" => {
            let section = pinned_first_section(a.radius)?;
            let cells = a.cells.clone().unwrap_or_else(|| vec![12, 6, 12, 6]);
            let sample = degeneracy_scan(&[section], 1, &cells, a.tau)?;
            em.emit(record_against(
                "degeneracy",
                base.clone(),
                "zero locus points of the pinned section",
                sample.points.len() as f64,
                0.0,
                0.0,
                "first component pinned to one",
                em.elapsed_ms(),
            ));
            em.emit(record_against(
                "degeneracy",
                base,
                "non-generic flood flag of the scan",
                sample.non_generic as u8 as f64,
                0.0,
                0.0,
                "capture fraction below one half",
                em.elapsed_ms(),
            ));
        }
        other => {
            return Err(charlab::Error::UnknownName {
                kind: "degeneracy example",
                name: other.to_string(),
            }
            .into());
        }
    }
    Ok(())
}

pub struct ConsistencyArgs {
    pub check: String,
    pub radius: f64,
}

pub fn consistency(a: &ConsistencyArgs, em: &mut Emitter) -> Result<()> {
    let base = params(&[("check", json!(a.check)), ("radius", json!(a.radius))]);
    match a.check.as_str() {
        "degree-split" => {
            let model = product_line_model(1, 1, a.radius)?;
            let lhs = characteristic_number(&model, "c1^2", &[160, 4, 160, 4])?;
            let curve = charlab::loci::degree_sum_curve(a.radius, 2.9)?;
            let restricted = pullback_model(&curve, &model, "sum_on_curve")?;
            let rhs = characteristic_number(&restricted, "c1", &[400, 8])?;
            em.emit(record_info(
                "consistency",
                base.clone(),
                "chern square of the split bundle over the product",
                lhs,
                em.elapsed_ms(),
            ));
            em.emit(record_info(
                "consistency",
                base.clone(),
                "degree of the split bundle on a bidegree (1,1) curve",
                rhs,
                em.elapsed_ms(),
            ));
            em.emit(record_against(
                "consistency",
                base,
                "chern square route minus curve degree route",
                lhs,
                rhs,
                5e-2,
                "restriction to a curve through the section quotient",
                em.elapsed_ms(),
            ));
        }
        "pontryagin-count" => {
            let model = realify_model(&product_line_model(1, 1, a.radius)?)?;
            let lhs = characteristic_number(&model, "p1", &[80, 4, 80, 4])?;
            let section = pinned_first_section(a.radius)?;
            let sample = degeneracy_scan(&[section], 1, &[12, 6, 12, 6], 1e-6)?;
            let rhs = sample.points.len() as f64;
            em.emit(record_info(
                "consistency",
                base.clone(),
                "pontryagin number of the realified split bundle",
                lhs,
                em.elapsed_ms(),
            ));
            em.emit(record_info(
                "consistency",
                base.clone(),
                "signed count over the empty degeneracy locus",
                rhs,
                em.elapsed_ms(),
            ));
            em.emit(record_against(
                "consistency",
                base,
                "pontryagin route minus locus count route",
                lhs,
                rhs,
                5e-2,
                "degeneracy scan of a pinned section",
                em.elapsed_ms(),
            ));
        }
        other => {
            return Err(charlab::Error::UnknownName {
                kind: "consistency check",
                name: other.to_string(),
            }
            .into());
        }
    }
    Ok(())
}
