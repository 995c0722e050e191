//! Geometric commands: characteristic numbers of registry models, circle
//! bundle transgression residuals, and the compactly supported fiber
//! class.

use anyhow::Result;
use serde_json::json;

use charlab::fields::DiffScheme;
use charlab::models::{
    characteristic_number, characteristic_number_extrapolated, class_form_field, model_builder,
    model_by_name, parse_monomial,
};
use charlab::transgression::{
    flat_point_model, sphere_boundary_euler, sphere_bundle, thom_form, RadialProfile,
};

use crate::record::{params, record_against, record_info, Emitter};

/// Reference value and comparison tolerance for a registry model and class
/// monomial, where one is known in closed form.
fn expected_number(model: &str, class: &str, radius: f64) -> Option<(f64, f64, &'static str)> {
    let _ = radius;
    match (model, class) {
        ("s2", "e") => Some((2.0, 1e-3, "sphere euler number")),
        ("torus", "e") => Some((0.0, 1e-9, "flat torus euler number")),
        ("cp1", "c1") => Some((2.0, 1e-2, "tangent degree of the projective line")),
        ("cp2", "c2") => Some((3.0, 5e-2, "projective plane euler number")),
        ("cp2", "c1^2") => Some((9.0, 1e-1, "projective plane chern square")),
        ("cp2", "p1") => Some((3.0, 1e-1, "projective plane pontryagin number")),
        _ => {
            if let Some(rest) = model.strip_prefix('o') {
                if class == "c1" {
                    if let Ok(d) = rest.parse::<i64>() {
                        return Some((d as f64, 1e-2, "line bundle degree"));
                    }
                }
            }
            None
        }
    }
}

fn default_grid(model: &str) -> Vec<usize> {
    match model {
        "s2" => vec![512, 1024],
        "torus" => vec![8, 8],
        "cp2" => vec![120, 4, 40, 4],
        _ => vec![3000, 8],
    }
}

fn default_radius(model: &str) -> f64 {
    if model == "cp2" {
        8.0
    } else {
        20.0
    }
}

pub struct CharnumArgs {
    pub model: String,
    pub class: String,
    pub grid: Option<Vec<usize>>,
    pub radius: Option<f64>,
    pub cap: f64,
    pub raw: bool,
}

pub fn charnum(a: &CharnumArgs, em: &mut Emitter) -> Result<()> {
    parse_monomial(&a.class)?;
    let radius = a.radius.unwrap_or_else(|| default_radius(&a.model));
    let grid = a.grid.clone().unwrap_or_else(|| default_grid(&a.model));
    let model = model_by_name(&a.model, radius, a.cap)?;
    let extrapolated = model.truncation.is_some() && !a.raw;
    let value = if extrapolated {
        let builder = model_builder(&a.model, a.cap);
        characteristic_number_extrapolated(&builder, &a.class, radius, &grid)?
    } else {
        characteristic_number(&model, &a.class, &grid)?
    };
    let p = params(&[
        ("model", json!(a.model)),
        ("class", json!(a.class)),
        ("grid", json!(grid)),
        ("radius", json!(radius)),
        ("cap", json!(a.cap)),
        ("extrapolated", json!(extrapolated)),
    ]);
    let quantity = format!("integral of {} over the {} chart", a.class, model.name);
    match expected_number(&a.model, &a.class, radius) {
        Some((expected, tol, source)) => em.emit(record_against(
            "charnum",
            p,
            &quantity,
            value,
            expected,
            tol,
            source,
            em.elapsed_ms(),
        )),
        None => em.emit(record_info("charnum", p, &quantity, value, em.elapsed_ms())),
    }

    let factors = parse_monomial(&a.class)?;
    let field = class_form_field(&model, &factors)?;
    let chart = model.chart().clone();
    let dim = chart.dim();
    let mid: Vec<f64> = (0..dim)
        .map(|k| {
            let ax = chart.axis(k);
            0.5 * (ax.lo + ax.hi)
        })
        .collect();
    let samples = 200;
    let ax0 = chart.axis(0);
    let rows: Vec<String> = (0..samples)
        .map(|i| {
            let x0 = ax0.lo + (i as f64 + 0.5) * (ax0.hi - ax0.lo) / samples as f64;
            let mut point = mid.clone();
            point[0] = x0;
            let density = field.eval(&point).top_coefficient();
            format!("{x0},{density}")
        })
        .collect();
    em.csv(
        &format!("{},integrand_density", ax0.name),
        rows,
    );
    Ok(())
}

pub struct TransgressionArgs {
    pub model: String,
    pub check: bool,
    pub step: Option<f64>,
    pub grid: Option<usize>,
    pub quad: usize,
    pub cap: f64,
}

pub fn transgression(a: &TransgressionArgs, em: &mut Emitter) -> Result<()> {
    let (model, residual_tol, default_step) = match a.model.as_str() {
        "ts2" => (model_by_name("s2", 20.0, a.cap)?, 1e-4, 1e-3),
        "flat" => (flat_point_model()?, 1e-10, 1e-4),
        other => {
            return Err(charlab::Error::UnknownName {
                kind: "transgression model",
                name: other.to_string(),
            }
            .into());
        }
    };
    let step = a.step.unwrap_or(default_step);
    let grid_per_axis = a.grid.unwrap_or(12);
    let bundle = sphere_bundle(&model)?;
    let scheme = DiffScheme {
        order: 4,
        rel_step: step,
    };
    let grid = vec![grid_per_axis; bundle.total().dim()];
    let result = bundle.transgression_eta(a.quad, &grid, scheme)?;
    let mean = result.fiber_integrals.iter().sum::<f64>() / result.fiber_integrals.len() as f64;
    let p = params(&[
        ("model", json!(a.model)),
        ("step", json!(step)),
        ("grid", json!(grid)),
        ("quad", json!(a.quad)),
        ("cap", json!(a.cap)),
    ]);
    if a.check {
        em.emit(record_against(
            "transgression",
            p.clone(),
            "max residual of lifted euler form + d eta",
            result.residual,
            0.0,
            residual_tol,
            "exactness of the transgressed euler form",
            em.elapsed_ms(),
        ));
        em.emit(record_against(
            "transgression",
            p.clone(),
            "mean fiber integral of eta",
            mean,
            1.0,
            1e-3,
            "unit fiber normalization",
            em.elapsed_ms(),
        ));
        em.emit(record_against(
            "transgression",
            p.clone(),
            "spread of fiber integrals of eta",
            result.fiber_spread(),
            0.0,
            1e-3,
            "unit fiber normalization",
            em.elapsed_ms(),
        ));
    } else {
        em.emit(record_info(
            "transgression",
            p.clone(),
            "max residual of lifted euler form + d eta",
            result.residual,
            em.elapsed_ms(),
        ));
        em.emit(record_info(
            "transgression",
            p.clone(),
            "mean fiber integral of eta",
            mean,
            em.elapsed_ms(),
        ));
    }
    if a.model == "ts2" {
        let boundary = sphere_boundary_euler(a.cap, 64)?;
        if a.check {
            em.emit(record_against(
                "transgression",
                p,
                "boundary circle route to the euler number",
                boundary,
                2.0,
                1e-2,
                "sphere euler number",
                em.elapsed_ms(),
            ));
        } else {
            em.emit(record_info(
                "transgression",
                p,
                "boundary circle route to the euler number",
                boundary,
                em.elapsed_ms(),
            ));
        }
    }
    let rows: Vec<String> = result
        .fiber_integrals
        .iter()
        .enumerate()
        .map(|(i, v)| format!("{i},{v}"))
        .collect();
    em.csv("base_sample,fiber_integral", rows);
    Ok(())
}

pub struct ThomArgs {
    pub check: bool,
    pub quad: usize,
    pub step: f64,
}

pub fn thom(a: &ThomArgs, em: &mut Emitter) -> Result<()> {
    let scheme = DiffScheme {
        order: 4,
        rel_step: a.step,
    };
    let profile = RadialProfile::quintic();
    let point_bundle = sphere_bundle(&flat_point_model()?)?;
    let class = thom_form(&point_bundle, &profile, a.quad, scheme)?;
    let mass = class.fiber_integral(&[], &[200, 16])?;
    let p = params(&[("quad", json!(a.quad)), ("step", json!(a.step))]);

    let eval_at = |r: f64| {
        class
            .form
            .eval(&[r, std::f64::consts::PI / 3.0])
            .max_magnitude()
    };
    let far = eval_at(2.4).max(eval_at(0.35));
    let mid = eval_at(1.5);

    let torus_bundle = sphere_bundle(&charlab::models::torus_tangent()?)?;
    let torus_class = thom_form(&torus_bundle, &profile, a.quad, scheme)?;
    let closedness = torus_class.closedness_residual(&[3, 3, 6, 6], scheme)?;

    if a.check {
        em.emit(record_against(
            "thom",
            p.clone(),
            "fiber integral over the disk",
            mass,
            1.0,
            1e-2,
            "unit fiber normalization",
            em.elapsed_ms(),
        ));
        em.emit(record_against(
            "thom",
            p.clone(),
            "magnitude outside the support annulus",
            far,
            0.0,
            1e-9,
            "compact support of the profile",
            em.elapsed_ms(),
        ));
        // On a point base the class reduces to rho'(r)/2pi dr^dpsi, so the
        // magnitude at r = 1.5 is the quintic slope there over 2pi.
        let mid_expected = 30.0 * 0.25 * 0.25 / std::f64::consts::TAU;
        em.emit(record_against(
            "thom",
            p.clone(),
            "magnitude at the middle of the support annulus",
            mid,
            mid_expected,
            1e-6,
            "radial profile slope",
            em.elapsed_ms(),
        ));
        em.emit(record_against(
            "thom",
            p.clone(),
            "closedness residual over a flat base",
            closedness,
            0.0,
            1e-6,
            "exterior derivative of the fiber class",
            em.elapsed_ms(),
        ));
    } else {
        em.emit(record_info(
            "thom",
            p.clone(),
            "fiber integral over the disk",
            mass,
            em.elapsed_ms(),
        ));
        em.emit(record_info(
            "thom",
            p.clone(),
            "closedness residual over a flat base",
            closedness,
            em.elapsed_ms(),
        ));
    }

    let rows: Vec<String> = (0..200)
        .map(|i| {
            let r = 2.5 * (i as f64 + 0.5) / 200.0;
            format!("{r},{}", eval_at(r))
        })
        .collect();
    em.csv("fiber_r,form_magnitude", rows);
    Ok(())
}
