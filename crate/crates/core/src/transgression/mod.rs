//! Circle bundles of oriented rank-2 real models: the fiberwise adapted
//! frame, the connection interpolation whose endpoint kills the euler
//! density upstairs, the transgression primitive eta with
//! p*e(curvature) = -d(eta), and the compactly supported fiber class
//! assembled from eta and a radial profile.

use std::f64::consts::{PI, TAU};
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::exterior::{Form, FormMatrix};
use crate::fields::{
    curvature_from_connection, exterior_derivative, integrate_top, matrix_exterior_derivative,
    parameter_integral, pullback, Chart, DiffScheme, FormField, MatrixField, SmoothMap,
};
use crate::models::{class_form_field, surfaces, BundleModel, ClassName, ConnectionRep, CurvatureRep};

/// Unit-circle bundle of an oriented rank-2 real model. The total chart is
/// the base chart extended by one periodic fiber-angle axis; the adapted
/// frame rotates the model frame so its second leg is the tautological
/// unit section.
pub struct SphereBundle {
    base: Chart,
    total: Chart,
    base_connection: MatrixField<f64>,
    base_euler: FormField<f64>,
}

/// Fiber-angle axis name on the total chart.
pub const FIBER_AXIS: &str = "psi";

/// Transgression output: the primitive eta, the worst sampled residual of
/// p*e + d(eta), and per-base-point fiber integrals of eta.
pub struct TransgressionResult {
    pub eta: FormField<f64>,
    pub residual: f64,
    pub fiber_integrals: Vec<f64>,
}

impl TransgressionResult {
    /// Largest deviation of a fiber integral from the mean.
    pub fn fiber_spread(&self) -> f64 {
        let n = self.fiber_integrals.len().max(1) as f64;
        let mean = self.fiber_integrals.iter().sum::<f64>() / n;
        self.fiber_integrals
            .iter()
            .map(|v| (v - mean).abs())
            .fold(0.0, f64::max)
    }
}

pub fn sphere_bundle(model: &BundleModel) -> Result<SphereBundle> {
    let curvature = match &model.curvature {
        CurvatureRep::Real(m) if model.rank == 2 => m,
        _ => {
            return Err(Error::Unsupported(
                "circle-bundle construction needs an oriented real rank-2 model".to_string(),
            ))
        }
    };
    let connection = match &model.connection {
        Some(ConnectionRep::Real(m)) => m.clone(),
        _ => {
            return Err(Error::Unsupported(
                "circle-bundle construction needs the model's metric connection".to_string(),
            ))
        }
    };
    let base = curvature.chart().clone();
    let center = base.center();
    let skew_defect = connection
        .eval(&center)
        .add(&connection.eval(&center).transpose())
        .max_magnitude();
    if skew_defect > 1e-9 {
        return Err(Error::SymmetryViolation(format!(
            "connection is not so(2)-valued, defect {skew_defect:.3e}"
        )));
    }
    let mut axes: Vec<(String, f64, f64, bool)> = base
        .axes()
        .iter()
        .map(|a| (a.name.clone(), a.lo, a.hi, a.periodic))
        .collect();
    axes.push((FIBER_AXIS.to_string(), 0.0, TAU, true));
    let borrowed: Vec<(&str, f64, f64, bool)> = axes
        .iter()
        .map(|(n, lo, hi, p)| (n.as_str(), *lo, *hi, *p))
        .collect();
    let total = Chart::new(&format!("{}_circle_bundle", base.name()), &borrowed)?;
    let base_euler = class_form_field(model, &[(ClassName::Euler, 1)])?;
    Ok(SphereBundle {
        base,
        total,
        base_connection: connection,
        base_euler,
    })
}

impl SphereBundle {
    pub fn base(&self) -> &Chart {
        &self.base
    }

    pub fn total(&self) -> &Chart {
        &self.total
    }

    /// Bundle projection: drops the fiber-angle coordinate.
    pub fn projection(&self) -> SmoothMap {
        let m = self.base.dim();
        SmoothMap::new(self.total.clone(), m, move |x| x[..m].to_vec()).with_jacobian(move |_| {
            let mut j = vec![vec![0.0; m + 1]; m];
            for (i, row) in j.iter_mut().enumerate() {
                row[i] = 1.0;
            }
            j
        })
    }

    fn lift_form(&self, f: &FormField<f64>) -> FormField<f64> {
        let m = self.base.dim();
        let f = f.clone();
        FormField::from_fn(self.total.clone(), move |x| {
            f.eval(&x[..m]).extend_dim(m + 1)
        })
    }

    fn lift_matrix(&self, f: &MatrixField<f64>) -> MatrixField<f64> {
        let m = self.base.dim();
        let f = f.clone();
        MatrixField::from_fn(self.total.clone(), f.rows(), f.cols(), move |x| {
            f.eval(&x[..m]).extend_dim(m + 1)
        })
    }

    /// Euler density of the base model, lifted to the total chart.
    pub fn lifted_euler(&self) -> FormField<f64> {
        self.lift_form(&self.base_euler)
    }

    /// Adapted orthonormal frame as rows of a rotation matrix: the second
    /// row is the tautological unit section at fiber angle psi, the first
    /// row its quarter-turn keeping the frame positively oriented.
    pub fn adapted_frame(&self) -> MatrixField<f64> {
        let dim = self.total.dim();
        MatrixField::from_fn(self.total.clone(), 2, 2, move |x| {
            let psi = x[dim - 1];
            let mut g = FormMatrix::zero(dim, 2, 2);
            *g.entry_mut(0, 0) = Form::constant(dim, psi.sin());
            *g.entry_mut(0, 1) = Form::constant(dim, -psi.cos());
            *g.entry_mut(1, 0) = Form::constant(dim, psi.cos());
            *g.entry_mut(1, 1) = Form::constant(dim, psi.sin());
            g
        })
    }

    /// Connection matrix of the pulled-back connection expressed in the
    /// adapted frame: d(g) g^T + g (lifted omega) g^T for the frame
    /// rotation g.
    pub fn pulled_connection(&self, scheme: DiffScheme) -> Result<MatrixField<f64>> {
        let g = self.adapted_frame();
        let gt = MatrixField::from_fn(self.total.clone(), 2, 2, {
            let g = g.clone();
            move |x| g.eval(x).transpose()
        });
        let dg = matrix_exterior_derivative(&g, scheme)?;
        let lifted = self.lift_matrix(&self.base_connection);
        Ok(dg.wedge_mul(&gt).add(&g.wedge_mul(&lifted).wedge_mul(&gt)))
    }

    /// The modified connection annihilating the tautological section,
    /// paired with the full pulled-back connection in the adapted frame.
    /// For rank 2 the modified matrix is identically zero in that frame;
    /// the difference of the pair drives the transgression integrand.
    pub fn modified_connection(
        &self,
        scheme: DiffScheme,
    ) -> Result<(MatrixField<f64>, MatrixField<f64>)> {
        let pulled = self.pulled_connection(scheme)?;
        let dim = self.total.dim();
        let zero = MatrixField::from_fn(self.total.clone(), 2, 2, move |_| {
            FormMatrix::zero(dim, 2, 2)
        });
        Ok((zero, pulled))
    }

    /// Curvature of the straight-line interpolation between the pulled-back
    /// and modified connections; t = 0 recovers the lifted base curvature,
    /// t = 1 has vanishing pfaffian.
    pub fn interpolated_curvature(&self, t: f64, scheme: DiffScheme) -> Result<MatrixField<f64>> {
        if !(0.0..=1.0).contains(&t) {
            return Err(Error::BadConfig(format!(
                "interpolation parameter {t} outside [0, 1]"
            )));
        }
        let (modified, pulled) = self.modified_connection(scheme)?;
        let omega_t = pulled.add(&modified.sub(&pulled).scale_f64(t));
        curvature_from_connection(&omega_t, scheme)
    }

    /// The transgression primitive alone: minus one over two pi times the
    /// t-integral of the single pfaffian slot of (modified - pulled).
    pub fn eta_form(&self, n_quad: usize, scheme: DiffScheme) -> Result<FormField<f64>> {
        if n_quad < 1 {
            return Err(Error::BadConfig("quadrature needs at least one node".into()));
        }
        let (modified, pulled) = self.modified_connection(scheme)?;
        let difference = modified.sub(&pulled);
        let chart = self.total.clone();
        let dim = chart.dim();
        let slot = Arc::new(move |x: &[f64]| difference.eval(x).entry(0, 1).clone());
        Ok(FormField::from_fn(chart, move |x| {
            let slot = slot.clone();
            let x = x.to_vec();
            parameter_integral(move |_t| slot(&x), 0.0, 1.0, n_quad)
                .unwrap_or_else(|_| Form::zero(dim))
                .scale_f64(-1.0 / TAU)
        }))
    }

    /// Full transgression run: eta, the worst p*e + d(eta) residual over
    /// the given total-chart grid, and fiber integrals of eta over the
    /// circle above every point of a small base sample grid.
    pub fn transgression_eta(
        &self,
        n_quad: usize,
        grid: &[usize],
        scheme: DiffScheme,
    ) -> Result<TransgressionResult> {
        let eta = self.eta_form(n_quad, scheme)?;
        let d_eta = exterior_derivative(&eta, scheme)?;
        let total_residual = self.lifted_euler().add(&d_eta);
        let mut residual: f64 = 0.0;
        for node in self.total.midpoint_grid(grid)? {
            residual = residual.max(total_residual.eval(&node).max_magnitude());
        }
        let base_samples: Vec<usize> = vec![3; self.base.dim()];
        let mut fiber_integrals = Vec::new();
        for point in self.base.midpoint_grid(&base_samples)? {
            fiber_integrals.push(self.fiber_integral(&eta, &point, 32)?);
        }
        Ok(TransgressionResult {
            eta,
            residual,
            fiber_integrals,
        })
    }

    /// Integral of a one-form field over the fiber circle above a base
    /// point.
    pub fn fiber_integral(
        &self,
        field: &FormField<f64>,
        base_point: &[f64],
        cells: usize,
    ) -> Result<f64> {
        if base_point.len() != self.base.dim() {
            return Err(Error::DimensionMismatch(base_point.len(), self.base.dim()));
        }
        let circle = Chart::new("fiber_circle", &[(FIBER_AXIS, 0.0, TAU, true)])?;
        let m = self.base.dim();
        let point = base_point.to_vec();
        let include = SmoothMap::new(circle, m + 1, move |psi| {
            let mut y = point.clone();
            y.push(psi[0]);
            y
        })
        .with_jacobian(move |_| {
            let mut j = vec![vec![0.0]; m + 1];
            j[m][0] = 1.0;
            j
        });
        integrate_top(&pullback(&include, field)?, &[cells])
    }
}

/// Total euler number of the band model of the round sphere recovered from
/// the two boundary circle integrals of the section pullback of eta plus
/// the analytic cap corrections. The section is induced by the rotational
/// field: the unit field sits at constant fiber angle pi/2.
pub fn sphere_boundary_euler(cap: f64, circle_cells: usize) -> Result<f64> {
    let model = surfaces::sphere_tangent(cap)?;
    let bundle = sphere_bundle(&model)?;
    let eta = bundle.eta_form(8, DiffScheme::default())?;
    let circle_at = |theta: f64| -> Result<f64> {
        let circle = Chart::new("boundary_circle", &[("phi", 0.0, TAU, true)])?;
        let section = SmoothMap::new(circle, 3, move |p| vec![theta, p[0], PI / 2.0])
            .with_jacobian(|_| vec![vec![0.0], vec![1.0], vec![0.0]]);
        integrate_top(&pullback(&section, &eta)?, &[circle_cells])
    };
    let near_north = circle_at(cap)?;
    let near_south = circle_at(PI - cap)?;
    let cap_corrections = 2.0 * (1.0 - cap.cos());
    Ok(near_north - near_south + cap_corrections)
}

/// Radial profile for the compactly supported fiber class: -1 on [0, 1],
/// 0 from 2 outward, smooth and monotone in between.
#[derive(Clone)]
pub struct RadialProfile {
    eval: Arc<dyn Fn(f64) -> f64 + Send + Sync>,
}

impl RadialProfile {
    /// Default profile: quintic smoothstep ramp between the plateaus.
    pub fn quintic() -> Self {
        RadialProfile {
            eval: Arc::new(|r| {
                let u = (r - 1.0).clamp(0.0, 1.0);
                -1.0 + u * u * u * (10.0 + u * (-15.0 + 6.0 * u))
            }),
        }
    }

    /// Wraps a custom profile; `validate` gates it before use.
    pub fn from_fn(f: impl Fn(f64) -> f64 + Send + Sync + 'static) -> Self {
        RadialProfile { eval: Arc::new(f) }
    }

    pub fn value(&self, r: f64) -> f64 {
        (self.eval)(r)
    }

    pub fn derivative(&self, r: f64) -> f64 {
        let h = 1e-4;
        let f = &self.eval;
        (8.0 * (f(r + h) - f(r - h)) - (f(r + 2.0 * h) - f(r - 2.0 * h))) / (12.0 * h)
    }

    pub fn validate(&self) -> Result<()> {
        for k in 0..=20 {
            let r = k as f64 * 0.05;
            if (self.value(r) + 1.0).abs() > 1e-9 {
                return Err(Error::BadConfig(format!(
                    "radial profile must be -1 at radius {r}, got {}",
                    self.value(r)
                )));
            }
        }
        for k in 0..=20 {
            let r = 2.0 + k as f64 * 0.1;
            if self.value(r).abs() > 1e-9 {
                return Err(Error::BadConfig(format!(
                    "radial profile must vanish at radius {r}, got {}",
                    self.value(r)
                )));
            }
        }
        let mut prev = self.value(1.0);
        for k in 1..=40 {
            let r = 1.0 + k as f64 * 0.025;
            let v = self.value(r);
            if v < prev - 1e-12 {
                return Err(Error::BadConfig(format!(
                    "radial profile must be monotone on [1, 2], drops at radius {r}"
                )));
            }
            prev = v;
        }
        Ok(())
    }
}

/// Compactly supported fiber class on the disk-bundle chart: base axes
/// plus fiber polar axes, with the form
/// d(profile) ^ (angle pullback of eta) + profile * (angle pullback of d eta).
pub struct FiberClass {
    pub chart: Chart,
    pub form: FormField<f64>,
    pub outer_radius: f64,
}

/// Fiber polar radius and angle axis names on the disk-bundle chart.
pub const FIBER_RADIUS_AXIS: &str = "fiber_r";

pub fn thom_form(
    bundle: &SphereBundle,
    profile: &RadialProfile,
    n_quad: usize,
    scheme: DiffScheme,
) -> Result<FiberClass> {
    profile.validate()?;
    let outer_radius = 2.5;
    let m = bundle.base.dim();
    let mut axes: Vec<(String, f64, f64, bool)> = bundle
        .base
        .axes()
        .iter()
        .map(|a| (a.name.clone(), a.lo, a.hi, a.periodic))
        .collect();
    axes.push((FIBER_RADIUS_AXIS.to_string(), 0.0, outer_radius, false));
    axes.push((FIBER_AXIS.to_string(), 0.0, TAU, true));
    let borrowed: Vec<(&str, f64, f64, bool)> = axes
        .iter()
        .map(|(n, lo, hi, p)| (n.as_str(), *lo, *hi, *p))
        .collect();
    let disk = Chart::new(&format!("{}_disk_bundle", bundle.base.name()), &borrowed)?;

    // Unit-direction map into the circle bundle: forget the fiber radius.
    let direction = SmoothMap::new(disk.clone(), m + 1, move |x| {
        let mut y = x[..m].to_vec();
        y.push(x[m + 1]);
        y
    })
    .with_jacobian(move |_| {
        let mut j = vec![vec![0.0; m + 2]; m + 1];
        for (i, row) in j.iter_mut().enumerate().take(m) {
            row[i] = 1.0;
        }
        j[m][m + 1] = 1.0;
        j
    });

    let eta = bundle.eta_form(n_quad, scheme)?;
    let d_eta = exterior_derivative(&eta, scheme)?;
    let eta_pulled = pullback(&direction, &eta)?;
    let d_eta_pulled = pullback(&direction, &d_eta)?;

    let dim = disk.dim();
    let profile = profile.clone();
    let form = FormField::from_fn(disk.clone(), move |x| {
        let r = x[m];
        let dr = Form::basis_one_form(dim, m + 1).scale_f64(profile.derivative(r));
        dr.wedge(&eta_pulled.eval(x))
            .add(&d_eta_pulled.eval(x).scale_f64(profile.value(r)))
    });
    Ok(FiberClass {
        chart: disk,
        form,
        outer_radius,
    })
}

impl FiberClass {
    /// Integral over the fiber disk above a base point.
    pub fn fiber_integral(&self, base_point: &[f64], cells: &[usize; 2]) -> Result<f64> {
        let m = self.chart.dim() - 2;
        if base_point.len() != m {
            return Err(Error::DimensionMismatch(base_point.len(), m));
        }
        let fiber = Chart::new(
            "fiber_disk",
            &[
                (FIBER_RADIUS_AXIS, 0.0, self.outer_radius, false),
                (FIBER_AXIS, 0.0, TAU, true),
            ],
        )?;
        let point = base_point.to_vec();
        let include = SmoothMap::new(fiber, m + 2, move |f| {
            let mut y = point.clone();
            y.extend_from_slice(f);
            y
        })
        .with_jacobian(move |_| {
            let mut j = vec![vec![0.0; 2]; m + 2];
            j[m][0] = 1.0;
            j[m + 1][1] = 1.0;
            j
        });
        integrate_top(&pullback(&include, &self.form)?, cells)
    }

    /// Worst coefficient of d(form) over a sample grid.
    pub fn closedness_residual(&self, grid: &[usize], scheme: DiffScheme) -> Result<f64> {
        let d = exterior_derivative(&self.form, scheme)?;
        let mut worst: f64 = 0.0;
        for node in self.chart.midpoint_grid(grid)? {
            worst = worst.max(d.eval(&node).max_magnitude());
        }
        Ok(worst)
    }
}

/// Trivial flat rank-2 model over a single point; its circle bundle is the
/// plain circle and its transgression data are exact.
pub fn flat_point_model() -> Result<BundleModel> {
    let chart = Chart::new("point", &[])?;
    let curvature = MatrixField::from_fn(chart.clone(), 2, 2, |_| FormMatrix::zero(0, 2, 2));
    let connection = MatrixField::from_fn(chart, 2, 2, |_| FormMatrix::zero(0, 2, 2));
    Ok(BundleModel {
        name: "flat_point".to_string(),
        rank: 2,
        curvature: CurvatureRep::Real(curvature),
        connection: Some(ConnectionRep::Real(connection)),
        corrections: Vec::new(),
        truncation: None,
    })
}
