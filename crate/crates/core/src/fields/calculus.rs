//! Exterior derivative by central differences, pullback along smooth maps,
//! and top-degree integration over midpoint grids.

use super::chart::Chart;
use super::field::{FormField, MatrixField};
use crate::error::{Error, Result};
use crate::exterior::{FloatLike, Form, FormMatrix};
use std::sync::Arc;

/// Central-difference scheme. Steps are `rel_step` times the axis extent;
/// order 4 uses the five-point stencil, order 2 the three-point one.
#[derive(Clone, Copy, Debug)]
pub struct DiffScheme {
    pub order: u8,
    pub rel_step: f64,
}

impl Default for DiffScheme {
    fn default() -> Self {
        DiffScheme {
            order: 4,
            rel_step: 1e-3,
        }
    }
}

impl DiffScheme {
    pub fn second_order() -> Self {
        DiffScheme {
            order: 2,
            rel_step: 1e-5,
        }
    }

    fn validate(&self) -> Result<()> {
        if self.order != 2 && self.order != 4 {
            return Err(Error::BadConfig(format!(
                "difference order {} unsupported, use 2 or 4",
                self.order
            )));
        }
        if !(self.rel_step > 0.0) || self.rel_step >= 0.5 {
            return Err(Error::BadConfig(format!(
                "relative step {} out of range",
                self.rel_step
            )));
        }
        Ok(())
    }
}

fn axis_steps(chart: &Chart, scheme: DiffScheme) -> Vec<f64> {
    (0..chart.dim())
        .map(|k| scheme.rel_step * chart.extent(k))
        .collect()
}

fn partial<T, F: Fn(&[f64]) -> T>(
    f: &F,
    x: &[f64],
    axis: usize,
    h: f64,
    order: u8,
    combine: impl Fn(Vec<(T, f64)>) -> T,
) -> T {
    let shift = |d: f64| {
        let mut y = x.to_vec();
        y[axis] += d;
        f(&y)
    };
    match order {
        2 => combine(vec![
            (shift(h), 1.0 / (2.0 * h)),
            (shift(-h), -1.0 / (2.0 * h)),
        ]),
        _ => combine(vec![
            (shift(h), 8.0 / (12.0 * h)),
            (shift(-h), -8.0 / (12.0 * h)),
            (shift(2.0 * h), -1.0 / (12.0 * h)),
            (shift(-2.0 * h), 1.0 / (12.0 * h)),
        ]),
    }
}

fn combine_forms<S: FloatLike>(parts: Vec<(Form<S>, f64)>) -> Form<S> {
    let dim = parts[0].0.dim();
    parts
        .into_iter()
        .fold(Form::zero(dim), |acc, (f, w)| acc.add(&f.scale_f64(w)))
}

fn combine_matrices<S: FloatLike>(parts: Vec<(FormMatrix<S>, f64)>) -> FormMatrix<S> {
    let first = &parts[0].0;
    let zero = FormMatrix::zero(first.dim(), first.rows(), first.cols());
    parts.into_iter().fold(zero, |acc, (m, w)| {
        acc.add(&m.map_entries(|f| f.scale_f64(w)))
    })
}

/// d of a form field: sum over axes of dx_a wedge (partial_a field).
pub fn exterior_derivative<S: FloatLike>(
    field: &FormField<S>,
    scheme: DiffScheme,
) -> Result<FormField<S>> {
    scheme.validate()?;
    let chart = field.chart().clone();
    let steps = axis_steps(&chart, scheme);
    let dim = chart.dim();
    let inner = field.clone();
    Ok(FormField::from_fn(chart, move |x| {
        let mut out = Form::zero(dim);
        for a in 0..dim {
            let df = partial(
                &|y: &[f64]| inner.eval(y),
                x,
                a,
                steps[a],
                scheme.order,
                combine_forms,
            );
            out = out.add(&Form::basis_one_form(dim, a + 1).wedge(&df));
        }
        out
    }))
}

/// d of a matrix field, entrywise, with stencil evaluations shared across
/// entries.
pub fn matrix_exterior_derivative<S: FloatLike>(
    field: &MatrixField<S>,
    scheme: DiffScheme,
) -> Result<MatrixField<S>> {
    scheme.validate()?;
    let chart = field.chart().clone();
    let steps = axis_steps(&chart, scheme);
    let dim = chart.dim();
    let (rows, cols) = (field.rows(), field.cols());
    let inner = field.clone();
    Ok(MatrixField::from_fn(chart, rows, cols, move |x| {
        let mut out = FormMatrix::zero(dim, rows, cols);
        for a in 0..dim {
            let dm = partial(
                &|y: &[f64]| inner.eval(y),
                x,
                a,
                steps[a],
                scheme.order,
                combine_matrices,
            );
            let basis = Form::basis_one_form(dim, a + 1);
            out = out.add(&dm.map_entries(|f| basis.wedge(f)));
        }
        out
    }))
}

/// Curvature of a connection matrix in the row convention
/// D s_i = sum_j omega_ij (x) s_j, namely Omega = d omega - omega ^ omega.
pub fn curvature_from_connection<S: FloatLike>(
    omega: &MatrixField<S>,
    scheme: DiffScheme,
) -> Result<MatrixField<S>> {
    if omega.rows() != omega.cols() {
        return Err(Error::ShapeMismatch(format!(
            "connection matrix is {}x{}",
            omega.rows(),
            omega.cols()
        )));
    }
    let d_omega = matrix_exterior_derivative(omega, scheme)?;
    Ok(d_omega.sub(&omega.wedge_mul(omega)))
}

/// A smooth map from a chart into coordinates of another chart, with an
/// optional analytic Jacobian; without one, the Jacobian is computed by the
/// same central-difference scheme.
#[derive(Clone)]
pub struct SmoothMap {
    domain: Chart,
    target_dim: usize,
    eval: Arc<dyn Fn(&[f64]) -> Vec<f64> + Send + Sync>,
    jacobian: Option<Arc<dyn Fn(&[f64]) -> Vec<Vec<f64>> + Send + Sync>>,
    scheme: DiffScheme,
}

impl SmoothMap {
    pub fn new(
        domain: Chart,
        target_dim: usize,
        eval: impl Fn(&[f64]) -> Vec<f64> + Send + Sync + 'static,
    ) -> Self {
        SmoothMap {
            domain,
            target_dim,
            eval: Arc::new(eval),
            jacobian: None,
            scheme: DiffScheme::default(),
        }
    }

    /// Attach an analytic Jacobian, J[i][a] = d y_i / d x_a.
    pub fn with_jacobian(
        mut self,
        jac: impl Fn(&[f64]) -> Vec<Vec<f64>> + Send + Sync + 'static,
    ) -> Self {
        self.jacobian = Some(Arc::new(jac));
        self
    }

    pub fn domain(&self) -> &Chart {
        &self.domain
    }

    pub fn target_dim(&self) -> usize {
        self.target_dim
    }

    pub fn eval(&self, x: &[f64]) -> Vec<f64> {
        (self.eval)(x)
    }

    pub fn jacobian(&self, x: &[f64]) -> Vec<Vec<f64>> {
        if let Some(jac) = &self.jacobian {
            return jac(x);
        }
        let steps = axis_steps(&self.domain, self.scheme);
        let mut j = vec![vec![0.0; self.domain.dim()]; self.target_dim];
        for a in 0..self.domain.dim() {
            let col = partial(
                &|y: &[f64]| (self.eval)(y),
                x,
                a,
                steps[a],
                self.scheme.order,
                |parts: Vec<(Vec<f64>, f64)>| {
                    let mut acc = vec![0.0; parts[0].0.len()];
                    for (v, w) in parts {
                        for (s, c) in acc.iter_mut().zip(v) {
                            *s += w * c;
                        }
                    }
                    acc
                },
            );
            for i in 0..self.target_dim {
                j[i][a] = col[i];
            }
        }
        j
    }
}

/// Pullback of a form field along a smooth map: coefficients are evaluated
/// at the image point and each target coframe axis is replaced by the
/// corresponding row of the Jacobian contracted with domain coframes.
pub fn pullback<S: FloatLike>(map: &SmoothMap, target: &FormField<S>) -> Result<FormField<S>> {
    if map.target_dim() != target.chart().dim() {
        return Err(Error::DimensionMismatch(
            map.target_dim(),
            target.chart().dim(),
        ));
    }
    let domain = map.domain().clone();
    let dim = domain.dim();
    let map = map.clone();
    let target = target.clone();
    Ok(FormField::from_fn(domain, move |x| {
        let y = map.eval(x);
        let j = map.jacobian(x);
        let g = target.eval(&y);
        let lambdas: Vec<Form<S>> = (0..map.target_dim())
            .map(|i| {
                let mut l = Form::zero(dim);
                for (a, row) in j[i].iter().enumerate() {
                    if *row != 0.0 {
                        l = l.add(&Form::basis_one_form(dim, a + 1).scale_f64(*row));
                    }
                }
                l
            })
            .collect();
        let mut out = Form::zero(dim);
        for (idx, c) in g.terms() {
            let mut w = Form::constant(dim, c.clone());
            for axis in idx.axes() {
                w = w.wedge(&lambdas[axis - 1]);
            }
            out = out.add(&w);
        }
        out
    }))
}

/// Pullback of a matrix field along a smooth map; the Jacobian is computed
/// once per point and shared across entries.
pub fn pullback_matrix<S: FloatLike>(
    map: &SmoothMap,
    target: &MatrixField<S>,
) -> Result<MatrixField<S>> {
    if map.target_dim() != target.chart().dim() {
        return Err(Error::DimensionMismatch(
            map.target_dim(),
            target.chart().dim(),
        ));
    }
    let domain = map.domain().clone();
    let dim = domain.dim();
    let (rows, cols) = (target.rows(), target.cols());
    let map = map.clone();
    let target = target.clone();
    Ok(MatrixField::from_fn(domain, rows, cols, move |x| {
        let y = map.eval(x);
        let j = map.jacobian(x);
        let g = target.eval(&y);
        let lambdas: Vec<Form<S>> = (0..map.target_dim())
            .map(|i| {
                let mut l = Form::zero(dim);
                for (a, row) in j[i].iter().enumerate() {
                    if *row != 0.0 {
                        l = l.add(&Form::basis_one_form(dim, a + 1).scale_f64(*row));
                    }
                }
                l
            })
            .collect();
        g.map_entries(|entry| {
            let mut out = Form::zero(dim);
            for (idx, c) in entry.terms() {
                let mut w = Form::constant(dim, c.clone());
                for axis in idx.axes() {
                    w = w.wedge(&lambdas[axis - 1]);
                }
                out = out.add(&w);
            }
            out
        })
    }))
}

/// Integral of the top-degree component over the chart box by the midpoint
/// rule, in deterministic lexicographic node order.
pub fn integrate_top<S: FloatLike>(field: &FormField<S>, cells: &[usize]) -> Result<S> {
    let grid = field.chart().midpoint_grid(cells)?;
    let vol = grid.cell_volume();
    let mut acc = S::zero();
    for node in grid {
        acc = acc + field.eval(&node).top_coefficient().mul_f64(vol);
    }
    Ok(acc)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::{PI, TAU};

    #[test]
    fn derivative_of_polynomial_one_form_is_exact_to_scheme_order() {
        let chart = Chart::new("box", &[("x", -1.0, 1.0, false), ("y", -1.0, 1.0, false)]).unwrap();
        // f = x^2 y dx + x dy, df = (1 - x^2) dx^dy.
        let f = FormField::from_fn(chart, |p| {
            Form::monomial(2, &[1], p[0] * p[0] * p[1])
                .unwrap()
                .add(&Form::monomial(2, &[2], p[0]).unwrap())
        });
        let df = exterior_derivative(&f, DiffScheme::default()).unwrap();
        let at = |x: f64, y: f64| df.eval(&[x, y]).top_coefficient();
        assert!((at(0.3, -0.7) - (1.0 - 0.09)).abs() < 1e-10);
        assert!((at(-0.5, 0.2) - (1.0 - 0.25)).abs() < 1e-10);
    }

    #[test]
    fn d_squared_vanishes_numerically() {
        let chart = Chart::new(
            "box",
            &[("x", 0.1, 1.0, false), ("y", 0.1, 1.0, false), ("z", 0.1, 1.0, false)],
        )
        .unwrap();
        let f = FormField::from_fn(chart, |p| {
            Form::monomial(3, &[1], (p[1] * p[2]).sin())
                .unwrap()
                .add(&Form::monomial(3, &[3], p[0] * p[1] * p[1]).unwrap())
        });
        let ddf = exterior_derivative(
            &exterior_derivative(&f, DiffScheme::default()).unwrap(),
            DiffScheme::default(),
        )
        .unwrap();
        assert!(ddf.eval(&[0.4, 0.5, 0.6]).max_magnitude() < 1e-7);
    }

    #[test]
    fn pullback_chains_jacobians() {
        // Polar to Cartesian: pull back dx^dy, expect r dr^dtheta.
        let polar = Chart::new("polar", &[("r", 0.1, 2.0, false), ("th", 0.0, TAU, true)]).unwrap();
        let cart = Chart::new("cart", &[("x", -3.0, 3.0, false), ("y", -3.0, 3.0, false)]).unwrap();
        let area = FormField::constant(cart, Form::monomial(2, &[1, 2], 1.0).unwrap()).unwrap();
        let to_cart = SmoothMap::new(polar, 2, |p| vec![p[0] * p[1].cos(), p[0] * p[1].sin()]);
        let pulled = pullback(&to_cart, &area).unwrap();
        let v = pulled.eval(&[1.3, 0.8]).top_coefficient();
        assert!((v - 1.3).abs() < 1e-9);
    }

    #[test]
    fn integrates_gaussian_bump_to_unit_mass() {
        let chart = Chart::new("plane", &[("x", -8.0, 8.0, false), ("y", -8.0, 8.0, false)]).unwrap();
        let f = FormField::from_fn(chart, |p| {
            let d = (-(p[0] * p[0] + p[1] * p[1])).exp() / PI;
            Form::monomial(2, &[1, 2], d).unwrap()
        });
        let total: f64 = integrate_top(&f, &[160, 160]).unwrap();
        assert!((total - 1.0).abs() < 1e-8);
    }

    #[test]
    fn curvature_of_so2_connection_matches_closed_form() {
        // omega_12 = cos(theta) dphi on the theta-phi box; curvature entry
        // must be -sin(theta) dtheta^dphi.
        let chart = Chart::new(
            "band",
            &[("theta", 0.3, PI - 0.3, false), ("phi", 0.0, TAU, true)],
        )
        .unwrap();
        let omega = MatrixField::from_fn(chart, 2, 2, |p| {
            let mut m = FormMatrix::zero(2, 2, 2);
            let c = Form::monomial(2, &[2], p[0].cos()).unwrap();
            *m.entry_mut(0, 1) = c.clone();
            *m.entry_mut(1, 0) = c.neg();
            m
        });
        let curv = curvature_from_connection(&omega, DiffScheme::default()).unwrap();
        let at = curv.eval(&[1.1, 2.0]);
        let expect = -(1.1f64).sin();
        assert!((at.entry(0, 1).top_coefficient() - expect).abs() < 1e-10);
        assert!(at.entry(0, 0).max_magnitude() < 1e-12);
    }
}
