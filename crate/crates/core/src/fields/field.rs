//! Function-backed differential form and matrix fields on a chart.
//!
//! Fields store a closure, not samples, so derivatives and integrals may
//! evaluate them anywhere, including slightly outside the chart box when a
//! finite-difference stencil crosses the boundary. Model formulas must
//! therefore extend smoothly past the box edges.

use super::chart::Chart;
use crate::error::{Error, Result};
use crate::exterior::{FloatLike, Form, FormMatrix};
use std::sync::Arc;

type FormEval<S> = Arc<dyn Fn(&[f64]) -> Form<S> + Send + Sync>;
type MatrixEval<S> = Arc<dyn Fn(&[f64]) -> FormMatrix<S> + Send + Sync>;

/// A differential form field: a smooth assignment of a form of the chart's
/// dimension to each chart point.
#[derive(Clone)]
pub struct FormField<S: FloatLike> {
    chart: Chart,
    eval: FormEval<S>,
}

impl<S: FloatLike> FormField<S> {
    pub fn from_fn(
        chart: Chart,
        f: impl Fn(&[f64]) -> Form<S> + Send + Sync + 'static,
    ) -> Self {
        FormField {
            chart,
            eval: Arc::new(f),
        }
    }

    pub fn constant(chart: Chart, value: Form<S>) -> Result<Self> {
        if value.dim() != chart.dim() {
            return Err(Error::DimensionMismatch(value.dim(), chart.dim()));
        }
        Ok(FormField::from_fn(chart, move |_| value.clone()))
    }

    pub fn chart(&self) -> &Chart {
        &self.chart
    }

    pub fn eval(&self, x: &[f64]) -> Form<S> {
        (self.eval)(x)
    }

    pub fn add(&self, other: &FormField<S>) -> FormField<S> {
        let (a, b) = (self.eval.clone(), other.eval.clone());
        FormField {
            chart: self.chart.clone(),
            eval: Arc::new(move |x| a(x).add(&b(x))),
        }
    }

    pub fn sub(&self, other: &FormField<S>) -> FormField<S> {
        let (a, b) = (self.eval.clone(), other.eval.clone());
        FormField {
            chart: self.chart.clone(),
            eval: Arc::new(move |x| a(x).sub(&b(x))),
        }
    }

    pub fn neg(&self) -> FormField<S> {
        let a = self.eval.clone();
        FormField {
            chart: self.chart.clone(),
            eval: Arc::new(move |x| a(x).neg()),
        }
    }

    pub fn wedge(&self, other: &FormField<S>) -> FormField<S> {
        let (a, b) = (self.eval.clone(), other.eval.clone());
        FormField {
            chart: self.chart.clone(),
            eval: Arc::new(move |x| a(x).wedge(&b(x))),
        }
    }

    pub fn scale_f64(&self, factor: f64) -> FormField<S> {
        let a = self.eval.clone();
        FormField {
            chart: self.chart.clone(),
            eval: Arc::new(move |x| a(x).scale_f64(factor)),
        }
    }

    /// Wedge power: the field of eval(x)^k.
    pub fn power(&self, k: usize) -> FormField<S> {
        let a = self.eval.clone();
        let dim = self.chart.dim();
        FormField {
            chart: self.chart.clone(),
            eval: Arc::new(move |x| {
                let base = a(x);
                let mut acc = Form::one(dim);
                for _ in 0..k {
                    acc = acc.wedge(&base);
                }
                acc
            }),
        }
    }
}

/// A matrix of form fields sharing one chart, evaluated as a whole so that
/// stencil evaluations are amortized across entries.
#[derive(Clone)]
pub struct MatrixField<S: FloatLike> {
    chart: Chart,
    rows: usize,
    cols: usize,
    eval: MatrixEval<S>,
}

impl<S: FloatLike> MatrixField<S> {
    pub fn from_fn(
        chart: Chart,
        rows: usize,
        cols: usize,
        f: impl Fn(&[f64]) -> FormMatrix<S> + Send + Sync + 'static,
    ) -> Self {
        MatrixField {
            chart,
            rows,
            cols,
            eval: Arc::new(f),
        }
    }

    pub fn chart(&self) -> &Chart {
        &self.chart
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn eval(&self, x: &[f64]) -> FormMatrix<S> {
        (self.eval)(x)
    }

    pub fn add(&self, other: &MatrixField<S>) -> MatrixField<S> {
        let (a, b) = (self.eval.clone(), other.eval.clone());
        MatrixField {
            chart: self.chart.clone(),
            rows: self.rows,
            cols: self.cols,
            eval: Arc::new(move |x| a(x).add(&b(x))),
        }
    }

    pub fn sub(&self, other: &MatrixField<S>) -> MatrixField<S> {
        let (a, b) = (self.eval.clone(), other.eval.clone());
        MatrixField {
            chart: self.chart.clone(),
            rows: self.rows,
            cols: self.cols,
            eval: Arc::new(move |x| a(x).sub(&b(x))),
        }
    }

    pub fn scale_f64(&self, factor: f64) -> MatrixField<S> {
        let a = self.eval.clone();
        MatrixField {
            chart: self.chart.clone(),
            rows: self.rows,
            cols: self.cols,
            eval: Arc::new(move |x| a(x).map_entries(|f| f.scale_f64(factor))),
        }
    }

    /// Pointwise matrix product with wedge entries.
    pub fn wedge_mul(&self, other: &MatrixField<S>) -> MatrixField<S> {
        let (a, b) = (self.eval.clone(), other.eval.clone());
        MatrixField {
            chart: self.chart.clone(),
            rows: self.rows,
            cols: other.cols,
            eval: Arc::new(move |x| a(x).wedge_mul(&b(x))),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn unit_chart() -> Chart {
        Chart::new("unit", &[("x", 0.0, 1.0, false), ("y", 0.0, 1.0, false)]).unwrap()
    }

    #[test]
    fn pointwise_combinators_compose() {
        let chart = unit_chart();
        let fx = FormField::from_fn(chart.clone(), |x| {
            Form::monomial(2, &[1], x[1]).unwrap()
        });
        let fy = FormField::from_fn(chart, |x| Form::monomial(2, &[2], x[0]).unwrap());
        let w = fx.wedge(&fy);
        let v = w.eval(&[2.0, 3.0]);
        // (3 dx) ^ (2 dy) = 6 dx^dy.
        assert_eq!(v.top_coefficient(), 6.0);
        let s = fx.add(&fx).scale_f64(0.5);
        assert_eq!(s.eval(&[2.0, 3.0]).coefficient(crate::exterior::MultiIndex::from_axes(&[1]).unwrap()), 3.0);
    }
}
