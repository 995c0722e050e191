//! Sections of model bundles as vector-valued fields over a chart, with
//! analytic or finite-difference derivatives. Complex fibers are stored
//! real-interleaved (re_1, im_1, re_2, im_2, ...), the same component
//! ordering the realified matrices use, so orientation signs read off the
//! real jacobian directly.

use crate::error::{Error, Result};
use crate::exterior::Complex64;
use crate::fields::{Chart, SmoothMap};

#[derive(Clone)]
pub struct SectionField {
    map: SmoothMap,
    complex: bool,
}

fn interleave(values: &[Complex64]) -> Vec<f64> {
    let mut out = Vec::with_capacity(2 * values.len());
    for v in values {
        out.push(v.re);
        out.push(v.im);
    }
    out
}

impl SectionField {
    /// Real section with the given number of fiber components.
    pub fn real(
        chart: Chart,
        fiber_dim: usize,
        value: impl Fn(&[f64]) -> Vec<f64> + Send + Sync + 'static,
    ) -> Self {
        SectionField {
            map: SmoothMap::new(chart, fiber_dim, value),
            complex: false,
        }
    }

    /// Complex section of the given complex rank, stored interleaved.
    pub fn complex(
        chart: Chart,
        rank: usize,
        value: impl Fn(&[f64]) -> Vec<Complex64> + Send + Sync + 'static,
    ) -> Self {
        SectionField {
            map: SmoothMap::new(chart, 2 * rank, move |x| interleave(&value(x))),
            complex: true,
        }
    }

    /// Attach an analytic jacobian, rows ordered like the stored
    /// components, columns by chart axis.
    pub fn with_jacobian(
        mut self,
        jac: impl Fn(&[f64]) -> Vec<Vec<f64>> + Send + Sync + 'static,
    ) -> Self {
        self.map = self.map.with_jacobian(jac);
        self
    }

    pub fn chart(&self) -> &Chart {
        self.map.domain()
    }

    /// Number of stored real components.
    pub fn fiber_dim(&self) -> usize {
        self.map.target_dim()
    }

    pub fn is_complex(&self) -> bool {
        self.complex
    }

    /// Complex rank when the section is complex.
    pub fn complex_rank(&self) -> Option<usize> {
        self.complex.then_some(self.map.target_dim() / 2)
    }

    pub fn value(&self, x: &[f64]) -> Vec<f64> {
        self.map.eval(x)
    }

    pub fn complex_value(&self, x: &[f64]) -> Result<Vec<Complex64>> {
        if !self.complex {
            return Err(Error::Unsupported(
                "section has real fiber components".to_string(),
            ));
        }
        let v = self.map.eval(x);
        Ok(v.chunks(2).map(|c| Complex64::new(c[0], c[1])).collect())
    }

    pub fn norm(&self, x: &[f64]) -> f64 {
        self.map
            .eval(x)
            .iter()
            .map(|v| v * v)
            .sum::<f64>()
            .sqrt()
    }

    pub fn jacobian(&self, x: &[f64]) -> Vec<Vec<f64>> {
        self.map.jacobian(x)
    }

    /// Restriction along an embedding into this section's chart: values are
    /// evaluated at the image, derivatives differentiate the composition.
    pub fn restrict(&self, embedding: &SmoothMap) -> Result<SectionField> {
        if embedding.target_dim() != self.chart().dim() {
            return Err(Error::DimensionMismatch(
                embedding.target_dim(),
                self.chart().dim(),
            ));
        }
        let inner = self.map.clone();
        let embed = embedding.clone();
        Ok(SectionField {
            map: SmoothMap::new(embedding.domain().clone(), self.fiber_dim(), move |y| {
                inner.eval(&embed.eval(y))
            }),
            complex: self.complex,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn complex_sections_interleave_components() {
        let chart = Chart::new("c", &[("x", -1.0, 1.0, false), ("y", -1.0, 1.0, false)]).unwrap();
        let s = SectionField::complex(chart, 1, |p| vec![Complex64::new(p[0], p[1])]);
        assert_eq!(s.value(&[0.3, -0.4]), vec![0.3, -0.4]);
        assert_eq!(s.complex_value(&[0.3, -0.4]).unwrap()[0], Complex64::new(0.3, -0.4));
        let j = s.jacobian(&[0.3, -0.4]);
        assert!((j[0][0] - 1.0).abs() < 1e-9 && j[0][1].abs() < 1e-9);
        assert!(j[1][0].abs() < 1e-9 && (j[1][1] - 1.0).abs() < 1e-9);
    }

    #[test]
    fn restriction_composes_values() {
        let ambient =
            Chart::new("a", &[("x", -2.0, 2.0, false), ("y", -2.0, 2.0, false)]).unwrap();
        let line = Chart::new("l", &[("t", -1.0, 1.0, false)]).unwrap();
        let s = SectionField::real(ambient, 2, |p| vec![p[0] + p[1], p[0] * p[1]]);
        let diag = SmoothMap::new(line, 2, |t| vec![t[0], t[0]]);
        let restricted = s.restrict(&diag).unwrap();
        assert_eq!(restricted.value(&[0.5]), vec![1.0, 0.25]);
    }
}
