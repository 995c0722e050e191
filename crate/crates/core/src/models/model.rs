//! Bundle models: a curvature field over a chart plus the bookkeeping
//! needed to turn characteristic forms into numbers.

use crate::error::{Error, Result};
use crate::exterior::{Complex64, Form, FormMatrix};
use crate::fields::{integrate_top, richardson_tail, FormField, MatrixField};
use crate::invariants::{chern_forms, euler_form, pontryagin_forms, realify_curvature};

/// Curvature of a metric connection: so(n)-valued for real bundles,
/// u(n)-valued for complex ones.
#[derive(Clone)]
pub enum CurvatureRep {
    Real(MatrixField<f64>),
    Complex(MatrixField<Complex64>),
}

/// Connection matrix in the same frame as the curvature.
#[derive(Clone)]
pub enum ConnectionRep {
    Real(MatrixField<f64>),
    Complex(MatrixField<Complex64>),
}

/// Marks the chart as a truncation of a noncompact picture of a compact
/// space: the given axis is a radial cutoff and integral tails decay like
/// R^-decay_order, so radius doubling plus extrapolation removes them.
#[derive(Clone, Copy, Debug)]
pub struct TruncationSpec {
    pub axis: usize,
    pub decay_order: u32,
}

/// A vector bundle with metric connection over a chart-covered base.
///
/// `corrections` holds closed-form contributions from excluded regions
/// (for example polar caps), keyed by the canonical class monomial they
/// apply to; `characteristic_number` adds them after integrating.
#[derive(Clone)]
pub struct BundleModel {
    pub name: String,
    pub rank: usize,
    pub curvature: CurvatureRep,
    pub connection: Option<ConnectionRep>,
    pub corrections: Vec<(String, f64)>,
    pub truncation: Option<TruncationSpec>,
}

impl BundleModel {
    pub fn chart(&self) -> &crate::fields::Chart {
        match &self.curvature {
            CurvatureRep::Real(m) => m.chart(),
            CurvatureRep::Complex(m) => m.chart(),
        }
    }

    pub fn is_complex(&self) -> bool {
        matches!(self.curvature, CurvatureRep::Complex(_))
    }

    /// Real rank of the underlying real bundle.
    pub fn real_rank(&self) -> usize {
        if self.is_complex() {
            2 * self.rank
        } else {
            self.rank
        }
    }
}

/// One characteristic class symbol.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum ClassName {
    Chern(usize),
    Pontryagin(usize),
    Euler,
}

impl ClassName {
    fn format(&self) -> String {
        match self {
            ClassName::Chern(j) => format!("c{j}"),
            ClassName::Pontryagin(j) => format!("p{j}"),
            ClassName::Euler => "e".to_string(),
        }
    }
}

/// Parses a product of class symbols: factors separated by `*`, each a
/// symbol `e`, `c<j>`, or `p<j>` with an optional `^<k>` power.
pub fn parse_monomial(s: &str) -> Result<Vec<(ClassName, usize)>> {
    let bad = |why: &str| Error::BadMonomial(s.to_string(), why.to_string());
    let mut factors = Vec::new();
    for raw in s.split('*') {
        let token = raw.trim();
        if token.is_empty() {
            return Err(bad("empty factor"));
        }
        let (base, power) = match token.split_once('^') {
            None => (token, 1usize),
            Some((b, p)) => {
                let k: usize = p
                    .trim()
                    .parse()
                    .map_err(|_| bad("power is not a positive integer"))?;
                if k == 0 {
                    return Err(bad("zero power"));
                }
                (b.trim(), k)
            }
        };
        let mut chars = base.chars();
        let head = chars.next().ok_or_else(|| bad("empty factor"))?;
        let rest = &base[head.len_utf8()..];
        let index = |kind: &str| {
            rest.parse::<usize>()
                .ok()
                .filter(|&j| j >= 1)
                .ok_or_else(|| bad(&format!("{kind} index must be a positive integer")))
        };
        let name = match head {
            'e' if rest.is_empty() => ClassName::Euler,
            'c' => ClassName::Chern(index("chern")?),
            'p' => ClassName::Pontryagin(index("pontryagin")?),
            _ => return Err(bad("unknown class symbol")),
        };
        factors.push((name, power));
    }
    Ok(factors)
}

/// Canonical spelling: factors sorted, repeated symbols merged into powers.
pub fn canonical_monomial(factors: &[(ClassName, usize)]) -> String {
    let mut merged: Vec<(ClassName, usize)> = Vec::new();
    let mut sorted = factors.to_vec();
    sorted.sort_by_key(|&(name, _)| name);
    for (name, k) in sorted {
        match merged.last_mut() {
            Some((last, acc)) if *last == name => *acc += k,
            _ => merged.push((name, k)),
        }
    }
    merged
        .iter()
        .map(|(name, k)| {
            if *k == 1 {
                name.format()
            } else {
                format!("{}^{}", name.format(), k)
            }
        })
        .collect::<Vec<_>>()
        .join("*")
}

/// Form degree of the monomial on the given model.
pub fn monomial_degree(model: &BundleModel, factors: &[(ClassName, usize)]) -> usize {
    factors
        .iter()
        .map(|(name, k)| {
            let d = match name {
                ClassName::Chern(j) => 2 * j,
                ClassName::Pontryagin(j) => 4 * j,
                ClassName::Euler => model.real_rank(),
            };
            d * k
        })
        .sum()
}

fn class_form(
    curvature: &FormMatrix<Complex64>,
    real: Option<&FormMatrix<f64>>,
    name: ClassName,
    is_complex: bool,
) -> Result<Form<f64>> {
    match (name, is_complex) {
        (ClassName::Chern(j), true) => {
            let cs = chern_forms(curvature)?;
            cs.get(j).cloned().ok_or_else(|| {
                Error::BadMonomial(
                    format!("c{j}"),
                    format!("index exceeds complex rank {}", cs.len() - 1),
                )
            })
        }
        (ClassName::Chern(_), false) => Err(Error::Unsupported(
            "chern classes need a complex curvature".to_string(),
        )),
        (ClassName::Pontryagin(j), _) => {
            let ps = pontryagin_forms(real.expect("real matrix supplied"))?;
            ps.get(j).cloned().ok_or_else(|| {
                Error::BadMonomial(
                    format!("p{j}"),
                    format!("index exceeds {} available", ps.len() - 1),
                )
            })
        }
        (ClassName::Euler, _) => euler_form(real.expect("real matrix supplied")),
    }
}

/// The form field of a class monomial, evaluated pointwise from the
/// curvature.
pub fn class_form_field(
    model: &BundleModel,
    factors: &[(ClassName, usize)],
) -> Result<FormField<f64>> {
    let chart = model.chart().clone();
    let dim = chart.dim();
    let factors = factors.to_vec();
    for (name, _) in &factors {
        match name {
            ClassName::Chern(j) if *j > model.rank => {
                return Err(Error::BadMonomial(
                    format!("c{j}"),
                    format!("index exceeds complex rank {}", model.rank),
                ));
            }
            ClassName::Pontryagin(j) if *j > model.real_rank() / 2 => {
                return Err(Error::BadMonomial(
                    format!("p{j}"),
                    format!("index exceeds real rank {} over two", model.real_rank()),
                ));
            }
            ClassName::Euler if model.real_rank() % 2 != 0 => {
                return Err(Error::Unsupported("odd real rank has no euler form".into()));
            }
            _ => {}
        }
    }
    let needs_real = factors
        .iter()
        .any(|(n, _)| matches!(n, ClassName::Pontryagin(_) | ClassName::Euler));
    match &model.curvature {
        CurvatureRep::Complex(field) => {
            let field = field.clone();
            Ok(FormField::from_fn(chart, move |x| {
                let omega = field.eval(x);
                let real = if needs_real {
                    Some(realify_curvature(&omega).expect("u(n) curvature realifies"))
                } else {
                    None
                };
                let mut acc = Form::one(dim);
                for (name, k) in &factors {
                    let f = class_form(&omega, real.as_ref(), *name, true)
                        .expect("degree and rank validated up front");
                    for _ in 0..*k {
                        acc = acc.wedge(&f);
                    }
                }
                acc
            }))
        }
        CurvatureRep::Real(field) => {
            if factors.iter().any(|(n, _)| matches!(n, ClassName::Chern(_))) {
                return Err(Error::Unsupported(
                    "chern classes need a complex curvature".to_string(),
                ));
            }
            let field = field.clone();
            Ok(FormField::from_fn(chart, move |x| {
                let omega = field.eval(x);
                let dummy = FormMatrix::zero(dim, 0, 0);
                let mut acc = Form::one(dim);
                for (name, k) in &factors {
                    let f = class_form(&dummy, Some(&omega), *name, false)
                        .expect("degree and rank validated up front");
                    for _ in 0..*k {
                        acc = acc.wedge(&f);
                    }
                }
                acc
            }))
        }
    }
}

/// Integrates the class monomial over the model's chart and adds any
/// closed-form corrections registered for it.
pub fn characteristic_number(
    model: &BundleModel,
    monomial: &str,
    cells: &[usize],
) -> Result<f64> {
    let factors = parse_monomial(monomial)?;
    let degree = monomial_degree(model, &factors);
    let dim = model.chart().dim();
    if degree != dim {
        return Err(Error::DegreeMismatch {
            monomial: monomial.to_string(),
            degree,
            dim,
        });
    }
    let field = class_form_field(model, &factors)?;
    let raw = integrate_top(&field, cells)?;
    let key = canonical_monomial(&factors);
    let correction: f64 = model
        .corrections
        .iter()
        .filter(|(k, _)| *k == key)
        .map(|(_, v)| v)
        .sum();
    Ok(raw + correction)
}

/// Characteristic number with the truncation tail removed: evaluates at the
/// given radius and at twice it (doubling the radial cell count), then
/// extrapolates with the model's stated decay order.
pub fn characteristic_number_extrapolated(
    builder: &dyn Fn(f64) -> Result<BundleModel>,
    monomial: &str,
    radius: f64,
    cells: &[usize],
) -> Result<f64> {
    let near = builder(radius)?;
    let spec = near.truncation.ok_or_else(|| {
        Error::BadConfig(format!(
            "model {} has no truncation axis to extrapolate over",
            near.name
        ))
    })?;
    let at_r = characteristic_number(&near, monomial, cells)?;
    let far = builder(2.0 * radius)?;
    let mut far_cells = cells.to_vec();
    if spec.axis >= far_cells.len() {
        return Err(Error::BadConfig(format!(
            "truncation axis {} outside grid {:?}",
            spec.axis, cells
        )));
    }
    far_cells[spec.axis] *= 2;
    let at_2r = characteristic_number(&far, monomial, &far_cells)?;
    Ok(richardson_tail(at_r, at_2r, spec.decay_order))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_products_and_powers() {
        let f = parse_monomial("c1^2 * c2").unwrap();
        assert_eq!(
            f,
            vec![(ClassName::Chern(1), 2), (ClassName::Chern(2), 1)]
        );
        assert_eq!(canonical_monomial(&f), "c1^2*c2");
        let g = parse_monomial("e").unwrap();
        assert_eq!(g, vec![(ClassName::Euler, 1)]);
        let h = parse_monomial("c1*c1").unwrap();
        assert_eq!(canonical_monomial(&h), "c1^2");
    }

    #[test]
    fn rejects_malformed_monomials() {
        assert!(parse_monomial("").is_err());
        assert!(parse_monomial("q3").is_err());
        assert!(parse_monomial("c0").is_err());
        assert!(parse_monomial("c1^0").is_err());
        assert!(parse_monomial("c1^x").is_err());
        assert!(parse_monomial("c1**c2").is_err());
        assert!(parse_monomial("e2").is_err());
    }
}
