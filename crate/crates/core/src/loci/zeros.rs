//! Isolated-zero detection: a coarse grid scan for local norm minima
//! followed by damped Newton refinement, with orientation signs read from
//! the jacobian determinant. Records flag non-convergence and chart-margin
//! zeros instead of dropping them.

use nalgebra::{DMatrix, DVector};

use super::section::SectionField;
use crate::error::{Error, Result};

/// One refined zero with its orientation data. `index` is 0 when the
/// jacobian is numerically singular; `reliable` summarizes the flags.
#[derive(Clone, Debug)]
pub struct ZeroRecord {
    pub location: Vec<f64>,
    pub index: i32,
    pub jacobian_det: f64,
    pub refine_residual: f64,
    pub condition: f64,
    pub converged: bool,
    pub on_margin: bool,
}

impl ZeroRecord {
    pub fn reliable(&self) -> bool {
        self.converged && !self.on_margin && self.index != 0
    }
}

/// Relative singular-value floor below which a jacobian counts as
/// degenerate.
pub const DEGENERATE_JAC_REL: f64 = 1e-8;

fn jacobian_matrix(s: &SectionField, x: &[f64]) -> DMatrix<f64> {
    let j = s.jacobian(x);
    DMatrix::from_fn(j.len(), j[0].len(), |r, c| j[r][c])
}

/// Sign of the jacobian determinant at a nondegenerate zero, in the chart
/// orientation and the stored component order. Complex sections are
/// already interleaved, which makes every holomorphic nondegenerate zero
/// count +1.
pub fn local_index(s: &SectionField, z: &[f64]) -> Result<i32> {
    let j = jacobian_matrix(s, z);
    if j.nrows() != j.ncols() {
        return Err(Error::ShapeMismatch(format!(
            "index needs a square jacobian, got {}x{}",
            j.nrows(),
            j.ncols()
        )));
    }
    let svd = j.clone().svd(false, false);
    let smax = svd.singular_values.iter().cloned().fold(0.0, f64::max);
    let smin = svd.singular_values.iter().cloned().fold(f64::MAX, f64::min);
    if smin <= DEGENERATE_JAC_REL * smax.max(1.0) {
        return Err(Error::Numeric(format!(
            "degenerate zero: smallest singular value {smin:.3e}"
        )));
    }
    Ok(if j.determinant() > 0.0 { 1 } else { -1 })
}

fn wrap_into_chart(s: &SectionField, x: &mut [f64]) -> bool {
    for (k, v) in x.iter_mut().enumerate() {
        let axis = s.chart().axis(k);
        if axis.periodic {
            let span = axis.hi - axis.lo;
            *v = axis.lo + (*v - axis.lo).rem_euclid(span);
        } else if *v < axis.lo - 0.5 * (axis.hi - axis.lo)
            || *v > axis.hi + 0.5 * (axis.hi - axis.lo)
        {
            return false;
        }
    }
    true
}

fn norm_of(v: &[f64]) -> f64 {
    v.iter().map(|c| c * c).sum::<f64>().sqrt()
}

/// Periodic-aware distance between two chart points.
fn chart_distance(s: &SectionField, a: &[f64], b: &[f64]) -> f64 {
    let mut acc = 0.0;
    for k in 0..a.len() {
        let axis = s.chart().axis(k);
        let mut d = (a[k] - b[k]).abs();
        if axis.periodic {
            let span = axis.hi - axis.lo;
            d = d.min(span - d % span).min(d % span);
        }
        acc += d * d;
    }
    acc.sqrt()
}

fn newton_refine(
    s: &SectionField,
    start: &[f64],
    tol_abs: f64,
) -> (Vec<f64>, f64, bool) {
    let mut x = start.to_vec();
    let mut fx = s.value(&x);
    let mut best = norm_of(&fx);
    // Iterates past the acceptance tolerance until progress stalls, so
    // reported locations sit at the numerical floor of the iteration.
    for _ in 0..60 {
        if best == 0.0 {
            break;
        }
        let j = jacobian_matrix(s, &x);
        let rhs = DVector::from_iterator(fx.len(), fx.iter().map(|v| -v));
        let Some(step) = j.lu().solve(&rhs) else {
            break;
        };
        let mut lambda = 1.0;
        let mut advanced = false;
        for _ in 0..25 {
            let mut cand: Vec<f64> = x
                .iter()
                .zip(step.iter())
                .map(|(v, d)| v + lambda * d)
                .collect();
            if wrap_into_chart(s, &mut cand) {
                let fc = s.value(&cand);
                let nc = norm_of(&fc);
                if nc < best * (1.0 - 0.25 * lambda) {
                    x = cand;
                    fx = fc;
                    best = nc;
                    advanced = true;
                    break;
                }
            }
            lambda *= 0.5;
        }
        if !advanced {
            break;
        }
    }
    (x, best, best <= tol_abs)
}

/// Grid-scan plus Newton zero search for sections whose fiber dimension
/// matches the chart dimension. `tol` is relative to the largest section
/// norm seen on the grid.
pub fn find_zeros(s: &SectionField, cells: &[usize], tol: f64) -> Result<Vec<ZeroRecord>> {
    let chart = s.chart().clone();
    let dim = chart.dim();
    if s.fiber_dim() != dim {
        return Err(Error::Unsupported(format!(
            "isolated-zero search needs fiber dimension {} to match chart dimension {dim}",
            s.fiber_dim()
        )));
    }
    if dim == 0 {
        return Err(Error::Unsupported("zero search needs a positive-dimensional chart".into()));
    }
    let nodes: Vec<Vec<f64>> = chart.midpoint_grid(cells)?.collect();
    let norms: Vec<f64> = nodes.iter().map(|p| s.norm(p)).collect();
    let scale = norms.iter().cloned().fold(0.0, f64::max);
    if scale == 0.0 {
        return Err(Error::Numeric("section vanishes on the whole grid".into()));
    }
    let tol_abs = tol * scale;
    let h: Vec<f64> = (0..dim).map(|k| chart.extent(k) / cells[k] as f64).collect();
    let diag = h.iter().map(|v| v * v).sum::<f64>().sqrt();

    // Strides for lexicographic node order, last axis fastest.
    let mut strides = vec![1usize; dim];
    for k in (0..dim.saturating_sub(1)).rev() {
        strides[k] = strides[k + 1] * cells[k + 1];
    }

    // Steepness estimate: largest per-cell norm change along any axis.
    let mut lipschitz: f64 = 0.0;
    for (flat, _) in nodes.iter().enumerate() {
        for k in 0..dim {
            let i = (flat / strides[k]) % cells[k];
            if i + 1 < cells[k] {
                lipschitz =
                    lipschitz.max((norms[flat + strides[k]] - norms[flat]).abs() / h[k]);
            }
        }
    }
    let capture = (2.0 * lipschitz * diag).max(tol_abs);

    let mut candidates = Vec::new();
    'nodes: for (flat, point) in nodes.iter().enumerate() {
        if norms[flat] > capture {
            continue;
        }
        for k in 0..dim {
            let i = (flat / strides[k]) % cells[k];
            let axis = chart.axis(k);
            let prev = if i > 0 {
                Some(flat - strides[k])
            } else if axis.periodic {
                Some(flat + (cells[k] - 1) * strides[k])
            } else {
                None
            };
            let next = if i + 1 < cells[k] {
                Some(flat + strides[k])
            } else if axis.periodic {
                Some(flat - i * strides[k])
            } else {
                None
            };
            for neighbor in [prev, next].into_iter().flatten() {
                if norms[neighbor] < norms[flat] {
                    continue 'nodes;
                }
            }
        }
        candidates.push(point.clone());
    }

    let mut records: Vec<ZeroRecord> = Vec::new();
    for start in candidates {
        let (location, residual, converged) = newton_refine(s, &start, tol_abs);
        if !chart.contains(&location) {
            continue;
        }
        if converged
            && records
                .iter()
                .any(|r| r.converged && chart_distance(s, &r.location, &location) < diag)
        {
            continue;
        }
        let on_margin = (0..dim).any(|k| {
            let axis = chart.axis(k);
            !axis.periodic
                && (location[k] - axis.lo < diag || axis.hi - location[k] < diag)
        });
        let j = jacobian_matrix(s, &location);
        let det = j.determinant();
        let svd = j.svd(false, false);
        let smax = svd.singular_values.iter().cloned().fold(0.0, f64::max);
        let smin = svd.singular_values.iter().cloned().fold(f64::MAX, f64::min);
        let degenerate = smin <= DEGENERATE_JAC_REL * smax.max(1.0);
        records.push(ZeroRecord {
            location,
            index: if converged && !degenerate {
                if det > 0.0 {
                    1
                } else {
                    -1
                }
            } else {
                0
            },
            jacobian_det: det,
            refine_residual: residual,
            condition: smin,
            converged,
            on_margin,
        });
    }
    records.sort_by(|a, b| {
        a.location
            .partial_cmp(&b.location)
            .unwrap_or(std::cmp::Ordering::Equal)
    });
    Ok(records)
}

/// Sum of indices; errors when any record is flagged, so unreliable lists
/// never silently enter comparisons.
pub fn index_sum(records: &[ZeroRecord]) -> Result<i64> {
    let flagged = records.iter().filter(|r| !r.reliable()).count();
    if flagged > 0 {
        return Err(Error::ValidationFailed(format!(
            "{flagged} of {} zero records are flagged",
            records.len()
        )));
    }
    Ok(records.iter().map(|r| r.index as i64).sum())
}

/// Pairing of an integer index sum with its companion density integral.
#[derive(Clone, Debug)]
pub struct IndexComparison {
    pub index_sum: i64,
    pub integral: f64,
    pub discrepancy: f64,
}

pub fn index_vs_integral(sum: i64, integral: f64) -> IndexComparison {
    IndexComparison {
        index_sum: sum,
        integral,
        discrepancy: (sum as f64 - integral).abs(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fields::Chart;

    fn plane() -> Chart {
        Chart::new("p", &[("x", -2.0, 2.0, false), ("y", -2.0, 2.0, false)]).unwrap()
    }

    #[test]
    fn constant_section_has_no_zeros() {
        let s = SectionField::real(plane(), 2, |_| vec![1.0, 0.5]);
        assert!(find_zeros(&s, &[16, 16], 1e-10).unwrap().is_empty());
    }

    #[test]
    fn identity_and_reflection_indices() {
        let id = SectionField::real(plane(), 2, |p| vec![p[0], p[1]]);
        let zeros = find_zeros(&id, &[17, 17], 1e-10).unwrap();
        assert_eq!(zeros.len(), 1);
        assert_eq!(zeros[0].index, 1);
        assert!(norm_of(&zeros[0].location) < 1e-9);
        assert_eq!(local_index(&id, &[0.0, 0.0]).unwrap(), 1);

        let refl = SectionField::real(plane(), 2, |p| vec![p[0], -p[1]]);
        assert_eq!(local_index(&refl, &[0.0, 0.0]).unwrap(), -1);
        assert_eq!(index_sum(&find_zeros(&refl, &[17, 17], 1e-10).unwrap()).unwrap(), -1);
    }

    #[test]
    fn holomorphic_zero_counts_plus_one() {
        use crate::exterior::Complex64;
        let s = SectionField::complex(plane(), 1, |p| vec![Complex64::new(p[0], p[1])]);
        assert_eq!(local_index(&s, &[0.0, 0.0]).unwrap(), 1);
        // Antiholomorphic conjugate flips the orientation.
        let sbar = SectionField::complex(plane(), 1, |p| vec![Complex64::new(p[0], -p[1])]);
        assert_eq!(local_index(&sbar, &[0.0, 0.0]).unwrap(), -1);
    }

    #[test]
    fn degenerate_jacobian_is_an_error() {
        let s = SectionField::real(plane(), 2, |p| vec![p[0] * p[0], p[1]]);
        assert!(local_index(&s, &[0.0, 0.0]).is_err());
    }

    #[test]
    fn margin_zero_is_flagged_and_blocks_index_sum() {
        let s = SectionField::real(plane(), 2, |p| vec![p[0] - 1.999, p[1]]);
        let zeros = find_zeros(&s, &[16, 16], 1e-10).unwrap();
        assert_eq!(zeros.len(), 1);
        assert!(zeros[0].on_margin);
        assert!(index_sum(&zeros).is_err());
    }

    #[test]
    fn close_roots_are_separated_when_the_grid_resolves_them() {
        let s = SectionField::real(plane(), 2, |p| {
            vec![(p[0] - 0.5) * (p[0] + 0.5), p[1]]
        });
        let zeros = find_zeros(&s, &[64, 64], 1e-10).unwrap();
        assert_eq!(zeros.len(), 2);
        assert_eq!(index_sum(&zeros).unwrap(), 0);
    }
}
