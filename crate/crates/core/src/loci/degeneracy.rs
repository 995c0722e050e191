//! Degeneracy loci of section tuples: grid scans for rank drop measured by
//! the smallest singular value, Gauss-Newton refinement onto the locus via
//! the vanishing minors, local PCA dimension estimates, and transversality
//! reports at sampled locus points.

use nalgebra::{DMatrix, DVector};

use super::section::SectionField;
use crate::error::{Error, Result};
use crate::exterior::Complex64;
use crate::fields::SmoothMap;

/// One sampled locus point. `in_open_stratum` records that the first
/// i - 1 sections are still independent there, so the point sits in the
/// newly degenerate part rather than a deeper stratum.
#[derive(Clone, Debug)]
pub struct DegeneracyPoint {
    pub location: Vec<f64>,
    pub sigma_min: f64,
    pub in_open_stratum: bool,
}

#[derive(Clone, Debug)]
pub struct DegeneracySample {
    pub tuple_size: usize,
    pub threshold: f64,
    pub scale: f64,
    pub points: Vec<DegeneracyPoint>,
    pub non_generic: bool,
    pub captured_fraction: f64,
}

fn combinations(n: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur = Vec::new();
    fn rec(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for j in start..n {
            cur.push(j);
            rec(j + 1, n, k, cur, out);
            cur.pop();
        }
    }
    rec(0, n, k, &mut cur, &mut out);
    out
}

fn tuple_matrix(tuple: &[SectionField], i: usize, x: &[f64]) -> Result<DMatrix<Complex64>> {
    let rank = if tuple[0].is_complex() {
        tuple[0].complex_rank().unwrap()
    } else {
        tuple[0].fiber_dim()
    };
    let mut m = DMatrix::zeros(rank, i);
    for (col, s) in tuple.iter().take(i).enumerate() {
        if s.is_complex() {
            for (row, v) in s.complex_value(x)?.into_iter().enumerate() {
                m[(row, col)] = v;
            }
        } else {
            for (row, v) in s.value(x).into_iter().enumerate() {
                m[(row, col)] = Complex64::new(v, 0.0);
            }
        }
    }
    Ok(m)
}

fn sigma_min(m: &DMatrix<Complex64>) -> f64 {
    m.clone()
        .svd(false, false)
        .singular_values
        .iter()
        .cloned()
        .fold(f64::MAX, f64::min)
}

fn validate_tuple(tuple: &[SectionField], i: usize) -> Result<usize> {
    if tuple.is_empty() || i < 1 || i > tuple.len() {
        return Err(Error::BadConfig(format!(
            "tuple of {} sections cannot be tested at stage {i}",
            tuple.len()
        )));
    }
    let first = &tuple[0];
    for s in tuple {
        if !s.chart().same_box(first.chart())
            || s.fiber_dim() != first.fiber_dim()
            || s.is_complex() != first.is_complex()
        {
            return Err(Error::ShapeMismatch(
                "tuple sections must share chart and fiber type".to_string(),
            ));
        }
    }
    let rank = if first.is_complex() {
        first.complex_rank().unwrap()
    } else {
        first.fiber_dim()
    };
    if i > rank {
        return Err(Error::BadConfig(format!(
            "stage {i} exceeds fiber rank {rank}"
        )));
    }
    Ok(rank)
}

/// Real components of all i-by-i minors; the locus is exactly their
/// common zero set.
fn minors_vector(tuple: &[SectionField], i: usize, rows: &[Vec<usize>], x: &[f64]) -> Result<Vec<f64>> {
    let m = tuple_matrix(tuple, i, x)?;
    let mut out = Vec::with_capacity(2 * rows.len());
    for subset in rows {
        let sub = DMatrix::from_fn(i, i, |r, c| m[(subset[r], c)]);
        let det = sub.determinant();
        out.push(det.re);
        out.push(det.im);
    }
    Ok(out)
}

fn norm_of(v: &[f64]) -> f64 {
    v.iter().map(|c| c * c).sum::<f64>().sqrt()
}

fn gauss_newton_onto_locus(
    f: &SmoothMap,
    start: &[f64],
    tol_abs: f64,
) -> (Vec<f64>, f64, bool) {
    let mut x = start.to_vec();
    let mut fx = f.eval(&x);
    let mut best = norm_of(&fx);
    for _ in 0..50 {
        if best <= tol_abs {
            return (x, best, true);
        }
        let jr = f.jacobian(&x);
        let j = DMatrix::from_fn(jr.len(), jr[0].len(), |r, c| jr[r][c]);
        let rhs = DVector::from_iterator(fx.len(), fx.iter().map(|v| -v));
        let svd = j.svd(true, true);
        let Ok(step) = svd.solve(&rhs, 1e-12) else {
            return (x, best, false);
        };
        let mut lambda = 1.0;
        let mut advanced = false;
        for _ in 0..25 {
            let cand: Vec<f64> = x
                .iter()
                .zip(step.iter())
                .map(|(v, d)| v + lambda * d)
                .collect();
            if f.domain().contains(&cand) {
                let fc = f.eval(&cand);
                let nc = norm_of(&fc);
                if nc < best * (1.0 - 0.1 * lambda) || nc <= tol_abs {
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
            return (x, best, best <= tol_abs);
        }
    }
    (x, best, best <= tol_abs)
}

/// Scans the chart for points where the first `i` sections drop rank.
/// Captured grid nodes are refined onto the locus through the minors;
/// accepted points satisfy sigma_min below `tau_rel` times the largest
/// section norm. When over half the grid is captured the tuple is flagged
/// non-generic and raw nodes are reported without refinement.
pub fn degeneracy_scan(
    tuple: &[SectionField],
    i: usize,
    cells: &[usize],
    tau_rel: f64,
) -> Result<DegeneracySample> {
    let rank = validate_tuple(tuple, i)?;
    let chart = tuple[0].chart().clone();
    let dim = chart.dim();
    let nodes: Vec<Vec<f64>> = chart.midpoint_grid(cells)?.collect();

    let mut sigmas = Vec::with_capacity(nodes.len());
    let mut scale: f64 = 0.0;
    for p in &nodes {
        let m = tuple_matrix(tuple, i, p)?;
        for col in 0..i {
            scale = scale.max(m.column(col).norm());
        }
        sigmas.push(sigma_min(&m));
    }
    if scale == 0.0 {
        return Err(Error::Numeric("all sections vanish on the grid".into()));
    }
    let threshold = tau_rel * scale;

    let h: Vec<f64> = (0..dim).map(|k| chart.extent(k) / cells[k] as f64).collect();
    let capture_rel = (0..dim)
        .map(|k| 4.0 * h[k] / chart.extent(k))
        .fold(0.0f64, f64::max)
        .min(0.2);
    let capture = (capture_rel * scale).max(threshold);

    let captured: Vec<usize> = (0..nodes.len()).filter(|&k| sigmas[k] <= capture).collect();
    let captured_fraction = captured.len() as f64 / nodes.len() as f64;

    if captured_fraction > 0.5 {
        let points = captured
            .iter()
            .take(10_000)
            .map(|&k| DegeneracyPoint {
                location: nodes[k].clone(),
                sigma_min: sigmas[k],
                in_open_stratum: false,
            })
            .collect();
        return Ok(DegeneracySample {
            tuple_size: i,
            threshold,
            scale,
            points,
            non_generic: true,
            captured_fraction,
        });
    }

    // Local minima of sigma_min among the captured nodes, then a
    // deterministic cap on refinement starts.
    let mut strides = vec![1usize; dim.max(1)];
    for k in (0..dim.saturating_sub(1)).rev() {
        strides[k] = strides[k + 1] * cells[k + 1];
    }
    let mut starts: Vec<usize> = captured
        .iter()
        .cloned()
        .filter(|&flat| {
            (0..dim).all(|k| {
                let idx = (flat / strides[k]) % cells[k];
                let axis = chart.axis(k);
                let mut ok = true;
                if idx > 0 {
                    ok &= sigmas[flat - strides[k]] >= sigmas[flat];
                } else if axis.periodic {
                    ok &= sigmas[flat + (cells[k] - 1) * strides[k]] >= sigmas[flat];
                }
                if idx + 1 < cells[k] {
                    ok &= sigmas[flat + strides[k]] >= sigmas[flat];
                } else if axis.periodic {
                    ok &= sigmas[flat - idx * strides[k]] >= sigmas[flat];
                }
                ok
            })
        })
        .collect();
    if starts.len() > 400 {
        let stride = starts.len().div_ceil(400);
        starts = starts.into_iter().step_by(stride).collect();
    }

    let rows = combinations(rank, i);
    let tuple_owned = tuple.to_vec();
    let rows_owned = rows.clone();
    let ii = i;
    let minors_map = SmoothMap::new(chart.clone(), 2 * rows.len(), move |x| {
        minors_vector(&tuple_owned, ii, &rows_owned, x).expect("validated tuple")
    });
    let tol_abs = 1e-12 * scale.powi(i as i32) * (rows.len() as f64).sqrt().max(1.0);
    let diag = h.iter().map(|v| v * v).sum::<f64>().sqrt();

    let mut points: Vec<DegeneracyPoint> = Vec::new();
    for flat in starts {
        let (location, _residual, converged) =
            gauss_newton_onto_locus(&minors_map, &nodes[flat], tol_abs);
        if !converged || !chart.contains(&location) {
            continue;
        }
        let sigma = sigma_min(&tuple_matrix(tuple, i, &location)?);
        if sigma > threshold {
            continue;
        }
        if points
            .iter()
            .any(|p| {
                p.location
                    .iter()
                    .zip(&location)
                    .map(|(a, b)| (a - b) * (a - b))
                    .sum::<f64>()
                    .sqrt()
                    < 0.25 * diag
            })
        {
            continue;
        }
        let in_open_stratum = if i == 1 {
            true
        } else {
            sigma_min(&tuple_matrix(tuple, i - 1, &location)?) > threshold
        };
        points.push(DegeneracyPoint {
            location,
            sigma_min: sigma,
            in_open_stratum,
        });
    }
    points.sort_by(|a, b| {
        a.location
            .partial_cmp(&b.location)
            .unwrap_or(std::cmp::Ordering::Equal)
    });
    Ok(DegeneracySample {
        tuple_size: i,
        threshold,
        scale,
        points,
        non_generic: false,
        captured_fraction,
    })
}

/// Mean local PCA dimension of a point cloud: for each point with at
/// least `k` neighbors, the count of covariance eigenvalues above one
/// percent of the largest.
pub fn fitted_dimension(points: &[DegeneracyPoint], k: usize) -> Result<f64> {
    if points.len() < k + 1 {
        return Err(Error::Numeric(format!(
            "need more than {k} points for a {k}-neighbor estimate, have {}",
            points.len()
        )));
    }
    let dim = points[0].location.len();
    let mut total = 0.0;
    for p in points {
        let mut dists: Vec<(f64, usize)> = points
            .iter()
            .enumerate()
            .map(|(j, q)| {
                let d = p
                    .location
                    .iter()
                    .zip(&q.location)
                    .map(|(a, b)| (a - b) * (a - b))
                    .sum::<f64>();
                (d, j)
            })
            .collect();
        dists.sort_by(|a, b| a.0.partial_cmp(&b.0).unwrap_or(std::cmp::Ordering::Equal));
        let neighbors: Vec<&DegeneracyPoint> =
            dists.iter().take(k + 1).map(|&(_, j)| &points[j]).collect();
        let mean: Vec<f64> = (0..dim)
            .map(|a| neighbors.iter().map(|q| q.location[a]).sum::<f64>() / neighbors.len() as f64)
            .collect();
        let mut cov = DMatrix::zeros(dim, dim);
        for q in &neighbors {
            for a in 0..dim {
                for b in 0..dim {
                    cov[(a, b)] += (q.location[a] - mean[a]) * (q.location[b] - mean[b]);
                }
            }
        }
        cov /= neighbors.len() as f64;
        let eigen = cov.symmetric_eigen();
        let lmax = eigen.eigenvalues.iter().cloned().fold(0.0, f64::max);
        let count = eigen
            .eigenvalues
            .iter()
            .filter(|&&l| l > 0.01 * lmax)
            .count();
        total += count as f64;
    }
    Ok(total / points.len() as f64)
}

#[derive(Clone, Debug)]
pub struct GenericityPoint {
    pub location: Vec<f64>,
    pub transverse_sigma: f64,
    pub pass: bool,
}

#[derive(Clone, Debug)]
pub struct GenericityReport {
    pub per_point: Vec<GenericityPoint>,
    pub all_pass: bool,
}

/// Transversality at sampled locus points: the differential of the minors
/// must reach the expected codimension, measured by the codimension-th
/// singular value against the natural derivative scale of the minors over
/// the chart size. An empty sample passes vacuously.
pub fn genericity_check(
    tuple: &[SectionField],
    i: usize,
    sample: &DegeneracySample,
) -> Result<GenericityReport> {
    let rank = validate_tuple(tuple, i)?;
    let chart = tuple[0].chart().clone();
    let max_extent = (0..chart.dim())
        .map(|k| chart.extent(k))
        .fold(0.0f64, f64::max);
    let rows = combinations(rank, i);
    let tuple_owned = tuple.to_vec();
    let rows_owned = rows.clone();
    let minors_map = SmoothMap::new(chart, 2 * rows.len(), move |x| {
        minors_vector(&tuple_owned, i, &rows_owned, x).expect("validated tuple")
    });
    let complex_units = if tuple[0].is_complex() { 2 } else { 1 };
    let codim = (complex_units * (rank - i + 1))
        .min(2 * rows.len())
        .min(tuple[0].chart().dim());
    let deriv_scale = sample.scale.powi(i as i32) / max_extent;
    let mut per_point = Vec::new();
    let mut all_pass = true;
    for p in &sample.points {
        let jr = minors_map.jacobian(&p.location);
        let j = DMatrix::from_fn(jr.len(), jr[0].len(), |r, c| jr[r][c]);
        let mut sv: Vec<f64> = j.svd(false, false).singular_values.iter().cloned().collect();
        sv.sort_by(|a, b| b.partial_cmp(a).unwrap_or(std::cmp::Ordering::Equal));
        let sigma = sv.get(codim - 1).cloned().unwrap_or(0.0);
        let pass = sigma > 1e-4 * deriv_scale;
        all_pass &= pass;
        per_point.push(GenericityPoint {
            location: p.location.clone(),
            transverse_sigma: sigma,
            pass,
        });
    }
    Ok(GenericityReport {
        per_point,
        all_pass,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fields::Chart;

    fn four_chart() -> Chart {
        Chart::new(
            "c2",
            &[
                ("x1", -1.0, 1.0, false),
                ("y1", -1.0, 1.0, false),
                ("x2", -1.0, 1.0, false),
                ("y2", -1.0, 1.0, false),
            ],
        )
        .unwrap()
    }

    fn z(p: &[f64], k: usize) -> Complex64 {
        Complex64::new(p[2 * k], p[2 * k + 1])
    }

    #[test]
    fn independent_constant_tuple_has_empty_locus() {
        let chart = four_chart();
        let s1 = SectionField::complex(chart.clone(), 2, |_| {
            vec![Complex64::new(1.0, 0.0), Complex64::new(0.0, 0.0)]
        });
        let s2 = SectionField::complex(chart, 2, |_| {
            vec![Complex64::new(0.0, 0.0), Complex64::new(1.0, 0.0)]
        });
        let sample = degeneracy_scan(&[s1, s2], 2, &[6, 6, 6, 6], 1e-6).unwrap();
        assert!(sample.points.is_empty());
        assert!(!sample.non_generic);
    }

    #[test]
    fn proportional_pair_floods_the_chart_and_is_flagged() {
        let chart = four_chart();
        let s1 = SectionField::complex(chart.clone(), 2, |p| vec![z(p, 0), z(p, 1)]);
        let s2 = SectionField::complex(chart, 2, |p| {
            let f = Complex64::new(0.5, 0.3);
            vec![f * z(p, 0), f * z(p, 1)]
        });
        let sample = degeneracy_scan(&[s1, s2], 2, &[6, 6, 6, 6], 1e-6).unwrap();
        assert!(sample.non_generic);
        assert!(sample.captured_fraction > 0.9);
    }

    #[test]
    fn transverse_pair_recovers_a_two_dimensional_locus() {
        let chart = four_chart();
        let s1 = SectionField::complex(chart.clone(), 2, |_| {
            vec![Complex64::new(1.0, 0.0), Complex64::new(0.0, 0.0)]
        });
        // Second component z1 - a z2 - b: the rank-drop locus is the
        // affine complex line z1 = a z2 + b, real dimension two.
        let a = Complex64::new(0.4, 0.2);
        let b = Complex64::new(0.1, -0.15);
        let s2 = SectionField::complex(chart, 2, move |p| {
            vec![z(p, 1) * Complex64::new(0.3, 0.1), z(p, 0) - a * z(p, 1) - b]
        });
        let tuple = [s1, s2];
        let sample = degeneracy_scan(&tuple, 2, &[10, 10, 10, 10], 1e-6).unwrap();
        assert!(!sample.non_generic);
        assert!(sample.points.len() >= 20, "only {} points", sample.points.len());
        for p in &sample.points {
            let lhs = z(&p.location, 0);
            let rhs = a * z(&p.location, 1) + b;
            assert!((lhs - rhs).norm() < 1e-7);
            assert!(p.in_open_stratum);
        }
        let dim = fitted_dimension(&sample.points, 12).unwrap();
        assert!((dim - 2.0).abs() <= 0.2, "fitted dimension {dim}");
        let report = genericity_check(&tuple, 2, &sample).unwrap();
        assert!(report.all_pass);
    }

    #[test]
    fn tangential_degeneracy_fails_the_transversality_gate() {
        let chart = Chart::new("r2", &[("x", -1.0, 1.0, false), ("y", -1.0, 1.0, false)]).unwrap();
        let s1 = SectionField::real(chart.clone(), 2, |_| vec![1.0, 0.0]);
        let s2 = SectionField::real(chart, 2, |p| vec![0.7, p[0] * p[0]]);
        let tuple = [s1, s2];
        let sample = degeneracy_scan(&tuple, 2, &[40, 40], 1e-4).unwrap();
        assert!(!sample.points.is_empty());
        let report = genericity_check(&tuple, 2, &sample).unwrap();
        assert!(!report.all_pass);
    }

    #[test]
    fn vacuous_pass_on_empty_sample() {
        let chart = four_chart();
        let s1 = SectionField::complex(chart.clone(), 2, |_| {
            vec![Complex64::new(1.0, 0.0), Complex64::new(0.0, 0.0)]
        });
        let s2 = SectionField::complex(chart, 2, |_| {
            vec![Complex64::new(0.0, 0.0), Complex64::new(1.0, 0.0)]
        });
        let tuple = [s1, s2];
        let sample = degeneracy_scan(&tuple, 2, &[4, 4, 4, 4], 1e-6).unwrap();
        let report = genericity_check(&tuple, 2, &sample).unwrap();
        assert!(report.per_point.is_empty());
        assert!(report.all_pass);
    }
}
