//! One-dimensional Gauss-Legendre quadrature and tail extrapolation.

use crate::error::{Error, Result};
use crate::exterior::{FloatLike, Form};

/// Nodes and weights of the n-point Gauss-Legendre rule on [-1, 1].
///
/// Nodes are Newton-refined roots of the Legendre polynomial, seeded from
/// the Chebyshev estimate; the iteration is deterministic.
pub fn gauss_legendre(n: usize) -> Result<Vec<(f64, f64)>> {
    if n == 0 || n > 512 {
        return Err(Error::BadConfig(format!("quadrature order {n} out of range")));
    }
    let mut out = Vec::with_capacity(n);
    for i in 1..=n {
        let mut x = (std::f64::consts::PI * (i as f64 - 0.25) / (n as f64 + 0.5)).cos();
        for _ in 0..100 {
            let (p, dp) = legendre_with_derivative(n, x);
            let dx = p / dp;
            x -= dx;
            if dx.abs() < 1e-15 {
                break;
            }
        }
        let (_, dp) = legendre_with_derivative(n, x);
        let w = 2.0 / ((1.0 - x * x) * dp * dp);
        out.push((x, w));
    }
    out.sort_by(|a, b| a.0.partial_cmp(&b.0).expect("finite nodes"));
    Ok(out)
}

fn legendre_with_derivative(n: usize, x: f64) -> (f64, f64) {
    let mut p_prev = 1.0;
    let mut p = x;
    if n == 0 {
        return (1.0, 0.0);
    }
    for k in 1..n {
        let kf = k as f64;
        let p_next = ((2.0 * kf + 1.0) * x * p - kf * p_prev) / (kf + 1.0);
        p_prev = p;
        p = p_next;
    }
    let dp = n as f64 * (x * p - p_prev) / (x * x - 1.0);
    (p, dp)
}

/// Gauss-Legendre integral of a scalar function over [a, b].
pub fn integrate_fn(f: impl Fn(f64) -> f64, a: f64, b: f64, n: usize) -> Result<f64> {
    let rule = gauss_legendre(n)?;
    let mid = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let mut acc = 0.0;
    for (x, w) in rule {
        acc += w * f(mid + half * x);
    }
    Ok(acc * half)
}

/// Gauss-Legendre integral of a form-valued function of one parameter;
/// integrates each coefficient.
pub fn parameter_integral<S: FloatLike>(
    f: impl Fn(f64) -> Form<S>,
    a: f64,
    b: f64,
    n: usize,
) -> Result<Form<S>> {
    let rule = gauss_legendre(n)?;
    let mid = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let mut acc: Option<Form<S>> = None;
    for (x, w) in rule {
        let term = f(mid + half * x).scale_f64(w * half);
        acc = Some(match acc {
            None => term,
            Some(s) => s.add(&term),
        });
    }
    Ok(acc.expect("n >= 1"))
}

/// Removes an O(R^-p) truncation tail from integrals computed at radius R
/// and 2R: returns (2^p f(2R) - f(R)) / (2^p - 1).
pub fn richardson_tail(at_r: f64, at_2r: f64, decay_order: u32) -> f64 {
    let factor = 2f64.powi(decay_order as i32);
    (factor * at_2r - at_r) / (factor - 1.0)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn low_order_nodes_match_known_values() {
        let rule = gauss_legendre(2).unwrap();
        let s3 = 1.0 / 3f64.sqrt();
        assert!((rule[0].0 + s3).abs() < 1e-14);
        assert!((rule[1].0 - s3).abs() < 1e-14);
        assert!((rule[0].1 - 1.0).abs() < 1e-14);
        let rule3 = gauss_legendre(3).unwrap();
        assert!((rule3[1].0).abs() < 1e-14);
        assert!((rule3[1].1 - 8.0 / 9.0).abs() < 1e-14);
    }

    #[test]
    fn integrates_smooth_functions_to_machine_precision() {
        let v = integrate_fn(|x| x.sin(), 0.0, PI, 24).unwrap();
        assert!((v - 2.0).abs() < 1e-13);
        let v = integrate_fn(|x| 1.0 / (1.0 + x * x), -1.0, 1.0, 40).unwrap();
        assert!((v - PI / 2.0).abs() < 1e-13);
    }

    #[test]
    fn exactness_on_polynomials_of_degree_2n_minus_1() {
        let v = integrate_fn(|x| x.powi(7) - 3.0 * x.powi(4) + x, -1.0, 1.0, 4).unwrap();
        assert!((v - (-6.0 / 5.0)).abs() < 1e-13);
    }

    #[test]
    fn tail_extrapolation_removes_inverse_square_error() {
        let truth = 5.0;
        let f = |r: f64| truth - 3.0 / (r * r);
        let v = richardson_tail(f(10.0), f(20.0), 2);
        assert!((v - truth).abs() < 1e-12);
    }
}
