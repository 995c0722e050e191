//! Dense scalar matrices for Lie-algebra-level computations.
//!
//! Determinants dispatch on the scalar backend: fraction-free elimination
//! with exact division for rational scalars, LU with partial pivoting for
//! floats.

use crate::error::{Error, Result};
use crate::exterior::{Form, FormMatrix, ComplexScalar, Scalar};

/// Square matrix of bare scalars, row-major.
#[derive(Clone, PartialEq, Debug)]
pub struct ScalarMat<S: Scalar> {
    n: usize,
    a: Vec<S>,
}

impl<S: Scalar> ScalarMat<S> {
    pub fn zero(n: usize) -> Self {
        ScalarMat {
            n,
            a: vec![S::zero(); n * n],
        }
    }

    pub fn from_rows(rows: Vec<Vec<S>>) -> Result<Self> {
        let n = rows.len();
        for r in &rows {
            if r.len() != n {
                return Err(Error::ShapeMismatch(format!(
                    "row of length {} in {}x{} matrix",
                    r.len(),
                    n,
                    n
                )));
            }
        }
        Ok(ScalarMat {
            n,
            a: rows.into_iter().flatten().collect(),
        })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn get(&self, i: usize, j: usize) -> &S {
        &self.a[i * self.n + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: S) {
        self.a[i * self.n + j] = v;
    }

    pub fn scale(&self, factor: &S) -> ScalarMat<S> {
        ScalarMat {
            n: self.n,
            a: self.a.iter().map(|v| v.clone() * factor.clone()).collect(),
        }
    }

    pub fn add(&self, other: &ScalarMat<S>) -> ScalarMat<S> {
        assert_eq!(self.n, other.n);
        ScalarMat {
            n: self.n,
            a: self
                .a
                .iter()
                .zip(&other.a)
                .map(|(x, y)| x.clone() + y.clone())
                .collect(),
        }
    }

    pub fn mul(&self, other: &ScalarMat<S>) -> ScalarMat<S> {
        assert_eq!(self.n, other.n);
        let mut out = ScalarMat::zero(self.n);
        for i in 0..self.n {
            for j in 0..self.n {
                let mut acc = S::zero();
                for k in 0..self.n {
                    acc = acc + self.get(i, k).clone() * other.get(k, j).clone();
                }
                out.set(i, j, acc);
            }
        }
        out
    }

    pub fn transpose(&self) -> ScalarMat<S> {
        let mut out = ScalarMat::zero(self.n);
        for i in 0..self.n {
            for j in 0..self.n {
                out.set(j, i, self.get(i, j).clone());
            }
        }
        out
    }

    pub fn conj(&self) -> ScalarMat<S> {
        ScalarMat {
            n: self.n,
            a: self.a.iter().map(Scalar::conj).collect(),
        }
    }

    pub fn conj_transpose(&self) -> ScalarMat<S> {
        self.transpose().conj()
    }

    pub fn max_magnitude(&self) -> f64 {
        self.a.iter().map(Scalar::magnitude).fold(0.0, f64::max)
    }

    /// Largest magnitude of M + conj(M)^t.
    pub fn skew_hermitian_defect(&self) -> f64 {
        self.add(&self.conj_transpose()).max_magnitude()
    }

    /// Embeds as a matrix of degree-zero forms over a given ambient space.
    pub fn to_form_matrix(&self, dim: usize) -> FormMatrix<S> {
        let entries = self
            .a
            .iter()
            .map(|v| Form::constant(dim, v.clone()))
            .collect();
        FormMatrix::from_entries(dim, self.n, self.n, entries).expect("consistent shape")
    }

    /// Determinant: fraction-free elimination for exact scalars, LU with
    /// partial pivoting for floats.
    pub fn det(&self) -> S {
        if S::EXACT {
            self.det_bareiss()
        } else {
            self.det_lu()
        }
    }

    fn det_bareiss(&self) -> S {
        let n = self.n;
        if n == 0 {
            return S::one();
        }
        let mut m = self.a.clone();
        let at = |m: &Vec<S>, i: usize, j: usize| m[i * n + j].clone();
        let mut sign_flip = false;
        let mut prev = S::one();
        for k in 0..n - 1 {
            if m[k * n + k].is_zero() {
                let Some(p) = (k + 1..n).find(|&p| !m[p * n + k].is_zero()) else {
                    return S::zero();
                };
                for j in 0..n {
                    m.swap(k * n + j, p * n + j);
                }
                sign_flip = !sign_flip;
            }
            for i in k + 1..n {
                for j in k + 1..n {
                    let num = at(&m, i, j) * at(&m, k, k) - at(&m, i, k) * at(&m, k, j);
                    m[i * n + j] = num.try_div(&prev).expect("exact division in elimination");
                }
            }
            prev = m[k * n + k].clone();
        }
        let d = m[(n - 1) * n + (n - 1)].clone();
        if sign_flip {
            -d
        } else {
            d
        }
    }

    fn det_lu(&self) -> S {
        let n = self.n;
        if n == 0 {
            return S::one();
        }
        let mut m = self.a.clone();
        let mut det = S::one();
        for k in 0..n {
            let (p, best) = (k..n)
                .map(|i| (i, m[i * n + k].magnitude()))
                .max_by(|a, b| a.1.total_cmp(&b.1))
                .expect("nonempty column");
            if best == 0.0 {
                return S::zero();
            }
            if p != k {
                for j in 0..n {
                    m.swap(k * n + j, p * n + j);
                }
                det = -det;
            }
            let pivot = m[k * n + k].clone();
            det = det * pivot.clone();
            for i in k + 1..n {
                let factor = m[i * n + k]
                    .try_div(&pivot)
                    .expect("pivot checked nonzero");
                for j in k + 1..n {
                    let delta = factor.clone() * m[k * n + j].clone();
                    m[i * n + j] = m[i * n + j].clone() - delta;
                }
            }
        }
        det
    }
}

impl<C: ComplexScalar> ScalarMat<C> {
    pub fn re_part(&self) -> ScalarMat<C::Real> {
        ScalarMat {
            n: self.n,
            a: self.a.iter().map(ComplexScalar::re_part).collect(),
        }
    }

    pub fn im_part(&self) -> ScalarMat<C::Real> {
        ScalarMat {
            n: self.n,
            a: self.a.iter().map(ComplexScalar::im_part).collect(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exterior::{Complex64, GaussianRational};
    use num::rational::BigRational;

    fn rat(num: i64, den: i64) -> BigRational {
        <BigRational as Scalar>::from_ratio(num, den)
    }

    #[test]
    fn det_matches_cofactor_expansion_3x3() {
        let m = ScalarMat::from_rows(vec![
            vec![2.0, -1.0, 3.0],
            vec![0.5, 4.0, -2.0],
            vec![1.0, 0.0, 1.5],
        ])
        .unwrap();
        // Cofactor expansion by hand: 2*(6-0) + 1*(0.75+2) + 3*(0-4).
        let expected = 2.0 * 6.0 + 1.0 * 2.75 + 3.0 * (-4.0);
        assert!((m.det() - expected).abs() < 1e-12);
    }

    #[test]
    fn exact_det_survives_zero_pivot() {
        let m = ScalarMat::from_rows(vec![
            vec![rat(0, 1), rat(1, 2)],
            vec![rat(1, 3), rat(5, 7)],
        ])
        .unwrap();
        assert_eq!(m.det(), rat(-1, 6));
    }

    #[test]
    fn singular_matrix_has_zero_det_exactly() {
        let m = ScalarMat::from_rows(vec![
            vec![rat(1, 1), rat(2, 1), rat(3, 1)],
            vec![rat(2, 1), rat(4, 1), rat(6, 1)],
            vec![rat(0, 1), rat(1, 1), rat(1, 1)],
        ])
        .unwrap();
        assert!(Scalar::is_zero(&m.det()));
    }

    #[test]
    fn complex_det_agrees_between_backends() {
        // Same Gaussian-rational matrix evaluated exactly and in doubles.
        let g = |re: (i64, i64), im: (i64, i64)| GaussianRational::from_parts(
            rat(re.0, re.1),
            rat(im.0, im.1),
        );
        let exact = ScalarMat::from_rows(vec![
            vec![g((1, 2), (3, 1)), g((-2, 3), (1, 5))],
            vec![g((0, 1), (7, 4)), g((5, 6), (-1, 2))],
        ])
        .unwrap();
        let det_exact = exact.det();
        let to_c64 = |v: &GaussianRational| {
            Complex64::new(
                Scalar::magnitude(&v.re) * if v.re < rat(0, 1) { -1.0 } else { 1.0 },
                Scalar::magnitude(&v.im) * if v.im < rat(0, 1) { -1.0 } else { 1.0 },
            )
        };
        let float = ScalarMat {
            n: 2,
            a: exact.a.iter().map(to_c64).collect(),
        };
        let det_float = float.det();
        let diff = (det_float - to_c64(&det_exact)).norm();
        assert!(diff < 1e-12, "diff {diff}");
    }
}
