//! Matrices with form entries, composed with the wedge product.

use super::form::Form;
use super::scalar::{ComplexScalar, FloatLike, Scalar};
use crate::error::{Error, Result};

/// Rectangular matrix of forms over a shared ambient space. Row convention:
/// a connection or curvature matrix acts on a frame by D s_i = sum_j M_ij s_j.
#[derive(Clone, PartialEq, Debug)]
pub struct FormMatrix<S: Scalar> {
    rows: usize,
    cols: usize,
    dim: usize,
    entries: Vec<Form<S>>,
}

impl<S: Scalar> FormMatrix<S> {
    pub fn zero(dim: usize, rows: usize, cols: usize) -> Self {
        FormMatrix {
            rows,
            cols,
            dim,
            entries: vec![Form::zero(dim); rows * cols],
        }
    }

    /// Identity with degree-zero unit diagonal.
    pub fn identity(dim: usize, n: usize) -> Self {
        let mut m = FormMatrix::zero(dim, n, n);
        for i in 0..n {
            *m.entry_mut(i, i) = Form::one(dim);
        }
        m
    }

    /// Builds from a row-major vector of entries.
    pub fn from_entries(dim: usize, rows: usize, cols: usize, entries: Vec<Form<S>>) -> Result<Self> {
        if entries.len() != rows * cols {
            return Err(Error::ShapeMismatch(format!(
                "expected {} entries, got {}",
                rows * cols,
                entries.len()
            )));
        }
        for e in &entries {
            if e.dim() != dim {
                return Err(Error::DimensionMismatch(dim, e.dim()));
            }
        }
        Ok(FormMatrix {
            rows,
            cols,
            dim,
            entries,
        })
    }

    /// Builds an n x n matrix of scalars as degree-zero forms.
    pub fn from_scalars(dim: usize, n: usize, values: &[S]) -> Result<Self> {
        let entries = values
            .iter()
            .map(|v| Form::constant(dim, v.clone()))
            .collect();
        FormMatrix::from_entries(dim, n, n, entries)
    }

    pub fn rows(&self) -> usize {
        self.rows
    }
    pub fn cols(&self) -> usize {
        self.cols
    }
    pub fn dim(&self) -> usize {
        self.dim
    }
    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn entry(&self, i: usize, j: usize) -> &Form<S> {
        &self.entries[i * self.cols + j]
    }

    pub fn entry_mut(&mut self, i: usize, j: usize) -> &mut Form<S> {
        &mut self.entries[i * self.cols + j]
    }

    pub fn add(&self, other: &FormMatrix<S>) -> FormMatrix<S> {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        let entries = self
            .entries
            .iter()
            .zip(&other.entries)
            .map(|(a, b)| a.add(b))
            .collect();
        FormMatrix {
            rows: self.rows,
            cols: self.cols,
            dim: self.dim,
            entries,
        }
    }

    pub fn sub(&self, other: &FormMatrix<S>) -> FormMatrix<S> {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> FormMatrix<S> {
        self.map(|f| f.neg())
    }

    pub fn scale(&self, factor: &S) -> FormMatrix<S> {
        self.map(|f| f.scale(factor))
    }

    /// Left-wedges every entry with a fixed form.
    pub fn scale_form(&self, factor: &Form<S>) -> FormMatrix<S> {
        self.map(|f| factor.wedge(f))
    }

    /// Matrix product with wedge-multiplied entries:
    /// (A B)_ij = sum_k A_ik ^ B_kj.
    pub fn wedge_mul(&self, other: &FormMatrix<S>) -> FormMatrix<S> {
        assert_eq!(self.cols, other.rows, "inner dimension mismatch");
        assert_eq!(self.dim, other.dim, "ambient dimension mismatch");
        let mut out = FormMatrix::zero(self.dim, self.rows, other.cols);
        for i in 0..self.rows {
            for j in 0..other.cols {
                let mut acc = Form::zero(self.dim);
                for k in 0..self.cols {
                    acc = acc.add(&self.entry(i, k).wedge(other.entry(k, j)));
                }
                *out.entry_mut(i, j) = acc;
            }
        }
        out
    }

    pub fn transpose(&self) -> FormMatrix<S> {
        let mut out = FormMatrix::zero(self.dim, self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                *out.entry_mut(j, i) = self.entry(i, j).clone();
            }
        }
        out
    }

    /// Entrywise conjugate (identity for real scalars).
    pub fn conj(&self) -> FormMatrix<S> {
        self.map(Form::conj)
    }

    pub fn conj_transpose(&self) -> FormMatrix<S> {
        self.transpose().conj()
    }

    pub fn map(&self, f: impl Fn(&Form<S>) -> Form<S>) -> FormMatrix<S> {
        FormMatrix {
            rows: self.rows,
            cols: self.cols,
            dim: self.dim,
            entries: self.entries.iter().map(f).collect(),
        }
    }

    pub fn map_entries<T: Scalar>(&self, f: impl Fn(&Form<S>) -> Form<T>) -> FormMatrix<T> {
        let entries: Vec<Form<T>> = self.entries.iter().map(f).collect();
        let dim = entries.first().map(Form::dim).unwrap_or(self.dim);
        FormMatrix {
            rows: self.rows,
            cols: self.cols,
            dim,
            entries,
        }
    }

    pub fn trace(&self) -> Form<S> {
        assert!(self.is_square(), "trace of non-square matrix");
        let mut acc = Form::zero(self.dim);
        for i in 0..self.rows {
            acc = acc.add(self.entry(i, i));
        }
        acc
    }

    pub fn max_magnitude(&self) -> f64 {
        self.entries
            .iter()
            .map(Form::max_magnitude)
            .fold(0.0, f64::max)
    }

    /// True when every entry has only even-degree terms.
    pub fn is_even(&self) -> bool {
        self.entries.iter().all(Form::is_even)
    }

    /// Largest magnitude of M + M^t; zero for exactly skew matrices.
    pub fn skew_defect(&self) -> f64 {
        self.add(&self.transpose()).max_magnitude()
    }

    /// Largest magnitude of M + conj(M)^t; zero for skew-Hermitian-valued
    /// matrices.
    pub fn skew_hermitian_defect(&self) -> f64 {
        self.add(&self.conj_transpose()).max_magnitude()
    }

    /// Reinterprets all entries in a larger ambient space.
    pub fn extend_dim(&self, new_dim: usize) -> FormMatrix<S> {
        self.map_entries(|f| f.extend_dim(new_dim))
    }

    /// Largest entrywise difference magnitude.
    pub fn distance(&self, other: &FormMatrix<S>) -> f64 {
        self.sub(other).max_magnitude()
    }

    /// Block-diagonal concatenation; both blocks must share the ambient
    /// dimension.
    pub fn direct_sum(&self, other: &FormMatrix<S>) -> crate::error::Result<FormMatrix<S>> {
        if self.dim != other.dim {
            return Err(crate::error::Error::DimensionMismatch(self.dim, other.dim));
        }
        let mut out = FormMatrix::zero(self.dim, self.rows + other.rows, self.cols + other.cols);
        for i in 0..self.rows {
            for j in 0..self.cols {
                *out.entry_mut(i, j) = self.entry(i, j).clone();
            }
        }
        for i in 0..other.rows {
            for j in 0..other.cols {
                *out.entry_mut(self.rows + i, self.cols + j) = other.entry(i, j).clone();
            }
        }
        Ok(out)
    }
}

impl<S: ComplexScalar> FormMatrix<S> {
    pub fn re_part(&self) -> FormMatrix<S::Real> {
        self.map_entries(Form::re_part)
    }

    pub fn im_part(&self) -> FormMatrix<S::Real> {
        self.map_entries(Form::im_part)
    }

    pub fn from_real(m: &FormMatrix<S::Real>) -> FormMatrix<S> {
        let entries = m.entries.iter().map(|f| Form::<S>::from_real(f)).collect();
        FormMatrix {
            rows: m.rows,
            cols: m.cols,
            dim: m.dim,
            entries,
        }
    }
}

impl<S: FloatLike> FormMatrix<S> {
    pub fn scale_f64(&self, factor: f64) -> FormMatrix<S> {
        self.map(|f| f.scale_f64(factor))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn one_form(dim: usize, axis: usize, c: f64) -> Form<f64> {
        Form::basis_one_form(dim, axis).scale(&c)
    }

    #[test]
    fn wedge_mul_matches_hand_expansion() {
        // A = [[dx1, dx2], [0, dx3]], B = [[dx2, 0], [dx3, dx1]].
        let dim = 3;
        let a = FormMatrix::from_entries(
            dim,
            2,
            2,
            vec![
                one_form(dim, 1, 1.0),
                one_form(dim, 2, 1.0),
                Form::zero(dim),
                one_form(dim, 3, 1.0),
            ],
        )
        .unwrap();
        let b = FormMatrix::from_entries(
            dim,
            2,
            2,
            vec![
                one_form(dim, 2, 1.0),
                Form::zero(dim),
                one_form(dim, 3, 1.0),
                one_form(dim, 1, 1.0),
            ],
        )
        .unwrap();
        let ab = a.wedge_mul(&b);
        // (AB)_11 = dx1^dx2 + dx2^dx3.
        let expect = one_form(dim, 1, 1.0)
            .wedge(&one_form(dim, 2, 1.0))
            .add(&one_form(dim, 2, 1.0).wedge(&one_form(dim, 3, 1.0)));
        assert_eq!(*ab.entry(0, 0), expect);
        // (AB)_21 = dx3 ^ dx3 = 0.
        assert!(ab.entry(1, 0).is_zero());
        // (AB)_22 = dx3 ^ dx1.
        assert_eq!(
            *ab.entry(1, 1),
            one_form(dim, 3, 1.0).wedge(&one_form(dim, 1, 1.0))
        );
    }

    #[test]
    fn identity_is_neutral_for_wedge_mul() {
        let dim = 2;
        let a = FormMatrix::from_entries(
            dim,
            2,
            2,
            vec![
                Form::one(dim),
                one_form(dim, 1, 2.0),
                one_form(dim, 2, -1.0),
                Form::one(dim),
            ],
        )
        .unwrap();
        let id = FormMatrix::identity(dim, 2);
        assert_eq!(a.wedge_mul(&id), a);
        assert_eq!(id.wedge_mul(&a), a);
    }

    #[test]
    fn skew_defect_detects_symmetry() {
        let dim = 2;
        let skew = FormMatrix::from_entries(
            dim,
            2,
            2,
            vec![
                Form::zero(dim),
                one_form(dim, 1, 3.0),
                one_form(dim, 1, -3.0),
                Form::zero(dim),
            ],
        )
        .unwrap();
        assert_eq!(skew.skew_defect(), 0.0);
        let not_skew = FormMatrix::from_entries(
            dim,
            2,
            2,
            vec![
                Form::zero(dim),
                one_form(dim, 1, 3.0),
                one_form(dim, 1, 3.0),
                Form::zero(dim),
            ],
        )
        .unwrap();
        assert!(not_skew.skew_defect() > 1.0);
    }

    #[test]
    fn square_of_skew_one_form_matrix_is_skew() {
        // For a skew matrix of one-forms, M^2 (wedge) is again skew.
        let dim = 4;
        let m = FormMatrix::from_entries(
            dim,
            4,
            4,
            (0..16)
                .map(|k| {
                    let (i, j) = (k / 4, k % 4);
                    use std::cmp::Ordering;
                    match i.cmp(&j) {
                        Ordering::Less => one_form(dim, ((i + j) % dim) + 1, (i + 2 * j) as f64),
                        Ordering::Greater => {
                            one_form(dim, ((i + j) % dim) + 1, -((j + 2 * i) as f64))
                        }
                        Ordering::Equal => Form::zero(dim),
                    }
                })
                .collect(),
        )
        .unwrap();
        assert!(m.skew_defect() < 1e-12);
        let m2 = m.wedge_mul(&m);
        assert!(m2.skew_defect() < 1e-12);
    }
}
