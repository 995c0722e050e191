//! Sparse alternating forms with graded-commutative wedge product.
//!
//! A form on an m-dimensional ambient space is stored as a map from strictly
//! increasing multi-indices (subsets of {1..m}, encoded as bitmasks) to
//! scalar coefficients. The zero form has no terms; structural equality of
//! the term maps is form equality.

use super::scalar::{ComplexScalar, FloatLike, Scalar};
use crate::error::{Error, Result};
use std::collections::BTreeMap;
use std::fmt;

/// Relative pruning threshold for float coefficients, applied after sums and
/// products: terms with magnitude at or below this fraction of the largest
/// coefficient of the result are dropped. Keeps degenerate cancellation
/// debris out of sparse storage without touching honest small results.
pub const PRUNE_RELATIVE_EPS: f64 = 1e-14;

/// Maximum supported ambient dimension (bitmask encoding).
pub const MAX_DIM: usize = 30;

/// Strictly increasing multi-index over {1..m}, encoded as a bitmask where
/// bit k (zero-based) stands for axis k+1.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct MultiIndex(pub u32);

impl MultiIndex {
    pub const EMPTY: MultiIndex = MultiIndex(0);

    /// Builds from one-based, strictly increasing axis labels.
    pub fn from_axes(axes: &[usize]) -> Result<Self> {
        let mut mask = 0u32;
        let mut prev = 0usize;
        for &a in axes {
            if a == 0 || a > MAX_DIM {
                return Err(Error::ShapeMismatch(format!("axis {a} out of range")));
            }
            if a <= prev {
                return Err(Error::ShapeMismatch(format!(
                    "axes not strictly increasing at {a}"
                )));
            }
            prev = a;
            mask |= 1 << (a - 1);
        }
        Ok(MultiIndex(mask))
    }

    /// One-based axis labels in increasing order.
    pub fn axes(self) -> Vec<usize> {
        let mut out = Vec::with_capacity(self.degree());
        let mut bits = self.0;
        while bits != 0 {
            let p = bits.trailing_zeros();
            out.push(p as usize + 1);
            bits &= bits - 1;
        }
        out
    }

    pub fn degree(self) -> usize {
        self.0.count_ones() as usize
    }

    pub fn contains_axis(self, axis: usize) -> bool {
        axis >= 1 && (self.0 >> (axis - 1)) & 1 == 1
    }

    /// Sign of sorting the concatenation (self, other) into increasing
    /// order; `None` when the indices overlap (wedge vanishes).
    pub fn shuffle(self, other: MultiIndex) -> Option<(MultiIndex, i8)> {
        if self.0 & other.0 != 0 {
            return None;
        }
        let mut inversions = 0u32;
        let mut bits = other.0;
        while bits != 0 {
            let p = bits.trailing_zeros();
            // Elements of self strictly above this element of other.
            inversions += (self.0 >> (p + 1)).count_ones();
            bits &= bits - 1;
        }
        let sign = if inversions % 2 == 0 { 1 } else { -1 };
        Some((MultiIndex(self.0 | other.0), sign))
    }
}

impl fmt::Debug for MultiIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "e{:?}", self.axes())
    }
}

/// Sparse alternating form over an ambient space of fixed dimension.
#[derive(Clone, PartialEq)]
pub struct Form<S: Scalar> {
    dim: usize,
    terms: BTreeMap<u32, S>,
}

impl<S: Scalar> Form<S> {
    pub fn zero(dim: usize) -> Self {
        assert!(dim <= MAX_DIM, "ambient dimension {dim} exceeds {MAX_DIM}");
        Form {
            dim,
            terms: BTreeMap::new(),
        }
    }

    /// Degree-zero form with the given constant coefficient.
    pub fn constant(dim: usize, value: S) -> Self {
        let mut f = Form::zero(dim);
        f.accumulate(MultiIndex::EMPTY, value);
        f.normalize();
        f
    }

    pub fn one(dim: usize) -> Self {
        Form::constant(dim, S::one())
    }

    /// Basis one-form dx_axis (one-based axis label).
    pub fn basis_one_form(dim: usize, axis: usize) -> Self {
        assert!(axis >= 1 && axis <= dim, "axis {axis} out of 1..={dim}");
        let mut f = Form::zero(dim);
        f.accumulate(MultiIndex(1 << (axis - 1)), S::one());
        f
    }

    /// Single term c * dx_axes with strictly increasing one-based axes.
    pub fn monomial(dim: usize, axes: &[usize], coeff: S) -> Result<Self> {
        let idx = MultiIndex::from_axes(axes)?;
        if let Some(&a) = axes.iter().max() {
            if a > dim {
                return Err(Error::ShapeMismatch(format!(
                    "axis {a} exceeds ambient dimension {dim}"
                )));
            }
        }
        let mut f = Form::zero(dim);
        f.accumulate(idx, coeff);
        f.normalize();
        Ok(f)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    /// Iterates terms in canonical (ascending bitmask) order.
    pub fn terms(&self) -> impl Iterator<Item = (MultiIndex, &S)> {
        self.terms.iter().map(|(&k, v)| (MultiIndex(k), v))
    }

    pub fn coefficient(&self, idx: MultiIndex) -> S {
        self.terms.get(&idx.0).cloned().unwrap_or_else(S::zero)
    }

    /// Coefficient of the top monomial dx_1 ^ ... ^ dx_dim.
    pub fn top_coefficient(&self) -> S {
        if self.dim == 0 {
            return self.coefficient(MultiIndex::EMPTY);
        }
        self.coefficient(MultiIndex((1u32 << self.dim) - 1))
    }

    /// Largest coefficient magnitude; zero for the zero form.
    pub fn max_magnitude(&self) -> f64 {
        self.terms
            .values()
            .map(Scalar::magnitude)
            .fold(0.0, f64::max)
    }

    /// Degree when homogeneous, `None` for zero or mixed forms.
    pub fn homogeneous_degree(&self) -> Option<usize> {
        let mut deg = None;
        for (idx, _) in self.terms() {
            match deg {
                None => deg = Some(idx.degree()),
                Some(d) if d != idx.degree() => return None,
                _ => {}
            }
        }
        deg
    }

    /// True when every term has even degree (such entries commute).
    pub fn is_even(&self) -> bool {
        self.terms().all(|(idx, _)| idx.degree() % 2 == 0)
    }

    /// Homogeneous component of the given degree.
    pub fn component(&self, degree: usize) -> Form<S> {
        let mut out = Form::zero(self.dim);
        for (idx, c) in self.terms() {
            if idx.degree() == degree {
                out.accumulate(idx, c.clone());
            }
        }
        out
    }

    /// All nonzero homogeneous components keyed by degree.
    pub fn components(&self) -> BTreeMap<usize, Form<S>> {
        let mut out: BTreeMap<usize, Form<S>> = BTreeMap::new();
        for (idx, c) in self.terms() {
            out.entry(idx.degree())
                .or_insert_with(|| Form::zero(self.dim))
                .accumulate(idx, c.clone());
        }
        out
    }

    fn accumulate(&mut self, idx: MultiIndex, c: S) {
        if c.is_zero() {
            return;
        }
        use std::collections::btree_map::Entry;
        match self.terms.entry(idx.0) {
            Entry::Vacant(e) => {
                e.insert(c);
            }
            Entry::Occupied(mut e) => {
                let sum = e.get().clone() + c;
                if sum.is_zero() {
                    e.remove();
                } else {
                    e.insert(sum);
                }
            }
        }
    }

    /// Drops exact zeros, and for float scalars all coefficients at or below
    /// the relative pruning threshold of this form's largest magnitude.
    pub fn normalize(&mut self) {
        if S::EXACT {
            self.terms.retain(|_, c| !c.is_zero());
            return;
        }
        let max = self.max_magnitude();
        let cutoff = max * PRUNE_RELATIVE_EPS;
        self.terms
            .retain(|_, c| !c.is_zero() && c.magnitude() > cutoff);
    }

    pub fn add(&self, other: &Form<S>) -> Form<S> {
        assert_eq!(
            self.dim, other.dim,
            "ambient dimension mismatch in form addition"
        );
        let mut out = self.clone();
        for (idx, c) in other.terms() {
            out.accumulate(idx, c.clone());
        }
        out.normalize();
        out
    }

    pub fn sub(&self, other: &Form<S>) -> Form<S> {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Form<S> {
        let mut out = Form::zero(self.dim);
        for (idx, c) in self.terms() {
            out.accumulate(idx, -c.clone());
        }
        out
    }

    pub fn scale(&self, factor: &S) -> Form<S> {
        let mut out = Form::zero(self.dim);
        for (idx, c) in self.terms() {
            out.accumulate(idx, c.clone() * factor.clone());
        }
        out.normalize();
        out
    }

    /// Graded-commutative wedge product.
    pub fn wedge(&self, other: &Form<S>) -> Form<S> {
        assert_eq!(
            self.dim, other.dim,
            "ambient dimension mismatch in wedge product"
        );
        let mut out = Form::zero(self.dim);
        for (ia, ca) in self.terms() {
            for (ib, cb) in other.terms() {
                if let Some((idx, sign)) = ia.shuffle(ib) {
                    let mut c = ca.clone() * cb.clone();
                    if sign < 0 {
                        c = -c;
                    }
                    out.accumulate(idx, c);
                }
            }
        }
        out.normalize();
        out
    }

    /// Applies a coefficient map, re-normalizing the result.
    pub fn map_coeffs<T: Scalar>(&self, mut f: impl FnMut(&S) -> T) -> Form<T> {
        let mut out = Form::zero(self.dim);
        for (idx, c) in self.terms() {
            out.accumulate(idx, f(c));
        }
        out.normalize();
        out
    }

    /// Entrywise complex conjugate (identity for real scalars).
    pub fn conj(&self) -> Form<S> {
        self.map_coeffs(Scalar::conj)
    }

    /// Reinterprets the form in a larger ambient space, keeping all terms.
    pub fn extend_dim(&self, new_dim: usize) -> Form<S> {
        assert!(new_dim >= self.dim, "extend_dim cannot shrink");
        let mut out = Form::zero(new_dim);
        for (idx, c) in self.terms() {
            out.accumulate(idx, c.clone());
        }
        out
    }

    /// Largest coefficient magnitude of the difference, as a float distance.
    pub fn distance(&self, other: &Form<S>) -> f64 {
        self.sub(other).max_magnitude()
    }
}

impl<S: ComplexScalar> Form<S> {
    /// Real part, coefficientwise.
    pub fn re_part(&self) -> Form<S::Real> {
        self.map_coeffs(ComplexScalar::re_part)
    }

    /// Imaginary part, coefficientwise.
    pub fn im_part(&self) -> Form<S::Real> {
        self.map_coeffs(ComplexScalar::im_part)
    }

    /// Embeds a real-coefficient form into this complex backend.
    pub fn from_real(f: &Form<S::Real>) -> Form<S> {
        f.map_coeffs(|c| S::from_real(c.clone()))
    }
}

impl<S: FloatLike> Form<S> {
    /// Scales every coefficient by a bare double.
    pub fn scale_f64(&self, factor: f64) -> Form<S> {
        self.scale(&S::from_f64(factor))
    }
}

impl<S: Scalar> fmt::Debug for Form<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let mut first = true;
        for (idx, c) in self.terms() {
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            write!(f, "{c:?}*{idx:?}")?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn dx(dim: usize, axis: usize) -> Form<f64> {
        Form::basis_one_form(dim, axis)
    }

    #[test]
    fn multi_index_round_trip() {
        let idx = MultiIndex::from_axes(&[1, 3, 4]).unwrap();
        assert_eq!(idx.axes(), vec![1, 3, 4]);
        assert_eq!(idx.degree(), 3);
        assert!(MultiIndex::from_axes(&[2, 2]).is_err());
        assert!(MultiIndex::from_axes(&[3, 1]).is_err());
        assert!(MultiIndex::from_axes(&[0]).is_err());
    }

    #[test]
    fn shuffle_sign_matches_hand_count() {
        // e13 ^ e2: moving 2 past 3 costs one inversion.
        let a = MultiIndex::from_axes(&[1, 3]).unwrap();
        let b = MultiIndex::from_axes(&[2]).unwrap();
        let (merged, sign) = a.shuffle(b).unwrap();
        assert_eq!(merged.axes(), vec![1, 2, 3]);
        assert_eq!(sign, -1);
        // Overlap kills the product.
        assert!(a.shuffle(MultiIndex::from_axes(&[3]).unwrap()).is_none());
    }

    #[test]
    fn wedge_anticommutes_on_one_forms() {
        let a = dx(4, 1);
        let b = dx(4, 2);
        let ab = a.wedge(&b);
        let ba = b.wedge(&a);
        assert_eq!(ab, ba.neg());
        assert_eq!(ab.coefficient(MultiIndex::from_axes(&[1, 2]).unwrap()), 1.0);
    }

    #[test]
    fn one_form_squares_to_zero() {
        let a = dx(3, 2).scale(&2.5);
        assert!(a.wedge(&a).is_zero());
    }

    #[test]
    fn even_forms_commute() {
        let a = dx(6, 1).wedge(&dx(6, 2)).add(&dx(6, 3).wedge(&dx(6, 4)));
        let b = dx(6, 2).wedge(&dx(6, 5)).add(&dx(6, 1).wedge(&dx(6, 6)));
        assert_eq!(a.wedge(&b), b.wedge(&a));
    }

    #[test]
    fn top_coefficient_reads_orientation_sign() {
        // -dx2 ^ dx1 = +dx1 ^ dx2.
        let f = dx(2, 2).wedge(&dx(2, 1)).neg();
        assert_eq!(f.top_coefficient(), 1.0);
    }

    #[test]
    fn components_split_mixed_degrees() {
        let f = Form::constant(3, 2.0)
            .add(&dx(3, 1))
            .add(&dx(3, 2).wedge(&dx(3, 3)));
        assert_eq!(f.homogeneous_degree(), None);
        let parts = f.components();
        assert_eq!(parts.len(), 3);
        assert_eq!(parts[&0].coefficient(MultiIndex::EMPTY), 2.0);
        assert_eq!(parts[&1], dx(3, 1));
        assert!(f.component(2).is_even());
    }

    #[test]
    fn pruning_drops_cancellation_debris() {
        let a = Form::monomial(2, &[1], 1.0).unwrap();
        let b = Form::monomial(2, &[1], -1.0 + 1e-17).unwrap();
        let c = Form::monomial(2, &[2], 5.0).unwrap();
        let sum = a.add(&b).add(&c);
        // The 1e-17 leftover on axis 1 is far below 1e-14 * 5.0.
        assert_eq!(sum, c);
    }

    #[test]
    fn pruning_keeps_uniformly_small_results() {
        let a = Form::monomial(2, &[1], 1e-12).unwrap();
        let b = Form::monomial(2, &[2], 3e-12).unwrap();
        let sum = a.add(&b);
        assert_eq!(sum.num_terms(), 2);
    }

    #[test]
    fn degree_zero_ambient_space_holds_constants() {
        let f = Form::constant(0, 4.0);
        assert_eq!(f.top_coefficient(), 4.0);
        assert_eq!(f.wedge(&f).top_coefficient(), 16.0);
    }
}
