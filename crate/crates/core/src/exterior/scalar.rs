//! Scalar backends for form coefficients.
//!
//! Every form is generic over a coefficient ring: double precision for
//! numerical work (`f64`, `Complex64`) and arbitrary-precision rationals for
//! exact identity checking (`BigRational`, `GaussianRational`). Exact scalars
//! prune only true zeros; float scalars prune relative to the largest
//! coefficient magnitude of the result they appear in.

use num::complex::Complex;
use num::rational::BigRational;
use num::{BigInt, ToPrimitive, Zero};
use std::fmt::Debug;
use std::ops::{Add, Mul, Neg, Sub};

/// Complex double-precision scalar.
pub type Complex64 = Complex<f64>;

/// Exact complex scalar with rational real and imaginary parts.
pub type GaussianRational = Complex<BigRational>;

/// Coefficient ring used by forms and matrices.
///
/// `magnitude` is an approximate absolute value used for pruning thresholds,
/// pivot selection, and diagnostics; for exact scalars it is advisory only.
pub trait Scalar:
    Clone
    + PartialEq
    + Debug
    + Send
    + Sync
    + 'static
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Neg<Output = Self>
{
    /// Whether arithmetic is exact (rational) rather than floating point.
    const EXACT: bool;

    fn zero() -> Self;
    fn one() -> Self;
    fn is_zero(&self) -> bool;

    /// Approximate absolute value, as a double.
    fn magnitude(&self) -> f64;

    fn from_i64(v: i64) -> Self;

    /// Complex conjugate; identity on real scalars.
    fn conj(&self) -> Self;

    /// Exact division; `None` when the divisor is zero.
    fn try_div(&self, rhs: &Self) -> Option<Self>;

    /// Ratio of two integers as a scalar; panics on zero denominator.
    fn from_ratio(num: i64, den: i64) -> Self {
        assert!(den != 0, "zero denominator");
        Self::from_i64(num)
            .try_div(&Self::from_i64(den))
            .expect("nonzero denominator")
    }
}

impl Scalar for f64 {
    const EXACT: bool = false;

    fn zero() -> Self {
        0.0
    }
    fn one() -> Self {
        1.0
    }
    fn is_zero(&self) -> bool {
        *self == 0.0
    }
    fn magnitude(&self) -> f64 {
        self.abs()
    }
    fn from_i64(v: i64) -> Self {
        v as f64
    }
    fn conj(&self) -> Self {
        *self
    }
    fn try_div(&self, rhs: &Self) -> Option<Self> {
        if *rhs == 0.0 {
            None
        } else {
            Some(self / rhs)
        }
    }
}

impl Scalar for Complex64 {
    const EXACT: bool = false;

    fn zero() -> Self {
        Complex::new(0.0, 0.0)
    }
    fn one() -> Self {
        Complex::new(1.0, 0.0)
    }
    fn is_zero(&self) -> bool {
        self.re == 0.0 && self.im == 0.0
    }
    fn magnitude(&self) -> f64 {
        self.norm()
    }
    fn from_i64(v: i64) -> Self {
        Complex::new(v as f64, 0.0)
    }
    fn conj(&self) -> Self {
        Complex::conj(self)
    }
    fn try_div(&self, rhs: &Self) -> Option<Self> {
        if Scalar::is_zero(rhs) {
            None
        } else {
            Some(self / rhs)
        }
    }
}

impl Scalar for BigRational {
    const EXACT: bool = true;

    fn zero() -> Self {
        <BigRational as Zero>::zero()
    }
    fn one() -> Self {
        BigRational::from_integer(BigInt::from(1))
    }
    fn is_zero(&self) -> bool {
        Zero::is_zero(self)
    }
    fn magnitude(&self) -> f64 {
        self.to_f64().map(f64::abs).unwrap_or(f64::INFINITY)
    }
    fn from_i64(v: i64) -> Self {
        BigRational::from_integer(BigInt::from(v))
    }
    fn conj(&self) -> Self {
        self.clone()
    }
    fn try_div(&self, rhs: &Self) -> Option<Self> {
        if Zero::is_zero(rhs) {
            None
        } else {
            Some(self / rhs)
        }
    }
}

impl Scalar for GaussianRational {
    const EXACT: bool = true;

    fn zero() -> Self {
        Complex::new(<BigRational as Zero>::zero(), <BigRational as Zero>::zero())
    }
    fn one() -> Self {
        Complex::new(<BigRational as Scalar>::one(), <BigRational as Zero>::zero())
    }
    fn is_zero(&self) -> bool {
        Zero::is_zero(&self.re) && Zero::is_zero(&self.im)
    }
    fn magnitude(&self) -> f64 {
        let re = Scalar::magnitude(&self.re);
        let im = Scalar::magnitude(&self.im);
        re.hypot(im)
    }
    fn from_i64(v: i64) -> Self {
        Complex::new(<BigRational as Scalar>::from_i64(v), <BigRational as Zero>::zero())
    }
    fn conj(&self) -> Self {
        Complex::new(self.re.clone(), -self.im.clone())
    }
    fn try_div(&self, rhs: &Self) -> Option<Self> {
        if Scalar::is_zero(rhs) {
            return None;
        }
        // (a + bi)/(c + di) = (a + bi)(c - di) / (c^2 + d^2), exactly.
        let denom = &rhs.re * &rhs.re + &rhs.im * &rhs.im;
        let num = self * Scalar::conj(rhs);
        Some(Complex::new(num.re / &denom, num.im / denom))
    }
}

/// Complex scalar with an associated real scalar for part extraction.
pub trait ComplexScalar: Scalar {
    type Real: Scalar;

    fn re_part(&self) -> Self::Real;
    fn im_part(&self) -> Self::Real;
    fn from_parts(re: Self::Real, im: Self::Real) -> Self;

    /// The imaginary unit.
    fn i() -> Self {
        Self::from_parts(Self::Real::zero(), Self::Real::one())
    }

    fn from_real(re: Self::Real) -> Self {
        Self::from_parts(re, Self::Real::zero())
    }
}

impl ComplexScalar for Complex64 {
    type Real = f64;

    fn re_part(&self) -> f64 {
        self.re
    }
    fn im_part(&self) -> f64 {
        self.im
    }
    fn from_parts(re: f64, im: f64) -> Self {
        Complex::new(re, im)
    }
}

impl ComplexScalar for GaussianRational {
    type Real = BigRational;

    fn re_part(&self) -> BigRational {
        self.re.clone()
    }
    fn im_part(&self) -> BigRational {
        self.im.clone()
    }
    fn from_parts(re: BigRational, im: BigRational) -> Self {
        Complex::new(re, im)
    }
}

/// Float-backed scalars that admit scaling by a bare double. The numerical
/// field layer (quadrature, finite differences, pullbacks) is restricted to
/// these backends.
pub trait FloatLike: Scalar {
    fn from_f64(v: f64) -> Self;

    fn mul_f64(&self, f: f64) -> Self;
}

impl FloatLike for f64 {
    fn from_f64(v: f64) -> Self {
        v
    }
    fn mul_f64(&self, f: f64) -> Self {
        self * f
    }
}

impl FloatLike for Complex64 {
    fn from_f64(v: f64) -> Self {
        Complex::new(v, 0.0)
    }
    fn mul_f64(&self, f: f64) -> Self {
        self * f
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rational_division_is_exact() {
        let a = <BigRational as Scalar>::from_ratio(1, 3);
        let b = <BigRational as Scalar>::from_ratio(7, 5);
        let q = a.try_div(&b).unwrap();
        assert_eq!(q, <BigRational as Scalar>::from_ratio(5, 21));
        assert!(a.try_div(&<BigRational as Scalar>::zero()).is_none());
    }

    #[test]
    fn gaussian_rational_division_round_trips() {
        let a = GaussianRational::from_parts(
            <BigRational as Scalar>::from_ratio(3, 2),
            <BigRational as Scalar>::from_ratio(-1, 4),
        );
        let b = GaussianRational::from_parts(
            <BigRational as Scalar>::from_ratio(2, 7),
            <BigRational as Scalar>::from_ratio(5, 3),
        );
        let q = a.try_div(&b).unwrap();
        assert_eq!(q * b, a);
    }

    #[test]
    fn i_squares_to_minus_one() {
        let i = <GaussianRational as ComplexScalar>::i();
        assert_eq!(i.clone() * i, <GaussianRational as Scalar>::from_i64(-1));
        let i = <Complex64 as ComplexScalar>::i();
        assert_eq!(i * i, <Complex64 as Scalar>::from_i64(-1));
    }
}
