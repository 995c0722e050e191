//! The complex-to-real dictionary for skew-Hermitian matrices and curvature.
//!
//! A complex matrix X = A + iB acting on a unitary frame (s_1..s_n) becomes
//! the real block matrix [[A, B], [-B, A]] on (s_1..s_n, is_1..is_n); rows
//! and columns are then rearranged into the interleaved oriented basis
//! (s_1, is_1, s_2, is_2, ...). The same rearrangement applies to curvature
//! matrices entrywise. Key identities, checked exhaustively by the fuzz
//! suites: Pf(realified X) = det(-i X) for X skew-Hermitian, and the Euler
//! form of the realified curvature equals det((i/2pi) Omega).

use super::linalg::ScalarMat;
use super::pfaffian::SKEW_TOL_REL;
use crate::error::{Error, Result};
use crate::exterior::{ComplexScalar, Form, FormMatrix};

/// Zero-based interleaving: position k of the oriented real basis holds
/// block index perm[k], where the first block is (s_i) and the second (is_i).
pub fn interleave_permutation(n: usize) -> Vec<usize> {
    let mut perm = Vec::with_capacity(2 * n);
    for t in 0..n {
        perm.push(t);
        perm.push(n + t);
    }
    perm
}

fn check_scalar_skew_hermitian<C: ComplexScalar>(x: &ScalarMat<C>) -> Result<()> {
    let defect = x.skew_hermitian_defect();
    let allowed = if C::EXACT {
        0.0
    } else {
        SKEW_TOL_REL * (1.0 + x.max_magnitude())
    };
    if defect > allowed {
        return Err(Error::SymmetryViolation(format!(
            "realification requires a skew-Hermitian matrix, defect {defect:.3e}"
        )));
    }
    Ok(())
}

/// Realifies a skew-Hermitian scalar matrix into the interleaved oriented
/// basis; the result is skew-symmetric of doubled size.
pub fn realify_skew_hermitian<C: ComplexScalar>(x: &ScalarMat<C>) -> Result<ScalarMat<C::Real>> {
    check_scalar_skew_hermitian(x)?;
    let n = x.n();
    let a = x.re_part();
    let b = x.im_part();
    let perm = interleave_permutation(n);
    let block = |i: usize, j: usize| -> C::Real {
        match (i < n, j < n) {
            (true, true) => a.get(i, j).clone(),
            (true, false) => b.get(i, j - n).clone(),
            (false, true) => -b.get(i - n, j).clone(),
            (false, false) => a.get(i - n, j - n).clone(),
        }
    };
    let mut out = ScalarMat::zero(2 * n);
    for k in 0..2 * n {
        for l in 0..2 * n {
            out.set(k, l, block(perm[k], perm[l]));
        }
    }
    Ok(out)
}

/// Realifies a skew-Hermitian-valued curvature matrix entrywise, into the
/// same interleaved basis.
pub fn realify_curvature<C: ComplexScalar>(
    omega: &FormMatrix<C>,
) -> Result<FormMatrix<C::Real>> {
    if !omega.is_square() {
        return Err(Error::ShapeMismatch(format!(
            "curvature matrix is {}x{}",
            omega.rows(),
            omega.cols()
        )));
    }
    let defect = omega.skew_hermitian_defect();
    let allowed = if C::EXACT {
        0.0
    } else {
        SKEW_TOL_REL * (1.0 + omega.max_magnitude())
    };
    if defect > allowed {
        return Err(Error::SymmetryViolation(format!(
            "realification requires skew-Hermitian-valued curvature, defect {defect:.3e}"
        )));
    }
    let n = omega.rows();
    let dim = omega.dim();
    let a = omega.re_part();
    let b = omega.im_part();
    let perm = interleave_permutation(n);
    let block = |i: usize, j: usize| -> Form<C::Real> {
        match (i < n, j < n) {
            (true, true) => a.entry(i, j).clone(),
            (true, false) => b.entry(i, j - n).clone(),
            (false, true) => b.entry(i - n, j).neg(),
            (false, false) => a.entry(i - n, j - n).clone(),
        }
    };
    let mut out = FormMatrix::zero(dim, 2 * n, 2 * n);
    for k in 0..2 * n {
        for l in 0..2 * n {
            *out.entry_mut(k, l) = block(perm[k], perm[l]);
        }
    }
    Ok(out)
}

/// Reconstructs the complex curvature from an interleaved realification:
/// the inverse of `realify_curvature` on its image.
pub fn complex_from_realified<C: ComplexScalar>(
    real: &FormMatrix<C::Real>,
) -> Result<FormMatrix<C>> {
    if !real.is_square() || real.rows() % 2 != 0 {
        return Err(Error::NotEvenSquare {
            rows: real.rows(),
            cols: real.cols(),
        });
    }
    let n = real.rows() / 2;
    let dim = real.dim();
    let mut out = FormMatrix::zero(dim, n, n);
    for i in 0..n {
        for j in 0..n {
            // Row s_i, columns (s_j, is_j) sit at interleaved (2i, 2j) and
            // (2i, 2j+1).
            let re = real.entry(2 * i, 2 * j);
            let im = real.entry(2 * i, 2 * j + 1);
            let mut f = Form::zero(dim);
            for (idx, c) in re.terms() {
                f = f.add(
                    &Form::monomial(dim, &idx.axes(), C::from_real(c.clone())).expect("valid"),
                );
            }
            for (idx, c) in im.terms() {
                let coeff = C::i() * C::from_real(c.clone());
                f = f.add(&Form::monomial(dim, &idx.axes(), coeff).expect("valid"));
            }
            *out.entry_mut(i, j) = f;
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exterior::{Complex64, GaussianRational, Scalar};
    use crate::invariants::pfaffian::pfaffian;
    use num::rational::BigRational;

    fn rat(num: i64, den: i64) -> BigRational {
        <BigRational as Scalar>::from_ratio(num, den)
    }

    #[test]
    fn interleave_is_a_permutation() {
        let p = interleave_permutation(3);
        assert_eq!(p, vec![0, 3, 1, 4, 2, 5]);
    }

    #[test]
    fn one_by_one_realification_recovers_pfaffian_sign() {
        // X = [ib]: realified [[0, b], [-b, 0]], Pf = b = det(-i * ib).
        let b = rat(7, 3);
        let x = ScalarMat::from_rows(vec![vec![GaussianRational::from_parts(
            rat(0, 1),
            b.clone(),
        )]])
        .unwrap();
        let r = realify_skew_hermitian(&x).unwrap();
        assert_eq!(r.get(0, 1), &b);
        let pf = pfaffian(&r.to_form_matrix(0)).unwrap().top_coefficient();
        assert_eq!(pf, b);
    }

    #[test]
    fn realified_matrix_is_skew() {
        let x = ScalarMat::from_rows(vec![
            vec![
                GaussianRational::from_parts(rat(0, 1), rat(2, 1)),
                GaussianRational::from_parts(rat(1, 2), rat(-1, 3)),
            ],
            vec![
                GaussianRational::from_parts(rat(-1, 2), rat(-1, 3)),
                GaussianRational::from_parts(rat(0, 1), rat(5, 4)),
            ],
        ])
        .unwrap();
        let r = realify_skew_hermitian(&x).unwrap();
        let defect = r.add(&r.transpose()).max_magnitude();
        assert_eq!(defect, 0.0);
    }

    #[test]
    fn non_skew_hermitian_matrix_is_rejected() {
        let x = ScalarMat::from_rows(vec![vec![Complex64::new(1.0, 0.0)]]).unwrap();
        assert!(realify_skew_hermitian(&x).is_err());
    }

    #[test]
    fn curvature_round_trip_through_realification() {
        let dim = 4;
        let mut omega = FormMatrix::<Complex64>::zero(dim, 2, 2);
        *omega.entry_mut(0, 0) =
            Form::monomial(dim, &[1, 2], Complex64::new(0.0, 1.5)).unwrap();
        *omega.entry_mut(1, 1) = Form::monomial(dim, &[3, 4], Complex64::new(0.0, -0.5)).unwrap();
        *omega.entry_mut(0, 1) = Form::monomial(dim, &[1, 3], Complex64::new(0.7, 0.3)).unwrap();
        *omega.entry_mut(1, 0) = Form::monomial(dim, &[1, 3], Complex64::new(-0.7, 0.3)).unwrap();
        let real = realify_curvature(&omega).unwrap();
        assert!(real.skew_defect() < 1e-15);
        let back: FormMatrix<Complex64> = complex_from_realified::<Complex64>(&real).unwrap();
        assert!(back.distance(&omega) < 1e-15);
    }
}
