//! Dual-route identity checks.
//!
//! Each check computes the same quantity along two independent code paths
//! and reports a relative defect, `|lhs - rhs| / (1 + |rhs|)`. Exact
//! backends are expected to report exactly zero.

use super::characteristic::{chern_forms, euler_form, total_chern_form};
use super::linalg::ScalarMat;
use super::pfaffian::{
    det_form, pfaffian, pfaffian_by_matching_sum, pfaffian_by_recursion, pfaffian_top_power,
    MATCHING_SUM_MAX,
};
use super::realify::{realify_curvature, realify_skew_hermitian};
use crate::error::Result;
use crate::exterior::{Complex64, ComplexScalar, Form, FormMatrix, Scalar};

fn relative(diff: f64, scale: f64) -> f64 {
    diff / (1.0 + scale)
}

/// Production Pfaffian against the top-power oracle, and the matching sum
/// against first-row recursion where both are feasible.
pub fn pfaffian_route_defect<S: Scalar>(m: &FormMatrix<S>) -> Result<f64> {
    let pf = pfaffian(m)?;
    let oracle = pfaffian_top_power(m)?;
    let mut worst = relative(pf.distance(&oracle), oracle.max_magnitude());
    if m.rows() <= MATCHING_SUM_MAX {
        let a = pfaffian_by_matching_sum(m)?;
        let b = pfaffian_by_recursion(m)?;
        worst = worst.max(relative(a.distance(&b), b.max_magnitude()));
    }
    Ok(worst)
}

/// Pf(M) ^ Pf(M) against the Leibniz determinant of M.
pub fn pfaffian_square_det_defect<S: Scalar>(m: &FormMatrix<S>) -> Result<f64> {
    let pf = pfaffian(m)?;
    let square = pf.wedge(&pf);
    let det = det_form(m)?;
    Ok(relative(square.distance(&det), det.max_magnitude()))
}

/// Scalar-level realification identity: Pf of the realified matrix against
/// det(-iX) computed over the complex field.
pub fn realified_det_defect<C: ComplexScalar>(x: &ScalarMat<C>) -> Result<f64> {
    let real = realify_skew_hermitian(x)?;
    let pf = pfaffian(&real.to_form_matrix(0))?.top_coefficient();
    let minus_i = -C::i();
    let det = x.scale(&minus_i).det();
    let lhs = C::from_real(pf);
    let diff = (lhs - det.clone()).magnitude();
    Ok(relative(diff, det.magnitude()))
}

/// Form-level realification identity without transcendental factors:
/// Pf of the realified curvature against det(-i Omega).
pub fn curvature_realified_det_defect<C: ComplexScalar>(omega: &FormMatrix<C>) -> Result<f64> {
    let real = realify_curvature(omega)?;
    let pf = pfaffian(&real)?;
    let minus_i = -C::i();
    let det = det_form(&omega.scale(&minus_i))?;
    let lhs = Form::<C>::from_real(&pf);
    Ok(relative(lhs.distance(&det), det.max_magnitude()))
}

/// Normalized version: the Euler form of the realified curvature against
/// the top Chern form.
pub fn euler_top_chern_defect(omega: &FormMatrix<Complex64>) -> Result<f64> {
    let real = realify_curvature(omega)?;
    let e = euler_form(&real)?;
    let cs = chern_forms(omega)?;
    let top = cs.last().expect("chern_forms returns c_0..c_rank");
    Ok(relative(e.distance(top), top.max_magnitude()))
}

/// Top Pontryagin form of a real even-rank curvature against the wedge
/// square of its Euler form.
pub fn pontryagin_top_euler_defect(m: &FormMatrix<f64>) -> Result<f64> {
    let e = euler_form(m)?;
    let square = e.wedge(&e);
    let p = super::characteristic::pontryagin_forms(m)?;
    let top = p.last().expect("pontryagin_forms returns p_0..p_rank/2");
    Ok(relative(square.distance(top), top.max_magnitude()))
}

/// Total Chern form of a direct sum against the product of the factors.
pub fn whitney_defect(a: &FormMatrix<Complex64>, b: &FormMatrix<Complex64>) -> Result<f64> {
    let sum = a.direct_sum(b)?;
    let lhs = total_chern_form(&sum)?;
    let rhs = total_chern_form(a)?.wedge(&total_chern_form(b)?);
    Ok(relative(lhs.distance(&rhs), rhs.max_magnitude()))
}

/// Formal Whitney factorization det(I + A (+) B) = det(I + A) det(I + B)
/// for arbitrary even-entry matrices; exact over rational backends.
pub fn whitney_defect_formal<S: Scalar>(a: &FormMatrix<S>, b: &FormMatrix<S>) -> Result<f64> {
    let char_det = |m: &FormMatrix<S>| -> Result<Form<S>> {
        det_form(&FormMatrix::identity(m.dim(), m.rows()).add(m))
    };
    let sum = a.direct_sum(b)?;
    let lhs = char_det(&sum)?;
    let rhs = char_det(a)?.wedge(&char_det(b)?);
    Ok(relative(lhs.distance(&rhs), rhs.max_magnitude()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::invariants::samples::{
        random_curvature, random_curvature_exact, random_skew_two_form_matrix,
        random_skew_two_form_matrix_exact, random_unitary_lie_mat, random_unitary_lie_mat_exact,
    };
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn pfaffian_routes_agree_on_random_skew_matrices() {
        let mut rng = ChaCha8Rng::seed_from_u64(100);
        for n in [2usize, 4, 6] {
            for _ in 0..5 {
                let m = random_skew_two_form_matrix(&mut rng, 8, n);
                assert!(pfaffian_route_defect(&m).unwrap() < 1e-12);
            }
        }
    }

    #[test]
    fn top_pontryagin_is_the_euler_square() {
        let mut rng = ChaCha8Rng::seed_from_u64(102);
        for n in [2usize, 4] {
            for _ in 0..5 {
                let m = random_skew_two_form_matrix(&mut rng, 8, n);
                assert!(pontryagin_top_euler_defect(&m).unwrap() < 1e-12);
            }
        }
    }

    #[test]
    fn pfaffian_routes_agree_exactly_over_rationals() {
        let mut rng = ChaCha8Rng::seed_from_u64(101);
        for _ in 0..3 {
            let m = random_skew_two_form_matrix_exact(&mut rng, 8, 4);
            assert_eq!(pfaffian_route_defect(&m).unwrap(), 0.0);
            assert_eq!(pfaffian_square_det_defect(&m).unwrap(), 0.0);
        }
    }

    #[test]
    fn realified_det_identity_holds_exactly() {
        let mut rng = ChaCha8Rng::seed_from_u64(102);
        for n in [1usize, 2, 3] {
            for _ in 0..4 {
                let x = random_unitary_lie_mat_exact(&mut rng, n);
                assert_eq!(realified_det_defect(&x).unwrap(), 0.0);
            }
        }
    }

    #[test]
    fn realified_det_identity_holds_in_floats() {
        let mut rng = ChaCha8Rng::seed_from_u64(103);
        for n in [1usize, 2, 3, 4] {
            for _ in 0..4 {
                let x = random_unitary_lie_mat(&mut rng, n);
                assert!(realified_det_defect(&x).unwrap() < 1e-12);
            }
        }
    }

    #[test]
    fn curvature_realified_det_identity_exact() {
        let mut rng = ChaCha8Rng::seed_from_u64(104);
        for _ in 0..3 {
            let omega = random_curvature_exact(&mut rng, 8, 2);
            assert_eq!(curvature_realified_det_defect(&omega).unwrap(), 0.0);
        }
    }

    #[test]
    fn euler_of_realification_matches_top_chern() {
        let mut rng = ChaCha8Rng::seed_from_u64(105);
        for n in [1usize, 2, 3] {
            for _ in 0..3 {
                let omega = random_curvature(&mut rng, 8, n);
                assert!(euler_top_chern_defect(&omega).unwrap() < 1e-12);
            }
        }
    }

    #[test]
    fn whitney_factorization_on_random_curvatures() {
        let mut rng = ChaCha8Rng::seed_from_u64(106);
        let a = random_curvature(&mut rng, 8, 2);
        let b = random_curvature(&mut rng, 8, 2);
        assert!(whitney_defect(&a, &b).unwrap() < 1e-12);
        let ae = random_curvature_exact(&mut rng, 8, 2);
        let be = random_curvature_exact(&mut rng, 8, 1);
        assert_eq!(whitney_defect_formal(&ae, &be).unwrap(), 0.0);
    }
}
