//! Pfaffians and determinants of matrices with commuting form entries.
//!
//! Two independent Pfaffian routes are kept side by side: a perfect-matching
//! signed sum (with a first-row recursion above size 8), and a construction
//! that wedges the associated two-form to its top power in an auxiliary
//! exterior algebra. Tests hold the two routes against each other.

use crate::error::{Error, Result};
use crate::exterior::{Form, FormMatrix, MultiIndex, Scalar, MAX_DIM};

/// Relative tolerance for skewness preconditions on float inputs.
pub const SKEW_TOL_REL: f64 = 1e-9;

/// Size cutoff for exhaustive matching enumeration; larger matrices use the
/// first-row recursion.
pub const MATCHING_SUM_MAX: usize = 8;

fn check_even_square(m: &FormMatrix<impl Scalar>, what: &str) -> Result<usize> {
    if !m.is_square() || m.rows() % 2 != 0 {
        return Err(Error::NotEvenSquare {
            rows: m.rows(),
            cols: m.cols(),
        });
    }
    if !m.is_even() {
        return Err(Error::DegreeViolation(format!(
            "{what} requires even-degree entries"
        )));
    }
    Ok(m.rows())
}

fn check_skew<S: Scalar>(m: &FormMatrix<S>, what: &str) -> Result<()> {
    let defect = m.skew_defect();
    let allowed = if S::EXACT {
        0.0
    } else {
        SKEW_TOL_REL * (1.0 + m.max_magnitude())
    };
    if defect > allowed {
        return Err(Error::SymmetryViolation(format!(
            "{what} requires a skew matrix, defect {defect:.3e}"
        )));
    }
    Ok(())
}

/// Enumerates perfect matchings of {0..2n-1} as pair lists together with the
/// sign of the permutation (i1 j1 i2 j2 ...). Pairs are emitted with the
/// smallest free element first, so products over a matching have a definite
/// order.
pub fn perfect_matchings(size: usize) -> Vec<(Vec<(usize, usize)>, i8)> {
    assert!(size % 2 == 0);
    let mut out = Vec::new();
    let mut pairs = Vec::with_capacity(size / 2);
    let mut free: Vec<usize> = (0..size).collect();
    fn recurse(
        free: &mut Vec<usize>,
        pairs: &mut Vec<(usize, usize)>,
        sign: i8,
        out: &mut Vec<(Vec<(usize, usize)>, i8)>,
    ) {
        if free.is_empty() {
            out.push((pairs.clone(), sign));
            return;
        }
        let a = free[0];
        for k in 1..free.len() {
            let b = free[k];
            // Pairing a with free[k] skips k-1 elements: sign (-1)^(k-1).
            let s = if (k - 1) % 2 == 0 { sign } else { -sign };
            let mut rest: Vec<usize> = free[1..].to_vec();
            rest.remove(k - 1);
            pairs.push((a, b));
            recurse(&mut rest, pairs, s, out);
            pairs.pop();
        }
    }
    recurse(&mut free, &mut pairs, 1, &mut out);
    out
}

/// Pfaffian of a skew matrix of commuting (even-degree) form entries.
///
/// Normalized so that Pf([[0, a], [-a, 0]]) = a.
pub fn pfaffian<S: Scalar>(m: &FormMatrix<S>) -> Result<Form<S>> {
    let size = check_even_square(m, "pfaffian")?;
    check_skew(m, "pfaffian")?;
    if size == 0 {
        return Ok(Form::one(m.dim()));
    }
    if size <= MATCHING_SUM_MAX {
        Ok(pfaffian_matching_sum(m))
    } else {
        let live: Vec<usize> = (0..size).collect();
        Ok(pfaffian_recursive(m, &live))
    }
}

/// Matching-sum route, exposed for route-agreement checks; cost grows as
/// (size-1)!!, so it is gated to MATCHING_SUM_MAX in production dispatch.
pub fn pfaffian_by_matching_sum<S: Scalar>(m: &FormMatrix<S>) -> Result<Form<S>> {
    let size = check_even_square(m, "pfaffian")?;
    check_skew(m, "pfaffian")?;
    if size == 0 {
        return Ok(Form::one(m.dim()));
    }
    Ok(pfaffian_matching_sum(m))
}

/// First-row recursion route, exposed for route-agreement checks.
pub fn pfaffian_by_recursion<S: Scalar>(m: &FormMatrix<S>) -> Result<Form<S>> {
    let size = check_even_square(m, "pfaffian")?;
    check_skew(m, "pfaffian")?;
    let live: Vec<usize> = (0..size).collect();
    Ok(pfaffian_recursive(m, &live))
}

fn pfaffian_matching_sum<S: Scalar>(m: &FormMatrix<S>) -> Form<S> {
    let size = m.rows();
    let mut acc = Form::zero(m.dim());
    for (pairs, sign) in perfect_matchings(size) {
        let mut term = Form::one(m.dim());
        for &(i, j) in &pairs {
            term = term.wedge(m.entry(i, j));
        }
        if sign < 0 {
            term = term.neg();
        }
        acc = acc.add(&term);
    }
    acc
}

/// First-row expansion: Pf(A) over live indices {a, r1, r2, ...} equals
/// sum_k (-1)^k A[a][rk] Pf(A minus {a, rk}).
fn pfaffian_recursive<S: Scalar>(m: &FormMatrix<S>, live: &[usize]) -> Form<S> {
    if live.is_empty() {
        return Form::one(m.dim());
    }
    let a = live[0];
    let mut acc = Form::zero(m.dim());
    for k in 1..live.len() {
        let b = live[k];
        let mut rest: Vec<usize> = live[1..].to_vec();
        rest.remove(k - 1);
        let mut term = m.entry(a, b).wedge(&pfaffian_recursive(m, &rest));
        if (k - 1) % 2 == 1 {
            term = term.neg();
        }
        acc = acc.add(&term);
    }
    acc
}

/// Pfaffian by the top-power construction: build the two-form
/// T = sum_{k,l} C_kl x_k ^ x_l on auxiliary axes x_1..x_size, wedge it to
/// the (size/2)-th power, and divide by 2^n n!. The coefficient of the
/// auxiliary top form is the Pfaffian. Used as an independent oracle for the
/// matching-sum route; entries may be scalars or even forms.
pub fn pfaffian_top_power<S: Scalar>(m: &FormMatrix<S>) -> Result<Form<S>> {
    let size = check_even_square(m, "pfaffian")?;
    check_skew(m, "pfaffian")?;
    let n = size / 2;
    let ambient = m.dim();
    let total = ambient + size;
    if total > MAX_DIM {
        return Err(Error::Unsupported(format!(
            "auxiliary algebra needs {total} axes, cap is {MAX_DIM}"
        )));
    }
    if size == 0 {
        return Ok(Form::one(ambient));
    }
    // T = sum over all (k, l): entries sit in the ambient block, auxiliary
    // axes come after it.
    let mut t = Form::zero(total);
    for k in 0..size {
        for l in 0..size {
            let entry = m.entry(k, l);
            if entry.is_zero() {
                continue;
            }
            let aux = Form::basis_one_form(total, ambient + k + 1)
                .wedge(&Form::basis_one_form(total, ambient + l + 1));
            t = t.add(&entry.extend_dim(total).wedge(&aux));
        }
    }
    let mut power = Form::one(total);
    for _ in 0..n {
        power = power.wedge(&t);
    }
    let mut denom = S::one();
    for k in 1..=n {
        denom = denom * S::from_i64(2 * k as i64);
    }
    let scaled = power.scale(&S::one().try_div(&denom).expect("nonzero factorial"));
    // Every surviving term carries the full auxiliary index set; strip it.
    let aux_mask = ((1u32 << size) - 1) << ambient;
    let mut out = Form::zero(ambient);
    for (idx, c) in scaled.terms() {
        debug_assert_eq!(idx.0 & aux_mask, aux_mask);
        let ambient_idx = MultiIndex(idx.0 & !aux_mask);
        out = out.add(&Form::monomial(ambient, &ambient_idx.axes(), c.clone()).expect("valid index"));
    }
    Ok(out)
}

/// Full polarization of the Pfaffian: the coefficient of t_1 ... t_n in
/// Pf(t_1 A_1 + ... + t_n A_n), divided by n!. Restricting all slots to the
/// same matrix recovers the plain Pfaffian. Entries must commute (all even)
/// unless there is a single slot, where odd entries are allowed.
pub fn polarized_pfaffian<S: Scalar>(slots: &[FormMatrix<S>]) -> Result<Form<S>> {
    if slots.is_empty() {
        return Err(Error::ShapeMismatch("no slot matrices".into()));
    }
    let n = slots.len();
    let size = 2 * n;
    let dim = slots[0].dim();
    for m in slots {
        if !m.is_square() || m.rows() != size {
            return Err(Error::NotEvenSquare {
                rows: m.rows(),
                cols: m.cols(),
            });
        }
        if m.dim() != dim {
            return Err(Error::DimensionMismatch(dim, m.dim()));
        }
        check_skew(m, "polarized pfaffian")?;
        if n > 1 && !m.is_even() {
            return Err(Error::Unsupported(
                "odd-degree slot entries are only supported with a single slot".into(),
            ));
        }
    }
    let mut acc = Form::zero(dim);
    let matchings = perfect_matchings(size);
    for (assignment, _) in signed_permutations(n) {
        for (pairs, sign) in &matchings {
            let mut term = Form::one(dim);
            for (k, &(i, j)) in pairs.iter().enumerate() {
                term = term.wedge(slots[assignment[k]].entry(i, j));
            }
            if *sign < 0 {
                term = term.neg();
            }
            acc = acc.add(&term);
        }
    }
    let mut denom = S::one();
    for k in 1..=n {
        denom = denom * S::from_i64(k as i64);
    }
    Ok(acc.scale(&S::one().try_div(&denom).expect("nonzero factorial")))
}

/// Signed permutations of 0..n for Leibniz expansions.
fn signed_permutations(n: usize) -> Vec<(Vec<usize>, i8)> {
    let mut out = Vec::new();
    let mut perm: Vec<usize> = Vec::with_capacity(n);
    let mut used = vec![false; n];
    fn recurse(
        n: usize,
        perm: &mut Vec<usize>,
        used: &mut Vec<bool>,
        sign: i8,
        out: &mut Vec<(Vec<usize>, i8)>,
    ) {
        if perm.len() == n {
            out.push((perm.clone(), sign));
            return;
        }
        for v in 0..n {
            if used[v] {
                continue;
            }
            // Parity contribution: inversions against already placed values.
            let inv = perm.iter().filter(|&&p| p > v).count();
            let s = if inv % 2 == 0 { sign } else { -sign };
            used[v] = true;
            perm.push(v);
            recurse(n, perm, used, s, out);
            perm.pop();
            used[v] = false;
        }
    }
    recurse(n, &mut perm, &mut used, 1, &mut out);
    out
}

/// Determinant of a matrix of commuting form entries, by the Leibniz sum.
pub fn det_form<S: Scalar>(m: &FormMatrix<S>) -> Result<Form<S>> {
    if !m.is_square() {
        return Err(Error::ShapeMismatch(format!(
            "determinant of {}x{} matrix",
            m.rows(),
            m.cols()
        )));
    }
    if !m.is_even() {
        return Err(Error::DegreeViolation(
            "determinant requires even-degree entries".into(),
        ));
    }
    let n = m.rows();
    let mut acc = Form::zero(m.dim());
    for (perm, sign) in signed_permutations(n) {
        let mut term = Form::one(m.dim());
        for (i, &j) in perm.iter().enumerate() {
            term = term.wedge(m.entry(i, j));
            if term.is_zero() {
                break;
            }
        }
        if sign < 0 {
            term = term.neg();
        }
        acc = acc.add(&term);
    }
    Ok(acc)
}

#[cfg(test)]
mod tests {
    use super::*;
    use num::rational::BigRational;

    type RatMat = FormMatrix<BigRational>;

    fn rat(num: i64, den: i64) -> BigRational {
        <BigRational as Scalar>::from_ratio(num, den)
    }

    fn skew_from_upper(dim: usize, n: usize, upper: &[Form<f64>]) -> FormMatrix<f64> {
        let mut m = FormMatrix::zero(dim, n, n);
        let mut it = upper.iter();
        for i in 0..n {
            for j in i + 1..n {
                let f = it.next().expect("enough entries").clone();
                *m.entry_mut(i, j) = f.clone();
                *m.entry_mut(j, i) = f.neg();
            }
        }
        m
    }

    #[test]
    fn rank_two_pfaffian_is_the_upper_entry() {
        let a = Form::monomial(4, &[1, 2], 3.5).unwrap();
        let m = skew_from_upper(4, 2, &[a.clone()]);
        assert_eq!(pfaffian(&m).unwrap(), a);
        assert_eq!(pfaffian_top_power(&m).unwrap(), a);
    }

    #[test]
    fn scalar_4x4_pfaffian_known_value() {
        // Pf of [[0,a,b,c],[-a,0,d,e],[-b,-d,0,f],[-c,-e,-f,0]] = af - be + cd.
        let (a, b, c, d, e, f) = (1.0, 2.0, 3.0, 5.0, 7.0, 11.0);
        let vals = [a, b, c, d, e, f].map(|v| Form::constant(0, v));
        let m = skew_from_upper(0, 4, &vals);
        let expected = a * f - b * e + c * d;
        assert_eq!(pfaffian(&m).unwrap().top_coefficient(), expected);
        assert_eq!(pfaffian_top_power(&m).unwrap().top_coefficient(), expected);
    }

    #[test]
    fn matching_sum_and_recursion_agree_at_size_ten() {
        // Size 10 exercises the recursion path; compare against the
        // exhaustive matching enumeration run directly.
        let n = 10;
        let mut upper = Vec::new();
        let mut v = 1.0;
        for _ in 0..n * (n - 1) / 2 {
            v = (v * 1.37 + 0.61) % 5.0 - 2.5;
            upper.push(Form::constant(0, v));
        }
        let m = skew_from_upper(0, n, &upper);
        let rec = pfaffian(&m).unwrap().top_coefficient();
        let matching = pfaffian_matching_sum(&m).top_coefficient();
        assert!((rec - matching).abs() < 1e-9 * matching.abs().max(1.0));
    }

    #[test]
    fn pfaffian_rejects_bad_inputs() {
        let odd = FormMatrix::<f64>::zero(2, 3, 3);
        assert!(matches!(
            pfaffian(&odd),
            Err(Error::NotEvenSquare { .. })
        ));
        let mut not_skew = FormMatrix::<f64>::zero(2, 2, 2);
        *not_skew.entry_mut(0, 1) = Form::one(2);
        *not_skew.entry_mut(1, 0) = Form::one(2);
        assert!(matches!(
            pfaffian(&not_skew),
            Err(Error::SymmetryViolation(_))
        ));
        let mut odd_entries = FormMatrix::<f64>::zero(2, 2, 2);
        *odd_entries.entry_mut(0, 1) = Form::basis_one_form(2, 1);
        *odd_entries.entry_mut(1, 0) = Form::basis_one_form(2, 1).neg();
        assert!(matches!(
            pfaffian(&odd_entries),
            Err(Error::DegreeViolation(_))
        ));
    }

    #[test]
    fn exact_pfaffian_squares_to_determinant() {
        let entries: Vec<Form<BigRational>> = [
            (1, 2),
            (-2, 3),
            (3, 4),
            (5, 7),
            (-1, 5),
            (2, 9),
        ]
        .iter()
        .map(|&(p, q)| Form::constant(0, rat(p, q)))
        .collect();
        let mut m = RatMat::zero(0, 4, 4);
        let mut it = entries.into_iter();
        for i in 0..4 {
            for j in i + 1..4 {
                let f = it.next().unwrap();
                *m.entry_mut(i, j) = f.clone();
                *m.entry_mut(j, i) = f.neg();
            }
        }
        let pf = pfaffian(&m).unwrap();
        let det = det_form(&m).unwrap();
        assert_eq!(pf.wedge(&pf), det);
    }

    #[test]
    fn polarized_diagonal_restriction_recovers_pfaffian() {
        let upper: Vec<Form<f64>> = vec![
            Form::monomial(6, &[1, 2], 1.5).unwrap(),
            Form::monomial(6, &[3, 4], -0.5).unwrap(),
            Form::monomial(6, &[1, 4], 2.0).unwrap(),
            Form::monomial(6, &[2, 3], 0.25).unwrap(),
            Form::monomial(6, &[5, 6], 1.0).unwrap(),
            Form::monomial(6, &[1, 6], -1.25).unwrap(),
        ];
        let m = skew_from_upper(6, 4, &upper);
        let diag = polarized_pfaffian(&[m.clone(), m.clone()]).unwrap();
        let pf = pfaffian(&m).unwrap();
        assert!(diag.distance(&pf) < 1e-12);
    }

    #[test]
    fn polarized_is_symmetric_and_multilinear() {
        let mk = |c1: f64, c2: f64| {
            skew_from_upper(
                4,
                4,
                &[
                    Form::monomial(4, &[1, 2], c1).unwrap(),
                    Form::zero(4),
                    Form::monomial(4, &[1, 4], c2).unwrap(),
                    Form::monomial(4, &[2, 3], -c2).unwrap(),
                    Form::zero(4),
                    Form::monomial(4, &[3, 4], c1 * 0.5).unwrap(),
                ],
            )
        };
        let a = mk(1.0, 2.0);
        let b = mk(-0.5, 1.5);
        let ab = polarized_pfaffian(&[a.clone(), b.clone()]).unwrap();
        let ba = polarized_pfaffian(&[b.clone(), a.clone()]).unwrap();
        assert!(ab.distance(&ba) < 1e-12);
        // Linearity in the first slot.
        let c = mk(2.0, -1.0);
        let lhs = polarized_pfaffian(&[a.add(&c.scale(&2.0)), b.clone()]).unwrap();
        let rhs = polarized_pfaffian(&[a, b.clone()])
            .unwrap()
            .add(&polarized_pfaffian(&[c, b]).unwrap().scale(&2.0));
        assert!(lhs.distance(&rhs) < 1e-12);
    }

    #[test]
    fn single_slot_polarized_allows_one_forms() {
        let mut m = FormMatrix::<f64>::zero(3, 2, 2);
        *m.entry_mut(0, 1) = Form::basis_one_form(3, 2).scale(&4.0);
        *m.entry_mut(1, 0) = Form::basis_one_form(3, 2).scale(&-4.0);
        let p = polarized_pfaffian(&[m.clone()]).unwrap();
        assert_eq!(p, *m.entry(0, 1));
    }

    #[test]
    fn det_form_matches_scalar_det() {
        let vals = [2.0, -1.0, 0.5, 3.0, 1.0, -2.0, 0.0, 4.0, 1.5];
        let entries: Vec<Form<f64>> = vals.iter().map(|&v| Form::constant(0, v)).collect();
        let m = FormMatrix::from_entries(0, 3, 3, entries).unwrap();
        let scalar = crate::invariants::linalg::ScalarMat::from_rows(vec![
            vals[0..3].to_vec(),
            vals[3..6].to_vec(),
            vals[6..9].to_vec(),
        ])
        .unwrap();
        let diff = det_form(&m).unwrap().top_coefficient() - scalar.det();
        assert!(diff.abs() < 1e-12);
    }

    #[test]
    fn det_of_two_form_matrix_is_frame_invariant() {
        // Conjugating by a constant invertible scalar matrix leaves the
        // determinant of a matrix of two-forms unchanged.
        let dim = 6;
        let omega = skew_from_upper(
            dim,
            2,
            &[Form::monomial(dim, &[1, 2], 2.0)
                .unwrap()
                .add(&Form::monomial(dim, &[3, 4], -1.0).unwrap())],
        );
        let g = FormMatrix::from_scalars(dim, 2, &[1.0, 2.0, 1.0, 3.0]).unwrap();
        let g_inv = FormMatrix::from_scalars(dim, 2, &[3.0, -2.0, -1.0, 1.0]).unwrap();
        assert_eq!(
            g.wedge_mul(&g_inv),
            FormMatrix::identity(dim, 2),
            "hand-inverted matrix"
        );
        let conj = g.wedge_mul(&omega).wedge_mul(&g_inv);
        let d1 = det_form(&omega).unwrap();
        let d2 = det_form(&conj).unwrap();
        assert!(d1.distance(&d2) < 1e-12);
    }

    #[test]
    fn perfect_matching_count_is_double_factorial() {
        assert_eq!(perfect_matchings(2).len(), 1);
        assert_eq!(perfect_matchings(4).len(), 3);
        assert_eq!(perfect_matchings(6).len(), 15);
        assert_eq!(perfect_matchings(8).len(), 105);
    }
}
