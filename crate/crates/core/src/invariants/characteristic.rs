//! Chern, Euler, and Pontryagin forms from curvature matrices.
//!
//! Conventions: curvature acts on a frame by D^2 s_i = sum_j Omega_ij s_j.
//! The total Chern form is det(I + (i/2pi) Omega) for a skew-Hermitian-valued
//! complex curvature; the Euler form of an oriented real even-rank bundle is
//! Pf((-1/2pi) Omega); Pontryagin forms are signed even Chern forms of the
//! complexified matrix.

use super::pfaffian::{det_form, pfaffian, SKEW_TOL_REL};
use crate::error::{Error, Result};
use crate::exterior::{Complex64, Form, FormMatrix};

/// Relative bound on imaginary residue of Chern coefficients, and on odd
/// Chern forms of complexified real curvature, before they are discarded.
pub const IMAG_RESIDUE_TOL: f64 = 1e-9;

fn check_skew_hermitian(m: &FormMatrix<Complex64>) -> Result<()> {
    let defect = m.skew_hermitian_defect();
    let allowed = SKEW_TOL_REL * (1.0 + m.max_magnitude());
    if defect > allowed {
        return Err(Error::SymmetryViolation(format!(
            "curvature must be skew-Hermitian-valued, defect {defect:.3e}"
        )));
    }
    Ok(())
}

/// Total Chern form det(I + (i/2pi) Omega) of a complex curvature matrix,
/// as a single mixed-degree complex form.
pub fn total_chern_form(omega: &FormMatrix<Complex64>) -> Result<Form<Complex64>> {
    if !omega.is_square() {
        return Err(Error::ShapeMismatch(format!(
            "curvature matrix is {}x{}",
            omega.rows(),
            omega.cols()
        )));
    }
    check_skew_hermitian(omega)?;
    let scale = Complex64::new(0.0, 1.0 / (2.0 * std::f64::consts::PI));
    let x = omega.scale(&scale);
    let arg = FormMatrix::identity(omega.dim(), omega.rows()).add(&x);
    det_form(&arg)
}

/// Chern forms c_0..c_rank as real forms. The imaginary residue of each
/// graded component must stay below `IMAG_RESIDUE_TOL` relative to its real
/// magnitude; it is checked and then discarded.
pub fn chern_forms(omega: &FormMatrix<Complex64>) -> Result<Vec<Form<f64>>> {
    let total = total_chern_form(omega)?;
    let rank = omega.rows();
    let mut out = Vec::with_capacity(rank + 1);
    for k in 0..=rank {
        let comp = total.component(2 * k);
        let re = comp.re_part();
        let im = comp.im_part();
        let allowed = IMAG_RESIDUE_TOL * (1.0 + re.max_magnitude());
        if im.max_magnitude() > allowed {
            return Err(Error::ValidationFailed(format!(
                "Chern form c_{k} has imaginary residue {:.3e}",
                im.max_magnitude()
            )));
        }
        out.push(re);
    }
    Ok(out)
}

/// Euler form Pf((-1/2pi) Omega) of a real even-rank curvature matrix.
pub fn euler_form(omega: &FormMatrix<f64>) -> Result<Form<f64>> {
    let scaled = omega.scale_f64(-1.0 / (2.0 * std::f64::consts::PI));
    pfaffian(&scaled)
}

/// Pontryagin forms p_0..p_{rank/2} of a real curvature matrix:
/// p_k = (-1)^k c_2k of the complexification. Odd Chern forms of the

/// complexification must vanish within tolerance; they are checked and
/// dropped.
pub fn pontryagin_forms(omega: &FormMatrix<f64>) -> Result<Vec<Form<f64>>> {
    let defect = omega.skew_defect();
    let allowed = SKEW_TOL_REL * (1.0 + omega.max_magnitude());
    if defect > allowed {
        return Err(Error::SymmetryViolation(format!(
            "real curvature must be skew, defect {defect:.3e}"
        )));
    }
    let complexified: FormMatrix<Complex64> = FormMatrix::<Complex64>::from_real(omega);
    let cherns = chern_forms(&complexified)?;
    let rank = omega.rows();
    let mut out = Vec::with_capacity(rank / 2 + 1);
    for k in 0..=rank / 2 {
        let c2k = &cherns[2 * k];
        if 2 * k + 1 <= rank {
            let odd = &cherns[2 * k + 1];
            let allowed = IMAG_RESIDUE_TOL * (1.0 + c2k.max_magnitude());
            if odd.max_magnitude() > allowed {
                return Err(Error::ValidationFailed(format!(
                    "odd Chern form c_{} of complexified curvature is {:.3e}, expected 0",
                    2 * k + 1,
                    odd.max_magnitude()
                )));
            }
        }
        let signed = if k % 2 == 0 { c2k.clone() } else { c2k.neg() };
        out.push(signed);
    }
    Ok(out)
}
