//! Seeded fuzz suites for the algebraic identities: each suite draws
//! random elements, runs a dual-route check from the library, and reports
//! the worst relative defect per size. Exact-backend runs must report
//! exactly zero.

use anyhow::Result;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde_json::json;

use charlab::invariants::checks::{
    curvature_realified_det_defect, euler_top_chern_defect, pfaffian_route_defect,
    pfaffian_square_det_defect, pontryagin_top_euler_defect, realified_det_defect,
    whitney_defect, whitney_defect_formal,
};
use charlab::invariants::samples::{
    random_curvature, random_curvature_exact, random_skew_two_form_matrix,
    random_skew_two_form_matrix_exact, random_unitary_lie_mat, random_unitary_lie_mat_exact,
};

use crate::record::{params, record_against, Emitter};

pub const AMBIENT_DIM: usize = 8;

#[derive(Clone, Copy, PartialEq, Eq)]
pub enum Mode {
    Exact,
    Float,
    Both,
}

impl Mode {
    pub fn parse(s: &str) -> Result<Mode> {
        match s {
            "exact" => Ok(Mode::Exact),
            "float" => Ok(Mode::Float),
            "both" => Ok(Mode::Both),
            _ => Err(charlab::Error::BadConfig(format!(
                "mode {s} is not exact, float, or both"
            ))
            .into()),
        }
    }
    fn runs_exact(self) -> bool {
        self != Mode::Float
    }
    fn runs_float(self) -> bool {
        self != Mode::Exact
    }
}

pub struct SuiteArgs {
    pub sizes: Vec<usize>,
    pub trials: usize,
    pub seed: u64,
    pub mode: Mode,
}

fn suite_params(suite: &str, n: usize, mode: &str, a: &SuiteArgs) -> crate::record::Params {
    params(&[
        ("suite", json!(suite)),
        ("n", json!(n)),
        ("trials", json!(a.trials)),
        ("seed", json!(a.seed)),
        ("mode", json!(mode)),
        ("ambient_dim", json!(AMBIENT_DIM)),
    ])
}

/// Pf of the realified matrix against det(-iX) for scalar skew-Hermitian
/// X, exact and float backends.
pub fn realified_det(a: &SuiteArgs, em: &mut Emitter) -> Result<()> {
    for &n in &a.sizes {
        if a.mode.runs_exact() {
            let mut rng = ChaCha8Rng::seed_from_u64(a.seed);
            let mut worst: f64 = 0.0;
            for _ in 0..a.trials {
                let x = random_unitary_lie_mat_exact(&mut rng, n);
                worst = worst.max(realified_det_defect(&x)?);
            }
            em.emit(record_against(
                "verify realified-det",
                suite_params("realified-det", n, "exact", a),
                "worst residual of Pf(realified X) - det(-iX), exact rationals",
                worst,
                0.0,
                0.0,
                "independent determinant route, exact arithmetic",
                em.elapsed_ms(),
            ));
        }
        if a.mode.runs_float() {
            let mut rng = ChaCha8Rng::seed_from_u64(a.seed ^ 0x5eed);
            let mut worst: f64 = 0.0;
            for _ in 0..a.trials {
                let x = random_unitary_lie_mat(&mut rng, n);
                worst = worst.max(realified_det_defect(&x)?);
            }
            em.emit(record_against(
                "verify realified-det",
                suite_params("realified-det", n, "float", a),
                "worst relative residual of Pf(realified X) - det(-iX), floats",
                worst,
                0.0,
                1e-9,
                "independent determinant route",
                em.elapsed_ms(),
            ));
        }
    }
    Ok(())
}

/// Production Pfaffian against the top-power construction and the
/// matching-sum against first-row recursion, on 2-form entries.
pub fn pfaffian_routes(a: &SuiteArgs, em: &mut Emitter) -> Result<()> {
    for &n in &a.sizes {
        if a.mode.runs_exact() {
            let mut rng = ChaCha8Rng::seed_from_u64(a.seed);
            let mut worst: f64 = 0.0;
            for _ in 0..a.trials {
                let m = random_skew_two_form_matrix_exact(&mut rng, AMBIENT_DIM, n);
                worst = worst.max(pfaffian_route_defect(&m)?);
            }
            em.emit(record_against(
                "verify pfaffian",
                suite_params("pfaffian", n, "exact", a),
                "worst route disagreement, exact rationals",
                worst,
                0.0,
                0.0,
                "top-power and recursion oracles, exact arithmetic",
                em.elapsed_ms(),
            ));
        }
        if a.mode.runs_float() {
            let mut rng = ChaCha8Rng::seed_from_u64(a.seed ^ 0x5eed);
            let mut worst: f64 = 0.0;
            for _ in 0..a.trials {
                let m = random_skew_two_form_matrix(&mut rng, AMBIENT_DIM, n);
                worst = worst.max(pfaffian_route_defect(&m)?);
            }
            em.emit(record_against(
                "verify pfaffian",
                suite_params("pfaffian", n, "float", a),
                "worst relative route disagreement, floats",
                worst,
                0.0,
                1e-10,
                "top-power and recursion oracles",
                em.elapsed_ms(),
            ));
        }
    }
    Ok(())
}

/// Pf wedge Pf against the Leibniz determinant, and the top Pontryagin
/// form against the Euler square, on real skew 2-form matrices.
pub fn pf_squared(a: &SuiteArgs, em: &mut Emitter) -> Result<()> {
    for &n in &a.sizes {
        if a.mode.runs_exact() {
            let mut rng = ChaCha8Rng::seed_from_u64(a.seed);
            let mut worst: f64 = 0.0;
            for _ in 0..a.trials {
                let m = random_skew_two_form_matrix_exact(&mut rng, AMBIENT_DIM, n);
                worst = worst.max(pfaffian_square_det_defect(&m)?);
            }
            em.emit(record_against(
                "verify pf-squared",
                suite_params("pf-squared", n, "exact", a),
                "worst residual of Pf^2 - det, exact rationals",
                worst,
                0.0,
                0.0,
                "Leibniz determinant route, exact arithmetic",
                em.elapsed_ms(),
            ));
        }
        if a.mode.runs_float() {
            let mut rng = ChaCha8Rng::seed_from_u64(a.seed ^ 0x5eed);
            let mut square: f64 = 0.0;
            let mut pontryagin: f64 = 0.0;
            for _ in 0..a.trials {
                let m = random_skew_two_form_matrix(&mut rng, AMBIENT_DIM, n);
                square = square.max(pfaffian_square_det_defect(&m)?);
                pontryagin = pontryagin.max(pontryagin_top_euler_defect(&m)?);
            }
            em.emit(record_against(
                "verify pf-squared",
                suite_params("pf-squared", n, "float", a),
                "worst relative residual of Pf^2 - det, floats",
                square,
                0.0,
                1e-9,
                "Leibniz determinant route",
                em.elapsed_ms(),
            ));
            em.emit(record_against(
                "verify pf-squared",
                suite_params("pf-squared", n, "float", a),
                "worst relative residual of top pontryagin - euler^2, floats",
                pontryagin,
                0.0,
                1e-9,
                "chern forms of the complexification",
                em.elapsed_ms(),
            ));
        }
    }
    Ok(())
}

/// Top Chern form of a curvature matrix against the Euler form of its
/// realification, normalized and unnormalized.
pub fn euler_chern(a: &SuiteArgs, em: &mut Emitter) -> Result<()> {
    for &n in &a.sizes {
        if a.mode.runs_exact() {
            let mut rng = ChaCha8Rng::seed_from_u64(a.seed);
            let mut worst: f64 = 0.0;
            for _ in 0..a.trials {
                let omega = random_curvature_exact(&mut rng, AMBIENT_DIM, n);
                worst = worst.max(curvature_realified_det_defect(&omega)?);
            }
            em.emit(record_against(
                "verify euler-chern",
                suite_params("euler-chern", n, "exact", a),
                "worst residual of Pf(realified curvature) - det(-i curvature), exact",
                worst,
                0.0,
                0.0,
                "form-level determinant route, exact arithmetic",
                em.elapsed_ms(),
            ));
        }
        if a.mode.runs_float() {
            let mut rng = ChaCha8Rng::seed_from_u64(a.seed ^ 0x5eed);
            let mut normalized: f64 = 0.0;
            let mut raw: f64 = 0.0;
            for _ in 0..a.trials {
                let omega = random_curvature(&mut rng, AMBIENT_DIM, n);
                normalized = normalized.max(euler_top_chern_defect(&omega)?);
                raw = raw.max(curvature_realified_det_defect(&omega)?);
            }
            em.emit(record_against(
                "verify euler-chern",
                suite_params("euler-chern", n, "float", a),
                "worst relative residual of euler(realified) - top chern",
                normalized,
                0.0,
                1e-9,
                "chern route via det(I + (i/2pi) curvature)",
                em.elapsed_ms(),
            ));
            em.emit(record_against(
                "verify euler-chern",
                suite_params("euler-chern", n, "float", a),
                "worst relative residual of Pf(realified curvature) - det(-i curvature)",
                raw,
                0.0,
                1e-9,
                "form-level determinant route",
                em.elapsed_ms(),
            ));
        }
    }
    Ok(())
}

/// Multiplicativity of the total Chern form over direct sums, float
/// curvature pairs and the formal exact factorization.
pub fn whitney(a: &SuiteArgs, em: &mut Emitter) -> Result<()> {
    for &n in &a.sizes {
        if a.mode.runs_exact() {
            let mut rng = ChaCha8Rng::seed_from_u64(a.seed);
            let mut worst: f64 = 0.0;
            for _ in 0..a.trials {
                let p = random_skew_two_form_matrix_exact(&mut rng, AMBIENT_DIM, n);
                let q = random_skew_two_form_matrix_exact(&mut rng, AMBIENT_DIM, n);
                worst = worst.max(whitney_defect_formal(&p, &q)?);
            }
            em.emit(record_against(
                "verify whitney",
                suite_params("whitney", n, "exact", a),
                "worst residual of det(I + A (+) B) - product, exact rationals",
                worst,
                0.0,
                0.0,
                "factorized determinant route, exact arithmetic",
                em.elapsed_ms(),
            ));
        }
        if a.mode.runs_float() {
            let mut rng = ChaCha8Rng::seed_from_u64(a.seed ^ 0x5eed);
            let mut worst: f64 = 0.0;
            for _ in 0..a.trials {
                let p = random_curvature(&mut rng, AMBIENT_DIM, n);
                let q = random_curvature(&mut rng, AMBIENT_DIM, n);
                worst = worst.max(whitney_defect(&p, &q)?);
            }
            em.emit(record_against(
                "verify whitney",
                suite_params("whitney", n, "float", a),
                "worst relative residual of total chern multiplicativity",
                worst,
                0.0,
                1e-9,
                "total chern of the block sum",
                em.elapsed_ms(),
            ));
        }
    }
    Ok(())
}
