//! Named verification suites: each one exercises a structural identity of
//! the configured model, reports the worst residual it saw, and passes or
//! fails against a pinned (but overridable) tolerance. The command-line
//! front end runs these and turns the outcome into an exit code, so the
//! names and semantics here are part of the tool's contract.

use std::collections::BTreeMap;

use num_complex::Complex64;
use rand::RngExt;

use crate::automorphy::{
    chain_rule_residual, functional_eq_residual, multiplier_independence_residual,
    nontriviality_test, pseudo_character_deviation, INTEGRALITY_TOL,
};
use crate::error::{Error, Result};
use crate::kernels::{kernel_idempotence_residual, QuadRule};
use crate::lattice::{dimension_estimate, dimension_formula, periodize, Lattice};
use crate::model::ModelParams;
use crate::sample;
use crate::spectral::{
    apply_l, eigenfunction, intertwine_residual, landau_level, susy_residuals,
};

/// Outcome of one named suite.
#[derive(Debug, Clone, serde::Serialize)]
pub struct SuiteResult {
    pub name: String,
    /// Worst residual observed (suite-specific meaning, see `detail`).
    pub max_residual: f64,
    pub tolerance: f64,
    pub passed: bool,
    pub detail: String,
}

/// Suites that need only the model.
pub const MODEL_SUITES: &[&str] = &[
    "susy",
    "landau-levels",
    "intertwine",
    "chain-rule",
    "multiplier-independence",
    "kernel-idempotence",
];

/// Suites that additionally need a lattice.
pub const LATTICE_SUITES: &[&str] = &[
    "cocycle-integrality",
    "pseudo-character",
    "dimension",
    "functional-equation",
];

fn finish(name: &str, residual: f64, tol: f64, detail: String) -> SuiteResult {
    SuiteResult {
        name: name.to_string(),
        max_residual: residual,
        tolerance: tol,
        passed: residual <= tol,
        detail,
    }
}

fn tol_for(name: &str, default: f64, overrides: &BTreeMap<String, f64>) -> f64 {
    overrides.get(name).copied().unwrap_or(default)
}

fn suite_susy(p: &ModelParams, seed: u64, tol: f64) -> Result<SuiteResult> {
    let mut r = sample::rng(seed ^ 0x5u64);
    let mut worst = 0.0f64;
    let draws = 12;
    for _ in 0..draws {
        let f = sample::random_wick(&mut r, 3);
        let (a, b) = susy_residuals(p, &f)?;
        worst = worst.max(a).max(b);
    }
    Ok(finish(
        "susy",
        worst,
        tol,
        format!("both factorization routes on {draws} random functions"),
    ))
}

fn suite_landau_levels(p: &ModelParams, tol: f64) -> Result<SuiteResult> {
    let b = p.magnetic_field()?;
    let mut worst = 0.0f64;
    let max_order = 3;
    for m in 0..=max_order {
        let e = landau_level(b, m);
        for n in 0..=max_order {
            let psi = eigenfunction(p, m, n)?;
            let diff = apply_l(p, &psi)?.add(&psi.scale(Complex64::from(-e)))?;
            worst = worst.max(diff.max_abs_coeff() / psi.max_abs_coeff());
        }
    }
    Ok(finish(
        "landau-levels",
        worst,
        tol,
        format!("eigenvalue relation for all orders m, n ≤ {max_order}"),
    ))
}

fn suite_intertwine(p: &ModelParams, seed: u64, tol: f64) -> Result<SuiteResult> {
    let mut r = sample::rng(seed ^ 0x17u64);
    let mut worst = 0.0f64;
    let draws = 12;
    for _ in 0..draws {
        let f = sample::random_wick(&mut r, 3);
        worst = worst.max(intertwine_residual(p, &f)?);
    }
    Ok(finish(
        "intertwine",
        worst,
        tol,
        format!("gauge map conjugates the operator into the pure-field one, {draws} draws"),
    ))
}

fn suite_chain_rule(p: &ModelParams, seed: u64, tol: f64) -> Result<SuiteResult> {
    let mut r = sample::rng(seed ^ 0x1du64);
    let mut worst = 0.0f64;
    let draws = 200;
    for _ in 0..draws {
        let g = sample::random_group(&mut r, 2.0);
        let g2 = sample::random_group(&mut r, 2.0);
        let z = sample::random_disk(&mut r, 2.0);
        worst = worst.max(chain_rule_residual(p, &g, &g2, z));
    }
    Ok(finish(
        "chain-rule",
        worst,
        tol,
        format!("cocycle chain rule on {draws} random (g, g′, z) triples"),
    ))
}

fn suite_multiplier_independence(p: &ModelParams, seed: u64, tol: f64) -> Result<SuiteResult> {
    let mut r = sample::rng(seed ^ 0x2bu64);
    let zs: Vec<Complex64> = (0..10).map(|_| sample::random_disk(&mut r, 2.0)).collect();
    let mut worst = 0.0f64;
    let draws = 20;
    for _ in 0..draws {
        let gamma = sample::random_disk(&mut r, 1.5);
        worst = worst.max(multiplier_independence_residual(p, gamma, &zs)?);
    }
    Ok(finish(
        "multiplier-independence",
        worst,
        tol,
        format!("multiplier read off at {draws} shifts × 10 base points"),
    ))
}

fn suite_kernel_idempotence(p: &ModelParams, tol: f64) -> Result<SuiteResult> {
    let z = Complex64::new(0.3, 0.1);
    let u = Complex64::new(-0.2, 0.4);
    let mut worst = 0.0f64;
    let max_level = 2;
    for k in 0..=max_level {
        for j in 0..=max_level {
            worst = worst.max(kernel_idempotence_residual(
                p,
                k,
                j,
                z,
                u,
                QuadRule::Trapezoid,
                128,
            )?);
        }
    }
    Ok(finish(
        "kernel-idempotence",
        worst,
        tol,
        format!("∫K_k·K_j = δ_kj·K_k for levels up to {max_level}, doubling-checked quadrature"),
    ))
}

fn suite_cocycle_integrality(p: &ModelParams, lat: &Lattice, tol: f64) -> SuiteResult {
    let rep = nontriviality_test(p, lat, 3);
    let detail = format!(
        "{} lattice pairs, worst phase/π = {:.6} at γ = {:.3}, γ′ = {:.3}",
        rep.pairs_checked, rep.worst_phase_over_pi, rep.worst_pair.0, rep.worst_pair.1
    );
    finish("cocycle-integrality", rep.worst_defect, tol, detail)
}

fn suite_pseudo_character(p: &ModelParams, lat: &Lattice, tol: f64) -> Result<SuiteResult> {
    let dev = pseudo_character_deviation(p, lat, 3)?;
    Ok(finish(
        "pseudo-character",
        dev,
        tol,
        "composition law of the twisted lattice shifts on the word-3 ball".to_string(),
    ))
}

fn suite_dimension(p: &ModelParams, lat: &Lattice, tol: f64) -> Result<SuiteResult> {
    let formula = dimension_formula(p, lat)?;
    let n_seeds = (formula.round().max(1.0) as usize) + 3;
    match dimension_estimate(p, lat, 0, n_seeds, 40, 1e-6) {
        Ok(est) => {
            let residual = (est.rank as f64 - formula).abs();
            let detail = format!(
                "numerical rank {} vs closed form {:.6}{}",
                est.rank,
                formula,
                if est.near_threshold { " (rank decision near threshold)" } else { "" }
            );
            Ok(finish("dimension", residual, tol, detail))
        }
        Err(Error::InconsistentCocycle { deviation }) => Ok(SuiteResult {
            name: "dimension".to_string(),
            max_residual: deviation,
            tolerance: tol,
            passed: false,
            detail: "periodization refused: twisted shifts do not compose consistently"
                .to_string(),
        }),
        Err(e) => Err(e),
    }
}

fn suite_functional_equation(
    p: &ModelParams,
    lat: &Lattice,
    seed: u64,
    tol: f64,
) -> Result<SuiteResult> {
    let mut r = sample::rng(seed ^ 0x3fu64);
    let mut worst = 0.0f64;
    for (m, n) in [(0u32, 0u32), (1, 1)] {
        let seed_fn = eigenfunction(p, m, n)?;
        let form = match periodize(p, lat, &seed_fn, 1e-10) {
            Ok(f) => f,
            Err(Error::InconsistentCocycle { deviation }) => {
                return Ok(SuiteResult {
                    name: "functional-equation".to_string(),
                    max_residual: deviation,
                    tolerance: tol,
                    passed: false,
                    detail: "periodization refused: twisted shifts do not compose consistently"
                        .to_string(),
                })
            }
            Err(e) => return Err(e),
        };
        for _ in 0..10 {
            let gamma = lat.point(r.random_range(-2..=2), r.random_range(-2..=2));
            let z = sample::random_disk(&mut r, 1.2);
            let res = functional_eq_residual(p, |w| form.eval(w).unwrap(), gamma, z);
            worst = worst.max(res);
        }
    }
    Ok(finish(
        "functional-equation",
        worst,
        tol,
        "periodized level-0 and level-1 seeds at 20 random (γ, z) samples".to_string(),
    ))
}

/// Run every applicable suite: the six model-level ones always, the four
/// lattice-level ones when a lattice is supplied. Individual suite failures
/// are reported in the results; an `Err` from this function means the model
/// itself is unusable (for example a non-positive field).
pub fn run_all(
    p: &ModelParams,
    lat: Option<&Lattice>,
    seed: u64,
    tolerance_overrides: &BTreeMap<String, f64>,
) -> Result<Vec<SuiteResult>> {
    let t = |name: &str, dflt: f64| tol_for(name, dflt, tolerance_overrides);
    let mut out = vec![
        suite_susy(p, seed, t("susy", 1e-9))?,
        suite_landau_levels(p, t("landau-levels", 1e-9))?,
        suite_intertwine(p, seed, t("intertwine", 1e-9))?,
        suite_chain_rule(p, seed, t("chain-rule", 1e-12))?,
        suite_multiplier_independence(p, seed, t("multiplier-independence", 1e-10))?,
        suite_kernel_idempotence(p, t("kernel-idempotence", 1e-6))?,
    ];
    if let Some(lat) = lat {
        out.push(suite_cocycle_integrality(p, lat, t("cocycle-integrality", INTEGRALITY_TOL)));
        out.push(suite_pseudo_character(p, lat, t("pseudo-character", 1e-12))?);
        out.push(suite_dimension(p, lat, t("dimension", 0.5))?);
        out.push(suite_functional_equation(p, lat, seed, t("functional-equation", 1e-8))?);
    }
    Ok(out)
}
