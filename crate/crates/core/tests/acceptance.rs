//! End-to-end acceptance run: ten independently pinned checks covering the
//! whole verification surface — factorizations, eigenvalues, gauge
//! intertwining, cocycle arithmetic, the integrality switch, projector
//! kernels, dimension counts, periodized functional equations, the grid
//! oracle, and the polynomial base cases. One line is printed per check
//! (visible with `--nocapture`); the test fails if any check fails or
//! overruns its time budget.

use std::time::{Duration, Instant};

use mixed_landau::automorphy::{
    chain_rule_residual, multiplier_independence_residual, nontriviality_test,
    pseudo_character_deviation,
};
use mixed_landau::fd::{convergence_order, eigen_residual_fd, Grid};
use mixed_landau::kernels::{
    kernel_idempotence_residual, kernel_invariance_residual, projector_kernel, QuadRule,
};
use mixed_landau::lattice::{dimension_estimate, periodize, Lattice};
use mixed_landau::model::{EquivariantPair, GroupElement, ModelParams};
use mixed_landau::sample;
use mixed_landau::spectral::{
    apply_l, eigenfunction, generalized_hermite, hermite, landau_level, susy_residuals,
};
use mixed_landau::wick::WickFunction;
use mixed_landau::automorphy::functional_eq_residual;
use num_complex::Complex64;
use rand::RngExt;

const PI: f64 = std::f64::consts::PI;

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

fn inner_model(nu: f64, mu: f64, alpha: Complex64, beta: Complex64) -> ModelParams {
    ModelParams::new(
        nu,
        mu,
        EquivariantPair::inner(GroupElement::new(alpha, beta).unwrap()).unwrap(),
    )
    .unwrap()
}

fn conj_model(nu: f64, mu: f64, alpha: Complex64, beta: Complex64) -> ModelParams {
    ModelParams::new(
        nu,
        mu,
        EquivariantPair::conjugate(GroupElement::new(alpha, beta).unwrap()).unwrap(),
    )
    .unwrap()
}

/// 50 random (model, function) draws: both factorization routes reproduce
/// the operator to 1e-9, coefficient-wise.
fn check_01_susy() -> Result<String, String> {
    let tol = 1e-9;
    let mut r = sample::rng(101);
    let mut worst = 0.0f64;
    for _ in 0..50 {
        let p = sample::random_model(&mut r);
        let f = sample::random_wick(&mut r, 3);
        let (a, b) = susy_residuals(&p, &f).map_err(|e| e.to_string())?;
        worst = worst.max(a).max(b);
    }
    if worst <= tol {
        Ok(format!("worst residual {worst:.2e} ≤ {tol:.0e} over 50 draws"))
    } else {
        Err(format!("worst residual {worst:.2e} > {tol:.0e}"))
    }
}

/// Eigenvalue relation for all orders m, n ≤ 6 on three inner models and a
/// conjugate one, coefficient-wise to 1e-9 after unit-max normalization.
fn check_02_landau_levels() -> Result<String, String> {
    let tol = 1e-9;
    let models = [
        inner_model(1.0, 2.0, c(1.0, 0.0), c(1.0, 0.0)),
        inner_model(PI - 1.0, 1.0, c(1.0, 0.0), c(0.4, 0.0)),
        inner_model(0.3, 0.7, Complex64::from_polar(1.0, 0.9), c(-0.2, 0.5)),
        conj_model(2.0, 0.8, Complex64::from_polar(1.0, -0.4), c(0.1, 0.3)),
    ];
    let mut worst = 0.0f64;
    let mut count = 0usize;
    for p in &models {
        let b = p.magnetic_field().map_err(|e| e.to_string())?;
        for m in 0..=6u32 {
            let e = landau_level(b, m);
            for n in 0..=6u32 {
                let psi = eigenfunction(p, m, n).map_err(|e| e.to_string())?;
                let diff = apply_l(p, &psi)
                    .and_then(|lp| lp.add(&psi.scale(Complex64::from(-e))))
                    .map_err(|e| e.to_string())?;
                worst = worst.max(diff.max_abs_coeff() / psi.max_abs_coeff());
                count += 1;
            }
        }
    }
    if worst <= tol {
        Ok(format!("worst normalized residual {worst:.2e} ≤ {tol:.0e} over {count} eigenfunctions"))
    } else {
        Err(format!("worst normalized residual {worst:.2e} > {tol:.0e}"))
    }
}

/// 50 random draws: the gauge map conjugates the mixed operator into the
/// pure-field one to 1e-9.
fn check_03_intertwine() -> Result<String, String> {
    let tol = 1e-9;
    let mut r = sample::rng(103);
    let mut worst = 0.0f64;
    for _ in 0..50 {
        let p = sample::random_model(&mut r);
        let f = sample::random_wick(&mut r, 3);
        worst = worst.max(
            mixed_landau::spectral::intertwine_residual(&p, &f).map_err(|e| e.to_string())?,
        );
    }
    if worst <= tol {
        Ok(format!("worst residual {worst:.2e} ≤ {tol:.0e} over 50 draws"))
    } else {
        Err(format!("worst residual {worst:.2e} > {tol:.0e}"))
    }
}

/// 1000 random inputs each: the cocycle chain rule holds to 1e-12 and the
/// multiplier is base-point independent to 1e-10.
fn check_04_cocycle() -> Result<String, String> {
    let mut r = sample::rng(104);
    let mut worst_chain = 0.0f64;
    for _ in 0..1000 {
        let p = sample::random_model(&mut r);
        let g = sample::random_group(&mut r, 2.0);
        let g2 = sample::random_group(&mut r, 2.0);
        let z = sample::random_disk(&mut r, 2.0);
        worst_chain = worst_chain.max(chain_rule_residual(&p, &g, &g2, z));
    }
    let mut worst_ind = 0.0f64;
    for _ in 0..200 {
        let p = sample::random_model(&mut r);
        let gamma = sample::random_disk(&mut r, 1.5);
        let zs: Vec<Complex64> = (0..5).map(|_| sample::random_disk(&mut r, 2.0)).collect();
        worst_ind = worst_ind.max(
            multiplier_independence_residual(&p, gamma, &zs).map_err(|e| e.to_string())?,
        );
    }
    if worst_chain <= 1e-12 && worst_ind <= 1e-10 {
        Ok(format!(
            "chain rule {worst_chain:.2e} ≤ 1e-12; base-point independence {worst_ind:.2e} ≤ 1e-10"
        ))
    } else {
        Err(format!(
            "chain rule {worst_chain:.2e} (tol 1e-12), independence {worst_ind:.2e} (tol 1e-10)"
        ))
    }
}

/// On the unit square lattice, total weight σ = πN is accepted and
/// σ = πN + 0.1 rejected, for N = 1, 2, 3; pseudo-character deviation of the
/// accepted models ≤ 1e-12.
fn check_05_integrality() -> Result<String, String> {
    let lat = Lattice::square(1.0).map_err(|e| e.to_string())?;
    let mut worst_dev = 0.0f64;
    for n in 1..=3u32 {
        let s = PI * n as f64;
        let good = inner_model(s - 0.5, 0.5, c(1.0, 0.0), c(0.3, 0.1));
        let rep = nontriviality_test(&good, &lat, 3);
        if !rep.passes {
            return Err(format!("σ = {n}π rejected: defect {:.2e}", rep.worst_defect));
        }
        let dev = pseudo_character_deviation(&good, &lat, 3).map_err(|e| e.to_string())?;
        worst_dev = worst_dev.max(dev);
        if dev > 1e-12 {
            return Err(format!("pseudo-character deviation {dev:.2e} > 1e-12 at σ = {n}π"));
        }
        let bad = inner_model(s - 0.5 + 0.1, 0.5, c(1.0, 0.0), c(0.3, 0.1));
        if nontriviality_test(&bad, &lat, 3).passes {
            return Err(format!("σ = {n}π + 0.1 wrongly accepted"));
        }
    }
    Ok(format!(
        "σ = πN accepted, σ = πN + 0.1 rejected for N = 1..3; worst pseudo-character dev {worst_dev:.2e}"
    ))
}

/// Projector kernels for B ∈ {1/2, 1, π}: diagonal value, Hermitian
/// symmetry, translation covariance (all 1e-12), and idempotence /
/// orthogonality for levels k, j ≤ 3 under doubling-checked quadrature
/// (1e-6).
fn check_06_kernels() -> Result<String, String> {
    let mut r = sample::rng(106);
    let mut worst_alg = 0.0f64;
    let mut worst_int = 0.0f64;
    for &b in &[0.5, 1.0, PI] {
        // a genuinely mixed model with this field
        let p = inner_model(b / 2.0, b / 2.0, c(1.0, 0.0), c(0.3, -0.2));
        for _ in 0..20 {
            let k = r.random_range(0..4u32);
            let z = sample::random_disk(&mut r, 1.5);
            let w = sample::random_disk(&mut r, 1.5);
            let diag = projector_kernel(&p, k, z, z).map_err(|e| e.to_string())?;
            worst_alg = worst_alg.max((diag - Complex64::from(2.0 * b / PI)).norm());
            let kzw = projector_kernel(&p, k, z, w).map_err(|e| e.to_string())?;
            let kwz = projector_kernel(&p, k, w, z).map_err(|e| e.to_string())?;
            worst_alg = worst_alg.max((kzw - kwz.conj()).norm());
            let shift = sample::random_disk(&mut r, 1.0);
            worst_alg = worst_alg.max(
                kernel_invariance_residual(&p, k, z, w, shift).map_err(|e| e.to_string())?,
            );
        }
        let z = c(0.3, 0.1);
        let u = c(-0.2, 0.4);
        for k in 0..=3u32 {
            for j in 0..=3u32 {
                worst_int = worst_int.max(
                    kernel_idempotence_residual(&p, k, j, z, u, QuadRule::Trapezoid, 128)
                        .map_err(|e| e.to_string())?,
                );
            }
        }
    }
    if worst_alg <= 1e-12 && worst_int <= 1e-6 {
        Ok(format!(
            "algebraic identities {worst_alg:.2e} ≤ 1e-12; idempotence/orthogonality {worst_int:.2e} ≤ 1e-6"
        ))
    } else {
        Err(format!(
            "algebraic {worst_alg:.2e} (tol 1e-12), idempotence {worst_int:.2e} (tol 1e-6)"
        ))
    }
}

/// Numerical dimension of the periodized eigenspaces on the unit square:
/// rank 2 at σ = π and rank 4 at σ = 2π, for levels k = 0 and 1, stable
/// under grid doubling.
fn check_07_dimension() -> Result<String, String> {
    let lat = Lattice::square(1.0).map_err(|e| e.to_string())?;
    let cases = [
        (inner_model(PI - 1.0, 1.0, c(1.0, 0.0), c(0.0, 0.0)), 2usize, 5usize),
        (inner_model(2.0 * PI - 1.0, 1.0, c(1.0, 0.0), c(0.0, 0.0)), 4usize, 7usize),
    ];
    for (p, expect, n_seeds) in &cases {
        for k in 0..=1u32 {
            let coarse = dimension_estimate(p, &lat, k, *n_seeds, 40, 1e-6)
                .map_err(|e| e.to_string())?;
            let fine = dimension_estimate(p, &lat, k, *n_seeds, 80, 1e-6)
                .map_err(|e| e.to_string())?;
            if coarse.rank != *expect || fine.rank != *expect {
                return Err(format!(
                    "expected rank {expect} at level {k}, got {} (grid 40) and {} (grid 80); σ-values {:?}",
                    coarse.rank, fine.rank, fine.singular_values
                ));
            }
            if fine.near_threshold {
                return Err(format!("rank decision near threshold at level {k}"));
            }
        }
    }
    Ok("ranks 2 (σ = π) and 4 (σ = 2π) at levels 0 and 1, stable under grid doubling".to_string())
}

/// Periodized eigenfunctions satisfy the mixed functional equation at 20
/// random (γ, z) samples to 1e-8, for a plain and an offset-gauge model.
fn check_08_functional_equation() -> Result<String, String> {
    let lat = Lattice::square(1.0).map_err(|e| e.to_string())?;
    let models = [
        inner_model(PI - 1.0, 1.0, c(1.0, 0.0), c(0.0, 0.0)),
        inner_model(PI - 1.0, 1.0, c(1.0, 0.0), c(0.4, 0.0)),
    ];
    let mut r = sample::rng(108);
    let mut worst = 0.0f64;
    let mut count = 0usize;
    for p in &models {
        for (m, n) in [(0u32, 0u32), (1, 1)] {
            let seed = eigenfunction(p, m, n).map_err(|e| e.to_string())?;
            let form = periodize(p, &lat, &seed, 1e-10).map_err(|e| e.to_string())?;
            for _ in 0..5 {
                let gamma = lat.point(r.random_range(-2..=2), r.random_range(-2..=2));
                let z = sample::random_disk(&mut r, 1.2);
                worst = worst.max(functional_eq_residual(
                    p,
                    |w| form.eval(w).unwrap(),
                    gamma,
                    z,
                ));
                count += 1;
            }
        }
    }
    if worst <= 1e-8 {
        Ok(format!("worst residual {worst:.2e} ≤ 1e-8 over {count} samples"))
    } else {
        Err(format!("worst residual {worst:.2e} > 1e-8"))
    }
}

/// The grid oracle converges at second order against the symbolic operator,
/// and its eigenvalue residual falls about fourfold when h is halved.
fn check_09_grid_oracle() -> Result<String, String> {
    let mut r = sample::rng(109);
    let grid = Grid::new(c(0.0, 0.0), 0.8, 33).map_err(|e| e.to_string())?;
    let mut orders = Vec::new();
    for _ in 0..3 {
        let p = sample::random_model(&mut r);
        let f = sample::random_wick(&mut r, 3);
        let order = convergence_order(&p, &grid, &f).map_err(|e| e.to_string())?;
        if !(1.8..=2.2).contains(&order) {
            return Err(format!("measured order {order:.3} outside 2.0 ± 0.2"));
        }
        orders.push(order);
    }
    let p = inner_model(1.0, 2.0, c(1.0, 0.0), c(1.0, 0.0));
    let g = Grid::new(c(0.0, 0.0), 0.7, 41).map_err(|e| e.to_string())?;
    let r1 = eigen_residual_fd(&p, &g, 1, 1).map_err(|e| e.to_string())?;
    let r2 = eigen_residual_fd(&p, &g.refine(), 1, 1).map_err(|e| e.to_string())?;
    let ratio = r1 / r2;
    if !(2.8..=5.2).contains(&ratio) {
        return Err(format!("eigen residual refinement ratio {ratio:.2} not ≈ 4"));
    }
    Ok(format!(
        "orders {:.2}, {:.2}, {:.2}; eigen residual ratio {ratio:.2}",
        orders[0], orders[1], orders[2]
    ))
}

/// Polynomial base cases: the (1,1) polynomial equals 1 − 2B|z|² for three
/// fields, and the shifted family at zero shift equals the plain family for
/// all m, n ≤ 4, coefficient-wise to 1e-12.
fn check_10_polynomials() -> Result<String, String> {
    for &b in &[0.5, 1.0, PI] {
        let h11 = hermite(b, 1, 1);
        let expect = WickFunction::polynomial(&[
            ((0, 0), Complex64::ONE),
            ((1, 1), Complex64::from(-2.0 * b)),
        ])
        .map_err(|e| e.to_string())?;
        if !h11.approx_eq(&expect, 1e-12) {
            return Err(format!("(1,1) base case failed at B = {b}"));
        }
        for m in 0..=4u32 {
            for n in 0..=4u32 {
                let plain = hermite(b, m, n);
                let shifted = generalized_hermite(b, Complex64::ZERO, Complex64::ZERO, m, n);
                if !shifted.approx_eq(&plain, 1e-12) {
                    return Err(format!(
                        "zero-shift reduction failed at B = {b}, (m, n) = ({m}, {n}): dev {:.2e}",
                        shifted.max_coeff_dev(&plain)
                    ));
                }
            }
        }
    }
    Ok("(1,1) closed form and zero-shift reduction hold for B ∈ {1/2, 1, π}, m, n ≤ 4".to_string())
}

#[test]
fn acceptance() {
    type Check = (&'static str, fn() -> Result<String, String>, Duration);
    let checks: [Check; 10] = [
        ("01 susy-factorization", check_01_susy, Duration::from_secs(5)),
        ("02 landau-levels", check_02_landau_levels, Duration::from_secs(10)),
        ("03 gauge-intertwining", check_03_intertwine, Duration::from_secs(5)),
        ("04 cocycle-chain-rule", check_04_cocycle, Duration::from_secs(30)),
        ("05 integrality-switch", check_05_integrality, Duration::from_secs(30)),
        ("06 projector-kernels", check_06_kernels, Duration::from_secs(60)),
        ("07 dimension-count", check_07_dimension, Duration::from_secs(120)),
        ("08 functional-equation", check_08_functional_equation, Duration::from_secs(60)),
        ("09 grid-oracle", check_09_grid_oracle, Duration::from_secs(60)),
        ("10 polynomial-base-cases", check_10_polynomials, Duration::from_secs(10)),
    ];
    let mut failures = Vec::new();
    for (name, run, budget) in checks {
        let t0 = Instant::now();
        let outcome = run();
        let dt = t0.elapsed();
        let overran = dt > budget;
        match (&outcome, overran) {
            (Ok(detail), false) => {
                println!("[PASS] {name} — {detail} ({:.2} s)", dt.as_secs_f64());
            }
            (Ok(detail), true) => {
                println!(
                    "[FAIL] {name} — passed but overran {:?} budget: {detail} ({:.2} s)",
                    budget,
                    dt.as_secs_f64()
                );
                failures.push(name);
            }
            (Err(detail), _) => {
                println!("[FAIL] {name} — {detail} ({:.2} s)", dt.as_secs_f64());
                failures.push(name);
            }
        }
    }
    assert!(failures.is_empty(), "failed checks: {failures:?}");
}
