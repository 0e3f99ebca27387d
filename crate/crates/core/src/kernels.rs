//! Spectral projector kernels of the mixed-form Landau levels and the 2-D
//! quadrature engine used to verify their idempotence numerically.
//!
//! For field B and gauge phase φ the level-k projector kernel is
//!
//! ```text
//! K_k(z, w) = (2B/π) · e^{−i(φ(z)−φ(w))} · e^{2iB·Im⟨z,w⟩}
//!             · e^{−B|z−w|²} · L_k(2B|z−w|²)
//! ```
//!
//! with L_k the Laguerre polynomial. Diagonal value 2B/π, Hermitian in
//! (z, w), exactly covariant under simultaneous translation, and — the
//! quantitative content — idempotent and mutually orthogonal under plain
//! Lebesgue integration: ∫ K_k(z,w)·K_j(w,u) dλ(w) = δ_{kj}·K_k(z,u).

use num_complex::Complex64;
use rayon::prelude::*;

use crate::cplx::{im_scal, unit_phase};
use crate::error::{Error, Result};
use crate::model::ModelParams;
use crate::spectral::laguerre;

/// Minimum sensible resolution per axis; below this the doubling check
/// cannot say anything meaningful.
pub const MIN_POINTS_PER_AXIS: usize = 16;

/// Convergence threshold for the n vs 2n quadrature doubling check.
pub const DOUBLING_TOL: f64 = 1e-8;

/// One-dimensional rule used on each axis of the tensor grid.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum QuadRule {
    /// Uniform trapezoid rule — spectrally accurate for smooth integrands
    /// that decay below rounding at the domain edge, which is exactly the
    /// Gaussian-envelope situation here.
    Trapezoid,
    /// Gauss–Legendre nodes, for cross-checking the trapezoid answer with a
    /// structurally different discretization.
    GaussLegendre,
}

/// Axis-aligned square integration domain.
#[derive(Debug, Clone, Copy)]
pub struct QuadratureSpec {
    pub center: Complex64,
    /// Half-width of the square (the inscribed disk radius).
    pub radius: f64,
    pub points_per_axis: usize,
}

/// Gauss–Legendre nodes and weights on [−1, 1] by Newton iteration on the
/// Legendre recurrence (standard Golub–Welsch-free construction).
fn gauss_legendre(n: usize) -> (Vec<f64>, Vec<f64>) {
    let mut nodes = vec![0.0; n];
    let mut weights = vec![0.0; n];
    for i in 0..n.div_ceil(2) {
        // Chebyshev-like initial guess for the i-th positive root
        let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            // evaluate P_n and P_n' at x via the three-term recurrence
            let mut p0 = 1.0;
            let mut p1 = x;
            for k in 2..=n {
                let kf = k as f64;
                let p2 = ((2.0 * kf - 1.0) * x * p1 - (kf - 1.0) * p0) / kf;
                p0 = p1;
                p1 = p2;
            }
            dp = n as f64 * (x * p1 - p0) / (x * x - 1.0);
            let dx = p1 / dp;
            x -= dx;
            if dx.abs() < 1e-15 {
                break;
            }
        }
        nodes[i] = -x;
        nodes[n - 1 - i] = x;
        let w = 2.0 / ((1.0 - x * x) * dp * dp);
        weights[i] = w;
        weights[n - 1 - i] = w;
    }
    if n % 2 == 1 {
        nodes[n / 2] = 0.0;
    }
    (nodes, weights)
}

/// Nodes and weights along one axis of the square.
fn axis(rule: QuadRule, n: usize, center: f64, radius: f64) -> (Vec<f64>, Vec<f64>) {
    match rule {
        QuadRule::Trapezoid => {
            let h = 2.0 * radius / (n - 1) as f64;
            let nodes: Vec<f64> = (0..n).map(|i| center - radius + i as f64 * h).collect();
            let weights: Vec<f64> = (0..n)
                .map(|i| if i == 0 || i == n - 1 { 0.5 * h } else { h })
                .collect();
            (nodes, weights)
        }
        QuadRule::GaussLegendre => {
            let (xs, ws) = gauss_legendre(n);
            (
                xs.iter().map(|&x| center + radius * x).collect(),
                ws.iter().map(|&w| radius * w).collect(),
            )
        }
    }
}

/// ∫∫ f dλ over the square, as a tensor product of the 1-D rule. Rows are
/// evaluated in parallel but accumulated in a fixed order, so the result is
/// bit-reproducible across runs and thread counts.
pub fn integrate_2d<F>(spec: &QuadratureSpec, rule: QuadRule, f: F) -> Result<Complex64>
where
    F: Fn(Complex64) -> Complex64 + Sync,
{
    if spec.points_per_axis < MIN_POINTS_PER_AXIS {
        return Err(Error::BadInput(format!(
            "points_per_axis must be at least {MIN_POINTS_PER_AXIS}, got {}",
            spec.points_per_axis
        )));
    }
    if !(spec.radius > 0.0 && spec.radius.is_finite()) {
        return Err(Error::BadInput("quadrature radius must be positive".into()));
    }
    let (xs, wxs) = axis(rule, spec.points_per_axis, spec.center.re, spec.radius);
    let (ys, wys) = axis(rule, spec.points_per_axis, spec.center.im, spec.radius);
    let rows: Vec<Complex64> = ys
        .par_iter()
        .zip(wys.par_iter())
        .map(|(&y, &wy)| {
            let mut row = Complex64::ZERO;
            for (&x, &wx) in xs.iter().zip(wxs.iter()) {
                row += wx * f(Complex64::new(x, y));
            }
            wy * row
        })
        .collect();
    Ok(rows.into_iter().sum())
}

/// Gauge phase difference ψ(z, w) = φ(z) − φ(w) entering the kernel.
pub fn psi_phase(p: &ModelParams, z: Complex64, w: Complex64) -> Result<f64> {
    Ok(p.gauge_phase(z)? - p.gauge_phase(w)?)
}

/// Kernel with the model reduced to raw numbers (b, ξ₀) — hot-loop form.
fn kernel_raw(b: f64, xi0: Complex64, k: u32, z: Complex64, w: Complex64) -> Complex64 {
    let psi = -2.0 * im_scal(z, xi0) + 2.0 * im_scal(w, xi0);
    let d2 = (z - w).norm_sqr();
    Complex64::from(2.0 * b / std::f64::consts::PI * (-b * d2).exp() * laguerre(k, 2.0 * b * d2))
        * unit_phase(-psi + 2.0 * b * im_scal(z, w))
}

/// The level-k projector kernel K_k(z, w) of the model.
pub fn projector_kernel(
    p: &ModelParams,
    k: u32,
    z: Complex64,
    w: Complex64,
) -> Result<Complex64> {
    Ok(kernel_raw(p.magnetic_field()?, p.gauge_offset()?, k, z, w))
}

/// |K_k(z+c, w+c) − e^{2iB·Im⟨z−w, c⟩}·K_k(z, w)| — exact covariance of the
/// kernel under simultaneous magnetic translation, gauge phase included.
pub fn kernel_invariance_residual(
    p: &ModelParams,
    k: u32,
    z: Complex64,
    w: Complex64,
    c: Complex64,
) -> Result<f64> {
    let b = p.magnetic_field()?;
    let lhs = projector_kernel(p, k, z + c, w + c)?;
    let rhs = unit_phase(2.0 * b * im_scal(z - w, c)) * projector_kernel(p, k, z, w)?;
    Ok((lhs - rhs).norm())
}

/// |∫ K_k(z,w)·K_j(w,u) dλ(w) − δ_{kj}·K_k(z,u)|, with the integral taken
/// over a square centered between z and u and wide enough that the Gaussian
/// tails are far below the tolerance. The rule is run at n and 2n points
/// per axis; disagreement beyond `DOUBLING_TOL` aborts with
/// `QuadratureUnderresolved` instead of returning a misleading residual.
pub fn kernel_idempotence_residual(
    p: &ModelParams,
    k: u32,
    j: u32,
    z: Complex64,
    u: Complex64,
    rule: QuadRule,
    points_per_axis: usize,
) -> Result<f64> {
    let b = p.magnetic_field()?;
    let xi0 = p.gauge_offset()?;
    let center = 0.5 * (z + u);
    let radius = 0.5 * (z - u).norm() + 7.0 / b.sqrt();
    let f = |w: Complex64| kernel_raw(b, xi0, k, z, w) * kernel_raw(b, xi0, j, w, u);
    let coarse = integrate_2d(
        &QuadratureSpec { center, radius, points_per_axis },
        rule,
        f,
    )?;
    let fine = integrate_2d(
        &QuadratureSpec { center, radius, points_per_axis: 2 * points_per_axis },
        rule,
        f,
    )?;
    let delta = (fine - coarse).norm();
    if delta > DOUBLING_TOL {
        return Err(Error::QuadratureUnderresolved { delta });
    }
    let target = if k == j {
        kernel_raw(b, xi0, k, z, u)
    } else {
        Complex64::ZERO
    };
    Ok((fine - target).norm())
}
