//! Lattices, periodization of eigenfunctions into genuine mixed automorphic
//! forms, and the numerical dimension count of the resulting spaces.
//!
//! Given a model with field B, gauge offset ξ₀ and multiplier χ (see the
//! automorphy module), a decaying seed f with envelope e^{−B|z|²} is averaged
//! over the lattice by twisted shifts:
//!
//! ```text
//! G(z) = Σ_{γ∈Γ} conj(χ(γ)) · e^{−2iB·Im⟨z,γ⟩} · (W f)(z + γ),
//! F(z) = e^{−iφ(z)} · G(z)          (W = gauge transform)
//! ```
//!
//! The twisted shifts compose as a true group action exactly when the
//! pseudo-character law χ(γ+γ′) = e^{2iB·Im⟨γ,γ′⟩}χ(γ)χ(γ′) holds on Γ —
//! which for the affine models is the π-integrality of the cocycle phase.
//! In that case G is a fixed point of every twisted shift, and F satisfies
//! the mixed functional equation F(z+γ) = J^{−ν,−μ}(γ,z)·F(z) exactly (up to
//! series truncation, which is controlled by an explicit Gaussian-tail
//! bound). When the law fails the construction refuses to proceed: the form
//! space is trivial and any "periodization" would be numerical noise.

use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::automorphy::{lattice_multiplier, pseudo_character_deviation};
use crate::cplx::{im_scal, unit_phase};
use crate::error::{Error, Result};
use crate::model::ModelParams;
use crate::spectral::{eigenfunction, gauge_transform};
use crate::wick::WickFunction;

/// Pseudo-character deviation beyond which periodization refuses to run.
pub const COCYCLE_TOL: f64 = 1e-9;
/// Word-ball radius used for the periodization preflight check.
const PREFLIGHT_WORD_LEN: u32 = 3;

/// A rank-2 lattice Γ = ℤω₁ + ℤω₂ in ℂ.
#[derive(Debug, Clone, Copy)]
pub struct Lattice {
    omega1: Complex64,
    omega2: Complex64,
}

impl Lattice {
    /// Requires ℝ-linear independence: |Im(conj(ω₁)·ω₂)| bounded away from
    /// zero relative to the generator sizes.
    pub fn new(omega1: Complex64, omega2: Complex64) -> Result<Self> {
        let area = im_scal(omega2, omega1).abs();
        let scale = omega1.norm() * omega2.norm();
        if !area.is_finite() || area <= 1e-12 * scale.max(1e-300) {
            return Err(Error::DegenerateLattice);
        }
        Ok(Lattice { omega1, omega2 })
    }

    /// The square lattice side·(ℤ + iℤ).
    pub fn square(side: f64) -> Result<Self> {
        Self::new(Complex64::new(side, 0.0), Complex64::new(0.0, side))
    }

    pub fn omega1(&self) -> Complex64 {
        self.omega1
    }

    pub fn omega2(&self) -> Complex64 {
        self.omega2
    }

    /// Area of the fundamental cell |Im(conj(ω₁)·ω₂)|.
    pub fn area(&self) -> f64 {
        im_scal(self.omega2, self.omega1).abs()
    }

    /// m·ω₁ + n·ω₂.
    pub fn point(&self, m: i64, n: i64) -> Complex64 {
        m as f64 * self.omega1 + n as f64 * self.omega2
    }

    /// Upper bound on the covering radius (every point of ℂ is within this
    /// distance of a lattice point).
    pub fn covering_radius_bound(&self) -> f64 {
        0.5 * (self.omega1.norm() + self.omega2.norm())
    }

    /// All lattice points with |γ| ≤ r (inclusive, with a hair of slack for
    /// boundary points), in deterministic (m, n)-lexicographic order.
    pub fn points_in_radius(&self, r: f64) -> Vec<Complex64> {
        let area = self.area();
        let mbound = (r * self.omega2.norm() / area).ceil() as i64 + 1;
        let nbound = (r * self.omega1.norm() / area).ceil() as i64 + 1;
        let rr = r + 1e-12 * (1.0 + r);
        let mut out = Vec::new();
        for m in -mbound..=mbound {
            for n in -nbound..=nbound {
                let g = self.point(m, n);
                if g.norm() <= rr {
                    out.push(g);
                }
            }
        }
        out
    }

    /// The word-ball {mω₁ + nω₂ : |m| + |n| ≤ len} in deterministic order.
    pub fn word_ball(&self, len: u32) -> Vec<Complex64> {
        let l = len as i64;
        let mut out = Vec::new();
        for m in -l..=l {
            for n in -(l - m.abs())..=(l - m.abs()) {
                out.push(self.point(m, n));
            }
        }
        out
    }

    /// Cell-centered g×g sampling of the fundamental domain
    /// {s·ω₁ + t·ω₂ : s, t ∈ [0, 1)}.
    pub fn fundamental_grid(&self, g: usize) -> Vec<Complex64> {
        let mut pts = Vec::with_capacity(g * g);
        for i in 0..g {
            for j in 0..g {
                let s = (i as f64 + 0.5) / g as f64;
                let t = (j as f64 + 0.5) / g as f64;
                pts.push(s * self.omega1 + t * self.omega2);
            }
        }
        pts
    }
}

/// JSON description of a lattice: `{"omega1": [re, im], "omega2": [re, im]}`.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LatticeSpec {
    pub omega1: [f64; 2],
    pub omega2: [f64; 2],
}

impl LatticeSpec {
    pub fn build(&self) -> Result<Lattice> {
        Lattice::new(
            Complex64::new(self.omega1[0], self.omega1[1]),
            Complex64::new(self.omega2[0], self.omega2[1]),
        )
    }
}

/// Smallest radius R (scanned in steps of 0.25) such that the Gaussian-tail
/// bound for the periodization series,
///
/// ```text
/// Σ_{k ≥ ⌊R⌋} count(k) · (zmax + k + 1)^degree · e^{−b·max(0, k − zmax)²},
/// ```
///
/// falls below `eps`, where count(k) bounds the number of lattice points in
/// the annulus [k, k+1) by dilated-annulus area over cell area. Valid for
/// every evaluation point with |z| ≤ zmax. Requires b > 0 and eps > 0.
pub fn truncation_radius(lat: &Lattice, b: f64, poly_degree: u32, zmax: f64, eps: f64) -> f64 {
    let cell = lat.area();
    let rc = lat.covering_radius_bound();
    let shell_count = |k: f64| {
        let outer = k + 1.0 + rc;
        let inner = (k - rc).max(0.0);
        std::f64::consts::PI * (outer * outer - inner * inner) / cell
    };
    let tail = |r: f64| {
        let mut sum = 0.0f64;
        let mut k = r.floor();
        for _ in 0..100_000 {
            let gap = (k - zmax).max(0.0);
            let term = shell_count(k) * (zmax + k + 1.0).powi(poly_degree as i32)
                * (-b * gap * gap).exp();
            sum += term;
            k += 1.0;
            if k > zmax + rc + 2.0 && term < eps * 1e-6 {
                break;
            }
        }
        sum
    };
    let mut r = 0.0f64;
    while tail(r) >= eps {
        r += 0.25;
        if r > 1e4 {
            break; // pathological parameters; caller's tail check will fail loudly
        }
    }
    r
}

/// The closed-form dimension (2B/π)·Area(ℂ/Γ) of each eigenspace of mixed
/// forms; an integer whenever the integrality criterion holds.
pub fn dimension_formula(p: &ModelParams, lat: &Lattice) -> Result<f64> {
    Ok(2.0 * p.magnetic_field()? * lat.area() / std::f64::consts::PI)
}

/// A lattice average of a decaying seed, evaluable anywhere, carrying its
/// own truncation control.
#[derive(Debug, Clone)]
pub struct PeriodizedForm {
    p: ModelParams,
    lat: Lattice,
    /// Gauge-transformed seed W·f: pure weight-B Landau data.
    w: WickFunction,
    b: f64,
    xi0: Complex64,
    eps: f64,
    /// |exp_b| + |exp_c| of `w` — shifts the effective Gaussian center.
    lin: f64,
    /// Coefficient mass of `w` times |e^{exp_d}|.
    amp: f64,
    /// Evaluations with |z| ≤ zmax use the cached point list.
    zmax: f64,
    cached: Vec<(Complex64, Complex64)>,
}

/// Average the seed over the lattice with multiplier-twisted shifts. The
/// seed's Gaussian width must match the field (exp_a = −B); the
/// pseudo-character law is verified first and its failure aborts the
/// construction, because the target space is then trivial.
pub fn periodize(
    p: &ModelParams,
    lat: &Lattice,
    seed: &WickFunction,
    eps: f64,
) -> Result<PeriodizedForm> {
    if !eps.is_finite() || eps <= 0.0 {
        return Err(Error::BadInput("truncation eps must be positive".into()));
    }
    let b = p.magnetic_field()?;
    let (a, _, _, _) = seed.exponent();
    if !seed.is_zero() && (a + b).abs() > 1e-9 {
        return Err(Error::SeedEnvelope { expected: -b, found: a });
    }
    let deviation = pseudo_character_deviation(p, lat, PREFLIGHT_WORD_LEN)?;
    if deviation > COCYCLE_TOL {
        return Err(Error::InconsistentCocycle { deviation });
    }
    let w = gauge_transform(p, seed)?;
    let xi0 = p.gauge_offset()?;
    let (_, wb, wc, wd) = w.exponent();
    let lin = wb.norm() + wc.norm();
    let amp = w.coeff_l1() * wd.re.exp();
    let zmax = 2.0 * (lat.omega1.norm() + lat.omega2.norm()) + 1.0;
    let mut form = PeriodizedForm {
        p: p.clone(),
        lat: *lat,
        w,
        b,
        xi0,
        eps,
        lin,
        amp,
        zmax,
        cached: Vec::new(),
    };
    let r = form.radius_for(zmax);
    form.cached = lat
        .points_in_radius(r)
        .into_iter()
        .map(|g| Ok((g, lattice_multiplier(p, g)?.conj())))
        .collect::<Result<_>>()?;
    Ok(form)
}

impl PeriodizedForm {
    /// Truncation radius adequate for all |z| ≤ zm, folding the seed's
    /// coefficient mass and linear exponent terms into the tail budget.
    fn radius_for(&self, zm: f64) -> f64 {
        let bump = self.amp * (self.lin * zm + self.lin * self.lin / (4.0 * self.b)).exp() + 1.0;
        truncation_radius(
            &self.lat,
            self.b,
            self.w.total_degree(),
            zm + self.lin / (2.0 * self.b),
            self.eps / bump,
        )
    }

    /// The lattice points and weights the cached evaluations sum over.
    pub fn support_len(&self) -> usize {
        self.cached.len()
    }

    /// The mixed automorphic form F(z) = e^{−iφ(z)}·G(z).
    pub fn eval(&self, z: Complex64) -> Result<Complex64> {
        Ok(unit_phase(2.0 * im_scal(z, self.xi0)) * self.eval_gauged(z)?)
    }

    /// The gauge-side series G(z) = Σ conj(χ(γ))·e^{−2iB·Im⟨z,γ⟩}·W(z+γ).
    pub fn eval_gauged(&self, z: Complex64) -> Result<Complex64> {
        if z.norm() <= self.zmax {
            self.sum_over(self.cached.iter().copied(), z)
        } else {
            let r = self.radius_for(z.norm());
            let pts = self.lat.points_in_radius(r);
            let terms = pts
                .into_iter()
                .map(|g| Ok((g, lattice_multiplier(&self.p, g)?.conj())))
                .collect::<Result<Vec<_>>>()?;
            self.sum_over(terms.into_iter(), z)
        }
    }

    fn sum_over(
        &self,
        terms: impl Iterator<Item = (Complex64, Complex64)>,
        z: Complex64,
    ) -> Result<Complex64> {
        let mut acc = Complex64::ZERO;
        for (gamma, weight) in terms {
            let shift = unit_phase(-2.0 * self.b * im_scal(z, gamma));
            acc += weight * shift * self.w.eval(z + gamma)?;
        }
        Ok(acc)
    }
}

/// Result of the numerical rank estimation of a periodized eigenspace.
#[derive(Debug, Clone)]
pub struct DimensionEstimate {
    /// Singular values above `svd_tol`·(largest singular value).
    pub rank: usize,
    /// All singular values of the sample matrix, descending.
    pub singular_values: Vec<f64>,
    /// The closed-form value (2B/π)·Area for comparison.
    pub formula: f64,
    /// True when some singular value falls within a factor of 10 of the
    /// cut — the rank decision is then fragile and needs a finer grid.
    pub near_threshold: bool,
}

/// Estimate the dimension of the level-k eigenspace: periodize the seeds
/// ψ_{k,0..n_seeds}, sample them on a cell-centered grid over the
/// fundamental domain, and count significant singular values of the sample
/// matrix (equivalently, the rank of the discrete L² Gram matrix).
pub fn dimension_estimate(
    p: &ModelParams,
    lat: &Lattice,
    k: u32,
    n_seeds: usize,
    grid_side: usize,
    svd_tol: f64,
) -> Result<DimensionEstimate> {
    if n_seeds == 0 || grid_side < 4 {
        return Err(Error::BadInput(
            "need at least one seed and a 4×4 grid for a rank estimate".into(),
        ));
    }
    let forms: Vec<PeriodizedForm> = (0..n_seeds)
        .map(|n| periodize(p, lat, &eigenfunction(p, k, n as u32)?, 1e-10))
        .collect::<Result<_>>()?;
    let pts = lat.fundamental_grid(grid_side);
    let scale = Complex64::from((lat.area() / pts.len() as f64).sqrt());
    let rows: Vec<Vec<Complex64>> = pts
        .par_iter()
        .map(|&z| {
            forms
                .iter()
                .map(|f| Ok(f.eval(z)? * scale))
                .collect::<Result<Vec<_>>>()
        })
        .collect::<Result<_>>()?;
    let mat = nalgebra::DMatrix::from_fn(pts.len(), n_seeds, |r, c| rows[r][c]);
    let mut sv: Vec<f64> = mat.svd(false, false).singular_values.iter().copied().collect();
    sv.sort_by(|x, y| y.partial_cmp(x).expect("finite singular values"));
    let smax = sv.first().copied().unwrap_or(0.0);
    let cut = svd_tol * smax;
    let rank = sv.iter().filter(|&&s| s > cut).count();
    let near_threshold = smax > 0.0
        && sv
            .iter()
            .any(|&s| s > cut / 10.0 && s < cut * 10.0);
    Ok(DimensionEstimate {
        rank,
        singular_values: sv,
        formula: dimension_formula(p, lat)?,
        near_threshold,
    })
}
