//! Automorphy factors, the cocycle chain rule, the integrality
//! (nontriviality) criterion, and the lattice multiplier that governs the
//! functional equation of periodized forms.
//!
//! The elementary factor is j^α(g, z) = exp(2iα·Im⟨z, g⁻¹·0⟩); the mixed
//! factor couples two of them through the equivariant pair:
//! J(g, z) = j^ν(g, z) · j^μ(ρ(g), τ(z)). It obeys the chain rule
//!
//! ```text
//! J(g·g′, z) = e^{2i·φ(g,g′)} · J(g, g′·z) · J(g′, z)
//! φ(g, g′)  = ν·Im⟨g⁻¹·0, g′·0⟩ + μ·Im⟨ρ(g⁻¹)·0, ρ(g′)·0⟩
//! ```
//!
//! A form space over a lattice Γ is nontrivial iff φ/π is integral on Γ×Γ.
//! For translations γ the exact identity
//!
//! ```text
//! J^{−ν,−μ}(γ, z) = e^{−iφ_gauge(γ)} · χ(γ) · e^{2iB·Im⟨z,γ⟩}
//! ```
//!
//! holds with the z-independent multiplier χ(γ) = χ̂(0; γ); the functions
//! here compute χ̂, verify its z-independence, and test the pseudo-character
//! law χ(γ+γ′) = e^{2iB·Im⟨γ,γ′⟩}·χ(γ)·χ(γ′) that makes periodization
//! consistent.

use num_complex::Complex64;

use crate::cplx::{im_scal, unit_phase};
use crate::error::Result;
use crate::lattice::Lattice;
use crate::model::{EquivariantPair, GroupElement, ModelParams};

/// A real phase in radians.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PhaseValue(pub f64);

impl PhaseValue {
    /// The phase divided by π (the integrality test looks at this).
    pub fn over_pi(self) -> f64 {
        self.0 / std::f64::consts::PI
    }

    /// Distance of `over_pi` to the nearest integer.
    pub fn integrality_defect(self) -> f64 {
        (self.over_pi() - self.over_pi().round()).abs()
    }
}

/// Single-weight automorphy factor j^α(g, z) = exp(2iα·Im⟨z, g⁻¹·0⟩).
pub fn j_factor(alpha: f64, g: &GroupElement, z: Complex64) -> Complex64 {
    unit_phase(2.0 * alpha * im_scal(z, g.inverse().b))
}

fn mixed_factor_weights(
    nu: f64,
    mu: f64,
    pair: &EquivariantPair,
    g: &GroupElement,
    z: Complex64,
) -> Complex64 {
    j_factor(nu, g, z) * j_factor(mu, &pair.rho(g), pair.tau(z))
}

/// Mixed automorphy factor J(g, z) = j^ν(g, z)·j^μ(ρ(g), τ(z)).
pub fn mixed_factor(p: &ModelParams, g: &GroupElement, z: Complex64) -> Complex64 {
    mixed_factor_weights(p.nu(), p.mu(), p.pair(), g, z)
}

/// The factor with both weights negated, J^{−ν,−μ}(g, z) — the one entering
/// the functional equation of the form space.
pub fn mixed_factor_neg(p: &ModelParams, g: &GroupElement, z: Complex64) -> Complex64 {
    mixed_factor_weights(-p.nu(), -p.mu(), p.pair(), g, z)
}

/// The cocycle phase φ(g, g′) = ν·Im⟨g⁻¹·0, g′·0⟩ + μ·Im⟨ρ(g⁻¹)·0, ρ(g′)·0⟩.
/// For both affine variants and translations [1,c], [1,c′] it reduces to
/// −B·Im⟨c, c′⟩.
pub fn chain_phase(p: &ModelParams, g: &GroupElement, g2: &GroupElement) -> PhaseValue {
    let pair = p.pair();
    let first = im_scal(g.inverse().b, g2.b);
    let second = im_scal(pair.rho(&g.inverse()).b, pair.rho(g2).b);
    PhaseValue(p.nu() * first + p.mu() * second)
}

/// |J(gg′, z) − e^{2iφ(g,g′)}·J(g, g′z)·J(g′, z)| — zero in exact arithmetic.
pub fn chain_rule_residual(
    p: &ModelParams,
    g: &GroupElement,
    g2: &GroupElement,
    z: Complex64,
) -> f64 {
    let lhs = mixed_factor(p, &g.compose(g2), z);
    let rhs = unit_phase(2.0 * chain_phase(p, g, g2).0)
        * mixed_factor(p, g, g2.act(z))
        * mixed_factor(p, g2, z);
    (lhs - rhs).norm()
}

/// Outcome of the integrality sweep over a word-ball of lattice pairs.
#[derive(Debug, Clone)]
pub struct NontrivialityReport {
    /// True iff every checked phase/π is within 1e-9 of an integer.
    pub passes: bool,
    /// Word-ball radius that was enumerated (|m| + |n| ≤ radius).
    pub word_radius: u32,
    pub pairs_checked: usize,
    /// Largest distance of phase/π from the nearest integer.
    pub worst_defect: f64,
    pub worst_pair: (Complex64, Complex64),
    pub worst_phase_over_pi: f64,
}

/// Tolerance for "phase/π is an integer".
pub const INTEGRALITY_TOL: f64 = 1e-9;

/// Sweep the word-ball {mω₁ + nω₂ : |m|+|n| ≤ word_len}² and test whether
/// the cocycle phase is an integer multiple of π on every pair — the
/// criterion for the form space to contain anything at all. The check is
/// sound but bounded: it proves nothing beyond the enumerated radius, which
/// the report records.
pub fn nontriviality_test(p: &ModelParams, lat: &Lattice, word_len: u32) -> NontrivialityReport {
    let pts = lat.word_ball(word_len);
    let mut worst_defect = -1.0f64;
    let mut worst_pair = (Complex64::ZERO, Complex64::ZERO);
    let mut worst_phase = 0.0;
    let mut count = 0usize;
    for &ga in &pts {
        let tg = GroupElement::translation(ga);
        for &gb in &pts {
            let phase = chain_phase(p, &tg, &GroupElement::translation(gb));
            let defect = phase.integrality_defect();
            count += 1;
            if defect > worst_defect {
                worst_defect = defect;
                worst_pair = (ga, gb);
                worst_phase = phase.over_pi();
            }
        }
    }
    NontrivialityReport {
        passes: worst_defect <= INTEGRALITY_TOL,
        word_radius: word_len,
        pairs_checked: count,
        worst_defect: worst_defect.max(0.0),
        worst_pair,
        worst_phase_over_pi: worst_phase,
    }
}

/// The candidate multiplier read off at base point z:
/// χ̂(z; γ) = e^{i(φ(z+γ)−φ(z))} ·
///            e^{−2i[(B−ν)·Im⟨z,γ⟩ + μ·Im⟨τ(z), ρ([1,γ])⁻¹·0⟩]}.
/// For equivariant affine pairs this is independent of z, and its value is
/// the lattice multiplier.
pub fn chi_hat(p: &ModelParams, z: Complex64, gamma: Complex64) -> Result<Complex64> {
    let (sigma, _) = p.s_affine()?;
    let phi_diff = p.gauge_phase(z + gamma)? - p.gauge_phase(z)?;
    let u = p.pair().rho(&GroupElement::translation(gamma)).inverse().b;
    let bracket = (sigma - p.nu()) * im_scal(z, gamma) + p.mu() * im_scal(p.pair().tau(z), u);
    Ok(unit_phase(phi_diff - 2.0 * bracket))
}

/// The multiplier χ(γ) = χ̂(0; γ) = e^{iφ(γ)}·e^{−2iμ·Im⟨τ(0), ρ([1,γ])⁻¹·0⟩}.
/// For inner pairs this evaluates to e^{4i·Im⟨ξ₀, γ⟩}. It satisfies the
/// exact identity J^{−ν,−μ}(γ,z) = e^{−iφ(γ)}·χ(γ)·e^{2iB·Im⟨z,γ⟩}.
pub fn lattice_multiplier(p: &ModelParams, gamma: Complex64) -> Result<Complex64> {
    chi_hat(p, Complex64::ZERO, gamma)
}

/// Max over the samples of |χ̂(z; γ) − χ̂(0; γ)|: the z-independence that
/// makes the multiplier well defined.
pub fn multiplier_independence_residual(
    p: &ModelParams,
    gamma: Complex64,
    z_samples: &[Complex64],
) -> Result<f64> {
    let base = chi_hat(p, Complex64::ZERO, gamma)?;
    let mut worst = 0.0f64;
    for &z in z_samples {
        worst = worst.max((chi_hat(p, z, gamma)? - base).norm());
    }
    Ok(worst)
}

/// Max deviation of χ(γ+γ′) from e^{2iB·Im⟨γ,γ′⟩}·χ(γ)·χ(γ′) over the
/// word-ball of the given radius. When this vanishes the twisted lattice
/// shifts compose as a true group action and periodization is consistent.
pub fn pseudo_character_deviation(
    p: &ModelParams,
    lat: &Lattice,
    word_len: u32,
) -> Result<f64> {
    let (sigma, _) = p.s_affine()?;
    let pts = lat.word_ball(word_len);
    let mut worst = 0.0f64;
    for &ga in &pts {
        let ca = lattice_multiplier(p, ga)?;
        for &gb in &pts {
            let cb = lattice_multiplier(p, gb)?;
            let lhs = lattice_multiplier(p, ga + gb)?;
            let rhs = unit_phase(2.0 * sigma * im_scal(ga, gb)) * ca * cb;
            worst = worst.max((lhs - rhs).norm());
        }
    }
    Ok(worst)
}

/// |F(z+γ) − J^{−ν,−μ}(γ, z)·F(z)| for a sampled function F — the defining
/// functional equation of the mixed form space, testable pointwise.
pub fn functional_eq_residual<F>(p: &ModelParams, f: F, gamma: Complex64, z: Complex64) -> f64
where
    F: Fn(Complex64) -> Complex64,
{
    let g = GroupElement::translation(gamma);
    (f(z + gamma) - mixed_factor_neg(p, &g, z) * f(z)).norm()
}
