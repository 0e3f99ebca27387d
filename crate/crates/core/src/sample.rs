//! Seeded random generators for parameter sweeps and property tests.
//!
//! Everything is driven by an explicit `ChaCha8` stream cipher RNG so that
//! every sweep is reproducible from its seed alone, across platforms and
//! across runs.

use num_complex::Complex64;
use rand::rngs::ChaCha8Rng;
use rand::{RngExt, SeedableRng};

use crate::model::{EquivariantPair, GroupElement, ModelParams};
use crate::wick::WickFunction;

/// Deterministic RNG for a given seed.
pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Uniform point on the unit circle.
pub fn random_unit(r: &mut ChaCha8Rng) -> Complex64 {
    Complex64::from_polar(1.0, r.random_range(-std::f64::consts::PI..std::f64::consts::PI))
}

/// Uniform point in the closed disk of radius `radius`.
pub fn random_disk(r: &mut ChaCha8Rng, radius: f64) -> Complex64 {
    let rho = radius * r.random::<f64>().sqrt();
    let th = r.random_range(0.0..std::f64::consts::TAU);
    Complex64::from_polar(rho, th)
}

/// Random group element: rotation angle uniform, translation in a disk.
pub fn random_group(r: &mut ChaCha8Rng, radius: f64) -> GroupElement {
    GroupElement::new(random_unit(r), random_disk(r, radius)).expect("unit modulus by construction")
}

/// Random inner pair τ(z) = h·z with h drawn like [`random_group`].
pub fn random_inner(r: &mut ChaCha8Rng) -> EquivariantPair {
    EquivariantPair::inner(random_group(r, 1.5)).expect("inner pairs are always equivariant")
}

/// Random conjugate pair τ(z) = α·z̄ + β.
pub fn random_conjugate(r: &mut ChaCha8Rng) -> EquivariantPair {
    EquivariantPair::conjugate(random_group(r, 1.5))
        .expect("conjugate pairs are always equivariant")
}

/// Random model with a guaranteed positive magnetic field. Alternates
/// between the two affine variants; conjugate draws keep μ < ν.
pub fn random_model(r: &mut ChaCha8Rng) -> ModelParams {
    let nu = r.random_range(0.5..3.5);
    if r.random::<bool>() {
        let mu = r.random_range(0.0..2.0);
        ModelParams::new(nu, mu, random_inner(r)).expect("valid weights")
    } else {
        let mu = r.random_range(0.0..0.8 * nu);
        ModelParams::new(nu, mu, random_conjugate(r)).expect("valid weights")
    }
}

/// Random function of total degree ≤ `max_deg` with a decaying Gaussian
/// envelope (width in [−2.5, −0.3]), scaled to unit max coefficient.
pub fn random_wick(r: &mut ChaCha8Rng, max_deg: u32) -> WickFunction {
    let mut terms = Vec::new();
    for m in 0..=max_deg {
        for n in 0..=(max_deg - m) {
            // keep the table sparse-ish so degrees actually vary
            if r.random::<f64>() < 0.7 {
                terms.push(((m, n), random_disk(r, 1.0)));
            }
        }
    }
    if terms.is_empty() {
        terms.push(((0, 0), Complex64::ONE));
    }
    let a = r.random_range(-2.5..-0.3);
    let b = random_disk(r, 1.0);
    let c = random_disk(r, 1.0);
    let d = random_disk(r, 0.5);
    WickFunction::new(&terms, a, b, c, d)
        .expect("finite by construction")
        .normalize_max()
}
