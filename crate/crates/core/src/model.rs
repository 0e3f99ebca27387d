//! The symmetry group G = T ⋉ ℂ, equivariant pairs (ρ, τ), and the scalar
//! data derived from them: the potential S(z), the magnetic field B, and the
//! gauge offset ξ₀ with its phase φ.
//!
//! Group elements are written g = [a, b] with |a| = 1, acting on ℂ by
//! g·z = az + b, composing as [a,b]·[a′,b′] = [aa′, ab′ + b]. An equivariant
//! pair is a map τ: ℂ → ℂ together with a group endomorphism ρ satisfying
//! τ(g·z) = ρ(g)·τ(z). From a pair and weights (ν, μ) we derive
//!
//! ```text
//! S(z) = ν·z + μ·( τ·conj(∂τ/∂z) − conj(τ)·∂τ/∂z̄ )
//! B    = ν + μ·( |∂τ/∂z|² − |∂τ/∂z̄|² )          (constant when (ρ,τ) is equivariant)
//! ξ₀   = S(z) − B·z                                (constant for affine τ)
//! φ(z) = −2·Im⟨z, ξ₀⟩,  ⟨z, w⟩ = z·conj(w),  φ(0) = 0
//! ```

use std::fmt;
use std::sync::Arc;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::cplx::im_scal;
use crate::error::{Error, Result};

/// Allowed deviation of |a| from 1 for a group element.
pub const UNIMODULAR_TOL: f64 = 1e-12;
/// Allowed equivariance residual |τ(g·z) − ρ(g)·τ(z)| in runtime checks.
pub const EQUIVARIANCE_TOL: f64 = 1e-9;

/// Element g = [a, b] of T ⋉ ℂ with |a| = 1, acting by z ↦ az + b.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GroupElement {
    pub a: Complex64,
    pub b: Complex64,
}

impl GroupElement {
    /// Checked constructor; rejects |a| off the unit circle beyond 1e-12.
    pub fn new(a: Complex64, b: Complex64) -> Result<Self> {
        let m = a.norm();
        if !m.is_finite() || (m - 1.0).abs() > UNIMODULAR_TOL {
            return Err(Error::NonUnimodular { modulus: m });
        }
        if !(b.re.is_finite() && b.im.is_finite()) {
            return Err(Error::NonFinite { context: "group translation part" });
        }
        Ok(GroupElement { a, b })
    }

    pub fn identity() -> Self {
        GroupElement { a: Complex64::ONE, b: Complex64::ZERO }
    }

    /// Pure translation [1, b].
    pub fn translation(b: Complex64) -> Self {
        GroupElement { a: Complex64::ONE, b }
    }

    /// Pure rotation [e^{iθ}, 0].
    pub fn rotation(theta: f64) -> Self {
        GroupElement { a: Complex64::from_polar(1.0, theta), b: Complex64::ZERO }
    }

    /// Semidirect-product law [a,b]·[a′,b′] = [aa′, ab′ + b].
    pub fn compose(&self, other: &Self) -> Self {
        GroupElement { a: self.a * other.a, b: self.a * other.b + self.b }
    }

    /// [a,b]⁻¹ = [ā, −ā·b].
    pub fn inverse(&self) -> Self {
        let ac = self.a.conj();
        GroupElement { a: ac, b: -ac * self.b }
    }

    /// g·z = a·z + b.
    pub fn act(&self, z: Complex64) -> Complex64 {
        self.a * z + self.b
    }
}

type CFn = Arc<dyn Fn(Complex64) -> Complex64 + Send + Sync>;
type GFn = Arc<dyn Fn(&GroupElement) -> GroupElement + Send + Sync>;

/// A pair (ρ, τ) with τ(g·z) = ρ(g)·τ(z).
///
/// * `InnerAffine` — τ(z) = h·z = αz + β and ρ(g) = h·g·h⁻¹; equivariant by
///   construction for every h ∈ G.
/// * `ConjugateAffine` — τ(z) = α·z̄ + β for h = [α, β] and
///   ρ([a,b]) = [ā, α·b̄ + β·(1 − ā)]; the simplest pair whose field is
///   B = ν − μ rather than ν + μ.
/// * `Generic` — user closures for τ, its Wirtinger derivatives, its
///   Laplacian Δτ, and ρ. No equivariance is assumed at construction;
///   [`check_equivariance`] and the field-constancy check police it.
#[derive(Clone)]
pub enum EquivariantPair {
    InnerAffine { h: GroupElement },
    ConjugateAffine { h: GroupElement },
    Generic {
        tau: CFn,
        dtau_dz: CFn,
        dtau_dzbar: CFn,
        lap_tau: CFn,
        rho: GFn,
    },
}

impl fmt::Debug for EquivariantPair {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            EquivariantPair::InnerAffine { h } => write!(f, "InnerAffine {{ h: {h:?} }}"),
            EquivariantPair::ConjugateAffine { h } => write!(f, "ConjugateAffine {{ h: {h:?} }}"),
            EquivariantPair::Generic { .. } => write!(f, "Generic {{ .. }}"),
        }
    }
}

/// Fixed spot-check sample used to self-verify pairs at construction.
fn sample_pairs() -> Vec<(GroupElement, Complex64)> {
    let gs = [
        GroupElement::new(Complex64::from_polar(1.0, 0.7), Complex64::new(0.3, -0.4)).unwrap(),
        GroupElement::new(Complex64::from_polar(1.0, -1.9), Complex64::new(-1.1, 0.2)).unwrap(),
        GroupElement::translation(Complex64::new(0.0, 2.5)),
    ];
    let zs = [
        Complex64::new(0.6, 0.8),
        Complex64::new(-1.3, 0.45),
        Complex64::new(0.02, -2.1),
    ];
    gs.iter().zip(zs.iter()).map(|(&g, &z)| (g, z)).collect()
}

impl EquivariantPair {
    /// τ(z) = h·z with ρ the conjugation by h. Self-checks equivariance on
    /// three spot pairs (an identity for exact arithmetic; cheap insurance).
    pub fn inner(h: GroupElement) -> Result<Self> {
        let p = EquivariantPair::InnerAffine { h };
        p.self_check()?;
        Ok(p)
    }

    /// τ(z) = α·z̄ + β for h = [α, β], with the derived endomorphism ρ.
    pub fn conjugate(h: GroupElement) -> Result<Self> {
        let p = EquivariantPair::ConjugateAffine { h };
        p.self_check()?;
        Ok(p)
    }

    /// Unchecked generic pair. The caller supplies the derivatives of τ
    /// (they are not computed numerically, so the field-constancy check
    /// stays an honest independent test).
    pub fn generic(tau: CFn, dtau_dz: CFn, dtau_dzbar: CFn, lap_tau: CFn, rho: GFn) -> Self {
        EquivariantPair::Generic { tau, dtau_dz, dtau_dzbar, lap_tau, rho }
    }

    /// Generic pair with the equivariance spot-check enforced at
    /// construction (residual ≤ 1e-9 on the fixed sample).
    pub fn generic_checked(
        tau: CFn,
        dtau_dz: CFn,
        dtau_dzbar: CFn,
        lap_tau: CFn,
        rho: GFn,
    ) -> Result<Self> {
        let p = Self::generic(tau, dtau_dz, dtau_dzbar, lap_tau, rho);
        p.self_check()?;
        Ok(p)
    }

    fn self_check(&self) -> Result<()> {
        let mut worst = 0.0f64;
        for (g, z) in sample_pairs() {
            worst = worst.max(check_equivariance(self, &g, z));
        }
        if worst > EQUIVARIANCE_TOL {
            Err(Error::EquivarianceViolated { residual: worst })
        } else {
            Ok(())
        }
    }

    pub fn is_affine(&self) -> bool {
        !matches!(self, EquivariantPair::Generic { .. })
    }

    pub fn tau(&self, z: Complex64) -> Complex64 {
        match self {
            EquivariantPair::InnerAffine { h } => h.act(z),
            EquivariantPair::ConjugateAffine { h } => h.a * z.conj() + h.b,
            EquivariantPair::Generic { tau, .. } => tau(z),
        }
    }

    pub fn rho(&self, g: &GroupElement) -> GroupElement {
        match self {
            // h·g·h⁻¹ in closed form: exact at g = identity, where the
            // three-fold composition would leave ~1e-16 dust in b.
            EquivariantPair::InnerAffine { h } => GroupElement {
                a: g.a,
                b: h.a * g.b + h.b * (Complex64::ONE - g.a),
            },
            EquivariantPair::ConjugateAffine { h } => GroupElement {
                a: g.a.conj(),
                b: h.a * g.b.conj() + h.b * (Complex64::ONE - g.a.conj()),
            },
            EquivariantPair::Generic { rho, .. } => rho(g),
        }
    }

    pub fn dtau_dz(&self, z: Complex64) -> Complex64 {
        match self {
            EquivariantPair::InnerAffine { h } => h.a,
            EquivariantPair::ConjugateAffine { .. } => Complex64::ZERO,
            EquivariantPair::Generic { dtau_dz, .. } => dtau_dz(z),
        }
    }

    pub fn dtau_dzbar(&self, z: Complex64) -> Complex64 {
        match self {
            EquivariantPair::InnerAffine { .. } => Complex64::ZERO,
            EquivariantPair::ConjugateAffine { h } => h.a,
            EquivariantPair::Generic { dtau_dzbar, .. } => dtau_dzbar(z),
        }
    }

    /// Full Laplacian Δτ = 4·∂²τ/∂z∂z̄ (identically 0 for affine variants).
    pub fn lap_tau(&self, z: Complex64) -> Complex64 {
        match self {
            EquivariantPair::Generic { lap_tau, .. } => lap_tau(z),
            _ => Complex64::ZERO,
        }
    }
}

/// Pointwise equivariance residual |τ(g·z) − ρ(g)·τ(z)|.
pub fn check_equivariance(pair: &EquivariantPair, g: &GroupElement, z: Complex64) -> f64 {
    (pair.tau(g.act(z)) - pair.rho(g).act(pair.tau(z))).norm()
}

/// Weights (ν, μ) plus an equivariant pair; the full parameter set of the
/// magnetic model.
#[derive(Debug, Clone)]
pub struct ModelParams {
    nu: f64,
    mu: f64,
    pair: EquivariantPair,
}

/// Frozen sample points for the generic field-constancy check.
const FIELD_SAMPLE: [[f64; 2]; 10] = [
    [0.0, 0.0],
    [1.0, 0.0],
    [0.0, -1.0],
    [0.73, 0.21],
    [-1.42, 0.98],
    [2.1, -0.37],
    [-0.66, -1.54],
    [0.05, 2.33],
    [-2.8, 0.44],
    [1.17, 1.93],
];

impl ModelParams {
    /// Requires ν > 0 and μ ≥ 0 (μ = 0 degenerates to a single-weight model).
    pub fn new(nu: f64, mu: f64, pair: EquivariantPair) -> Result<Self> {
        if !(nu.is_finite() && mu.is_finite()) || nu <= 0.0 || mu < 0.0 {
            return Err(Error::InvalidWeights { nu, mu });
        }
        Ok(ModelParams { nu, mu, pair })
    }

    pub fn nu(&self) -> f64 {
        self.nu
    }

    pub fn mu(&self) -> f64 {
        self.mu
    }

    pub fn pair(&self) -> &EquivariantPair {
        &self.pair
    }

    /// The first-order potential
    /// S(z) = ν·z + μ·(τ·conj(∂τ/∂z) − conj(τ)·∂τ/∂z̄).
    pub fn s_at(&self, z: Complex64) -> Complex64 {
        let t = self.pair.tau(z);
        let mixed = t * self.pair.dtau_dz(z).conj() - t.conj() * self.pair.dtau_dzbar(z);
        self.nu * z + self.mu * mixed
    }

    /// Closed form (σ, ξ₀) with S(z) = σ·z + ξ₀ for the affine variants:
    /// inner gives (ν + μ, μ·ᾱ·β); conjugate gives (ν − μ, −μ·α·β̄).
    pub fn s_affine(&self) -> Result<(f64, Complex64)> {
        match &self.pair {
            EquivariantPair::InnerAffine { h } => {
                Ok((self.nu + self.mu, self.mu * h.a.conj() * h.b))
            }
            EquivariantPair::ConjugateAffine { h } => {
                Ok((self.nu - self.mu, -self.mu * h.a * h.b.conj()))
            }
            EquivariantPair::Generic { .. } => Err(Error::NotAffine),
        }
    }

    /// B = ν + μ·(|∂τ/∂z|² − |∂τ/∂z̄|²). For generic pairs the value is
    /// taken at z = 0 after checking constancy on ten frozen sample points
    /// (spread ≤ 1e-8; a non-constant field signals a non-equivariant τ).
    /// Errors with `NonPositiveField` when B ≤ 0: the spectral theory needs
    /// a positive field.
    pub fn magnetic_field(&self) -> Result<f64> {
        let field_at = |z: Complex64| {
            self.nu
                + self.mu
                    * (self.pair.dtau_dz(z).norm_sqr() - self.pair.dtau_dzbar(z).norm_sqr())
        };
        let b = match &self.pair {
            EquivariantPair::InnerAffine { .. } => self.nu + self.mu,
            EquivariantPair::ConjugateAffine { .. } => self.nu - self.mu,
            EquivariantPair::Generic { .. } => {
                let vals: Vec<f64> = FIELD_SAMPLE
                    .iter()
                    .map(|&[x, y]| field_at(Complex64::new(x, y)))
                    .collect();
                let lo = vals.iter().copied().fold(f64::INFINITY, f64::min);
                let hi = vals.iter().copied().fold(f64::NEG_INFINITY, f64::max);
                let spread = hi - lo;
                if !spread.is_finite() || spread > 1e-8 {
                    return Err(Error::NotConstant { spread });
                }
                field_at(Complex64::ZERO)
            }
        };
        if b <= 0.0 {
            return Err(Error::NonPositiveField { b });
        }
        Ok(b)
    }

    /// The gauge offset ξ₀ = S(z) − B·z, constant for affine pairs. The
    /// gauge function is φ(z) = −2·Im⟨z, ξ₀⟩ with φ(0) = 0, and solves
    /// ∂φ/∂z̄ = −i·(S(z) − B·z).
    pub fn gauge_offset(&self) -> Result<Complex64> {
        Ok(self.s_affine()?.1)
    }

    /// φ(z) = −2·Im⟨z, ξ₀⟩ (affine pairs only).
    pub fn gauge_phase(&self, z: Complex64) -> Result<f64> {
        let xi0 = self.gauge_offset()?;
        Ok(-2.0 * im_scal(z, xi0))
    }

    /// The curvature defect R_τ(z) = τ·conj(Δτ) − conj(τ)·Δτ, purely
    /// imaginary, identically 0 for affine τ. Enters the operator as
    /// −(μ/4)·R_τ.
    pub fn r_tau(&self, z: Complex64) -> Complex64 {
        let t = self.pair.tau(z);
        let l = self.pair.lap_tau(z);
        t * l.conj() - t.conj() * l
    }
}

/// JSON description of a model:
/// `{"nu": f, "mu": f, "pair": {"kind": "inner"|"conjugate",
///   "alpha": [re, im], "beta": [re, im]}}`.
/// Generic pairs are constructible only programmatically.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ModelSpec {
    pub nu: f64,
    pub mu: f64,
    pub pair: PairSpec,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields, tag = "kind", rename_all = "lowercase")]
pub enum PairSpec {
    Inner { alpha: [f64; 2], beta: [f64; 2] },
    Conjugate { alpha: [f64; 2], beta: [f64; 2] },
}

impl ModelSpec {
    pub fn build(&self) -> Result<ModelParams> {
        let pair = match self.pair {
            PairSpec::Inner { alpha, beta } => EquivariantPair::inner(GroupElement::new(
                Complex64::new(alpha[0], alpha[1]),
                Complex64::new(beta[0], beta[1]),
            )?)?,
            PairSpec::Conjugate { alpha, beta } => EquivariantPair::conjugate(GroupElement::new(
                Complex64::new(alpha[0], alpha[1]),
                Complex64::new(beta[0], beta[1]),
            )?)?,
        };
        ModelParams::new(self.nu, self.mu, pair)
    }
}
