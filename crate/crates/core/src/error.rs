//! Crate-wide error type.
//!
//! Numerical routines in this crate fail loudly rather than silently
//! returning garbage: envelope overflow, non-unimodular rotations,
//! non-constant magnetic fields and under-resolved quadrature all map to
//! dedicated variants so callers (and the CLI) can report what went wrong.

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    /// A constructor received NaN or infinite input.
    #[error("non-finite value in input: {context}")]
    NonFinite { context: &'static str },

    /// Two functions with different exponential envelopes were added.
    #[error("exponent quadruples differ beyond tolerance: ({left:?}) vs ({right:?})")]
    ExponentMismatch {
        left: (f64, [f64; 2], [f64; 2], [f64; 2]),
        right: (f64, [f64; 2], [f64; 2], [f64; 2]),
    },

    /// Evaluation point lies so far outside the Gaussian envelope that
    /// exp() would overflow (real part of the exponent above ~700).
    #[error("exponent real part {re:.3e} exceeds the overflow guard")]
    Overflow { re: f64 },

    /// Rotation part of a group element must satisfy |a| = 1.
    #[error("rotation part has modulus {modulus} (must be 1 within 1e-12)")]
    NonUnimodular { modulus: f64 },

    /// Weight parameters must satisfy nu > 0, mu >= 0.
    #[error("invalid weights nu = {nu}, mu = {mu} (need nu > 0, mu >= 0)")]
    InvalidWeights { nu: f64, mu: f64 },

    /// A user-supplied map failed the equivariance identity τ(g·z) = ρ(g)·τ(z).
    #[error("equivariance residual {residual:.3e} exceeds 1e-9")]
    EquivarianceViolated { residual: f64 },

    /// Operation requires an affine pair (closed-form S, gauge, kernels).
    #[error("operation requires an affine equivariant pair")]
    NotAffine,

    /// The derived magnetic field is not constant over sampled points.
    #[error("magnetic field varies by {spread:.3e} over sample points")]
    NotConstant { spread: f64 },

    /// Spectral operations need a strictly positive magnetic field.
    #[error("magnetic field B = {b} is not positive; spectral data undefined")]
    NonPositiveField { b: f64 },

    /// Doubling the quadrature resolution moved the result too much.
    #[error("quadrature under-resolved: doubling changed the integral by {delta:.3e}")]
    QuadratureUnderresolved { delta: f64 },

    /// The lattice/weight combination does not satisfy the cocycle
    /// integrality condition, so the automorphic space is trivial.
    #[error("inconsistent cocycle on the lattice (deviation {deviation:.3e}); the form space is trivial")]
    InconsistentCocycle { deviation: f64 },

    /// Lattice generators are collinear.
    #[error("lattice generators are collinear (zero cell area)")]
    DegenerateLattice,

    /// Periodization seed must carry the Gaussian envelope exp(-B|z|^2).
    #[error("seed envelope exp_a = {found} does not match -B = {expected}")]
    SeedEnvelope { expected: f64, found: f64 },

    /// Finite-difference grids need at least 9 points per axis, odd count.
    #[error("grid too coarse or even: n = {n} (need odd n >= 9)")]
    GridTooCoarse { n: usize },

    /// Malformed JSON input (configs, serialized functions).
    #[error("bad input: {0}")]
    BadInput(String),
}
