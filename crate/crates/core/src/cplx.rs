//! Small complex-arithmetic helpers shared across modules.
//!
//! Conventions used throughout the crate:
//! * scalar product ⟨z, w⟩ = z·conj(w) (linear in the first slot),
//! * `im_scal(z, w)` = Im⟨z, w⟩,
//! * approximate equality is relative to the larger magnitude but never
//!   tighter than absolute: |x − y| ≤ tol·max(1, |x|, |y|).

use num_complex::Complex64;

/// Im⟨z, w⟩ with ⟨z, w⟩ = z·conj(w).
#[inline]
pub fn im_scal(z: Complex64, w: Complex64) -> f64 {
    (z * w.conj()).im
}

/// e^{iθ} as a unit complex number.
#[inline]
pub fn unit_phase(theta: f64) -> Complex64 {
    Complex64::from_polar(1.0, theta)
}

/// |x − y| ≤ tol·max(1, |x|, |y|) for reals.
#[inline]
pub fn approx_eq(x: f64, y: f64, tol: f64) -> bool {
    (x - y).abs() <= tol * 1.0_f64.max(x.abs()).max(y.abs())
}

/// |x − y| ≤ tol·max(1, |x|, |y|) for complex scalars.
#[inline]
pub fn approx_eq_c(x: Complex64, y: Complex64, tol: f64) -> bool {
    (x - y).norm() <= tol * 1.0_f64.max(x.norm()).max(y.norm())
}
