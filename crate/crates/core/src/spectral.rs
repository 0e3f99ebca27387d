//! The operator layer: the magnetic Schrödinger operator, its ladder
//! operators, the gauge transform, magnetic translations, and the complex
//! Hermite polynomials that generate the eigenspaces.
//!
//! With S(z) = σz + ξ₀ (affine pairs) the second-order operator is
//!
//! ```text
//! L f = −∂²f/∂z∂z̄ − (S·∂f/∂z − S̄·∂f/∂z̄) + |S|²·f − (μ/4)·R_τ·f
//! ```
//!
//! (the R_τ term vanishes identically for affine τ). The first-order ladder
//! operators A = ∂/∂z̄ + S and Ã = −∂/∂z + S̄ factorize it supersymmetrically:
//! ÃA + B = L = AÃ − B with B = σ, which pins the spectrum to the Landau
//! levels E_k = B·(2k + 1). All of this is computed exactly inside the
//! closed polynomial × Gaussian class.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::model::{EquivariantPair, GroupElement, ModelParams};
use crate::wick::WickFunction;

/// Which sign convention relates the Ã-iteration to the Rodrigues formula.
///
/// `RodriguesMinus` means Ã^m(seed) = (−1)^m · (Rodrigues ψ_{m,n}); the
/// calibration in [`calibrate_ladder_sign`] lands here, so −Ã is the true
/// creation operator and the Rodrigues route is the sign-stable one.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LadderSign {
    RodriguesPlus,
    RodriguesMinus,
}

/// Laguerre polynomial L_k(x) by the stable three-term recurrence
/// (k+1)·L_{k+1} = (2k+1−x)·L_k − k·L_{k−1}.
pub fn laguerre(k: u32, x: f64) -> f64 {
    if k == 0 {
        return 1.0;
    }
    let mut lm1 = 1.0; // L_0
    let mut l = 1.0 - x; // L_1
    for j in 1..k {
        let jf = j as f64;
        let next = ((2.0 * jf + 1.0 - x) * l - jf * lm1) / (jf + 1.0);
        lm1 = l;
        l = next;
    }
    l
}

/// Complex Hermite polynomial H^B_{m,n}(z, z̄): the polynomial part of
/// ∂^m/∂z^m (z^n · e^{−2B|z|²}), i.e. the Rodrigues formula with the
/// doubled-width Gaussian stripped afterwards. Requires B > 0 to mean
/// anything spectrally, but the algebra itself is unconditional.
pub fn hermite(b: f64, m: u32, n: u32) -> WickFunction {
    let mut f = WickFunction::new(
        &[((n, 0), Complex64::ONE)],
        -2.0 * b,
        Complex64::ZERO,
        Complex64::ZERO,
        Complex64::ZERO,
    )
    .expect("finite");
    for _ in 0..m {
        f = f.dz();
    }
    strip_envelope(&f)
}

/// Generalized Hermite polynomial G^{B;h}_{m,n} for the holomorphic affine
/// twist h(z) = h0 + h1·z: polynomial part of ∂^m/∂z^m (z^n e^{−2B|z|² + h}).
/// At h = 0 this is exactly [`hermite`].
pub fn generalized_hermite(b: f64, h0: Complex64, h1: Complex64, m: u32, n: u32) -> WickFunction {
    let mut f = WickFunction::new(&[((n, 0), Complex64::ONE)], -2.0 * b, h1, Complex64::ZERO, h0)
        .expect("finite");
    for _ in 0..m {
        f = f.dz();
    }
    strip_envelope(&f)
}

/// Drop the exponential envelope, keeping the polynomial part.
fn strip_envelope(f: &WickFunction) -> WickFunction {
    let terms: Vec<_> = f.terms().collect();
    WickFunction::polynomial(&terms).expect("finite")
}

/// Sparse polynomial as (powers, coefficient) pairs.
type TermList = Vec<((u32, u32), Complex64)>;

/// The affine potential as polynomial multipliers: S = σz + ξ₀ and its
/// conjugate S̄ = σz̄ + conj(ξ₀) (σ is real).
fn s_polys(p: &ModelParams) -> Result<(TermList, TermList)> {
    let (sigma, xi0) = p.s_affine()?;
    let s = vec![((1, 0), Complex64::from(sigma)), ((0, 0), xi0)];
    let sbar = vec![((0, 1), Complex64::from(sigma)), ((0, 0), xi0.conj())];
    Ok((s, sbar))
}

/// Apply the full second-order operator (affine pairs; the curvature term
/// R_τ is identically zero there). Exact in the closed function class.
pub fn apply_l(p: &ModelParams, f: &WickFunction) -> Result<WickFunction> {
    let (s, sbar) = s_polys(p)?;
    let (sigma, xi0) = p.s_affine()?;
    // |S|² = σ²|z|² + σ·conj(ξ₀)·z + σ·ξ₀·z̄ + |ξ₀|²
    let s_sq = vec![
        ((1, 1), Complex64::from(sigma * sigma)),
        ((1, 0), sigma * xi0.conj()),
        ((0, 1), sigma * xi0),
        ((0, 0), Complex64::from(xi0.norm_sqr())),
    ];
    let mixed = f.dz().dzbar().scale(-Complex64::ONE);
    let drift = f
        .dz()
        .mul_poly(&s)
        .scale(-Complex64::ONE)
        .add(&f.dzbar().mul_poly(&sbar))?;
    mixed.add(&drift)?.add(&f.mul_poly(&s_sq))
}

/// The annihilator A f = ∂f/∂z̄ + S·f (lowers the Landau level by one).
pub fn apply_lowering(p: &ModelParams, f: &WickFunction) -> Result<WickFunction> {
    let (s, _) = s_polys(p)?;
    f.dzbar().add(&f.mul_poly(&s))
}

/// The conjugate ladder operator Ã f = −∂f/∂z + S̄·f. Its negative is the
/// creation operator: (−Ã)ψ_{m,n} = ψ_{m+1,n} exactly (see [`LadderSign`]).
pub fn apply_raising(p: &ModelParams, f: &WickFunction) -> Result<WickFunction> {
    let (_, sbar) = s_polys(p)?;
    f.dz().scale(-Complex64::ONE).add(&f.mul_poly(&sbar))
}

/// Residuals of the two supersymmetric factorizations:
/// r1 = max coefficient deviation of (ÃA + B)f from Lf,
/// r2 = likewise for (AÃ − B)f. Both are exactly zero in exact arithmetic.
pub fn susy_residuals(p: &ModelParams, f: &WickFunction) -> Result<(f64, f64)> {
    let b = Complex64::from(p.s_affine()?.0);
    let lf = apply_l(p, f)?;
    let r1 = apply_raising(p, &apply_lowering(p, f)?)?
        .add(&f.scale(b))?
        .max_coeff_dev(&lf);
    let r2 = apply_lowering(p, &apply_raising(p, f)?)?
        .add(&f.scale(-b))?
        .max_coeff_dev(&lf);
    Ok((r1, r2))
}

/// The k-th Landau level E_k = B·(2k + 1).
pub fn landau_level(b: f64, k: u32) -> f64 {
    b * (2.0 * k as f64 + 1.0)
}

/// Eigenfunction ψ_{m,n} = H^B_{m,n}(z, z̄) · e^{−B|z|²} · e^{−iφ(z)} built
/// by the Rodrigues route; satisfies L ψ_{m,n} = B(2m+1) ψ_{m,n}.
/// The gauge factor contributes exp(conj(ξ₀)·z − ξ₀·z̄) to the envelope.
pub fn eigenfunction(p: &ModelParams, m: u32, n: u32) -> Result<WickFunction> {
    let b = p.magnetic_field()?;
    let (_, xi0) = p.s_affine()?;
    let terms: Vec<_> = hermite(b, m, n).terms().collect();
    WickFunction::new(&terms, -b, xi0.conj(), -xi0, Complex64::ZERO)
}

/// The literal Ã-iteration ψ̃_{m,n} = Ã^m (z^n · e^{−B|z|² − iφ}); equals
/// (−1)^m times [`eigenfunction`].
pub fn eigenfunction_via_raising(p: &ModelParams, m: u32, n: u32) -> Result<WickFunction> {
    let b = p.magnetic_field()?;
    let (_, xi0) = p.s_affine()?;
    let mut f = WickFunction::new(
        &[((n, 0), Complex64::ONE)],
        -b,
        xi0.conj(),
        -xi0,
        Complex64::ZERO,
    )?;
    for _ in 0..m {
        f = apply_raising(p, &f)?;
    }
    Ok(f)
}

/// Decide the ladder sign convention empirically: compare Ã(seed) against
/// the Rodrigues ψ_{1,0} for the given model.
pub fn calibrate_ladder_sign(p: &ModelParams) -> Result<LadderSign> {
    let via = eigenfunction_via_raising(p, 1, 0)?;
    let rod = eigenfunction(p, 1, 0)?;
    if via.max_coeff_dev(&rod) <= 1e-9 * rod.max_abs_coeff().max(1.0) {
        Ok(LadderSign::RodriguesPlus)
    } else if via.scale(-Complex64::ONE).max_coeff_dev(&rod)
        <= 1e-9 * rod.max_abs_coeff().max(1.0)
    {
        Ok(LadderSign::RodriguesMinus)
    } else {
        Err(Error::BadInput(
            "ladder routes differ by more than a sign; operator wiring is broken".into(),
        ))
    }
}

/// Gauge transform W f = e^{iφ} f; maps the mixed model to the pure-field
/// Landau model. With φ(z) = i(conj(ξ₀)z − ξ₀z̄), multiplying by e^{iφ}
/// shifts the envelope by (−conj(ξ₀), ξ₀) in (b, c).
pub fn gauge_transform(p: &ModelParams, f: &WickFunction) -> Result<WickFunction> {
    let xi0 = p.gauge_offset()?;
    let phase =
        WickFunction::pure_exponential(0.0, -xi0.conj(), xi0, Complex64::ZERO).expect("finite");
    Ok(f.mul(&phase))
}

/// Inverse gauge transform W⁻¹ f = e^{−iφ} f.
pub fn gauge_transform_inv(p: &ModelParams, f: &WickFunction) -> Result<WickFunction> {
    let xi0 = p.gauge_offset()?;
    let phase =
        WickFunction::pure_exponential(0.0, xi0.conj(), -xi0, Complex64::ZERO).expect("finite");
    Ok(f.mul(&phase))
}

/// Max coefficient deviation of W(L f) from L_B(W f), where L_B is the
/// pure Landau operator with weight ν = B, μ = 0. Zero in exact arithmetic:
/// W intertwines the two operators.
pub fn intertwine_residual(p: &ModelParams, f: &WickFunction) -> Result<f64> {
    let b = p.magnetic_field()?;
    let p_b = ModelParams::new(b, 0.0, EquivariantPair::inner(GroupElement::identity())?)?;
    let lhs = gauge_transform(p, &apply_l(p, f)?)?;
    let rhs = apply_l(&p_b, &gauge_transform(p, f)?)?;
    Ok(lhs.max_coeff_dev(&rhs))
}

/// The automorphy factor J(g, ·) as a pure exponential of the class:
/// J(g,z) = exp(2iν·Im⟨z, g⁻¹·0⟩ + 2iμ·Im⟨τ(z), ρ(g)⁻¹·0⟩), which is affine
/// in (z, z̄) exactly when τ is.
fn j_envelope(p: &ModelParams, g: &GroupElement) -> Result<WickFunction> {
    let nu = Complex64::from(p.nu());
    let mu = Complex64::from(p.mu());
    let w = g.inverse().b; // g⁻¹·0
    let mut eb = nu * w.conj();
    let mut ec = -nu * w;
    let mut ed = Complex64::ZERO;
    let u = p.pair().rho(g).inverse().b; // ρ(g)⁻¹·0
    match p.pair() {
        EquivariantPair::InnerAffine { h } => {
            // ⟨αz + β, u⟩ = αū·z + βū
            eb += mu * h.a * u.conj();
            ec += -mu * h.a.conj() * u;
            ed += mu * (h.b * u.conj() - h.b.conj() * u);
        }
        EquivariantPair::ConjugateAffine { h } => {
            // ⟨αz̄ + β, u⟩ = αū·z̄ + βū — the z and z̄ slots swap
            eb += -mu * h.a.conj() * u;
            ec += mu * h.a * u.conj();
            ed += mu * (h.b * u.conj() - h.b.conj() * u);
        }
        EquivariantPair::Generic { .. } => return Err(Error::NotAffine),
    }
    WickFunction::pure_exponential(0.0, eb, ec, ed)
}

/// Magnetic translation T_g f = J(g, ·) · (f ∘ g), exact in the class.
pub fn magnetic_translation(
    p: &ModelParams,
    g: &GroupElement,
    f: &WickFunction,
) -> Result<WickFunction> {
    Ok(f.translate(g).mul(&j_envelope(p, g)?))
}

/// Max coefficient deviation of T_g(L f) from L(T_g f); zero in exact
/// arithmetic because the operator commutes with magnetic translations.
pub fn translation_commutator_residual(
    p: &ModelParams,
    g: &GroupElement,
    f: &WickFunction,
) -> Result<f64> {
    let lhs = magnetic_translation(p, g, &apply_l(p, f)?)?;
    let rhs = apply_l(p, &magnetic_translation(p, g, f)?)?;
    Ok(lhs.max_coeff_dev(&rhs))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cplx::im_scal;
    use crate::sample;

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

    #[test]
    fn laguerre_small_values() {
        assert_eq!(laguerre(0, 3.7), 1.0);
        assert_eq!(laguerre(1, 2.0), -1.0);
        // L_2(x) = 1 − 2x + x²/2, so L_2(2) = 1 − 4 + 2 = −1
        assert!((laguerre(2, 2.0) + 1.0).abs() < 1e-15);
        // L_3(x) = 1 − 3x + 3x²/2 − x³/6 at x = 0.7
        let x: f64 = 0.7;
        let explicit = 1.0 - 3.0 * x + 1.5 * x * x - x * x * x / 6.0;
        assert!((laguerre(3, x) - explicit).abs() < 1e-14);
    }

    #[test]
    fn hermite_base_cases() {
        let b = 1.3;
        // H_{0,n} = z^n
        for n in 0..5u32 {
            let h = hermite(b, 0, n);
            assert_eq!(h.coeff(n, 0), Complex64::ONE);
            assert_eq!(h.terms().count(), 1);
        }
        // H_{1,0} = −2Bz̄
        let h10 = hermite(b, 1, 0);
        assert!((h10.coeff(0, 1) - c(-2.0 * b, 0.0)).norm() < 1e-15);
        assert_eq!(h10.terms().count(), 1);
        // H_{1,1} = 1 − 2B|z|²
        let h11 = hermite(b, 1, 1);
        assert!((h11.coeff(0, 0) - Complex64::ONE).norm() < 1e-15);
        assert!((h11.coeff(1, 1) - c(-2.0 * b, 0.0)).norm() < 1e-15);
        assert_eq!(h11.terms().count(), 2);
    }

    #[test]
    fn hermite_recurrence_degree_and_leading_coefficient() {
        let b = 0.85;
        for m in 0..4u32 {
            for n in 0..4u32 {
                let h = hermite(b, m, n);
                // total degree m + n, leading coefficient of z^n z̄^m is (−2B)^m
                assert_eq!(h.total_degree(), m + n);
                let lead = h.coeff(n, m);
                let expect = (-2.0 * b).powi(m as i32);
                assert!(
                    (lead - c(expect, 0.0)).norm() < 1e-12 * expect.abs().max(1.0),
                    "leading coeff for m={m}, n={n}"
                );
                // recurrence H_{m+1,n} = (∂_z − 2Bz̄)·H_{m,n}
                let next = hermite(b, m + 1, n);
                let rec = h
                    .dz()
                    .add(&h.mul_poly(&[((0, 1), c(-2.0 * b, 0.0))]))
                    .unwrap();
                assert!(next.approx_eq(&rec, 1e-12), "recurrence at m={m}, n={n}");
            }
        }
    }

    #[test]
    fn generalized_hermite_degenerates_and_shifts() {
        let b = 1.1;
        let h0 = c(0.3, -0.8);
        let h1 = c(-0.5, 0.4);
        // h = 0 reduces to the plain polynomials
        for m in 0..5u32 {
            for n in 0..5u32 {
                let g = generalized_hermite(b, Complex64::ZERO, Complex64::ZERO, m, n);
                assert!(g.approx_eq(&hermite(b, m, n), 1e-12));
            }
        }
        // G_{1,0} = h1 − 2Bz̄
        let g10 = generalized_hermite(b, h0, h1, 1, 0);
        assert!((g10.coeff(0, 0) - h1).norm() < 1e-15);
        assert!((g10.coeff(0, 1) - c(-2.0 * b, 0.0)).norm() < 1e-15);
        // G_{0,n} = z^n regardless of h
        let g03 = generalized_hermite(b, h0, h1, 0, 3);
        assert_eq!(g03.coeff(3, 0), Complex64::ONE);
        assert_eq!(g03.terms().count(), 1);
    }

    #[test]
    fn ground_state_and_first_level_arithmetic() {
        // μ = 0: L(e^{−ν|z|²}) = ν·e^{−ν|z|²}
        let nu = 1.4;
        let p = inner_model(nu, 0.0, c(1.0, 0.0), c(0.0, 0.0));
        let ground = WickFunction::pure_exponential(-nu, c(0.0, 0.0), c(0.0, 0.0), c(0.0, 0.0))
            .unwrap();
        let lg = apply_l(&p, &ground).unwrap();
        assert!(lg.approx_eq(&ground.scale(c(nu, 0.0)), 1e-12));

        // μ = 0: L(z̄·e^{−ν|z|²}) = 3ν·(z̄ e^{−ν|z|²}), the first level
        let f = WickFunction::new(&[((0, 1), Complex64::ONE)], -nu, c(0.0, 0.0), c(0.0, 0.0), c(0.0, 0.0))
            .unwrap();
        let lf = apply_l(&p, &f).unwrap();
        assert!(lf.approx_eq(&f.scale(c(3.0 * nu, 0.0)), 1e-12));
    }

    #[test]
    fn worked_eigenfunction_example() {
        // inner pair h = [1,1], ν = 1, μ = 2: B = 3, ξ₀ = 2,
        // ψ_{1,1} = (1 − 6|z|²)·exp(−3|z|² + 2z − 2z̄), eigenvalue 9
        let p = inner_model(1.0, 2.0, c(1.0, 0.0), c(1.0, 0.0));
        let psi = eigenfunction(&p, 1, 1).unwrap();
        let (a, b, cc, d) = psi.exponent();
        assert_eq!(a, -3.0);
        assert!((b - c(2.0, 0.0)).norm() < 1e-15);
        assert!((cc - c(-2.0, 0.0)).norm() < 1e-15);
        assert!(d.norm() < 1e-15);
        assert!((psi.coeff(0, 0) - Complex64::ONE).norm() < 1e-15);
        assert!((psi.coeff(1, 1) - c(-6.0, 0.0)).norm() < 1e-15);

        let lp = apply_l(&p, &psi).unwrap();
        assert!(lp.approx_eq(&psi.scale(c(9.0, 0.0)), 1e-12));
        assert_eq!(landau_level(3.0, 1), 9.0);
    }

    #[test]
    fn eigenvalues_across_orders_and_variants() {
        let models = [
            inner_model(1.0, 2.0, c(1.0, 0.0), c(1.0, 0.0)),
            inner_model(std::f64::consts::PI - 1.0, 1.0, Complex64::from_polar(1.0, 0.6), c(0.4, -0.7)),
            conj_model(3.0, 1.0, Complex64::from_polar(1.0, -0.9), c(0.0, 1.0)),
        ];
        for p in &models {
            let b = p.magnetic_field().unwrap();
            for m in 0..4u32 {
                for n in 0..4u32 {
                    let psi = eigenfunction(p, m, n).unwrap().normalize_max();
                    let lp = apply_l(p, &psi).unwrap();
                    let dev = lp.max_coeff_dev(&psi.scale(c(landau_level(b, m), 0.0)));
                    assert!(dev <= 1e-9, "eigen residual {dev} at m={m}, n={n}");
                }
            }
        }
    }

    #[test]
    fn susy_factorizations() {
        let mut r = sample::rng(11);
        for _ in 0..20 {
            let p = sample::random_model(&mut r);
            let f = sample::random_wick(&mut r, 6);
            let (r1, r2) = susy_residuals(&p, &f).unwrap();
            assert!(r1 <= 1e-9 && r2 <= 1e-9, "susy residuals ({r1}, {r2})");
        }
        // zero input gives exactly zero residuals
        let p = inner_model(1.0, 2.0, c(1.0, 0.0), c(1.0, 0.0));
        assert_eq!(susy_residuals(&p, &WickFunction::zero()).unwrap(), (0.0, 0.0));

        // negative control: a field offset of 0.1 leaves a visible residual
        let f = sample::random_wick(&mut sample::rng(12), 4);
        let b = p.s_affine().unwrap().0;
        let lf = apply_l(&p, &f).unwrap();
        let perturbed = apply_raising(&p, &apply_lowering(&p, &f).unwrap())
            .unwrap()
            .add(&f.scale(c(b + 0.1, 0.0)))
            .unwrap();
        let dev = perturbed.max_coeff_dev(&lf);
        assert!((dev - 0.1 * f.max_abs_coeff()).abs() <= 1e-12, "dev = {dev}");
    }

    #[test]
    fn lowering_annihilates_and_steps_down() {
        let p = conj_model(3.0, 1.0, c(1.0, 0.0), c(0.0, 1.0));
        let b = p.magnetic_field().unwrap();
        for n in 0..5u32 {
            let psi0 = eigenfunction(&p, 0, n).unwrap();
            assert!(apply_lowering(&p, &psi0).unwrap().is_zero(), "A must kill the bottom level");
        }
        // A ψ_{m,n} lies in level m−1: L(Aψ) = B(2m−1)·(Aψ)
        for m in 1..4u32 {
            let psi = eigenfunction(&p, m, 2).unwrap();
            let down = apply_lowering(&p, &psi).unwrap().normalize_max();
            let l = apply_l(&p, &down).unwrap();
            let dev = l.max_coeff_dev(&down.scale(c(b * (2.0 * m as f64 - 1.0), 0.0)));
            assert!(dev <= 1e-9, "lowered eigen residual {dev} at m={m}");
        }
    }

    #[test]
    fn ladder_routes_differ_by_alternating_sign() {
        let models = [
            inner_model(1.0, 2.0, c(1.0, 0.0), c(1.0, 0.0)),
            conj_model(3.0, 1.0, Complex64::from_polar(1.0, 0.3), c(0.5, 0.5)),
        ];
        for p in &models {
            assert_eq!(calibrate_ladder_sign(p).unwrap(), LadderSign::RodriguesMinus);
            for m in 0..5u32 {
                for n in 0..3u32 {
                    let via = eigenfunction_via_raising(p, m, n).unwrap();
                    let rod = eigenfunction(p, m, n).unwrap();
                    let sign = if m % 2 == 0 { 1.0 } else { -1.0 };
                    assert!(
                        via.approx_eq(&rod.scale(c(sign, 0.0)), 1e-9),
                        "route mismatch at m={m}, n={n}"
                    );
                }
            }
        }
    }

    #[test]
    fn gauge_transform_round_trip_and_action() {
        let p = inner_model(1.0, 2.0, c(1.0, 0.0), c(1.0, 0.0));
        let f = sample::random_wick(&mut sample::rng(5), 5);
        let round = gauge_transform_inv(&p, &gauge_transform(&p, &f).unwrap()).unwrap();
        assert!(round.approx_eq(&f, 1e-12));

        // μ = 0 means φ ≡ 0 and W is the identity
        let p0 = inner_model(1.0, 0.0, c(1.0, 0.0), c(2.0, 1.0));
        assert!(gauge_transform(&p0, &f).unwrap().approx_eq(&f, 1e-15));

        // W maps ψ_{m,n} to the gauge-free form H^B_{m,n}·e^{−B|z|²}
        let b = p.magnetic_field().unwrap();
        let psi = eigenfunction(&p, 2, 1).unwrap();
        let w = gauge_transform(&p, &psi).unwrap();
        let (a, eb, ec, ed) = w.exponent();
        assert_eq!(a, -b);
        assert!(eb.norm() < 1e-15 && ec.norm() < 1e-15 && ed.norm() < 1e-15);
        assert!(strip_envelope(&w).approx_eq(&hermite(b, 2, 1), 1e-12));
    }

    #[test]
    fn intertwines_with_pure_landau() {
        let mut r = sample::rng(23);
        for _ in 0..20 {
            let p = sample::random_model(&mut r);
            let f = sample::random_wick(&mut r, 5);
            let res = intertwine_residual(&p, &f).unwrap();
            assert!(res <= 1e-9, "intertwine residual {res}");
        }
        // μ = 0: both sides are literally the same operator
        let p0 = inner_model(2.0, 0.0, c(1.0, 0.0), c(0.0, 0.0));
        let f = sample::random_wick(&mut sample::rng(6), 4);
        assert_eq!(intertwine_residual(&p0, &f).unwrap(), 0.0);
        // second variant with B = 2
        let pc = conj_model(3.0, 1.0, c(1.0, 0.0), c(0.0, 1.0));
        assert!(intertwine_residual(&pc, &f).unwrap() <= 1e-9);
    }

    #[test]
    fn magnetic_translation_matches_pointwise_definition() {
        let mut r = sample::rng(31);
        for _ in 0..10 {
            let p = sample::random_model(&mut r);
            let g = sample::random_group(&mut r, 1.2);
            let f = sample::random_wick(&mut r, 4);
            let tf = magnetic_translation(&p, &g, &f).unwrap();
            for _ in 0..3 {
                let z = sample::random_disk(&mut r, 1.0);
                // J(g,z) = exp(2iν·Im⟨z, g⁻¹·0⟩ + 2iμ·Im⟨τ(z), ρ(g)⁻¹·0⟩)
                let w = g.inverse().b;
                let u = p.pair().rho(&g).inverse().b;
                let phase = 2.0 * p.nu() * im_scal(z, w)
                    + 2.0 * p.mu() * im_scal(p.pair().tau(z), u);
                let expect = Complex64::from_polar(1.0, phase) * f.eval(g.act(z)).unwrap();
                let got = tf.eval(z).unwrap();
                assert!(
                    (got - expect).norm() <= 1e-10 * expect.norm().max(1.0),
                    "pointwise T_g mismatch"
                );
            }
        }
    }

    #[test]
    fn translations_commute_with_the_operator() {
        let mut r = sample::rng(37);
        // identity leaves f untouched
        let p = sample::random_model(&mut r);
        let f = sample::random_wick(&mut r, 5);
        let tf = magnetic_translation(&p, &GroupElement::identity(), &f).unwrap();
        assert!(tf.approx_eq(&f, 1e-15));

        for _ in 0..15 {
            let p = sample::random_model(&mut r);
            let f = sample::random_wick(&mut r, 4);
            let g = sample::random_group(&mut r, 1.5);
            let res = translation_commutator_residual(&p, &g, &f).unwrap();
            assert!(res <= 1e-9, "commutator residual {res}");
            // pure rotation and pure translation separately
            let rot = GroupElement::rotation(1.1);
            assert!(translation_commutator_residual(&p, &rot, &f).unwrap() <= 1e-9);
            let tr = GroupElement::translation(c(0.3, -0.9));
            assert!(translation_commutator_residual(&p, &tr, &f).unwrap() <= 1e-9);
        }
    }
}
