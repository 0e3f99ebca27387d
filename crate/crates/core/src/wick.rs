//! Polynomial × Gaussian function class closed under the operators we need.
//!
//! Every function handled symbolically by this crate has the shape
//!
//! ```text
//! f(z) = ( Σ_{m,n} c[m,n] · z^m · z̄^n ) · exp( a·|z|² + b·z + c·z̄ + d )
//! ```
//!
//! with `a` real and `b, c, d` complex. The class is closed under the
//! Wirtinger derivatives ∂/∂z and ∂/∂z̄, multiplication by polynomials in
//! (z, z̄), products, and affine substitution z ↦ αz + β with |α| = 1 — which
//! is exactly what Landau-level calculations perform. Keeping `a` real is a
//! type-level guarantee (the field is `f64`), so a complex Gaussian width
//! cannot be constructed by accident.
//!
//! Coefficients are pruned at 1e-14 relative to the largest magnitude after
//! every operation; exponent tuples must match to 1e-10 before two functions
//! may be added.

use std::collections::BTreeMap;

use num_complex::Complex64;
use serde_json::{json, Value};

use crate::cplx::{approx_eq, approx_eq_c};
use crate::error::{Error, Result};

/// Relative pruning threshold for polynomial coefficients.
pub const PRUNE_REL: f64 = 1e-14;
/// Tolerance for exponent agreement in additions.
pub const EXP_TOL: f64 = 1e-10;
/// Default tolerance for approximate equality of functions.
pub const APPROX_TOL: f64 = 1e-10;
/// Evaluation guard: exp() overflows near 709, stop earlier.
const OVERFLOW_RE: f64 = 700.0;

/// Monomial key: (power of z, power of z̄).
pub type Term = (u32, u32);

#[derive(Debug, Clone)]
pub struct WickFunction {
    coeffs: BTreeMap<Term, Complex64>,
    exp_a: f64,
    exp_b: Complex64,
    exp_c: Complex64,
    exp_d: Complex64,
}

fn finite_c(v: Complex64, context: &'static str) -> Result<()> {
    if v.re.is_finite() && v.im.is_finite() {
        Ok(())
    } else {
        Err(Error::NonFinite { context })
    }
}

impl WickFunction {
    /// Build a function from monomial terms and the exponent quadruple
    /// (a, b, c, d). Rejects non-finite input; prunes tiny coefficients.
    pub fn new(
        terms: &[(Term, Complex64)],
        exp_a: f64,
        exp_b: Complex64,
        exp_c: Complex64,
        exp_d: Complex64,
    ) -> Result<Self> {
        if !exp_a.is_finite() {
            return Err(Error::NonFinite { context: "exp_a" });
        }
        finite_c(exp_b, "exp_b")?;
        finite_c(exp_c, "exp_c")?;
        finite_c(exp_d, "exp_d")?;
        let mut coeffs = BTreeMap::new();
        for &((m, n), c) in terms {
            finite_c(c, "coefficient")?;
            if c != Complex64::ZERO {
                *coeffs.entry((m, n)).or_insert(Complex64::ZERO) += c;
            }
        }
        let mut f = WickFunction { coeffs, exp_a, exp_b, exp_c, exp_d };
        f.prune();
        Ok(f)
    }

    /// Polynomial with trivial exponent.
    pub fn polynomial(terms: &[(Term, Complex64)]) -> Result<Self> {
        Self::new(terms, 0.0, Complex64::ZERO, Complex64::ZERO, Complex64::ZERO)
    }

    /// The pure exponential exp(a|z|² + bz + cz̄ + d).
    pub fn pure_exponential(a: f64, b: Complex64, c: Complex64, d: Complex64) -> Result<Self> {
        Self::new(&[((0, 0), Complex64::ONE)], a, b, c, d)
    }

    /// z^m · z̄^n.
    pub fn monomial(m: u32, n: u32) -> Self {
        Self::polynomial(&[((m, n), Complex64::ONE)]).expect("finite")
    }

    /// Constant c (trivial exponent).
    pub fn constant(c: Complex64) -> Self {
        Self::polynomial(&[((0, 0), c)]).expect("finite")
    }

    /// The zero function (empty polynomial, trivial exponent). A zero
    /// function is exponent-compatible with everything.
    pub fn zero() -> Self {
        WickFunction {
            coeffs: BTreeMap::new(),
            exp_a: 0.0,
            exp_b: Complex64::ZERO,
            exp_c: Complex64::ZERO,
            exp_d: Complex64::ZERO,
        }
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Exponent quadruple (a, b, c, d).
    pub fn exponent(&self) -> (f64, Complex64, Complex64, Complex64) {
        (self.exp_a, self.exp_b, self.exp_c, self.exp_d)
    }

    /// Coefficient of z^m z̄^n (zero if absent).
    pub fn coeff(&self, m: u32, n: u32) -> Complex64 {
        self.coeffs.get(&(m, n)).copied().unwrap_or(Complex64::ZERO)
    }

    /// Iterate terms in (m, n)-lexicographic order.
    pub fn terms(&self) -> impl Iterator<Item = (Term, Complex64)> + '_ {
        self.coeffs.iter().map(|(&k, &v)| (k, v))
    }

    /// Highest powers (max m, max n) present; (0, 0) for the zero function.
    pub fn degrees(&self) -> (u32, u32) {
        let mut dm = 0;
        let mut dn = 0;
        for &(m, n) in self.coeffs.keys() {
            dm = dm.max(m);
            dn = dn.max(n);
        }
        (dm, dn)
    }

    /// Largest m + n over all terms.
    pub fn total_degree(&self) -> u32 {
        self.coeffs.keys().map(|&(m, n)| m + n).max().unwrap_or(0)
    }

    /// Largest coefficient magnitude (0 for the zero function).
    pub fn max_abs_coeff(&self) -> f64 {
        self.coeffs.values().map(|c| c.norm()).fold(0.0, f64::max)
    }

    /// Sum of coefficient magnitudes; bounds |polynomial| ≤ this · max(1,|z|)^deg.
    pub fn coeff_l1(&self) -> f64 {
        self.coeffs.values().map(|c| c.norm()).sum()
    }

    fn prune(&mut self) {
        let maxc = self.max_abs_coeff();
        if maxc == 0.0 {
            self.coeffs.clear();
            return;
        }
        let cut = PRUNE_REL * maxc;
        self.coeffs.retain(|_, c| c.norm() > cut);
    }

    fn exp_tuple(&self) -> (f64, [f64; 2], [f64; 2], [f64; 2]) {
        (
            self.exp_a,
            [self.exp_b.re, self.exp_b.im],
            [self.exp_c.re, self.exp_c.im],
            [self.exp_d.re, self.exp_d.im],
        )
    }

    fn exponents_match(&self, other: &Self, tol: f64) -> bool {
        approx_eq(self.exp_a, other.exp_a, tol)
            && approx_eq_c(self.exp_b, other.exp_b, tol)
            && approx_eq_c(self.exp_c, other.exp_c, tol)
            && approx_eq_c(self.exp_d, other.exp_d, tol)
    }

    /// Pointwise sum. The envelopes must agree (a zero function is
    /// compatible with anything and acts as the identity).
    pub fn add(&self, other: &Self) -> Result<Self> {
        if self.is_zero() {
            return Ok(other.clone());
        }
        if other.is_zero() {
            return Ok(self.clone());
        }
        if !self.exponents_match(other, EXP_TOL) {
            return Err(Error::ExponentMismatch {
                left: self.exp_tuple(),
                right: other.exp_tuple(),
            });
        }
        let mut out = self.clone();
        for (&k, &v) in &other.coeffs {
            *out.coeffs.entry(k).or_insert(Complex64::ZERO) += v;
        }
        out.prune();
        Ok(out)
    }

    /// Multiply every coefficient by a scalar.
    pub fn scale(&self, s: Complex64) -> Self {
        let mut out = self.clone();
        for v in out.coeffs.values_mut() {
            *v *= s;
        }
        out.prune();
        out
    }

    /// Scale so the largest coefficient has magnitude 1 (no-op on zero).
    pub fn normalize_max(&self) -> Self {
        let m = self.max_abs_coeff();
        if m == 0.0 {
            self.clone()
        } else {
            self.scale(Complex64::new(1.0 / m, 0.0))
        }
    }

    /// Multiply by a polynomial in (z, z̄); the envelope is untouched.
    pub fn mul_poly(&self, poly: &[(Term, Complex64)]) -> Self {
        let mut coeffs: BTreeMap<Term, Complex64> = BTreeMap::new();
        for (&(m1, n1), &c1) in &self.coeffs {
            for &((m2, n2), c2) in poly {
                let v = c1 * c2;
                if v != Complex64::ZERO {
                    *coeffs.entry((m1 + m2, n1 + n2)).or_insert(Complex64::ZERO) += v;
                }
            }
        }
        let mut out = WickFunction {
            coeffs,
            exp_a: self.exp_a,
            exp_b: self.exp_b,
            exp_c: self.exp_c,
            exp_d: self.exp_d,
        };
        out.prune();
        out
    }

    /// Pointwise product: polynomials convolve, exponents add.
    pub fn mul(&self, other: &Self) -> Self {
        let poly: Vec<(Term, Complex64)> = other.terms().collect();
        let mut out = self.mul_poly(&poly);
        out.exp_a += other.exp_a;
        out.exp_b += other.exp_b;
        out.exp_c += other.exp_c;
        out.exp_d += other.exp_d;
        out
    }

    /// Wirtinger derivative ∂/∂z. Product rule against the envelope:
    /// ∂_z [P·e^E] = (∂_z P + (a·z̄ + b)·P)·e^E.
    pub fn dz(&self) -> Self {
        let mut coeffs: BTreeMap<Term, Complex64> = BTreeMap::new();
        for (&(m, n), &c) in &self.coeffs {
            if m > 0 {
                *coeffs.entry((m - 1, n)).or_insert(Complex64::ZERO) += c * m as f64;
            }
            let az = c * self.exp_a;
            if az != Complex64::ZERO {
                *coeffs.entry((m, n + 1)).or_insert(Complex64::ZERO) += az;
            }
            let bz = c * self.exp_b;
            if bz != Complex64::ZERO {
                *coeffs.entry((m, n)).or_insert(Complex64::ZERO) += bz;
            }
        }
        let mut out = WickFunction { coeffs, ..*self };
        out.prune();
        out
    }

    /// Wirtinger derivative ∂/∂z̄: (∂_z̄ P + (a·z + c)·P)·e^E.
    pub fn dzbar(&self) -> Self {
        let mut coeffs: BTreeMap<Term, Complex64> = BTreeMap::new();
        for (&(m, n), &c) in &self.coeffs {
            if n > 0 {
                *coeffs.entry((m, n - 1)).or_insert(Complex64::ZERO) += c * n as f64;
            }
            let az = c * self.exp_a;
            if az != Complex64::ZERO {
                *coeffs.entry((m + 1, n)).or_insert(Complex64::ZERO) += az;
            }
            let cz = c * self.exp_c;
            if cz != Complex64::ZERO {
                *coeffs.entry((m, n)).or_insert(Complex64::ZERO) += cz;
            }
        }
        let mut out = WickFunction { coeffs, ..*self };
        out.prune();
        out
    }

    /// Evaluate at z by nested Horner over z and z̄, then apply the
    /// envelope. Errors if the exponent's real part exceeds the overflow
    /// guard (the point lies far outside the Gaussian envelope).
    pub fn eval(&self, z: Complex64) -> Result<Complex64> {
        let zb = z.conj();
        let e = Complex64::new(self.exp_a * z.norm_sqr(), 0.0)
            + self.exp_b * z
            + self.exp_c * zb
            + self.exp_d;
        if e.re > OVERFLOW_RE {
            return Err(Error::Overflow { re: e.re });
        }
        if self.coeffs.is_empty() {
            return Ok(Complex64::ZERO);
        }
        let (dm, dn) = self.degrees();
        // dense (dm+1) x (dn+1) table; degrees stay small in practice
        let cols = dn as usize + 1;
        let mut table = vec![Complex64::ZERO; (dm as usize + 1) * cols];
        for (&(m, n), &c) in &self.coeffs {
            table[m as usize * cols + n as usize] = c;
        }
        let mut acc = Complex64::ZERO;
        for m in (0..=dm as usize).rev() {
            let row = &table[m * cols..(m + 1) * cols];
            let mut r = Complex64::ZERO;
            for n in (0..cols).rev() {
                r = r * zb + row[n];
            }
            acc = acc * z + r;
        }
        Ok(acc * e.exp())
    }

    /// Substitute z ↦ αz + β for a group element g = [α, β] (|α| = 1):
    /// returns f∘g. The Gaussian width is preserved because |α| = 1.
    pub fn translate(&self, g: &crate::model::GroupElement) -> Self {
        let al = g.a;
        let be = g.b;
        let alc = al.conj();
        let bec = be.conj();

        let mut coeffs: BTreeMap<Term, Complex64> = BTreeMap::new();
        for (&(m, n), &c) in &self.coeffs {
            // (αz+β)^m (ᾱz̄+β̄)^n expanded binomially
            let mut zpow = vec![Complex64::ZERO; m as usize + 1];
            let mut bpow = Complex64::ONE; // β^(m-j) built downward
            for j in (0..=m as usize).rev() {
                zpow[j] = binom(m, j as u32) * al.powu(j as u32) * bpow;
                bpow *= be;
            }
            let mut zbpow = vec![Complex64::ZERO; n as usize + 1];
            let mut bcpow = Complex64::ONE;
            for k in (0..=n as usize).rev() {
                zbpow[k] = binom(n, k as u32) * alc.powu(k as u32) * bcpow;
                bcpow *= bec;
            }
            for (j, &cj) in zpow.iter().enumerate() {
                for (k, &ck) in zbpow.iter().enumerate() {
                    let v = c * cj * ck;
                    if v != Complex64::ZERO {
                        *coeffs.entry((j as u32, k as u32)).or_insert(Complex64::ZERO) += v;
                    }
                }
            }
        }
        // a|αz+β|² + b(αz+β) + c(ᾱz̄+β̄) + d regrouped in (|z|², z, z̄, 1)
        let a = self.exp_a;
        let exp_b = a * al * bec + self.exp_b * al;
        let exp_c = a * alc * be + self.exp_c * alc;
        let exp_d = Complex64::new(a * be.norm_sqr(), 0.0)
            + self.exp_b * be
            + self.exp_c * bec
            + self.exp_d;
        let mut out = WickFunction { coeffs, exp_a: a, exp_b, exp_c, exp_d };
        out.prune();
        out
    }

    /// True iff exponents and all coefficients agree within `tol`
    /// (relative to the larger magnitude, with an absolute floor of tol).
    pub fn approx_eq(&self, other: &Self, tol: f64) -> bool {
        if !(self.is_zero() || other.is_zero()) && !self.exponents_match(other, tol) {
            return false;
        }
        let keys: std::collections::BTreeSet<Term> = self
            .coeffs
            .keys()
            .chain(other.coeffs.keys())
            .copied()
            .collect();
        keys.into_iter()
            .all(|(m, n)| approx_eq_c(self.coeff(m, n), other.coeff(m, n), tol))
    }

    /// Largest |c_self − c_other| over the union of terms. Returns +∞ when
    /// the envelopes disagree (the difference is not in the class then).
    pub fn max_coeff_dev(&self, other: &Self) -> f64 {
        if !(self.is_zero() || other.is_zero()) && !self.exponents_match(other, 1e-9) {
            return f64::INFINITY;
        }
        let keys: std::collections::BTreeSet<Term> = self
            .coeffs
            .keys()
            .chain(other.coeffs.keys())
            .copied()
            .collect();
        keys.into_iter()
            .map(|(m, n)| (self.coeff(m, n) - other.coeff(m, n)).norm())
            .fold(0.0, f64::max)
    }

    /// JSON form: `{"coeffs": [[m, n, re, im], ...],
    ///              "exp": [a, b_re, b_im, c_re, c_im, d_re, d_im]}`.
    pub fn to_json(&self) -> Value {
        let coeffs: Vec<Value> = self
            .coeffs
            .iter()
            .map(|(&(m, n), c)| json!([m, n, c.re, c.im]))
            .collect();
        json!({
            "coeffs": coeffs,
            "exp": [
                self.exp_a,
                self.exp_b.re, self.exp_b.im,
                self.exp_c.re, self.exp_c.im,
                self.exp_d.re, self.exp_d.im,
            ],
        })
    }

    /// Inverse of [`to_json`](Self::to_json).
    pub fn from_json(v: &Value) -> Result<Self> {
        let obj = v.as_object().ok_or_else(|| bad("expected object"))?;
        let exp = obj
            .get("exp")
            .and_then(Value::as_array)
            .ok_or_else(|| bad("missing 'exp' array"))?;
        if exp.len() != 7 {
            return Err(bad("'exp' must have 7 entries"));
        }
        let e: Vec<f64> = exp
            .iter()
            .map(|x| x.as_f64().ok_or_else(|| bad("'exp' entries must be numbers")))
            .collect::<Result<_>>()?;
        let coeffs = obj
            .get("coeffs")
            .and_then(Value::as_array)
            .ok_or_else(|| bad("missing 'coeffs' array"))?;
        let mut terms = Vec::with_capacity(coeffs.len());
        for row in coeffs {
            let r = row.as_array().ok_or_else(|| bad("coeff rows must be arrays"))?;
            if r.len() != 4 {
                return Err(bad("coeff rows must be [m, n, re, im]"));
            }
            let m = r[0].as_u64().ok_or_else(|| bad("m must be a non-negative integer"))?;
            let n = r[1].as_u64().ok_or_else(|| bad("n must be a non-negative integer"))?;
            let re = r[2].as_f64().ok_or_else(|| bad("re must be a number"))?;
            let im = r[3].as_f64().ok_or_else(|| bad("im must be a number"))?;
            terms.push(((m as u32, n as u32), Complex64::new(re, im)));
        }
        WickFunction::new(
            &terms,
            e[0],
            Complex64::new(e[1], e[2]),
            Complex64::new(e[3], e[4]),
            Complex64::new(e[5], e[6]),
        )
    }
}

fn bad(msg: &str) -> Error {
    Error::BadInput(msg.to_string())
}

/// Binomial coefficient as f64 (exact for the small degrees used here).
fn binom(n: u32, k: u32) -> f64 {
    if k > n {
        return 0.0;
    }
    let k = k.min(n - k);
    let mut acc = 1.0f64;
    for i in 0..k {
        acc = acc * (n - i) as f64 / (i + 1) as f64;
    }
    acc
}
