//! Inducing symbols: polynomials, exponentials of quadratics, and linear maps.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Largest accepted polynomial degree for user-supplied symbols.
pub const MAX_DEGREE: usize = 64;

const ZERO: Complex64 = Complex64::new(0.0, 0.0);

#[derive(Debug, Clone, PartialEq, Error)]
pub enum SymbolError {
    #[error("polynomial degree {degree} exceeds the cap of {MAX_DEGREE}")]
    DegreeCap { degree: usize },
    #[error("exponent polynomial must have degree at most 2, got {degree}")]
    ExponentDegree { degree: usize },
    #[error("symbol coefficient is not finite")]
    NonFinite,
    #[error("alpha must be positive and finite, got {0}")]
    InvalidAlpha(f64),
}

/// Polynomial with complex coefficients, lowest degree first.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Polynomial {
    coeffs: Vec<Complex64>,
}

impl Polynomial {
    pub fn new(coeffs: Vec<Complex64>) -> Result<Self, SymbolError> {
        if coeffs.iter().any(|c| !c.re.is_finite() || !c.im.is_finite()) {
            return Err(SymbolError::NonFinite);
        }
        let p = Self::from_coeffs(coeffs);
        match p.degree() {
            Some(d) if d > MAX_DEGREE => Err(SymbolError::DegreeCap { degree: d }),
            _ => Ok(p),
        }
    }

    /// Real coefficients, lowest degree first.
    pub fn real(coeffs: &[f64]) -> Result<Self, SymbolError> {
        Self::new(coeffs.iter().map(|&c| Complex64::new(c, 0.0)).collect())
    }

    /// Unchecked constructor for internal intermediates; trims trailing zeros.
    fn from_coeffs(mut coeffs: Vec<Complex64>) -> Self {
        while coeffs.last().is_some_and(|c| *c == ZERO) {
            coeffs.pop();
        }
        Self { coeffs }
    }

    pub fn zero() -> Self {
        Self { coeffs: Vec::new() }
    }

    pub fn constant(c: Complex64) -> Self {
        Self::from_coeffs(vec![c])
    }

    /// `z^n`.
    pub fn monomial(n: usize) -> Self {
        let mut coeffs = vec![ZERO; n + 1];
        coeffs[n] = Complex64::new(1.0, 0.0);
        Self { coeffs }
    }

    pub fn coeffs(&self) -> &[Complex64] {
        &self.coeffs
    }

    pub fn coeff(&self, k: usize) -> Complex64 {
        self.coeffs.get(k).copied().unwrap_or(ZERO)
    }

    /// `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn eval(&self, z: Complex64) -> Complex64 {
        self.coeffs.iter().rev().fold(ZERO, |acc, &c| acc * z + c)
    }

    pub fn scale(&self, s: Complex64) -> Self {
        Self::from_coeffs(self.coeffs.iter().map(|&c| c * s).collect())
    }

    pub fn add(&self, other: &Self) -> Self {
        let n = self.coeffs.len().max(other.coeffs.len());
        Self::from_coeffs((0..n).map(|k| self.coeff(k) + other.coeff(k)).collect())
    }

    pub fn mul(&self, other: &Self) -> Self {
        if self.is_zero() || other.is_zero() {
            return Self::zero();
        }
        let mut out = vec![ZERO; self.coeffs.len() + other.coeffs.len() - 1];
        for (i, &a) in self.coeffs.iter().enumerate() {
            for (j, &b) in other.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        Self::from_coeffs(out)
    }

    pub fn differentiate(&self) -> Self {
        Self::from_coeffs(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(k, &c)| c * k as f64)
                .collect(),
        )
    }

    /// The antiderivative vanishing at 0.
    pub fn antiderivative_at_zero(&self) -> Self {
        if self.is_zero() {
            return Self::zero();
        }
        let mut out = Vec::with_capacity(self.coeffs.len() + 1);
        out.push(ZERO);
        out.extend(self.coeffs.iter().enumerate().map(|(k, &c)| c / (k as f64 + 1.0)));
        Self::from_coeffs(out)
    }

    /// `s(a·z + b)` by Horner's scheme in polynomial arithmetic.
    pub fn compose_linear(&self, psi: &LinearMap) -> Result<Self, SymbolError> {
        if let Some(d) = self.degree() {
            if d > MAX_DEGREE {
                return Err(SymbolError::DegreeCap { degree: d });
            }
        }
        let inner = Self::from_coeffs(vec![psi.b, psi.a]);
        let mut acc = Self::zero();
        for &c in self.coeffs.iter().rev() {
            acc = acc.mul(&inner).add(&Self::constant(c));
        }
        Ok(acc)
    }
}

/// `ψ(z) = a·z + b`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LinearMap {
    pub a: Complex64,
    pub b: Complex64,
}

impl LinearMap {
    pub fn new(a: Complex64, b: Complex64) -> Self {
        Self { a, b }
    }

    pub fn identity() -> Self {
        Self::new(Complex64::new(1.0, 0.0), ZERO)
    }

    /// `ψ(z) = a·z` for real `a`.
    pub fn dilation(a: f64) -> Self {
        Self::new(Complex64::new(a, 0.0), ZERO)
    }

    pub fn eval(&self, z: Complex64) -> Complex64 {
        self.a * z + self.b
    }

    pub fn is_identity(&self) -> bool {
        self.a == Complex64::new(1.0, 0.0) && self.b == ZERO
    }
}

/// Entire function `c(z)` or `c(z)·e^{q(z)}` with `deg q ≤ 2`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum EntireSymbol {
    Polynomial(Polynomial),
    ExpPoly {
        prefactor: Polynomial,
        exponent: Polynomial,
    },
}

impl EntireSymbol {
    pub fn polynomial(p: Polynomial) -> Self {
        Self::Polynomial(p)
    }

    /// `prefactor · e^{exponent}`; a constant exponent is folded into the
    /// prefactor.
    pub fn exp_poly(prefactor: Polynomial, exponent: Polynomial) -> Result<Self, SymbolError> {
        match exponent.degree() {
            None => Ok(Self::Polynomial(prefactor)),
            Some(0) => Ok(Self::Polynomial(prefactor.scale(exponent.coeff(0).exp()))),
            Some(d) if d > 2 => Err(SymbolError::ExponentDegree { degree: d }),
            Some(_) if prefactor.is_zero() => Ok(Self::Polynomial(Polynomial::zero())),
            Some(_) => Ok(Self::ExpPoly {
                prefactor,
                exponent,
            }),
        }
    }

    /// The normalised reproducing kernel `k_{(w,α)}(z) = e^{-α|w|²/2 + α w̄ z}`.
    pub fn normalized_kernel(w: Complex64, alpha: f64) -> Self {
        let exponent = Polynomial::from_coeffs(vec![
            Complex64::new(-0.5 * alpha * w.norm_sqr(), 0.0),
            w.conj() * alpha,
        ]);
        Self::exp_poly(Polynomial::constant(Complex64::new(1.0, 0.0)), exponent)
            .expect("kernel exponent is linear")
    }

    pub fn prefactor(&self) -> &Polynomial {
        match self {
            Self::Polynomial(p) => p,
            Self::ExpPoly { prefactor, .. } => prefactor,
        }
    }

    /// `[q0, q1, q2]` of the exponent (zeros for a polynomial).
    pub fn exponent_coeffs(&self) -> [Complex64; 3] {
        match self {
            Self::Polynomial(_) => [ZERO; 3],
            Self::ExpPoly { exponent, .. } => [exponent.coeff(0), exponent.coeff(1), exponent.coeff(2)],
        }
    }

    pub fn is_polynomial(&self) -> bool {
        matches!(self, Self::Polynomial(_))
    }

    pub fn is_zero(&self) -> bool {
        self.prefactor().is_zero()
    }

    pub fn eval(&self, z: Complex64) -> Complex64 {
        match self {
            Self::Polynomial(p) => p.eval(z),
            Self::ExpPoly {
                prefactor,
                exponent,
            } => prefactor.eval(z) * exponent.eval(z).exp(),
        }
    }

    /// `ln|s(z)|` without forming `e^{q}` (safe far from the origin).
    pub fn log_abs(&self, z: Complex64) -> f64 {
        match self {
            Self::Polynomial(p) => p.eval(z).norm().ln(),
            Self::ExpPoly {
                prefactor,
                exponent,
            } => prefactor.eval(z).norm().ln() + exponent.eval(z).re,
        }
    }

    pub fn derivative(&self) -> Self {
        match self {
            Self::Polynomial(p) => Self::Polynomial(p.differentiate()),
            Self::ExpPoly {
                prefactor,
                exponent,
            } => {
                let amp = prefactor.differentiate().add(&prefactor.mul(&exponent.differentiate()));
                Self::exp_poly(amp, exponent.clone()).expect("same exponent")
            }
        }
    }

    /// Multiply by `e^{r(z)}` for a polynomial `r` of degree ≤ 2.
    pub fn times_exp(&self, r: &Polynomial) -> Result<Self, SymbolError> {
        match self {
            Self::Polynomial(p) => Self::exp_poly(p.clone(), r.clone()),
            Self::ExpPoly {
                prefactor,
                exponent,
            } => Self::exp_poly(prefactor.clone(), exponent.add(r)),
        }
    }

    /// Least `μ ≥ 0` with `|s(z)|^p ≤ poly(|z|)·e^{μ|z|²}`.
    pub fn growth_bound(&self, p: f64) -> f64 {
        p * self.exponent_coeffs()[2].norm()
    }
}

/// Which operator a symbol pair induces.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum OperatorKind {
    /// `f ↦ ∫_0^z f(ψ(w)) g′(w) dw`.
    VolterraComposition { g: EntireSymbol, psi: LinearMap },
    /// `f ↦ u·(f∘ψ)`.
    WeightedComposition { u: EntireSymbol, psi: LinearMap },
}

/// The weight `|A(z)|·e^{Re q(z)}`, divided by `1+|z|` for Volterra pairs.
#[derive(Debug, Clone, PartialEq)]
pub struct InducedWeight {
    pub amplitude: Polynomial,
    pub exponent: [Complex64; 3],
    pub divides_by_one_plus_abs: bool,
}

impl InducedWeight {
    pub fn is_zero(&self) -> bool {
        self.amplitude.is_zero()
    }

    pub fn eval(&self, z: Complex64) -> f64 {
        self.log_eval(z).exp()
    }

    pub fn log_eval(&self, z: Complex64) -> f64 {
        self.log_amplitude(z) + self.exponent_re(z)
    }

    /// `ln|A(z)|`, less `ln(1+|z|)` for Volterra pairs.
    pub fn log_amplitude(&self, z: Complex64) -> f64 {
        let base = self.amplitude.eval(z).norm().ln();
        if self.divides_by_one_plus_abs {
            base - z.norm().ln_1p()
        } else {
            base
        }
    }

    fn exponent_re(&self, z: Complex64) -> f64 {
        let [q0, q1, q2] = self.exponent;
        (q0 + q1 * z + q2 * z * z).re
    }

    /// `⌈p·deg A⌉`, the polynomial growth order of `|A|^p`.
    pub fn amplitude_degree(&self, p: f64) -> u32 {
        (p * self.amplitude.degree().unwrap_or(0) as f64).ceil() as u32
    }

    /// Growth rate of `weight^p` in the sense of [`EntireSymbol::growth_bound`].
    pub fn growth_bound(&self, p: f64) -> f64 {
        p * self.exponent[2].norm()
    }
}

/// An operator: kind, symbols and the Fock weight parameter `α`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SymbolPair {
    #[serde(flatten)]
    pub kind: OperatorKind,
    pub alpha: f64,
}

impl SymbolPair {
    pub fn new(kind: OperatorKind, alpha: f64) -> Result<Self, SymbolError> {
        if !(alpha > 0.0 && alpha.is_finite()) {
            return Err(SymbolError::InvalidAlpha(alpha));
        }
        Ok(Self { kind, alpha })
    }

    pub fn volterra(g: EntireSymbol, psi: LinearMap, alpha: f64) -> Result<Self, SymbolError> {
        Self::new(OperatorKind::VolterraComposition { g, psi }, alpha)
    }

    pub fn weighted(u: EntireSymbol, psi: LinearMap, alpha: f64) -> Result<Self, SymbolError> {
        Self::new(OperatorKind::WeightedComposition { u, psi }, alpha)
    }

    pub fn psi(&self) -> &LinearMap {
        match &self.kind {
            OperatorKind::VolterraComposition { psi, .. } | OperatorKind::WeightedComposition { psi, .. } => psi,
        }
    }

    pub fn symbol(&self) -> &EntireSymbol {
        match &self.kind {
            OperatorKind::VolterraComposition { g, .. } => g,
            OperatorKind::WeightedComposition { u, .. } => u,
        }
    }

    pub fn is_volterra(&self) -> bool {
        matches!(self.kind, OperatorKind::VolterraComposition { .. })
    }

    pub fn weight(&self) -> InducedWeight {
        match &self.kind {
            OperatorKind::VolterraComposition { g, .. } => {
                let d = g.derivative();
                InducedWeight {
                    amplitude: d.prefactor().clone(),
                    exponent: d.exponent_coeffs(),
                    divides_by_one_plus_abs: true,
                }
            }
            OperatorKind::WeightedComposition { u, .. } => InducedWeight {
                amplitude: u.prefactor().clone(),
                exponent: u.exponent_coeffs(),
                divides_by_one_plus_abs: false,
            },
        }
    }

    pub fn weight_at(&self, z: Complex64) -> f64 {
        self.weight().eval(z)
    }
}
