//! Weighted Fock space primitives: kernels, norms, the monomial basis and the
//! derivative-form norm functional.
//!
//! Norms carry the normalisation `‖f‖_{(p,α)}^p = (pα/2π) ∫ |f|^p e^{-(pα/2)|z|²} dm`,
//! so `‖1‖ = 1` for every `(p, α)`. The derivative functional
//! `|f(0)|^p + (pα/2π) ∫ |f′|^p (1+|z|)^{-p} e^{-(pα/2)|z|²} dm` uses the same
//! prefactor on its integral term.

use std::f64::consts::PI;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::quadrature::{
    log_gaussian_integral, GaussianEnvelope, QuadratureError, Tolerance, DEFAULT_ANGULAR_NODES,
    DEFAULT_RADIAL_NODES,
};
use crate::symbols::{EntireSymbol, Polynomial};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum FockError {
    #[error("invalid Fock parameters p = {p}, alpha = {alpha}")]
    InvalidParams { p: f64, alpha: f64 },
    #[error(transparent)]
    Quadrature(#[from] QuadratureError),
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FockParams {
    pub p: f64,
    pub alpha: f64,
}

impl FockParams {
    pub fn new(p: f64, alpha: f64) -> Result<Self, FockError> {
        if !(p > 0.0 && p.is_finite() && alpha > 0.0 && alpha.is_finite()) {
            return Err(FockError::InvalidParams { p, alpha });
        }
        Ok(Self { p, alpha })
    }

    /// Gaussian exponent `pα/2` of the norm integral.
    pub fn decay(&self) -> f64 {
        0.5 * self.p * self.alpha
    }

    /// `pα/2π`.
    pub fn prefactor(&self) -> f64 {
        self.p * self.alpha / (2.0 * PI)
    }
}

/// Kernel value; `saturated` is set when the exponential overflowed to `∞`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct KernelValue {
    pub value: Complex64,
    pub saturated: bool,
}

/// `K_{(w,α)}(z) = e^{α w̄ z}` or, normalised, `k_{(w,α)}(z) = e^{-α|w|²/2 + α w̄ z}`.
pub fn kernel_eval(w: Complex64, z: Complex64, alpha: f64, normalized: bool) -> KernelValue {
    let mut exponent = w.conj() * z * alpha;
    if normalized {
        exponent -= 0.5 * alpha * w.norm_sqr();
    }
    let value = exponent.exp();
    if value.re.is_finite() && value.im.is_finite() {
        KernelValue {
            value,
            saturated: false,
        }
    } else {
        KernelValue {
            value: Complex64::new(f64::INFINITY, 0.0),
            saturated: true,
        }
    }
}

/// Outcome of a norm computation: finite, or the function is not in the space.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "status", rename_all = "snake_case")]
pub enum NormValue {
    Finite { value: f64, rel_error: f64 },
    NotInSpace { growth: f64 },
}

impl NormValue {
    pub fn value(&self) -> f64 {
        match self {
            Self::Finite { value, .. } => *value,
            Self::NotInSpace { .. } => f64::INFINITY,
        }
    }

    pub fn is_finite(&self) -> bool {
        matches!(self, Self::Finite { .. })
    }
}

/// `⌈p·deg P⌉`, the polynomial growth order of `|P|^p`.
fn amplitude_degree(prefactor: &Polynomial, p: f64) -> u32 {
    (p * prefactor.degree().unwrap_or(0) as f64).ceil() as u32
}

fn symbol_pth_power_integral(
    f: &EntireSymbol,
    params: &FockParams,
    divide_by_one_plus_abs: bool,
    tol: &Tolerance,
) -> Result<Option<(f64, f64)>, FockError> {
    let p = params.p;
    let [q0, q1, q2] = f.exponent_coeffs();
    let envelope = GaussianEnvelope {
        c: params.decay(),
        center: Complex64::new(0.0, 0.0),
        q1: q1 * p,
        q2: q2 * p,
    };
    let prefactor = f.prefactor();
    let amp = |z: Complex64| {
        let a = p * prefactor.eval(z).norm().ln();
        if divide_by_one_plus_abs {
            a - p * z.norm().ln_1p()
        } else {
            a
        }
    };
    match log_gaussian_integral(amp, &envelope, amplitude_degree(prefactor, p), tol, DEFAULT_RADIAL_NODES, DEFAULT_ANGULAR_NODES) {
        Ok(res) => Ok(Some((p * q0.re + res.log_value, res.rel_error))),
        Err(QuadratureError::DivergentTail { .. }) => Ok(None),
        Err(e) => Err(e.into()),
    }
}

/// `‖f‖_{(p,α)}`.
pub fn fock_norm(f: &EntireSymbol, params: &FockParams) -> Result<NormValue, FockError> {
    fock_norm_with(f, params, &Tolerance::default())
}

pub fn fock_norm_with(f: &EntireSymbol, params: &FockParams, tol: &Tolerance) -> Result<NormValue, FockError> {
    match symbol_pth_power_integral(f, params, false, tol)? {
        None => Ok(NormValue::NotInSpace {
            growth: f.growth_bound(params.p),
        }),
        Some((log_int, rel_error)) => Ok(NormValue::Finite {
            value: ((params.prefactor().ln() + log_int) / params.p).exp(),
            rel_error: rel_error / params.p,
        }),
    }
}

/// `(|f(0)|^p + (pα/2π)∫|f′|^p(1+|z|)^{-p} e^{-(pα/2)|z|²} dm)^{1/p}` from the
/// value at the origin and the derivative.
pub fn derivative_form_norm(
    value_at_zero: Complex64,
    derivative: &EntireSymbol,
    params: &FockParams,
    tol: &Tolerance,
) -> Result<NormValue, FockError> {
    let head = value_at_zero.norm().powf(params.p);
    match symbol_pth_power_integral(derivative, params, true, tol)? {
        None => Ok(NormValue::NotInSpace {
            growth: derivative.growth_bound(params.p),
        }),
        Some((log_int, rel_error)) => {
            let integral = (params.prefactor().ln() + log_int).exp();
            Ok(NormValue::Finite {
                value: (head + integral).powf(1.0 / params.p),
                rel_error: rel_error / params.p,
            })
        }
    }
}

/// Derivative-form functional of `f`, equivalent to `‖f‖_{(p,α)}` up to
/// constants.
pub fn derivative_functional(f: &EntireSymbol, params: &FockParams) -> Result<NormValue, FockError> {
    derivative_form_norm(
        f.eval(Complex64::new(0.0, 0.0)),
        &f.derivative(),
        params,
        &Tolerance::default(),
    )
}

/// `⟨z^m, z^n⟩` in `F_α²`: `δ_{mn} n!/α^n`.
pub fn monomial_gram(m: usize, n: usize, alpha: f64) -> Complex64 {
    if m != n {
        return Complex64::new(0.0, 0.0);
    }
    let v = (1..=n).fold(1.0, |acc, k| acc * k as f64 / alpha);
    Complex64::new(v, 0.0)
}

/// Orthonormal basis element `e_n(z) = sqrt(α^n/n!) z^n` of `F_α²`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BasisElement {
    pub index: usize,
    pub alpha: f64,
}

impl BasisElement {
    pub fn new(index: usize, alpha: f64) -> Self {
        Self { index, alpha }
    }

    /// `sqrt(α^n/n!)`.
    pub fn coefficient(&self) -> f64 {
        (1..=self.index)
            .fold(1.0, |acc, k| acc * (self.alpha / k as f64).sqrt())
    }

    pub fn eval(&self, z: Complex64) -> Complex64 {
        // iterate to avoid forming z^n and n! separately
        (1..=self.index).fold(Complex64::new(1.0, 0.0), |acc, k| {
            acc * z * (self.alpha / k as f64).sqrt()
        })
    }
}
