//! Polar tensor quadrature for integrals against a Gaussian weight on the plane.
//!
//! Every integral in the crate has the shape `∫_ℂ F(z) e^{-c|z|²} dm(z)` with `dm`
//! the Lebesgue measure. The rule is Gauss–Legendre in the radius on `[0, R]`
//! times the uniform periodic rule in the angle. `R` is chosen from a tail bound
//! `e^{(μ-c)R²}(1+R)^k < abs_tol`, where `μ` is a declared growth rate of `|F|`.
//!
//! Refinement doubles both node counts until successive values agree.

use std::collections::HashMap;
use std::f64::consts::PI;
use std::num::NonZeroUsize;
use std::ops::{Add, Mul, Sub};
use std::sync::{Arc, Mutex, OnceLock};

use gauss_quad::GaussLegendre;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use thiserror::Error;

pub const DEFAULT_REL_TOL: f64 = 1e-8;
pub const DEFAULT_ABS_TOL: f64 = 1e-12;
pub const DEFAULT_MAX_REFINEMENTS: u32 = 10;
pub const DEFAULT_RADIAL_NODES: usize = 64;
pub const DEFAULT_ANGULAR_NODES: usize = 64;

/// Polynomial degree assumed in the tail bound `(1+R)^k`.
pub const TAIL_DEGREE_CAP: u32 = 64;

/// Hard budget on `radial × angular` nodes; reaching it ends refinement.
pub const MAX_NODES: usize = 1 << 22;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum QuadratureError {
    #[error("integrand growth exp({growth}|z|^2) is not dominated by the weight exp(-{decay}|z|^2)")]
    DivergentTail { growth: f64, decay: f64 },
    #[error("no convergence after {refinements} refinements (estimate {estimate}, error {error:e})")]
    NonConvergence {
        estimate: Complex64,
        error: f64,
        refinements: u32,
    },
    #[error("integrand is not finite at z = {at}")]
    InvalidIntegrand { at: Complex64 },
    #[error("invalid quadrature parameter: {0}")]
    InvalidParameter(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Tolerance {
    pub rel_tol: f64,
    pub abs_tol: f64,
    pub max_refinements: u32,
}

impl Default for Tolerance {
    fn default() -> Self {
        Self {
            rel_tol: DEFAULT_REL_TOL,
            abs_tol: DEFAULT_ABS_TOL,
            max_refinements: DEFAULT_MAX_REFINEMENTS,
        }
    }
}

impl Tolerance {
    pub fn new(rel_tol: f64, abs_tol: f64, max_refinements: u32) -> Result<Self, QuadratureError> {
        let tol = Self {
            rel_tol,
            abs_tol,
            max_refinements,
        };
        tol.validate()?;
        Ok(tol)
    }

    pub fn validate(&self) -> Result<(), QuadratureError> {
        let in_unit = |x: f64| x > 0.0 && x < 1.0;
        if !in_unit(self.rel_tol) || !in_unit(self.abs_tol) {
            return Err(QuadratureError::InvalidParameter(format!(
                "tolerances must lie in (0, 1), got rel {} abs {}",
                self.rel_tol, self.abs_tol
            )));
        }
        if self.max_refinements == 0 {
            return Err(QuadratureError::InvalidParameter(
                "max_refinements must be positive".into(),
            ));
        }
        Ok(())
    }
}

/// Values a quadrature can accumulate.
pub trait QuadValue: Copy + Add<Output = Self> + Sub<Output = Self> + Mul<f64, Output = Self> {
    fn zero() -> Self;
    fn magnitude(&self) -> f64;
    fn is_finite_value(&self) -> bool;
    fn to_complex(self) -> Complex64;
}

impl QuadValue for f64 {
    fn zero() -> Self {
        0.0
    }
    fn magnitude(&self) -> f64 {
        self.abs()
    }
    fn is_finite_value(&self) -> bool {
        self.is_finite()
    }
    fn to_complex(self) -> Complex64 {
        Complex64::new(self, 0.0)
    }
}

impl QuadValue for Complex64 {
    fn zero() -> Self {
        Complex64::new(0.0, 0.0)
    }
    fn magnitude(&self) -> f64 {
        self.norm()
    }
    fn is_finite_value(&self) -> bool {
        self.re.is_finite() && self.im.is_finite()
    }
    fn to_complex(self) -> Complex64 {
        self
    }
}

pub(crate) fn legendre_rule(n: usize) -> Arc<Vec<(f64, f64)>> {
    static CACHE: OnceLock<Mutex<HashMap<usize, Arc<Vec<(f64, f64)>>>>> = OnceLock::new();
    let cache = CACHE.get_or_init(|| Mutex::new(HashMap::new()));
    let mut map = cache.lock().expect("legendre cache poisoned");
    map.entry(n)
        .or_insert_with(|| {
            let rule = GaussLegendre::new(NonZeroUsize::new(n).expect("nonzero node count"));
            let mut pairs: Vec<(f64, f64)> = rule.as_node_weight_pairs().to_vec();
            pairs.sort_by(|a, b| a.0.total_cmp(&b.0));
            Arc::new(pairs)
        })
        .clone()
}

/// Nodes and weights for `∫_ℂ F(z) e^{-c|z|²} dm(z)`.
#[derive(Debug, Clone, PartialEq)]
pub struct QuadratureScheme {
    /// `(radius, weight)`; the weight includes the Jacobian `r`, the Gaussian
    /// `e^{-c r²}` and the angular step `2π / angular_count`.
    radial_nodes: Vec<(f64, f64)>,
    /// Jacobian-only radial weights (Gaussian factor excluded), used by the
    /// log-domain integrator.
    radial_jacobian: Vec<f64>,
    angular_count: usize,
    truncation_radius: f64,
    decay: f64,
}

impl QuadratureScheme {
    pub fn new(
        decay: f64,
        truncation_radius: f64,
        radial_count: usize,
        angular_count: usize,
    ) -> Result<Self, QuadratureError> {
        if !(decay > 0.0 && decay.is_finite()) {
            return Err(QuadratureError::InvalidParameter(format!(
                "decay must be positive, got {decay}"
            )));
        }
        if !(truncation_radius > 0.0 && truncation_radius.is_finite()) {
            return Err(QuadratureError::InvalidParameter(format!(
                "truncation radius must be positive, got {truncation_radius}"
            )));
        }
        if radial_count == 0 || angular_count < 4 || angular_count % 2 != 0 {
            return Err(QuadratureError::InvalidParameter(format!(
                "need radial > 0 and even angular >= 4, got {radial_count} x {angular_count}"
            )));
        }
        let rule = legendre_rule(radial_count);
        let half = 0.5 * truncation_radius;
        let dtheta = 2.0 * PI / angular_count as f64;
        let mut radial_nodes = Vec::with_capacity(radial_count);
        let mut radial_jacobian = Vec::with_capacity(radial_count);
        for &(x, w) in rule.iter() {
            let r = half * (x + 1.0);
            let jac = w * half * r * dtheta;
            radial_jacobian.push(jac);
            radial_nodes.push((r, jac * (-decay * r * r).exp()));
        }
        Ok(Self {
            radial_nodes,
            radial_jacobian,
            angular_count,
            truncation_radius,
            decay,
        })
    }

    pub fn radial_nodes(&self) -> &[(f64, f64)] {
        &self.radial_nodes
    }

    pub fn radial_count(&self) -> usize {
        self.radial_nodes.len()
    }

    pub fn angular_count(&self) -> usize {
        self.angular_count
    }

    pub fn truncation_radius(&self) -> f64 {
        self.truncation_radius
    }

    pub fn decay(&self) -> f64 {
        self.decay
    }

    pub fn node_count(&self) -> usize {
        self.radial_count() * self.angular_count
    }

    /// Same truncation radius with both node counts doubled.
    pub fn refined(&self) -> Self {
        Self::new(
            self.decay,
            self.truncation_radius,
            2 * self.radial_count(),
            2 * self.angular_count,
        )
        .expect("refining a valid scheme")
    }

    /// Grow the truncation radius by `extra`, for integrands whose Gaussian
    /// mass sits `extra` away from the origin.
    pub fn widened(&self, extra: f64) -> Self {
        let radius = self.truncation_radius + extra.max(0.0);
        let radial = sized_radial_count(self.radial_count(), radius, self.decay);
        Self::new(self.decay, radius, radial, self.angular_count).expect("widening a valid scheme")
    }

    pub fn with_node_counts(&self, radial: usize, angular: usize) -> Result<Self, QuadratureError> {
        Self::new(self.decay, self.truncation_radius, radial, angular)
    }

    fn angles(&self) -> Vec<Complex64> {
        let m = self.angular_count;
        (0..m)
            .map(|j| Complex64::from_polar(1.0, 2.0 * PI * j as f64 / m as f64))
            .collect()
    }

    /// One application of the rule to `F`.
    pub fn apply<V: QuadValue>(&self, f: impl Fn(Complex64) -> V) -> Result<V, QuadratureError> {
        let angles = self.angles();
        let mut total = V::zero();
        for &(r, w) in &self.radial_nodes {
            let mut ring = V::zero();
            for u in &angles {
                let z = *u * r;
                let v = f(z);
                if !v.is_finite_value() {
                    return Err(QuadratureError::InvalidIntegrand { at: z });
                }
                ring = ring + v;
            }
            total = total + ring * w;
        }
        Ok(total)
    }

    /// One application to a positive integrand given in log form, where
    /// `log_g` already contains the Gaussian factor.
    fn apply_log(&self, log_g: &impl Fn(Complex64) -> f64) -> Result<f64, QuadratureError> {
        let angles = self.angles();
        let mut total = 0.0;
        for (&(r, _), &jac) in self.radial_nodes.iter().zip(&self.radial_jacobian) {
            let mut ring = 0.0;
            for u in &angles {
                let z = *u * r;
                let l = log_g(z);
                if l.is_nan() || l == f64::INFINITY {
                    return Err(QuadratureError::InvalidIntegrand { at: z });
                }
                ring += l.exp();
            }
            total += ring * jac;
        }
        if !total.is_finite() {
            return Err(QuadratureError::InvalidIntegrand {
                at: Complex64::new(f64::NAN, f64::NAN),
            });
        }
        Ok(total)
    }
}

fn sized_radial_count(base: usize, radius: f64, decay: f64) -> usize {
    // about 16 nodes per unit of Gaussian width beyond the base allocation
    let needed = (radius * decay.sqrt() * 4.0).ceil() as usize;
    let mut n = base.max(1);
    while n < needed {
        n *= 2;
    }
    n
}

/// Least `R` with `e^{(growth - decay)R²}(1+R)^degree < abs_tol`.
pub fn tail_radius(decay: f64, growth: f64, abs_tol: f64, degree: u32) -> Result<f64, QuadratureError> {
    if !(decay > 0.0) {
        return Err(QuadratureError::InvalidParameter(format!(
            "decay must be positive, got {decay}"
        )));
    }
    if growth >= decay {
        return Err(QuadratureError::DivergentTail { growth, decay });
    }
    let delta = decay - growth;
    let k = degree as f64;
    let target = abs_tol.ln();
    let log_bound = |r: f64| -delta * r * r + k * (1.0 + r).ln();
    // the bound is unimodal; start the bracket at its peak
    let peak = if k > 0.0 {
        0.5 * (-1.0 + (1.0 + 2.0 * k / delta).sqrt())
    } else {
        0.0
    };
    let mut lo = peak;
    let mut hi = peak.max(1.0);
    while log_bound(hi) >= target {
        hi *= 2.0;
    }
    if log_bound(lo) < target {
        return Ok(lo.max(f64::MIN_POSITIVE));
    }
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if log_bound(mid) < target {
            hi = mid;
        } else {
            lo = mid;
        }
        if hi - lo <= 1e-13 * hi {
            break;
        }
    }
    Ok(hi)
}

/// Scheme for a Gaussian exponent `c`, with the default node counts sized to
/// the truncation radius.
pub fn build_scheme(c: f64, tol: &Tolerance, growth_bound: f64) -> Result<QuadratureScheme, QuadratureError> {
    build_scheme_with_degree(c, tol, growth_bound, TAIL_DEGREE_CAP)
}

pub fn build_scheme_with_degree(
    c: f64,
    tol: &Tolerance,
    growth_bound: f64,
    degree: u32,
) -> Result<QuadratureScheme, QuadratureError> {
    tol.validate()?;
    let radius = tail_radius(c, growth_bound, tol.abs_tol, degree)?;
    let radial = sized_radial_count(DEFAULT_RADIAL_NODES, radius, c);
    QuadratureScheme::new(c, radius, radial, DEFAULT_ANGULAR_NODES)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Integral<V> {
    pub value: V,
    /// Last successive difference.
    pub error: f64,
    pub refinements: u32,
}

/// Refine `scheme` until successive values agree to `tol`.
pub fn integrate<V: QuadValue>(
    scheme: &QuadratureScheme,
    tol: &Tolerance,
    f: impl Fn(Complex64) -> V,
) -> Result<Integral<V>, QuadratureError> {
    let mut current = scheme.clone();
    let mut prev = current.apply(&f)?;
    let mut last_error = f64::INFINITY;
    for k in 1..=tol.max_refinements {
        let next = current.refined();
        if next.node_count() > MAX_NODES {
            break;
        }
        let value = next.apply(&f)?;
        let error = (value - prev).magnitude();
        if error < (tol.rel_tol * value.magnitude()).max(tol.abs_tol) {
            return Ok(Integral {
                value,
                error,
                refinements: k,
            });
        }
        prev = value;
        last_error = error;
        current = next;
    }
    Err(QuadratureError::NonConvergence {
        estimate: prev.to_complex(),
        error: last_error,
        refinements: tol.max_refinements,
    })
}

/// `∫_ℂ F(z) e^{-c|z|²} dm(z)` for an `F` bounded by a polynomial.
pub fn gaussian_integral<V: QuadValue>(
    f: impl Fn(Complex64) -> V,
    c: f64,
    tol: &Tolerance,
) -> Result<Integral<V>, QuadratureError> {
    let scheme = build_scheme(c, tol, 0.0)?;
    integrate(&scheme, tol, f)
}

/// Exponential-quadratic envelope `Re(q1·z + q2·z²) - c|z - center|²`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GaussianEnvelope {
    pub c: f64,
    pub center: Complex64,
    pub q1: Complex64,
    pub q2: Complex64,
}

impl GaussianEnvelope {
    pub fn centered(c: f64, center: Complex64) -> Self {
        Self {
            c,
            center,
            q1: Complex64::new(0.0, 0.0),
            q2: Complex64::new(0.0, 0.0),
        }
    }

    pub fn eval(&self, z: Complex64) -> f64 {
        (self.q1 * z + self.q2 * z * z).re - self.c * (z - self.center).norm_sqr()
    }

    /// Unique maximiser; requires `|q2| < c`.
    pub fn peak(&self) -> Complex64 {
        let c = self.c;
        let d = self.center * c + self.q1.conj() * 0.5;
        (d * c + self.q2.conj() * d.conj()) / (c * c - self.q2.norm_sqr())
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LogIntegral {
    /// Natural log of the integral; `-∞` when the amplitude vanishes identically.
    pub log_value: f64,
    pub rel_error: f64,
    pub converged: bool,
}

impl LogIntegral {
    pub fn value(&self) -> f64 {
        self.log_value.exp()
    }
}

/// Log of `∫_ℂ exp(amp(z) + envelope(z)) dm(z)` for a log-amplitude `amp` of
/// at most logarithmic growth, `amp(z) ≤ amp_degree·ln|z| + O(1)` (e.g.
/// `p·ln|P(z)|` with `amp_degree ≥ p·deg P`).
///
/// The rule is centred at the envelope peak (or at the origin when the peak is
/// within six Gaussian widths of it) and scaled by the amplitude near the peak,
/// so neither huge nor tiny results overflow.
pub fn log_gaussian_integral(
    amp: impl Fn(Complex64) -> f64,
    envelope: &GaussianEnvelope,
    amp_degree: u32,
    tol: &Tolerance,
    radial: usize,
    angular: usize,
) -> Result<LogIntegral, QuadratureError> {
    let c = envelope.c;
    let growth = envelope.q2.norm();
    if growth >= c {
        return Err(QuadratureError::DivergentTail { growth, decay: c });
    }
    let peak = envelope.peak();
    let width = 1.0 / c.sqrt();
    let base = if peak.norm() <= 6.0 * width {
        Complex64::new(0.0, 0.0)
    } else {
        peak
    };

    let mut scale = f64::NEG_INFINITY;
    for (i, rho) in [0.0, 0.5, 1.0, 2.0].iter().enumerate() {
        let count = if i == 0 { 1 } else { 8 };
        for j in 0..count {
            let z = peak + Complex64::from_polar(rho * width, (j as f64 + 0.5 * i as f64) * PI / 4.0);
            let a = amp(z);
            if a > scale && a.is_finite() {
                scale = a;
            }
        }
    }
    if scale == f64::NEG_INFINITY {
        return Ok(LogIntegral {
            log_value: f64::NEG_INFINITY,
            rel_error: 0.0,
            converged: true,
        });
    }
    let peak_level = envelope.eval(peak);
    let log_g = |zeta: Complex64| {
        let z = base + zeta;
        amp(z) - scale + envelope.eval(z) - peak_level
    };

    let radius = tail_radius(c, growth, tol.abs_tol, amp_degree.min(TAIL_DEGREE_CAP))? + (peak - base).norm();
    let radial = sized_radial_count(radial, radius, c);
    let mut current = QuadratureScheme::new(c, radius, radial, angular)?;
    let mut prev = current.apply_log(&log_g)?;
    let mut rel_error = f64::INFINITY;
    let mut converged = false;
    for _ in 0..tol.max_refinements {
        let next = current.refined();
        if next.node_count() > MAX_NODES {
            break;
        }
        let value = next.apply_log(&log_g)?;
        let diff = (value - prev).abs();
        rel_error = if value > 0.0 { diff / value } else { 0.0 };
        prev = value;
        current = next;
        if diff < (tol.rel_tol * value).max(tol.abs_tol) {
            converged = true;
            break;
        }
    }
    Ok(LogIntegral {
        log_value: scale + peak_level + prev.ln(),
        rel_error,
        converged,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn constant_and_quadratic_moments() {
        let tol = Tolerance::default();
        let one = gaussian_integral(|_| 1.0, 1.0, &tol).unwrap();
        assert_relative_eq!(one.value, PI, max_relative = 1e-10);
        let r2 = gaussian_integral(|z: Complex64| z.norm_sqr(), 1.0, &tol).unwrap();
        assert_relative_eq!(r2.value, PI, max_relative = 1e-10);
    }

    #[test]
    fn translated_gaussian() {
        let tol = Tolerance::default();
        let w = Complex64::new(3.0, 4.0);
        let res = gaussian_integral(
            |z: Complex64| (-(z - w).norm_sqr() + z.norm_sqr()).exp(),
            1.0,
            &tol,
        )
        .unwrap();
        assert_relative_eq!(res.value, PI, max_relative = 1e-10);
    }

    #[test]
    fn tail_radius_examples() {
        let r = tail_radius(1.0, 0.0, 1e-12, 0).unwrap();
        assert_relative_eq!(r, (1e12f64).ln().sqrt(), max_relative = 1e-10);
        let r64 = build_scheme(1.0, &Tolerance::default(), 0.0).unwrap().truncation_radius();
        assert!(r64 >= (1e12f64).ln().sqrt());
        assert!(matches!(
            build_scheme(1.0, &Tolerance::default(), 1.0),
            Err(QuadratureError::DivergentTail { .. })
        ));
    }

    #[test]
    fn tail_radius_is_minimal_for_degree_ten() {
        let r = tail_radius(2.0, 0.5, 1e-12, 10).unwrap();
        let bound = |r: f64| (-1.5 * r * r).exp() * (1.0 + r).powi(10);
        assert!(bound(r) < 1e-12);
        assert!(bound(0.999 * r) > 1e-12);
    }

    #[test]
    fn rejects_non_finite_samples() {
        let err = gaussian_integral(|_| f64::NAN, 1.0, &Tolerance::default()).unwrap_err();
        assert!(matches!(err, QuadratureError::InvalidIntegrand { .. }));
    }

    #[test]
    fn non_convergence_is_reported() {
        let tol = Tolerance::new(1e-15, 1e-15, 1).unwrap();
        // a cone point off the origin limits the polar rule to algebraic accuracy
        let f = |z: Complex64| (z - Complex64::new(0.3, 0.2)).norm().powf(0.5);
        let err = gaussian_integral(f, 1.0, &tol).unwrap_err();
        assert!(matches!(err, QuadratureError::NonConvergence { refinements: 1, .. }));
    }

    #[test]
    fn invalid_tolerances() {
        assert!(Tolerance::new(0.0, 1e-12, 3).is_err());
        assert!(Tolerance::new(1e-8, 1.5, 3).is_err());
        assert!(Tolerance::new(1e-8, 1e-12, 0).is_err());
    }

    #[test]
    fn envelope_peak_is_stationary() {
        let env = GaussianEnvelope {
            c: 1.0,
            center: Complex64::new(2.0, -1.0),
            q1: Complex64::new(0.3, 0.7),
            q2: Complex64::new(0.2, -0.4),
        };
        let p = env.peak();
        let h = 1e-5;
        for d in [Complex64::new(h, 0.0), Complex64::new(0.0, h)] {
            let slope = (env.eval(p + d) - env.eval(p - d)) / (2.0 * h);
            assert!(slope.abs() < 1e-7, "slope {slope}");
        }
    }

    #[test]
    fn log_integral_handles_shifted_mass() {
        let tol = Tolerance::default();
        let w = Complex64::new(40.0, -25.0);
        let env = GaussianEnvelope::centered(2.0, w);
        let res = log_gaussian_integral(|_| 0.0, &env, 0, &tol, 32, 32).unwrap();
        assert!(res.converged);
        assert_relative_eq!(res.value(), PI / 2.0, max_relative = 1e-10);
        let zero = log_gaussian_integral(|_| f64::NEG_INFINITY, &env, 0, &tol, 32, 32).unwrap();
        assert_eq!(zero.log_value, f64::NEG_INFINITY);
    }

    #[test]
    fn log_integral_with_quadratic_exponent() {
        // real q factorises as ∫e^{-(1-q)x²}dx · ∫e^{-(1+q)y²}dy
        let q = 0.6;
        let env = GaussianEnvelope {
            c: 1.0,
            center: Complex64::new(0.0, 0.0),
            q1: Complex64::new(0.0, 0.0),
            q2: Complex64::new(q, 0.0),
        };
        let res = log_gaussian_integral(|_| 0.0, &env, 0, &Tolerance::default(), 64, 64).unwrap();
        let exact = PI / ((1.0 - q) * (1.0 + q)).sqrt();
        assert_relative_eq!(res.value(), exact, max_relative = 1e-9);
    }
}
