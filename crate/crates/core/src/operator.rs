//! Truncated matrices of `V_{(g,ψ)}` and `uC_ψ` on the orthonormal basis
//! `e_n(z) = sqrt(α^n/n!) z^n` of `F_α²`, and the quantities derived from their
//! singular values.
//!
//! Columns are computed by exact series arithmetic in the `e_n` coordinates:
//!
//! * `e_j·e_k = sqrt(C(j+k, j)) e_{j+k}`
//! * `∫_0^z e_j = e_{j+1} / sqrt(α(j+1))`
//! * `e_k(az+b) = Σ_j a^j sqrt(C(k,j)) t_{k-j} e_j`, `t_m = b^m sqrt(α^m/m!)`
//! * `e^{q0+q1 z+q2 z²}` via a three-term recurrence of its coefficients.
//!
//! Products only raise indices, so truncating every series at `N` leaves the
//! first `N` coefficients exact; the matrices carry no quadrature error.

use std::f64::consts::PI;
use std::io::{self, Write};

use nalgebra::DMatrix;
use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::fock::{derivative_form_norm, fock_norm_with, BasisElement, FockError, FockParams, NormValue};
use crate::quadrature::{gaussian_integral, legendre_rule, QuadratureError, Tolerance};
use crate::symbols::{EntireSymbol, LinearMap, OperatorKind, Polynomial, SymbolError, SymbolPair};

/// Largest supported truncation size.
pub const MAX_TRUNCATION: usize = 1024;
pub const DEFAULT_TRUNCATION: usize = 128;
/// Schatten sums whose last quarter moves the norm by more than this are
/// reported as not converged.
pub const SCHATTEN_TAIL_TOL: f64 = 0.01;
pub const OP_NORM_TOL: f64 = 0.01;
pub const ESS_NORM_TOL: f64 = 0.05;

const ZERO: Complex64 = Complex64::new(0.0, 0.0);

#[derive(Debug, Error)]
pub enum OperatorError {
    #[error("truncation size must lie in [2, {MAX_TRUNCATION}], got {0}")]
    TruncationSize(usize),
    #[error("operation requires a Volterra-type pair")]
    NotVolterra,
    #[error("unsupported pair: {0}")]
    Unsupported(String),
    #[error("matrix has non-finite entries")]
    NonFinite,
    #[error(transparent)]
    Quadrature(#[from] QuadratureError),
    #[error(transparent)]
    Fock(#[from] FockError),
    #[error(transparent)]
    Symbol(#[from] SymbolError),
}

/// `ln k!` for `k < len`.
fn ln_factorials(len: usize) -> Vec<f64> {
    let mut out = Vec::with_capacity(len);
    let mut acc = 0.0;
    out.push(0.0);
    for k in 1..len {
        acc += (k as f64).ln();
        out.push(acc);
    }
    out
}

/// Series arithmetic in the `e_n` coordinates, truncated at `len`.
struct Series {
    len: usize,
    alpha: f64,
    ln_fact: Vec<f64>,
}

impl Series {
    fn new(len: usize, alpha: f64) -> Self {
        Self {
            len,
            alpha,
            ln_fact: ln_factorials(2 * len + 1),
        }
    }

    fn sqrt_binomial(&self, n: usize, k: usize) -> f64 {
        (0.5 * (self.ln_fact[n] - self.ln_fact[k] - self.ln_fact[n - k])).exp()
    }

    fn from_polynomial(&self, p: &Polynomial) -> Vec<Complex64> {
        let mut out = vec![ZERO; self.len];
        for (m, c) in p.coeffs().iter().enumerate().take(self.len) {
            // z^m = sqrt(m!/α^m) e_m
            *out.get_mut(m).expect("in range") = c * (0.5 * (self.ln_fact[m] - m as f64 * self.alpha.ln())).exp();
        }
        out
    }

    /// `e^{q0 + q1 z + q2 z²}`.
    fn exponential(&self, [q0, q1, q2]: [Complex64; 3]) -> Vec<Complex64> {
        let mut out = vec![ZERO; self.len];
        out[0] = q0.exp();
        for k in 0..self.len - 1 {
            let kf = k as f64;
            let mut next = q1 * out[k] / (self.alpha * (kf + 1.0)).sqrt();
            if k >= 1 {
                next += q2 * 2.0 * out[k - 1] * (kf / (kf + 1.0)).sqrt() / self.alpha;
            }
            out[k + 1] = next;
        }
        out
    }

    fn from_symbol(&self, s: &EntireSymbol) -> Vec<Complex64> {
        let amp = self.from_polynomial(s.prefactor());
        if s.is_polynomial() {
            amp
        } else {
            self.mul(&amp, &self.exponential(s.exponent_coeffs()))
        }
    }

    fn mul(&self, x: &[Complex64], y: &[Complex64]) -> Vec<Complex64> {
        let mut out = vec![ZERO; self.len];
        let x_top = last_nonzero(x);
        let y_top = last_nonzero(y);
        for (j, xj) in x.iter().enumerate().take(x_top) {
            if *xj == ZERO {
                continue;
            }
            for (k, yk) in y.iter().enumerate().take(y_top.min(self.len - j)) {
                if *yk != ZERO {
                    out[j + k] += xj * yk * self.sqrt_binomial(j + k, j);
                }
            }
        }
        out
    }

    /// `e_k ∘ ψ`.
    fn composed_basis(&self, k: usize, psi: &LinearMap) -> Vec<Complex64> {
        let mut out = vec![ZERO; self.len];
        let b_step = psi.b * self.alpha.sqrt();
        // t[m] = b^m sqrt(α^m/m!)
        let mut t = Vec::with_capacity(k + 1);
        t.push(Complex64::new(1.0, 0.0));
        for m in 1..=k {
            let prev = t[m - 1];
            t.push(prev * b_step / (m as f64).sqrt());
        }
        let mut a_pow = Complex64::new(1.0, 0.0);
        for j in 0..=k.min(self.len - 1) {
            out[j] = a_pow * self.sqrt_binomial(k, j) * t[k - j];
            a_pow *= psi.a;
        }
        out
    }

    fn antiderivative(&self, x: &[Complex64]) -> Vec<Complex64> {
        let mut out = vec![ZERO; self.len];
        for j in 0..self.len - 1 {
            out[j + 1] = x[j] / (self.alpha * (j as f64 + 1.0)).sqrt();
        }
        out
    }
}

fn last_nonzero(x: &[Complex64]) -> usize {
    x.iter().rposition(|c| *c != ZERO).map_or(0, |i| i + 1)
}

/// `M[m][n] = ⟨T e_n, e_m⟩` for `m, n < N`.
#[derive(Debug, Clone, PartialEq)]
pub struct TruncatedOperator {
    pub pair: SymbolPair,
    pub n: usize,
    pub matrix: DMatrix<Complex64>,
}

impl TruncatedOperator {
    /// Leading `k × k` block.
    pub fn leading(&self, k: usize) -> DMatrix<Complex64> {
        self.matrix.view((0, 0), (k, k)).into_owned()
    }

    /// `row,col,re,im` rows for the nonzero entries.
    pub fn write_csv<W: Write>(&self, mut out: W) -> io::Result<()> {
        writeln!(out, "row,col,re,im")?;
        for col in 0..self.n {
            for row in 0..self.n {
                let v = self.matrix[(row, col)];
                if v != ZERO {
                    writeln!(out, "{row},{col},{:.17e},{:.17e}", v.re, v.im)?;
                }
            }
        }
        Ok(())
    }
}

pub fn build_matrix(pair: &SymbolPair, n: usize) -> Result<TruncatedOperator, OperatorError> {
    if !(2..=MAX_TRUNCATION).contains(&n) {
        return Err(OperatorError::TruncationSize(n));
    }
    let series = Series::new(n, pair.alpha);
    let columns: Vec<Vec<Complex64>> = match &pair.kind {
        OperatorKind::WeightedComposition { u, psi } => {
            let u_series = series.from_symbol(u);
            (0..n)
                .into_par_iter()
                .map(|k| series.mul(&u_series, &series.composed_basis(k, psi)))
                .collect()
        }
        OperatorKind::VolterraComposition { g, psi } => {
            let dg = series.from_symbol(&g.derivative());
            (0..n)
                .into_par_iter()
                .map(|k| series.antiderivative(&series.mul(&dg, &series.composed_basis(k, psi))))
                .collect()
        }
    };
    let matrix = DMatrix::from_fn(n, n, |row, col| columns[col][row]);
    if matrix.iter().any(|v| !(v.re.is_finite() && v.im.is_finite())) {
        return Err(OperatorError::NonFinite);
    }
    Ok(TruncatedOperator {
        pair: pair.clone(),
        n,
        matrix,
    })
}

/// Singular values in non-increasing order.
pub fn singular_values(m: &DMatrix<Complex64>) -> Vec<f64> {
    let mut s: Vec<f64> = m.clone().svd(false, false).singular_values.iter().copied().collect();
    s.sort_by(|a, b| b.total_cmp(a));
    s
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SchattenValue {
    pub p: f64,
    /// `(Σ s_k^p)^{1/p}` over the computed singular values.
    pub value: f64,
    /// The same sum over the leading `N/2` block.
    pub half_value: f64,
    /// Share of `Σ s_k^p` carried by the last quarter of the `s_k`.
    pub tail_share: f64,
    pub converged: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SpectralSummary {
    pub n: usize,
    pub singular_values: Vec<f64>,
    pub op_norm: f64,
    pub op_norm_half: f64,
    pub op_norm_converged: bool,
    /// `Σ s_k²`.
    pub hs_norm_sq: f64,
    pub schatten: Vec<SchattenValue>,
    /// `s_{⌈N/2⌉}`, a proxy for the essential norm.
    pub ess_norm_proxy: f64,
    /// The same proxy on the leading `N/2` block.
    pub ess_norm_half: f64,
    pub ess_converged: bool,
}

impl SpectralSummary {
    pub fn schatten(&self, p: f64) -> Option<&SchattenValue> {
        self.schatten.iter().find(|s| s.p == p)
    }

    pub fn hs_norm(&self) -> f64 {
        self.hs_norm_sq.sqrt()
    }

    /// One `index,value` row per singular value.
    pub fn write_csv<W: Write>(&self, mut out: W) -> io::Result<()> {
        writeln!(out, "index,singular_value")?;
        for (k, s) in self.singular_values.iter().enumerate() {
            writeln!(out, "{},{:.17e}", k + 1, s)?;
        }
        Ok(())
    }
}

fn schatten_sum(s: &[f64], p: f64) -> f64 {
    s.iter().map(|x| x.powf(p)).sum::<f64>().powf(1.0 / p)
}

/// `s_{⌈k⌉}` with one-based index.
fn proxy(s: &[f64], k: usize) -> f64 {
    s.get(k.max(1) - 1).copied().unwrap_or(0.0)
}

fn close(a: f64, b: f64, rel: f64) -> bool {
    (a - b).abs() <= rel * a.abs().max(b.abs()) || a == b
}

pub fn spectral_summary(op: &TruncatedOperator, p_list: &[f64]) -> SpectralSummary {
    let n = op.n;
    let s = singular_values(&op.matrix);
    let half_n = n / 2;
    let s_half = singular_values(&op.leading(half_n.max(1)));
    let op_norm = s[0];
    let op_norm_half = s_half[0];
    let quarter = n - n.div_ceil(4);
    let schatten = p_list
        .iter()
        .map(|&p| {
            let total: f64 = s.iter().map(|x| x.powf(p)).sum();
            let tail: f64 = s[quarter..].iter().map(|x| x.powf(p)).sum();
            let tail_share = if total > 0.0 { tail / total } else { 0.0 };
            // relative change of the norm when the last quarter is dropped
            let shift = 1.0 - (1.0 - tail_share).max(0.0).powf(1.0 / p);
            SchattenValue {
                p,
                value: total.powf(1.0 / p),
                half_value: schatten_sum(&s_half, p),
                tail_share,
                converged: shift < SCHATTEN_TAIL_TOL,
            }
        })
        .collect();
    let ess_norm_proxy = proxy(&s, n.div_ceil(2));
    let ess_norm_half = proxy(&s_half, half_n.div_ceil(2));
    SpectralSummary {
        n,
        op_norm,
        op_norm_half,
        op_norm_converged: close(op_norm, op_norm_half, OP_NORM_TOL),
        hs_norm_sq: s.iter().map(|x| x * x).sum(),
        schatten,
        ess_norm_proxy,
        ess_norm_half,
        ess_converged: close(ess_norm_proxy, ess_norm_half, ESS_NORM_TOL) || ess_norm_proxy < 1e-12 * op_norm.max(1e-300),
        singular_values: s,
    }
}

/// Diagonal of the Gram matrix of `e_0, …, e_{n-1}` under the derivative-form
/// inner product `f(0)h̄(0) + (α/π)∫ f′ h̄′ (1+|z|)^{-2} e^{-α|z|²} dm`; the
/// off-diagonal entries vanish by rotation invariance.
pub fn derivative_gram(n: usize, alpha: f64) -> Vec<f64> {
    let ln_fact = ln_factorials(n + 1);
    let rule = legendre_rule(48);
    let width = 1.0 / alpha.sqrt();
    (0..n)
        .map(|j| {
            if j == 0 {
                return 1.0;
            }
            // ∫_0^∞ r^{2j-1}(1+r)^{-2} e^{-αr²} dr around its peak
            let jf = j as f64;
            let log_f = |r: f64| (2.0 * jf - 1.0) * r.ln() - 2.0 * r.ln_1p() - alpha * r * r;
            let peak = ((2.0 * jf - 1.0) / (2.0 * alpha)).sqrt();
            let lo = (peak - 14.0 * width).max(0.0);
            let hi = peak + 14.0 * width;
            let panels = 8;
            let h = (hi - lo) / panels as f64;
            let scale = log_f(peak);
            let mut sum = 0.0;
            for k in 0..panels {
                let a = lo + k as f64 * h;
                for &(x, w) in rule.iter() {
                    let r = a + 0.5 * h * (x + 1.0);
                    if r > 0.0 {
                        sum += 0.5 * h * w * (log_f(r) - scale).exp();
                    }
                }
            }
            let log_int = scale + sum.ln();
            (2.0 * alpha * jf * jf).ln().exp() * (jf * alpha.ln() - ln_fact[j] + log_int).exp()
        })
        .collect()
}

/// `Σ_j D_jj Σ_n |M_jn|²`: the Hilbert–Schmidt norm squared of the truncation
/// in the derivative-form inner product.
pub fn derivative_hs_norm_sq(op: &TruncatedOperator) -> f64 {
    let d = derivative_gram(op.n, op.pair.alpha);
    (0..op.n)
        .map(|j| d[j] * op.matrix.row(j).iter().map(|v| v.norm_sqr()).sum::<f64>())
        .sum()
}

/// Largest `|G₁ - G₂|` over the leading `N/2` block, where `G₁ = Mᴴ D M` is the
/// Gram matrix of the images `V e_n` in the derivative-form inner product and
/// `G₂[m][n] = (α/π)∫ e_n(ψ) conj(e_m(ψ)) |g′|²(1+|w|)^{-2} e^{-α|w|²} dm`
/// is computed by direct quadrature.
pub fn toeplitz_crosscheck(pair: &SymbolPair, n: usize) -> Result<f64, OperatorError> {
    let OperatorKind::VolterraComposition { g, psi } = &pair.kind else {
        return Err(OperatorError::NotVolterra);
    };
    if !g.is_polynomial() {
        return Err(OperatorError::Unsupported("Gram check needs a polynomial symbol".into()));
    }
    if psi.a.norm() > 1.0 {
        return Err(OperatorError::Unsupported("|a| > 1".into()));
    }
    let op = build_matrix(pair, n)?;
    let alpha = pair.alpha;
    let d = DMatrix::from_diagonal(&nalgebra::DVector::from_vec(
        derivative_gram(n, alpha).into_iter().map(|x| Complex64::new(x, 0.0)).collect(),
    ));
    let g1 = op.matrix.adjoint() * d * &op.matrix;
    let inner = n / 2;
    let tol = Tolerance::new(1e-11, 1e-14, 10)?;
    let weight = pair.weight();
    let psi = *psi;
    let entries: Vec<(usize, usize)> = (0..inner).flat_map(|m| (m..inner).map(move |k| (m, k))).collect();
    let deviations: Vec<f64> = entries
        .par_iter()
        .map(|&(m, k)| {
            let (em, ek) = (BasisElement::new(m, alpha), BasisElement::new(k, alpha));
            let f = |w: Complex64| {
                let z = psi.eval(w);
                let wt = weight.eval(w);
                ek.eval(z) * em.eval(z).conj() * (wt * wt)
            };
            let g2 = gaussian_integral(f, alpha, &tol)?.value * (alpha / PI);
            let dev_upper = (g1[(m, k)] - g2).norm();
            let dev_lower = (g1[(k, m)] - g2.conj()).norm();
            Ok(dev_upper.max(dev_lower))
        })
        .collect::<Result<_, QuadratureError>>()?;
    Ok(deviations.into_iter().fold(0.0, f64::max))
}

/// `‖T k_{(w,α)}‖_{(q,α)}`; for Volterra pairs the derivative-form norm of the
/// image, whose derivative is `k_{(w,α)}(ψ(z)) g′(z)`.
pub fn kernel_image_norm(pair: &SymbolPair, w: Complex64, q: f64) -> Result<NormValue, OperatorError> {
    let params = FockParams::new(q, pair.alpha)?;
    let alpha = pair.alpha;
    let psi = pair.psi();
    // k_w(ψ(z)) = exp(α w̄ b - α|w|²/2 + α w̄ a z)
    let r = Polynomial::new(vec![
        w.conj() * psi.b * alpha - 0.5 * alpha * w.norm_sqr(),
        w.conj() * psi.a * alpha,
    ])?;
    let tol = Tolerance::default();
    match &pair.kind {
        OperatorKind::VolterraComposition { g, .. } => {
            let derivative = g.derivative().times_exp(&r)?;
            if derivative.is_zero() {
                return Ok(NormValue::Finite {
                    value: 0.0,
                    rel_error: 0.0,
                });
            }
            Ok(derivative_form_norm(ZERO, &derivative, &params, &tol)?)
        }
        OperatorKind::WeightedComposition { u, .. } => {
            let image = u.times_exp(&r)?;
            if image.is_zero() {
                return Ok(NormValue::Finite {
                    value: 0.0,
                    rel_error: 0.0,
                });
            }
            Ok(fock_norm_with(&image, &params, &tol)?)
        }
    }
}

/// The constant `qα/(2π)` with `‖T k_w‖^q = (qα/2π)·B(|g|^q)(w)` for the norms
/// used by [`kernel_image_norm`].
pub fn kernel_image_constant(q: f64, alpha: f64) -> f64 {
    q * alpha / (2.0 * PI)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn poly(coeffs: &[f64]) -> EntireSymbol {
        EntireSymbol::polynomial(Polynomial::real(coeffs).unwrap())
    }

    #[test]
    fn identity_composition_is_identity() {
        let pair = SymbolPair::weighted(poly(&[1.0]), LinearMap::identity(), 1.0).unwrap();
        let op = build_matrix(&pair, 12).unwrap();
        assert!((op.matrix.clone() - DMatrix::<Complex64>::identity(12, 12)).norm() < 1e-14);
    }

    #[test]
    fn volterra_z_is_weighted_shift() {
        for alpha in [0.5, 1.0, 2.0] {
            let pair = SymbolPair::volterra(poly(&[0.0, 1.0]), LinearMap::identity(), alpha).unwrap();
            let op = build_matrix(&pair, 16).unwrap();
            for col in 0..16 {
                for row in 0..16 {
                    let expected = if row == col + 1 {
                        1.0 / (alpha * row as f64).sqrt()
                    } else {
                        0.0
                    };
                    assert!((op.matrix[(row, col)] - expected).norm() < 1e-14);
                }
            }
        }
    }

    #[test]
    fn dilation_is_diagonal() {
        let pair = SymbolPair::weighted(poly(&[1.0]), LinearMap::dilation(0.5), 1.0).unwrap();
        let op = build_matrix(&pair, 20).unwrap();
        for k in 0..20 {
            assert_relative_eq!(op.matrix[(k, k)].re, 0.5f64.powi(k as i32), max_relative = 1e-13);
        }
    }

    /// Column `k` against a direct evaluation of the image at sample points.
    fn check_columns(pair: &SymbolPair, n: usize, check: usize) {
        let op = build_matrix(pair, n).unwrap();
        let alpha = pair.alpha;
        for k in 0..check {
            for z in [c(0.3, 0.1), c(-0.2, 0.4), c(0.1, -0.35)] {
                let series: Complex64 =
                    (0..n).map(|j| op.matrix[(j, k)] * BasisElement::new(j, alpha).eval(z)).sum();
                let direct = match &pair.kind {
                    OperatorKind::WeightedComposition { u, psi } => {
                        u.eval(z) * BasisElement::new(k, alpha).eval(psi.eval(z))
                    }
                    OperatorKind::VolterraComposition { g, psi } => {
                        // ∫_0^z along the segment, Gauss–Legendre
                        let dg = g.derivative();
                        legendre_rule(40)
                            .iter()
                            .map(|&(x, w)| {
                                let t = 0.5 * (x + 1.0);
                                let zeta = z * t;
                                0.5 * w * z * dg.eval(zeta) * BasisElement::new(k, alpha).eval(psi.eval(zeta))
                            })
                            .sum()
                    }
                };
                assert!(
                    (series - direct).norm() < 1e-11 * (1.0 + direct.norm()),
                    "column {k} at {z}: {series} vs {direct}"
                );
            }
        }
    }

    #[test]
    fn columns_match_direct_images() {
        let psi = LinearMap::new(c(0.6, 0.2), c(0.3, -0.1));
        let g = EntireSymbol::polynomial(Polynomial::new(vec![c(1.0, 0.0), c(0.5, 0.5), c(0.0, -0.3)]).unwrap());
        check_columns(&SymbolPair::volterra(g.clone(), psi, 1.3).unwrap(), 48, 8);
        check_columns(&SymbolPair::weighted(g, psi, 0.7).unwrap(), 48, 8);
        let e = EntireSymbol::exp_poly(
            Polynomial::real(&[1.0, -0.5]).unwrap(),
            Polynomial::new(vec![c(0.1, 0.0), c(0.2, 0.3), c(0.1, -0.1)]).unwrap(),
        )
        .unwrap();
        check_columns(&SymbolPair::volterra(e.clone(), psi, 1.0).unwrap(), 64, 6);
        check_columns(&SymbolPair::weighted(e, psi, 1.0).unwrap(), 64, 6);
    }

    #[test]
    fn identity_spectrum() {
        let pair = SymbolPair::weighted(poly(&[1.0]), LinearMap::identity(), 1.0).unwrap();
        let s = spectral_summary(&build_matrix(&pair, 5).unwrap(), &[2.0]);
        for v in &s.singular_values {
            assert_relative_eq!(*v, 1.0, max_relative = 1e-12);
        }
        assert_relative_eq!(s.hs_norm_sq, 5.0, max_relative = 1e-12);
        assert_relative_eq!(s.op_norm, 1.0, max_relative = 1e-12);
    }

    #[test]
    fn truncation_bounds() {
        let pair = SymbolPair::weighted(poly(&[1.0]), LinearMap::identity(), 1.0).unwrap();
        assert!(matches!(build_matrix(&pair, 1), Err(OperatorError::TruncationSize(1))));
        assert!(build_matrix(&pair, MAX_TRUNCATION + 1).is_err());
    }

    #[test]
    fn derivative_gram_matches_quadrature() {
        let alpha = 1.3;
        let d = derivative_gram(6, alpha);
        for (j, dj) in d.iter().enumerate().skip(1) {
            let e = BasisElement::new(j, alpha);
            let jf = j as f64;
            let f = |z: Complex64| {
                let de = e.coefficient() * jf * z.powu(j as u32 - 1);
                de.norm_sqr() / (1.0 + z.norm()).powi(2)
            };
            let direct = gaussian_integral(f, alpha, &Tolerance::default()).unwrap().value * alpha / PI;
            assert_relative_eq!(*dj, direct, max_relative = 1e-9);
        }
    }

    #[test]
    fn crosscheck_rejects_weighted_pairs() {
        let pair = SymbolPair::weighted(poly(&[1.0]), LinearMap::identity(), 1.0).unwrap();
        assert!(matches!(toeplitz_crosscheck(&pair, 8), Err(OperatorError::NotVolterra)));
    }

    #[test]
    fn constant_symbol_has_zero_gram() {
        let pair = SymbolPair::volterra(poly(&[4.0]), LinearMap::identity(), 1.0).unwrap();
        assert_eq!(toeplitz_crosscheck(&pair, 8).unwrap(), 0.0);
        let norm = kernel_image_norm(&pair, c(1.0, 2.0), 2.0).unwrap();
        assert_eq!(norm.value(), 0.0);
    }
}
