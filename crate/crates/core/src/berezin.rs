//! The Berezin-type transform
//!
//! `B_{(ψ,α)}(|g|^p)(w) = ∫_ℂ e^{(pα/2)(2Re⟨ψ(z),w⟩ - |z|² - |w|²)} W(z)^p dm(z)`,
//!
//! with `W` the induced weight of the pair (`|g′|/(1+|z|)` or `|u|`), and the
//! global quantities built from it.
//!
//! For `ψ(z) = az + b` the exponent completes to
//! `-(pα/2)|z - āw|² + (pα/2)((|a|²-1)|w|² + 2Re(b w̄))`, so each value is a
//! Gaussian integral centred at `āw` times an explicit factor. Values are carried
//! in log form; `+∞` marks divergence and is data, not an error.

use std::f64::consts::PI;
use std::io::{self, Write};

use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::quadrature::{
    build_scheme, integrate, legendre_rule, log_gaussian_integral, GaussianEnvelope, QuadratureError, Tolerance,
};
use crate::symbols::{InducedWeight, LinearMap, SymbolPair};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum BerezinError {
    #[error("invalid grid: {0}")]
    InvalidGrid(String),
    #[error("exponent must be positive and finite, got {0}")]
    InvalidExponent(f64),
    #[error(transparent)]
    Quadrature(#[from] QuadratureError),
}

/// Quadrature settings for a single transform value.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BerezinOptions {
    pub tol: Tolerance,
    pub radial_nodes: usize,
    pub angular_nodes: usize,
}

impl Default for BerezinOptions {
    fn default() -> Self {
        Self {
            tol: Tolerance::default(),
            radial_nodes: 64,
            angular_nodes: 64,
        }
    }
}

impl BerezinOptions {
    /// Coarser start used for grids and outer integrals.
    pub fn grid() -> Self {
        Self {
            tol: Tolerance {
                rel_tol: 1e-7,
                abs_tol: 1e-12,
                max_refinements: 4,
            },
            radial_nodes: 16,
            angular_nodes: 16,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BerezinSample {
    /// `+∞` when the integral diverges or overflows.
    pub value: f64,
    pub log_value: f64,
    pub rel_error: f64,
    pub converged: bool,
}

impl BerezinSample {
    fn divergent() -> Self {
        Self {
            value: f64::INFINITY,
            log_value: f64::INFINITY,
            rel_error: 0.0,
            converged: true,
        }
    }

    fn zero() -> Self {
        Self {
            value: 0.0,
            log_value: f64::NEG_INFINITY,
            rel_error: 0.0,
            converged: true,
        }
    }

    pub fn is_infinite(&self) -> bool {
        self.value == f64::INFINITY
    }
}

/// A pair prepared for repeated evaluation of its transform at one exponent.
#[derive(Debug, Clone)]
pub struct BerezinTransform {
    weight: InducedWeight,
    psi: LinearMap,
    alpha: f64,
    exponent: f64,
}

impl BerezinTransform {
    pub fn new(pair: &SymbolPair, exponent: f64) -> Result<Self, BerezinError> {
        if !(exponent > 0.0 && exponent.is_finite()) {
            return Err(BerezinError::InvalidExponent(exponent));
        }
        Ok(Self {
            weight: pair.weight(),
            psi: *pair.psi(),
            alpha: pair.alpha,
            exponent,
        })
    }

    pub fn exponent(&self) -> f64 {
        self.exponent
    }

    /// Gaussian exponent `pα/2`.
    pub fn decay(&self) -> f64 {
        0.5 * self.exponent * self.alpha
    }

    pub fn weight(&self) -> &InducedWeight {
        &self.weight
    }

    /// True when no `w` can give a finite value.
    pub fn diverges(&self) -> bool {
        !self.weight.is_zero() && self.weight.growth_bound(self.exponent) >= self.decay()
    }

    pub fn eval(&self, w: Complex64, opts: &BerezinOptions) -> Result<BerezinSample, BerezinError> {
        if self.weight.is_zero() {
            return Ok(BerezinSample::zero());
        }
        if self.diverges() {
            return Ok(BerezinSample::divergent());
        }
        let p = self.exponent;
        let c = self.decay();
        let (a, b) = (self.psi.a, self.psi.b);
        let [q0, q1, q2] = self.weight.exponent;
        let envelope = GaussianEnvelope {
            c,
            center: a.conj() * w,
            q1: q1 * p,
            q2: q2 * p,
        };
        let outer = c * ((a.norm_sqr() - 1.0) * w.norm_sqr() + 2.0 * (b * w.conj()).re) + p * q0.re;
        let weight = &self.weight;
        let amp = |z: Complex64| p * weight.log_amplitude(z);
        let res = match log_gaussian_integral(amp, &envelope, self.weight.amplitude_degree(p), &opts.tol, opts.radial_nodes, opts.angular_nodes) {
            Ok(r) => r,
            Err(QuadratureError::DivergentTail { .. }) => return Ok(BerezinSample::divergent()),
            Err(e) => return Err(e.into()),
        };
        let log_value = outer + res.log_value;
        Ok(BerezinSample {
            value: log_value.exp(),
            log_value,
            rel_error: res.rel_error,
            converged: res.converged,
        })
    }

    /// The same integral written as `∫ |k_{(w,α)}(ψ(z))|^p W(z)^p e^{-(pα/2)|z|²} dm`
    /// and evaluated directly on an origin-centred rule: the pull-back form.
    pub fn eval_pullback(&self, w: Complex64, tol: &Tolerance) -> Result<f64, BerezinError> {
        if self.weight.is_zero() {
            return Ok(0.0);
        }
        let p = self.exponent;
        let alpha = self.alpha;
        let growth = self.weight.growth_bound(p);
        let scheme = build_scheme(self.decay(), tol, growth)?
            .widened(self.psi.a.norm() * w.norm() + self.psi.b.norm());
        let psi = self.psi;
        let weight = &self.weight;
        let f = |z: Complex64| {
            let kernel_log = alpha * (w.conj() * psi.eval(z)).re - 0.5 * alpha * w.norm_sqr();
            (p * (kernel_log + weight.log_eval(z))).exp()
        };
        Ok(integrate(&scheme, tol, f)?.value)
    }
}

/// `B_{(ψ,α)}(W^p)(w)` with default quadrature settings.
pub fn berezin_at(pair: &SymbolPair, p: f64, w: Complex64) -> Result<BerezinSample, BerezinError> {
    BerezinTransform::new(pair, p)?.eval(w, &BerezinOptions::default())
}

/// Geometric polar grid `{0} ∪ {r_k e^{2πij/angles}}`, `r_k = w_max·2^{-k/radii_per_octave}`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GridSpec {
    pub r_min: f64,
    pub w_max: f64,
    pub radii_per_octave: usize,
    pub angles: usize,
}

/// Outer radius of the default grid in units of `1/sqrt(α)`.
pub const DEFAULT_W_MAX_SCALED: f64 = 134_217_728.0; // 2^27

impl GridSpec {
    pub fn for_alpha(alpha: f64) -> Self {
        let unit = 1.0 / alpha.sqrt();
        Self {
            r_min: 0.25 * unit,
            w_max: DEFAULT_W_MAX_SCALED * unit,
            radii_per_octave: 2,
            angles: 16,
        }
    }

    pub fn validate(&self, alpha: f64) -> Result<(), BerezinError> {
        if !(self.r_min > 0.0 && self.r_min < self.w_max && self.w_max.is_finite()) {
            return Err(BerezinError::InvalidGrid(format!(
                "need 0 < r_min < w_max < inf, got {} and {}",
                self.r_min, self.w_max
            )));
        }
        if self.w_max < 8.0 / alpha.sqrt() {
            return Err(BerezinError::InvalidGrid(format!(
                "w_max {} is below 8/sqrt(alpha)",
                self.w_max
            )));
        }
        if self.radii_per_octave == 0 || self.angles == 0 {
            return Err(BerezinError::InvalidGrid("empty grid".into()));
        }
        Ok(())
    }

    /// Radii in increasing order; `w_max / 2` is always among them.
    pub fn radii(&self) -> Vec<f64> {
        let m = self.radii_per_octave as f64;
        let mut out: Vec<f64> = (0..)
            .map(|k| self.w_max * (-(k as f64) / m).exp2())
            .take_while(|&r| r >= self.r_min * (1.0 - 1e-12))
            .collect();
        out.reverse();
        out
    }

    pub fn angle(&self, j: usize) -> Complex64 {
        Complex64::from_polar(1.0, 2.0 * PI * j as f64 / self.angles as f64)
    }
}

/// Transform values on a [`GridSpec`].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BerezinProfile {
    pub pair: SymbolPair,
    pub exponent: f64,
    pub grid: GridSpec,
    pub radii: Vec<f64>,
    pub origin_value: f64,
    /// Radius-major: `values[i * angles + j]` at `radii[i]·e^{2πij/angles}`.
    pub values: Vec<f64>,
    pub annulus_maxima: Vec<f64>,
    pub sup: f64,
    pub argmax: Complex64,
    /// Maximum over the outermost annulus.
    pub tail_max: f64,
    /// Some node diverged or overflowed.
    pub unbounded: bool,
    pub unconverged: usize,
    pub max_rel_error: f64,
}

impl BerezinProfile {
    pub fn nodes(&self) -> impl Iterator<Item = (Complex64, f64)> + '_ {
        let origin = std::iter::once((Complex64::new(0.0, 0.0), self.origin_value));
        let ring = self.radii.iter().enumerate().flat_map(move |(i, &r)| {
            (0..self.grid.angles).map(move |j| (self.grid.angle(j) * r, self.values[i * self.grid.angles + j]))
        });
        origin.chain(ring)
    }

    /// Maximum over nodes with `|w| ≤ radius`.
    pub fn sup_within(&self, radius: f64) -> f64 {
        self.nodes()
            .filter(|(w, _)| w.norm() <= radius * (1.0 + 1e-12))
            .map(|(_, v)| v)
            .fold(0.0, f64::max)
    }

    /// `sup / sup_within(w_max / 2)`; 1 for an identically zero profile.
    pub fn doubling_ratio(&self) -> f64 {
        let half = self.sup_within(0.5 * self.grid.w_max);
        if self.sup == 0.0 {
            1.0
        } else if half == 0.0 {
            f64::INFINITY
        } else {
            self.sup / half
        }
    }

    /// Outer annulus maxima ratio over the last octave.
    pub fn growth_ratio(&self) -> f64 {
        let k = self.annulus_maxima.len();
        let step = self.grid.radii_per_octave.min(k.saturating_sub(1));
        let (last, prev) = (self.annulus_maxima[k - 1], self.annulus_maxima[k - 1 - step]);
        if prev == 0.0 {
            if last == 0.0 {
                1.0
            } else {
                f64::INFINITY
            }
        } else {
            last / prev
        }
    }

    /// `w_re,w_im,value` rows.
    pub fn write_csv<W: Write>(&self, mut out: W) -> io::Result<()> {
        writeln!(out, "w_re,w_im,value")?;
        for (w, v) in self.nodes() {
            writeln!(out, "{:.17e},{:.17e},{:.17e}", w.re, w.im, v)?;
        }
        Ok(())
    }
}

pub fn berezin_profile(
    pair: &SymbolPair,
    p: f64,
    grid: &GridSpec,
    opts: &BerezinOptions,
) -> Result<BerezinProfile, BerezinError> {
    grid.validate(pair.alpha)?;
    let transform = BerezinTransform::new(pair, p)?;
    let radii = grid.radii();
    let mut points = vec![Complex64::new(0.0, 0.0)];
    for &r in &radii {
        points.extend((0..grid.angles).map(|j| grid.angle(j) * r));
    }
    let samples: Vec<BerezinSample> = points
        .par_iter()
        .map(|&w| transform.eval(w, opts))
        .collect::<Result<_, _>>()?;

    let origin = samples[0];
    let values: Vec<f64> = samples[1..].iter().map(|s| s.value).collect();
    let annulus_maxima: Vec<f64> = values
        .chunks(grid.angles)
        .map(|ring| ring.iter().copied().fold(0.0, f64::max))
        .collect();
    let (mut sup, mut argmax) = (origin.value, points[0]);
    for (v, w) in values.iter().zip(&points[1..]) {
        if *v > sup {
            sup = *v;
            argmax = *w;
        }
    }
    Ok(BerezinProfile {
        pair: pair.clone(),
        exponent: p,
        grid: *grid,
        radii,
        origin_value: origin.value,
        tail_max: *annulus_maxima.last().unwrap_or(&origin.value),
        values,
        annulus_maxima,
        sup,
        argmax,
        unbounded: samples.iter().any(|s| s.is_infinite()),
        unconverged: samples.iter().filter(|s| !s.converged).count(),
        max_rel_error: samples.iter().map(|s| s.rel_error).fold(0.0, f64::max),
    })
}

pub const VANISHING_EPS: f64 = 1e-4;
pub const VANISHING_FLOOR: f64 = 1e-30;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VanishingTest {
    pub vanishes: bool,
    /// `tail_max / max(sup, floor)`.
    pub tail_ratio: f64,
    /// Last three annulus maxima, innermost first.
    pub outer_annuli: Vec<f64>,
}

/// The profile tends to zero: the outer annulus is below `eps` relative to the
/// sup, and the last three annulus maxima strictly decrease (or are zero).
pub fn vanishes_at_infinity(profile: &BerezinProfile, eps: f64) -> VanishingTest {
    let m = &profile.annulus_maxima;
    let outer_annuli = m[m.len().saturating_sub(3)..].to_vec();
    let tail_ratio = profile.tail_max / profile.sup.max(VANISHING_FLOOR);
    if profile.unbounded {
        return VanishingTest {
            vanishes: false,
            tail_ratio,
            outer_annuli,
        };
    }
    let non_increasing = outer_annuli.windows(2).all(|w| w[1] <= w[0] * (1.0 + 1e-9));
    let last = *outer_annuli.last().unwrap_or(&0.0);
    let first = outer_annuli[0];
    let decaying = last == 0.0 || last <= first * (1.0 - 1e-6);
    VanishingTest {
        vanishes: tail_ratio < eps && non_increasing && decaying,
        tail_ratio,
        outer_annuli,
    }
}

/// Finiteness call for an improper integral.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum IntegralVerdict {
    Finite,
    Divergent,
    Inconclusive,
}

/// Decay rates (in `ln|w|`) of the outer integrand above this are integrable.
pub const MIN_DECAY_RATE: f64 = 0.1;
/// Decay rates below this are treated as divergent.
pub const DIVERGENT_DECAY_RATE: f64 = 0.02;

/// Outer integrals stop at `min(w_max, OUTER_W_MAX_SCALED/sqrt(α))`; the decay
/// rate there decides finiteness.
pub const OUTER_W_MAX_SCALED: f64 = 1024.0;

const PANEL_WIDTH: f64 = 0.5;
const PANEL_NODES: usize = 8;
const DISC_NODES: usize = 16;

/// `log B` on a polar rule covering the plane out to the grid's `w_max`:
/// a Gauss–Legendre disc `|w| ≤ 1/sqrt(α)` and Gauss–Legendre panels in `ln|w|`
/// beyond it.
#[derive(Debug, Clone)]
pub struct OuterSamples {
    pub exponent: f64,
    angles: usize,
    /// `(radius, radial weight with Jacobian, panel index or None for the disc)`.
    radial: Vec<(f64, f64, Option<usize>)>,
    log_values: Vec<f64>,
    pub any_infinite: bool,
    pub truncated_early: bool,
    panels: usize,
}

impl OuterSamples {
    pub fn compute(
        pair: &SymbolPair,
        exponent: f64,
        grid: &GridSpec,
        opts: &BerezinOptions,
    ) -> Result<Self, BerezinError> {
        grid.validate(pair.alpha)?;
        let transform = BerezinTransform::new(pair, exponent)?;
        let angles = grid.angles.max(4);
        let mut radial = Vec::new();
        let r1 = 1.0 / pair.alpha.sqrt();
        for (x, w) in gl_nodes(DISC_NODES) {
            let r = 0.5 * r1 * (x + 1.0);
            radial.push((r, 0.5 * r1 * w * r, None));
        }
        let t0 = r1.ln();
        let t_end = grid.w_max.min(OUTER_W_MAX_SCALED * r1).ln();
        let panels = ((t_end - t0) / PANEL_WIDTH).ceil().max(1.0) as usize;
        let width = (t_end - t0) / panels as f64;

        let ring = |r: f64| -> Result<Vec<f64>, BerezinError> {
            (0..angles)
                .into_par_iter()
                .map(|j| {
                    let w = Complex64::from_polar(r, 2.0 * PI * j as f64 / angles as f64);
                    transform.eval(w, opts).map(|s| s.log_value)
                })
                .collect()
        };
        let mut log_values = Vec::new();
        let mut any_infinite = false;
        for &(r, _, _) in &radial {
            let vals = ring(r)?;
            any_infinite |= vals.iter().any(|v| *v == f64::INFINITY);
            log_values.extend(vals);
        }
        let mut running_max = log_values.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        let mut quiet_panels = 0;
        let mut truncated_early = false;
        let mut used_panels = 0;
        for k in 0..panels {
            let a = t0 + k as f64 * width;
            let mut panel_max = f64::NEG_INFINITY;
            for (x, w) in gl_nodes(PANEL_NODES) {
                let t = a + 0.5 * width * (x + 1.0);
                let r = t.exp();
                // dm = r dr dθ = r² dt dθ
                radial.push((r, 0.5 * width * w * r * r, Some(k)));
                let vals = ring(r)?;
                any_infinite |= vals.iter().any(|v| *v == f64::INFINITY);
                panel_max = vals.iter().copied().fold(panel_max, f64::max);
                log_values.extend(vals);
            }
            used_panels = k + 1;
            if any_infinite {
                break;
            }
            running_max = running_max.max(panel_max);
            // a Gaussian-decaying transform has left the representable range
            if panel_max < running_max - 750.0 {
                quiet_panels += 1;
                if quiet_panels >= 2 {
                    truncated_early = k + 1 < panels;
                    break;
                }
            } else {
                quiet_panels = 0;
            }
        }
        Ok(Self {
            exponent,
            angles,
            radial,
            log_values,
            any_infinite,
            truncated_early,
            panels: used_panels,
        })
    }

    /// `∫_ℂ B(w)^s dm(w)` with its finiteness verdict.
    pub fn power_integral(&self, s: f64) -> PowerIntegral {
        if self.any_infinite {
            return PowerIntegral {
                s,
                integral: f64::INFINITY,
                decay_rate: f64::NEG_INFINITY,
                verdict: IntegralVerdict::Divergent,
            };
        }
        let dtheta = 2.0 * PI / self.angles as f64;
        let mut disc = 0.0;
        let mut panel_sums = vec![0.0; self.panels];
        for (i, &(_, weight, panel)) in self.radial.iter().enumerate() {
            let ring: f64 = self.log_values[i * self.angles..(i + 1) * self.angles]
                .iter()
                .map(|l| (s * l).exp())
                .sum();
            let contrib = ring * dtheta * weight;
            match panel {
                None => disc += contrib,
                Some(k) => panel_sums[k] += contrib,
            }
        }
        let body: f64 = disc + panel_sums.iter().sum::<f64>();
        let last = *panel_sums.last().unwrap_or(&0.0);
        if self.truncated_early || last == 0.0 || self.panels < 2 {
            return PowerIntegral {
                s,
                integral: body,
                decay_rate: f64::INFINITY,
                verdict: IntegralVerdict::Finite,
            };
        }
        let prev = panel_sums[self.panels - 2];
        let width = self.panel_width();
        let decay_rate = if prev > 0.0 {
            -(last / prev).ln() / width
        } else {
            f64::NEG_INFINITY
        };
        let (integral, verdict) = if decay_rate >= MIN_DECAY_RATE {
            let ratio = (-decay_rate * width).exp();
            (body + last * ratio / (1.0 - ratio), IntegralVerdict::Finite)
        } else if decay_rate <= DIVERGENT_DECAY_RATE {
            (f64::INFINITY, IntegralVerdict::Divergent)
        } else {
            let ratio = (-decay_rate * width).exp();
            (body + last * ratio / (1.0 - ratio), IntegralVerdict::Inconclusive)
        };
        PowerIntegral {
            s,
            integral,
            decay_rate,
            verdict,
        }
    }

    fn panel_width(&self) -> f64 {
        // panels share one width; recover it from the radial layout
        let first = self.radial.iter().position(|r| r.2 == Some(0));
        let second = self.radial.iter().position(|r| r.2 == Some(1));
        match (first, second) {
            (Some(i), Some(j)) => (self.radial[j].0 / self.radial[i].0).ln(),
            _ => PANEL_WIDTH,
        }
    }
}

fn gl_nodes(n: usize) -> Vec<(f64, f64)> {
    legendre_rule(n).as_ref().clone()
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PowerIntegral {
    pub s: f64,
    pub integral: f64,
    /// Exponential decay rate of the integrand in `ln|w|` at the outer edge.
    pub decay_rate: f64,
    pub verdict: IntegralVerdict,
}

/// `(∫ B(|g|^q)^s dm)^{1/(s q)}` with `s = p/(p-q)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LpIntegral {
    pub q: f64,
    pub s: f64,
    pub integral: PowerIntegral,
    /// `+∞` for a divergent integral.
    pub value: f64,
}

pub fn lp_integral(
    pair: &SymbolPair,
    q: f64,
    s: f64,
    grid: &GridSpec,
    opts: &BerezinOptions,
) -> Result<LpIntegral, BerezinError> {
    if !(s > 1.0 && s.is_finite()) {
        return Err(BerezinError::InvalidExponent(s));
    }
    let samples = OuterSamples::compute(pair, q, grid, opts)?;
    let integral = samples.power_integral(s);
    Ok(LpIntegral {
        q,
        s,
        integral,
        value: integral.integral.powf(1.0 / (s * q)),
    })
}

/// `∫_ℂ W(z)² e^{α|ψ(z)|² - α|z|²} dm(z)`; `+∞` when divergent.
pub fn hilbert_schmidt_integral(pair: &SymbolPair, tol: &Tolerance) -> Result<f64, BerezinError> {
    let weight = pair.weight();
    if weight.is_zero() {
        return Ok(0.0);
    }
    let alpha = pair.alpha;
    let psi = pair.psi();
    let c = alpha * (1.0 - psi.a.norm_sqr());
    let [q0, q1, q2] = weight.exponent;
    if c <= 0.0 || 2.0 * q2.norm() >= c {
        return Ok(f64::INFINITY);
    }
    let envelope = GaussianEnvelope {
        c,
        center: Complex64::new(0.0, 0.0),
        q1: q1 * 2.0 + psi.a * psi.b.conj() * (2.0 * alpha),
        q2: q2 * 2.0,
    };
    let amp = |z: Complex64| 2.0 * weight.log_amplitude(z);
    let res = log_gaussian_integral(amp, &envelope, weight.amplitude_degree(2.0), tol, 64, 64)?;
    Ok((res.log_value + alpha * psi.b.norm_sqr() + 2.0 * q0.re).exp())
}

/// `∫_ℂ |u(z)|^p e^{(pα/2)((|a|²-1)|z|² + 2Re⟨az, b⟩)} dm(z)` for a weighted
/// composition pair; finite exactly when `uC_ψ ∈ S_p` (given `|a| < 1`).
pub fn composition_schatten_integral(pair: &SymbolPair, p: f64, tol: &Tolerance) -> Result<f64, BerezinError> {
    if !(p > 0.0 && p.is_finite()) {
        return Err(BerezinError::InvalidExponent(p));
    }
    let weight = pair.weight();
    if weight.is_zero() {
        return Ok(0.0);
    }
    let psi = pair.psi();
    let half = 0.5 * p * pair.alpha;
    let c = half * (1.0 - psi.a.norm_sqr());
    let [q0, q1, q2] = weight.exponent;
    if c <= 0.0 || p * q2.norm() >= c {
        return Ok(f64::INFINITY);
    }
    let envelope = GaussianEnvelope {
        c,
        center: Complex64::new(0.0, 0.0),
        q1: q1 * p + psi.a * psi.b.conj() * (2.0 * half),
        q2: q2 * p,
    };
    let amp = |z: Complex64| p * weight.log_amplitude(z);
    let res = log_gaussian_integral(amp, &envelope, weight.amplitude_degree(p), tol, 64, 64)?;
    Ok((res.log_value + p * q0.re).exp())
}
