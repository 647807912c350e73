//! Classification of pairs as bounded, compact and Schatten class from three
//! independent sources: the Berezin transform, truncated spectra and closed-form
//! symbol rules.

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;

use crate::berezin::{
    berezin_profile, composition_schatten_integral, hilbert_schmidt_integral, vanishes_at_infinity, BerezinError,
    BerezinOptions, GridSpec, IntegralVerdict, OuterSamples, VANISHING_EPS,
};
use crate::operator::{
    build_matrix, derivative_hs_norm_sq, kernel_image_norm, spectral_summary, OperatorError, SpectralSummary,
    DEFAULT_TRUNCATION,
};
use crate::quadrature::Tolerance;
use crate::serde_float;
use crate::symbols::{EntireSymbol, LinearMap, OperatorKind, Polynomial, SymbolPair};

/// Doubling ratios of the sup up to `1 + BOUNDED_RATIO_YES` read as bounded.
pub const BOUNDED_RATIO_YES: f64 = 1e-3;
/// Doubling ratios from `1 + BOUNDED_RATIO_NO` read as unbounded.
pub const BOUNDED_RATIO_NO: f64 = 0.02;
/// Spectral essential-norm proxies shrinking below this factor on doubling `N`
/// read as compact.
pub const SPECTRAL_COMPACT_RATIO: f64 = 0.9;
pub const SPECTRAL_NONCOMPACT_RATIO: f64 = 0.99;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Verdict {
    Yes,
    No,
    Inconclusive,
}

impl Verdict {
    pub fn is_definite(self) -> bool {
        self != Verdict::Inconclusive
    }

    fn from_integral(v: IntegralVerdict) -> Self {
        match v {
            IntegralVerdict::Finite => Verdict::Yes,
            IntegralVerdict::Divergent => Verdict::No,
            IntegralVerdict::Inconclusive => Verdict::Inconclusive,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Judgement {
    pub verdict: Verdict,
    pub evidence: String,
}

impl Judgement {
    fn new(verdict: Verdict, evidence: impl Into<String>) -> Self {
        Self {
            verdict,
            evidence: evidence.into(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SchattenJudgement {
    pub p: f64,
    pub verdict: Verdict,
    pub evidence: String,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Source {
    BerezinCriterion,
    SpectralCriterion,
    ClosedFormOracle,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Classification {
    pub source: Source,
    pub p: f64,
    pub q: f64,
    pub bounded: Judgement,
    pub compact: Judgement,
    /// Only populated for `p = q = 2`.
    pub schatten: Vec<SchattenJudgement>,
    #[serde(with = "serde_float")]
    pub norm_estimate: f64,
    #[serde(with = "serde_float")]
    pub essential_norm_estimate: f64,
    #[serde(with = "serde_float::option")]
    pub spectral_norm: Option<f64>,
}

impl Classification {
    pub fn schatten_verdict(&self, p: f64) -> Option<Verdict> {
        self.schatten.iter().find(|s| s.p == p).map(|s| s.verdict)
    }

    /// Broken implications among compact ⇒ bounded, S_p ⇒ compact and
    /// S_p ⇒ S_{p′} for `p′ > p`.
    pub fn lattice_violations(&self) -> Vec<String> {
        let mut out = Vec::new();
        if self.compact.verdict == Verdict::Yes && self.bounded.verdict != Verdict::Yes {
            out.push(format!("compact Yes but bounded {:?}", self.bounded.verdict));
        }
        for s in &self.schatten {
            if s.verdict == Verdict::Yes && self.compact.verdict != Verdict::Yes {
                out.push(format!("S_{} Yes but compact {:?}", s.p, self.compact.verdict));
            }
            for t in &self.schatten {
                if t.p > s.p && s.verdict == Verdict::Yes && t.verdict != Verdict::Yes {
                    out.push(format!("S_{} Yes but S_{} {:?}", s.p, t.p, t.verdict));
                }
            }
        }
        out
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ClassifyOptions {
    /// Defaults to [`GridSpec::for_alpha`].
    pub grid: Option<GridSpec>,
    pub berezin: BerezinOptions,
    pub eps: f64,
    pub schatten_exponents: Vec<f64>,
    pub truncation: usize,
}

impl Default for ClassifyOptions {
    fn default() -> Self {
        Self {
            grid: None,
            berezin: BerezinOptions::grid(),
            eps: VANISHING_EPS,
            schatten_exponents: vec![1.0, 2.0, 2.5, 3.0, 4.0],
            truncation: DEFAULT_TRUNCATION,
        }
    }
}

impl ClassifyOptions {
    pub fn grid_for(&self, alpha: f64) -> GridSpec {
        self.grid.unwrap_or_else(|| GridSpec::for_alpha(alpha))
    }
}

fn hilbert_exponents(p: f64, q: f64) -> bool {
    p == 2.0 && q == 2.0
}

/// Schatten verdicts forced by the compactness verdict, or `None` when they must
/// be computed.
fn schatten_from_compact(compact: Verdict, exponents: &[f64]) -> Option<Vec<SchattenJudgement>> {
    let (verdict, evidence) = match compact {
        Verdict::Yes => return None,
        Verdict::No => (Verdict::No, "not compact"),
        Verdict::Inconclusive => (Verdict::Inconclusive, "compactness undecided"),
    };
    Some(
        exponents
            .iter()
            .map(|&p| SchattenJudgement {
                p,
                verdict,
                evidence: evidence.into(),
            })
            .collect(),
    )
}

/// Verdicts from the transform `B(|g|^q)`: its sup and decay for `p ≤ q`, its
/// `L^{p/(p-q)}` integral for `p > q`, and `∫ B^{t/2} dm` for `S_t` when
/// `p = q = 2`.
pub fn classify_berezin(
    pair: &SymbolPair,
    p: f64,
    q: f64,
    opts: &ClassifyOptions,
) -> Result<Classification, BerezinError> {
    if !(p > 0.0 && p.is_finite()) {
        return Err(BerezinError::InvalidExponent(p));
    }
    if !(q > 0.0 && q.is_finite()) {
        return Err(BerezinError::InvalidExponent(q));
    }
    let grid = opts.grid_for(pair.alpha);
    let (bounded, compact, norm_estimate, essential_norm_estimate) = if p <= q {
        let profile = berezin_profile(pair, q, &grid, &opts.berezin)?;
        let ratio = profile.doubling_ratio();
        let bounded = if profile.unbounded {
            Judgement::new(Verdict::No, "transform diverges or overflows on the grid")
        } else {
            let evidence = format!(
                "sup={:.6e}, sup over |w|<=w_max/2 is {:.6e}, doubling ratio {:.6e}",
                profile.sup,
                profile.sup_within(0.5 * grid.w_max),
                ratio
            );
            let verdict = if ratio <= 1.0 + BOUNDED_RATIO_YES {
                Verdict::Yes
            } else if ratio >= 1.0 + BOUNDED_RATIO_NO {
                Verdict::No
            } else {
                Verdict::Inconclusive
            };
            Judgement::new(verdict, evidence)
        };
        let compact = match bounded.verdict {
            Verdict::No => Judgement::new(Verdict::No, "not bounded"),
            Verdict::Inconclusive => Judgement::new(Verdict::Inconclusive, "boundedness undecided"),
            Verdict::Yes => {
                let test = vanishes_at_infinity(&profile, opts.eps);
                let verdict = if test.vanishes { Verdict::Yes } else { Verdict::No };
                Judgement::new(
                    verdict,
                    format!(
                        "tail/sup={:.6e}, outer annulus maxima {:?}",
                        test.tail_ratio, test.outer_annuli
                    ),
                )
            }
        };
        let norm = if profile.unbounded {
            f64::INFINITY
        } else {
            profile.sup.powf(1.0 / q)
        };
        let ess = if profile.unbounded {
            f64::INFINITY
        } else {
            profile.tail_max.powf(1.0 / q)
        };
        (bounded, compact, norm, ess)
    } else {
        let s = p / (p - q);
        let samples = OuterSamples::compute(pair, q, &grid, &opts.berezin)?;
        let integral = samples.power_integral(s);
        let verdict = Verdict::from_integral(integral.verdict);
        let evidence = format!(
            "integral of B^{s:.6} is {:.6e}, outer decay rate {:.4}",
            integral.integral, integral.decay_rate
        );
        let norm = integral.integral.powf(1.0 / (s * q));
        let ess = if verdict == Verdict::Yes { 0.0 } else { norm };
        (
            Judgement::new(verdict, evidence.clone()),
            Judgement::new(verdict, evidence),
            norm,
            ess,
        )
    };

    let schatten = if hilbert_exponents(p, q) {
        match schatten_from_compact(compact.verdict, &opts.schatten_exponents) {
            Some(forced) => forced,
            None => {
                let samples = OuterSamples::compute(pair, 2.0, &grid, &opts.berezin)?;
                opts.schatten_exponents
                    .iter()
                    .map(|&t| {
                        let integral = samples.power_integral(0.5 * t);
                        SchattenJudgement {
                            p: t,
                            verdict: Verdict::from_integral(integral.verdict),
                            evidence: format!(
                                "integral of B^{:.4} is {:.6e}, outer decay rate {:.4}",
                                0.5 * t,
                                integral.integral,
                                integral.decay_rate
                            ),
                        }
                    })
                    .collect()
            }
        }
    } else {
        Vec::new()
    };

    Ok(Classification {
        source: Source::BerezinCriterion,
        p,
        q,
        bounded,
        compact,
        schatten,
        norm_estimate,
        essential_norm_estimate,
        spectral_norm: None,
    })
}

fn uniform(source: Source, p: f64, q: f64, verdict: Verdict, evidence: &str, exponents: &[f64]) -> Classification {
    Classification {
        source,
        p,
        q,
        bounded: Judgement::new(verdict, evidence),
        compact: Judgement::new(verdict, evidence),
        schatten: if hilbert_exponents(p, q) {
            exponents
                .iter()
                .map(|&t| SchattenJudgement {
                    p: t,
                    verdict,
                    evidence: evidence.into(),
                })
                .collect()
        } else {
            Vec::new()
        },
        norm_estimate: f64::NAN,
        essential_norm_estimate: f64::NAN,
        spectral_norm: None,
    }
}

fn yes_no(b: bool) -> Verdict {
    if b {
        Verdict::Yes
    } else {
        Verdict::No
    }
}

const UNIT_TOL: f64 = 1e-12;

/// Closed-form verdicts for the families with known characterisations;
/// `None` outside them.
///
/// * `V_g` (`ψ = id`): bounded iff `deg g ≤ 2`, compact iff `deg g ≤ 1` for
///   `p ≤ q`; for `p > q` bounded iff compact iff `g` is constant or linear with
///   `q > 2p/(p+2)`; `S_t` iff `g` is constant or linear with `t > 2`.
/// * `cC_ψ` with constant `c ≠ 0`: bounded iff `|a| < 1` or (`|a| = 1`, `b = 0`)
///   for `p ≤ q`, iff `|a| < 1` for `p > q`; compact and `S_t` iff `|a| < 1`.
/// * `V_{(g,βz)}`, `|β| < 1`, `p ≤ q`: bounded when `2|q₂|/α + |β|² < 1`, where
///   `q₂` is the quadratic exponent coefficient of `g`.
/// * `uC_ψ` on `F_α²`: `S_t` iff the explicit weighted integral of `|u|^t` is finite.
pub fn oracle_classify(
    pair: &SymbolPair,
    p: f64,
    q: f64,
    exponents: &[f64],
) -> Result<Option<Classification>, BerezinError> {
    let src = Source::ClosedFormOracle;
    let psi = pair.psi();
    let hilbert = hilbert_exponents(p, q);
    let zero = || uniform(src, p, q, Verdict::Yes, "zero operator", exponents);
    let schatten_if = |pred: &dyn Fn(f64) -> bool, evidence: &str| -> Vec<SchattenJudgement> {
        if !hilbert {
            return Vec::new();
        }
        exponents
            .iter()
            .map(|&t| SchattenJudgement {
                p: t,
                verdict: yes_no(pred(t)),
                evidence: evidence.into(),
            })
            .collect()
    };

    match &pair.kind {
        OperatorKind::VolterraComposition { g, .. } if psi.is_identity() => {
            let degree = match g {
                EntireSymbol::Polynomial(poly) => poly.degree().unwrap_or(0),
                EntireSymbol::ExpPoly { .. } => usize::MAX,
            };
            if degree == 0 {
                return Ok(Some(zero()));
            }
            let label = if degree == usize::MAX {
                "g is not a polynomial".to_string()
            } else {
                format!("deg g = {degree}")
            };
            let (bounded, compact) = if p <= q {
                (yes_no(degree <= 2), yes_no(degree <= 1))
            } else {
                let v = yes_no(degree == 1 && q > 2.0 * p / (p + 2.0));
                (v, v)
            };
            Ok(Some(Classification {
                source: src,
                p,
                q,
                bounded: Judgement::new(bounded, label.clone()),
                compact: Judgement::new(compact, label.clone()),
                schatten: schatten_if(&|t| degree == 1 && t > 2.0, &label),
                norm_estimate: f64::NAN,
                essential_norm_estimate: f64::NAN,
                spectral_norm: None,
            }))
        }
        OperatorKind::WeightedComposition { u, .. } if u.prefactor().degree().unwrap_or(0) == 0 && u.is_polynomial() => {
            if u.is_zero() {
                return Ok(Some(zero()));
            }
            let modulus = psi.a.norm();
            let inside = modulus < 1.0 - UNIT_TOL;
            let on_circle = (modulus - 1.0).abs() <= UNIT_TOL;
            let rotation = on_circle && psi.b.norm() <= UNIT_TOL;
            let bounded = if p <= q { inside || rotation } else { inside };
            let label = format!("|a| = {modulus:.6}, |b| = {:.6}", psi.b.norm());
            Ok(Some(Classification {
                source: src,
                p,
                q,
                bounded: Judgement::new(yes_no(bounded), label.clone()),
                compact: Judgement::new(yes_no(inside), label.clone()),
                schatten: schatten_if(&|_| inside, &label),
                norm_estimate: f64::NAN,
                essential_norm_estimate: f64::NAN,
                spectral_norm: None,
            }))
        }
        OperatorKind::VolterraComposition { g, .. } if psi.b.norm() == 0.0 && psi.a.norm() < 1.0 && p <= q => {
            if g.derivative().is_zero() {
                return Ok(Some(zero()));
            }
            let gamma = 2.0 * g.exponent_coeffs()[2].norm() / pair.alpha;
            let beta_sq = psi.a.norm_sqr();
            let label = format!("gamma = {gamma:.6}, |beta|^2 = {beta_sq:.6}");
            let bounded = if gamma + beta_sq < 1.0 {
                Verdict::Yes
            } else {
                Verdict::Inconclusive
            };
            Ok(Some(Classification {
                source: src,
                p,
                q,
                bounded: Judgement::new(bounded, label.clone()),
                compact: Judgement::new(Verdict::Inconclusive, "no closed form"),
                schatten: if hilbert {
                    exponents
                        .iter()
                        .map(|&t| SchattenJudgement {
                            p: t,
                            verdict: Verdict::Inconclusive,
                            evidence: "no closed form".into(),
                        })
                        .collect()
                } else {
                    Vec::new()
                },
                norm_estimate: f64::NAN,
                essential_norm_estimate: f64::NAN,
                spectral_norm: None,
            }))
        }
        OperatorKind::WeightedComposition { .. } if hilbert => {
            if psi.a.norm() >= 1.0 {
                return Ok(None);
            }
            let tol = Tolerance::default();
            let mut schatten = Vec::new();
            for &t in exponents {
                let integral = composition_schatten_integral(pair, t, &tol)?;
                schatten.push(SchattenJudgement {
                    p: t,
                    verdict: yes_no(integral.is_finite()),
                    evidence: format!("weighted integral of |u|^{t} is {integral:.6e}"),
                });
            }
            let any = schatten.iter().any(|s| s.verdict == Verdict::Yes);
            let (verdict, evidence) = if any {
                (Verdict::Yes, "in some Schatten class")
            } else {
                (Verdict::Inconclusive, "no Schatten class among the exponents")
            };
            Ok(Some(Classification {
                source: src,
                p,
                q,
                bounded: Judgement::new(verdict, evidence),
                compact: Judgement::new(verdict, evidence),
                schatten,
                norm_estimate: f64::NAN,
                essential_norm_estimate: f64::NAN,
                spectral_norm: None,
            }))
        }
        _ => Ok(None),
    }
}

/// Verdicts from the singular values of the `N × N` truncation compared with
/// its leading `N/2` block. Meaningful for `F_α² → F_α²`.
pub fn classify_spectral(pair: &SymbolPair, n: usize, exponents: &[f64]) -> Result<(Classification, SpectralSummary), OperatorError> {
    let op = build_matrix(pair, n)?;
    let summary = spectral_summary(&op, exponents);
    let src = Source::SpectralCriterion;
    if summary.op_norm == 0.0 {
        let mut c = uniform(src, 2.0, 2.0, Verdict::Yes, "zero matrix", exponents);
        c.norm_estimate = 0.0;
        c.essential_norm_estimate = 0.0;
        c.spectral_norm = Some(0.0);
        return Ok((c, summary));
    }
    let growth = summary.op_norm / summary.op_norm_half;
    let bounded = Judgement::new(
        if summary.op_norm_converged {
            Verdict::Yes
        } else if growth >= 1.05 {
            Verdict::No
        } else {
            Verdict::Inconclusive
        },
        format!("s_1(N)={:.6e}, s_1(N/2)={:.6e}", summary.op_norm, summary.op_norm_half),
    );
    let shrink = if summary.ess_norm_half > 0.0 {
        summary.ess_norm_proxy / summary.ess_norm_half
    } else {
        0.0
    };
    let compact = match bounded.verdict {
        Verdict::No => Judgement::new(Verdict::No, "not bounded"),
        Verdict::Inconclusive => Judgement::new(Verdict::Inconclusive, "boundedness undecided"),
        Verdict::Yes => Judgement::new(
            if shrink < SPECTRAL_COMPACT_RATIO || summary.ess_norm_proxy <= 1e-12 * summary.op_norm {
                Verdict::Yes
            } else if shrink >= SPECTRAL_NONCOMPACT_RATIO {
                Verdict::No
            } else {
                Verdict::Inconclusive
            },
            format!(
                "essential proxy {:.6e} at N, {:.6e} at N/2",
                summary.ess_norm_proxy, summary.ess_norm_half
            ),
        ),
    };
    let decay = singular_value_decay(&summary.singular_values);
    let schatten = schatten_from_compact(compact.verdict, exponents).unwrap_or_else(|| {
        summary
            .schatten
            .iter()
            .map(|s| {
                let order = s.p * decay;
                let verdict = if s.converged || order >= 1.1 {
                    Verdict::Yes
                } else if order <= 1.02 {
                    Verdict::No
                } else {
                    Verdict::Inconclusive
                };
                SchattenJudgement {
                    p: s.p,
                    verdict,
                    evidence: format!(
                        "partial norm {:.6e}, tail share {:.3e}, decay exponent {:.4}",
                        s.value, s.tail_share, decay
                    ),
                }
            })
            .collect()
    });
    let c = Classification {
        source: src,
        p: 2.0,
        q: 2.0,
        bounded,
        compact,
        schatten,
        norm_estimate: summary.op_norm,
        essential_norm_estimate: summary.ess_norm_proxy,
        spectral_norm: Some(summary.op_norm),
    };
    Ok((c, summary))
}

/// Exponent `β` of `s_k ≈ C k^{-β}` between `k = N/4` and `k = N/2`; `∞` when the
/// values underflow.
pub fn singular_value_decay(s: &[f64]) -> f64 {
    let n = s.len();
    let (i, j) = (n.div_ceil(4).max(1), n.div_ceil(2).max(2));
    let (a, b) = (s[i - 1], s[j - 1]);
    if b <= 1e-300 || a <= 0.0 {
        return f64::INFINITY;
    }
    (a / b).ln() / (j as f64 / i as f64).ln()
}

/// Boundedness from `sup_w ‖T k_w‖_q` over the grid, judged like the transform.
pub fn kernel_thesis_bounded(pair: &SymbolPair, q: f64, grid: &GridSpec) -> Result<Judgement, OperatorError> {
    let radii = grid.radii();
    let mut points = vec![Complex64::new(0.0, 0.0)];
    for &r in &radii {
        points.extend((0..grid.angles).map(|j| grid.angle(j) * r));
    }
    let values: Vec<f64> = points
        .par_iter()
        .map(|&w| kernel_image_norm(pair, w, q).map(|n| n.value()))
        .collect::<Result<_, _>>()?;
    let half = 0.5 * grid.w_max * (1.0 + 1e-12);
    let sup = values.iter().copied().fold(0.0, f64::max);
    let inner = points
        .iter()
        .zip(&values)
        .filter(|(w, _)| w.norm() <= half)
        .map(|(_, v)| *v)
        .fold(0.0, f64::max);
    let ratio = if sup == 0.0 {
        1.0
    } else {
        (sup / inner).powf(q)
    };
    let verdict = if !sup.is_finite() || ratio >= 1.0 + BOUNDED_RATIO_NO {
        Verdict::No
    } else if ratio <= 1.0 + BOUNDED_RATIO_YES {
        Verdict::Yes
    } else {
        Verdict::Inconclusive
    };
    Ok(Judgement::new(
        verdict,
        format!("sup kernel image norm {sup:.6e}, doubling ratio {ratio:.6e}"),
    ))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Disagreement {
    pub quantity: String,
    pub first: (Source, Verdict),
    pub second: (Source, Verdict),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PairReport {
    pub index: usize,
    pub pair: SymbolPair,
    pub berezin: Classification,
    pub oracle: Option<Classification>,
    pub spectral: Option<Classification>,
    pub agreements: usize,
    /// Transform against closed form.
    pub disagreements: Vec<Disagreement>,
    /// Truncated spectra against the transform.
    pub spectral_mismatches: Vec<Disagreement>,
    /// `s_1 / sup B^{1/2}`.
    #[serde(with = "serde_float::option")]
    pub norm_ratio: Option<f64>,
    /// Hilbert–Schmidt norm squared of the truncation over `(α/π)·∫`.
    #[serde(with = "serde_float::option")]
    pub hs_ratio: Option<f64>,
    pub lattice_violations: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConsistencyReport {
    pub p: f64,
    pub q: f64,
    pub n: usize,
    pub pairs: Vec<PairReport>,
    pub agreements: usize,
    pub disagreements: usize,
    pub spectral_mismatches: usize,
    pub lattice_violations: usize,
    #[serde(with = "serde_float::option")]
    pub norm_ratio_min: Option<f64>,
    #[serde(with = "serde_float::option")]
    pub norm_ratio_max: Option<f64>,
}

fn compare(a: &Classification, b: &Classification, agreements: &mut usize, out: &mut Vec<Disagreement>) {
    let mut check = |quantity: String, x: Verdict, y: Verdict| {
        if x.is_definite() && y.is_definite() {
            if x == y {
                *agreements += 1;
            } else {
                out.push(Disagreement {
                    quantity,
                    first: (a.source, x),
                    second: (b.source, y),
                });
            }
        }
    };
    check("bounded".into(), a.bounded.verdict, b.bounded.verdict);
    check("compact".into(), a.compact.verdict, b.compact.verdict);
    for s in &a.schatten {
        if let Some(v) = b.schatten_verdict(s.p) {
            check(format!("S_{}", s.p), s.verdict, v);
        }
    }
}

/// Classifies each pair by every applicable source and cross-tabulates.
pub fn consistency_report(
    family: &[SymbolPair],
    p: f64,
    q: f64,
    opts: &ClassifyOptions,
) -> Result<ConsistencyReport, ReportError> {
    let hilbert = hilbert_exponents(p, q);
    let pairs: Vec<PairReport> = family
        .par_iter()
        .enumerate()
        .map(|(index, pair)| -> Result<PairReport, ReportError> {
            let berezin = classify_berezin(pair, p, q, opts)?;
            let oracle = oracle_classify(pair, p, q, &opts.schatten_exponents)?;
            let spectral = if hilbert {
                Some(classify_spectral(pair, opts.truncation, &opts.schatten_exponents)?)
            } else {
                None
            };
            let mut agreements = 0;
            let mut disagreements = Vec::new();
            if let Some(o) = &oracle {
                compare(&berezin, o, &mut agreements, &mut disagreements);
            }
            let mut spectral_mismatches = Vec::new();
            let mut spectral_agreements = 0;
            let mut norm_ratio = None;
            let mut hs_ratio = None;
            if let Some((s, summary)) = &spectral {
                compare(&berezin, s, &mut spectral_agreements, &mut spectral_mismatches);
                let sup_sqrt = berezin.norm_estimate;
                if berezin.bounded.verdict == Verdict::Yes && sup_sqrt > 0.0 && summary.op_norm > 0.0 {
                    norm_ratio = Some(summary.op_norm / sup_sqrt);
                }
                let hs2 = summary.schatten(2.0);
                if hs2.is_some_and(|v| v.converged) {
                    let integral = hilbert_schmidt_integral(pair, &Tolerance::default())?;
                    if integral.is_finite() && integral > 0.0 {
                        let truncated = if pair.is_volterra() {
                            derivative_hs_norm_sq(&build_matrix(pair, opts.truncation)?)
                        } else {
                            summary.hs_norm_sq
                        };
                        hs_ratio = Some(truncated / (hs_normalization(pair.alpha) * integral));
                    }
                }
            }
            let mut lattice_violations = berezin.lattice_violations();
            for c in oracle.iter().chain(spectral.as_ref().map(|s| &s.0)) {
                lattice_violations.extend(c.lattice_violations());
            }
            Ok(PairReport {
                index,
                pair: pair.clone(),
                berezin,
                oracle,
                spectral: spectral.map(|s| s.0),
                agreements,
                disagreements,
                spectral_mismatches,
                norm_ratio,
                hs_ratio,
                lattice_violations,
            })
        })
        .collect::<Result<_, _>>()?;
    let ratios: Vec<f64> = pairs.iter().filter_map(|r| r.norm_ratio).collect();
    Ok(ConsistencyReport {
        p,
        q,
        n: opts.truncation,
        agreements: pairs.iter().map(|r| r.agreements).sum(),
        disagreements: pairs.iter().map(|r| r.disagreements.len()).sum(),
        spectral_mismatches: pairs.iter().map(|r| r.spectral_mismatches.len()).sum(),
        lattice_violations: pairs.iter().map(|r| r.lattice_violations.len()).sum(),
        norm_ratio_min: ratios.iter().copied().reduce(f64::min),
        norm_ratio_max: ratios.iter().copied().reduce(f64::max),
        pairs,
    })
}

/// `(α/π)`: the factor relating the Hilbert–Schmidt integral to the squared
/// Hilbert–Schmidt norm in `F_α²` (derivative-form norm for Volterra pairs).
pub fn hs_normalization(alpha: f64) -> f64 {
    alpha / PI
}

#[derive(Debug, thiserror::Error)]
pub enum ReportError {
    #[error(transparent)]
    Berezin(#[from] BerezinError),
    #[error(transparent)]
    Operator(#[from] OperatorError),
}

/// `count` pairs `V_g` with `ψ = id`, degree uniform in `0..=max_degree` and
/// coefficients uniform in the unit disk.
pub fn random_polynomial_family(seed: u64, count: usize, max_degree: usize, alpha: f64) -> Vec<SymbolPair> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count)
        .map(|_| {
            let degree = rng.gen_range(0..=max_degree);
            let coeffs: Vec<Complex64> = (0..=degree)
                .map(|_| {
                    let r = rng.gen::<f64>().sqrt();
                    let theta = rng.gen_range(0.0..2.0 * PI);
                    Complex64::from_polar(r, theta)
                })
                .collect();
            let g = EntireSymbol::polynomial(Polynomial::new(coeffs).expect("degree below cap"));
            SymbolPair::volterra(g, LinearMap::identity(), alpha).expect("alpha is valid")
        })
        .collect()
}
