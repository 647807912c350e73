//! Reference values computed independently of the library: closed forms, a
//! one-dimensional double-exponential quadrature, and constants evaluated once
//! at high precision and frozen below.

use std::f64::consts::PI;

use approx::assert_relative_eq;
use fockop::berezin::{
    berezin_at, berezin_profile, composition_schatten_integral, hilbert_schmidt_integral, lp_integral,
    vanishes_at_infinity, BerezinOptions, GridSpec, VANISHING_EPS,
};
use fockop::criteria::{classify_berezin, oracle_classify, ClassifyOptions, Verdict};
use fockop::fock::{derivative_functional, FockParams};
use fockop::operator::{build_matrix, derivative_hs_norm_sq, kernel_image_norm, spectral_summary};
use fockop::quadrature::Tolerance;
use fockop::{EntireSymbol, LinearMap, Polynomial, SymbolPair};
use num_complex::Complex64;

/// `∫_0^∞ r e^{-r²} (1+r)^{-2} dr` to 20 digits.
const RADIAL_ONE: f64 = 0.167_320_198_402_171_445_55;
/// `∫_0^∞ r e^{-0.75 r²} (1+r)^{-2} dr` to 20 digits.
const RADIAL_THREE_QUARTERS: f64 = 0.199_754_022_353_779_082_17;
/// `Σ_n 0.25^n/(n+1) = 4 ln(4/3)`: the squared singular values of `V_{(z, z/2)}`.
const HALF_DILATION_SHIFT_HS: f64 = 1.150_728_289_807_123_709_76;

/// `∫_0^∞ f` by the substitution `r = t/(1-t)` and double-exponential quadrature.
fn half_line(f: impl Fn(f64) -> f64) -> f64 {
    let g = |t: f64| {
        if t >= 1.0 {
            return 0.0;
        }
        let r = t / (1.0 - t);
        f(r) / ((1.0 - t) * (1.0 - t))
    };
    quadrature::double_exponential::integrate(g, 0.0, 1.0, 1e-14).integral
}

fn poly(coeffs: &[f64]) -> EntireSymbol {
    EntireSymbol::polynomial(Polynomial::real(coeffs).unwrap())
}

fn weighted_one(psi: LinearMap) -> SymbolPair {
    SymbolPair::weighted(poly(&[1.0]), psi, 1.0).unwrap()
}

#[test]
fn frozen_radial_constants_match_one_dimensional_quadrature() {
    let one = half_line(|r| r * (-r * r).exp() / (1.0 + r).powi(2));
    let three_quarters = half_line(|r| r * (-0.75 * r * r).exp() / (1.0 + r).powi(2));
    assert_relative_eq!(one, RADIAL_ONE, max_relative = 1e-12);
    assert_relative_eq!(three_quarters, RADIAL_THREE_QUARTERS, max_relative = 1e-12);
}

#[test]
fn volterra_transform_at_origin() {
    let pair = SymbolPair::volterra(poly(&[0.0, 1.0]), LinearMap::identity(), 1.0).unwrap();
    let b = berezin_at(&pair, 2.0, Complex64::new(0.0, 0.0)).unwrap();
    assert_relative_eq!(b.value, 2.0 * PI * RADIAL_ONE, max_relative = 1e-9);
}

#[test]
fn kernel_image_at_origin_is_the_derivative_functional_of_z() {
    let pair = SymbolPair::volterra(poly(&[0.0, 1.0]), LinearMap::identity(), 1.0).unwrap();
    let norm = kernel_image_norm(&pair, Complex64::new(0.0, 0.0), 2.0).unwrap().value();
    let functional = derivative_functional(&poly(&[0.0, 1.0]), &FockParams::new(2.0, 1.0).unwrap())
        .unwrap()
        .value();
    assert_relative_eq!(norm, (2.0 * RADIAL_ONE).sqrt(), max_relative = 1e-9);
    assert_relative_eq!(norm, functional, max_relative = 1e-12);
}

#[test]
fn gaussian_profile_of_half_dilation() {
    let pair = weighted_one(LinearMap::dilation(0.5));
    let grid = GridSpec {
        r_min: 0.25,
        w_max: 8.0,
        radii_per_octave: 8,
        angles: 16,
    };
    let profile = berezin_profile(&pair, 2.0, &grid, &BerezinOptions::default()).unwrap();
    // completing the square: B(w) = π e^{-(1 - 1/4)|w|²}
    for (w, v) in profile.nodes() {
        assert_relative_eq!(v, PI * (-0.75 * w.norm_sqr()).exp(), max_relative = 1e-8);
    }
    assert!(profile.annulus_maxima.windows(2).all(|m| m[1] < m[0]));
    assert!(profile.tail_max < 1e-3 * profile.sup);
    assert!(vanishes_at_infinity(&profile, VANISHING_EPS).vanishes);
}

#[test]
fn constant_profile_does_not_vanish() {
    let pair = weighted_one(LinearMap::identity());
    let profile = berezin_profile(&pair, 2.0, &GridSpec::for_alpha(1.0), &BerezinOptions::grid()).unwrap();
    assert_relative_eq!(profile.sup, PI, max_relative = 1e-8);
    assert_relative_eq!(profile.tail_max, PI, max_relative = 1e-8);
    assert!(!vanishes_at_infinity(&profile, VANISHING_EPS).vanishes);
}

#[test]
fn cubic_profile_grows_with_the_grid() {
    let pair = SymbolPair::volterra(poly(&[0.0, 0.0, 0.0, 1.0]), LinearMap::identity(), 1.0).unwrap();
    let sups: Vec<f64> = [8.0, 16.0, 32.0]
        .iter()
        .map(|&w_max| {
            let grid = GridSpec {
                r_min: 0.25,
                w_max,
                radii_per_octave: 2,
                angles: 16,
            };
            let profile = berezin_profile(&pair, 2.0, &grid, &BerezinOptions::grid()).unwrap();
            assert!(!profile.unbounded);
            assert!(profile.growth_ratio() > 2.0);
            profile.sup
        })
        .collect();
    // |g′|²/(1+|w|)² ≍ |w|², so the sup roughly quadruples per doubling
    assert!(sups[1] > 3.0 * sups[0] && sups[2] > 3.0 * sups[1]);
}

#[test]
fn quadratic_profile_is_bounded_but_not_vanishing() {
    let pair = SymbolPair::volterra(poly(&[1.0, 0.0, 1.0]), LinearMap::identity(), 1.0).unwrap();
    let profile = berezin_profile(&pair, 2.0, &GridSpec::for_alpha(1.0), &BerezinOptions::grid()).unwrap();
    assert!(!vanishes_at_infinity(&profile, VANISHING_EPS).vanishes);
    assert!(profile.doubling_ratio() < 1.0 + 1e-6);
}

#[test]
fn lp_integral_of_gaussian_profile() {
    let pair = weighted_one(LinearMap::dilation(0.5));
    let grid = GridSpec::for_alpha(1.0);
    let lp = lp_integral(&pair, 2.0, 2.0, &grid, &BerezinOptions::grid()).unwrap();
    // ∫ π² e^{-1.5|w|²} dm = π³/1.5
    assert_relative_eq!(lp.integral.integral, PI.powi(3) / 1.5, max_relative = 1e-7);
    assert_relative_eq!(lp.value, (PI.powi(3) / 1.5).powf(0.25), max_relative = 1e-7);
    let constant = SymbolPair::volterra(poly(&[2.0]), LinearMap::identity(), 1.0).unwrap();
    assert_eq!(lp_integral(&constant, 2.0, 2.0, &grid, &BerezinOptions::grid()).unwrap().value, 0.0);
}

#[test]
fn hilbert_schmidt_integral_of_dilations() {
    for a in [0.1, 0.5, 0.8] {
        let v = hilbert_schmidt_integral(&weighted_one(LinearMap::dilation(a)), &Tolerance::default()).unwrap();
        assert_relative_eq!(v, PI / (1.0 - a * a), max_relative = 1e-10);
    }
}

#[test]
fn hilbert_schmidt_integral_of_dilated_shift() {
    let pair = SymbolPair::volterra(poly(&[0.0, 1.0]), LinearMap::dilation(0.5), 1.0).unwrap();
    let integral = hilbert_schmidt_integral(&pair, &Tolerance::default()).unwrap();
    assert_relative_eq!(integral, 2.0 * PI * RADIAL_THREE_QUARTERS, max_relative = 1e-9);
    // exact identity in the derivative-form norm
    let op = build_matrix(&pair, 128).unwrap();
    assert_relative_eq!(derivative_hs_norm_sq(&op), integral / PI, max_relative = 1e-9);
    // the F_α² Hilbert–Schmidt norm is only comparable
    let summary = spectral_summary(&op, &[2.0]);
    assert_relative_eq!(summary.hs_norm_sq, HALF_DILATION_SHIFT_HS, max_relative = 1e-12);
}

#[test]
fn composition_schatten_integral_closed_form() {
    // |u| ≡ 1, ψ = az: ∫ e^{(p/2)(|a|²-1)|z|²} dm = 2π / (p(1-|a|²))
    for (a, p) in [(0.5, 1.0), (0.3, 2.0), (0.8, 4.0)] {
        let v = composition_schatten_integral(&weighted_one(LinearMap::dilation(a)), p, &Tolerance::default()).unwrap();
        assert_relative_eq!(v, 2.0 * PI / (p * (1.0 - a * a)), max_relative = 1e-10);
    }
    let rotation = weighted_one(LinearMap::identity());
    assert_eq!(
        composition_schatten_integral(&rotation, 2.0, &Tolerance::default()).unwrap(),
        f64::INFINITY
    );
}

#[test]
fn closed_form_verdicts_for_documented_pairs() {
    let opts = ClassifyOptions::default();
    let quadratic = SymbolPair::volterra(poly(&[1.0, 3.0, 1.0]), LinearMap::identity(), 1.0).unwrap();
    let c = classify_berezin(&quadratic, 2.0, 2.0, &opts).unwrap();
    assert_eq!((c.bounded.verdict, c.compact.verdict), (Verdict::Yes, Verdict::No));

    let cubic = SymbolPair::volterra(poly(&[0.0, 0.0, 0.0, 1.0]), LinearMap::identity(), 1.0).unwrap();
    for p in [0.5, 1.0, 2.0] {
        assert_eq!(classify_berezin(&cubic, p, 2.0, &opts).unwrap().bounded.verdict, Verdict::No);
    }

    let dilation = weighted_one(LinearMap::dilation(0.5));
    let c = classify_berezin(&dilation, 4.0, 2.0, &opts).unwrap();
    assert_eq!((c.bounded.verdict, c.compact.verdict), (Verdict::Yes, Verdict::Yes));

    let linear = SymbolPair::volterra(poly(&[2.0, 5.0]), LinearMap::identity(), 1.0).unwrap();
    let c = classify_berezin(&linear, 2.0, 2.0, &opts).unwrap();
    let o = oracle_classify(&linear, 2.0, 2.0, &opts.schatten_exponents).unwrap().unwrap();
    assert_eq!(c.compact.verdict, Verdict::Yes);
    for t in [2.0, 3.0] {
        assert_eq!(c.schatten_verdict(t), o.schatten_verdict(t));
    }
    assert_eq!(o.schatten_verdict(2.0), Some(Verdict::No));
    assert_eq!(o.schatten_verdict(3.0), Some(Verdict::Yes));
}

#[test]
fn gaussian_symbol_under_contraction_is_bounded() {
    let g = EntireSymbol::exp_poly(poly_coeffs(&[1.0]), poly_coeffs(&[0.0, 0.0, 0.3])).unwrap();
    let pair = SymbolPair::volterra(g, LinearMap::dilation(0.5), 1.0).unwrap();
    let c = classify_berezin(&pair, 2.0, 2.0, &ClassifyOptions::default()).unwrap();
    let o = oracle_classify(&pair, 2.0, 2.0, &[2.0]).unwrap().unwrap();
    assert_eq!(o.bounded.verdict, Verdict::Yes);
    assert_eq!(c.bounded.verdict, Verdict::Yes);
}

fn poly_coeffs(coeffs: &[f64]) -> Polynomial {
    Polynomial::real(coeffs).unwrap()
}

#[test]
fn dilation_family_spectra() {
    for k in 1..=9 {
        let a = k as f64 / 10.0;
        let pair = weighted_one(LinearMap::dilation(a));
        let summary = spectral_summary(&build_matrix(&pair, 64).unwrap(), &[0.5, 1.0, 2.0]);
        for (n, s) in summary.singular_values.iter().enumerate() {
            let expected = a.powi(n as i32);
            assert!((s - expected).abs() <= 1e-12 * expected.max(1e-300) + 1e-300, "a={a} n={n}");
        }
        let o = oracle_classify(&pair, 2.0, 2.0, &[0.5, 1.0, 2.0]).unwrap().unwrap();
        assert!(o.schatten.iter().all(|s| s.verdict == Verdict::Yes));
    }
}
