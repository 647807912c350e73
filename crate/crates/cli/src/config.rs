//! TOML run configuration and its validation into a [`Job`].

use std::fs;
use std::path::{Path, PathBuf};

use fockop::criteria::random_polynomial_family;
use fockop::operator::MAX_TRUNCATION;
use fockop::{ClassifyOptions, EntireSymbol, GridSpec, LinearMap, Polynomial, SymbolPair, Tolerance};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use thiserror::Error;

pub const DEFAULT_SEED: u64 = 20_240_601;
const DEFAULT_FAMILY_SIZE: usize = 50;
const DEFAULT_MAX_DEGREE: usize = 5;

#[derive(Debug, Error)]
#[error("{0}")]
pub struct ConfigError(pub String);

fn invalid(msg: impl Into<String>) -> ConfigError {
    ConfigError(msg.into())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Command {
    Berezin,
    Norm,
    Classify,
    Schatten,
    Sweep,
    Crosscheck,
}

impl Command {
    pub fn name(self) -> &'static str {
        match self {
            Self::Berezin => "berezin",
            Self::Norm => "norm",
            Self::Classify => "classify",
            Self::Schatten => "schatten",
            Self::Sweep => "sweep",
            Self::Crosscheck => "crosscheck",
        }
    }
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub command: Command,
    #[serde(default = "two")]
    pub p: f64,
    #[serde(default = "two")]
    pub q: f64,
    #[serde(default = "one")]
    pub alpha: f64,
    pub pair: Option<PairSpec>,
    #[serde(default)]
    pub grid: GridOverride,
    #[serde(default)]
    pub tolerance: ToleranceOverride,
    pub truncation: Option<usize>,
    pub eps: Option<f64>,
    pub exponents: Option<Vec<f64>>,
    pub sweep: Option<SweepSpec>,
    pub seed: Option<u64>,
    pub output: Option<PathBuf>,
    pub cache: Option<PathBuf>,
}

fn one() -> f64 {
    1.0
}

fn two() -> f64 {
    2.0
}

/// A real number or an `[re, im]` pair.
#[derive(Debug, Clone, Copy, Deserialize)]
#[serde(untagged)]
pub enum Coefficient {
    Real(f64),
    Complex([f64; 2]),
}

impl From<Coefficient> for Complex64 {
    fn from(c: Coefficient) -> Self {
        match c {
            Coefficient::Real(x) => Complex64::new(x, 0.0),
            Coefficient::Complex([re, im]) => Complex64::new(re, im),
        }
    }
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExpPolySpec {
    pub prefactor: Vec<Coefficient>,
    pub exponent: Vec<Coefficient>,
}

/// Coefficients lowest degree first, or `{prefactor, exponent}` for `P·e^Q`.
#[derive(Debug, Clone, Deserialize)]
#[serde(untagged)]
pub enum SymbolSpec {
    Polynomial(Vec<Coefficient>),
    ExpPoly(ExpPolySpec),
}

#[derive(Debug, Clone, Copy, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PsiSpec {
    pub a: Coefficient,
    pub b: Coefficient,
}

/// Exactly one of `g` (Volterra-type) or `u` (weighted composition).
#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PairSpec {
    pub g: Option<SymbolSpec>,
    pub u: Option<SymbolSpec>,
    pub psi: Option<PsiSpec>,
}

#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GridOverride {
    pub r_min: Option<f64>,
    pub w_max: Option<f64>,
    pub radii_per_octave: Option<usize>,
    pub angles: Option<usize>,
}

#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ToleranceOverride {
    pub rel_tol: Option<f64>,
    pub abs_tol: Option<f64>,
    pub max_refinements: Option<u32>,
    pub radial_nodes: Option<usize>,
    pub angular_nodes: Option<usize>,
}

/// Either a family file with `[[pairs]]` entries or a seeded random draw of
/// Volterra-type pairs with `ψ = id`.
#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweepSpec {
    pub family_file: Option<PathBuf>,
    pub count: Option<usize>,
    pub max_degree: Option<usize>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct FamilyFile {
    pairs: Vec<PairSpec>,
}

/// A validated computation. Its JSON form is the cache key.
#[derive(Debug, Clone, Serialize)]
pub struct Job {
    pub version: &'static str,
    pub command: Command,
    pub p: f64,
    pub q: f64,
    pub alpha: f64,
    pub pair: Option<SymbolPair>,
    pub family: Vec<SymbolPair>,
    pub seed: Option<u64>,
    pub options: ClassifyOptions,
}

impl Job {
    pub fn pair(&self) -> &SymbolPair {
        self.pair.as_ref().expect("validated")
    }

    pub fn grid(&self) -> GridSpec {
        self.options.grid.expect("validated")
    }
}

pub fn load(path: &Path) -> Result<RunConfig, ConfigError> {
    let text = fs::read_to_string(path).map_err(|e| invalid(format!("cannot read {}: {e}", path.display())))?;
    toml::from_str(&text).map_err(|e| invalid(format!("{}: {e}", path.display())))
}

fn positive(name: &str, x: f64) -> Result<f64, ConfigError> {
    if x.is_finite() && x > 0.0 {
        Ok(x)
    } else {
        Err(invalid(format!("{name} must be positive and finite, got {x}")))
    }
}

fn polynomial(coeffs: &[Coefficient]) -> Result<Polynomial, ConfigError> {
    Polynomial::new(coeffs.iter().map(|&c| c.into()).collect()).map_err(|e| invalid(e.to_string()))
}

fn symbol(spec: &SymbolSpec) -> Result<EntireSymbol, ConfigError> {
    match spec {
        SymbolSpec::Polynomial(c) => Ok(EntireSymbol::polynomial(polynomial(c)?)),
        SymbolSpec::ExpPoly(e) => {
            EntireSymbol::exp_poly(polynomial(&e.prefactor)?, polynomial(&e.exponent)?).map_err(|e| invalid(e.to_string()))
        }
    }
}

fn build_pair(spec: &PairSpec, alpha: f64) -> Result<SymbolPair, ConfigError> {
    let psi = spec
        .psi
        .map_or_else(LinearMap::identity, |s| LinearMap::new(s.a.into(), s.b.into()));
    let pair = match (&spec.g, &spec.u) {
        (Some(g), None) => SymbolPair::volterra(symbol(g)?, psi, alpha),
        (None, Some(u)) => SymbolPair::weighted(symbol(u)?, psi, alpha),
        _ => return Err(invalid("pair needs exactly one of `g` or `u`")),
    };
    pair.map_err(|e| invalid(e.to_string()))
}

fn family(spec: &SweepSpec, alpha: f64, seed: u64, base: &Path) -> Result<(Vec<SymbolPair>, Option<u64>), ConfigError> {
    if let Some(file) = &spec.family_file {
        if spec.count.is_some() || spec.max_degree.is_some() {
            return Err(invalid("sweep takes either `family_file` or `count`/`max_degree`"));
        }
        let path = base.join(file);
        let text = fs::read_to_string(&path).map_err(|e| invalid(format!("cannot read {}: {e}", path.display())))?;
        let parsed: FamilyFile = toml::from_str(&text).map_err(|e| invalid(format!("{}: {e}", path.display())))?;
        let pairs = parsed.pairs.iter().map(|p| build_pair(p, alpha)).collect::<Result<_, _>>()?;
        Ok((pairs, None))
    } else {
        let count = spec.count.unwrap_or(DEFAULT_FAMILY_SIZE);
        let degree = spec.max_degree.unwrap_or(DEFAULT_MAX_DEGREE);
        Ok((random_polynomial_family(seed, count, degree, alpha), Some(seed)))
    }
}

/// Validates `config`; relative family paths resolve against `base`.
pub fn resolve(config: &RunConfig, seed_override: Option<u64>, base: &Path) -> Result<Job, ConfigError> {
    let p = positive("p", config.p)?;
    let q = positive("q", config.q)?;
    let alpha = positive("alpha", config.alpha)?;

    let mut options = ClassifyOptions::default();
    let defaults = GridSpec::for_alpha(alpha);
    let g = &config.grid;
    let grid = GridSpec {
        r_min: g.r_min.unwrap_or(defaults.r_min),
        w_max: g.w_max.unwrap_or(defaults.w_max),
        radii_per_octave: g.radii_per_octave.unwrap_or(defaults.radii_per_octave),
        angles: g.angles.unwrap_or(defaults.angles),
    };
    grid.validate(alpha).map_err(|e| invalid(e.to_string()))?;
    options.grid = Some(grid);

    let t = &config.tolerance;
    let base_tol = options.berezin.tol;
    options.berezin.tol = Tolerance::new(
        t.rel_tol.unwrap_or(base_tol.rel_tol),
        t.abs_tol.unwrap_or(base_tol.abs_tol),
        t.max_refinements.unwrap_or(base_tol.max_refinements),
    )
    .map_err(|e| invalid(e.to_string()))?;
    if let Some(n) = t.radial_nodes {
        options.berezin.radial_nodes = n;
    }
    if let Some(n) = t.angular_nodes {
        options.berezin.angular_nodes = n;
    }
    if options.berezin.radial_nodes < 2 || options.berezin.angular_nodes < 2 {
        return Err(invalid("quadrature node counts must be at least 2"));
    }

    if let Some(n) = config.truncation {
        if !(2..=MAX_TRUNCATION).contains(&n) {
            return Err(invalid(format!("truncation must lie in 2..={MAX_TRUNCATION}, got {n}")));
        }
        options.truncation = n;
    }
    if let Some(eps) = config.eps {
        if !(eps > 0.0 && eps < 1.0) {
            return Err(invalid(format!("eps must lie in (0, 1), got {eps}")));
        }
        options.eps = eps;
    }
    if let Some(exps) = &config.exponents {
        if exps.is_empty() {
            return Err(invalid("exponents must not be empty"));
        }
        for &x in exps {
            positive("exponent", x)?;
        }
        options.schatten_exponents = exps.clone();
    }

    let pair = config.pair.as_ref().map(|s| build_pair(s, alpha)).transpose()?;
    let (family, seed) = match config.command {
        Command::Sweep => {
            if pair.is_some() {
                return Err(invalid("sweep takes a `[sweep]` family, not a `[pair]`"));
            }
            let seed = seed_override.or(config.seed).unwrap_or(DEFAULT_SEED);
            family(&config.sweep.clone().unwrap_or_default(), alpha, seed, base)?
        }
        other => {
            if config.sweep.is_some() {
                return Err(invalid(format!("`[sweep]` is only valid with command = \"sweep\", not {:?}", other.name())));
            }
            match &pair {
                None => return Err(invalid(format!("command {:?} needs a `[pair]`", other.name()))),
                Some(p) if other == Command::Crosscheck && !p.is_volterra() => {
                    return Err(invalid("crosscheck needs a Volterra-type pair (`g`)"));
                }
                Some(_) => {}
            }
            (Vec::new(), None)
        }
    };

    Ok(Job {
        version: env!("CARGO_PKG_VERSION"),
        command: config.command,
        p,
        q,
        alpha,
        pair,
        family,
        seed,
        options,
    })
}
