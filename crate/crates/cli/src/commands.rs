//! One function per command, each producing the artifacts it writes.

use anyhow::Result;
use fockop::berezin::VanishingTest;
use fockop::operator::toeplitz_crosscheck;
use fockop::serde_float;
use fockop::{
    berezin_profile, classify_berezin, classify_spectral, consistency_report, fock_norm, oracle_classify,
    vanishes_at_infinity, Classification, ConsistencyReport, FockParams, GridSpec, NormValue, SpectralSummary,
    SymbolPair, Verdict,
};
use num_complex::Complex64;
use serde::Serialize;

use crate::cache::Artifacts;
use crate::config::{Command, Job};

pub const SCHEMA: &str = "v1";

pub const EXIT_OK: u8 = 0;
pub const EXIT_INCONCLUSIVE: u8 = 3;
pub const EXIT_DISAGREEMENT: u8 = 4;

#[derive(Serialize)]
struct Envelope<'a, T: Serialize> {
    schema: &'static str,
    command: &'static str,
    #[serde(flatten)]
    body: &'a T,
}

fn render<T: Serialize>(command: Command, body: &T) -> Result<String> {
    let mut s = serde_json::to_string_pretty(&Envelope {
        schema: SCHEMA,
        command: command.name(),
        body,
    })?;
    s.push('\n');
    Ok(s)
}

fn csv(write: impl FnOnce(&mut Vec<u8>) -> std::io::Result<()>) -> Result<String> {
    let mut buf = Vec::new();
    write(&mut buf)?;
    Ok(String::from_utf8(buf)?)
}

fn any_inconclusive(c: &Classification) -> bool {
    c.bounded.verdict == Verdict::Inconclusive
        || c.compact.verdict == Verdict::Inconclusive
        || c.schatten.iter().any(|s| s.verdict == Verdict::Inconclusive)
}

#[derive(Serialize)]
struct BerezinReport<'a> {
    pair: &'a SymbolPair,
    p: f64,
    grid: GridSpec,
    nodes: usize,
    #[serde(with = "serde_float")]
    sup: f64,
    argmax: Complex64,
    #[serde(with = "serde_float")]
    doubling_ratio: f64,
    #[serde(with = "serde_float")]
    tail_max: f64,
    unbounded: bool,
    unconverged: usize,
    #[serde(with = "serde_float")]
    max_rel_error: f64,
    vanishing: VanishingTest,
}

fn berezin(job: &Job) -> Result<Artifacts> {
    let pair = job.pair();
    let grid = job.grid();
    let profile = berezin_profile(pair, job.p, &grid, &job.options.berezin)?;
    let report = BerezinReport {
        pair,
        p: job.p,
        grid,
        nodes: profile.nodes().count(),
        sup: profile.sup,
        argmax: profile.argmax,
        doubling_ratio: profile.doubling_ratio(),
        tail_max: profile.tail_max,
        unbounded: profile.unbounded,
        unconverged: profile.unconverged,
        max_rel_error: profile.max_rel_error,
        vanishing: vanishes_at_infinity(&profile, job.options.eps),
    };
    Ok(Artifacts {
        exit_code: EXIT_OK,
        report: render(job.command, &report)?,
        sidecar: Some(csv(|b| profile.write_csv(b))?),
    })
}

#[derive(Serialize)]
struct NormReport<'a> {
    pair: &'a SymbolPair,
    p: f64,
    alpha: f64,
    norm: NormValue,
}

fn norm(job: &Job) -> Result<Artifacts> {
    let pair = job.pair();
    let value = fock_norm(pair.symbol(), &FockParams::new(job.p, job.alpha)?)?;
    let report = NormReport {
        pair,
        p: job.p,
        alpha: job.alpha,
        norm: value,
    };
    Ok(Artifacts {
        exit_code: EXIT_OK,
        report: render(job.command, &report)?,
        sidecar: None,
    })
}

#[derive(Serialize)]
struct ClassifyReport<'a> {
    pair: &'a SymbolPair,
    #[serde(flatten)]
    classification: &'a Classification,
    oracle: Option<Classification>,
}

fn classify(job: &Job) -> Result<Artifacts> {
    let pair = job.pair();
    let classification = classify_berezin(pair, job.p, job.q, &job.options)?;
    let oracle = oracle_classify(pair, job.p, job.q, &job.options.schatten_exponents)?;
    let exit_code = if any_inconclusive(&classification) {
        EXIT_INCONCLUSIVE
    } else {
        EXIT_OK
    };
    let report = ClassifyReport {
        pair,
        classification: &classification,
        oracle,
    };
    Ok(Artifacts {
        exit_code,
        report: render(job.command, &report)?,
        sidecar: None,
    })
}

#[derive(Serialize)]
struct SchattenReport<'a> {
    pair: &'a SymbolPair,
    summary: &'a SpectralSummary,
    classification: &'a Classification,
}

fn schatten(job: &Job) -> Result<Artifacts> {
    let pair = job.pair();
    let (classification, summary) = classify_spectral(pair, job.options.truncation, &job.options.schatten_exponents)?;
    let exit_code = if any_inconclusive(&classification) {
        EXIT_INCONCLUSIVE
    } else {
        EXIT_OK
    };
    let report = SchattenReport {
        pair,
        summary: &summary,
        classification: &classification,
    };
    Ok(Artifacts {
        exit_code,
        report: render(job.command, &report)?,
        sidecar: Some(csv(|b| summary.write_csv(b))?),
    })
}

#[derive(Serialize)]
struct SweepReport<'a> {
    seed: Option<u64>,
    family_size: usize,
    #[serde(flatten)]
    report: &'a ConsistencyReport,
}

fn sweep(job: &Job) -> Result<Artifacts> {
    let report = consistency_report(&job.family, job.p, job.q, &job.options)?;
    log::info!(
        "sweep: {} pairs, {} agreements, {} disagreements, {} spectral mismatches, {} lattice violations",
        job.family.len(),
        report.agreements,
        report.disagreements,
        report.spectral_mismatches,
        report.lattice_violations
    );
    let exit_code = if report.disagreements > 0 {
        EXIT_DISAGREEMENT
    } else {
        EXIT_OK
    };
    let body = SweepReport {
        seed: job.seed,
        family_size: job.family.len(),
        report: &report,
    };
    Ok(Artifacts {
        exit_code,
        report: render(job.command, &body)?,
        sidecar: None,
    })
}

#[derive(Serialize)]
struct CrosscheckReport<'a> {
    pair: &'a SymbolPair,
    n: usize,
    /// Largest entrywise gap between the two Gram matrices on the leading `n/2` block.
    max_deviation: f64,
}

fn crosscheck(job: &Job) -> Result<Artifacts> {
    let pair = job.pair();
    let n = job.options.truncation;
    let report = CrosscheckReport {
        pair,
        n,
        max_deviation: toeplitz_crosscheck(pair, n)?,
    };
    Ok(Artifacts {
        exit_code: EXIT_OK,
        report: render(job.command, &report)?,
        sidecar: None,
    })
}

pub fn execute(job: &Job) -> Result<Artifacts> {
    match job.command {
        Command::Berezin => berezin(job),
        Command::Norm => norm(job),
        Command::Classify => classify(job),
        Command::Schatten => schatten(job),
        Command::Sweep => sweep(job),
        Command::Crosscheck => crosscheck(job),
    }
}

/// File-name suffix of the CSV written next to the JSON report.
pub fn sidecar_suffix(command: Command) -> &'static str {
    match command {
        Command::Berezin => "profile",
        Command::Schatten => "singular_values",
        _ => "table",
    }
}
