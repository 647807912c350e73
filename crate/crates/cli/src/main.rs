//! `fockop`: config-driven batch runs of the Fock-space operator toolkit.

mod cache;
mod commands;
mod config;

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::Result;
use clap::Parser;

use cache::{write_atomic, Artifacts, Cache};
use config::ConfigError;

const EXIT_FAILURE: u8 = 1;
const EXIT_CONFIG: u8 = 2;
const DEFAULT_CACHE_DIR: &str = ".fockop-cache";

/// Run one computation described by a TOML config and write its JSON report.
#[derive(Debug, Parser)]
#[command(name = "fockop", version, about)]
struct Cli {
    /// TOML run configuration.
    #[arg(long, value_name = "PATH")]
    config: PathBuf,
    /// Report path; defaults to `output` in the config, then `<command>.json`.
    #[arg(long, value_name = "PATH")]
    out: Option<PathBuf>,
    /// Cache directory; defaults to `cache` in the config, then `.fockop-cache`.
    #[arg(long, value_name = "DIR")]
    cache: Option<PathBuf>,
    /// Seed for randomly drawn sweep families.
    #[arg(long, value_name = "U64")]
    seed: Option<u64>,
    /// Neither read nor write the cache.
    #[arg(long)]
    no_cache: bool,
}

fn sidecar_path(out: &Path, suffix: &str) -> PathBuf {
    let stem = out.file_stem().map(|s| s.to_string_lossy().into_owned()).unwrap_or_default();
    out.with_file_name(format!("{stem}.{suffix}.csv"))
}

fn run(cli: &Cli) -> Result<u8> {
    let cfg = config::load(&cli.config)?;
    let base = cli.config.parent().unwrap_or(Path::new("")).to_path_buf();
    let job = config::resolve(&cfg, cli.seed, &base)?;

    let out = cli
        .out
        .clone()
        .or_else(|| cfg.output.as_ref().map(|p| base.join(p)))
        .unwrap_or_else(|| PathBuf::from(format!("{}.json", job.command.name())));
    let cache = (!cli.no_cache).then(|| {
        Cache::new(
            cli.cache
                .clone()
                .or_else(|| cfg.cache.as_ref().map(|p| base.join(p)))
                .unwrap_or_else(|| PathBuf::from(DEFAULT_CACHE_DIR)),
        )
    });

    let key = cache::key(&job)?;
    let artifacts = match cache.as_ref().and_then(|c| c.get(&key)) {
        Some(hit) => {
            log::info!("cache hit {key}");
            hit
        }
        None => {
            log::info!("running {} (key {key})", job.command.name());
            let fresh: Artifacts = commands::execute(&job)?;
            if let Some(c) = &cache {
                c.put(&key, &fresh)?;
            }
            fresh
        }
    };

    if let Some(dir) = out.parent().filter(|d| !d.as_os_str().is_empty()) {
        std::fs::create_dir_all(dir)?;
    }
    write_atomic(&out, artifacts.report.as_bytes())?;
    log::info!("wrote {}", out.display());
    if let Some(table) = &artifacts.sidecar {
        let path = sidecar_path(&out, commands::sidecar_suffix(job.command));
        write_atomic(&path, table.as_bytes())?;
        log::info!("wrote {}", path.display());
    }
    Ok(artifacts.exit_code)
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("info")).init();
    let cli = Cli::parse();
    match run(&cli) {
        Ok(code) => ExitCode::from(code),
        Err(e) if e.is::<ConfigError>() => {
            log::error!("config error: {e}");
            ExitCode::from(EXIT_CONFIG)
        }
        Err(e) => {
            log::error!("{e:#}");
            ExitCode::from(EXIT_FAILURE)
        }
    }
}
