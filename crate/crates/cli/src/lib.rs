//! Batch scenario runner for `ringopo-core`.
//!
//! `ringopo <subcommand> --config run.toml` reads a TOML run configuration,
//! executes one computation and writes CSV/JSON artifacts plus a manifest
//! into the output directory.

pub mod commands;
pub mod config;
pub mod error;
pub mod output;

use std::ffi::OsString;
use std::path::{Path, PathBuf};
use std::time::Instant;

use clap::Parser;

pub use commands::Subcommand;
pub use config::{parse_config, parse_config_str, RunConfig};
pub use error::CliError;

use output::{manifest_name, sha256_hex, OutputDir, RunManifest};

#[derive(Debug, Parser)]
#[command(name = "ringopo", version, about = "Ring-cavity quantum optics scenario runner")]
pub struct Cli {
    /// Computation to run.
    #[arg(value_enum)]
    pub subcommand: Subcommand,
    /// TOML run configuration.
    #[arg(long)]
    pub config: PathBuf,
    /// Output directory (overrides `output.dir`).
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Random seed for stochastic subcommands (overrides `run.seed`).
    #[arg(long)]
    pub seed: Option<u64>,
    /// Maximum perturbative order (overrides `smatrix.order_max`).
    #[arg(long)]
    pub order: Option<usize>,
    /// Fock cutoffs `n1 n2` (overrides `[cutoff]`).
    #[arg(long, num_args = 2, value_names = ["N1", "N2"])]
    pub cutoff: Option<Vec<usize>>,
}

/// What a successful run produced.
#[derive(Debug, Clone)]
pub struct RunReport {
    pub out_dir: PathBuf,
    pub outputs: Vec<String>,
    pub manifest: String,
}

/// Caps rayon's global pool from `RINGOPO_THREADS`, if set.
pub fn configure_threads() -> Result<(), CliError> {
    let Ok(v) = std::env::var("RINGOPO_THREADS") else {
        return Ok(());
    };
    let n: usize = v
        .trim()
        .parse()
        .ok()
        .filter(|n| *n > 0)
        .ok_or_else(|| CliError::Validation(format!("RINGOPO_THREADS must be a positive integer, got {v:?}")))?;
    // a pool that already exists keeps its size
    let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
    Ok(())
}

/// Runs one subcommand on an already resolved configuration.
pub fn execute(cmd: Subcommand, cfg: &RunConfig, input: &[u8]) -> Result<RunReport, CliError> {
    let start = Instant::now();
    let dir = PathBuf::from(&cfg.output.dir);
    let mut out = OutputDir::create(&dir)?;
    commands::dispatch(cmd, cfg, &mut out)?;
    let outputs = out.files().to_vec();
    let manifest = RunManifest {
        tool: env!("CARGO_PKG_NAME"),
        version: env!("CARGO_PKG_VERSION"),
        subcommand: cmd.name(),
        input_sha256: sha256_hex(input),
        wall_clock_seconds: start.elapsed().as_secs_f64(),
        outputs: &outputs,
        config: cfg,
    };
    let name = manifest_name(cmd.name());
    out.write_json(&name, &manifest)?;
    Ok(RunReport { out_dir: dir, outputs, manifest: name })
}

/// Reads the config at `path`, applies overrides and runs.
pub fn run_with(
    cmd: Subcommand,
    path: &Path,
    out: Option<&Path>,
    seed: Option<u64>,
    order: Option<usize>,
    cutoff: Option<(usize, usize)>,
) -> Result<RunReport, CliError> {
    let input = std::fs::read(path)
        .map_err(|e| CliError::Validation(format!("cannot read config {}: {e}", path.display())))?;
    let text = String::from_utf8(input.clone())
        .map_err(|_| CliError::Validation(format!("config {} is not UTF-8", path.display())))?;
    let mut cfg = parse_config_str(&text)?;
    cfg.apply_overrides(seed, order, cutoff, out)?;
    execute(cmd, &cfg, &input)
}

/// Full command-line entry point; returns the process exit status.
pub fn main_with_args<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return code;
        }
    };
    let result = configure_threads().and_then(|_| {
        let cutoff = cli.cutoff.as_ref().map(|v| (v[0], v[1]));
        run_with(cli.subcommand, &cli.config, cli.out.as_deref(), cli.seed, cli.order, cutoff)
    });
    match result {
        Ok(report) => {
            for f in &report.outputs {
                println!("{}", report.out_dir.join(f).display());
            }
            println!("{}", report.out_dir.join(&report.manifest).display());
            0
        }
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}
