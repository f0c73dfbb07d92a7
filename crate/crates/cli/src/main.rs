//! `operad-forge`: exhaustive checks on label systems and lattice paths.
//!
//! Exit codes: 0 when the check passes, 1 when it fails with a witness,
//! 2 on usage or input errors, 3 when a budget or size cap was hit.

mod commands;
mod config;

use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::Parser;
use commands::{Command, Failure, Settings, Status};
use config::{FileConfig, Format};
use operad_forge_core::budget::Budget;
use serde_json::json;

const THREADS_ENV: &str = "OPERAD_FORGE_THREADS";

#[derive(Debug, Parser)]
#[command(name = "operad-forge", version, about)]
struct Cli {
    /// Output format; not every command supports every format
    #[arg(long, value_enum, global = true)]
    format: Option<Format>,
    /// TOML file with defaults for the global options and caps
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Worker threads; overrides OPERAD_FORGE_THREADS and the config file
    #[arg(long, global = true)]
    threads: Option<usize>,
    /// Wall-clock budget in seconds
    #[arg(long, global = true)]
    time_limit: Option<u64>,
    /// Write the report here instead of stdout
    #[arg(long, global = true)]
    output: Option<PathBuf>,
    /// Largest product poset to materialize
    #[arg(long, global = true)]
    max_poset_size: Option<u128>,
    /// Largest order complex, in simplices, to build for homology
    #[arg(long, global = true)]
    max_simplices: Option<u128>,
    #[command(subcommand)]
    command: Command,
}

fn error_record(kind: &str, message: &str) {
    let record = json!({"error": kind, "message": message});
    eprintln!("{}", serde_json::to_string(&record).expect("plain json"));
}

fn thread_count(cli: Option<usize>, file: Option<usize>) -> Result<Option<usize>, String> {
    if cli.is_some() {
        return Ok(cli);
    }
    match std::env::var(THREADS_ENV) {
        Ok(text) => text
            .trim()
            .parse()
            .map(Some)
            .map_err(|_| format!("{THREADS_ENV} must be a positive integer, got {text:?}")),
        Err(_) => Ok(file),
    }
}

fn execute(cli: Cli) -> Result<Status, Failure> {
    let file = match &cli.config {
        Some(path) => FileConfig::load(path).map_err(Failure::Usage)?,
        None => FileConfig::default(),
    };
    if let Some(n) = thread_count(cli.threads, file.threads).map_err(Failure::Usage)? {
        if n == 0 {
            return Err(Failure::Usage("thread count must be positive".into()));
        }
        rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
            .map_err(|e| Failure::Usage(e.to_string()))?;
    }
    let settings = Settings {
        format: cli.format.or(file.format).unwrap_or(Format::Json),
        budget: match cli.time_limit.or(file.time_limit) {
            Some(secs) => Budget::seconds(secs),
            None => Budget::unlimited(),
        },
        max_poset_size: cli.max_poset_size.or(file.max_poset_size),
        max_simplices: cli.max_simplices.or(file.max_simplices),
        max_degree: file.max_degree,
        max_total: file.max_total,
        max_candidates: file.max_candidates,
    };
    log::info!("running {:?}", cli.command);
    let report = commands::run(&cli.command, &settings)?;
    match cli.output.or(file.output) {
        Some(path) => std::fs::write(&path, &report.body)
            .map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))?,
        None => {
            let mut out = std::io::stdout().lock();
            // A closed pipe is not an error worth reporting.
            let _ = out
                .write_all(report.body.as_bytes())
                .and_then(|()| out.flush());
        }
    }
    Ok(report.status)
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn"))
        .target(env_logger::Target::Stderr)
        .init();
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match execute(cli) {
        Ok(Status::Pass) => ExitCode::SUCCESS,
        Ok(Status::Fail) => ExitCode::from(1),
        Ok(Status::Inconclusive) => ExitCode::from(3),
        Err(Failure::Usage(message)) => {
            error_record("usage", &message);
            ExitCode::from(2)
        }
        Err(Failure::Inconclusive(message)) => {
            error_record("limit", &message);
            ExitCode::from(3)
        }
    }
}
