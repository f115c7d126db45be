//! Command-line front end: complex dimensions, tube formula evaluation and
//! comparison against direct summation, generator validation, Apollonian
//! packings and scaling zeta values.

// `!(x > 0.0)` is used on purpose: it also rejects NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

mod commands;
mod config;
mod output;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use commands::{Failure, Output};
use config::Config;

/// Overrides `--threads` when set.
const THREADS_ENV: &str = "SPRAYTUBE_THREADS";

#[derive(Parser)]
#[command(name = "spraytube", version, about = "Fractal tube formulas for self-similar sprays")]
struct Cli {
    #[command(subcommand)]
    command: Command,
    /// JSON job description
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Write the table here instead of stdout
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Worker threads (0 = rayon default)
    #[arg(long, global = true, default_value_t = 0)]
    threads: usize,
}

#[derive(Subcommand, Clone, Copy)]
enum Command {
    /// Scaling and integer complex dimensions in a window
    Dims,
    /// Tube volume by the formula next to the direct sum
    Tube,
    /// As `tube`, with a pass/fail verdict against `job.tolerance.rel`
    Compare,
    /// Check a generator representation's invariants
    ValidateGenerator,
    /// Radii of an Apollonian packing
    Apollonian,
    /// Scaling zeta function at the points `job.s`
    Zeta,
}

fn thread_count(flag: usize) -> Result<usize, Failure> {
    match std::env::var(THREADS_ENV) {
        Ok(v) => v
            .trim()
            .parse()
            .map_err(|_| Failure::Config(format!("{THREADS_ENV} must be a nonnegative integer, got `{v}`"))),
        Err(_) => Ok(flag),
    }
}

fn run(cli: &Cli) -> Result<Option<Failure>, Failure> {
    let path = cli.config.as_ref().ok_or_else(|| Failure::Config("--config <json> is required".into()))?;
    let text =
        std::fs::read_to_string(path).map_err(|e| Failure::Config(format!("cannot read {}: {e}", path.display())))?;
    let cfg = Config::parse(&text).map_err(Failure::Config)?;
    let sha = output::config_hash(&text);

    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(thread_count(cli.threads)?)
        .build()
        .map_err(|e| Failure::Config(format!("thread pool: {e}")))?;

    let out = cli.out.as_deref();
    let write = |s: &str, p| output::emit(s, p).map_err(|e| Failure::Config(format!("cannot write output: {e}")));
    pool.install(|| {
        let result: Output = match cli.command {
            Command::Dims => commands::dims(&cfg, &sha)?,
            Command::Tube => commands::tube(&cfg, &sha)?,
            Command::ValidateGenerator => commands::validate_generator(&cfg)?,
            Command::Apollonian => commands::apollonian(&cfg, &sha)?,
            Command::Zeta => commands::zeta(&cfg, &sha)?,
            Command::Compare => {
                let (table, summary) = commands::compare(&cfg, &sha)?;
                if out.is_some() {
                    write(&table.text, out)?;
                }
                write(&summary, None)?;
                return Ok(table.verdict);
            }
        };
        write(&result.text, out)?;
        Ok(result.verdict)
    })
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(None) => ExitCode::SUCCESS,
        Ok(Some(f)) | Err(f) => {
            eprintln!("spraytube: {}", f.message());
            ExitCode::from(f.code())
        }
    }
}
