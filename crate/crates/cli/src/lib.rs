//! `dioph`: command-line front end for the experiments in `dioph-core`.
//!
//! Reports are CSV or JSON tables written to `--out` or stdout; a one-line
//! summary goes to stdout (stderr when the report itself is on stdout).
//! Exit status: 0 success, 2 configuration error, 3 budget exhausted,
//! 4 certification failure.

pub mod cache;
pub mod commands;
pub mod config;
pub mod report;

use std::io::Write;

use clap::Parser;

use cache::{cache_key, Cache, Lookup, ARTIFACT_VERSION};
use config::{Cli, Format, RunConfig};

pub const EXIT_OK: i32 = 0;
pub const EXIT_CONFIG: i32 = 2;
pub const EXIT_BUDGET: i32 = 3;
pub const EXIT_CERTIFICATION: i32 = 4;

#[derive(Debug)]
pub enum CliError {
    Config(String),
    Core(dioph_core::Error),
    Io(std::io::Error),
}

impl From<dioph_core::Error> for CliError {
    fn from(e: dioph_core::Error) -> Self {
        CliError::Core(e)
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Io(e)
    }
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CliError::Config(m) => write!(f, "configuration error: {m}"),
            CliError::Core(e) => write!(f, "{e}"),
            CliError::Io(e) => write!(f, "i/o error: {e}"),
        }
    }
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        use dioph_core::Error as E;
        match self {
            CliError::Config(_) => EXIT_CONFIG,
            CliError::Io(_) => 1,
            CliError::Core(e) => match e {
                E::BudgetExceeded(_) => EXIT_BUDGET,
                E::Certification(_) | E::RefinementBudget { .. } | E::InsufficientPrecision(_) => EXIT_CERTIFICATION,
                _ => EXIT_CONFIG,
            },
        }
    }
}

/// Runs one invocation; `argv[0]` is the program name.
pub fn run(argv: &[String]) -> i32 {
    let cli = match Cli::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return match e.kind() {
                clap::error::ErrorKind::DisplayHelp | clap::error::ErrorKind::DisplayVersion => EXIT_OK,
                _ => EXIT_CONFIG,
            };
        }
    };
    match run_cli(&cli) {
        Ok(()) => EXIT_OK,
        Err(e) => {
            eprintln!("dioph {}: {e}", cli.command.name());
            e.exit_code()
        }
    }
}

fn run_cli(cli: &Cli) -> Result<(), CliError> {
    let rc = RunConfig::resolve(cli)?;
    // timings vary between runs, so timed reports are never cached
    let cache = (rc.use_cache && !rc.timing).then(|| Cache::new(&rc.cache_dir));
    let key = cache_key(&rc.cache_identity(), ARTIFACT_VERSION);
    let mut status = "computed";
    let cached = match &cache {
        Some(c) => match c.get(&key) {
            Lookup::Hit(bytes) => Some(bytes),
            Lookup::Miss => None,
            Lookup::Corrupt => {
                eprintln!("warning: corrupt cache entry {key}; recomputing");
                None
            }
        },
        None => None,
    };
    let (payload, rows) = match cached {
        Some(bytes) => {
            status = "cache hit";
            (bytes, None)
        }
        None => {
            let table = commands::execute(&rc)?;
            let bytes = match rc.format {
                Format::Csv => table.to_csv(),
                Format::Json => table.to_json(&rc.canonical()),
            };
            if let Some(c) = &cache {
                if let Err(e) = c.put(&key, &bytes) {
                    eprintln!("warning: cannot write cache entry {key}: {e}");
                }
            }
            (bytes, Some(table))
        }
    };
    let dest = match &rc.out {
        Some(path) => {
            std::fs::write(path, &payload)?;
            path.display().to_string()
        }
        None => {
            std::io::stdout().write_all(&payload)?;
            "stdout".into()
        }
    };
    let mut line = format!("{}: wrote {} ({status})", rc.command.name(), dest);
    if let Some(t) = rows {
        line.push_str(&format!(", {} rows", t.rows.len()));
        for (k, v) in &t.summary {
            line.push_str(&format!(", {k}={}", summary_value(v)));
        }
    }
    if rc.out.is_some() {
        println!("{line}");
    } else {
        eprintln!("{line}");
    }
    Ok(())
}

fn summary_value(v: &report::Cell) -> String {
    match v {
        report::Cell::Str(s) => s.clone(),
        report::Cell::Int(i) => i.to_string(),
        report::Cell::Float(x) => format!("{x:.6e}"),
        report::Cell::Bool(b) => b.to_string(),
        report::Cell::Null => "none".into(),
    }
}
