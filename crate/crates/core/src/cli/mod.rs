//! Command-line front end: `verify`, `run` and `inspect`.
//!
//! Exit codes: 0 success, 1 failed check or bad config/file, 2 run aborted
//! after it started (rows written up to the abort stay on disk).

pub mod config;
pub mod run;
pub mod snapshot;
pub mod verify;

pub use config::{Scenario, ScenarioConfig};
pub use snapshot::{FieldTag, Snapshot};
pub use verify::{Check, Suite};

use crate::error::Error;
use clap::{Parser, Subcommand};
use std::io::{self, Write};
use std::path::{Path, PathBuf};

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAILURE: i32 = 1;
pub const EXIT_ABORT: i32 = 2;

#[derive(Debug, Parser)]
#[command(
    name = "qmx",
    version,
    about = "Quaternion electrodynamics solver and verification suites"
)]
pub struct Cli {
    /// Only print failures and errors.
    #[arg(long, global = true)]
    pub quiet: bool,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Run a property suite and print its residual table.
    Verify {
        #[arg(long, value_enum)]
        suite: Suite,
    },
    /// Run a scenario from a JSON config.
    Run {
        #[arg(long)]
        config: PathBuf,
    },
    /// Summarise a snapshot file.
    Inspect { path: PathBuf },
}

pub fn exit_code(err: &Error) -> i32 {
    match err {
        Error::NonFinite { .. } => EXIT_ABORT,
        _ => EXIT_FAILURE,
    }
}

pub fn dispatch(cli: &Cli) -> i32 {
    let stdout = io::stdout();
    let mut out = stdout.lock();
    match &cli.command {
        Command::Verify { suite } => cmd_verify(*suite, cli.quiet, &mut out),
        Command::Run { config } => cmd_run(config, cli.quiet, &mut out),
        Command::Inspect { path } => cmd_inspect(path, &mut out),
    }
}

pub fn cmd_verify(suite: Suite, quiet: bool, out: &mut dyn Write) -> i32 {
    let checks = match verify::run_suite(suite) {
        Ok(c) => c,
        Err(e) => {
            eprintln!("error: {e}");
            return exit_code(&e);
        }
    };
    let failed = checks.iter().filter(|c| !c.pass).count();
    for c in &checks {
        if !quiet || !c.pass {
            let _ = writeln!(out, "{c}");
        }
    }
    if failed > 0 {
        for c in checks.iter().filter(|c| !c.pass) {
            eprintln!(
                "failed: {} = {:e}, expected {}",
                c.quantity, c.value, c.bound
            );
        }
        EXIT_FAILURE
    } else {
        if !quiet {
            let _ = writeln!(out, "{suite:?}: {} checks passed", checks.len());
        }
        EXIT_OK
    }
}

pub fn cmd_run(config: &Path, quiet: bool, out: &mut dyn Write) -> i32 {
    let cfg = match ScenarioConfig::load(config) {
        Ok(c) => c,
        Err(e) => {
            eprintln!("error: {}: {e}", config.display());
            return EXIT_FAILURE;
        }
    };
    let mut sink = io::sink();
    let log: &mut dyn Write = if quiet { &mut sink } else { out };
    match run::execute(&cfg, log) {
        Ok(_) => EXIT_OK,
        Err(e) => {
            eprintln!("error: {e}");
            exit_code(&e)
        }
    }
}

pub fn cmd_inspect(path: &Path, out: &mut dyn Write) -> i32 {
    let snap = match Snapshot::read(path) {
        Ok(s) => s,
        Err(e) => {
            eprintln!("error: {}: {e}", path.display());
            return EXIT_FAILURE;
        }
    };
    let _ = writeln!(
        out,
        "dims: {} x {} x {}",
        snap.dims[0], snap.dims[1], snap.dims[2]
    );
    let tags: Vec<&str> = snap.fields.iter().map(|(t, _)| t.label()).collect();
    let _ = writeln!(out, "fields: {}", tags.join(" "));
    for (tag, values) in &snap.fields {
        let (min, max, l2) = snapshot::field_stats(values);
        let _ = writeln!(
            out,
            "{:<4} min {min:.6e}  max {max:.6e}  l2 {l2:.6e}",
            tag.label()
        );
    }
    EXIT_OK
}
