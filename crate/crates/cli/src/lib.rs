//! Command-line front end: configuration merging, command implementations
//! and exit-code policy.
//!
//! Exit codes: 0 success, 1 usage error, 2 rejected parameters or failed
//! check, 3 numerical failure.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod commands;
pub mod config;

use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;

use clap::error::ErrorKind;
use commands::{cmd_simulate, cmd_soliton, cmd_solve, cmd_sweep, cmd_verify, write_artifacts, Report};
use config::{cli, RunConfig, COMMANDS};

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),

    #[error(transparent)]
    Model(#[from] nlkg_core::Error),

    #[error("{}: {source}", path.display())]
    Io { path: PathBuf, source: std::io::Error },

    #[error("check failed: {0}")]
    Check(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) | CliError::Io { .. } => 1,
            CliError::Model(nlkg_core::Error::Parse { .. }) => 1,
            CliError::Model(e) if e.is_numerical() => 3,
            CliError::Model(_) | CliError::Check(_) => 2,
        }
    }
}

/// Runs the command selected by `cfg`.
pub fn dispatch(cfg: &RunConfig) -> Result<Box<dyn Report>, CliError> {
    Ok(match cfg.spec.name {
        "solve" => Box::new(cmd_solve(cfg)?),
        "verify" => Box::new(cmd_verify(cfg)?),
        "simulate" => Box::new(cmd_simulate(cfg)?),
        "soliton" => Box::new(cmd_soliton(cfg)?),
        "sweep" => Box::new(cmd_sweep(cfg)?),
        other => return Err(CliError::Usage(format!("unknown command `{other}`"))),
    })
}

/// Parses `args`, runs the command, writes its files and returns the exit
/// code. `env_out` is the value of `NLKG_OUT`.
pub fn run<I, T>(args: I, env_out: Option<OsString>, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let matches = match cli().try_get_matches_from(args) {
        Ok(m) => m,
        Err(e) => {
            let text = e.render().to_string();
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => {
                    let _ = write!(out, "{text}");
                    0
                }
                _ => {
                    let _ = write!(err, "{text}");
                    1
                }
            };
        }
    };
    let Some((name, sub)) = matches.subcommand() else {
        let _ = writeln!(err, "error: no command given");
        return 1;
    };
    let Some(spec) = COMMANDS.iter().find(|s| s.name == name).copied() else {
        let _ = writeln!(err, "error: unknown command `{name}`");
        return 1;
    };
    match execute(RunConfig::from_matches(spec, sub, env_out), out, err) {
        Ok(()) => 0,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            e.exit_code()
        }
    }
}

fn execute(cfg: Result<RunConfig, CliError>, out: &mut dyn Write, err: &mut dyn Write) -> Result<(), CliError> {
    let cfg = cfg?;
    let report = dispatch(&cfg)?;
    let _ = write!(out, "{}", report.summary());
    for path in write_artifacts(&cfg.out_dir, &report.artifacts())? {
        let _ = writeln!(err, "wrote {}", path.display());
    }
    let failures = report.failures();
    if failures.is_empty() {
        Ok(())
    } else {
        Err(CliError::Check(failures.join("; ")))
    }
}
