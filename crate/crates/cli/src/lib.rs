//! Command-line front end for `relop`: JSON matrix files, function
//! descriptors, seeded instance generation and deterministic reports.

pub mod cli;
pub mod commands;
pub mod error;
pub mod fnspec;
pub mod matrix_file;
pub mod report;

use std::ffi::OsString;
use std::io::Write;

use clap::Parser;

use crate::cli::{Cli, Command};
use crate::commands::Sink;
pub use crate::error::{CliError, CliResult};

/// What a run produced: bytes destined for stdout and the exit status.
pub struct Outcome {
    pub stdout: Vec<u8>,
    pub status: i32,
}

fn dispatch(command: &Command) -> CliResult<Sink> {
    match command {
        Command::Gen(a) => {
            let (report, written) = commands::gen(a)?;
            // The report itself is the primary output next to the files.
            let path = commands::resolve_out(&a.out).join("report.json");
            std::fs::write(&path, report.to_json()).map_err(|source| CliError::Io {
                path: path.clone(),
                source,
            })?;
            let mut written = written;
            written.push(path);
            Ok(Sink::Written(written))
        }
        Command::Doi(a) => commands::doi(a),
        Command::Diff(a) => commands::diff(a),
        Command::Ssf(a) => commands::ssf(a),
        Command::TraceCheck(a) => commands::trace_check(a),
        Command::Multnorm(a) => commands::multnorm(a),
        Command::Probe(a) => commands::probe(a),
        Command::Flow(a) => commands::flow(a),
    }
}

fn error_bytes(err: &CliError, command: Option<&str>) -> Vec<u8> {
    let mut s = serde_json::to_string_pretty(&err.to_json(command)).expect("error serializes");
    s.push('\n');
    s.into_bytes()
}

/// Runs the command line `args` (including the program name). Errors are
/// reported as a JSON object on stdout with a nonzero status.
pub fn run<I, T>(args: I) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) if !e.use_stderr() => {
            // --help and --version
            return Outcome {
                stdout: e.render().to_string().into_bytes(),
                status: 0,
            };
        }
        Err(e) => {
            let err = CliError::Usage(e.render().to_string().trim_end().to_string());
            return Outcome {
                stdout: error_bytes(&err, None),
                status: 2,
            };
        }
    };
    let name = cli.command.name();
    match dispatch(&cli.command) {
        Ok(Sink::Stdout(bytes)) => Outcome { stdout: bytes, status: 0 },
        Ok(Sink::Written(paths)) => {
            let listing: Vec<String> = paths.iter().map(|p| p.display().to_string()).collect();
            let mut s = serde_json::to_string(&serde_json::json!({ "written": listing })).expect("paths serialize");
            s.push('\n');
            Outcome {
                stdout: s.into_bytes(),
                status: 0,
            }
        }
        Err(err) => Outcome {
            stdout: error_bytes(&err, Some(name)),
            status: if matches!(err, CliError::Usage(_)) { 2 } else { 1 },
        },
    }
}

/// Runs with the process arguments and writes to the real stdout.
pub fn main_with_env() -> i32 {
    let out = run(std::env::args_os());
    let mut stdout = std::io::stdout().lock();
    if stdout.write_all(&out.stdout).and_then(|_| stdout.flush()).is_err() {
        return 1;
    }
    out.status
}
