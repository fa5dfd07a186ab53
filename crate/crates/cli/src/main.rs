//! `normbridge`: command-line front end.
//!
//! Exit codes: 0 when the expectation is met (by default: everything holds),
//! 2 when an inequality is violated against expectation, 1 on any
//! operational error.

use std::fmt;
use std::path::Path;
use std::process::ExitCode;

use clap::Parser;

mod args;
mod cmd;
mod output;
mod source;

use args::{Cli, Command, Expect};

#[derive(Debug)]
pub enum CliError {
    Core(normbridge::Error),
    Op(String),
}

impl CliError {
    pub fn io(path: &Path, e: std::io::Error) -> Self {
        CliError::Op(format!("{}: {e}", path.display()))
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Core(e) => e.fmt(f),
            CliError::Op(m) => f.write_str(m),
        }
    }
}

impl From<normbridge::Error> for CliError {
    fn from(e: normbridge::Error) -> Self {
        CliError::Core(e)
    }
}

/// Whether a command saw a violation; mapped to an exit code by [`Expect`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Verdict {
    Holds,
    Violated,
}

impl Verdict {
    pub fn of(violated: bool) -> Self {
        if violated {
            Verdict::Violated
        } else {
            Verdict::Holds
        }
    }
}

impl Expect {
    fn exit(self, v: Verdict) -> ExitCode {
        let met = if self.expect_violation { v == Verdict::Violated } else { v == Verdict::Holds };
        if met {
            ExitCode::SUCCESS
        } else {
            ExitCode::from(2)
        }
    }
}

fn main() -> ExitCode {
    // Usage errors are operational errors (exit 1); 2 is reserved for violations.
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { ExitCode::from(1) } else { ExitCode::SUCCESS };
        }
    };
    let result = match &cli.command {
        Command::Check(a) => cmd::check::run(a).map(|v| a.expect.exit(v)),
        Command::Sweep(a) => cmd::sweep::run(a).map(|v| a.expect.exit(v)),
        Command::Pipeline(a) => cmd::pipeline::run(a).map(|v| Expect::default().exit(v)),
        Command::Hunt(a) => cmd::hunt::run(a).map(|v| {
            // Without an expectation a completed search is a success.
            if a.expect.expect_violation || a.expect.expect_none {
                a.expect.exit(v)
            } else {
                ExitCode::SUCCESS
            }
        }),
        Command::Gen(a) => cmd::gen::run(a).map(|()| ExitCode::SUCCESS),
    };
    result.unwrap_or_else(|e| {
        eprintln!("error: {e}");
        ExitCode::from(1)
    })
}
