mod args;
mod commands;
mod config;

use std::ffi::OsString;
use std::io::{self, Write};
use std::process::ExitCode;

use clap::{CommandFactory, FromArgMatches};

use args::{Cli, Command};
use commands::Failure;

fn command() -> clap::Command {
    Cli::command().mut_subcommands(|s| s.args_override_self(true))
}

fn jobs(c: &Command) -> Option<usize> {
    let common = match c {
        Command::Sample(a) => &a.common,
        Command::Clique(a) => &a.common,
        Command::Moments(a) => &a.common,
        Command::Cutoff(a) => &a.common,
        Command::Variance(a) => &a.common,
        Command::Scaling(a) => &a.common,
        Command::Concentration(a) => &a.common,
        Command::Check(a) => &a.common,
    };
    common.jobs
}

fn run(argv: Vec<OsString>) -> u8 {
    let cmd = command();
    let argv = match config::expand(&cmd, argv) {
        Ok(v) => v,
        Err(msg) => {
            eprintln!("error: {msg}");
            return 2;
        }
    };
    let matches = match cmd.try_get_matches_from(argv) {
        Ok(m) => m,
        Err(e) => {
            let _ = e.print();
            return e.exit_code() as u8;
        }
    };
    let cli = match Cli::from_arg_matches(&matches) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return 2;
        }
    };
    if let Some(j) = jobs(&cli.command) {
        if j == 0 {
            eprintln!("error: --jobs must be positive");
            return 2;
        }
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(j).build_global() {
            eprintln!("error: cannot start worker pool: {e}");
            return 1;
        }
    }

    let stdout = io::stdout();
    let mut out = stdout.lock();
    let result = match &cli.command {
        Command::Sample(a) => commands::sample_cmd(a, &mut out),
        Command::Clique(a) => commands::clique_cmd(a, &mut out),
        Command::Moments(a) => commands::moments_cmd(a, &mut out),
        Command::Cutoff(a) => commands::cutoff_cmd(a, &mut out),
        Command::Variance(a) => commands::variance_cmd(a, &mut out),
        Command::Scaling(a) => commands::scaling_cmd(a, &mut out),
        Command::Concentration(a) => commands::concentration_cmd(a, &mut out),
        Command::Check(a) => commands::check_cmd(a, &mut out),
    };
    let _ = out.flush();
    match result {
        Ok(()) => 0,
        Err(Failure::Suite) => 1,
        Err(Failure::Runtime(msg)) => {
            eprintln!("error: {msg}");
            1
        }
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            2
        }
    }
}

fn main() -> ExitCode {
    ExitCode::from(run(std::env::args_os().collect()))
}
