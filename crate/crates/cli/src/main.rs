//! `eventlens` command-line front end.
//!
//! Exit codes: 0 success, 1 usage error, 2 data error. Every run that names
//! an output directory leaves a `manifest.json` there.

mod args;
mod commands;
mod context;

use std::process::ExitCode;

use clap::Parser;

use crate::args::Cli;
use crate::context::Ctx;

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::new().filter_or("EVENTLENS_LOG", "warn")).init();

    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            // --help and --version are not errors
            return ExitCode::from(if e.use_stderr() { 1 } else { 0 });
        }
    };
    let mut ctx = Ctx::new(cli.command, cli.args);
    let outcome = commands::run(&mut ctx);
    if let Err(e) = ctx.write_manifest(&outcome) {
        eprintln!("error: {e}");
        return ExitCode::from(2);
    }
    match outcome {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
