mod args;
mod commands;
mod error;
mod input;
mod output;

use std::process::ExitCode;

use clap::error::ErrorKind;
use clap::Parser;
use uop_core::Parallelism;

use crate::args::{Cli, Command, GlobalArgs};
use crate::error::{CliError, ErrorRecord, EXIT_USAGE};
use crate::output::OutDir;

fn emit_error(record: &ErrorRecord) {
    eprintln!("{}", serde_json::to_string(record).unwrap_or_default());
}

fn run(global: &GlobalArgs, command: &Command) -> Result<(), CliError> {
    let par = if Parallelism::rayon_available() { Parallelism::Rayon } else { Parallelism::Sequential };
    let mut out = OutDir::create(&global.out_dir, global.format)?;
    let seed = global.seed;
    let outcome = match command {
        Command::Asymptotic(a) => commands::asymptotic(a, &mut out)?,
        Command::PuSim(a) => commands::pu_sim(a, seed, par, &mut out)?,
        Command::Sweep(a) => commands::sweep(a, seed, par, &mut out)?,
        Command::Table1(a) => commands::table1(a, seed, par, &mut out)?,
        Command::Figure1(a) => commands::figure1(a, &mut out)?,
        Command::Figure2(a) => commands::figure2(a, seed, par, &mut out)?,
        Command::FitGpd(a) => commands::fit_gpd(a, seed, par, &mut out)?,
        Command::EstimateEta(a) => commands::estimate_eta_cmd(a, &mut out)?,
        Command::Extremogram(a) => commands::extremogram_cmd(a, seed, par, &mut out)?,
    };
    out.finish(command.name(), seed, &outcome.parameters, &outcome.summary)?;
    println!("{}", serde_json::to_string_pretty(&outcome.summary).unwrap_or_default());
    Ok(())
}

#[cfg(feature = "parallel")]
fn run_with_jobs(global: &GlobalArgs, command: &Command) -> Result<(), CliError> {
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(global.jobs)
        .build()
        .map_err(|e| CliError::Usage(format!("cannot start {} worker threads: {e}", global.jobs)))?;
    pool.install(|| run(global, command))
}

#[cfg(not(feature = "parallel"))]
fn run_with_jobs(global: &GlobalArgs, command: &Command) -> Result<(), CliError> {
    run(global, command)
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) {
                let _ = e.print();
                return ExitCode::SUCCESS;
            }
            let _ = e.print();
            let err = CliError::Usage(e.kind().to_string());
            emit_error(&err.record(None));
            return ExitCode::from(EXIT_USAGE as u8);
        }
    };
    match run_with_jobs(&cli.global, &cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            emit_error(&e.record(Some(cli.command.name())));
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
