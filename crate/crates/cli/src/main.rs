// `!(x > 0.0)` is used deliberately so NaN fails validation.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

mod args;
mod commands;
mod error;
mod forcing;
mod manifest;
mod series;

use args::{with_suffix, Cli};
use clap::Parser;
use manifest::RunManifest;
use std::process::ExitCode;
use std::time::Instant;

fn main() -> ExitCode {
    let cli = Cli::parse();
    let start = Instant::now();
    let outcome = match commands::execute(&cli.command) {
        Ok(o) => o,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(e.exit_code() as u8);
        }
    };
    let manifest_path = with_suffix(
        &outcome.command.out().expect("solver commands have an output"),
        ".manifest.json",
    );
    let manifest = RunManifest {
        version: env!("CARGO_PKG_VERSION").to_string(),
        command: outcome.command,
        grid: outcome.grid,
        report: outcome.report,
        outputs: outcome.outputs,
        wall_time_s: start.elapsed().as_secs_f64(),
    };
    if let Err(e) = manifest.save(&manifest_path) {
        eprintln!("error: {e}");
        return ExitCode::from(e.exit_code() as u8);
    }
    println!("{}", manifest.report);
    ExitCode::SUCCESS
}
