use clap::Parser;
use std::process::ExitCode;

fn main() -> ExitCode {
    ExitCode::from(rds_sync::cli::run(rds_sync::cli::Cli::parse()))
}
