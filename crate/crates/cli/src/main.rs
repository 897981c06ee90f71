use std::process::ExitCode;

use clap::Parser;

mod args;
mod commands;
mod config;
mod exit;
mod render;

use args::{Cli, Command};

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();

    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { ExitCode::from(exit::USAGE) } else { ExitCode::SUCCESS };
        }
    };

    let result = config::load(&cli.global).and_then(|cfg| match &cli.command {
        Command::Extract(a) => commands::extract::run(cfg, a),
        Command::Dataset(a) => commands::dataset::run(cfg, a),
        Command::Evaluate(a) => commands::evaluate::run(cfg, a),
        Command::Registry(a) => commands::registry::run(cfg, a),
        Command::Ledger(a) => commands::ledger::run(a),
    });

    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(failure) => {
            eprintln!("error: {:#}", failure.error);
            ExitCode::from(failure.code)
        }
    }
}
