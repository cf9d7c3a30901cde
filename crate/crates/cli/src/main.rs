mod args;
mod commands;
mod output;

use args::{Cli, Command};
use clap::error::ErrorKind;
use clap::Parser;
use std::process::ExitCode;

fn run(argv: Vec<String>) -> i32 {
    let cli = match Cli::try_parse_from(&argv) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => commands::EXIT_OK,
                _ => commands::EXIT_FAILURE,
            };
        }
    };
    let result = match &cli.command {
        Command::Check(a) => commands::check(&argv, a),
        Command::Counterexample(a) => commands::counterexample(&argv, a),
        Command::Diameter(a) => commands::diameter(&argv, a),
        Command::Dilation(a) => commands::dilation(&argv, a),
        Command::Sweep(a) => commands::sweep_cmd(&argv, a),
    };
    match result {
        Ok(code) => code,
        Err(msg) => {
            eprintln!("error: {msg}");
            commands::EXIT_FAILURE
        }
    }
}

fn main() -> ExitCode {
    ExitCode::from(run(std::env::args().collect()) as u8)
}
