//! `optcode` command-line entry point.

use std::io::Write;
use std::process::ExitCode;

use clap::Parser;
use optcode_cli::args::Cli;
use optcode_cli::commands;
use optcode_cli::error::{self, CliError};

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(t) = cli.threads {
        if let Err(e) = rayon::ThreadPoolBuilder::new()
            .num_threads(t)
            .build_global()
        {
            eprintln!("error: {e}");
            return ExitCode::from(error::EXIT_USAGE as u8);
        }
    }
    match commands::run(&cli) {
        Ok(out) => {
            emit(if cli.json { &out.json } else { &out.text });
            ExitCode::from(out.code as u8)
        }
        Err(e) => report(&cli, e),
    }
}

fn report(cli: &Cli, e: CliError) -> ExitCode {
    if cli.json {
        let v = serde_json::json!({ "error": e.to_string(), "exit_code": e.exit_code() });
        emit(&serde_json::to_string_pretty(&v).expect("plain JSON"));
    }
    eprintln!("error: {e}");
    ExitCode::from(e.exit_code() as u8)
}

/// Writes to stdout, ignoring a closed pipe.
fn emit(text: &str) {
    let _ = writeln!(std::io::stdout().lock(), "{text}");
}
