use std::io::{self, Write};
use std::process::ExitCode;

use casimir_cli::{run, Cli, CliError};
use clap::Parser;

fn main() -> ExitCode {
    let cli = Cli::parse();
    let stdout = io::stdout();
    let mut out = stdout.lock();
    let status = run(cli, &mut out);
    let _ = out.flush();
    match status {
        Ok(()) => ExitCode::SUCCESS,
        Err(CliError::Rejected) => ExitCode::from(1),
        Err(CliError::Io(e)) if e.kind() == io::ErrorKind::BrokenPipe => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("casimir: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
