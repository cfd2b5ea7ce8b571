use std::process::ExitCode;

use tropmoduli_cli::{configure_threads, emit, execute, parse_command, CliError};

fn main() -> ExitCode {
    let command = match parse_command(std::env::args_os().skip(1)) {
        Ok(c) => c,
        Err(CliError::Display(text)) => {
            print!("{text}");
            return ExitCode::SUCCESS;
        }
        Err(e) => {
            eprintln!("{e}");
            return ExitCode::from(2);
        }
    };
    configure_threads(command.threads);
    let report = execute(&command);
    print!("{}", emit(&report, command.format));
    ExitCode::from(report.status.exit_code() as u8)
}
