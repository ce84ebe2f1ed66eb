use std::io::Write;
use std::process::ExitCode;

use clap::Parser;
use matrix_bernstein_cli::{run, Cli, CliError};

fn main() -> ExitCode {
    let cli = Cli::parse();
    let report = match run(&cli.command) {
        Ok(report) => report,
        Err(err) => {
            eprintln!("error: {err}");
            return ExitCode::from(2);
        }
    };
    let output = cli.command.common().output.clone();
    let written = match &output {
        Some(path) => std::fs::write(path, &report.csv).map_err(|e| CliError::Io {
            path: path.clone(),
            message: e.to_string(),
        }),
        None => std::io::stdout()
            .write_all(report.csv.as_bytes())
            .map_err(|e| CliError::Io {
                path: "<stdout>".into(),
                message: e.to_string(),
            }),
    };
    if let Err(err) = written {
        eprintln!("error: {err}");
        return ExitCode::from(1);
    }
    // Keep standard output pure CSV when the CSV goes there.
    if output.is_some() {
        println!("{}", report.summary);
    } else {
        eprintln!("{}", report.summary);
    }
    ExitCode::SUCCESS
}
