use std::process::ExitCode;

use clap::Parser;
use gylat_cli::output::{to_csv, to_json};
use gylat_cli::{run, CliError, Cli, Format};

fn render(format: Format, report: &serde_json::Value) -> String {
    match format {
        Format::Json => to_json(report),
        Format::Csv => to_csv(report),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) if e.use_stderr() => {
            let _ = e.print();
            return ExitCode::from(2);
        }
        Err(e) => {
            let _ = e.print();
            return ExitCode::SUCCESS;
        }
    };
    let (format, result) = run(&cli.command);
    match result {
        Ok(report) => {
            print!("{}", render(format, &report));
            ExitCode::SUCCESS
        }
        Err(err) => {
            let code = err.exit_code() as u8;
            match err {
                CliError::Config(message) => eprintln!("error: {message}"),
                CliError::Consistency { report, message } => {
                    print!("{}", render(format, &report));
                    eprintln!("consistency failure: {message}");
                }
            }
            ExitCode::from(code)
        }
    }
}
