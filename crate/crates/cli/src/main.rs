use std::process::ExitCode;

use clap::error::ErrorKind;
use clap::Parser;
use sqrtpot_cli::args::Cli;
use sqrtpot_cli::error::{ErrorRecord, EXIT_DOMAIN};

fn emit(record: &ErrorRecord) {
    eprintln!(
        "{}",
        serde_json::to_string(record).expect("error record serializes")
    );
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) => {
            let _ = e.print();
            return ExitCode::SUCCESS;
        }
        Err(e) => {
            emit(&ErrorRecord {
                error: "usage",
                message: e
                    .to_string()
                    .lines()
                    .next()
                    .unwrap_or_default()
                    .trim_start_matches("error: ")
                    .to_string(),
                exit_code: EXIT_DOMAIN,
            });
            let _ = e.print();
            return ExitCode::from(EXIT_DOMAIN as u8);
        }
    };
    match sqrtpot_cli::execute(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            emit(&e.record());
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
