use std::io::Write;
use std::process::ExitCode;

use clap::Parser;
use hoq::cli::{self, Cli};

fn main() -> ExitCode {
    let args = Cli::parse();
    cli::configure_threads(args.threads);
    match cli::run(&args) {
        Ok(outcome) => {
            if let Some(payload) = outcome.stdout {
                let mut stdout = std::io::stdout().lock();
                if stdout.write_all(payload.as_bytes()).and_then(|_| stdout.flush()).is_err() {
                    return ExitCode::FAILURE;
                }
            }
            eprintln!("{}", outcome.summary);
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::FAILURE
        }
    }
}
