mod args;
mod commands;
mod input;

use std::io::Write;
use std::process::ExitCode;

use clap::Parser;
use wm_core::WmError;

const EXIT_FAILING: u8 = 1;
const EXIT_USAGE: u8 = 2;
const EXIT_CAPACITY: u8 = 3;

fn main() -> ExitCode {
    // clap exits with status 2 on usage errors and 0 on --help
    let cli = args::Cli::parse();
    match commands::run(&cli.global, &cli.command) {
        Ok(out) => {
            let body = if cli.global.json {
                serde_json::to_string_pretty(&out.json).expect("serializable") + "\n"
            } else {
                out.text
            };
            let mut stdout = std::io::stdout().lock();
            if stdout.write_all(body.as_bytes()).and_then(|_| stdout.flush()).is_err() {
                return ExitCode::from(EXIT_USAGE);
            }
            if out.failing {
                ExitCode::from(EXIT_FAILING)
            } else {
                ExitCode::SUCCESS
            }
        }
        Err(e) => {
            eprintln!("wm: {e}");
            ExitCode::from(match e {
                WmError::Capacity { .. } => EXIT_CAPACITY,
                _ => EXIT_USAGE,
            })
        }
    }
}
