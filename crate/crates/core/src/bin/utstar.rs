use std::io::Write;
use std::process::ExitCode;

use clap::Parser;
use utstar::cli::{exit_code, run, Cli};

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = run(&cli);
    match &result {
        Ok(out) if cli.global.out.is_none() => {
            let _ = std::io::stdout().write_all(out.body.as_bytes());
        }
        Ok(_) => {}
        Err(e) => eprintln!("error: {e}"),
    }
    ExitCode::from(exit_code(&result))
}
