use std::process::ExitCode;

use clap::Parser;

fn main() -> ExitCode {
    let cli = louc::cli::Cli::parse();
    match louc::cli::run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(1)
        }
    }
}
