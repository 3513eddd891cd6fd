use std::process::ExitCode;

use clap::Parser;
use cohsim::cli::{run, Cli};

fn main() -> ExitCode {
    let cli = Cli::parse();
    match cohsim::parallel::init().and_then(|()| run(cli)) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::FAILURE
        }
    }
}
