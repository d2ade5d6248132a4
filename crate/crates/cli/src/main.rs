use std::process::ExitCode;

use clap::Parser;
use remap_cli::{error_line, run, Cli};

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = cli.command.params().clone().resolve().and_then(|params| {
        if let Some(w) = params.workers {
            rayon::ThreadPoolBuilder::new().num_threads(w).build_global()?;
        }
        run(&cli.command, &params)
    });
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("{}", error_line(&e));
            ExitCode::FAILURE
        }
    }
}
