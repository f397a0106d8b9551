use std::process::ExitCode;

use boson_encode_cli::{run, Args};
use clap::Parser;

fn main() -> ExitCode {
    let result = Args::parse().into_config().and_then(|config| {
        run(&config)?;
        eprintln!("wrote {}", config.out.display());
        Ok(())
    });
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::FAILURE
        }
    }
}
