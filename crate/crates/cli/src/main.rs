use std::process::ExitCode;

use clap::Parser;

use capcon_cli::args::Cli;
use capcon_cli::output::emit;

fn main() -> ExitCode {
    let cli = Cli::parse();
    let outcome = capcon_cli::run(&cli).and_then(|o| {
        emit(&o.text, cli.out.as_deref())?;
        Ok(o.ok)
    });
    match outcome {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
