use std::io::Write;
use std::process::ExitCode;

use abint_cli::{render, run, Cli, CliError, RunConfig};
use clap::Parser;

fn main() -> ExitCode {
    let cli = Cli::parse();
    match execute(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}

fn execute(cli: &Cli) -> Result<(), CliError> {
    let cfg = RunConfig::resolve(cli.config.as_deref())?;
    let text = render(run(cli, &cfg)?, cfg.precision);
    if let Some(path) = cli.out.as_ref().or(cfg.out.as_ref()) {
        std::fs::write(path, &text).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))?;
    }
    std::io::stdout().write_all(text.as_bytes()).map_err(|e| CliError::Io(e.to_string()))
}
