use std::io::Write;
use std::process::ExitCode;

use clap::Parser;
use thermoboost_cli::{exit, parse_config, run, Cli, CliError};

fn write_artifact(path: Option<&std::path::Path>, text: &str) -> Result<(), CliError> {
    match path {
        Some(p) => {
            if let Some(dir) = p.parent().filter(|d| !d.as_os_str().is_empty()) {
                std::fs::create_dir_all(dir)?;
            }
            std::fs::write(p, text)?;
        }
        None => std::io::stdout().lock().write_all(text.as_bytes())?,
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { exit::USAGE as u8 } else { 0 });
        }
    };
    let result = parse_config(&cli).and_then(|cfg| {
        let outcome = run(&cfg)?;
        write_artifact(cfg.output.as_deref(), &outcome.artifact)?;
        outcome.failure.map_or(Ok(()), Err)
    });
    match result {
        Ok(()) => ExitCode::from(exit::OK as u8),
        Err(e) => {
            eprintln!("thermoboost: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
