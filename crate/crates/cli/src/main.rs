mod args;
mod error;
mod output;
mod run;

use std::process::ExitCode;

use clap::Parser;
use serde_json::json;

use args::Cli;
use error::CliError;

fn execute(cli: &Cli) -> Result<(), CliError> {
    cli.validate()?;
    if cli.threads > 0 {
        rayon::ThreadPoolBuilder::new()
            .num_threads(cli.threads)
            .build_global()
            .map_err(|e| CliError::Config(format!("--threads: {e}")))?;
    }
    let table = run::run(&cli.command)?;
    let config = json!({
        "args": serde_json::to_value(&cli.command).map_err(|e| CliError::Config(e.to_string()))?,
        "format": cli.format,
        "threads": cli.threads,
    });
    output::emit(&table, &config, cli.format, cli.out.as_deref())?;
    Ok(())
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) if !e.use_stderr() => e.exit(),
        Err(e) => {
            let msg = e.render().to_string();
            let first = msg.lines().next().unwrap_or_default().trim_start_matches("error: ");
            eprintln!("spinlab: error command=- kind=config code=2: {first}");
            return ExitCode::from(2);
        }
    };
    match execute(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(CliError::Io(e)) if e.kind() == std::io::ErrorKind::BrokenPipe => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!(
                "spinlab: error command={} kind={} code={}: {e}",
                cli.command.name(),
                e.kind(),
                e.exit_code()
            );
            ExitCode::from(e.exit_code())
        }
    }
}
