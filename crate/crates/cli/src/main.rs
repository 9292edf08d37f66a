mod args;
mod commands;
mod config;

use std::process::ExitCode;

use anyhow::Context;
use clap::Parser;

use args::Cli;
use config::{RunConfig, UsageError};

const THREADS_VAR: &str = "QEDCORR_THREADS";

fn init_threads() -> anyhow::Result<()> {
    let Ok(raw) = std::env::var(THREADS_VAR) else {
        return Ok(());
    };
    let n: usize = match raw.trim().parse() {
        Ok(n) if n > 0 => n,
        _ => return Err(UsageError(format!("{THREADS_VAR} must be a positive integer, got '{raw}'")).into()),
    };
    rayon::ThreadPoolBuilder::new()
        .num_threads(n)
        .build_global()
        .context("configuring the thread pool")
}

fn run(cli: Cli) -> anyhow::Result<bool> {
    init_threads()?;
    let file = match &cli.config {
        Some(path) => RunConfig::load(path)?,
        None => RunConfig::default(),
    };
    let flags = cli.command.map(|c| c.into_config()).unwrap_or_default();
    if let (Some(a), Some(b)) = (flags.command, file.command) {
        if a != b {
            return Err(UsageError(format!(
                "config file is for '{b:?}' but '{a:?}' was requested"
            ))
            .into());
        }
    }
    let plan = flags.over(file).plan()?;
    let outcome = commands::execute(&plan)?;
    match &plan.output {
        Some(path) => std::fs::write(path, &outcome.text)
            .with_context(|| format!("writing {}", path.display()))?,
        None => print!("{}", outcome.text),
    }
    Ok(outcome.passed)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) if e.downcast_ref::<UsageError>().is_some() => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(1)
        }
    }
}
