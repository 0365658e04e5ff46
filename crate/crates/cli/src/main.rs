use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use boussinesq_cli::error::EXIT_CONFIG;
use boussinesq_cli::{dispatch, parse_config, CliError, CliResult, Command, RunOptions};
use clap::{Parser, Subcommand};

#[derive(Parser)]
#[command(name = "boussinesq", about = "Boussinesq solver, estimate monitors and verification sweeps")]
struct Cli {
    /// Worker threads for sweeps.
    #[arg(long, global = true, default_value_t = 1)]
    workers: usize,
    #[command(subcommand)]
    command: Sub,
}

#[derive(Subcommand)]
enum Sub {
    /// Run the solver and write snapshots.
    Simulate {
        #[arg(long)]
        config: PathBuf,
    },
    /// Evaluate the configured checks and write records.
    Verify {
        #[arg(long)]
        config: PathBuf,
    },
    /// Repeat `verify` for each value of the sweep axis.
    Sweep {
        #[arg(long)]
        config: PathBuf,
    },
    /// Summarize existing outputs.
    Report {
        #[arg(long)]
        input: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

fn load(path: &PathBuf, command: Command) -> CliResult<(boussinesq_cli::RunConfig, RunOptions)> {
    let text = fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
    // The subcommand decides what runs, whatever the document says.
    let mut value: serde_json::Value =
        serde_json::from_str(&text).map_err(|e| CliError::config("document", e.to_string()))?;
    if let Some(obj) = value.as_object_mut() {
        obj.insert("command".into(), serde_json::Value::String(command.as_str().into()));
    }
    let config = parse_config(&value.to_string())?;
    let mut opts = RunOptions::from_env();
    opts.config_dir = path.parent().map(PathBuf::from);
    Ok((config, opts))
}

fn run(cli: Cli) -> CliResult<u8> {
    let (config, mut opts) = match &cli.command {
        Sub::Simulate { config } => load(config, Command::Simulate)?,
        Sub::Verify { config } => load(config, Command::Verify)?,
        Sub::Sweep { config } => load(config, Command::Sweep)?,
        Sub::Report { input, out } => {
            let config = parse_config(r#"{"command":"report"}"#)?;
            let mut opts = RunOptions::from_env();
            opts.report_input = Some(input.clone());
            opts.report_output = out.clone();
            (config, opts)
        }
    };
    opts.workers = cli.workers.max(1);
    let outcome = dispatch(&config, &opts)?;
    print!("{}", outcome.message);
    if !outcome.message.ends_with('\n') {
        println!();
    }
    Ok(outcome.exit_code)
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { EXIT_CONFIG } else { 0 });
        }
    };
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
