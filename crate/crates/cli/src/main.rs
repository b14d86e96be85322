mod args;
mod commands;
mod config;
mod error;
mod output;

use std::ffi::OsString;
use std::path::PathBuf;

use clap::{CommandFactory, Parser};

use args::{Cli, Command, GlueAction, SampleAction};
use commands::Outcome;
use config::{ConfigFile, OUT_DIR_KEY};
use error::CliError;
use output::{sha256_hex, OutputDir};

const OUT_DIR_ENV: &str = "PHT_OUT_DIR";

impl Command {
    fn path(&self) -> Vec<&'static str> {
        match self {
            Command::Pht(_) => vec!["pht"],
            Command::Glue { .. } => vec!["glue", "run"],
            Command::Verify(_) => vec!["verify"],
            Command::Sample { .. } => vec!["sample", "run"],
            Command::Distance(_) => vec!["distance"],
            Command::Render(_) => vec!["render"],
        }
    }
}

/// Why a run stopped before executing a subcommand.
enum Stop {
    /// clap already printed its message.
    Clap(i32),
    Cli(CliError),
}

impl From<CliError> for Stop {
    fn from(e: CliError) -> Self {
        Stop::Cli(e)
    }
}

fn parse(argv: &[OsString]) -> Result<Cli, Stop> {
    Cli::try_parse_from(argv).map_err(|e| {
        let _ = e.print();
        Stop::Clap(e.exit_code())
    })
}

/// Parses `argv`, then again with config entries folded in.
fn parse_with_config(argv: &[OsString]) -> Result<(Cli, ConfigFile), Stop> {
    let cli = parse(argv)?;
    let Some(path) = &cli.config else {
        return Ok((cli, ConfigFile::default()));
    };
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::Input(format!("cannot read {}: {e}", path.display())))?;
    let config = ConfigFile::parse(&text)?;
    let injected = config::inject(argv, &Cli::command(), &cli.command.path(), &config)?;
    Ok((parse(&injected)?, config))
}

fn run(argv: Vec<OsString>) -> i32 {
    let result = parse_with_config(&argv).and_then(|(cli, config)| Ok(execute(&cli, &config)?));
    match result {
        Ok(Outcome::Success) => 0,
        Ok(Outcome::Mismatch) => 1,
        Err(Stop::Clap(code)) => code,
        Err(Stop::Cli(e)) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}

fn execute(cli: &Cli, config: &ConfigFile) -> Result<Outcome, CliError> {
    if let Some(n) = cli.threads {
        if n == 0 {
            return Err(CliError::Usage("--threads must be at least 1".into()));
        }
        rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
            .map_err(|e| CliError::Usage(e.to_string()))?;
    }
    let dir = cli
        .out_dir
        .clone()
        .or_else(|| std::env::var_os(OUT_DIR_ENV).map(PathBuf::from))
        .or_else(|| config.get(OUT_DIR_KEY).map(PathBuf::from))
        .unwrap_or_else(|| PathBuf::from("out"));
    let mut out = OutputDir::create(&dir)?;
    let outcome = match &cli.command {
        Command::Pht(a) => commands::pht(a, &mut out),
        Command::Glue {
            action: GlueAction::Run(a),
        } => commands::glue_run(a, &mut out),
        Command::Verify(a) => commands::verify(a, &mut out),
        Command::Sample {
            action: SampleAction::Run(a),
        } => commands::sample_run(a, &mut out),
        Command::Distance(a) => commands::distance(a, &mut out),
        Command::Render(a) => commands::render(a, &mut out),
    }?;
    let config_hash = sha256_hex(format!("{:?}", cli.command).as_bytes());
    out.finish(&cli.command.path().join(" "), &config_hash)?;
    Ok(outcome)
}

fn main() {
    std::process::exit(run(std::env::args_os().collect()));
}
