//! `tweetsent` command-line driver.

mod artifacts;
mod commands;
mod config;
mod failure;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::error::ErrorKind;
use clap::{Args, Parser, Subcommand};

use crate::artifacts::OutputDir;
use crate::commands::Context;
use crate::config::{PipelineConfig, Settings};
use crate::failure::{Failure, Outcome, EXIT_OK, EXIT_USAGE};

/// Lexicon-labelled sentiment analysis of electricity-price tweets.
#[derive(Parser)]
#[command(name = "tweetsent", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Write the seeded synthetic corpus as a raw CSV export.
    Synth(Common),
    /// Read the input CSV (or the synthetic corpus) into corpus.csv.
    Ingest(Common),
    /// Clean, tokenize and lexicon-label corpus.csv into labeled.csv.
    Label(Common),
    /// Split labeled.csv and fit TF-IDF features on the training part.
    Featurize(Common),
    /// Fit the configured models on the training split.
    Train(Common),
    /// Score the test split; write reports, ROC curves and roc.svg.
    Evaluate(Common),
    /// Compare word-level and n-gram TF-IDF with the same model.
    CompareFeatures(Common),
    /// Word frequency tables and word clouds per label.
    Report(Common),
    /// Ingest, label, featurize, train, evaluate and report in one go.
    Run(Common),
}

#[derive(Args)]
struct Common {
    /// Configuration file of `key = value` lines.
    #[arg(long, value_name = "PATH")]
    config: Option<PathBuf>,
    /// Worker threads for parallel stages.
    #[arg(long, value_name = "N")]
    workers: Option<usize>,
    /// Master seed.
    #[arg(long, value_name = "S")]
    seed: Option<u64>,
    /// Configuration overrides such as `--model.kind rf` or `--country uk`.
    #[arg(value_name = "--KEY VALUE", trailing_var_arg = true, allow_hyphen_values = true)]
    overrides: Vec<String>,
}

impl Command {
    fn common(&self) -> &Common {
        match self {
            Command::Synth(c)
            | Command::Ingest(c)
            | Command::Label(c)
            | Command::Featurize(c)
            | Command::Train(c)
            | Command::Evaluate(c)
            | Command::CompareFeatures(c)
            | Command::Report(c)
            | Command::Run(c) => c,
        }
    }
}

fn settings(common: &Common) -> Outcome<Settings> {
    let mut s = match &common.config {
        Some(path) => Settings::load(path)?,
        None => Settings::default(),
    };
    if let Some(w) = common.workers {
        s.set("workers", &w.to_string())?;
    }
    if let Some(seed) = common.seed {
        s.set("seed", &seed.to_string())?;
    }
    s.apply_overrides(&common.overrides)?;
    Ok(s)
}

fn execute(command: &Command) -> Outcome {
    let cfg = PipelineConfig::from_settings(&settings(command.common())?)?;
    for path in cfg.input_files() {
        if !path.is_file() {
            return Err(Failure::usage(format!("input file {} does not exist", path.display())));
        }
    }
    if let Some(config::CorpusSource::File(path)) = &cfg.corpus {
        if matches!(command, Command::Ingest(_) | Command::Run(_)) && !path.is_file() {
            return Err(Failure::usage(format!("input corpus {} does not exist", path.display())));
        }
    }
    if let Some(n) = cfg.workers {
        rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
            .map_err(|e| Failure::usage(format!("cannot start {n} workers: {e}")))?;
    }
    let ctx = Context { out: OutputDir::new(&cfg.out_dir), cfg };
    match command {
        Command::Synth(_) => commands::synth(&ctx),
        Command::Ingest(_) => commands::ingest(&ctx),
        Command::Label(_) => commands::label(&ctx),
        Command::Featurize(_) => commands::featurize_cmd(&ctx),
        Command::Train(_) => commands::train(&ctx),
        Command::Evaluate(_) => commands::evaluate(&ctx),
        Command::CompareFeatures(_) => commands::compare_features(&ctx),
        Command::Report(_) => commands::report(&ctx),
        Command::Run(_) => commands::run_all(&ctx),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => EXIT_OK,
                _ => EXIT_USAGE,
            };
            let _ = e.print();
            return ExitCode::from(code as u8);
        }
    };
    match execute(&cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("tweetsent: error: {f}");
            ExitCode::from(f.exit_code() as u8)
        }
    }
}
