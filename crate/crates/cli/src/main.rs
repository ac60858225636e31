//! Command-line interface for building and analyzing director–company
//! interlock networks.

mod commands;
mod config;
mod outputs;

use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::Result;
use clap::{Parser, Subcommand};

use crate::config::RunConfig;

#[derive(Debug, Parser)]
#[command(
    name = "boardnet",
    version,
    about = "Construct and analyze director-company interlock networks",
    propagate_version = true
)]
struct Cli {
    /// TOML run configuration; command-line flags override its values.
    #[arg(long, global = true, value_name = "FILE")]
    config: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Crawl a corpus breadth-first into the three dataset files.
    Crawl(commands::crawl::CrawlArgs),
    /// Run every analysis and write a report manifest.
    Analyze(commands::analyze::AnalyzeArgs),
    /// Degree histograms and a network summary.
    Stats(commands::stats::StatsArgs),
    /// One-mode projection as a weighted edge list.
    Project(commands::project::ProjectArgs),
    /// Maximal cliques, whole-graph or around a base node.
    Cliques(commands::cliques::CliquesArgs),
    /// Maximal frequent itemsets with report tables.
    Itemsets(commands::itemsets::ItemsetsArgs),
    /// Personal-relation lookups and professional-link matching.
    Relations(commands::relations::RelationsArgs),
    /// Projection export to GraphML and DOT.
    Export(commands::export::ExportArgs),
    /// Keyed dataset anonymization.
    Anonymize(commands::anonymize::AnonymizeArgs),
}

fn run(cli: Cli) -> Result<()> {
    let config = RunConfig::load(cli.config.as_deref())?;
    match cli.command {
        Command::Crawl(args) => commands::crawl::run(args, &config),
        Command::Analyze(args) => {
            commands::analyze::run(args, &config, cli.config.as_deref())
        }
        Command::Stats(args) => commands::stats::run(args, &config),
        Command::Project(args) => commands::project::run(args, &config),
        Command::Cliques(args) => commands::cliques::run(args, &config),
        Command::Itemsets(args) => commands::itemsets::run(args, &config),
        Command::Relations(args) => commands::relations::run(args, &config),
        Command::Export(args) => commands::export::run(args, &config),
        Command::Anonymize(args) => commands::anonymize::run(args, &config),
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(error) => {
            eprintln!("error: {error:#}");
            ExitCode::FAILURE
        }
    }
}
