//! Keyed dataset anonymization.

use std::path::PathBuf;

use anyhow::{bail, Context, Result};
use boardnet::model::{anonymize, save_dataset};

use crate::commands::{load_dataset_from, resolve_dataset_paths, resolve_out_dir, DatasetArgs};
use crate::config::RunConfig;
use crate::outputs::ensure_writable_dir;

/// Environment variable consulted when no key flag is given.
pub const ANON_KEY_VAR: &str = "BOARDNET_ANON_KEY";

#[derive(Debug, clap::Args)]
pub struct AnonymizeArgs {
    #[command(flatten)]
    dataset: DatasetArgs,
    /// Pseudonym key; falls back to BOARDNET_ANON_KEY, then the config
    /// file.
    #[arg(long, value_name = "KEY")]
    key: Option<String>,
    /// Output directory for the anonymized dataset files.
    #[arg(long, value_name = "DIR")]
    out: Option<PathBuf>,
}

/// Key precedence: flag, environment, config file.
pub fn resolve_key(flag: Option<String>, config: Option<&str>) -> Result<String> {
    if let Some(key) = flag {
        return Ok(key);
    }
    if let Ok(key) = std::env::var(ANON_KEY_VAR) {
        if !key.is_empty() {
            return Ok(key);
        }
    }
    match config {
        Some(key) => Ok(key.to_string()),
        None => bail!(
            "anonymization key required; pass --key, set {ANON_KEY_VAR}, \
             or set [anonymize].key in the config file"
        ),
    }
}

pub fn run(args: AnonymizeArgs, config: &RunConfig) -> Result<()> {
    let paths = resolve_dataset_paths(&args.dataset, &config.dataset)?;
    let out_dir = resolve_out_dir(args.out.as_deref(), &config.output);
    let key = resolve_key(args.key, config.anonymize.key.as_deref())?;
    ensure_writable_dir(&out_dir)?;
    let dataset = load_dataset_from(&paths)?;

    let anonymized = anonymize(&dataset, key.as_bytes()).context("anonymizing dataset")?;
    let (companies, directors, affiliations) =
        save_dataset(&anonymized.dataset, &out_dir).context("writing anonymized dataset")?;
    let (n_companies, n_directors, n_affiliations) = anonymized.dataset.counts();
    println!(
        "anonymized {n_companies} companies, {n_directors} directors, \
         {n_affiliations} affiliations"
    );
    for path in [companies, directors, affiliations] {
        println!("wrote {}", path.display());
    }
    Ok(())
}
