//! Breadth-first crawl into the three dataset files.

use std::path::{Path, PathBuf};

use anyhow::{bail, Context, Result};
use boardnet::crawler::{
    bfs_crawl, fixture_provider, CrawlConfig, CrawlOutcome, HttpPageProvider, HttpProviderConfig,
    PageProvider, ParseRules,
};
use boardnet::model::{load_dataset, save_dataset, NodeKind};

use crate::commands::{resolve_out_dir, ModeArg};
use crate::config::{CrawlSection, RunConfig};
use crate::outputs::{ensure_writable_dir, fmt_bool, OutputTracker};

#[derive(Debug, clap::Args)]
pub struct CrawlArgs {
    /// Kind of the base node.
    #[arg(long, value_enum)]
    base_kind: Option<ModeArg>,
    /// Identifier of the base node.
    #[arg(long, value_name = "ID")]
    base: Option<String>,
    /// Stop visiting new nodes beyond this count.
    #[arg(long, value_name = "N")]
    max_nodes: Option<usize>,
    /// Stop expanding beyond this depth in bipartite hops.
    #[arg(long, value_name = "N")]
    max_depth: Option<usize>,
    /// Transient fetch failures retried per page.
    #[arg(long, value_name = "N")]
    retries: Option<u32>,
    /// Crawl an on-disk dataset directory instead of the network.
    #[arg(long, value_name = "DIR")]
    fixture_dir: Option<PathBuf>,
    /// Output directory.
    #[arg(long, value_name = "DIR")]
    out: Option<PathBuf>,
}

pub fn run(args: CrawlArgs, config: &RunConfig) -> Result<()> {
    let section = &config.crawl;
    let base_kind = resolve_base_kind(args.base_kind, section)?;
    let Some(base) = args.base.clone().or_else(|| section.base.clone()) else {
        bail!("crawl requires a base node; pass --base or set [crawl].base");
    };
    let out_dir = resolve_out_dir(args.out.as_deref(), &config.output);
    ensure_writable_dir(&out_dir)?;

    let mut crawl_config = CrawlConfig::new(base_kind, base);
    crawl_config.max_nodes = args.max_nodes.or(section.max_nodes);
    crawl_config.max_depth = args.max_depth.or(section.max_depth);
    if let Some(retries) = args.retries.or(section.retries) {
        crawl_config.retries = retries;
    }

    let mut provider = build_provider(args.fixture_dir.as_deref(), section)?;
    let outcome = bfs_crawl(provider.as_mut(), &crawl_config).context("crawl failed")?;
    write_outputs(&out_dir, &crawl_config, &outcome)
}

fn resolve_base_kind(flag: Option<ModeArg>, section: &CrawlSection) -> Result<NodeKind> {
    if let Some(kind) = flag {
        return Ok(kind.into());
    }
    match &section.base_kind {
        Some(text) => text
            .parse()
            .map_err(|error: String| anyhow::anyhow!("[crawl].base_kind: {error}")),
        None => bail!("crawl requires a base kind; pass --base-kind or set [crawl].base_kind"),
    }
}

fn build_provider(
    fixture_flag: Option<&Path>,
    section: &CrawlSection,
) -> Result<Box<dyn PageProvider>> {
    if let Some(dir) = fixture_flag.or(section.fixture_dir.as_deref()) {
        let dataset = load_dataset(
            &dir.join("companies.csv"),
            &dir.join("directors.csv"),
            &dir.join("affiliations.csv"),
        )
        .with_context(|| format!("loading crawl fixture from {}", dir.display()))?;
        return Ok(Box::new(fixture_provider(&dataset)));
    }

    let require = |value: &Option<String>, key: &str| {
        value
            .clone()
            .ok_or_else(|| anyhow::anyhow!("HTTP crawl requires [crawl].{key} in the config file"))
    };
    let mut http_config = HttpProviderConfig::new(
        require(&section.company_url_template, "company_url_template")?,
        require(&section.director_url_template, "director_url_template")?,
        ParseRules {
            name_pattern: require(&section.name_pattern, "name_pattern")?,
            director_link_pattern: require(
                &section.director_link_pattern,
                "director_link_pattern",
            )?,
            company_link_pattern: require(&section.company_link_pattern, "company_link_pattern")?,
        },
    );
    if let Some(rate) = section.rate_limit_per_sec {
        http_config.rate_limit_per_sec = rate;
    }
    http_config.cache_dir = section.cache_dir.clone();
    Ok(Box::new(
        HttpPageProvider::new(http_config).context("invalid crawl page rules")?,
    ))
}

/// Writes the three dataset files plus the crawl summary; nothing is
/// written when the crawl itself failed.
fn write_outputs(out_dir: &Path, config: &CrawlConfig, outcome: &CrawlOutcome) -> Result<()> {
    let mut tracker = OutputTracker::new();
    let result = (|| -> Result<()> {
        let (companies, directors, affiliations) = save_dataset(&outcome.dataset, out_dir)
            .context("writing dataset files")?;
        for path in [&companies, &directors, &affiliations] {
            tracker.note_written(path.clone());
        }
        let (n_companies, n_directors, n_affiliations) = outcome.dataset.counts();
        let summary = format!(
            "base_kind: {}\nbase: {}\ncompanies: {n_companies}\ndirectors: {n_directors}\n\
             affiliations: {n_affiliations}\ndepth_reached: {}\ntruncated: {}\n",
            config.base_kind,
            config.base_id,
            outcome.depth_reached,
            fmt_bool(outcome.truncated),
        );
        tracker.write_text(&out_dir.join("crawl_summary.txt"), &summary)?;
        print!("{summary}");
        Ok(())
    })();
    if let Err(error) = result {
        tracker.remove_all();
        return Err(error);
    }
    Ok(())
}
