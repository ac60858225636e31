//! Maximal frequent itemset mining and report tables.

use std::collections::HashMap;
use std::path::PathBuf;
use std::str::FromStr;

use anyhow::{anyhow, Result};
use boardnet::itemsets::{
    build_transactions, itemset_distribution, itemset_report, mine_maximal_itemsets,
    FrequentItemsetRecord, ItemsetDistribution, MinSupport, ReportSortKey,
};
use boardnet::model::{BipartiteDataset, NodeKind};

use crate::commands::{
    itemset_report_rows, load_dataset_from, resolve_dataset_paths, resolve_out_dir, DatasetArgs,
    ModeArg, ITEMSET_REPORT_HEADER,
};
use crate::config::RunConfig;
use crate::outputs::{ensure_writable_dir, OutputTracker};

pub const DEFAULT_MIN_SUPPORT: &str = "0.0001";
pub const DEFAULT_TOP_K: usize = 50;

#[derive(Debug, clap::Args)]
pub struct ItemsetsArgs {
    #[command(flatten)]
    dataset: DatasetArgs,
    /// Which entities form the itemsets; the opposite kind forms the
    /// transactions.
    #[arg(long, value_enum)]
    item_kind: ModeArg,
    /// Support threshold as a decimal fraction in (0, 1].
    #[arg(long, value_name = "FRACTION")]
    min_support: Option<String>,
    /// How many report rows to keep.
    #[arg(long, value_name = "N")]
    top_k: Option<usize>,
    /// Report order: support or size.
    #[arg(long, value_name = "KEY")]
    sort: Option<String>,
    /// Output directory.
    #[arg(long, value_name = "DIR")]
    out: Option<PathBuf>,
}

pub fn resolve_min_support(flag: Option<&str>, config: Option<&str>) -> Result<MinSupport> {
    let text = flag.or(config).unwrap_or(DEFAULT_MIN_SUPPORT);
    MinSupport::from_str(text).map_err(|error| anyhow!("invalid min_support {text:?}: {error}"))
}

pub fn resolve_top_k(flag: Option<usize>, config: Option<usize>) -> Result<usize> {
    let top_k = flag.or(config).unwrap_or(DEFAULT_TOP_K);
    anyhow::ensure!(top_k >= 1, "top_k must be at least 1, got {top_k}");
    Ok(top_k)
}

pub fn resolve_sort(flag: Option<&str>, config: Option<&str>) -> Result<ReportSortKey> {
    let text = flag.or(config).unwrap_or("support");
    ReportSortKey::from_str(text).map_err(|error| anyhow!(error))
}

/// Director names for the shared-surname annotation; company itemsets
/// carry no such flag.
pub fn surname_names(dataset: &BipartiteDataset, item_kind: NodeKind) -> Option<HashMap<String, String>> {
    match item_kind {
        NodeKind::Director => Some(
            dataset
                .directors()
                .iter()
                .map(|director| (director.din.clone(), director.name.clone()))
                .collect(),
        ),
        NodeKind::Company => None,
    }
}

/// Mined records plus their distribution for one item kind.
pub fn mine_for_kind(
    dataset: &BipartiteDataset,
    item_kind: NodeKind,
    min_support: MinSupport,
) -> (Vec<FrequentItemsetRecord>, ItemsetDistribution) {
    let db = build_transactions(dataset, item_kind);
    let records = mine_maximal_itemsets(&db, min_support);
    let distribution = itemset_distribution(&records);
    (records, distribution)
}

pub fn size_rows(distribution: &ItemsetDistribution) -> Vec<Vec<String>> {
    distribution
        .size_counts
        .iter()
        .map(|(size, count)| vec![size.to_string(), count.to_string()])
        .collect()
}

pub fn support_rows(distribution: &ItemsetDistribution) -> Vec<Vec<String>> {
    distribution
        .points
        .iter()
        .map(|(size, support)| vec![size.to_string(), support.to_string()])
        .collect()
}

pub fn run(args: ItemsetsArgs, config: &RunConfig) -> Result<()> {
    let paths = resolve_dataset_paths(&args.dataset, &config.dataset)?;
    let out_dir = resolve_out_dir(args.out.as_deref(), &config.output);
    let min_support = resolve_min_support(
        args.min_support.as_deref(),
        config.analysis.min_support.as_deref(),
    )?;
    let top_k = resolve_top_k(args.top_k, config.analysis.top_k)?;
    let sort = resolve_sort(args.sort.as_deref(), config.analysis.sort.as_deref())?;
    ensure_writable_dir(&out_dir)?;
    let dataset = load_dataset_from(&paths)?;

    let item_kind: NodeKind = args.item_kind.into();
    let (records, distribution) = mine_for_kind(&dataset, item_kind, min_support);
    let names = surname_names(&dataset, item_kind);
    let report = itemset_report(&records, top_k, sort, 1, names.as_ref());

    let mut tracker = OutputTracker::new();
    let result = (|| -> Result<()> {
        tracker.write_csv(
            &out_dir.join(format!("{item_kind}_itemsets.csv")),
            &ITEMSET_REPORT_HEADER,
            itemset_report_rows(&report),
        )?;
        tracker.write_csv(
            &out_dir.join(format!("{item_kind}_itemset_sizes.csv")),
            &["size", "count"],
            size_rows(&distribution),
        )?;
        tracker.write_csv(
            &out_dir.join(format!("{item_kind}_itemset_support.csv")),
            &["size", "support_count"],
            support_rows(&distribution),
        )?;
        Ok(())
    })();
    if let Err(error) = result {
        tracker.remove_all();
        return Err(error);
    }
    println!(
        "mined {} maximal frequent itemsets of {item_kind} entities (min_support {min_support})",
        records.len()
    );
    for path in tracker.files() {
        println!("wrote {}", path.display());
    }
    Ok(())
}
