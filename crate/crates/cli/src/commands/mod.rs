//! Subcommand implementations and the argument/configuration plumbing
//! they share: dataset path resolution, output row builders, and the
//! pinned CSV headers.

pub mod analyze;
pub mod anonymize;
pub mod cliques;
pub mod crawl;
pub mod export;
pub mod itemsets;
pub mod project;
pub mod relations;
pub mod stats;

use std::path::{Path, PathBuf};

use anyhow::{bail, Context, Result};
use boardnet::cliques::{CliqueStats, MaximalClique};
use boardnet::graph::DegreeHistogram;
use boardnet::itemsets::ItemsetReportRow;
use boardnet::model::{load_dataset, BipartiteDataset, NodeKind};
use boardnet::projection::{IndirectConnection, ProjectionGraph};
use clap::ValueEnum;

use crate::config::{DatasetSection, OutputSection};
use crate::outputs::{fmt_bool, fmt_f64, join_ids};

/// Projection mode or transaction item kind on the command line.
#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ModeArg {
    Company,
    Director,
}

impl From<ModeArg> for NodeKind {
    fn from(mode: ModeArg) -> NodeKind {
        match mode {
            ModeArg::Company => NodeKind::Company,
            ModeArg::Director => NodeKind::Director,
        }
    }
}

/// Dataset location flags accepted by every dataset-consuming command.
#[derive(Debug, clap::Args)]
pub struct DatasetArgs {
    /// Directory containing companies.csv, directors.csv, and
    /// affiliations.csv.
    #[arg(long, value_name = "DIR")]
    pub data_dir: Option<PathBuf>,
    /// Companies file; overrides --data-dir.
    #[arg(long, value_name = "FILE")]
    pub companies: Option<PathBuf>,
    /// Directors file; overrides --data-dir.
    #[arg(long, value_name = "FILE")]
    pub directors: Option<PathBuf>,
    /// Affiliations file; overrides --data-dir.
    #[arg(long, value_name = "FILE")]
    pub affiliations: Option<PathBuf>,
}

/// The three dataset files after flag and config resolution.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DatasetPaths {
    pub companies: PathBuf,
    pub directors: PathBuf,
    pub affiliations: PathBuf,
}

/// Resolves each dataset file from, in order of precedence: its path
/// flag, the --data-dir flag, the config path, the config directory.
pub fn resolve_dataset_paths(
    args: &DatasetArgs,
    config: &DatasetSection,
) -> Result<DatasetPaths> {
    let pick = |flag: &Option<PathBuf>, section: &Option<PathBuf>, file: &str| {
        flag.clone()
            .or_else(|| args.data_dir.as_ref().map(|dir| dir.join(file)))
            .or_else(|| section.clone())
            .or_else(|| config.dir.as_ref().map(|dir| dir.join(file)))
    };
    let companies = pick(&args.companies, &config.companies, "companies.csv");
    let directors = pick(&args.directors, &config.directors, "directors.csv");
    let affiliations = pick(&args.affiliations, &config.affiliations, "affiliations.csv");
    match (companies, directors, affiliations) {
        (Some(companies), Some(directors), Some(affiliations)) => Ok(DatasetPaths {
            companies,
            directors,
            affiliations,
        }),
        _ => bail!(
            "no dataset configured; pass --data-dir (or the three file flags) \
             or set the [dataset] section in the config file"
        ),
    }
}

pub fn load_dataset_from(paths: &DatasetPaths) -> Result<BipartiteDataset> {
    load_dataset(&paths.companies, &paths.directors, &paths.affiliations)
        .context("loading dataset")
}

/// Output directory: --out flag, then config, then ./out.
pub fn resolve_out_dir(flag: Option<&Path>, config: &OutputSection) -> PathBuf {
    flag.map(Path::to_path_buf)
        .or_else(|| config.dir.clone())
        .unwrap_or_else(|| PathBuf::from("out"))
}

pub const DEGREE_HEADER: [&str; 4] = ["degree", "count", "fraction", "cumulative_ge_fraction"];
pub const PROJECTION_HEADER: [&str; 4] = ["u", "v", "weight", "shared"];
pub const PATHS_HEADER: [&str; 5] = ["u", "v", "degree", "path_count", "truncated"];
pub const CLIQUES_HEADER: [&str; 4] = [
    "members",
    "size",
    "shared_intersection_count",
    "shared_union_count",
];
pub const CLIQUE_STATS_HEADER: [&str; 14] = [
    "base",
    "radius",
    "same_mode_neighborhood",
    "opposite_mode_neighborhood",
    "clique_count",
    "mean_clique_size",
    "largest_size",
    "largest_shared",
    "smallest_size",
    "smallest_shared",
    "most_shared_size",
    "most_shared_count",
    "least_shared_size",
    "least_shared_count",
];
pub const ITEMSET_REPORT_HEADER: [&str; 6] = [
    "rank",
    "support_fraction",
    "support_count",
    "items",
    "intersecting",
    "shared_surname",
];

pub fn degree_rows(histogram: &DegreeHistogram) -> Vec<Vec<String>> {
    histogram
        .rows()
        .into_iter()
        .map(|row| {
            vec![
                row.degree.to_string(),
                row.count.to_string(),
                fmt_f64(row.fraction),
                fmt_f64(row.cumulative_ge_fraction),
            ]
        })
        .collect()
}

pub fn projection_rows(projection: &ProjectionGraph) -> Vec<Vec<String>> {
    projection
        .edges()
        .iter()
        .map(|edge| {
            vec![
                edge.u.clone(),
                edge.v.clone(),
                edge.weight().to_string(),
                join_ids(&edge.shared),
            ]
        })
        .collect()
}

pub fn path_rows(connections: &[IndirectConnection]) -> Vec<Vec<String>> {
    connections
        .iter()
        .map(|connection| {
            vec![
                connection.pair.0.clone(),
                connection.pair.1.clone(),
                connection.connection_degree.to_string(),
                connection.path_count.to_string(),
                fmt_bool(connection.truncated),
            ]
        })
        .collect()
}

pub fn clique_rows(cliques: &[MaximalClique]) -> Vec<Vec<String>> {
    cliques
        .iter()
        .map(|clique| {
            vec![
                join_ids(&clique.members),
                clique.size().to_string(),
                clique.shared_intersection.len().to_string(),
                clique.shared_union.len().to_string(),
            ]
        })
        .collect()
}

/// One row in the consolidated clique-report column order: base and
/// radius, neighborhood sizes, clique count and mean size, then the
/// extremal cliques by size and by shared-entity count.
pub fn clique_stats_row(stats: &CliqueStats) -> Vec<String> {
    let mut row = vec![
        stats.base.clone(),
        stats.radius.to_string(),
        stats.same_mode_neighborhood.to_string(),
        stats.opposite_mode_neighborhood.to_string(),
        stats.clique_count.to_string(),
        fmt_f64(stats.mean_clique_size),
    ];
    for summary in [
        stats.largest,
        stats.smallest,
        stats.most_shared,
        stats.least_shared,
    ] {
        match summary {
            Some(summary) => {
                row.push(summary.size.to_string());
                row.push(summary.shared_count.to_string());
            }
            None => {
                row.push(String::new());
                row.push(String::new());
            }
        }
    }
    row
}

pub fn itemset_report_rows(rows: &[ItemsetReportRow]) -> Vec<Vec<String>> {
    rows.iter()
        .map(|row| {
            vec![
                row.rank.to_string(),
                fmt_f64(row.support_fraction),
                row.support_count.to_string(),
                join_ids(&row.items),
                join_ids(&row.intersecting),
                fmt_bool(row.shared_surname),
            ]
        })
        .collect()
}
