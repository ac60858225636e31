//! Degree histograms and the network summary.

use std::path::{Path, PathBuf};

use anyhow::Result;
use boardnet::graph::{articulation_report, build_graph, degree_histogram, star_nodes, CorporateGraph};
use boardnet::model::{BipartiteDataset, NodeKind};

use crate::commands::{degree_rows, load_dataset_from, resolve_dataset_paths, resolve_out_dir, DatasetArgs, DEGREE_HEADER};
use crate::config::RunConfig;
use crate::outputs::{ensure_writable_dir, fmt_f64, OutputTracker};

/// How many stars or cut vertices the text summary lists before
/// collapsing the rest into a count.
const SUMMARY_LIST_CAP: usize = 20;

pub const DEFAULT_STAR_MIN_DEGREE: usize = 10;

#[derive(Debug, clap::Args)]
pub struct StatsArgs {
    #[command(flatten)]
    dataset: DatasetArgs,
    /// Output directory.
    #[arg(long, value_name = "DIR")]
    out: Option<PathBuf>,
    /// Smallest degree a node needs to be listed as a star node.
    #[arg(long, value_name = "N")]
    star_min_degree: Option<usize>,
}

pub fn run(args: StatsArgs, config: &RunConfig) -> Result<()> {
    let paths = resolve_dataset_paths(&args.dataset, &config.dataset)?;
    let out_dir = resolve_out_dir(args.out.as_deref(), &config.output);
    let star_min_degree = resolve_star_min_degree(
        args.star_min_degree,
        config.analysis.star_min_degree,
    )?;
    ensure_writable_dir(&out_dir)?;
    let dataset = load_dataset_from(&paths)?;
    let graph = build_graph(&dataset);

    let mut tracker = OutputTracker::new();
    if let Err(error) = write_stats_outputs(&mut tracker, &out_dir, &dataset, &graph, star_min_degree) {
        tracker.remove_all();
        return Err(error);
    }
    for path in tracker.files() {
        println!("wrote {}", path.display());
    }
    Ok(())
}

pub fn resolve_star_min_degree(flag: Option<usize>, config: Option<usize>) -> Result<usize> {
    let value = flag.or(config).unwrap_or(DEFAULT_STAR_MIN_DEGREE);
    anyhow::ensure!(value >= 1, "star_min_degree must be at least 1, got {value}");
    Ok(value)
}

/// Writes the two degree CSVs and the text summary; shared with the
/// analyze pipeline.
pub fn write_stats_outputs(
    tracker: &mut OutputTracker,
    out_dir: &Path,
    dataset: &BipartiteDataset,
    graph: &CorporateGraph,
    star_min_degree: usize,
) -> Result<()> {
    let company_histogram = degree_histogram(graph, NodeKind::Company);
    let director_histogram = degree_histogram(graph, NodeKind::Director);
    tracker.write_csv(
        &out_dir.join("company_degrees.csv"),
        &DEGREE_HEADER,
        degree_rows(&company_histogram),
    )?;
    tracker.write_csv(
        &out_dir.join("director_degrees.csv"),
        &DEGREE_HEADER,
        degree_rows(&director_histogram),
    )?;

    let (n_companies, n_directors, n_affiliations) = dataset.counts();
    let mut summary = String::new();
    summary.push_str(&format!("companies: {n_companies}\n"));
    summary.push_str(&format!("directors: {n_directors}\n"));
    summary.push_str(&format!("affiliations: {n_affiliations}\n"));
    for kind in [NodeKind::Company, NodeKind::Director] {
        summary.push_str(&degree_line(graph, kind));
    }
    for kind in [NodeKind::Company, NodeKind::Director] {
        let stars = star_nodes(graph, kind, star_min_degree);
        summary.push_str(&format!(
            "star {kind} nodes (degree >= {star_min_degree}): {}\n",
            stars.len()
        ));
        for (id, degree) in stars.iter().take(SUMMARY_LIST_CAP) {
            summary.push_str(&format!("  {id}: {degree}\n"));
        }
        if stars.len() > SUMMARY_LIST_CAP {
            summary.push_str(&format!("  ... and {} more\n", stars.len() - SUMMARY_LIST_CAP));
        }
    }
    let cuts = articulation_report(graph);
    summary.push_str(&format!("cut vertices: {}\n", cuts.len()));
    for (kind, id) in cuts.iter().take(SUMMARY_LIST_CAP) {
        summary.push_str(&format!("  {kind} {id}\n"));
    }
    if cuts.len() > SUMMARY_LIST_CAP {
        summary.push_str(&format!("  ... and {} more\n", cuts.len() - SUMMARY_LIST_CAP));
    }
    tracker.write_text(&out_dir.join("stats_summary.txt"), &summary)
}

fn degree_line(graph: &CorporateGraph, kind: NodeKind) -> String {
    let histogram = degree_histogram(graph, kind);
    if histogram.total() == 0 {
        return format!("{kind} degree: n/a (no nodes)\n");
    }
    let counts = histogram.counts();
    let min = *counts.keys().next().expect("non-empty histogram");
    let max = *counts.keys().last().expect("non-empty histogram");
    let sum: usize = counts.iter().map(|(degree, count)| degree * count).sum();
    let mean = sum as f64 / histogram.total() as f64;
    format!("{kind} degree: min {min}, max {max}, mean {}\n", fmt_f64(mean))
}
