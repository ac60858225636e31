//! Maximal clique enumeration, whole-graph or around a base node.

use std::path::PathBuf;

use anyhow::{Context, Result};
use boardnet::cliques::{clique_stats, ego_network, maximal_cliques, MaximalClique};
use boardnet::graph::build_graph;
use boardnet::projection::project;

use crate::commands::{
    clique_rows, clique_stats_row, load_dataset_from, resolve_dataset_paths, resolve_out_dir,
    DatasetArgs, ModeArg, CLIQUES_HEADER, CLIQUE_STATS_HEADER,
};
use crate::config::RunConfig;
use crate::outputs::{ensure_writable_dir, OutputTracker};

pub const DEFAULT_RADIUS: usize = 3;
pub const DEFAULT_MIN_SIZE: usize = 3;

#[derive(Debug, clap::Args)]
pub struct CliquesArgs {
    #[command(flatten)]
    dataset: DatasetArgs,
    /// Projection to enumerate cliques in.
    #[arg(long, value_enum)]
    mode: ModeArg,
    /// Base node: restrict to cliques containing it within its ego
    /// network; whole-graph enumeration when omitted.
    #[arg(long, value_name = "ID")]
    base: Option<String>,
    /// Ego-network radius in projection hops.
    #[arg(long, value_name = "N")]
    radius: Option<usize>,
    /// Smallest clique size reported.
    #[arg(long, value_name = "N")]
    min_size: Option<usize>,
    /// Output directory.
    #[arg(long, value_name = "DIR")]
    out: Option<PathBuf>,
}

pub fn resolve_radius(flag: Option<usize>, config: Option<usize>) -> Result<usize> {
    let radius = flag.or(config).unwrap_or(DEFAULT_RADIUS);
    anyhow::ensure!(radius >= 1, "radius must be at least 1, got {radius}");
    Ok(radius)
}

pub fn resolve_min_size(flag: Option<usize>, config: Option<usize>) -> Result<usize> {
    let min_size = flag.or(config).unwrap_or(DEFAULT_MIN_SIZE);
    anyhow::ensure!(min_size >= 2, "min_size must be at least 2, got {min_size}");
    Ok(min_size)
}

pub fn run(args: CliquesArgs, config: &RunConfig) -> Result<()> {
    let paths = resolve_dataset_paths(&args.dataset, &config.dataset)?;
    let out_dir = resolve_out_dir(args.out.as_deref(), &config.output);
    let radius = resolve_radius(args.radius, config.analysis.radius)?;
    let min_size = resolve_min_size(args.min_size, config.analysis.min_size)?;
    ensure_writable_dir(&out_dir)?;
    let dataset = load_dataset_from(&paths)?;
    let graph = build_graph(&dataset);
    let projection = project(&graph, args.mode.into());
    let mode = projection.mode();

    let mut tracker = OutputTracker::new();
    let result = (|| -> Result<()> {
        let cliques: Vec<MaximalClique> = match &args.base {
            Some(base) => {
                let ego = ego_network(&projection, base, radius)
                    .with_context(|| format!("extracting the ego network of {base:?}"))?;
                maximal_cliques(&ego.subgraph, min_size)
                    .into_iter()
                    .filter(|clique| clique.members.iter().any(|member| member == base))
                    .collect()
            }
            None => maximal_cliques(&projection, min_size),
        };
        tracker.write_csv(
            &out_dir.join(format!("{mode}_cliques.csv")),
            &CLIQUES_HEADER,
            clique_rows(&cliques),
        )?;
        if let Some(base) = &args.base {
            let stats = clique_stats(&projection, base, radius, min_size)
                .with_context(|| format!("summarizing cliques around {base:?}"))?;
            tracker.write_csv(
                &out_dir.join(format!("{mode}_clique_stats.csv")),
                &CLIQUE_STATS_HEADER,
                vec![clique_stats_row(&stats)],
            )?;
        }
        Ok(())
    })();
    if let Err(error) = result {
        tracker.remove_all();
        return Err(error);
    }
    for path in tracker.files() {
        println!("wrote {}", path.display());
    }
    Ok(())
}
