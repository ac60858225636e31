//! One-mode projection as a weighted edge list.

use std::path::PathBuf;

use anyhow::Result;
use boardnet::graph::build_graph;
use boardnet::projection::project;

use crate::commands::{
    load_dataset_from, projection_rows, resolve_dataset_paths, resolve_out_dir, DatasetArgs,
    ModeArg, PROJECTION_HEADER,
};
use crate::config::RunConfig;
use crate::outputs::{ensure_writable_dir, OutputTracker};

#[derive(Debug, clap::Args)]
pub struct ProjectArgs {
    #[command(flatten)]
    dataset: DatasetArgs,
    /// Which projection to build.
    #[arg(long, value_enum)]
    mode: ModeArg,
    /// Output directory.
    #[arg(long, value_name = "DIR")]
    out: Option<PathBuf>,
}

pub fn run(args: ProjectArgs, config: &RunConfig) -> Result<()> {
    let paths = resolve_dataset_paths(&args.dataset, &config.dataset)?;
    let out_dir = resolve_out_dir(args.out.as_deref(), &config.output);
    ensure_writable_dir(&out_dir)?;
    let dataset = load_dataset_from(&paths)?;
    let graph = build_graph(&dataset);
    let projection = project(&graph, args.mode.into());

    let path = out_dir.join(format!("{}_projection.csv", projection.mode()));
    let mut tracker = OutputTracker::new();
    tracker.write_csv(&path, &PROJECTION_HEADER, projection_rows(&projection))?;
    println!(
        "wrote {} ({} nodes, {} edges)",
        path.display(),
        projection.node_count(),
        projection.edge_count()
    );
    Ok(())
}
