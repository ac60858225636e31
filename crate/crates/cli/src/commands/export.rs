//! Projection export to GraphML and DOT.

use std::path::PathBuf;

use anyhow::Result;
use boardnet::export::{projection_to_dot, projection_to_graphml};
use boardnet::graph::build_graph;
use boardnet::model::NodeKind;
use boardnet::projection::project;
use clap::ValueEnum;

use crate::commands::{load_dataset_from, resolve_dataset_paths, resolve_out_dir, DatasetArgs, ModeArg};
use crate::config::RunConfig;
use crate::outputs::{ensure_writable_dir, OutputTracker};

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ExportFormat {
    Graphml,
    Dot,
    Both,
}

#[derive(Debug, clap::Args)]
pub struct ExportArgs {
    #[command(flatten)]
    dataset: DatasetArgs,
    /// Projection to export; both when omitted.
    #[arg(long, value_enum)]
    mode: Option<ModeArg>,
    #[arg(long, value_enum, default_value = "both")]
    format: ExportFormat,
    /// Output directory.
    #[arg(long, value_name = "DIR")]
    out: Option<PathBuf>,
}

pub fn run(args: ExportArgs, config: &RunConfig) -> Result<()> {
    let paths = resolve_dataset_paths(&args.dataset, &config.dataset)?;
    let out_dir = resolve_out_dir(args.out.as_deref(), &config.output);
    ensure_writable_dir(&out_dir)?;
    let dataset = load_dataset_from(&paths)?;
    let graph = build_graph(&dataset);

    let modes: Vec<NodeKind> = match args.mode {
        Some(mode) => vec![mode.into()],
        None => vec![NodeKind::Company, NodeKind::Director],
    };
    let mut tracker = OutputTracker::new();
    let result = (|| -> Result<()> {
        for mode in &modes {
            let projection = project(&graph, *mode);
            if matches!(args.format, ExportFormat::Graphml | ExportFormat::Both) {
                tracker.write_text(
                    &out_dir.join(format!("{mode}_projection.graphml")),
                    &projection_to_graphml(&projection),
                )?;
            }
            if matches!(args.format, ExportFormat::Dot | ExportFormat::Both) {
                tracker.write_text(
                    &out_dir.join(format!("{mode}_projection.dot")),
                    &projection_to_dot(&projection),
                )?;
            }
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
