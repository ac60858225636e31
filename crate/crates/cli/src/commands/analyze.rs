//! The composite analysis pipeline: stats, projections, exports,
//! indirect connections, cliques, and itemsets, with a report manifest
//! written last.
//!
//! Stages run in a fixed order. A failing stage aborts the run with its
//! name in the error and every file written so far removed, so a
//! completed output directory is always internally consistent.

use std::path::{Path, PathBuf};
use std::time::SystemTime;

use anyhow::{Context, Result};
use boardnet::cliques::{clique_stats, ego_network, maximal_cliques, MaximalClique};
use boardnet::export::{projection_to_dot, projection_to_graphml};
use boardnet::graph::build_graph;
use boardnet::itemsets::{itemset_report, MinSupport, ReportSortKey};
use boardnet::model::{anonymize, NodeKind};
use boardnet::projection::{
    connection_strength_order, indirect_connections, project, ProjectionGraph,
};

use crate::commands::anonymize::ANON_KEY_VAR;
use crate::commands::cliques::{resolve_min_size, resolve_radius};
use crate::commands::itemsets::{
    mine_for_kind, resolve_min_support, resolve_sort, resolve_top_k, size_rows, support_rows,
    surname_names,
};
use crate::commands::stats::{resolve_star_min_degree, write_stats_outputs};
use crate::commands::{
    clique_rows, clique_stats_row, itemset_report_rows, load_dataset_from, path_rows,
    projection_rows, resolve_dataset_paths, resolve_out_dir, DatasetArgs, CLIQUES_HEADER,
    CLIQUE_STATS_HEADER, ITEMSET_REPORT_HEADER, PATHS_HEADER, PROJECTION_HEADER,
};
use crate::config::RunConfig;
use crate::outputs::{ensure_writable_dir, fmt_bool, OutputTracker};

pub const DEFAULT_MAX_PATH_LEN: usize = 4;
pub const DEFAULT_MAX_PATHS_PER_PAIR: usize = 100;
pub const DEFAULT_INDIRECT_NODE_LIMIT: usize = 500;
pub const DEFAULT_FULL_GRAPH_CLIQUE_LIMIT: usize = 1000;

#[derive(Debug, clap::Args)]
pub struct AnalyzeArgs {
    #[command(flatten)]
    dataset: DatasetArgs,
    /// Output directory.
    #[arg(long, value_name = "DIR")]
    out: Option<PathBuf>,
    /// Ego-network radius for per-base clique reports.
    #[arg(long, value_name = "N")]
    radius: Option<usize>,
    /// Smallest clique size reported.
    #[arg(long, value_name = "N")]
    min_size: Option<usize>,
    /// Support threshold as a decimal fraction in (0, 1].
    #[arg(long, value_name = "FRACTION")]
    min_support: Option<String>,
    /// Itemset report rows to keep.
    #[arg(long, value_name = "N")]
    top_k: Option<usize>,
    /// Itemset report order: support or size.
    #[arg(long, value_name = "KEY")]
    sort: Option<String>,
    /// Longest indirect path searched, in two-mode hops (even, >= 4).
    #[arg(long, value_name = "N")]
    max_path_len: Option<usize>,
    /// Paths enumerated per indirect pair before truncation.
    #[arg(long, value_name = "N")]
    max_paths_per_pair: Option<usize>,
    /// Skip indirect connections for projections larger than this.
    #[arg(long, value_name = "N")]
    indirect_node_limit: Option<usize>,
    /// Skip whole-graph cliques for projections larger than this.
    #[arg(long, value_name = "N")]
    full_graph_clique_limit: Option<usize>,
    /// Smallest degree a node needs to be listed as a star node.
    #[arg(long, value_name = "N")]
    star_min_degree: Option<usize>,
    /// Anonymize the dataset before any analysis.
    #[arg(long)]
    anonymize: bool,
    /// Pseudonym key for --anonymize; falls back to BOARDNET_ANON_KEY,
    /// then the config file.
    #[arg(long, value_name = "KEY")]
    anon_key: Option<String>,
}

#[derive(Debug)]
struct AnalysisParams {
    radius: usize,
    min_size: usize,
    min_support: MinSupport,
    top_k: usize,
    sort: ReportSortKey,
    max_path_len: usize,
    max_paths_per_pair: usize,
    indirect_node_limit: usize,
    full_graph_clique_limit: usize,
    star_min_degree: usize,
    company_bases: Vec<String>,
    director_bases: Vec<String>,
}

impl AnalysisParams {
    fn bases(&self, mode: NodeKind) -> &[String] {
        match mode {
            NodeKind::Company => &self.company_bases,
            NodeKind::Director => &self.director_bases,
        }
    }

    fn echo(&self) -> Vec<(String, String)> {
        let list = |bases: &[String]| {
            if bases.is_empty() {
                "none".to_string()
            } else {
                bases.join(";")
            }
        };
        vec![
            ("radius".into(), self.radius.to_string()),
            ("min_size".into(), self.min_size.to_string()),
            ("min_support".into(), self.min_support.to_string()),
            ("top_k".into(), self.top_k.to_string()),
            (
                "sort".into(),
                match self.sort {
                    ReportSortKey::Support => "support".into(),
                    ReportSortKey::Size => "size".into(),
                },
            ),
            ("max_path_len".into(), self.max_path_len.to_string()),
            (
                "max_paths_per_pair".into(),
                self.max_paths_per_pair.to_string(),
            ),
            (
                "indirect_node_limit".into(),
                self.indirect_node_limit.to_string(),
            ),
            (
                "full_graph_clique_limit".into(),
                self.full_graph_clique_limit.to_string(),
            ),
            ("star_min_degree".into(), self.star_min_degree.to_string()),
            ("company_bases".into(), list(&self.company_bases)),
            ("director_bases".into(), list(&self.director_bases)),
        ]
    }
}

fn resolve_params(args: &AnalyzeArgs, config: &RunConfig) -> Result<AnalysisParams> {
    let section = &config.analysis;
    let max_path_len = args
        .max_path_len
        .or(section.max_path_len)
        .unwrap_or(DEFAULT_MAX_PATH_LEN);
    anyhow::ensure!(
        max_path_len >= 4 && max_path_len % 2 == 0,
        "max_path_len must be an even hop count of at least 4, got {max_path_len}"
    );
    let max_paths_per_pair = args
        .max_paths_per_pair
        .or(section.max_paths_per_pair)
        .unwrap_or(DEFAULT_MAX_PATHS_PER_PAIR);
    anyhow::ensure!(
        max_paths_per_pair >= 1,
        "max_paths_per_pair must be at least 1, got {max_paths_per_pair}"
    );
    Ok(AnalysisParams {
        radius: resolve_radius(args.radius, section.radius)?,
        min_size: resolve_min_size(args.min_size, section.min_size)?,
        min_support: resolve_min_support(
            args.min_support.as_deref(),
            section.min_support.as_deref(),
        )?,
        top_k: resolve_top_k(args.top_k, section.top_k)?,
        sort: resolve_sort(args.sort.as_deref(), section.sort.as_deref())?,
        max_path_len,
        max_paths_per_pair,
        indirect_node_limit: args
            .indirect_node_limit
            .or(section.indirect_node_limit)
            .unwrap_or(DEFAULT_INDIRECT_NODE_LIMIT),
        full_graph_clique_limit: args
            .full_graph_clique_limit
            .or(section.full_graph_clique_limit)
            .unwrap_or(DEFAULT_FULL_GRAPH_CLIQUE_LIMIT),
        star_min_degree: resolve_star_min_degree(args.star_min_degree, section.star_min_degree)?,
        company_bases: section.company_bases.clone().unwrap_or_default(),
        director_bases: section.director_bases.clone().unwrap_or_default(),
    })
}

fn resolve_anon_key(args: &AnalyzeArgs, config: &RunConfig) -> Result<Option<String>> {
    if !args.anonymize {
        return Ok(None);
    }
    let key = args
        .anon_key
        .clone()
        .or_else(|| std::env::var(ANON_KEY_VAR).ok().filter(|key| !key.is_empty()))
        .or_else(|| config.anonymize.key.clone());
    match key {
        Some(key) => Ok(Some(key)),
        None => anyhow::bail!(
            "--anonymize needs a key; pass --anon-key, set {ANON_KEY_VAR}, \
             or set [anonymize].key in the config file"
        ),
    }
}

/// Accumulates the report manifest while stages run.
struct ReportBuilder {
    metadata: Vec<(String, String)>,
    parameters: Vec<(String, String)>,
    sections: Vec<(&'static str, Vec<String>)>,
    notes: Vec<String>,
}

impl ReportBuilder {
    fn new() -> Self {
        ReportBuilder {
            metadata: Vec::new(),
            parameters: Vec::new(),
            sections: Vec::new(),
            notes: Vec::new(),
        }
    }

    fn note(&mut self, text: String) {
        self.notes.push(text);
    }

    fn render(&self) -> String {
        let mut out = String::from("boardnet analyze report\n\n[metadata]\n");
        for (key, value) in &self.metadata {
            out.push_str(&format!("{key}: {value}\n"));
        }
        out.push_str("\n[parameters]\n");
        for (key, value) in &self.parameters {
            out.push_str(&format!("{key}: {value}\n"));
        }
        for (stage, files) in &self.sections {
            out.push_str(&format!("\n[files: {stage}]\n"));
            if files.is_empty() {
                out.push_str("(none)\n");
            }
            for file in files {
                out.push_str(&format!("{file}\n"));
            }
        }
        out.push_str("\n[notes]\n");
        if self.notes.is_empty() {
            out.push_str("(none)\n");
        }
        for note in &self.notes {
            out.push_str(&format!("{note}\n"));
        }
        out
    }
}

fn stage<T>(name: &str, result: Result<T>) -> Result<T> {
    result.with_context(|| format!("analyze aborted at stage {name:?}"))
}

pub fn run(args: AnalyzeArgs, config: &RunConfig, config_path: Option<&Path>) -> Result<()> {
    let paths = resolve_dataset_paths(&args.dataset, &config.dataset)?;
    let out_dir = resolve_out_dir(args.out.as_deref(), &config.output);
    let params = resolve_params(&args, config)?;
    let anon_key = resolve_anon_key(&args, config)?;
    ensure_writable_dir(&out_dir)?;

    let mut tracker = OutputTracker::new();
    let result = pipeline(
        &mut tracker,
        &out_dir,
        &paths,
        &params,
        anon_key.as_deref(),
        config_path,
    );
    if let Err(error) = result {
        tracker.remove_all();
        return Err(error);
    }
    for path in tracker.files() {
        println!("wrote {}", path.display());
    }
    Ok(())
}

fn pipeline(
    tracker: &mut OutputTracker,
    out_dir: &Path,
    paths: &crate::commands::DatasetPaths,
    params: &AnalysisParams,
    anon_key: Option<&str>,
    config_path: Option<&Path>,
) -> Result<()> {
    let mut report = ReportBuilder::new();
    report.metadata.push((
        "generated_at".into(),
        humantime::format_rfc3339_seconds(SystemTime::now()).to_string(),
    ));
    report.metadata.push((
        "config_file".into(),
        config_path
            .map(|path| path.display().to_string())
            .unwrap_or_else(|| "none".into()),
    ));

    let mut dataset = stage("load", load_dataset_from(paths))?;
    if let Some(key) = anon_key {
        dataset = stage(
            "anonymize",
            anonymize(&dataset, key.as_bytes())
                .map(|anonymized| anonymized.dataset)
                .context("anonymizing dataset"),
        )?;
    }
    report
        .metadata
        .push(("anonymized".into(), fmt_bool(anon_key.is_some())));
    let (n_companies, n_directors, n_affiliations) = dataset.counts();
    report
        .metadata
        .push(("companies".into(), n_companies.to_string()));
    report
        .metadata
        .push(("directors".into(), n_directors.to_string()));
    report
        .metadata
        .push(("affiliations".into(), n_affiliations.to_string()));
    report.parameters = params.echo();

    let graph = build_graph(&dataset);
    let modes = [NodeKind::Company, NodeKind::Director];
    let projections: Vec<ProjectionGraph> =
        modes.iter().map(|&mode| project(&graph, mode)).collect();

    let section = |tracker: &mut OutputTracker,
                       report: &mut ReportBuilder,
                       name: &'static str,
                       from: usize| {
        let files = tracker.names_under(out_dir).split_off(from);
        report.sections.push((name, files));
    };

    let from = tracker.files().len();
    stage(
        "stats",
        write_stats_outputs(tracker, out_dir, &dataset, &graph, params.star_min_degree),
    )?;
    section(tracker, &mut report, "stats", from);

    let from = tracker.files().len();
    for projection in &projections {
        stage(
            "projections",
            tracker.write_csv(
                &out_dir.join(format!("{}_projection.csv", projection.mode())),
                &PROJECTION_HEADER,
                projection_rows(projection),
            ),
        )?;
    }
    section(tracker, &mut report, "projections", from);

    let from = tracker.files().len();
    for projection in &projections {
        let mode = projection.mode();
        stage(
            "exports",
            tracker.write_text(
                &out_dir.join(format!("{mode}_projection.graphml")),
                &projection_to_graphml(projection),
            ),
        )?;
        stage(
            "exports",
            tracker.write_text(
                &out_dir.join(format!("{mode}_projection.dot")),
                &projection_to_dot(projection),
            ),
        )?;
    }
    section(tracker, &mut report, "exports", from);

    let from = tracker.files().len();
    for projection in &projections {
        let mode = projection.mode();
        if projection.node_count() > params.indirect_node_limit {
            report.note(format!(
                "paths skipped for the {mode} projection: {} nodes exceed \
                 indirect_node_limit {}",
                projection.node_count(),
                params.indirect_node_limit
            ));
            continue;
        }
        let connections = connection_strength_order(indirect_connections(
            &graph,
            mode,
            params.max_path_len,
            params.max_paths_per_pair,
        ));
        stage(
            "paths",
            tracker.write_csv(
                &out_dir.join(format!("{mode}_paths.csv")),
                &PATHS_HEADER,
                path_rows(&connections),
            ),
        )?;
    }
    section(tracker, &mut report, "paths", from);

    let from = tracker.files().len();
    for projection in &projections {
        let mode = projection.mode();
        let bases = params.bases(mode);
        if bases.is_empty() {
            if projection.node_count() > params.full_graph_clique_limit {
                report.note(format!(
                    "cliques skipped for the {mode} projection: {} nodes exceed \
                     full_graph_clique_limit {}; configure {mode}_bases instead",
                    projection.node_count(),
                    params.full_graph_clique_limit
                ));
                continue;
            }
            let cliques = maximal_cliques(projection, params.min_size);
            stage(
                "cliques",
                tracker.write_csv(
                    &out_dir.join(format!("{mode}_cliques.csv")),
                    &CLIQUES_HEADER,
                    clique_rows(&cliques),
                ),
            )?;
            continue;
        }

        let mut base_clique_rows = Vec::new();
        let mut stats_rows = Vec::new();
        for base in bases {
            let ego = stage(
                "cliques",
                ego_network(projection, base, params.radius)
                    .with_context(|| format!("extracting the ego network of {base:?}")),
            )?;
            let cliques: Vec<MaximalClique> = maximal_cliques(&ego.subgraph, params.min_size)
                .into_iter()
                .filter(|clique| clique.members.iter().any(|member| member == base))
                .collect();
            for mut row in clique_rows(&cliques) {
                row.insert(0, base.clone());
                base_clique_rows.push(row);
            }
            let stats = stage(
                "cliques",
                clique_stats(projection, base, params.radius, params.min_size)
                    .with_context(|| format!("summarizing cliques around {base:?}")),
            )?;
            stats_rows.push(clique_stats_row(&stats));
        }
        let mut header = vec!["base"];
        header.extend_from_slice(&CLIQUES_HEADER);
        stage(
            "cliques",
            tracker.write_csv(
                &out_dir.join(format!("{mode}_base_cliques.csv")),
                &header,
                base_clique_rows,
            ),
        )?;
        stage(
            "cliques",
            tracker.write_csv(
                &out_dir.join(format!("{mode}_clique_stats.csv")),
                &CLIQUE_STATS_HEADER,
                stats_rows,
            ),
        )?;
    }
    section(tracker, &mut report, "cliques", from);

    let from = tracker.files().len();
    for item_kind in modes {
        let (records, distribution) = mine_for_kind(&dataset, item_kind, params.min_support);
        let names = surname_names(&dataset, item_kind);
        let rows = itemset_report(&records, params.top_k, params.sort, 1, names.as_ref());
        stage(
            "itemsets",
            tracker.write_csv(
                &out_dir.join(format!("{item_kind}_itemsets.csv")),
                &ITEMSET_REPORT_HEADER,
                itemset_report_rows(&rows),
            ),
        )?;
        stage(
            "itemsets",
            tracker.write_csv(
                &out_dir.join(format!("{item_kind}_itemset_sizes.csv")),
                &["size", "count"],
                size_rows(&distribution),
            ),
        )?;
        stage(
            "itemsets",
            tracker.write_csv(
                &out_dir.join(format!("{item_kind}_itemset_support.csv")),
                &["size", "support_count"],
                support_rows(&distribution),
            ),
        )?;
    }
    section(tracker, &mut report, "itemsets", from);

    for path in tracker.files() {
        stage(
            "report",
            if path.is_file() {
                Ok(())
            } else {
                Err(anyhow::anyhow!(
                    "declared output {} does not exist",
                    path.display()
                ))
            },
        )?;
    }
    stage(
        "report",
        tracker.write_text(&out_dir.join("report.txt"), &report.render()),
    )?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::config::AnalysisSection;

    fn args() -> AnalyzeArgs {
        AnalyzeArgs {
            dataset: DatasetArgs {
                data_dir: None,
                companies: None,
                directors: None,
                affiliations: None,
            },
            out: None,
            radius: None,
            min_size: None,
            min_support: None,
            top_k: None,
            sort: None,
            max_path_len: None,
            max_paths_per_pair: None,
            indirect_node_limit: None,
            full_graph_clique_limit: None,
            star_min_degree: None,
            anonymize: false,
            anon_key: None,
        }
    }

    #[test]
    fn defaults_resolve() {
        let params = resolve_params(&args(), &RunConfig::default()).unwrap();
        assert_eq!(params.radius, 3);
        assert_eq!(params.min_size, 3);
        assert_eq!(params.min_support.to_string(), "0.0001");
        assert_eq!(params.top_k, 50);
        assert_eq!(params.max_path_len, 4);
        assert_eq!(params.indirect_node_limit, 500);
    }

    #[test]
    fn odd_path_length_is_rejected() {
        let mut bad = args();
        bad.max_path_len = Some(5);
        let err = resolve_params(&bad, &RunConfig::default()).unwrap_err();
        assert!(err.to_string().contains("even hop count"));
    }

    #[test]
    fn flag_overrides_config_section() {
        let mut config = RunConfig::default();
        config.analysis = AnalysisSection {
            radius: Some(2),
            top_k: Some(5),
            ..Default::default()
        };
        let mut flagged = args();
        flagged.radius = Some(4);
        let params = resolve_params(&flagged, &config).unwrap();
        assert_eq!(params.radius, 4);
        assert_eq!(params.top_k, 5);
    }

    #[test]
    fn anonymize_without_key_is_an_error() {
        let mut flagged = args();
        flagged.anonymize = true;
        let err = resolve_anon_key(&flagged, &RunConfig::default()).unwrap_err();
        assert!(err.to_string().contains("--anon-key"));
        assert!(resolve_anon_key(&args(), &RunConfig::default())
            .unwrap()
            .is_none());
    }
}
