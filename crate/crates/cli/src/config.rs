//! Run configuration loaded from a TOML file.
//!
//! Every field is optional; command-line flags override file values and
//! built-in defaults fill the rest. Unknown keys are rejected so that a
//! misspelled option fails the run before any work starts.

use std::path::{Path, PathBuf};

use anyhow::{Context, Result};
use serde::Deserialize;

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    #[serde(default)]
    pub dataset: DatasetSection,
    #[serde(default)]
    pub output: OutputSection,
    #[serde(default)]
    pub crawl: CrawlSection,
    #[serde(default)]
    pub analysis: AnalysisSection,
    #[serde(default)]
    pub relations: RelationsSection,
    #[serde(default)]
    pub anonymize: AnonymizeSection,
}

impl RunConfig {
    /// Reads the file when a path is given, otherwise yields the empty
    /// configuration.
    pub fn load(path: Option<&Path>) -> Result<RunConfig> {
        let Some(path) = path else {
            return Ok(RunConfig::default());
        };
        let text = std::fs::read_to_string(path)
            .with_context(|| format!("reading config {}", path.display()))?;
        toml::from_str(&text).with_context(|| format!("parsing config {}", path.display()))
    }
}

/// Input dataset locations; either a directory holding the three
/// standard file names or explicit per-file paths.
#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DatasetSection {
    pub dir: Option<PathBuf>,
    pub companies: Option<PathBuf>,
    pub directors: Option<PathBuf>,
    pub affiliations: Option<PathBuf>,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OutputSection {
    pub dir: Option<PathBuf>,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CrawlSection {
    pub base_kind: Option<String>,
    pub base: Option<String>,
    pub max_nodes: Option<usize>,
    pub max_depth: Option<usize>,
    pub retries: Option<u32>,
    /// Directory with the three dataset files; when set the crawl runs
    /// against them instead of the network.
    pub fixture_dir: Option<PathBuf>,
    pub company_url_template: Option<String>,
    pub director_url_template: Option<String>,
    pub name_pattern: Option<String>,
    pub director_link_pattern: Option<String>,
    pub company_link_pattern: Option<String>,
    pub rate_limit_per_sec: Option<f64>,
    pub cache_dir: Option<PathBuf>,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AnalysisSection {
    pub radius: Option<usize>,
    pub min_size: Option<usize>,
    pub min_support: Option<String>,
    pub top_k: Option<usize>,
    pub sort: Option<String>,
    pub max_path_len: Option<usize>,
    pub max_paths_per_pair: Option<usize>,
    /// Indirect-connection enumeration is skipped for a mode whose
    /// projection has more nodes than this.
    pub indirect_node_limit: Option<usize>,
    /// Whole-graph clique enumeration is skipped for a mode whose
    /// projection has more nodes than this; configure bases instead.
    pub full_graph_clique_limit: Option<usize>,
    /// Ego-network clique bases, per projection mode.
    pub company_bases: Option<Vec<String>>,
    pub director_bases: Option<Vec<String>>,
    pub star_min_degree: Option<usize>,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RelationsSection {
    /// Replay fixture directory (search/ and completions/ subtrees).
    pub fixtures: Option<PathBuf>,
    /// Directory of per-director web profiles named `<din>.json`.
    pub profiles: Option<PathBuf>,
    pub retries: Option<u32>,
    pub search_endpoint: Option<String>,
    pub llm_endpoint: Option<String>,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AnonymizeSection {
    pub key: Option<String>,
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn empty_path_yields_defaults() {
        let config = RunConfig::load(None).unwrap();
        assert!(config.dataset.dir.is_none());
        assert!(config.analysis.min_support.is_none());
    }

    #[test]
    fn parses_all_sections() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("run.toml");
        std::fs::write(
            &path,
            r#"
[dataset]
dir = "data"

[output]
dir = "out"

[crawl]
base_kind = "company"
base = "A"
max_nodes = 10

[analysis]
radius = 2
min_support = "0.25"
director_bases = ["1", "6"]

[relations]
fixtures = "replay"

[anonymize]
key = "k1"
"#,
        )
        .unwrap();
        let config = RunConfig::load(Some(&path)).unwrap();
        assert_eq!(config.dataset.dir.as_deref(), Some(Path::new("data")));
        assert_eq!(config.crawl.base.as_deref(), Some("A"));
        assert_eq!(config.analysis.radius, Some(2));
        assert_eq!(
            config.analysis.director_bases.as_deref(),
            Some(&["1".to_string(), "6".to_string()][..])
        );
        assert_eq!(config.anonymize.key.as_deref(), Some("k1"));
    }

    #[test]
    fn unknown_keys_are_rejected() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("run.toml");
        std::fs::write(&path, "[analysis]\nmin_suport = \"0.1\"\n").unwrap();
        let err = RunConfig::load(Some(&path)).unwrap_err();
        assert!(format!("{err:#}").contains("run.toml"));
    }
}
