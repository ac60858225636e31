//! Personal-relation lookups for director pairs plus professional-link
//! matching over web profiles.

use std::collections::HashMap;
use std::path::{Path, PathBuf};

use anyhow::{bail, Context, Result};
use boardnet::model::DirectorRecord;
use boardnet::relations::live::{
    HttpAnalysisClient, HttpSearchClient, LLM_API_KEY_VAR, LLM_MODEL_VAR, SEARCH_API_KEY_VAR,
};
use boardnet::relations::replay::{ReplayAnalysisClient, ReplaySearchClient};
use boardnet::relations::{
    identify_personal_relation, load_web_profile, match_professional_links, ClientError,
    ProfessionalLink, RelationFinding, RelationStatus, SearchClient, TextAnalysisClient,
};

use crate::commands::{load_dataset_from, resolve_dataset_paths, resolve_out_dir, DatasetArgs};
use crate::config::RunConfig;
use crate::outputs::{ensure_writable_dir, OutputTracker};

pub const DEFAULT_RETRIES: u32 = 2;

pub const FINDINGS_HEADER: [&str; 6] =
    ["din_1", "din_2", "status", "label", "evidence_url", "error"];
pub const PROFESSIONAL_HEADER: [&str; 5] = ["din_1", "din_2", "link", "name_1", "name_2"];

#[derive(Debug, clap::Args)]
pub struct RelationsArgs {
    #[command(flatten)]
    dataset: DatasetArgs,
    /// CSV of director pairs to look up, with header din_1,din_2.
    #[arg(long, value_name = "FILE")]
    pairs: PathBuf,
    /// Replay fixture directory (search/ and completions/ subtrees).
    #[arg(long, value_name = "DIR")]
    fixtures: Option<PathBuf>,
    /// Directory of per-director web profiles named <din>.json.
    #[arg(long, value_name = "DIR")]
    profiles: Option<PathBuf>,
    /// Client failures retried per call.
    #[arg(long, value_name = "N")]
    retries: Option<u32>,
    /// Query live HTTP endpoints instead of replay fixtures.
    #[arg(long)]
    live: bool,
    /// Output directory.
    #[arg(long, value_name = "DIR")]
    out: Option<PathBuf>,
}

struct Clients {
    search: Box<dyn SearchClient>,
    analysis: Box<dyn TextAnalysisClient>,
}

fn build_clients(args: &RelationsArgs, config: &RunConfig) -> Result<Clients> {
    if args.live {
        let section = &config.relations;
        let Some(search_endpoint) = section.search_endpoint.clone() else {
            bail!("live mode requires [relations].search_endpoint in the config file");
        };
        let Some(llm_endpoint) = section.llm_endpoint.clone() else {
            bail!("live mode requires [relations].llm_endpoint in the config file");
        };
        let credentials = |error: ClientError| {
            anyhow::anyhow!(
                "{error}; live mode needs {SEARCH_API_KEY_VAR}, {LLM_API_KEY_VAR}, and \
                 {LLM_MODEL_VAR} set, or drop --live and use replay fixtures via --fixtures"
            )
        };
        return Ok(Clients {
            search: Box::new(HttpSearchClient::from_env(search_endpoint).map_err(credentials)?),
            analysis: Box::new(HttpAnalysisClient::from_env(llm_endpoint).map_err(credentials)?),
        });
    }
    let fixtures = args
        .fixtures
        .clone()
        .or_else(|| config.relations.fixtures.clone());
    let Some(fixtures) = fixtures else {
        bail!(
            "no relation clients configured; pass --fixtures <dir> (or set \
             [relations].fixtures) for replay mode, or --live for HTTP clients"
        );
    };
    Ok(Clients {
        search: Box::new(ReplaySearchClient::new(&fixtures)),
        analysis: Box::new(ReplayAnalysisClient::new(&fixtures)),
    })
}

/// Reads the pairs file: a CSV with header `din_1,din_2`.
pub fn read_pairs(path: &Path) -> Result<Vec<(String, String)>> {
    let mut reader = csv::Reader::from_path(path)
        .with_context(|| format!("reading pairs file {}", path.display()))?;
    let header = reader
        .headers()
        .with_context(|| format!("reading pairs file {}", path.display()))?;
    if header != vec!["din_1", "din_2"] {
        bail!(
            "pairs file {} must have the header din_1,din_2",
            path.display()
        );
    }
    let mut pairs = Vec::new();
    for (index, record) in reader.records().enumerate() {
        let record =
            record.with_context(|| format!("reading pairs file {}", path.display()))?;
        if record.len() != 2 {
            bail!(
                "pairs file {} row {}: expected 2 columns, found {}",
                path.display(),
                index + 2,
                record.len()
            );
        }
        pairs.push((record[0].to_string(), record[1].to_string()));
    }
    Ok(pairs)
}

/// A finding that never touched the clients, for pairs the dataset does
/// not know.
fn unknown_director_finding(din_1: &str, din_2: &str, missing: &str) -> RelationFinding {
    RelationFinding {
        din_1: din_1.to_string(),
        din_2: din_2.to_string(),
        status: RelationStatus::Error,
        label: None,
        evidence_url: None,
        raw_responses: Vec::new(),
        error: Some(format!("unknown director {missing:?} in pairs file")),
    }
}

fn status_text(status: RelationStatus) -> &'static str {
    match status {
        RelationStatus::Identified => "identified",
        RelationStatus::NotAvailable => "not_available",
        RelationStatus::Error => "error",
    }
}

pub fn finding_rows(findings: &[RelationFinding]) -> Vec<Vec<String>> {
    findings
        .iter()
        .map(|finding| {
            vec![
                finding.din_1.clone(),
                finding.din_2.clone(),
                status_text(finding.status).to_string(),
                finding.label.clone().unwrap_or_default(),
                finding.evidence_url.clone().unwrap_or_default(),
                finding.error.clone().unwrap_or_default(),
            ]
        })
        .collect()
}

/// Professional-link rows for every pair whose two profile files exist.
fn professional_rows(
    profiles_dir: &Path,
    pairs: &[(String, String)],
) -> Result<Vec<Vec<String>>> {
    let mut rows = Vec::new();
    for (din_1, din_2) in pairs {
        let path_1 = profiles_dir.join(format!("{din_1}.json"));
        let path_2 = profiles_dir.join(format!("{din_2}.json"));
        if !path_1.is_file() || !path_2.is_file() {
            continue;
        }
        let profile_1 = load_web_profile(&path_1)
            .with_context(|| format!("loading profile {}", path_1.display()))?;
        let profile_2 = load_web_profile(&path_2)
            .with_context(|| format!("loading profile {}", path_2.display()))?;
        for ProfessionalLink {
            link,
            name_1,
            name_2,
        } in match_professional_links(&profile_1, &profile_2)
        {
            rows.push(vec![din_1.clone(), din_2.clone(), link, name_1, name_2]);
        }
    }
    Ok(rows)
}

pub fn run(args: RelationsArgs, config: &RunConfig) -> Result<()> {
    let paths = resolve_dataset_paths(&args.dataset, &config.dataset)?;
    let out_dir = resolve_out_dir(args.out.as_deref(), &config.output);
    let retries = args
        .retries
        .or(config.relations.retries)
        .unwrap_or(DEFAULT_RETRIES);
    ensure_writable_dir(&out_dir)?;
    let dataset = load_dataset_from(&paths)?;
    let pairs = read_pairs(&args.pairs)?;
    let mut clients = build_clients(&args, config)?;

    let by_din: HashMap<&str, &DirectorRecord> = dataset
        .directors()
        .iter()
        .map(|director| (director.din.as_str(), director))
        .collect();
    let mut findings = Vec::with_capacity(pairs.len());
    for (din_1, din_2) in &pairs {
        let finding = match (by_din.get(din_1.as_str()), by_din.get(din_2.as_str())) {
            (Some(director_1), Some(director_2)) => identify_personal_relation(
                director_1,
                director_2,
                clients.search.as_mut(),
                clients.analysis.as_mut(),
                retries,
            ),
            (None, _) => unknown_director_finding(din_1, din_2, din_1),
            (_, None) => unknown_director_finding(din_1, din_2, din_2),
        };
        findings.push(finding);
    }

    let profiles_dir = args
        .profiles
        .clone()
        .or_else(|| config.relations.profiles.clone());
    let mut tracker = OutputTracker::new();
    let result = (|| -> Result<()> {
        tracker.write_csv(
            &out_dir.join("relation_findings.csv"),
            &FINDINGS_HEADER,
            finding_rows(&findings),
        )?;
        let audit = serde_json::to_string_pretty(&findings).context("serializing findings")?;
        tracker.write_text(&out_dir.join("relation_findings.json"), &audit)?;
        if let Some(dir) = &profiles_dir {
            tracker.write_csv(
                &out_dir.join("professional_links.csv"),
                &PROFESSIONAL_HEADER,
                professional_rows(dir, &pairs)?,
            )?;
        }
        Ok(())
    })();
    if let Err(error) = result {
        tracker.remove_all();
        return Err(error);
    }

    let count = |status| {
        findings
            .iter()
            .filter(|finding| finding.status == status)
            .count()
    };
    println!(
        "{} pairs: {} identified, {} not available, {} errors",
        findings.len(),
        count(RelationStatus::Identified),
        count(RelationStatus::NotAvailable),
        count(RelationStatus::Error),
    );
    for path in tracker.files() {
        println!("wrote {}", path.display());
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn pairs_file_header_is_enforced() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("pairs.csv");
        std::fs::write(&path, "din_1,din_2\n1,6\n2,6\n").unwrap();
        assert_eq!(
            read_pairs(&path).unwrap(),
            vec![
                ("1".to_string(), "6".to_string()),
                ("2".to_string(), "6".to_string())
            ]
        );

        std::fs::write(&path, "a,b\n1,6\n").unwrap();
        let err = read_pairs(&path).unwrap_err();
        assert!(err.to_string().contains("din_1,din_2"));
    }

    #[test]
    fn finding_rows_cover_all_statuses() {
        let findings = vec![
            RelationFinding {
                din_1: "1".into(),
                din_2: "6".into(),
                status: RelationStatus::Identified,
                label: Some("nephew - uncle".into()),
                evidence_url: Some("https://example.org/a".into()),
                raw_responses: Vec::new(),
                error: None,
            },
            unknown_director_finding("9", "6", "9"),
        ];
        let rows = finding_rows(&findings);
        assert_eq!(
            rows[0],
            vec![
                "1",
                "6",
                "identified",
                "nephew - uncle",
                "https://example.org/a",
                ""
            ]
        );
        assert_eq!(rows[1][2], "error");
        assert!(rows[1][5].contains("unknown director"));
    }
}
