//! Domain records, the three-file dataset schema, dataset validation,
//! and deterministic anonymization.
//!
//! A dataset is stored as three UTF-8 comma-separated files, each with a
//! single header row:
//!
//! * `companies.csv` with header `cin,name,url`
//! * `directors.csv` with header `din,name,url`
//! * `affiliations.csv` with header `cin,din`

use std::collections::{BTreeMap, HashMap, HashSet};
use std::fmt;
use std::fs::File;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use sha2::{Digest, Sha256};
use thiserror::Error;

/// The two node classes of the two-mode corporate network.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum NodeKind {
    Company,
    Director,
}

impl NodeKind {
    /// The opposite node class.
    pub fn opposite(self) -> NodeKind {
        match self {
            NodeKind::Company => NodeKind::Director,
            NodeKind::Director => NodeKind::Company,
        }
    }
}

impl fmt::Display for NodeKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            NodeKind::Company => write!(f, "company"),
            NodeKind::Director => write!(f, "director"),
        }
    }
}

impl FromStr for NodeKind {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "company" => Ok(NodeKind::Company),
            "director" => Ok(NodeKind::Director),
            other => Err(format!(
                "unknown node kind {other:?}; expected \"company\" or \"director\""
            )),
        }
    }
}

/// One row of `companies.csv`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CompanyRecord {
    /// Unique company identifier.
    pub cin: String,
    /// Display name.
    pub name: String,
    /// Source locator; may be empty after anonymization.
    pub url: String,
}

/// One row of `directors.csv`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DirectorRecord {
    /// Unique director identifier.
    pub din: String,
    /// Display name.
    pub name: String,
    /// Source locator; may be empty after anonymization.
    pub url: String,
}

/// One row of `affiliations.csv`: a directorship link.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct AffiliationRecord {
    pub cin: String,
    pub din: String,
}

/// Errors raised while loading, validating, or anonymizing a dataset.
#[derive(Debug, Error)]
pub enum DatasetError {
    #[error("failed to access {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    /// Malformed row: bad header, wrong column count, or unreadable CSV.
    #[error("{path}:{row}: {message}")]
    Parse {
        path: PathBuf,
        row: u64,
        message: String,
    },
    /// Integrity violation located in a specific file row.
    #[error("{path}:{row}: {message}")]
    IntegrityAt {
        path: PathBuf,
        row: u64,
        message: String,
    },
    /// Integrity violation in an in-memory dataset.
    #[error("{0}")]
    Integrity(String),
    #[error("anonymization key must not be empty")]
    EmptyKey,
    #[error("pseudonym collision on {pseudonym:?}; use a different key")]
    PseudonymCollision { pseudonym: String },
}

/// The three canonical record lists, validated jointly.
///
/// Invariants enforced at construction:
///
/// * every `cin` and `din` is non-empty and unique,
/// * `(cin, din)` affiliation pairs are unique,
/// * every affiliation references an existing company and director.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct BipartiteDataset {
    companies: Vec<CompanyRecord>,
    directors: Vec<DirectorRecord>,
    affiliations: Vec<AffiliationRecord>,
}

impl BipartiteDataset {
    /// Validates the three record lists and assembles a dataset.
    pub fn new(
        companies: Vec<CompanyRecord>,
        directors: Vec<DirectorRecord>,
        affiliations: Vec<AffiliationRecord>,
    ) -> Result<Self, DatasetError> {
        let mut cins = HashSet::with_capacity(companies.len());
        for company in &companies {
            if company.cin.is_empty() {
                return Err(DatasetError::Integrity(
                    "company with empty cin".to_string(),
                ));
            }
            if !cins.insert(company.cin.as_str()) {
                return Err(DatasetError::Integrity(format!(
                    "duplicate company identifier {:?}",
                    company.cin
                )));
            }
        }
        let mut dins = HashSet::with_capacity(directors.len());
        for director in &directors {
            if director.din.is_empty() {
                return Err(DatasetError::Integrity(
                    "director with empty din".to_string(),
                ));
            }
            if !dins.insert(director.din.as_str()) {
                return Err(DatasetError::Integrity(format!(
                    "duplicate director identifier {:?}",
                    director.din
                )));
            }
        }
        let mut pairs = HashSet::with_capacity(affiliations.len());
        for affiliation in &affiliations {
            if !cins.contains(affiliation.cin.as_str()) {
                return Err(DatasetError::Integrity(format!(
                    "affiliation references unknown company {:?}",
                    affiliation.cin
                )));
            }
            if !dins.contains(affiliation.din.as_str()) {
                return Err(DatasetError::Integrity(format!(
                    "affiliation references unknown director {:?}",
                    affiliation.din
                )));
            }
            if !pairs.insert((affiliation.cin.as_str(), affiliation.din.as_str())) {
                return Err(DatasetError::Integrity(format!(
                    "duplicate affiliation ({:?}, {:?})",
                    affiliation.cin, affiliation.din
                )));
            }
        }
        Ok(BipartiteDataset {
            companies,
            directors,
            affiliations,
        })
    }

    pub fn companies(&self) -> &[CompanyRecord] {
        &self.companies
    }

    pub fn directors(&self) -> &[DirectorRecord] {
        &self.directors
    }

    pub fn affiliations(&self) -> &[AffiliationRecord] {
        &self.affiliations
    }

    /// `(companies, directors, affiliations)` counts.
    pub fn counts(&self) -> (usize, usize, usize) {
        (
            self.companies.len(),
            self.directors.len(),
            self.affiliations.len(),
        )
    }

    pub fn is_empty(&self) -> bool {
        self.companies.is_empty() && self.directors.is_empty() && self.affiliations.is_empty()
    }
}

fn open(path: &Path) -> Result<File, DatasetError> {
    File::open(path).map_err(|source| DatasetError::Io {
        path: path.to_path_buf(),
        source,
    })
}

/// Reads one CSV file, checking the header and per-row column count.
/// Returns rows paired with their 1-based line numbers.
fn read_rows(
    path: &Path,
    expected_header: &[&str],
) -> Result<Vec<(u64, Vec<String>)>, DatasetError> {
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(true)
        .flexible(true)
        .from_reader(open(path)?);
    let header = reader.headers().map_err(|err| DatasetError::Parse {
        path: path.to_path_buf(),
        row: 1,
        message: err.to_string(),
    })?;
    let header: Vec<&str> = header.iter().collect();
    if header != expected_header {
        return Err(DatasetError::Parse {
            path: path.to_path_buf(),
            row: 1,
            message: format!(
                "expected header {:?}, found {:?}",
                expected_header.join(","),
                header.join(",")
            ),
        });
    }
    let mut rows = Vec::new();
    for record in reader.records() {
        let record = record.map_err(|err| {
            let row = err
                .position()
                .map(|position| position.line())
                .unwrap_or_default();
            DatasetError::Parse {
                path: path.to_path_buf(),
                row,
                message: err.to_string(),
            }
        })?;
        let row = record
            .position()
            .map(|position| position.line())
            .unwrap_or_default();
        if record.len() != expected_header.len() {
            return Err(DatasetError::Parse {
                path: path.to_path_buf(),
                row,
                message: format!(
                    "expected {} columns, found {}",
                    expected_header.len(),
                    record.len()
                ),
            });
        }
        rows.push((row, record.iter().map(str::to_string).collect()));
    }
    Ok(rows)
}

/// Loads and validates a dataset from its three files.
///
/// Affiliation rows referencing unknown identifiers, duplicate
/// identifiers, and duplicate affiliation pairs are rejected with the
/// offending file row named in the error.
pub fn load_dataset(
    companies_path: &Path,
    directors_path: &Path,
    affiliations_path: &Path,
) -> Result<BipartiteDataset, DatasetError> {
    let mut companies = Vec::new();
    let mut seen_cins: HashMap<String, u64> = HashMap::new();
    for (row, fields) in read_rows(companies_path, &["cin", "name", "url"])? {
        let [cin, name, url] = fields.try_into().expect("column count checked");
        if cin.is_empty() {
            return Err(DatasetError::IntegrityAt {
                path: companies_path.to_path_buf(),
                row,
                message: "empty cin".to_string(),
            });
        }
        if let Some(first) = seen_cins.insert(cin.clone(), row) {
            return Err(DatasetError::IntegrityAt {
                path: companies_path.to_path_buf(),
                row,
                message: format!("duplicate company identifier {cin:?} (first seen at row {first})"),
            });
        }
        companies.push(CompanyRecord { cin, name, url });
    }

    let mut directors = Vec::new();
    let mut seen_dins: HashMap<String, u64> = HashMap::new();
    for (row, fields) in read_rows(directors_path, &["din", "name", "url"])? {
        let [din, name, url] = fields.try_into().expect("column count checked");
        if din.is_empty() {
            return Err(DatasetError::IntegrityAt {
                path: directors_path.to_path_buf(),
                row,
                message: "empty din".to_string(),
            });
        }
        if let Some(first) = seen_dins.insert(din.clone(), row) {
            return Err(DatasetError::IntegrityAt {
                path: directors_path.to_path_buf(),
                row,
                message: format!("duplicate director identifier {din:?} (first seen at row {first})"),
            });
        }
        directors.push(DirectorRecord { din, name, url });
    }

    let mut affiliations = Vec::new();
    let mut seen_pairs: HashSet<(String, String)> = HashSet::new();
    for (row, fields) in read_rows(affiliations_path, &["cin", "din"])? {
        let [cin, din] = fields.try_into().expect("column count checked");
        if !seen_cins.contains_key(&cin) {
            return Err(DatasetError::IntegrityAt {
                path: affiliations_path.to_path_buf(),
                row,
                message: format!("affiliation references unknown company {cin:?}"),
            });
        }
        if !seen_dins.contains_key(&din) {
            return Err(DatasetError::IntegrityAt {
                path: affiliations_path.to_path_buf(),
                row,
                message: format!("affiliation references unknown director {din:?}"),
            });
        }
        if !seen_pairs.insert((cin.clone(), din.clone())) {
            return Err(DatasetError::IntegrityAt {
                path: affiliations_path.to_path_buf(),
                row,
                message: format!("duplicate affiliation ({cin:?}, {din:?})"),
            });
        }
        affiliations.push(AffiliationRecord { cin, din });
    }

    BipartiteDataset::new(companies, directors, affiliations)
}

fn write_csv<I, R>(path: &Path, header: &[&str], rows: I) -> Result<(), DatasetError>
where
    I: IntoIterator<Item = R>,
    R: IntoIterator<Item = String>,
{
    let io_err = |source| DatasetError::Io {
        path: path.to_path_buf(),
        source,
    };
    let file = File::create(path).map_err(io_err)?;
    let mut writer = csv::Writer::from_writer(file);
    writer
        .write_record(header)
        .map_err(|err| csv_io_error(path, err))?;
    for row in rows {
        writer
            .write_record(row)
            .map_err(|err| csv_io_error(path, err))?;
    }
    writer.flush().map_err(io_err)
}

fn csv_io_error(path: &Path, err: csv::Error) -> DatasetError {
    DatasetError::Io {
        path: path.to_path_buf(),
        source: std::io::Error::other(err),
    }
}

/// Writes the three dataset files into `out_dir`, returning the paths of
/// `(companies.csv, directors.csv, affiliations.csv)`.
///
/// Output is bit-stable: `load_dataset` of the written files reproduces
/// the input dataset exactly.
pub fn save_dataset(
    dataset: &BipartiteDataset,
    out_dir: &Path,
) -> Result<(PathBuf, PathBuf, PathBuf), DatasetError> {
    std::fs::create_dir_all(out_dir).map_err(|source| DatasetError::Io {
        path: out_dir.to_path_buf(),
        source,
    })?;
    let companies_path = out_dir.join("companies.csv");
    let directors_path = out_dir.join("directors.csv");
    let affiliations_path = out_dir.join("affiliations.csv");
    write_csv(
        &companies_path,
        &["cin", "name", "url"],
        dataset
            .companies()
            .iter()
            .map(|c| [c.cin.clone(), c.name.clone(), c.url.clone()]),
    )?;
    write_csv(
        &directors_path,
        &["din", "name", "url"],
        dataset
            .directors()
            .iter()
            .map(|d| [d.din.clone(), d.name.clone(), d.url.clone()]),
    )?;
    write_csv(
        &affiliations_path,
        &["cin", "din"],
        dataset
            .affiliations()
            .iter()
            .map(|a| [a.cin.clone(), a.din.clone()]),
    )?;
    Ok((companies_path, directors_path, affiliations_path))
}

/// A dataset with every identifier and name replaced by a keyed
/// pseudonym, plus the identifier maps used for the renaming.
#[derive(Debug, Clone)]
pub struct AnonymizedDataset {
    pub dataset: BipartiteDataset,
    /// Original cin -> pseudonymous cin.
    pub company_map: BTreeMap<String, String>,
    /// Original din -> pseudonymous din.
    pub director_map: BTreeMap<String, String>,
}

fn pseudonym(key: &[u8], prefix: &str, domain: &str, value: &str) -> String {
    let mut hasher = Sha256::new();
    hasher.update(key);
    hasher.update([0x1f]);
    hasher.update(domain.as_bytes());
    hasher.update([0x1f]);
    hasher.update(value.as_bytes());
    let digest = hasher.finalize();
    format!("{prefix}-{}", &hex::encode(digest)[..12])
}

/// Replaces every cin, din, and name with a deterministic keyed
/// pseudonym and blanks all urls.
///
/// The affiliation structure is preserved: the anonymized graph is
/// isomorphic to the original under the returned identifier maps, and the
/// same `(dataset, key)` pair always yields the same output. Identifier
/// pseudonym collisions are detected and reported as an error.
pub fn anonymize(
    dataset: &BipartiteDataset,
    key: &[u8],
) -> Result<AnonymizedDataset, DatasetError> {
    if key.is_empty() {
        return Err(DatasetError::EmptyKey);
    }

    let mut company_map = BTreeMap::new();
    let mut used_cins = HashSet::new();
    let companies = dataset
        .companies()
        .iter()
        .map(|company| {
            let cin = pseudonym(key, "C", "cin", &company.cin);
            if !used_cins.insert(cin.clone()) {
                return Err(DatasetError::PseudonymCollision { pseudonym: cin });
            }
            company_map.insert(company.cin.clone(), cin.clone());
            Ok(CompanyRecord {
                cin,
                name: pseudonym(key, "C", "company-name", &company.name),
                url: String::new(),
            })
        })
        .collect::<Result<Vec<_>, _>>()?;

    let mut director_map = BTreeMap::new();
    let mut used_dins = HashSet::new();
    let directors = dataset
        .directors()
        .iter()
        .map(|director| {
            let din = pseudonym(key, "D", "din", &director.din);
            if !used_dins.insert(din.clone()) {
                return Err(DatasetError::PseudonymCollision { pseudonym: din });
            }
            director_map.insert(director.din.clone(), din.clone());
            Ok(DirectorRecord {
                din,
                name: pseudonym(key, "D", "director-name", &director.name),
                url: String::new(),
            })
        })
        .collect::<Result<Vec<_>, _>>()?;

    let affiliations = dataset
        .affiliations()
        .iter()
        .map(|affiliation| AffiliationRecord {
            cin: company_map[&affiliation.cin].clone(),
            din: director_map[&affiliation.din].clone(),
        })
        .collect();

    let dataset = BipartiteDataset::new(companies, directors, affiliations)?;
    Ok(AnonymizedDataset {
        dataset,
        company_map,
        director_map,
    })
}
