//! Shared test fixture: the five-company, six-director network used
//! throughout the worked examples.
//!
//! Affiliations: A-{1,2}, B-{1,2,3,4,5}, C-{1}, D-{3}, E-{4,5,6}.

use crate::model::{AffiliationRecord, BipartiteDataset, CompanyRecord, DirectorRecord};

pub(crate) const FIG_AFFILIATIONS: [(&str, &str); 12] = [
    ("A", "1"),
    ("A", "2"),
    ("B", "1"),
    ("B", "2"),
    ("B", "3"),
    ("B", "4"),
    ("B", "5"),
    ("C", "1"),
    ("D", "3"),
    ("E", "4"),
    ("E", "5"),
    ("E", "6"),
];

pub(crate) fn fig_dataset() -> BipartiteDataset {
    let companies = ["A", "B", "C", "D", "E"]
        .iter()
        .map(|cin| CompanyRecord {
            cin: cin.to_string(),
            name: format!("Company {cin}"),
            url: format!("https://example.test/company/{cin}"),
        })
        .collect();
    let directors = ["1", "2", "3", "4", "5", "6"]
        .iter()
        .map(|din| DirectorRecord {
            din: din.to_string(),
            name: format!("Director {din}"),
            url: format!("https://example.test/director/{din}"),
        })
        .collect();
    let affiliations = FIG_AFFILIATIONS
        .iter()
        .map(|(cin, din)| AffiliationRecord {
            cin: cin.to_string(),
            din: din.to_string(),
        })
        .collect();
    BipartiteDataset::new(companies, directors, affiliations).unwrap()
}

/// Builds a dataset with synthetic identifiers `c00..` and `d00..` from
/// company-director index pairs.
pub(crate) fn dataset_from_edges(
    n_companies: usize,
    n_directors: usize,
    edges: &[(usize, usize)],
) -> BipartiteDataset {
    let companies = (0..n_companies)
        .map(|i| CompanyRecord {
            cin: format!("c{i:02}"),
            name: format!("Company {i}"),
            url: String::new(),
        })
        .collect();
    let directors = (0..n_directors)
        .map(|i| DirectorRecord {
            din: format!("d{i:02}"),
            name: format!("Director {i}"),
            url: String::new(),
        })
        .collect();
    let affiliations = edges
        .iter()
        .map(|&(c, d)| AffiliationRecord {
            cin: format!("c{c:02}"),
            din: format!("d{d:02}"),
        })
        .collect();
    BipartiteDataset::new(companies, directors, affiliations).unwrap()
}
