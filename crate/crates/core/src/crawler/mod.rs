//! Breadth-first crawling of the corporate network.
//!
//! A crawl starts from one base node and walks company and director
//! pages through a pluggable [`PageProvider`], producing a validated
//! [`BipartiteDataset`]. Depth counts bipartite hops, so moving from a
//! company to one of its directors is one hop. Node and depth limits
//! bound the walk through an otherwise open-ended network; hitting a
//! limit is reported through a truncation flag, not an error.

mod http;

pub use http::{HttpPageProvider, HttpProviderConfig, ParseRules};

use std::collections::{HashMap, HashSet, VecDeque};

use thiserror::Error;

use crate::model::{
    AffiliationRecord, BipartiteDataset, CompanyRecord, DatasetError, DirectorRecord, NodeKind,
};

/// A company page: identity plus the director identifiers it links to.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CompanyPage {
    pub cin: String,
    pub name: String,
    pub url: String,
    pub director_links: Vec<String>,
}

/// A director page: identity plus the company identifiers it links to.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DirectorPage {
    pub din: String,
    pub name: String,
    pub url: String,
    pub company_links: Vec<String>,
}

/// Why a single page fetch did not produce a page.
#[derive(Debug, Error)]
pub enum PageFetchError {
    /// The identifier has no page; never retried.
    #[error("page not found")]
    NotFound,
    /// A transient failure worth retrying.
    #[error("{0}")]
    Unavailable(String),
}

/// Source of company and director pages.
///
/// Within one crawl session, repeated fetches of the same identifier
/// must return equivalent pages.
pub trait PageProvider {
    fn fetch_company(&mut self, cin: &str) -> Result<CompanyPage, PageFetchError>;
    fn fetch_director(&mut self, din: &str) -> Result<DirectorPage, PageFetchError>;

    /// Whether the page universe is known to be finite. Crawls over an
    /// unbounded provider must set a node or depth limit.
    fn is_finite(&self) -> bool {
        false
    }
}

/// Crawl parameters: where to start and how far to go.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CrawlConfig {
    pub base_kind: NodeKind,
    pub base_id: String,
    /// Maximum number of nodes to visit, counted at enqueue time.
    pub max_nodes: Option<usize>,
    /// Maximum BFS depth in bipartite hops; the base node is depth 0.
    pub max_depth: Option<usize>,
    /// How many times a transient fetch failure is retried before the
    /// crawl aborts.
    pub retries: u32,
}

impl CrawlConfig {
    pub fn new(base_kind: NodeKind, base_id: impl Into<String>) -> Self {
        CrawlConfig {
            base_kind,
            base_id: base_id.into(),
            max_nodes: None,
            max_depth: None,
            retries: 2,
        }
    }
}

#[derive(Debug, Error)]
pub enum CrawlError {
    #[error("invalid crawl config: {0}")]
    InvalidConfig(String),
    #[error("no page found for {kind} {id:?}")]
    NotFound { kind: NodeKind, id: String },
    #[error("fetching {kind} {id:?} failed after {attempts} attempts: {message}")]
    Fetch {
        kind: NodeKind,
        id: String,
        attempts: u32,
        message: String,
    },
    #[error("provider returned a page for {received:?} when {kind} {requested:?} was requested")]
    PageMismatch {
        kind: NodeKind,
        requested: String,
        received: String,
    },
    #[error(transparent)]
    Dataset(#[from] DatasetError),
}

/// The result of a crawl: the dataset plus how the walk ended.
#[derive(Debug, Clone, PartialEq)]
pub struct CrawlOutcome {
    pub dataset: BipartiteDataset,
    /// True when a node or depth limit suppressed at least one link
    /// expansion.
    pub truncated: bool,
    /// Deepest level actually visited.
    pub depth_reached: usize,
}

enum FetchedPage {
    Company(CompanyPage),
    Director(DirectorPage),
}

fn fetch_page(
    provider: &mut dyn PageProvider,
    kind: NodeKind,
    id: &str,
    retries: u32,
) -> Result<FetchedPage, CrawlError> {
    let mut attempt = 0;
    loop {
        attempt += 1;
        let result = match kind {
            NodeKind::Company => provider.fetch_company(id).map(FetchedPage::Company),
            NodeKind::Director => provider.fetch_director(id).map(FetchedPage::Director),
        };
        match result {
            Ok(page) => {
                let received = match &page {
                    FetchedPage::Company(p) => p.cin.as_str(),
                    FetchedPage::Director(p) => p.din.as_str(),
                };
                if received != id {
                    return Err(CrawlError::PageMismatch {
                        kind,
                        requested: id.to_string(),
                        received: received.to_string(),
                    });
                }
                return Ok(page);
            }
            Err(PageFetchError::NotFound) => {
                return Err(CrawlError::NotFound {
                    kind,
                    id: id.to_string(),
                })
            }
            Err(PageFetchError::Unavailable(message)) => {
                if attempt > retries {
                    return Err(CrawlError::Fetch {
                        kind,
                        id: id.to_string(),
                        attempts: attempt,
                        message,
                    });
                }
            }
        }
    }
}

/// Walks the network breadth-first from the configured base node and
/// returns everything visited as a dataset.
///
/// Nodes are visited level by level, within a level in the order links
/// appear on pages, and no page is fetched twice. Affiliations are the
/// observed company-director links whose two endpoints were both
/// visited, in first-observation order. A fetch that keeps failing
/// aborts the whole crawl; partial results are discarded.
pub fn bfs_crawl(
    provider: &mut dyn PageProvider,
    config: &CrawlConfig,
) -> Result<CrawlOutcome, CrawlError> {
    if let Some(0) = config.max_nodes {
        return Err(CrawlError::InvalidConfig(
            "max_nodes must be at least 1".to_string(),
        ));
    }
    if !provider.is_finite() && config.max_nodes.is_none() && config.max_depth.is_none() {
        return Err(CrawlError::InvalidConfig(
            "an unbounded provider requires max_nodes or max_depth".to_string(),
        ));
    }

    let mut companies: Vec<CompanyRecord> = Vec::new();
    let mut directors: Vec<DirectorRecord> = Vec::new();
    let mut observed_links: Vec<(String, String)> = Vec::new();
    let mut seen_links: HashSet<(String, String)> = HashSet::new();

    let mut visited: HashSet<(NodeKind, String)> = HashSet::new();
    let mut queue: VecDeque<(NodeKind, String, usize)> = VecDeque::new();
    let mut truncated = false;
    let mut depth_reached = 0;

    visited.insert((config.base_kind, config.base_id.clone()));
    queue.push_back((config.base_kind, config.base_id.clone(), 0));

    while let Some((kind, id, depth)) = queue.pop_front() {
        depth_reached = depth_reached.max(depth);
        let links: Vec<(NodeKind, String)> = match fetch_page(provider, kind, &id, config.retries)?
        {
            FetchedPage::Company(page) => {
                let links = page
                    .director_links
                    .iter()
                    .map(|din| (NodeKind::Director, din.clone()))
                    .collect();
                for din in &page.director_links {
                    let link = (page.cin.clone(), din.clone());
                    if seen_links.insert(link.clone()) {
                        observed_links.push(link);
                    }
                }
                companies.push(CompanyRecord {
                    cin: page.cin,
                    name: page.name,
                    url: page.url,
                });
                links
            }
            FetchedPage::Director(page) => {
                let links = page
                    .company_links
                    .iter()
                    .map(|cin| (NodeKind::Company, cin.clone()))
                    .collect();
                for cin in &page.company_links {
                    let link = (cin.clone(), page.din.clone());
                    if seen_links.insert(link.clone()) {
                        observed_links.push(link);
                    }
                }
                directors.push(DirectorRecord {
                    din: page.din,
                    name: page.name,
                    url: page.url,
                });
                links
            }
        };

        for (next_kind, next_id) in links {
            let key = (next_kind, next_id);
            if visited.contains(&key) {
                continue;
            }
            if config.max_depth.is_some_and(|limit| depth + 1 > limit) {
                truncated = true;
                continue;
            }
            if config.max_nodes.is_some_and(|limit| visited.len() >= limit) {
                truncated = true;
                continue;
            }
            queue.push_back((key.0, key.1.clone(), depth + 1));
            visited.insert(key);
        }
    }

    let fetched_companies: HashSet<&str> = companies.iter().map(|c| c.cin.as_str()).collect();
    let fetched_directors: HashSet<&str> = directors.iter().map(|d| d.din.as_str()).collect();
    let affiliations = observed_links
        .into_iter()
        .filter(|(cin, din)| {
            fetched_companies.contains(cin.as_str()) && fetched_directors.contains(din.as_str())
        })
        .map(|(cin, din)| AffiliationRecord { cin, din })
        .collect();

    let dataset = BipartiteDataset::new(companies, directors, affiliations)?;
    Ok(CrawlOutcome {
        dataset,
        truncated,
        depth_reached,
    })
}

/// In-memory provider that serves pages synthesized from a dataset.
///
/// Link order on each page follows the dataset's affiliation order, and
/// every fetch is deterministic.
#[derive(Debug, Clone)]
pub struct FixtureProvider {
    companies: HashMap<String, CompanyPage>,
    directors: HashMap<String, DirectorPage>,
}

/// Builds a [`FixtureProvider`] over the dataset's records.
pub fn fixture_provider(dataset: &BipartiteDataset) -> FixtureProvider {
    let mut companies: HashMap<String, CompanyPage> = dataset
        .companies()
        .iter()
        .map(|record| {
            (
                record.cin.clone(),
                CompanyPage {
                    cin: record.cin.clone(),
                    name: record.name.clone(),
                    url: record.url.clone(),
                    director_links: Vec::new(),
                },
            )
        })
        .collect();
    let mut directors: HashMap<String, DirectorPage> = dataset
        .directors()
        .iter()
        .map(|record| {
            (
                record.din.clone(),
                DirectorPage {
                    din: record.din.clone(),
                    name: record.name.clone(),
                    url: record.url.clone(),
                    company_links: Vec::new(),
                },
            )
        })
        .collect();
    for affiliation in dataset.affiliations() {
        companies
            .get_mut(&affiliation.cin)
            .expect("validated dataset")
            .director_links
            .push(affiliation.din.clone());
        directors
            .get_mut(&affiliation.din)
            .expect("validated dataset")
            .company_links
            .push(affiliation.cin.clone());
    }
    FixtureProvider {
        companies,
        directors,
    }
}

impl PageProvider for FixtureProvider {
    fn fetch_company(&mut self, cin: &str) -> Result<CompanyPage, PageFetchError> {
        self.companies
            .get(cin)
            .cloned()
            .ok_or(PageFetchError::NotFound)
    }

    fn fetch_director(&mut self, din: &str) -> Result<DirectorPage, PageFetchError> {
        self.directors
            .get(din)
            .cloned()
            .ok_or(PageFetchError::NotFound)
    }

    fn is_finite(&self) -> bool {
        true
    }
}

/// Wrapper that counts fetches per identifier, for asserting that a
/// crawl never revisits a page.
pub struct CountingProvider<P> {
    inner: P,
    counts: HashMap<(NodeKind, String), usize>,
}

impl<P> CountingProvider<P> {
    pub fn new(inner: P) -> Self {
        CountingProvider {
            inner,
            counts: HashMap::new(),
        }
    }

    pub fn counts(&self) -> &HashMap<(NodeKind, String), usize> {
        &self.counts
    }
}

impl<P: PageProvider> PageProvider for CountingProvider<P> {
    fn fetch_company(&mut self, cin: &str) -> Result<CompanyPage, PageFetchError> {
        *self
            .counts
            .entry((NodeKind::Company, cin.to_string()))
            .or_insert(0) += 1;
        self.inner.fetch_company(cin)
    }

    fn fetch_director(&mut self, din: &str) -> Result<DirectorPage, PageFetchError> {
        *self
            .counts
            .entry((NodeKind::Director, din.to_string()))
            .or_insert(0) += 1;
        self.inner.fetch_director(din)
    }

    fn is_finite(&self) -> bool {
        self.inner.is_finite()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::testfix::{dataset_from_edges, fig_dataset};
    use proptest::prelude::*;
    use std::collections::BTreeSet;

    fn ids(records: &CrawlOutcome, kind: NodeKind) -> Vec<&str> {
        match kind {
            NodeKind::Company => records
                .dataset
                .companies()
                .iter()
                .map(|c| c.cin.as_str())
                .collect(),
            NodeKind::Director => records
                .dataset
                .directors()
                .iter()
                .map(|d| d.din.as_str())
                .collect(),
        }
    }

    fn affiliation_set(outcome: &CrawlOutcome) -> BTreeSet<(String, String)> {
        outcome
            .dataset
            .affiliations()
            .iter()
            .map(|a| (a.cin.clone(), a.din.clone()))
            .collect()
    }

    #[test]
    fn isolated_base_yields_single_record() {
        let dataset = dataset_from_edges(1, 0, &[]);
        let mut provider = fixture_provider(&dataset);
        let config = CrawlConfig::new(NodeKind::Company, "c00");
        let outcome = bfs_crawl(&mut provider, &config).unwrap();
        assert_eq!(outcome.dataset.counts(), (1, 0, 0));
        assert!(!outcome.truncated);
        assert_eq!(outcome.depth_reached, 0);
    }

    #[test]
    fn full_crawl_recovers_fixture_in_bfs_order() {
        let mut provider = fixture_provider(&fig_dataset());
        let config = CrawlConfig::new(NodeKind::Company, "A");
        let outcome = bfs_crawl(&mut provider, &config).unwrap();
        assert_eq!(outcome.dataset.counts(), (5, 6, 12));
        assert_eq!(ids(&outcome, NodeKind::Company), ["A", "B", "C", "D", "E"]);
        assert_eq!(
            ids(&outcome, NodeKind::Director),
            ["1", "2", "3", "4", "5", "6"]
        );
        assert!(!outcome.truncated);
        assert_eq!(outcome.depth_reached, 5);
    }

    #[test]
    fn depth_limit_one_keeps_base_and_its_directors() {
        let mut provider = fixture_provider(&fig_dataset());
        let mut config = CrawlConfig::new(NodeKind::Company, "A");
        config.max_depth = Some(1);
        let outcome = bfs_crawl(&mut provider, &config).unwrap();
        assert_eq!(ids(&outcome, NodeKind::Company), ["A"]);
        assert_eq!(ids(&outcome, NodeKind::Director), ["1", "2"]);
        assert_eq!(
            affiliation_set(&outcome),
            BTreeSet::from([
                ("A".to_string(), "1".to_string()),
                ("A".to_string(), "2".to_string()),
            ])
        );
        assert!(outcome.truncated);
        assert_eq!(outcome.depth_reached, 1);
    }

    #[test]
    fn node_budget_caps_visits_at_enqueue_time() {
        let mut provider = fixture_provider(&fig_dataset());
        let mut config = CrawlConfig::new(NodeKind::Company, "A");
        config.max_nodes = Some(3);
        let outcome = bfs_crawl(&mut provider, &config).unwrap();
        assert_eq!(outcome.dataset.counts(), (1, 2, 2));
        assert!(outcome.truncated);
    }

    #[test]
    fn generous_limits_do_not_mark_truncation() {
        let mut provider = fixture_provider(&fig_dataset());
        let mut config = CrawlConfig::new(NodeKind::Company, "A");
        config.max_depth = Some(99);
        config.max_nodes = Some(99);
        let outcome = bfs_crawl(&mut provider, &config).unwrap();
        assert_eq!(outcome.dataset.counts(), (5, 6, 12));
        assert!(!outcome.truncated);
    }

    #[test]
    fn fixture_provider_serves_dataset_pages() {
        let mut provider = fixture_provider(&fig_dataset());
        let page = provider.fetch_company("B").unwrap();
        assert_eq!(page.director_links, ["1", "2", "3", "4", "5"]);
        assert_eq!(page.name, "Company B");
        assert!(matches!(
            provider.fetch_director("99"),
            Err(PageFetchError::NotFound)
        ));
    }

    #[test]
    fn crawl_from_unknown_base_fails() {
        let mut provider = fixture_provider(&fig_dataset());
        let config = CrawlConfig::new(NodeKind::Company, "Z");
        let error = bfs_crawl(&mut provider, &config).unwrap_err();
        assert!(matches!(
            &error,
            CrawlError::NotFound { kind: NodeKind::Company, id } if id == "Z"
        ));
        assert!(error.to_string().contains("\"Z\""));
    }

    #[test]
    fn crawl_never_fetches_a_page_twice() {
        let mut provider = CountingProvider::new(fixture_provider(&fig_dataset()));
        let config = CrawlConfig::new(NodeKind::Director, "3");
        let outcome = bfs_crawl(&mut provider, &config).unwrap();
        assert_eq!(outcome.dataset.counts(), (5, 6, 12));
        assert_eq!(provider.counts().len(), 11);
        assert!(provider.counts().values().all(|&count| count == 1));
    }

    #[test]
    fn identical_configs_yield_identical_outcomes() {
        let dataset = fig_dataset();
        let config = CrawlConfig::new(NodeKind::Company, "B");
        let first = bfs_crawl(&mut fixture_provider(&dataset), &config).unwrap();
        let second = bfs_crawl(&mut fixture_provider(&dataset), &config).unwrap();
        assert_eq!(first, second);
    }

    #[test]
    fn crawl_recovers_only_the_base_component() {
        let mut edges = vec![(0, 0), (0, 1), (1, 1)];
        edges.push((2, 2));
        let dataset = dataset_from_edges(3, 3, &edges);
        let mut provider = fixture_provider(&dataset);

        let config = CrawlConfig::new(NodeKind::Company, "c00");
        let outcome = bfs_crawl(&mut provider, &config).unwrap();
        assert_eq!(ids(&outcome, NodeKind::Company), ["c00", "c01"]);
        assert_eq!(ids(&outcome, NodeKind::Director), ["d00", "d01"]);

        let config = CrawlConfig::new(NodeKind::Company, "c02");
        let outcome = bfs_crawl(&mut provider, &config).unwrap();
        assert_eq!(ids(&outcome, NodeKind::Company), ["c02"]);
        assert_eq!(ids(&outcome, NodeKind::Director), ["d02"]);
    }

    struct Unbounded(FixtureProvider);

    impl PageProvider for Unbounded {
        fn fetch_company(&mut self, cin: &str) -> Result<CompanyPage, PageFetchError> {
            self.0.fetch_company(cin)
        }

        fn fetch_director(&mut self, din: &str) -> Result<DirectorPage, PageFetchError> {
            self.0.fetch_director(din)
        }
    }

    #[test]
    fn unbounded_provider_requires_a_limit() {
        let mut provider = Unbounded(fixture_provider(&fig_dataset()));
        let config = CrawlConfig::new(NodeKind::Company, "A");
        assert!(matches!(
            bfs_crawl(&mut provider, &config),
            Err(CrawlError::InvalidConfig(_))
        ));

        let mut config = CrawlConfig::new(NodeKind::Company, "A");
        config.max_depth = Some(10);
        let outcome = bfs_crawl(&mut provider, &config).unwrap();
        assert_eq!(outcome.dataset.counts(), (5, 6, 12));
    }

    #[test]
    fn zero_node_budget_is_rejected() {
        let mut provider = fixture_provider(&fig_dataset());
        let mut config = CrawlConfig::new(NodeKind::Company, "A");
        config.max_nodes = Some(0);
        assert!(matches!(
            bfs_crawl(&mut provider, &config),
            Err(CrawlError::InvalidConfig(_))
        ));
    }

    struct Flaky {
        inner: FixtureProvider,
        failures_left: u32,
        attempts: u32,
    }

    impl PageProvider for Flaky {
        fn fetch_company(&mut self, cin: &str) -> Result<CompanyPage, PageFetchError> {
            self.attempts += 1;
            if self.failures_left > 0 {
                self.failures_left -= 1;
                return Err(PageFetchError::Unavailable("connection reset".to_string()));
            }
            self.inner.fetch_company(cin)
        }

        fn fetch_director(&mut self, din: &str) -> Result<DirectorPage, PageFetchError> {
            self.inner.fetch_director(din)
        }

        fn is_finite(&self) -> bool {
            true
        }
    }

    #[test]
    fn transient_failures_are_retried_then_abort() {
        let dataset = dataset_from_edges(1, 0, &[]);
        let config = CrawlConfig::new(NodeKind::Company, "c00");

        let mut recovers = Flaky {
            inner: fixture_provider(&dataset),
            failures_left: 2,
            attempts: 0,
        };
        let outcome = bfs_crawl(&mut recovers, &config).unwrap();
        assert_eq!(outcome.dataset.counts(), (1, 0, 0));
        assert_eq!(recovers.attempts, 3);

        let mut exhausted = Flaky {
            inner: fixture_provider(&dataset),
            failures_left: 3,
            attempts: 0,
        };
        let error = bfs_crawl(&mut exhausted, &config).unwrap_err();
        match error {
            CrawlError::Fetch { attempts, id, .. } => {
                assert_eq!(attempts, 3);
                assert_eq!(id, "c00");
            }
            other => panic!("expected fetch error, got {other:?}"),
        }
    }

    #[test]
    fn not_found_is_never_retried() {
        let mut provider = CountingProvider::new(fixture_provider(&fig_dataset()));
        let config = CrawlConfig::new(NodeKind::Company, "Z");
        let _ = bfs_crawl(&mut provider, &config).unwrap_err();
        assert_eq!(
            provider.counts()[&(NodeKind::Company, "Z".to_string())],
            1
        );
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(48))]

        #[test]
        fn full_crawl_equals_base_component(
            edges in prop::collection::btree_set((0usize..8, 0usize..8), 1..24),
            base in 0usize..8,
        ) {
            let edges: Vec<(usize, usize)> = edges.into_iter().collect();
            let dataset = dataset_from_edges(8, 8, &edges);
            let base_id = format!("c{base:02}");

            // Expected component via undirected reachability over edges.
            let mut member_companies = BTreeSet::from([base]);
            let mut member_directors = BTreeSet::new();
            loop {
                let mut changed = false;
                for &(c, d) in &edges {
                    if member_companies.contains(&c) && member_directors.insert(d) {
                        changed = true;
                    }
                    if member_directors.contains(&d) && member_companies.insert(c) {
                        changed = true;
                    }
                }
                if !changed {
                    break;
                }
            }

            let mut provider = fixture_provider(&dataset);
            let config = CrawlConfig::new(NodeKind::Company, base_id);
            let outcome = bfs_crawl(&mut provider, &config).unwrap();
            prop_assert!(!outcome.truncated);

            let crawled_companies: BTreeSet<usize> = outcome
                .dataset
                .companies()
                .iter()
                .map(|c| c.cin[1..].parse().unwrap())
                .collect();
            let crawled_directors: BTreeSet<usize> = outcome
                .dataset
                .directors()
                .iter()
                .map(|d| d.din[1..].parse().unwrap())
                .collect();
            prop_assert_eq!(crawled_companies, member_companies);
            prop_assert_eq!(crawled_directors, member_directors);

            let expected_affiliations: BTreeSet<(String, String)> = edges
                .iter()
                .filter(|(c, _)| {
                    outcome
                        .dataset
                        .companies()
                        .iter()
                        .any(|record| record.cin == format!("c{c:02}"))
                })
                .map(|&(c, d)| (format!("c{c:02}"), format!("d{d:02}")))
                .collect();
            prop_assert_eq!(affiliation_set(&outcome), expected_affiliations);
        }

        #[test]
        fn node_limit_bounds_visited_count(
            edges in prop::collection::btree_set((0usize..6, 0usize..6), 1..18),
            limit in 1usize..6,
        ) {
            let edges: Vec<(usize, usize)> = edges.into_iter().collect();
            prop_assume!(edges.iter().any(|&(c, _)| c == 0));
            let dataset = dataset_from_edges(6, 6, &edges);
            let mut provider = CountingProvider::new(fixture_provider(&dataset));
            let mut config = CrawlConfig::new(NodeKind::Company, "c00");
            config.max_nodes = Some(limit);
            let outcome = bfs_crawl(&mut provider, &config).unwrap();
            let (nc, nd, _) = outcome.dataset.counts();
            prop_assert!(nc + nd <= limit);
            prop_assert!(provider.counts().values().all(|&count| count == 1));
        }
    }
}
