//! Relation identification between directors.
//!
//! Personal relations are looked up through a web-search plus
//! text-analysis protocol: three fixed queries per director pair, up to
//! five results each, every result text wrapped in a fixed prompt whose
//! answer is parsed against a closed taxonomy of relation pairs.
//! Professional relations come from comparing standardized links in
//! structured web profiles. Both sides run behind pluggable clients, so
//! tests and offline runs use recorded fixtures instead of the network.

pub mod live;
pub mod replay;

use std::collections::BTreeMap;
use std::fs;
use std::path::Path;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::model::DirectorRecord;

/// The closed list of relation labels an analysis may return, in fixed
/// order.
pub const RELATION_TAXONOMY: [&str; 15] = [
    "husband - wife",
    "daughter - father",
    "nephew - uncle",
    "mother - son",
    "sister - brother",
    "grandfather - granddaughter",
    "grandmother - grandson",
    "cousin - cousin",
    "aunt - nephew",
    "stepmother - stepson",
    "stepfather - stepdaughter",
    "godmother - godson",
    "adoptive mother - adopted son",
    "sister-in-law - brother-in-law",
    "friend - friend",
];

#[derive(Debug, Error)]
pub enum RelationError {
    #[error("director name must not be empty")]
    EmptyName,
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

/// Why a search or analysis call failed.
#[derive(Debug, Error)]
pub enum ClientError {
    #[error("missing environment variable {0}")]
    MissingCredentials(&'static str),
    #[error("{0}")]
    Unavailable(String),
}

/// One search hit: where it came from and the text scraped from it.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SearchResult {
    pub url: String,
    pub text: String,
}

/// Source of search results for a query. At most five results per query
/// are consumed.
pub trait SearchClient {
    fn search(&mut self, query: &str) -> Result<Vec<SearchResult>, ClientError>;
}

/// Text-analysis backend: takes a prompt, returns the raw completion.
pub trait TextAnalysisClient {
    fn complete(&mut self, prompt: &str) -> Result<String, ClientError>;
}

/// Builds the three search queries for a director pair, each name in
/// exact-match quotes.
pub fn build_search_queries(name_1: &str, name_2: &str) -> Result<Vec<String>, RelationError> {
    if name_1.is_empty() || name_2.is_empty() {
        return Err(RelationError::EmptyName);
    }
    let pair = format!("{}, {}", quote_exact(name_1), quote_exact(name_2));
    Ok(vec![
        pair.clone(),
        format!("{pair} relation"),
        format!("{pair} Family tree"),
    ])
}

fn quote_exact(name: &str) -> String {
    format!("\"{}\"", name.replace('\\', "\\\\").replace('"', "\\\""))
}

/// Builds the analysis prompt: task description with both names, the
/// taxonomy, the two edge-case rules, the output-format instruction,
/// then the text under inspection. Byte-identical for identical inputs.
pub fn build_personal_relation_prompt(name_1: &str, name_2: &str, text: &str) -> String {
    assert!(!text.is_empty(), "prompt text must not be empty");
    let taxonomy = RELATION_TAXONOMY
        .iter()
        .map(|entry| format!("\"{entry}\""))
        .collect::<Vec<_>>()
        .join("; ");
    format!(
        "You are a linguistic analyst. The task is to analyze a given text \
and determine if there is any familial relationship implied between \
{name_1} and {name_2}.\n\
\n\
Use this list to return the identified relation:\n\
{taxonomy}\n\
\n\
Edge cases:\n\
- If the text does not mention either director, return the answer as \
'Not Available'.\n\
- If the text mentions both directors but does not imply any familial \
relationship between them, return the answer as 'Not Available'.\n\
\n\
Return the identified familial relationship in JSON format with the key \
as: \"Relation\"\n\
\n\
Text:\n\
{text}"
    )
}

/// Outcome category of a relation lookup or of a single parsed
/// response.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum RelationStatus {
    Identified,
    NotAvailable,
    Error,
}

/// Status and canonical label extracted from one analysis response.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParsedRelation {
    pub status: RelationStatus,
    pub label: Option<String>,
}

/// Extracts the "Relation" answer from a raw analysis response.
///
/// The first well-formed JSON object carrying a string "Relation" key
/// decides the outcome: "Not Available" (case-insensitive) maps to
/// [`RelationStatus::NotAvailable`], any taxonomy label (whitespace
/// around hyphens normalized) maps to [`RelationStatus::Identified`]
/// with the canonical label, and everything else is an error. Never
/// panics or fails, whatever the input.
pub fn parse_relation_response(response: &str) -> ParsedRelation {
    for (index, _) in response.char_indices().filter(|&(_, c)| c == '{') {
        let mut stream =
            serde_json::Deserializer::from_str(&response[index..]).into_iter::<serde_json::Value>();
        if let Some(Ok(value)) = stream.next() {
            let Some(object) = value.as_object() else {
                continue;
            };
            if let Some(answer) = object.get("Relation").and_then(|v| v.as_str()) {
                return classify_answer(answer);
            }
        }
    }
    ParsedRelation {
        status: RelationStatus::Error,
        label: None,
    }
}

fn classify_answer(answer: &str) -> ParsedRelation {
    let trimmed = answer.trim();
    if trimmed.eq_ignore_ascii_case("not available") {
        return ParsedRelation {
            status: RelationStatus::NotAvailable,
            label: None,
        };
    }
    let normalized = normalize_label(trimmed);
    for entry in RELATION_TAXONOMY {
        if normalize_label(entry) == normalized {
            return ParsedRelation {
                status: RelationStatus::Identified,
                label: Some(entry.to_string()),
            };
        }
    }
    ParsedRelation {
        status: RelationStatus::Error,
        label: None,
    }
}

/// Collapses whitespace runs and unifies spacing around hyphens so that
/// label comparison ignores formatting differences.
fn normalize_label(label: &str) -> String {
    let collapsed = label.split_whitespace().collect::<Vec<_>>().join(" ");
    collapsed
        .split('-')
        .map(str::trim)
        .collect::<Vec<_>>()
        .join(" - ")
}

/// One retained exchange: which query and result produced which raw
/// response.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RawExchange {
    pub query: String,
    pub url: String,
    pub response: String,
}

/// Result of a personal-relation lookup for one director pair.
///
/// `din_1` is the director whose name appeared first in the queries and
/// prompts; the label is recorded as listed in the taxonomy without
/// asserting which director plays which role.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RelationFinding {
    pub din_1: String,
    pub din_2: String,
    pub status: RelationStatus,
    pub label: Option<String>,
    pub evidence_url: Option<String>,
    pub raw_responses: Vec<RawExchange>,
    pub error: Option<String>,
}

/// Looks up a personal relation for a director pair.
///
/// Queries run in fixed order and each result (at most five per query)
/// is analyzed in turn; the first identified relation wins and its
/// source URL becomes the evidence. When every response comes back
/// without a relation the finding is `not_available`. A client failure
/// that survives `retries` extra attempts aborts the lookup with an
/// error finding. All raw responses seen on the way are retained.
pub fn identify_personal_relation(
    director_1: &DirectorRecord,
    director_2: &DirectorRecord,
    search: &mut dyn SearchClient,
    analysis: &mut dyn TextAnalysisClient,
    retries: u32,
) -> RelationFinding {
    let mut finding = RelationFinding {
        din_1: director_1.din.clone(),
        din_2: director_2.din.clone(),
        status: RelationStatus::Error,
        label: None,
        evidence_url: None,
        raw_responses: Vec::new(),
        error: None,
    };
    let queries = match build_search_queries(&director_1.name, &director_2.name) {
        Ok(queries) => queries,
        Err(error) => {
            finding.error = Some(error.to_string());
            return finding;
        }
    };
    for query in queries {
        let results = match with_retries(retries, || search.search(&query)) {
            Ok(results) => results,
            Err(error) => {
                finding.error = Some(format!("search for {query:?} failed: {error}"));
                return finding;
            }
        };
        for result in results.iter().take(5) {
            if result.text.is_empty() {
                continue;
            }
            let prompt =
                build_personal_relation_prompt(&director_1.name, &director_2.name, &result.text);
            let response = match with_retries(retries, || analysis.complete(&prompt)) {
                Ok(response) => response,
                Err(error) => {
                    finding.error = Some(format!("analysis of {} failed: {error}", result.url));
                    return finding;
                }
            };
            let parsed = parse_relation_response(&response);
            finding.raw_responses.push(RawExchange {
                query: query.clone(),
                url: result.url.clone(),
                response,
            });
            if parsed.status == RelationStatus::Identified {
                finding.status = RelationStatus::Identified;
                finding.label = parsed.label;
                finding.evidence_url = Some(result.url.clone());
                return finding;
            }
        }
    }
    finding.status = RelationStatus::NotAvailable;
    finding
}

fn with_retries<T>(
    retries: u32,
    mut call: impl FnMut() -> Result<T, ClientError>,
) -> Result<T, ClientError> {
    let mut attempt = 0;
    loop {
        attempt += 1;
        match call() {
            Ok(value) => return Ok(value),
            Err(ClientError::MissingCredentials(var)) => {
                return Err(ClientError::MissingCredentials(var))
            }
            Err(error) if attempt > retries => return Err(error),
            Err(_) => {}
        }
    }
}

/// One standardized entity in a web profile.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ProfileEntity {
    pub name: String,
    pub link: String,
}

/// Structured web profile of a director: institutions and organizations
/// with their standardized links.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct WebProfile {
    pub din: String,
    pub entities: Vec<ProfileEntity>,
}

impl WebProfile {
    /// Builds a profile, dropping exact duplicate entities while
    /// preserving first-seen order.
    pub fn new(din: impl Into<String>, entities: Vec<ProfileEntity>) -> Self {
        let mut seen = std::collections::HashSet::new();
        let entities = entities
            .into_iter()
            .filter(|entity| seen.insert((entity.name.clone(), entity.link.clone())))
            .collect();
        WebProfile {
            din: din.into(),
            entities,
        }
    }
}

/// Reads a profile document (`{"din": ..., "entities": [{"name", "link"}]}`)
/// from disk, removing duplicate entities.
pub fn load_web_profile(path: &Path) -> Result<WebProfile, RelationError> {
    let raw: WebProfile = serde_json::from_str(&fs::read_to_string(path)?)?;
    Ok(WebProfile::new(raw.din, raw.entities))
}

/// A link shared by two profiles, with the surface name each profile
/// used for it.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ProfessionalLink {
    pub link: String,
    pub name_1: String,
    pub name_2: String,
}

/// All standardized links present in both profiles, ordered by link.
///
/// Matching is on link equality alone, so the same institution under
/// different surface names still matches; swapping the profiles yields
/// the same links with the names transposed.
pub fn match_professional_links(
    profile_1: &WebProfile,
    profile_2: &WebProfile,
) -> Vec<ProfessionalLink> {
    let first_names = |profile: &WebProfile| {
        let mut by_link: BTreeMap<String, String> = BTreeMap::new();
        for entity in &profile.entities {
            by_link
                .entry(entity.link.clone())
                .or_insert_with(|| entity.name.clone());
        }
        by_link
    };
    let links_1 = first_names(profile_1);
    let links_2 = first_names(profile_2);
    links_1
        .into_iter()
        .filter_map(|(link, name_1)| {
            links_2.get(&link).map(|name_2| ProfessionalLink {
                link,
                name_1,
                name_2: name_2.clone(),
            })
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::replay::{record_completion, record_search, ReplayAnalysisClient, ReplaySearchClient};
    use super::*;

    fn director(din: &str, name: &str) -> DirectorRecord {
        DirectorRecord {
            din: din.to_string(),
            name: name.to_string(),
            url: String::new(),
        }
    }

    #[test]
    fn taxonomy_is_fifteen_distinct_entries() {
        assert_eq!(RELATION_TAXONOMY.len(), 15);
        let unique: std::collections::HashSet<&str> = RELATION_TAXONOMY.into_iter().collect();
        assert_eq!(unique.len(), 15);
        assert_eq!(RELATION_TAXONOMY[0], "husband - wife");
        assert_eq!(RELATION_TAXONOMY[2], "nephew - uncle");
        assert_eq!(RELATION_TAXONOMY[14], "friend - friend");
    }

    #[test]
    fn queries_follow_the_three_templates() {
        let queries = build_search_queries("P Q", "R S").unwrap();
        assert_eq!(
            queries,
            vec![
                r#""P Q", "R S""#,
                r#""P Q", "R S" relation"#,
                r#""P Q", "R S" Family tree"#,
            ]
        );
    }

    #[test]
    fn queries_escape_quotes_and_reject_empty_names() {
        let queries = build_search_queries(r#"A "Bee" C"#, "D").unwrap();
        assert_eq!(queries[0], r#""A \"Bee\" C", "D""#);
        assert!(matches!(
            build_search_queries("", "D"),
            Err(RelationError::EmptyName)
        ));
        let same = build_search_queries("X", "X").unwrap();
        assert_eq!(same.len(), 3);
    }

    #[test]
    fn prompt_matches_golden_output() {
        let prompt = build_personal_relation_prompt("P Q", "R S", "T.");
        let expected = "You are a linguistic analyst. The task is to analyze a given text \
and determine if there is any familial relationship implied between P Q and R S.\n\
\n\
Use this list to return the identified relation:\n\
\"husband - wife\"; \"daughter - father\"; \"nephew - uncle\"; \"mother - son\"; \
\"sister - brother\"; \"grandfather - granddaughter\"; \"grandmother - grandson\"; \
\"cousin - cousin\"; \"aunt - nephew\"; \"stepmother - stepson\"; \
\"stepfather - stepdaughter\"; \"godmother - godson\"; \"adoptive mother - adopted son\"; \
\"sister-in-law - brother-in-law\"; \"friend - friend\"\n\
\n\
Edge cases:\n\
- If the text does not mention either director, return the answer as 'Not Available'.\n\
- If the text mentions both directors but does not imply any familial relationship \
between them, return the answer as 'Not Available'.\n\
\n\
Return the identified familial relationship in JSON format with the key as: \"Relation\"\n\
\n\
Text:\nT.";
        assert_eq!(prompt, expected);
    }

    #[test]
    fn prompt_contains_protocol_pieces_exactly() {
        let prompt = build_personal_relation_prompt("Jane Roe", "John Roe", "Some article.");
        assert!(prompt.contains("You are a linguistic analyst"));
        for entry in RELATION_TAXONOMY {
            assert_eq!(
                prompt.matches(entry).count(),
                1,
                "taxonomy entry {entry:?} should appear exactly once"
            );
        }
        assert_eq!(prompt.matches("Not Available").count(), 2);
        assert!(prompt.ends_with("Some article."));
        let again = build_personal_relation_prompt("Jane Roe", "John Roe", "Some article.");
        assert_eq!(prompt, again);
    }

    #[test]
    fn parser_handles_clean_and_messy_answers() {
        let identified = parse_relation_response(r#"{"Relation": "husband - wife"}"#);
        assert_eq!(identified.status, RelationStatus::Identified);
        assert_eq!(identified.label.as_deref(), Some("husband - wife"));

        let not_available = parse_relation_response(r#"{"Relation": "Not Available"}"#);
        assert_eq!(not_available.status, RelationStatus::NotAvailable);
        assert_eq!(not_available.label, None);

        let cased = parse_relation_response(r#"{"Relation": "  nOt AVAILABLE "}"#);
        assert_eq!(cased.status, RelationStatus::NotAvailable);

        let spaced = parse_relation_response(r#"{"Relation": "husband   -wife"}"#);
        assert_eq!(spaced.status, RelationStatus::Identified);
        assert_eq!(spaced.label.as_deref(), Some("husband - wife"));

        let chatty = parse_relation_response(
            r#"Sure, here is the answer: {"Relation": "cousin - cousin"} Hope this helps!"#,
        );
        assert_eq!(chatty.status, RelationStatus::Identified);
        assert_eq!(chatty.label.as_deref(), Some("cousin - cousin"));

        let nested = parse_relation_response(r#"{"analysis": {"Relation": "friend - friend"}}"#);
        assert_eq!(nested.status, RelationStatus::Identified);

        let first_wins = parse_relation_response(
            r#"{"Relation": "mother - son"} {"Relation": "friend - friend"}"#,
        );
        assert_eq!(first_wins.label.as_deref(), Some("mother - son"));
    }

    #[test]
    fn parser_is_total_on_garbage() {
        for input in [
            "",
            "no structure at all",
            "{",
            "{}",
            r#"{"relation": "husband - wife"}"#,
            r#"{"Relation": 3}"#,
            r#"{"Relation": "second cousin twice removed"}"#,
            r#"[1, 2, 3]"#,
            "{{{{",
        ] {
            let parsed = parse_relation_response(input);
            assert_eq!(parsed.status, RelationStatus::Error, "input {input:?}");
            assert_eq!(parsed.label, None);
        }
    }

    #[test]
    fn every_taxonomy_entry_round_trips_through_the_parser() {
        for entry in RELATION_TAXONOMY {
            let parsed =
                parse_relation_response(&format!("{{\"Relation\": \"{entry}\"}}"));
            assert_eq!(parsed.status, RelationStatus::Identified);
            assert_eq!(parsed.label.as_deref(), Some(entry));
        }
    }

    fn seed_not_available(dir: &Path, name_1: &str, name_2: &str, query: &str, url: &str) {
        let text = format!("article about neither, from {url}");
        record_search(
            dir,
            query,
            &[SearchResult {
                url: url.to_string(),
                text: text.clone(),
            }],
        )
        .unwrap();
        let prompt = build_personal_relation_prompt(name_1, name_2, &text);
        record_completion(dir, &prompt, r#"{"Relation": "Not Available"}"#).unwrap();
    }

    #[test]
    fn identify_returns_first_identified_hit_with_evidence() {
        let dir = tempfile::tempdir().unwrap();
        let d1 = director("d1", "P Q");
        let d2 = director("d2", "R S");
        let queries = build_search_queries("P Q", "R S").unwrap();

        let miss_text = "a page mentioning nobody of interest";
        let hit_text = "P Q is the nephew of R S according to the registry.";
        record_search(
            dir.path(),
            &queries[0],
            &[
                SearchResult {
                    url: "https://example.test/miss".to_string(),
                    text: miss_text.to_string(),
                },
                SearchResult {
                    url: "https://example.test/hit".to_string(),
                    text: hit_text.to_string(),
                },
            ],
        )
        .unwrap();
        record_completion(
            dir.path(),
            &build_personal_relation_prompt("P Q", "R S", miss_text),
            r#"{"Relation": "Not Available"}"#,
        )
        .unwrap();
        record_completion(
            dir.path(),
            &build_personal_relation_prompt("P Q", "R S", hit_text),
            r#"{"Relation": "nephew - uncle"}"#,
        )
        .unwrap();

        let mut search = ReplaySearchClient::new(dir.path());
        let mut analysis = ReplayAnalysisClient::new(dir.path());
        let finding = identify_personal_relation(&d1, &d2, &mut search, &mut analysis, 0);
        assert_eq!(finding.status, RelationStatus::Identified);
        assert_eq!(finding.label.as_deref(), Some("nephew - uncle"));
        assert_eq!(
            finding.evidence_url.as_deref(),
            Some("https://example.test/hit")
        );
        assert_eq!(finding.raw_responses.len(), 2);
        assert_eq!(finding.din_1, "d1");
        assert_eq!(finding.din_2, "d2");
        assert_eq!(finding.error, None);
    }

    #[test]
    fn identify_exhausts_all_queries_to_not_available() {
        let dir = tempfile::tempdir().unwrap();
        let d1 = director("d1", "P Q");
        let d2 = director("d2", "R S");
        let queries = build_search_queries("P Q", "R S").unwrap();
        for (index, query) in queries.iter().enumerate() {
            seed_not_available(
                dir.path(),
                "P Q",
                "R S",
                query,
                &format!("https://example.test/{index}"),
            );
        }

        let mut search = ReplaySearchClient::new(dir.path());
        let mut analysis = ReplayAnalysisClient::new(dir.path());
        let finding = identify_personal_relation(&d1, &d2, &mut search, &mut analysis, 0);
        assert_eq!(finding.status, RelationStatus::NotAvailable);
        assert_eq!(finding.label, None);
        assert_eq!(finding.evidence_url, None);
        assert_eq!(finding.raw_responses.len(), 3);
    }

    #[test]
    fn identify_skips_empty_result_texts() {
        let dir = tempfile::tempdir().unwrap();
        let d1 = director("d1", "P Q");
        let d2 = director("d2", "R S");
        let queries = build_search_queries("P Q", "R S").unwrap();

        record_search(
            dir.path(),
            &queries[0],
            &[SearchResult {
                url: "https://example.test/empty".to_string(),
                text: String::new(),
            }],
        )
        .unwrap();
        let hit_text = "P Q married R S in 1999.";
        record_search(
            dir.path(),
            &queries[1],
            &[SearchResult {
                url: "https://example.test/wedding".to_string(),
                text: hit_text.to_string(),
            }],
        )
        .unwrap();
        record_completion(
            dir.path(),
            &build_personal_relation_prompt("P Q", "R S", hit_text),
            r#"{"Relation": "husband - wife"}"#,
        )
        .unwrap();

        let mut search = ReplaySearchClient::new(dir.path());
        let mut analysis = ReplayAnalysisClient::new(dir.path());
        let finding = identify_personal_relation(&d1, &d2, &mut search, &mut analysis, 0);
        assert_eq!(finding.status, RelationStatus::Identified);
        assert_eq!(finding.raw_responses.len(), 1);
    }

    #[test]
    fn identify_reports_client_failure_as_error() {
        let dir = tempfile::tempdir().unwrap();
        let d1 = director("d1", "P Q");
        let d2 = director("d2", "R S");
        let mut search = ReplaySearchClient::new(dir.path());
        let mut analysis = ReplayAnalysisClient::new(dir.path());
        let finding = identify_personal_relation(&d1, &d2, &mut search, &mut analysis, 1);
        assert_eq!(finding.status, RelationStatus::Error);
        assert_eq!(finding.label, None);
        assert!(finding.error.unwrap().contains("search"));
    }

    #[test]
    fn identify_rejects_empty_names() {
        let dir = tempfile::tempdir().unwrap();
        let d1 = director("d1", "");
        let d2 = director("d2", "R S");
        let mut search = ReplaySearchClient::new(dir.path());
        let mut analysis = ReplayAnalysisClient::new(dir.path());
        let finding = identify_personal_relation(&d1, &d2, &mut search, &mut analysis, 0);
        assert_eq!(finding.status, RelationStatus::Error);
        assert!(finding.error.unwrap().contains("name"));
    }

    struct Flaky {
        failures_left: u32,
        calls: u32,
    }

    impl SearchClient for Flaky {
        fn search(&mut self, _query: &str) -> Result<Vec<SearchResult>, ClientError> {
            self.calls += 1;
            if self.failures_left > 0 {
                self.failures_left -= 1;
                return Err(ClientError::Unavailable("timeout".to_string()));
            }
            Ok(Vec::new())
        }
    }

    #[test]
    fn client_failures_are_retried() {
        let dir = tempfile::tempdir().unwrap();
        let d1 = director("d1", "P Q");
        let d2 = director("d2", "R S");
        let mut analysis = ReplayAnalysisClient::new(dir.path());

        let mut search = Flaky {
            failures_left: 2,
            calls: 0,
        };
        let finding = identify_personal_relation(&d1, &d2, &mut search, &mut analysis, 2);
        assert_eq!(finding.status, RelationStatus::NotAvailable);
        assert_eq!(search.calls, 3 + 2);

        let mut search = Flaky {
            failures_left: 2,
            calls: 0,
        };
        let finding = identify_personal_relation(&d1, &d2, &mut search, &mut analysis, 1);
        assert_eq!(finding.status, RelationStatus::Error);
    }

    fn entity(name: &str, link: &str) -> ProfileEntity {
        ProfileEntity {
            name: name.to_string(),
            link: link.to_string(),
        }
    }

    #[test]
    fn shared_links_are_matched_and_ordered() {
        let p1 = WebProfile::new(
            "d1",
            vec![
                entity("IIT Delhi", "wiki/IIT_Delhi"),
                entity("Acme Corp", "wiki/Acme"),
                entity("Chess Club", "wiki/Chess"),
            ],
        );
        let p2 = WebProfile::new(
            "d2",
            vec![
                entity("Acme Corporation", "wiki/Acme"),
                entity("Indian Institute of Technology Delhi", "wiki/IIT_Delhi"),
            ],
        );
        let matches = match_professional_links(&p1, &p2);
        assert_eq!(matches.len(), 2);
        assert_eq!(matches[0].link, "wiki/Acme");
        assert_eq!(matches[0].name_1, "Acme Corp");
        assert_eq!(matches[0].name_2, "Acme Corporation");
        assert_eq!(matches[1].link, "wiki/IIT_Delhi");

        let swapped = match_professional_links(&p2, &p1);
        let links = |rows: &[ProfessionalLink]| {
            rows.iter().map(|r| r.link.clone()).collect::<Vec<_>>()
        };
        assert_eq!(links(&matches), links(&swapped));
        assert_eq!(swapped[0].name_1, "Acme Corporation");
        assert_eq!(swapped[0].name_2, "Acme Corp");
    }

    #[test]
    fn disjoint_profiles_share_nothing() {
        let p1 = WebProfile::new("d1", vec![entity("A", "wiki/A")]);
        let p2 = WebProfile::new("d2", vec![entity("B", "wiki/B")]);
        assert!(match_professional_links(&p1, &p2).is_empty());
    }

    #[test]
    fn profiles_load_from_disk_and_drop_duplicates() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("d7.json");
        fs::write(
            &path,
            r#"{"din": "d7", "entities": [
                {"name": "Acme", "link": "wiki/Acme"},
                {"name": "Acme", "link": "wiki/Acme"},
                {"name": "IIT", "link": "wiki/IIT"}
            ]}"#,
        )
        .unwrap();
        let profile = load_web_profile(&path).unwrap();
        assert_eq!(profile.din, "d7");
        assert_eq!(
            profile.entities,
            vec![entity("Acme", "wiki/Acme"), entity("IIT", "wiki/IIT")]
        );

        assert!(load_web_profile(&dir.path().join("missing.json")).is_err());
    }
}
