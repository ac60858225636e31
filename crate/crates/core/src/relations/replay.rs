//! Recorded search results and completions, replayed from disk.
//!
//! A replay directory holds one JSON file per recorded search query
//! under `search/` and one per analysis prompt under `completions/`,
//! each named by the first 16 hex characters of the SHA-256 of the
//! query or prompt. Runs against these fixtures are fully offline and
//! deterministic.

use std::fs;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use super::{ClientError, RelationError, SearchClient, SearchResult, TextAnalysisClient};

fn file_key(text: &str) -> String {
    hex::encode(Sha256::digest(text.as_bytes()))[..16].to_string()
}

fn full_digest(text: &str) -> String {
    hex::encode(Sha256::digest(text.as_bytes()))
}

#[derive(Debug, Serialize, Deserialize)]
struct SearchRecord {
    query: String,
    results: Vec<SearchResult>,
}

#[derive(Debug, Serialize, Deserialize)]
struct CompletionRecord {
    prompt_sha256: String,
    response: String,
}

fn search_path(dir: &Path, query: &str) -> PathBuf {
    dir.join("search").join(format!("{}.json", file_key(query)))
}

fn completion_path(dir: &Path, prompt: &str) -> PathBuf {
    dir.join("completions")
        .join(format!("{}.json", file_key(prompt)))
}

/// Stores a search fixture for later replay.
pub fn record_search(
    dir: &Path,
    query: &str,
    results: &[SearchResult],
) -> Result<(), RelationError> {
    let path = search_path(dir, query);
    fs::create_dir_all(path.parent().expect("fixture path has a parent"))?;
    let record = SearchRecord {
        query: query.to_string(),
        results: results.to_vec(),
    };
    fs::write(&path, serde_json::to_string_pretty(&record)?)?;
    Ok(())
}

/// Stores a completion fixture for later replay.
pub fn record_completion(dir: &Path, prompt: &str, response: &str) -> Result<(), RelationError> {
    let path = completion_path(dir, prompt);
    fs::create_dir_all(path.parent().expect("fixture path has a parent"))?;
    let record = CompletionRecord {
        prompt_sha256: full_digest(prompt),
        response: response.to_string(),
    };
    fs::write(&path, serde_json::to_string_pretty(&record)?)?;
    Ok(())
}

/// [`SearchClient`] that serves recorded results and fails on queries
/// that were never recorded.
#[derive(Debug, Clone)]
pub struct ReplaySearchClient {
    dir: PathBuf,
}

impl ReplaySearchClient {
    pub fn new(dir: impl Into<PathBuf>) -> Self {
        ReplaySearchClient { dir: dir.into() }
    }
}

impl SearchClient for ReplaySearchClient {
    fn search(&mut self, query: &str) -> Result<Vec<SearchResult>, ClientError> {
        let path = search_path(&self.dir, query);
        let raw = fs::read_to_string(&path).map_err(|_| {
            ClientError::Unavailable(format!("no recorded search for query {query:?}"))
        })?;
        let record: SearchRecord = serde_json::from_str(&raw).map_err(|error| {
            ClientError::Unavailable(format!("bad search record {}: {error}", path.display()))
        })?;
        if record.query != query {
            return Err(ClientError::Unavailable(format!(
                "search record {} holds query {:?}, not {query:?}",
                path.display(),
                record.query
            )));
        }
        Ok(record.results)
    }
}

/// [`TextAnalysisClient`] that serves recorded completions keyed by
/// prompt hash.
#[derive(Debug, Clone)]
pub struct ReplayAnalysisClient {
    dir: PathBuf,
}

impl ReplayAnalysisClient {
    pub fn new(dir: impl Into<PathBuf>) -> Self {
        ReplayAnalysisClient { dir: dir.into() }
    }
}

impl TextAnalysisClient for ReplayAnalysisClient {
    fn complete(&mut self, prompt: &str) -> Result<String, ClientError> {
        let path = completion_path(&self.dir, prompt);
        let raw = fs::read_to_string(&path).map_err(|_| {
            ClientError::Unavailable(format!(
                "no recorded completion for prompt hash {}",
                file_key(prompt)
            ))
        })?;
        let record: CompletionRecord = serde_json::from_str(&raw).map_err(|error| {
            ClientError::Unavailable(format!("bad completion record {}: {error}", path.display()))
        })?;
        if record.prompt_sha256 != full_digest(prompt) {
            return Err(ClientError::Unavailable(format!(
                "completion record {} was made for a different prompt",
                path.display()
            )));
        }
        Ok(record.response)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn search_round_trips_through_disk() {
        let dir = tempfile::tempdir().unwrap();
        let results = vec![SearchResult {
            url: "https://example.test/a".to_string(),
            text: "text a".to_string(),
        }];
        record_search(dir.path(), "some query", &results).unwrap();

        let mut client = ReplaySearchClient::new(dir.path());
        assert_eq!(client.search("some query").unwrap(), results);
        assert!(client.search("other query").is_err());
    }

    #[test]
    fn completion_round_trips_and_verifies_prompt() {
        let dir = tempfile::tempdir().unwrap();
        record_completion(dir.path(), "prompt body", "the response").unwrap();

        let mut client = ReplayAnalysisClient::new(dir.path());
        assert_eq!(client.complete("prompt body").unwrap(), "the response");
        assert!(client.complete("different prompt").is_err());
    }

    #[test]
    fn tampered_records_are_rejected() {
        let dir = tempfile::tempdir().unwrap();
        record_search(dir.path(), "query one", &[]).unwrap();
        let path = search_path(dir.path(), "query one");
        let raw = fs::read_to_string(&path)
            .unwrap()
            .replace("query one", "query two");
        fs::write(&path, raw).unwrap();

        let mut client = ReplaySearchClient::new(dir.path());
        let error = client.search("query one").unwrap_err();
        assert!(error.to_string().contains("query two"));

        record_completion(dir.path(), "prompt x", "resp").unwrap();
        let path = completion_path(dir.path(), "prompt x");
        let raw = fs::read_to_string(&path)
            .unwrap()
            .replace(&full_digest("prompt x"), &full_digest("prompt y"));
        fs::write(&path, raw).unwrap();

        let mut client = ReplayAnalysisClient::new(dir.path());
        assert!(client.complete("prompt x").is_err());
    }
}
