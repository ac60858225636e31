//! Live HTTP clients for search and text analysis.
//!
//! Credentials come from the environment: SEARCH_API_KEY for the search
//! client, LLM_API_KEY and LLM_MODEL for the analysis client. Both
//! clients speak plain JSON over configurable endpoints, so they adapt
//! to any service exposing these shapes; recorded replay clients cover
//! everything tests need, keeping these implementations out of the test
//! surface.

use std::env;
use std::time::Duration;

use serde::Deserialize;

use super::{ClientError, SearchClient, SearchResult, TextAnalysisClient};

pub const SEARCH_API_KEY_VAR: &str = "SEARCH_API_KEY";
pub const LLM_API_KEY_VAR: &str = "LLM_API_KEY";
pub const LLM_MODEL_VAR: &str = "LLM_MODEL";

fn required_env(var: &'static str) -> Result<String, ClientError> {
    env::var(var)
        .ok()
        .filter(|value| !value.is_empty())
        .ok_or(ClientError::MissingCredentials(var))
}

/// Search client for a JSON endpoint answering
/// `GET {endpoint}?q={query}` with `{"results": [{"url", "text"}]}`.
#[derive(Debug, Clone)]
pub struct HttpSearchClient {
    endpoint: String,
    api_key: String,
    timeout: Duration,
}

#[derive(Debug, Deserialize)]
struct SearchResponse {
    results: Vec<SearchResult>,
}

impl HttpSearchClient {
    pub fn new(endpoint: impl Into<String>, api_key: impl Into<String>) -> Self {
        HttpSearchClient {
            endpoint: endpoint.into(),
            api_key: api_key.into(),
            timeout: Duration::from_secs(30),
        }
    }

    /// Builds the client with the key from SEARCH_API_KEY.
    pub fn from_env(endpoint: impl Into<String>) -> Result<Self, ClientError> {
        Ok(Self::new(endpoint, required_env(SEARCH_API_KEY_VAR)?))
    }
}

impl SearchClient for HttpSearchClient {
    fn search(&mut self, query: &str) -> Result<Vec<SearchResult>, ClientError> {
        let mut response = ureq::get(&self.endpoint)
            .query("q", query)
            .header("Authorization", format!("Bearer {}", self.api_key))
            .config()
            .timeout_global(Some(self.timeout))
            .build()
            .call()
            .map_err(|error| ClientError::Unavailable(error.to_string()))?;
        let body: SearchResponse = response
            .body_mut()
            .read_json()
            .map_err(|error| ClientError::Unavailable(error.to_string()))?;
        Ok(body.results.into_iter().take(5).collect())
    }
}

/// Analysis client for a chat-completions style endpoint: posts
/// `{"model", "messages"}` and reads `choices[0].message.content`.
#[derive(Debug, Clone)]
pub struct HttpAnalysisClient {
    endpoint: String,
    api_key: String,
    model: String,
    timeout: Duration,
}

#[derive(Debug, Deserialize)]
struct CompletionResponse {
    choices: Vec<CompletionChoice>,
}

#[derive(Debug, Deserialize)]
struct CompletionChoice {
    message: CompletionMessage,
}

#[derive(Debug, Deserialize)]
struct CompletionMessage {
    content: String,
}

impl HttpAnalysisClient {
    pub fn new(
        endpoint: impl Into<String>,
        api_key: impl Into<String>,
        model: impl Into<String>,
    ) -> Self {
        HttpAnalysisClient {
            endpoint: endpoint.into(),
            api_key: api_key.into(),
            model: model.into(),
            timeout: Duration::from_secs(120),
        }
    }

    /// Builds the client with credentials from LLM_API_KEY and
    /// LLM_MODEL.
    pub fn from_env(endpoint: impl Into<String>) -> Result<Self, ClientError> {
        let api_key = required_env(LLM_API_KEY_VAR)?;
        let model = required_env(LLM_MODEL_VAR)?;
        Ok(Self::new(endpoint, api_key, model))
    }
}

impl TextAnalysisClient for HttpAnalysisClient {
    fn complete(&mut self, prompt: &str) -> Result<String, ClientError> {
        let payload = serde_json::json!({
            "model": self.model,
            "messages": [{"role": "user", "content": prompt}],
        });
        let mut response = ureq::post(&self.endpoint)
            .header("Authorization", format!("Bearer {}", self.api_key))
            .config()
            .timeout_global(Some(self.timeout))
            .build()
            .send_json(payload)
            .map_err(|error| ClientError::Unavailable(error.to_string()))?;
        let body: CompletionResponse = response
            .body_mut()
            .read_json()
            .map_err(|error| ClientError::Unavailable(error.to_string()))?;
        body.choices
            .into_iter()
            .next()
            .map(|choice| choice.message.content)
            .ok_or_else(|| ClientError::Unavailable("completion had no choices".to_string()))
    }
}
