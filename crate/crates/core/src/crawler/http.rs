//! HTTP-backed page provider with rate limiting and a disk cache.
//!
//! What a page looks like is configuration, not code: URL templates
//! carry an `{id}` placeholder and regular expressions pull the display
//! name and linked identifiers out of the fetched document. Responses
//! are cached one file per (kind, identifier), so a repeated crawl hits
//! the network only for pages it has never seen.

use std::collections::HashSet;
use std::fs;
use std::path::PathBuf;
use std::thread;
use std::time::{Duration, Instant};

use regex::Regex;
use sha2::{Digest, Sha256};

use super::{CompanyPage, CrawlError, DirectorPage, PageFetchError, PageProvider};
use crate::model::NodeKind;

/// Regular expressions (with one capture group each) that extract page
/// content.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParseRules {
    /// Captures the display name; the identifier is used when no match.
    pub name_pattern: String,
    /// Captures one director identifier per match on a company page.
    pub director_link_pattern: String,
    /// Captures one company identifier per match on a director page.
    pub company_link_pattern: String,
}

/// Configuration for [`HttpPageProvider`].
#[derive(Debug, Clone, PartialEq)]
pub struct HttpProviderConfig {
    /// Company page URL with an `{id}` placeholder.
    pub company_url_template: String,
    /// Director page URL with an `{id}` placeholder.
    pub director_url_template: String,
    pub rules: ParseRules,
    /// Maximum request rate; non-positive disables throttling.
    pub rate_limit_per_sec: f64,
    pub cache_dir: Option<PathBuf>,
    pub timeout: Duration,
}

impl HttpProviderConfig {
    pub fn new(
        company_url_template: impl Into<String>,
        director_url_template: impl Into<String>,
        rules: ParseRules,
    ) -> Self {
        HttpProviderConfig {
            company_url_template: company_url_template.into(),
            director_url_template: director_url_template.into(),
            rules,
            rate_limit_per_sec: 1.0,
            cache_dir: None,
            timeout: Duration::from_secs(30),
        }
    }
}

/// [`PageProvider`] that fetches pages over HTTP.
#[derive(Debug)]
pub struct HttpPageProvider {
    config: HttpProviderConfig,
    name_re: Regex,
    director_link_re: Regex,
    company_link_re: Regex,
    last_request: Option<Instant>,
}

impl HttpPageProvider {
    pub fn new(config: HttpProviderConfig) -> Result<Self, CrawlError> {
        for (label, template) in [
            ("company_url_template", &config.company_url_template),
            ("director_url_template", &config.director_url_template),
        ] {
            if !template.contains("{id}") {
                return Err(CrawlError::InvalidConfig(format!(
                    "{label} must contain an {{id}} placeholder"
                )));
            }
        }
        let compile = |label: &str, pattern: &str| {
            Regex::new(pattern)
                .map_err(|error| CrawlError::InvalidConfig(format!("{label}: {error}")))
        };
        Ok(HttpPageProvider {
            name_re: compile("name_pattern", &config.rules.name_pattern)?,
            director_link_re: compile(
                "director_link_pattern",
                &config.rules.director_link_pattern,
            )?,
            company_link_re: compile("company_link_pattern", &config.rules.company_link_pattern)?,
            last_request: None,
            config,
        })
    }

    /// Where the response body for this page is cached, when caching is
    /// enabled.
    pub fn cache_path(&self, kind: NodeKind, id: &str) -> Option<PathBuf> {
        let dir = self.config.cache_dir.as_ref()?;
        let digest = hex::encode(Sha256::digest(id.as_bytes()));
        Some(dir.join(format!("{kind}-{}.html", &digest[..16])))
    }

    fn url_for(&self, kind: NodeKind, id: &str) -> String {
        let template = match kind {
            NodeKind::Company => &self.config.company_url_template,
            NodeKind::Director => &self.config.director_url_template,
        };
        template.replace("{id}", id)
    }

    fn throttle(&mut self) {
        if self.config.rate_limit_per_sec <= 0.0 {
            return;
        }
        let min_interval = Duration::from_secs_f64(1.0 / self.config.rate_limit_per_sec);
        if let Some(last) = self.last_request {
            let elapsed = last.elapsed();
            if elapsed < min_interval {
                thread::sleep(min_interval - elapsed);
            }
        }
        self.last_request = Some(Instant::now());
    }

    fn fetch_document(&mut self, kind: NodeKind, id: &str) -> Result<String, PageFetchError> {
        if id.is_empty() {
            return Err(PageFetchError::NotFound);
        }
        if let Some(path) = self.cache_path(kind, id) {
            if let Ok(body) = fs::read_to_string(&path) {
                return Ok(body);
            }
        }
        self.throttle();
        let url = self.url_for(kind, id);
        let response = ureq::get(&url)
            .config()
            .timeout_global(Some(self.config.timeout))
            .build()
            .call();
        let body = match response {
            Ok(mut response) => response
                .body_mut()
                .read_to_string()
                .map_err(|error| PageFetchError::Unavailable(error.to_string()))?,
            Err(ureq::Error::StatusCode(404)) => return Err(PageFetchError::NotFound),
            Err(error) => return Err(PageFetchError::Unavailable(error.to_string())),
        };
        if let Some(path) = self.cache_path(kind, id) {
            if let Some(parent) = path.parent() {
                let _ = fs::create_dir_all(parent);
            }
            let _ = fs::write(&path, &body);
        }
        Ok(body)
    }

    fn parse_name(&self, body: &str, fallback: &str) -> String {
        self.name_re
            .captures(body)
            .and_then(|captures| captures.get(1))
            .map(|m| m.as_str().trim().to_string())
            .unwrap_or_else(|| fallback.to_string())
    }
}

fn parse_links(re: &Regex, body: &str) -> Vec<String> {
    let mut seen = HashSet::new();
    let mut links = Vec::new();
    for captures in re.captures_iter(body) {
        if let Some(m) = captures.get(1) {
            let id = m.as_str().to_string();
            if seen.insert(id.clone()) {
                links.push(id);
            }
        }
    }
    links
}

impl PageProvider for HttpPageProvider {
    fn fetch_company(&mut self, cin: &str) -> Result<CompanyPage, PageFetchError> {
        let body = self.fetch_document(NodeKind::Company, cin)?;
        Ok(CompanyPage {
            cin: cin.to_string(),
            name: self.parse_name(&body, cin),
            url: self.url_for(NodeKind::Company, cin),
            director_links: parse_links(&self.director_link_re, &body),
        })
    }

    fn fetch_director(&mut self, din: &str) -> Result<DirectorPage, PageFetchError> {
        let body = self.fetch_document(NodeKind::Director, din)?;
        Ok(DirectorPage {
            din: din.to_string(),
            name: self.parse_name(&body, din),
            url: self.url_for(NodeKind::Director, din),
            company_links: parse_links(&self.company_link_re, &body),
        })
    }

    fn is_finite(&self) -> bool {
        false
    }
}
