//! Construction and analysis of director-company interlock networks.
//!
//! The crate builds two-mode (company-director) networks from crawled or
//! file-based corpora and analyzes them through one-mode projections,
//! maximal clique enumeration, maximal frequent itemset mining, and
//! LLM-assisted relation identification.
//!
//! * [`model`]: domain records, the three-file dataset schema, validation,
//!   and keyed anonymization.
//! * [`crawler`]: breadth-first traversal through a pluggable page
//!   provider, with fixture and HTTP implementations.
//! * [`graph`]: the immutable two-mode graph, degree histograms, star
//!   nodes, and cut vertices.
//! * [`projection`]: one-mode projections with shared-entity edge weights
//!   and bounded indirect-path enumeration.
//! * [`cliques`]: ego networks, maximal clique enumeration, and per-base
//!   clique statistics.
//! * [`itemsets`]: maximal frequent itemset mining over director lists
//!   per company (and vice versa).
//! * [`relations`]: search plus prompt protocol for personal relations,
//!   and standardized-link matching for professional relations.
//! * [`export`]: GraphML and DOT writers for projection graphs.

pub mod cliques;
pub mod crawler;
pub mod export;
pub mod graph;
pub mod itemsets;
pub mod model;
pub mod projection;
pub mod relations;

#[cfg(test)]
pub(crate) mod testfix;
