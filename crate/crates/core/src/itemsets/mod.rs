//! Maximal frequent itemset mining over board memberships.
//!
//! Each opposite-mode entity contributes one transaction: with directors
//! as items, every company lists its board; with companies as items,
//! every director lists their seats. Mining finds the largest item
//! groups that co-occur in at least a threshold number of transactions,
//! where the threshold comes from a minimum-support fraction.

mod fptree;
pub mod reference;

use std::collections::{BTreeMap, HashMap, HashSet};
use std::fmt;
use std::str::FromStr;

use thiserror::Error;

use crate::model::BipartiteDataset;
use crate::model::NodeKind;

/// One transaction: the items attached to a single opposite-mode entity.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Transaction {
    pub key: String,
    pub items: Vec<String>,
}

/// A transaction database in one of the two item modes.
#[derive(Debug, Clone)]
pub struct TransactionDB {
    item_kind: NodeKind,
    transactions: Vec<Transaction>,
}

impl TransactionDB {
    /// Builds a database from raw transactions; item lists are sorted
    /// and de-duplicated.
    pub fn new(item_kind: NodeKind, mut transactions: Vec<Transaction>) -> Self {
        for transaction in &mut transactions {
            transaction.items.sort_unstable();
            transaction.items.dedup();
        }
        TransactionDB {
            item_kind,
            transactions,
        }
    }

    pub fn item_kind(&self) -> NodeKind {
        self.item_kind
    }

    pub fn transaction_kind(&self) -> NodeKind {
        self.item_kind.opposite()
    }

    pub fn transactions(&self) -> &[Transaction] {
        &self.transactions
    }

    pub fn len(&self) -> usize {
        self.transactions.len()
    }

    pub fn is_empty(&self) -> bool {
        self.transactions.is_empty()
    }
}

/// Lists the items of the chosen kind held by each opposite-mode
/// entity, one transaction per entity in dataset order, including
/// entities with no memberships.
pub fn build_transactions(dataset: &BipartiteDataset, item_kind: NodeKind) -> TransactionDB {
    let mut by_key: HashMap<&str, Vec<String>> = HashMap::new();
    for affiliation in dataset.affiliations() {
        let (key, item) = match item_kind {
            NodeKind::Director => (affiliation.cin.as_str(), affiliation.din.clone()),
            NodeKind::Company => (affiliation.din.as_str(), affiliation.cin.clone()),
        };
        by_key.entry(key).or_default().push(item);
    }
    let keys: Vec<&str> = match item_kind {
        NodeKind::Director => dataset.companies().iter().map(|c| c.cin.as_str()).collect(),
        NodeKind::Company => dataset.directors().iter().map(|d| d.din.as_str()).collect(),
    };
    let transactions = keys
        .into_iter()
        .map(|key| {
            let mut items = by_key.remove(key).unwrap_or_default();
            items.sort_unstable();
            Transaction {
                key: key.to_string(),
                items,
            }
        })
        .collect();
    TransactionDB {
        item_kind,
        transactions,
    }
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum MinSupportError {
    #[error("minimum support must be a plain decimal such as 0.0001")]
    Malformed,
    #[error("minimum support supports at most 18 decimal places")]
    TooPrecise,
    #[error("minimum support must be greater than 0 and at most 1")]
    OutOfRange,
}

/// A minimum-support fraction held as an exact rational so threshold
/// arithmetic never suffers floating-point drift.
#[derive(Debug, Clone, Copy)]
pub struct MinSupport {
    numerator: u64,
    denominator: u64,
}

impl MinSupport {
    /// Builds a support fraction directly; requires 0 < n/d ≤ 1.
    pub fn fraction(numerator: u64, denominator: u64) -> Result<Self, MinSupportError> {
        if denominator == 0 || numerator == 0 || numerator > denominator {
            return Err(MinSupportError::OutOfRange);
        }
        Ok(MinSupport {
            numerator,
            denominator,
        })
    }

    /// The absolute occurrence count an itemset needs in a database of
    /// `n_transactions` transactions: ceil(n × support), exactly.
    pub fn threshold(&self, n_transactions: usize) -> usize {
        assert!(n_transactions >= 1, "transaction count must be at least 1");
        let n = n_transactions as u128;
        let numerator = self.numerator as u128;
        let denominator = self.denominator as u128;
        ((n * numerator + denominator - 1) / denominator) as usize
    }
}

impl FromStr for MinSupport {
    type Err = MinSupportError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let (int_text, frac_text) = match s.split_once('.') {
            Some((i, f)) => (i, f),
            None => (s, ""),
        };
        if int_text.is_empty() && frac_text.is_empty() {
            return Err(MinSupportError::Malformed);
        }
        let all_digits =
            |t: &str| t.chars().all(|c| c.is_ascii_digit());
        if !all_digits(int_text) || !all_digits(frac_text) {
            return Err(MinSupportError::Malformed);
        }
        if frac_text.len() > 18 {
            return Err(MinSupportError::TooPrecise);
        }
        let int_part: u128 = if int_text.is_empty() {
            0
        } else {
            int_text.parse().map_err(|_| MinSupportError::OutOfRange)?
        };
        let frac_part: u128 = if frac_text.is_empty() {
            0
        } else {
            frac_text.parse().expect("digit-checked")
        };
        let denominator = 10u128.pow(frac_text.len() as u32);
        let numerator = int_part
            .checked_mul(denominator)
            .and_then(|v| v.checked_add(frac_part))
            .ok_or(MinSupportError::OutOfRange)?;
        if numerator == 0 || numerator > denominator {
            return Err(MinSupportError::OutOfRange);
        }
        Ok(MinSupport {
            numerator: numerator as u64,
            denominator: denominator as u64,
        })
    }
}

impl PartialEq for MinSupport {
    fn eq(&self, other: &Self) -> bool {
        self.numerator as u128 * other.denominator as u128
            == other.numerator as u128 * self.denominator as u128
    }
}

impl Eq for MinSupport {}

impl fmt::Display for MinSupport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let int = self.numerator / self.denominator;
        let rem = self.numerator % self.denominator;
        if rem == 0 {
            return write!(f, "{int}");
        }
        let width = self.denominator.ilog10() as usize;
        if 10u64.pow(width as u32) == self.denominator {
            let digits = format!("{rem:0width$}");
            write!(f, "{int}.{}", digits.trim_end_matches('0'))
        } else {
            write!(f, "{}/{}", self.numerator, self.denominator)
        }
    }
}

/// Absolute support threshold for a database size, per the ceiling rule.
pub fn support_threshold(n_transactions: usize, min_support: MinSupport) -> usize {
    min_support.threshold(n_transactions)
}

/// A maximal frequent itemset with its support and the opposite-mode
/// entities whose transactions contain every item.
#[derive(Debug, Clone, PartialEq)]
pub struct FrequentItemsetRecord {
    pub items: Vec<String>,
    pub support_count: usize,
    pub support_fraction: f64,
    pub intersecting: Vec<String>,
}

impl FrequentItemsetRecord {
    pub fn size(&self) -> usize {
        self.items.len()
    }
}

/// Mines the maximal frequent itemsets of `db` at the threshold implied
/// by `min_support`, sorted by support count descending, then size
/// descending, then item order.
pub fn mine_maximal_itemsets(
    db: &TransactionDB,
    min_support: MinSupport,
) -> Vec<FrequentItemsetRecord> {
    if db.is_empty() {
        return Vec::new();
    }
    let threshold = min_support.threshold(db.len());
    let mut vocabulary: Vec<&str> = db
        .transactions
        .iter()
        .flat_map(|t| t.items.iter().map(String::as_str))
        .collect();
    vocabulary.sort_unstable();
    vocabulary.dedup();
    let encoded: Vec<Vec<u32>> = db
        .transactions
        .iter()
        .map(|t| {
            t.items
                .iter()
                .map(|item| vocabulary.binary_search(&item.as_str()).unwrap() as u32)
                .collect()
        })
        .collect();
    let sets = fptree::mine_maximal_sets(&encoded, threshold as u64);
    let named = sets
        .into_iter()
        .map(|set| {
            set.into_iter()
                .map(|id| vocabulary[id as usize].to_string())
                .collect()
        })
        .collect();
    records_for_sets(db, named)
}

/// Computes support and intersecting entities for each item set by
/// intersecting per-item transaction lists, then sorts the records
/// canonically. Shared by the fast miner and the brute-force reference.
pub(crate) fn records_for_sets(
    db: &TransactionDB,
    sets: Vec<Vec<String>>,
) -> Vec<FrequentItemsetRecord> {
    let mut tid_lists: HashMap<&str, Vec<u32>> = HashMap::new();
    for (tid, transaction) in db.transactions.iter().enumerate() {
        for item in &transaction.items {
            tid_lists.entry(item).or_default().push(tid as u32);
        }
    }
    let total = db.len();
    let mut records: Vec<FrequentItemsetRecord> = sets
        .into_iter()
        .map(|items| {
            let mut tids: Option<Vec<u32>> = None;
            for item in &items {
                let list = tid_lists
                    .get(item.as_str())
                    .map(Vec::as_slice)
                    .unwrap_or(&[]);
                tids = Some(match tids {
                    None => list.to_vec(),
                    Some(current) => intersect_sorted(&current, list),
                });
            }
            let tids = tids.unwrap_or_default();
            let mut intersecting: Vec<String> = tids
                .iter()
                .map(|&tid| db.transactions[tid as usize].key.clone())
                .collect();
            intersecting.sort_unstable();
            FrequentItemsetRecord {
                support_count: tids.len(),
                support_fraction: tids.len() as f64 / total as f64,
                items,
                intersecting,
            }
        })
        .collect();
    records.sort_by(|a, b| {
        b.support_count
            .cmp(&a.support_count)
            .then_with(|| b.items.len().cmp(&a.items.len()))
            .then_with(|| a.items.cmp(&b.items))
    });
    records
}

fn intersect_sorted(left: &[u32], right: &[u32]) -> Vec<u32> {
    let mut out = Vec::new();
    let (mut i, mut j) = (0, 0);
    while i < left.len() && j < right.len() {
        match left[i].cmp(&right[j]) {
            std::cmp::Ordering::Less => i += 1,
            std::cmp::Ordering::Greater => j += 1,
            std::cmp::Ordering::Equal => {
                out.push(left[i]);
                i += 1;
                j += 1;
            }
        }
    }
    out
}

/// Ordering key for report rows.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ReportSortKey {
    Support,
    Size,
}

impl FromStr for ReportSortKey {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "support" => Ok(ReportSortKey::Support),
            "size" => Ok(ReportSortKey::Size),
            other => Err(format!("unknown sort key {other:?}, expected support or size")),
        }
    }
}

/// One row of the itemset report.
#[derive(Debug, Clone, PartialEq)]
pub struct ItemsetReportRow {
    pub rank: usize,
    pub support_fraction: f64,
    pub support_count: usize,
    pub items: Vec<String>,
    pub intersecting: Vec<String>,
    pub shared_surname: bool,
}

impl ItemsetReportRow {
    /// Support fraction with the absolute count in parentheses, for
    /// example "0.4 (2)".
    pub fn support_label(&self) -> String {
        let fraction = format!("{:.6}", self.support_fraction);
        let fraction = fraction.trim_end_matches('0').trim_end_matches('.');
        format!("{} ({})", fraction, self.support_count)
    }
}

/// Ranks the records under the chosen key and keeps the first `top_k`
/// of those with at least `min_size` items.
///
/// When `names` maps item identifiers to display names, rows where two
/// or more members share a final name token are flagged; the flag is an
/// annotation only and implies nothing about actual kinship.
pub fn itemset_report(
    records: &[FrequentItemsetRecord],
    top_k: usize,
    sort_key: ReportSortKey,
    min_size: usize,
    names: Option<&HashMap<String, String>>,
) -> Vec<ItemsetReportRow> {
    assert!(top_k >= 1, "top_k must be at least 1");
    let mut filtered: Vec<&FrequentItemsetRecord> = records
        .iter()
        .filter(|record| record.size() >= min_size)
        .collect();
    match sort_key {
        ReportSortKey::Support => filtered.sort_by(|a, b| {
            b.support_count
                .cmp(&a.support_count)
                .then_with(|| b.size().cmp(&a.size()))
                .then_with(|| a.items.cmp(&b.items))
        }),
        ReportSortKey::Size => filtered.sort_by(|a, b| {
            b.size()
                .cmp(&a.size())
                .then_with(|| b.support_count.cmp(&a.support_count))
                .then_with(|| a.items.cmp(&b.items))
        }),
    }
    filtered
        .into_iter()
        .take(top_k)
        .enumerate()
        .map(|(index, record)| ItemsetReportRow {
            rank: index + 1,
            support_fraction: record.support_fraction,
            support_count: record.support_count,
            items: record.items.clone(),
            intersecting: record.intersecting.clone(),
            shared_surname: names
                .map(|names| shares_surname(&record.items, names))
                .unwrap_or(false),
        })
        .collect()
}

fn shares_surname(items: &[String], names: &HashMap<String, String>) -> bool {
    let mut seen = HashSet::new();
    for id in items {
        let Some(name) = names.get(id) else { continue };
        let Some(last) = name.split_whitespace().last() else {
            continue;
        };
        if !seen.insert(last) {
            return true;
        }
    }
    false
}

/// Size histogram and (size, support) points for distribution plots.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct ItemsetDistribution {
    pub size_counts: BTreeMap<usize, usize>,
    pub points: Vec<(usize, usize)>,
}

/// Summarises mined records: how many itemsets exist per cardinality,
/// and the full (size, support_count) multiset sorted ascending.
pub fn itemset_distribution(records: &[FrequentItemsetRecord]) -> ItemsetDistribution {
    let mut distribution = ItemsetDistribution::default();
    for record in records {
        *distribution.size_counts.entry(record.size()).or_insert(0) += 1;
        distribution.points.push((record.size(), record.support_count));
    }
    distribution.points.sort_unstable();
    distribution
}
