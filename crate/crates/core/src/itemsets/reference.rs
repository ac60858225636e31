//! Exhaustive maximal-itemset miner used as a cross-check.
//!
//! Enumerates every subset of the distinct items, so it is only suitable
//! for small databases, but its output is trivially trustworthy and the
//! fast miner is tested against it.

use super::{records_for_sets, FrequentItemsetRecord, MinSupport, TransactionDB};

const MAX_DISTINCT_ITEMS: usize = 20;

/// Mines maximal frequent itemsets by exhaustive subset enumeration.
///
/// Returns the same records, in the same order, as
/// [`mine_maximal_itemsets`](super::mine_maximal_itemsets). Panics when
/// the database has more than 20 distinct items.
pub fn mine_maximal_brute_force(
    db: &TransactionDB,
    min_support: MinSupport,
) -> Vec<FrequentItemsetRecord> {
    if db.is_empty() {
        return Vec::new();
    }
    let mut items: Vec<&str> = db
        .transactions()
        .iter()
        .flat_map(|t| t.items.iter().map(String::as_str))
        .collect();
    items.sort_unstable();
    items.dedup();
    assert!(
        items.len() <= MAX_DISTINCT_ITEMS,
        "brute-force miner supports at most {MAX_DISTINCT_ITEMS} distinct items, got {}",
        items.len()
    );

    let masks: Vec<u32> = db
        .transactions()
        .iter()
        .map(|t| {
            t.items
                .iter()
                .map(|item| 1u32 << items.binary_search(&item.as_str()).unwrap())
                .fold(0, |acc, bit| acc | bit)
        })
        .collect();
    let threshold = min_support.threshold(db.len());
    let support_of = |subset: u32| masks.iter().filter(|&&m| m & subset == subset).count();

    let universe = items.len();
    let mut frequent: Vec<u32> = Vec::new();
    for subset in 1u32..(1u32 << universe) {
        if support_of(subset) >= threshold {
            frequent.push(subset);
        }
    }
    let mut maximal_sets = Vec::new();
    for &subset in &frequent {
        let extendable = (0..universe).any(|bit| {
            let grown = subset | (1 << bit);
            grown != subset && support_of(grown) >= threshold
        });
        if !extendable {
            maximal_sets.push(
                (0..universe)
                    .filter(|bit| subset & (1 << bit) != 0)
                    .map(|bit| items[bit].to_string())
                    .collect::<Vec<_>>(),
            );
        }
    }
    records_for_sets(db, maximal_sets)
}
