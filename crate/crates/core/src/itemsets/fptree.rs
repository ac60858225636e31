//! Frequent-pattern tree and maximal-itemset search.
//!
//! Items are dense ranks assigned by descending global frequency; the
//! miner returns plain rank sets, leaving support recomputation to the
//! caller. Maximality during the search is tracked in a trie of already
//! found sets keyed in rank order.

use std::collections::BTreeMap;

/// Prefix tree of itemsets in ascending rank order, supporting the
/// superset query used for maximality checks.
pub(crate) struct MfiTree {
    items: Vec<u32>,
    children: Vec<Vec<u32>>,
}

impl MfiTree {
    pub(crate) fn new() -> Self {
        MfiTree {
            items: vec![u32::MAX],
            children: vec![Vec::new()],
        }
    }

    fn child_with(&self, node: u32, item: u32) -> Option<u32> {
        self.children[node as usize]
            .iter()
            .copied()
            .find(|&c| self.items[c as usize] == item)
    }

    /// Inserts a set given in ascending rank order.
    pub(crate) fn insert(&mut self, set: &[u32]) {
        let mut node = 0u32;
        for &item in set {
            node = match self.child_with(node, item) {
                Some(child) => child,
                None => {
                    let child = self.items.len() as u32;
                    self.items.push(item);
                    self.children.push(Vec::new());
                    // Keep children ordered by item for the pruned walk.
                    let list = &mut self.children[node as usize];
                    let position = list
                        .iter()
                        .position(|&c| self.items[c as usize] > item)
                        .unwrap_or(list.len());
                    list.insert(position, child);
                    child
                }
            };
        }
    }

    /// True when some stored set contains every item of `set` (equality
    /// included). `set` must be in ascending rank order.
    pub(crate) fn contains_superset(&self, set: &[u32]) -> bool {
        self.walk(0, set)
    }

    fn walk(&self, node: u32, remaining: &[u32]) -> bool {
        let Some(&first) = remaining.first() else {
            return true;
        };
        for &child in &self.children[node as usize] {
            let item = self.items[child as usize];
            if item > first {
                return false;
            }
            let rest = if item == first {
                &remaining[1..]
            } else {
                remaining
            };
            if self.walk(child, rest) {
                return true;
            }
        }
        false
    }
}

struct FpNode {
    item: u32,
    count: u64,
    parent: u32,
    children: Vec<(u32, u32)>,
}

/// Prefix-shared transaction tree with a header table of the nodes
/// holding each item.
struct FpTree {
    nodes: Vec<FpNode>,
    header: BTreeMap<u32, Vec<u32>>,
}

impl FpTree {
    fn new() -> Self {
        FpTree {
            nodes: vec![FpNode {
                item: u32::MAX,
                count: 0,
                parent: u32::MAX,
                children: Vec::new(),
            }],
            header: BTreeMap::new(),
        }
    }

    /// Inserts a transaction of items in ascending rank order.
    fn insert(&mut self, items: &[u32], count: u64) {
        let mut node = 0u32;
        for &item in items {
            let found = self.nodes[node as usize]
                .children
                .binary_search_by_key(&item, |&(i, _)| i);
            node = match found {
                Ok(position) => {
                    let child = self.nodes[node as usize].children[position].1;
                    self.nodes[child as usize].count += count;
                    child
                }
                Err(position) => {
                    let child = self.nodes.len() as u32;
                    self.nodes.push(FpNode {
                        item,
                        count,
                        parent: node,
                        children: Vec::new(),
                    });
                    self.nodes[node as usize].children.insert(position, (item, child));
                    self.header.entry(item).or_default().push(child);
                    child
                }
            };
        }
    }

    /// When the tree is one chain from the root, returns its items
    /// top-down (empty for an empty tree).
    fn single_path(&self) -> Option<Vec<u32>> {
        let mut path = Vec::new();
        let mut node = 0u32;
        loop {
            let children = &self.nodes[node as usize].children;
            match children.len() {
                0 => return Some(path),
                1 => {
                    node = children[0].1;
                    path.push(self.nodes[node as usize].item);
                }
                _ => return None,
            }
        }
    }

    /// Prefix paths of every node holding `item`, each in ascending rank
    /// order with the node's count.
    fn conditional_base(&self, item: u32) -> Vec<(Vec<u32>, u64)> {
        let mut base = Vec::new();
        for &node in self.header.get(&item).into_iter().flatten() {
            let count = self.nodes[node as usize].count;
            let mut prefix = Vec::new();
            let mut cursor = self.nodes[node as usize].parent;
            while cursor != u32::MAX && self.nodes[cursor as usize].item != u32::MAX {
                prefix.push(self.nodes[cursor as usize].item);
                cursor = self.nodes[cursor as usize].parent;
            }
            if !prefix.is_empty() {
                prefix.reverse();
                base.push((prefix, count));
            }
        }
        base
    }
}

fn build_tree(transactions: &[(Vec<u32>, u64)], threshold: u64) -> (FpTree, Vec<u32>) {
    let mut counts: BTreeMap<u32, u64> = BTreeMap::new();
    for (items, count) in transactions {
        for &item in items {
            *counts.entry(item).or_insert(0) += count;
        }
    }
    let frequent: Vec<u32> = counts
        .iter()
        .filter(|&(_, &count)| count >= threshold)
        .map(|(&item, _)| item)
        .collect();
    let mut tree = FpTree::new();
    for (items, count) in transactions {
        let filtered: Vec<u32> = items
            .iter()
            .copied()
            .filter(|item| frequent.binary_search(item).is_ok())
            .collect();
        if !filtered.is_empty() {
            tree.insert(&filtered, *count);
        }
    }
    (tree, frequent)
}

fn fpmax(tree: &FpTree, head: &mut Vec<u32>, threshold: u64, mfi: &mut MfiTree) {
    if let Some(path) = tree.single_path() {
        let mut candidate: Vec<u32> = head.iter().copied().chain(path).collect();
        candidate.sort_unstable();
        if !candidate.is_empty() && !mfi.contains_superset(&candidate) {
            mfi.insert(&candidate);
        }
        return;
    }
    let items: Vec<u32> = tree.header.keys().rev().copied().collect();
    for item in items {
        head.push(item);
        let base = tree.conditional_base(item);
        let (cond_tree, cond_frequent) = build_tree(&base, threshold);
        if cond_frequent.is_empty() {
            let mut candidate = head.clone();
            candidate.sort_unstable();
            if !mfi.contains_superset(&candidate) {
                mfi.insert(&candidate);
            }
        } else {
            // Everything this branch can yield is inside head plus the
            // conditional-frequent items; skip it when that whole set is
            // already covered.
            let mut ceiling: Vec<u32> =
                head.iter().copied().chain(cond_frequent.iter().copied()).collect();
            ceiling.sort_unstable();
            ceiling.dedup();
            if !mfi.contains_superset(&ceiling) {
                fpmax(&cond_tree, head, threshold, mfi);
            }
        }
        head.pop();
    }
}

/// Mines the maximal frequent itemsets of `transactions` (item ids need
/// not be dense) at an absolute support threshold, returning sorted item
/// id sets.
pub(crate) fn mine_maximal_sets(transactions: &[Vec<u32>], threshold: u64) -> Vec<Vec<u32>> {
    assert!(threshold >= 1, "threshold must be at least 1");
    let mut counts: BTreeMap<u32, u64> = BTreeMap::new();
    for items in transactions {
        for &item in items {
            *counts.entry(item).or_insert(0) += 1;
        }
    }
    // Rank by descending frequency, ties by ascending item id.
    let mut frequent: Vec<(u32, u64)> = counts
        .into_iter()
        .filter(|&(_, count)| count >= threshold)
        .collect();
    frequent.sort_by(|a, b| b.1.cmp(&a.1).then_with(|| a.0.cmp(&b.0)));
    let rank_to_item: Vec<u32> = frequent.iter().map(|&(item, _)| item).collect();
    let item_to_rank: BTreeMap<u32, u32> = rank_to_item
        .iter()
        .enumerate()
        .map(|(rank, &item)| (item, rank as u32))
        .collect();

    let ranked: Vec<(Vec<u32>, u64)> = transactions
        .iter()
        .map(|items| {
            let mut ranks: Vec<u32> = items
                .iter()
                .filter_map(|item| item_to_rank.get(item).copied())
                .collect();
            ranks.sort_unstable();
            (ranks, 1)
        })
        .filter(|(ranks, _)| !ranks.is_empty())
        .collect();

    let mut tree = FpTree::new();
    for (ranks, count) in &ranked {
        tree.insert(ranks, *count);
    }
    let mut mfi = MfiTree::new();
    fpmax(&tree, &mut Vec::new(), threshold, &mut mfi);

    // Leaf paths are the candidate sets: a set ending at an interior
    // node is a strict subset of whichever later insertion grew past it.
    let mut sets = Vec::new();
    let mut stack: Vec<(u32, Vec<u32>)> = vec![(0, Vec::new())];
    while let Some((node, prefix)) = stack.pop() {
        let children = &mfi.children[node as usize];
        for &child in children {
            let mut next = prefix.clone();
            next.push(mfi.items[child as usize]);
            stack.push((child, next));
        }
        if children.is_empty() && !prefix.is_empty() {
            sets.push(prefix);
        }
    }
    sets.sort_by(|a, b| b.len().cmp(&a.len()).then_with(|| a.cmp(b)));
    let mut survivors = MfiTree::new();
    let mut out = Vec::new();
    for set in sets {
        if !survivors.contains_superset(&set) {
            survivors.insert(&set);
            let mut items: Vec<u32> = set
                .iter()
                .map(|&rank| rank_to_item[rank as usize])
                .collect();
            items.sort_unstable();
            out.push(items);
        }
    }
    out
}
