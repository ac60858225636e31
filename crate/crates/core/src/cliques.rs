//! Ego-network extraction, maximal clique enumeration over projection
//! graphs, and per-base clique statistics.

use std::collections::{BTreeSet, HashMap, VecDeque};

use thiserror::Error;

use crate::projection::ProjectionGraph;

#[derive(Debug, Error)]
pub enum CliqueError {
    #[error("unknown base node {0:?}")]
    UnknownBase(String),
}

/// Graphs larger than this switch the enumeration's outer loop to
/// degeneracy order, which bounds recursion width on sparse networks.
const DEGENERACY_NODE_THRESHOLD: usize = 64;

/// The induced projection subgraph within `radius` hops of `base`.
#[derive(Debug, Clone)]
pub struct EgoNetwork {
    pub base: String,
    pub radius: usize,
    pub subgraph: ProjectionGraph,
}

/// A fully connected node set that no adjacent vertex can extend.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MaximalClique {
    /// Member identifiers, sorted ascending.
    pub members: Vec<String>,
    /// Opposite-mode entities common to every member.
    pub shared_intersection: Vec<String>,
    /// Opposite-mode entities shared by at least one member pair.
    pub shared_union: Vec<String>,
}

impl MaximalClique {
    pub fn size(&self) -> usize {
        self.members.len()
    }
}

/// Size and shared-entity count of one extremal clique.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CliqueSummary {
    pub size: usize,
    pub shared_count: usize,
}

/// Per-base summary over the maximal cliques of an ego network that
/// contain the base, mirroring the six consolidated report columns:
/// neighborhood sizes, clique count and mean size, and the extremal
/// cliques by size and by shared-entity count. Shared-entity counts use
/// `shared_intersection`.
#[derive(Debug, Clone, PartialEq)]
pub struct CliqueStats {
    pub base: String,
    pub radius: usize,
    /// Same-mode nodes within the radius, excluding the base.
    pub same_mode_neighborhood: usize,
    /// Distinct opposite-mode entities touched by any node within the
    /// radius, the base included.
    pub opposite_mode_neighborhood: usize,
    pub clique_count: usize,
    /// Mean clique size; 0.0 when no clique contains the base.
    pub mean_clique_size: f64,
    /// Largest clique (ties: more shared entities, then lexicographic).
    pub largest: Option<CliqueSummary>,
    /// Smallest clique (ties: more shared entities, then lexicographic).
    pub smallest: Option<CliqueSummary>,
    /// Clique sharing the most entities (ties: smaller, then lexicographic).
    pub most_shared: Option<CliqueSummary>,
    /// Clique sharing the fewest entities (ties: smaller, then lexicographic).
    pub least_shared: Option<CliqueSummary>,
}

/// Extracts the induced subgraph over all nodes within `radius` hops of
/// `base` in the projection graph, the base included.
pub fn ego_network(
    projection: &ProjectionGraph,
    base: &str,
    radius: usize,
) -> Result<EgoNetwork, CliqueError> {
    assert!(radius >= 1, "radius must be at least 1");
    let start = projection
        .index_of(base)
        .ok_or_else(|| CliqueError::UnknownBase(base.to_string()))?;

    let mut within: BTreeSet<u32> = BTreeSet::new();
    let mut distance: HashMap<u32, usize> = HashMap::new();
    let mut queue = VecDeque::new();
    within.insert(start);
    distance.insert(start, 0);
    queue.push_back(start);
    while let Some(v) = queue.pop_front() {
        let d = distance[&v];
        if d == radius {
            continue;
        }
        for &u in projection.adjacency_of(v) {
            if !distance.contains_key(&u) {
                distance.insert(u, d + 1);
                within.insert(u);
                queue.push_back(u);
            }
        }
    }

    Ok(EgoNetwork {
        base: base.to_string(),
        radius,
        subgraph: projection.induced_by_indices(&within),
    })
}

#[derive(Clone, PartialEq, Eq)]
struct BitSet {
    words: Vec<u64>,
}

impl BitSet {
    fn empty(n: usize) -> Self {
        BitSet {
            words: vec![0; n.div_ceil(64)],
        }
    }

    fn insert(&mut self, i: usize) {
        self.words[i / 64] |= 1 << (i % 64);
    }

    fn remove(&mut self, i: usize) {
        self.words[i / 64] &= !(1 << (i % 64));
    }

    fn is_empty(&self) -> bool {
        self.words.iter().all(|&w| w == 0)
    }

    fn intersect(&self, other: &BitSet) -> BitSet {
        BitSet {
            words: self
                .words
                .iter()
                .zip(&other.words)
                .map(|(a, b)| a & b)
                .collect(),
        }
    }

    fn intersect_count(&self, other: &BitSet) -> usize {
        self.words
            .iter()
            .zip(&other.words)
            .map(|(a, b)| (a & b).count_ones() as usize)
            .sum()
    }

    fn union(&self, other: &BitSet) -> BitSet {
        BitSet {
            words: self
                .words
                .iter()
                .zip(&other.words)
                .map(|(a, b)| a | b)
                .collect(),
        }
    }

    fn minus(&self, other: &BitSet) -> BitSet {
        BitSet {
            words: self
                .words
                .iter()
                .zip(&other.words)
                .map(|(a, b)| a & !b)
                .collect(),
        }
    }

    /// Set bit positions in ascending order.
    fn ones(&self) -> impl Iterator<Item = usize> + '_ {
        self.words.iter().enumerate().flat_map(|(block, &word)| {
            let mut bits = word;
            std::iter::from_fn(move || {
                if bits == 0 {
                    return None;
                }
                let bit = bits.trailing_zeros() as usize;
                bits &= bits - 1;
                Some(block * 64 + bit)
            })
        })
    }
}

/// Classic recursion with pivoting: the pivot is the vertex of P ∪ X
/// with the most neighbors in P, ties broken by ascending index (nodes
/// are indexed in identifier order).
fn bron_kerbosch_pivot(
    adjacency: &[BitSet],
    current: &mut Vec<usize>,
    mut p: BitSet,
    mut x: BitSet,
    out: &mut Vec<Vec<usize>>,
) {
    if p.is_empty() && x.is_empty() {
        if !current.is_empty() {
            out.push(current.clone());
        }
        return;
    }
    let pivot = p
        .union(&x)
        .ones()
        .max_by_key(|&u| (adjacency[u].intersect_count(&p), usize::MAX - u))
        .expect("P ∪ X is non-empty");
    let candidates: Vec<usize> = p.minus(&adjacency[pivot]).ones().collect();
    for v in candidates {
        current.push(v);
        bron_kerbosch_pivot(
            adjacency,
            current,
            p.intersect(&adjacency[v]),
            x.intersect(&adjacency[v]),
            out,
        );
        current.pop();
        p.remove(v);
        x.insert(v);
    }
}

/// Removal order by repeatedly deleting a minimum-degree vertex, ties by
/// ascending index.
fn degeneracy_order(adjacency: &[BitSet], n: usize) -> Vec<usize> {
    let mut degree: Vec<usize> = adjacency
        .iter()
        .map(|row| row.ones().count())
        .collect();
    let mut removed = vec![false; n];
    let mut order = Vec::with_capacity(n);
    for _ in 0..n {
        let v = (0..n)
            .filter(|&v| !removed[v])
            .min_by_key(|&v| (degree[v], v))
            .expect("vertices remain");
        removed[v] = true;
        order.push(v);
        for u in adjacency[v].ones() {
            if !removed[u] {
                degree[u] -= 1;
            }
        }
    }
    order
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum OuterLoop {
    Plain,
    Degeneracy,
}

fn enumerate_maximal(adjacency: &[BitSet], n: usize, outer: OuterLoop) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    if n == 0 {
        return out;
    }
    if outer == OuterLoop::Plain {
        let mut all = BitSet::empty(n);
        for v in 0..n {
            all.insert(v);
        }
        bron_kerbosch_pivot(adjacency, &mut Vec::new(), all, BitSet::empty(n), &mut out);
        return out;
    }
    let order = degeneracy_order(adjacency, n);
    let mut position = vec![0usize; n];
    for (i, &v) in order.iter().enumerate() {
        position[v] = i;
    }
    for &v in &order {
        let mut p = BitSet::empty(n);
        let mut x = BitSet::empty(n);
        for u in adjacency[v].ones() {
            if position[u] > position[v] {
                p.insert(u);
            } else {
                x.insert(u);
            }
        }
        bron_kerbosch_pivot(adjacency, &mut vec![v], p, x, &mut out);
    }
    out
}

fn shared_entities(subgraph: &ProjectionGraph, members: &[u32]) -> (Vec<String>, Vec<String>) {
    let mut occurrences: HashMap<&str, usize> = HashMap::new();
    for &member in members {
        for entity in subgraph.membership_at(member) {
            *occurrences.entry(entity.as_str()).or_insert(0) += 1;
        }
    }
    let mut intersection: Vec<String> = occurrences
        .iter()
        .filter(|&(_, &count)| count == members.len())
        .map(|(&entity, _)| entity.to_string())
        .collect();
    let mut union: Vec<String> = occurrences
        .iter()
        .filter(|&(_, &count)| count >= 2)
        .map(|(&entity, _)| entity.to_string())
        .collect();
    intersection.sort();
    union.sort();
    (intersection, union)
}

/// Enumerates exactly the maximal cliques of size at least `min_size`,
/// each annotated with its shared-entity intersection and union, sorted
/// by size descending and then lexicographic members.
pub fn maximal_cliques(subgraph: &ProjectionGraph, min_size: usize) -> Vec<MaximalClique> {
    let n = subgraph.node_count();
    let outer = if n > DEGENERACY_NODE_THRESHOLD {
        OuterLoop::Degeneracy
    } else {
        OuterLoop::Plain
    };
    maximal_cliques_with(subgraph, min_size, outer)
}

fn maximal_cliques_with(
    subgraph: &ProjectionGraph,
    min_size: usize,
    outer: OuterLoop,
) -> Vec<MaximalClique> {
    assert!(min_size >= 2, "min_size must be at least 2");
    let n = subgraph.node_count();
    let mut adjacency = vec![BitSet::empty(n); n];
    for edge in subgraph.edges() {
        let u = subgraph.index_of(&edge.u).expect("edge endpoint in graph") as usize;
        let v = subgraph.index_of(&edge.v).expect("edge endpoint in graph") as usize;
        adjacency[u].insert(v);
        adjacency[v].insert(u);
    }

    let mut cliques: Vec<MaximalClique> = enumerate_maximal(&adjacency, n, outer)
        .into_iter()
        .filter(|members| members.len() >= min_size)
        .map(|mut members| {
            members.sort_unstable();
            let indices: Vec<u32> = members.iter().map(|&m| m as u32).collect();
            let (shared_intersection, shared_union) = shared_entities(subgraph, &indices);
            MaximalClique {
                members: members
                    .into_iter()
                    .map(|m| subgraph.id_at(m as u32).to_string())
                    .collect(),
                shared_intersection,
                shared_union,
            }
        })
        .collect();
    cliques.sort_by(|a, b| {
        b.size()
            .cmp(&a.size())
            .then_with(|| a.members.cmp(&b.members))
    });
    cliques
}

/// Computes the consolidated per-base statistics over the maximal
/// cliques of the `radius`-hop ego network that contain `base`.
pub fn clique_stats(
    projection: &ProjectionGraph,
    base: &str,
    radius: usize,
    min_size: usize,
) -> Result<CliqueStats, CliqueError> {
    let ego = ego_network(projection, base, radius)?;
    let subgraph = &ego.subgraph;

    let mut opposite: BTreeSet<&str> = BTreeSet::new();
    for node in subgraph.nodes() {
        opposite.extend(
            subgraph
                .membership(node)
                .expect("ego node in subgraph")
                .iter()
                .map(String::as_str),
        );
    }

    let cliques: Vec<MaximalClique> = maximal_cliques(subgraph, min_size)
        .into_iter()
        .filter(|clique| clique.members.iter().any(|m| m == base))
        .collect();

    let clique_count = cliques.len();
    let mean_clique_size = if clique_count == 0 {
        0.0
    } else {
        cliques.iter().map(MaximalClique::size).sum::<usize>() as f64 / clique_count as f64
    };
    let summary = |clique: &MaximalClique| CliqueSummary {
        size: clique.size(),
        shared_count: clique.shared_intersection.len(),
    };
    let pick = |better: &dyn Fn(&MaximalClique, &MaximalClique) -> std::cmp::Ordering| {
        cliques
            .iter()
            .min_by(|a, b| better(a, b).then_with(|| a.members.cmp(&b.members)))
            .map(summary)
    };
    let shared = |c: &MaximalClique| c.shared_intersection.len();

    Ok(CliqueStats {
        base: base.to_string(),
        radius,
        same_mode_neighborhood: subgraph.node_count() - 1,
        opposite_mode_neighborhood: opposite.len(),
        clique_count,
        mean_clique_size,
        largest: pick(&|a, b| b.size().cmp(&a.size()).then(shared(b).cmp(&shared(a)))),
        smallest: pick(&|a, b| a.size().cmp(&b.size()).then(shared(b).cmp(&shared(a)))),
        most_shared: pick(&|a, b| shared(b).cmp(&shared(a)).then(a.size().cmp(&b.size()))),
        least_shared: pick(&|a, b| shared(a).cmp(&shared(b)).then(a.size().cmp(&b.size()))),
    })
}
