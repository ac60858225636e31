//! Direct and indirect one-mode graphs (company-company or
//! director-director) with shared-entity edge weights, connection
//! degrees, and bounded simple-path enumeration.

use std::collections::{BTreeSet, HashMap, VecDeque};

use crate::graph::CorporateGraph;
use crate::model::NodeKind;

/// An undirected projection edge; `u < v` by identifier and `shared`
/// holds the sorted opposite-mode entities both endpoints touch.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ProjectionEdge {
    pub u: String,
    pub v: String,
    pub shared: Vec<String>,
}

impl ProjectionEdge {
    /// Count of shared opposite-mode entities.
    pub fn weight(&self) -> usize {
        self.shared.len()
    }
}

/// Weighted one-mode graph over a single node class.
///
/// Nodes are sorted by identifier. Two nodes are adjacent iff they share
/// at least one opposite-mode neighbor in the source two-mode graph, and
/// every edge carries the full shared-entity list. Each node also keeps
/// its complete opposite-mode membership list from the two-mode graph,
/// which induced subgraphs preserve unchanged.
#[derive(Debug, Clone)]
pub struct ProjectionGraph {
    mode: NodeKind,
    nodes: Vec<String>,
    index: HashMap<String, u32>,
    memberships: Vec<Vec<String>>,
    edges: Vec<ProjectionEdge>,
    adjacency: Vec<Vec<u32>>,
    edge_index: HashMap<(u32, u32), u32>,
}

impl ProjectionGraph {
    pub fn mode(&self) -> NodeKind {
        self.mode
    }

    /// Node identifiers, sorted ascending.
    pub fn nodes(&self) -> &[String] {
        &self.nodes
    }

    pub fn node_count(&self) -> usize {
        self.nodes.len()
    }

    pub fn contains(&self, id: &str) -> bool {
        self.index.contains_key(id)
    }

    /// Edges sorted by `(u, v)` identifier pair.
    pub fn edges(&self) -> &[ProjectionEdge] {
        &self.edges
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    /// Same-mode neighbor identifiers of a node, sorted.
    pub fn neighbors(&self, id: &str) -> Option<Vec<&str>> {
        let index = self.index.get(id)?;
        Some(
            self.adjacency[*index as usize]
                .iter()
                .map(|&n| self.nodes[n as usize].as_str())
                .collect(),
        )
    }

    /// Opposite-mode entities adjacent to a node in the source two-mode
    /// graph, sorted.
    pub fn membership(&self, id: &str) -> Option<&[String]> {
        let index = self.index.get(id)?;
        Some(&self.memberships[*index as usize])
    }

    /// Shared-entity list of the edge between `u` and `v`, or `None`
    /// when no direct edge exists.
    pub fn shared_between(&self, u: &str, v: &str) -> Option<&[String]> {
        let ui = *self.index.get(u)?;
        let vi = *self.index.get(v)?;
        let key = (ui.min(vi), ui.max(vi));
        let edge = *self.edge_index.get(&key)?;
        Some(&self.edges[edge as usize].shared)
    }

    pub(crate) fn index_of(&self, id: &str) -> Option<u32> {
        self.index.get(id).copied()
    }

    pub(crate) fn adjacency_of(&self, index: u32) -> &[u32] {
        &self.adjacency[index as usize]
    }

    pub(crate) fn id_at(&self, index: u32) -> &str {
        &self.nodes[index as usize]
    }

    pub(crate) fn membership_at(&self, index: u32) -> &[String] {
        &self.memberships[index as usize]
    }

    /// Subgraph induced by the given identifiers (unknown ones are
    /// ignored). Edge shared lists and node memberships are carried over
    /// unchanged.
    pub fn induced_subgraph(&self, keep: &BTreeSet<String>) -> ProjectionGraph {
        let kept: BTreeSet<u32> = keep
            .iter()
            .filter_map(|id| self.index.get(id).copied())
            .collect();
        self.induced_by_indices(&kept)
    }

    pub(crate) fn induced_by_indices(&self, keep: &BTreeSet<u32>) -> ProjectionGraph {
        let nodes: Vec<String> = keep
            .iter()
            .map(|&i| self.nodes[i as usize].clone())
            .collect();
        let memberships: Vec<Vec<String>> = keep
            .iter()
            .map(|&i| self.memberships[i as usize].clone())
            .collect();
        let edges: Vec<ProjectionEdge> = self
            .edges
            .iter()
            .filter(|edge| keep.contains(&self.index[&edge.u]) && keep.contains(&self.index[&edge.v]))
            .cloned()
            .collect();
        assemble(self.mode, nodes, memberships, edges)
    }
}

fn assemble(
    mode: NodeKind,
    nodes: Vec<String>,
    memberships: Vec<Vec<String>>,
    edges: Vec<ProjectionEdge>,
) -> ProjectionGraph {
    debug_assert!(nodes.windows(2).all(|w| w[0] < w[1]));
    let index: HashMap<String, u32> = nodes
        .iter()
        .enumerate()
        .map(|(i, id)| (id.clone(), i as u32))
        .collect();
    let mut adjacency = vec![Vec::new(); nodes.len()];
    let mut edge_index = HashMap::with_capacity(edges.len());
    for (position, edge) in edges.iter().enumerate() {
        let u = index[&edge.u];
        let v = index[&edge.v];
        adjacency[u as usize].push(v);
        adjacency[v as usize].push(u);
        edge_index.insert((u.min(v), u.max(v)), position as u32);
    }
    for list in &mut adjacency {
        list.sort_unstable();
    }
    ProjectionGraph {
        mode,
        nodes,
        index,
        memberships,
        edges,
        adjacency,
        edge_index,
    }
}

/// Projects the two-mode graph onto one node class.
///
/// Every node of that class appears (isolated ones included); two nodes
/// are joined iff they share an opposite-mode neighbor, with the sorted
/// shared list as the edge payload.
pub fn project(graph: &CorporateGraph, mode: NodeKind) -> ProjectionGraph {
    let mut nodes: Vec<String> = graph.ids(mode).to_vec();
    nodes.sort();
    let index: HashMap<&String, u32> = nodes
        .iter()
        .enumerate()
        .map(|(i, id)| (id, i as u32))
        .collect();
    let to_projection: Vec<u32> = graph.ids(mode).iter().map(|id| index[id]).collect();
    let opposite_ids = graph.ids(mode.opposite());

    let mut memberships = vec![Vec::new(); nodes.len()];
    for (corporate_index, neighbors) in graph.adjacency(mode).iter().enumerate() {
        memberships[to_projection[corporate_index] as usize] = neighbors
            .iter()
            .map(|&o| opposite_ids[o as usize].clone())
            .collect();
    }

    let mut shared_map: HashMap<(u32, u32), Vec<u32>> = HashMap::new();
    for (opposite_index, neighbors) in graph.adjacency(mode.opposite()).iter().enumerate() {
        let mapped: Vec<u32> = neighbors
            .iter()
            .map(|&m| to_projection[m as usize])
            .collect();
        for i in 0..mapped.len() {
            for j in (i + 1)..mapped.len() {
                shared_map
                    .entry((mapped[i], mapped[j]))
                    .or_default()
                    .push(opposite_index as u32);
            }
        }
    }
    let mut keys: Vec<(u32, u32)> = shared_map.keys().copied().collect();
    keys.sort_unstable();
    let edges: Vec<ProjectionEdge> = keys
        .into_iter()
        .map(|(u, v)| {
            let mut shared: Vec<String> = shared_map[&(u, v)]
                .iter()
                .map(|&o| opposite_ids[o as usize].clone())
                .collect();
            shared.sort();
            ProjectionEdge {
                u: nodes[u as usize].clone(),
                v: nodes[v as usize].clone(),
                shared,
            }
        })
        .collect();

    assemble(mode, nodes, memberships, edges)
}

/// A same-mode pair with no direct projection edge, reachable through
/// the two-mode graph.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IndirectConnection {
    /// Endpoints, lexicographically ordered.
    pub pair: (String, String),
    /// Distinct opposite-mode entities on a shortest two-mode path:
    /// shortest hop count divided by two.
    pub connection_degree: usize,
    /// Simple alternating paths from `pair.0` to `pair.1`, each listed
    /// as the full node sequence, in lexicographic order.
    pub paths: Vec<Vec<String>>,
    pub path_count: usize,
    /// True when enumeration stopped at the per-pair path cap.
    pub truncated: bool,
}

/// Shortest two-mode distance in hops between two nodes of `mode`.
fn shortest_hops(
    graph: &CorporateGraph,
    mode: NodeKind,
    from: u32,
    to: u32,
) -> Option<usize> {
    if from == to {
        return Some(0);
    }
    let sizes = (
        graph.ids(NodeKind::Company).len(),
        graph.ids(NodeKind::Director).len(),
    );
    let mut dist: HashMap<(NodeKind, u32), usize> =
        HashMap::with_capacity(sizes.0 + sizes.1);
    let mut queue = VecDeque::new();
    dist.insert((mode, from), 0);
    queue.push_back((mode, from));
    while let Some((kind, v)) = queue.pop_front() {
        let d = dist[&(kind, v)];
        for &u in &graph.adjacency(kind)[v as usize] {
            let next = (kind.opposite(), u);
            if !dist.contains_key(&next) {
                if next == (mode, to) {
                    return Some(d + 1);
                }
                dist.insert(next, d + 1);
                queue.push_back(next);
            }
        }
    }
    None
}

struct PathSearch<'a> {
    graph: &'a CorporateGraph,
    target: (NodeKind, u32),
    max_hops: usize,
    limit: usize,
    visited_companies: Vec<bool>,
    visited_directors: Vec<bool>,
    path: Vec<(NodeKind, u32)>,
    found: Vec<Vec<(NodeKind, u32)>>,
}

impl PathSearch<'_> {
    fn visited(&mut self, node: (NodeKind, u32)) -> &mut bool {
        match node.0 {
            NodeKind::Company => &mut self.visited_companies[node.1 as usize],
            NodeKind::Director => &mut self.visited_directors[node.1 as usize],
        }
    }

    /// Depth-first expansion in ascending identifier order. Returns true
    /// once the path limit is hit, which aborts the whole search.
    fn explore(&mut self, current: (NodeKind, u32)) -> bool {
        if current == self.target {
            if self.found.len() == self.limit {
                return true;
            }
            self.found.push(self.path.clone());
            // A simple path cannot leave the target and end there again.
            return false;
        }
        if self.path.len() > self.max_hops {
            return false;
        }
        let (kind, v) = current;
        for position in 0..self.graph.adjacency(kind)[v as usize].len() {
            let u = self.graph.adjacency(kind)[v as usize][position];
            let next = (kind.opposite(), u);
            if *self.visited(next) {
                continue;
            }
            *self.visited(next) = true;
            self.path.push(next);
            let stop = self.explore(next);
            self.path.pop();
            *self.visited(next) = false;
            if stop {
                return true;
            }
        }
        false
    }
}

/// Enumerates indirect connections for every same-mode pair that has no
/// direct projection edge but is reachable within `max_path_len`
/// two-mode hops.
///
/// `max_path_len` must be an even hop count of at least 4;
/// `max_paths_per_pair` must be at least 1. Pairs are reported in
/// lexicographic order; per-pair paths are lexicographic and truncated
/// at the cap with `truncated` set.
pub fn indirect_connections(
    graph: &CorporateGraph,
    mode: NodeKind,
    max_path_len: usize,
    max_paths_per_pair: usize,
) -> Vec<IndirectConnection> {
    assert!(
        max_path_len >= 4 && max_path_len % 2 == 0,
        "max_path_len must be an even hop count >= 4"
    );
    assert!(max_paths_per_pair >= 1, "max_paths_per_pair must be >= 1");

    let mut order: Vec<u32> = (0..graph.ids(mode).len() as u32).collect();
    order.sort_by(|&a, &b| graph.ids(mode)[a as usize].cmp(&graph.ids(mode)[b as usize]));
    let neighbor_sets: Vec<BTreeSet<u32>> = graph
        .adjacency(mode)
        .iter()
        .map(|list| list.iter().copied().collect())
        .collect();

    let ids = graph.ids(mode);
    let mut connections = Vec::new();
    for i in 0..order.len() {
        for j in (i + 1)..order.len() {
            let (u, v) = (order[i], order[j]);
            let shares_neighbor = neighbor_sets[u as usize]
                .iter()
                .any(|x| neighbor_sets[v as usize].contains(x));
            if shares_neighbor {
                continue;
            }
            let Some(hops) = shortest_hops(graph, mode, u, v) else {
                continue;
            };
            if hops > max_path_len {
                continue;
            }

            let mut search = PathSearch {
                graph,
                target: (mode, v),
                max_hops: max_path_len,
                limit: max_paths_per_pair,
                visited_companies: vec![false; graph.ids(NodeKind::Company).len()],
                visited_directors: vec![false; graph.ids(NodeKind::Director).len()],
                path: vec![(mode, u)],
                found: Vec::new(),
            };
            *search.visited((mode, u)) = true;
            let truncated = search.explore((mode, u));
            let paths: Vec<Vec<String>> = search
                .found
                .iter()
                .map(|path| {
                    path.iter()
                        .map(|&(kind, index)| graph.ids(kind)[index as usize].clone())
                        .collect()
                })
                .collect();
            connections.push(IndirectConnection {
                pair: (ids[u as usize].clone(), ids[v as usize].clone()),
                connection_degree: hops / 2,
                path_count: paths.len(),
                paths,
                truncated,
            });
        }
    }
    connections
}

/// Sorts connections by strength: connection degree ascending, then
/// path count descending, then lexicographic pair.
pub fn connection_strength_order(
    mut connections: Vec<IndirectConnection>,
) -> Vec<IndirectConnection> {
    connections.sort_by(|a, b| {
        a.connection_degree
            .cmp(&b.connection_degree)
            .then_with(|| b.path_count.cmp(&a.path_count))
            .then_with(|| a.pair.cmp(&b.pair))
    });
    connections
}
