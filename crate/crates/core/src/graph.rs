//! Immutable two-mode graph built from a dataset: degrees, degree
//! distributions, star nodes, and cut vertices.

use std::collections::{BTreeMap, HashMap};

use crate::model::{BipartiteDataset, NodeKind};

/// The two-mode company-director graph.
///
/// Nodes keep the dataset's record order; adjacency lists are sorted by
/// neighbor identifier. Adjacency is symmetric across the two indexes:
/// `din ∈ adj(cin)` iff `cin ∈ adj(din)`.
#[derive(Debug, Clone)]
pub struct CorporateGraph {
    companies: Vec<String>,
    directors: Vec<String>,
    company_index: HashMap<String, u32>,
    director_index: HashMap<String, u32>,
    company_adj: Vec<Vec<u32>>,
    director_adj: Vec<Vec<u32>>,
    edge_count: usize,
}

impl CorporateGraph {
    /// Identifiers of all nodes of one kind, in dataset order.
    pub fn ids(&self, kind: NodeKind) -> &[String] {
        match kind {
            NodeKind::Company => &self.companies,
            NodeKind::Director => &self.directors,
        }
    }

    /// Total node count across both kinds.
    pub fn node_count(&self) -> usize {
        self.companies.len() + self.directors.len()
    }

    /// Number of affiliation edges.
    pub fn edge_count(&self) -> usize {
        self.edge_count
    }

    /// Degree of a node, or `None` if the identifier is unknown.
    pub fn degree_of(&self, kind: NodeKind, id: &str) -> Option<usize> {
        let index = self.index_of(kind, id)?;
        Some(self.adjacency(kind)[index as usize].len())
    }

    /// Opposite-kind neighbor identifiers of a node, sorted.
    pub fn neighbors_of(&self, kind: NodeKind, id: &str) -> Option<Vec<&str>> {
        let index = self.index_of(kind, id)?;
        let opposite = self.ids(kind.opposite());
        Some(
            self.adjacency(kind)[index as usize]
                .iter()
                .map(|&neighbor| opposite[neighbor as usize].as_str())
                .collect(),
        )
    }

    pub(crate) fn index_of(&self, kind: NodeKind, id: &str) -> Option<u32> {
        match kind {
            NodeKind::Company => self.company_index.get(id).copied(),
            NodeKind::Director => self.director_index.get(id).copied(),
        }
    }

    /// Adjacency lists for one kind; entries index into the opposite
    /// kind's `ids`.
    pub(crate) fn adjacency(&self, kind: NodeKind) -> &[Vec<u32>] {
        match kind {
            NodeKind::Company => &self.company_adj,
            NodeKind::Director => &self.director_adj,
        }
    }
}

/// Builds the two-mode graph for a dataset: one node per company and
/// director, one edge per affiliation.
pub fn build_graph(dataset: &BipartiteDataset) -> CorporateGraph {
    let companies: Vec<String> = dataset.companies().iter().map(|c| c.cin.clone()).collect();
    let directors: Vec<String> = dataset.directors().iter().map(|d| d.din.clone()).collect();
    let company_index: HashMap<String, u32> = companies
        .iter()
        .enumerate()
        .map(|(i, id)| (id.clone(), i as u32))
        .collect();
    let director_index: HashMap<String, u32> = directors
        .iter()
        .enumerate()
        .map(|(i, id)| (id.clone(), i as u32))
        .collect();

    let mut company_adj = vec![Vec::new(); companies.len()];
    let mut director_adj = vec![Vec::new(); directors.len()];
    for affiliation in dataset.affiliations() {
        let c = company_index[&affiliation.cin];
        let d = director_index[&affiliation.din];
        company_adj[c as usize].push(d);
        director_adj[d as usize].push(c);
    }
    for list in &mut company_adj {
        list.sort_by(|&a, &b| directors[a as usize].cmp(&directors[b as usize]));
    }
    for list in &mut director_adj {
        list.sort_by(|&a, &b| companies[a as usize].cmp(&companies[b as usize]));
    }

    CorporateGraph {
        companies,
        directors,
        company_index,
        director_index,
        company_adj,
        director_adj,
        edge_count: dataset.affiliations().len(),
    }
}

/// One output row of a degree distribution.
#[derive(Debug, Clone, PartialEq)]
pub struct DegreeRow {
    pub degree: usize,
    pub count: usize,
    pub fraction: f64,
    pub cumulative_ge_fraction: f64,
}

/// Exact degree distribution for one node kind.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DegreeHistogram {
    kind: NodeKind,
    counts: BTreeMap<usize, usize>,
    total: usize,
}

impl DegreeHistogram {
    pub fn kind(&self) -> NodeKind {
        self.kind
    }

    /// Count of nodes per degree, ascending by degree.
    pub fn counts(&self) -> &BTreeMap<usize, usize> {
        &self.counts
    }

    /// Total number of nodes of this kind; counts sum to this.
    pub fn total(&self) -> usize {
        self.total
    }

    /// Fraction of nodes having exactly `degree`.
    pub fn fraction(&self, degree: usize) -> f64 {
        if self.total == 0 {
            return 0.0;
        }
        self.counts.get(&degree).copied().unwrap_or(0) as f64 / self.total as f64
    }

    /// Fraction of nodes having degree `>= degree`, computed as one
    /// minus the fraction below so that `cumulative_ge_fraction(k)` and
    /// `1.0 - fraction(k - 1)` are bit-identical whenever all smaller
    /// degrees but `k - 1` are absent.
    pub fn cumulative_ge_fraction(&self, degree: usize) -> f64 {
        if self.total == 0 {
            return 0.0;
        }
        let below: usize = self
            .counts
            .range(..degree)
            .map(|(_, &count)| count)
            .sum();
        1.0 - below as f64 / self.total as f64
    }

    /// All present degrees as `(degree, count, fraction, cumulative)`
    /// rows, ascending by degree.
    pub fn rows(&self) -> Vec<DegreeRow> {
        self.counts
            .keys()
            .map(|&degree| DegreeRow {
                degree,
                count: self.counts[&degree],
                fraction: self.fraction(degree),
                cumulative_ge_fraction: self.cumulative_ge_fraction(degree),
            })
            .collect()
    }
}

/// Exact histogram of node degrees for the requested kind.
pub fn degree_histogram(graph: &CorporateGraph, kind: NodeKind) -> DegreeHistogram {
    let mut counts: BTreeMap<usize, usize> = BTreeMap::new();
    for neighbors in graph.adjacency(kind) {
        *counts.entry(neighbors.len()).or_insert(0) += 1;
    }
    DegreeHistogram {
        kind,
        counts,
        total: graph.ids(kind).len(),
    }
}

/// All nodes of `kind` with degree at least `min_degree`, sorted by
/// degree descending and identifier ascending.
pub fn star_nodes(
    graph: &CorporateGraph,
    kind: NodeKind,
    min_degree: usize,
) -> Vec<(String, usize)> {
    assert!(min_degree >= 1, "min_degree must be at least 1");
    let ids = graph.ids(kind);
    let mut stars: Vec<(String, usize)> = graph
        .adjacency(kind)
        .iter()
        .enumerate()
        .filter(|(_, neighbors)| neighbors.len() >= min_degree)
        .map(|(index, neighbors)| (ids[index].clone(), neighbors.len()))
        .collect();
    stars.sort_by(|a, b| b.1.cmp(&a.1).then_with(|| a.0.cmp(&b.0)));
    stars
}

/// Nodes whose removal increases the number of connected components of
/// the two-mode graph, sorted by kind (companies first) and identifier.
pub fn articulation_report(graph: &CorporateGraph) -> Vec<(NodeKind, String)> {
    let nc = graph.companies.len();
    let n = nc + graph.directors.len();
    let mut adj: Vec<Vec<usize>> = Vec::with_capacity(n);
    adj.extend(
        graph
            .company_adj
            .iter()
            .map(|list| list.iter().map(|&d| nc + d as usize).collect()),
    );
    adj.extend(
        graph
            .director_adj
            .iter()
            .map(|list| list.iter().map(|&c| c as usize).collect()),
    );

    let mut disc = vec![usize::MAX; n];
    let mut low = vec![usize::MAX; n];
    let mut cut = vec![false; n];
    let mut timer = 0usize;
    let mut stack: Vec<(usize, usize, usize)> = Vec::new();
    for root in 0..n {
        if disc[root] != usize::MAX {
            continue;
        }
        let mut root_children = 0usize;
        disc[root] = timer;
        low[root] = timer;
        timer += 1;
        stack.push((root, usize::MAX, 0));
        while let Some(&mut (v, parent, ref mut next)) = stack.last_mut() {
            if *next < adj[v].len() {
                let u = adj[v][*next];
                *next += 1;
                if u == parent {
                    continue;
                }
                if disc[u] == usize::MAX {
                    disc[u] = timer;
                    low[u] = timer;
                    timer += 1;
                    if v == root {
                        root_children += 1;
                    }
                    stack.push((u, v, 0));
                } else {
                    low[v] = low[v].min(disc[u]);
                }
            } else {
                stack.pop();
                if let Some(&mut (p, _, _)) = stack.last_mut() {
                    low[p] = low[p].min(low[v]);
                    if p != root && low[v] >= disc[p] {
                        cut[p] = true;
                    }
                }
            }
        }
        cut[root] = root_children >= 2;
    }

    let mut report: Vec<(NodeKind, String)> = Vec::new();
    for (index, id) in graph.companies.iter().enumerate() {
        if cut[index] {
            report.push((NodeKind::Company, id.clone()));
        }
    }
    for (index, id) in graph.directors.iter().enumerate() {
        if cut[nc + index] {
            report.push((NodeKind::Director, id.clone()));
        }
    }
    report.sort();
    report
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::BipartiteDataset;
    use crate::testfix::{dataset_from_edges, fig_dataset};
    use proptest::prelude::*;
    use std::collections::{BTreeSet, HashSet};

    /// Counts connected components of the two-mode graph after removing
    /// `skip`, treating `(kind, index)` pairs as the vertex space.
    fn component_count(graph: &CorporateGraph, skip: Option<(NodeKind, usize)>) -> usize {
        let nc = graph.ids(NodeKind::Company).len();
        let nd = graph.ids(NodeKind::Director).len();
        let skipped = |kind: NodeKind, index: usize| skip == Some((kind, index));
        let mut seen = HashSet::new();
        let mut components = 0;
        for kind in [NodeKind::Company, NodeKind::Director] {
            let count = if kind == NodeKind::Company { nc } else { nd };
            for start in 0..count {
                if skipped(kind, start) || !seen.insert((kind, start)) {
                    continue;
                }
                components += 1;
                let mut queue = vec![(kind, start)];
                while let Some((k, v)) = queue.pop() {
                    for &u in &graph.adjacency(k)[v] {
                        let next = (k.opposite(), u as usize);
                        if !skipped(next.0, next.1) && seen.insert(next) {
                            queue.push(next);
                        }
                    }
                }
            }
        }
        components
    }

    fn brute_force_cut_vertices(graph: &CorporateGraph) -> Vec<(NodeKind, String)> {
        let base = component_count(graph, None);
        let mut out = Vec::new();
        for kind in [NodeKind::Company, NodeKind::Director] {
            for (index, id) in graph.ids(kind).iter().enumerate() {
                // An isolated vertex is its own component, so removing it
                // lowers the count by one without splitting anything.
                let expected_if_not_cut = if graph.adjacency(kind)[index].is_empty() {
                    base - 1
                } else {
                    base
                };
                let without = component_count(graph, Some((kind, index)));
                if without > expected_if_not_cut {
                    out.push((kind, id.clone()));
                }
            }
        }
        out.sort();
        out
    }

    #[test]
    fn fixture_graph_has_expected_shape() {
        let graph = build_graph(&fig_dataset());
        assert_eq!(graph.node_count(), 11);
        assert_eq!(graph.edge_count(), 12);
        assert_eq!(
            graph.neighbors_of(NodeKind::Company, "B").unwrap(),
            vec!["1", "2", "3", "4", "5"]
        );
        assert_eq!(graph.neighbors_of(NodeKind::Director, "6").unwrap(), vec!["E"]);
        assert_eq!(graph.degree_of(NodeKind::Company, "A"), Some(2));
        assert_eq!(graph.degree_of(NodeKind::Company, "missing"), None);
    }

    #[test]
    fn empty_dataset_builds_empty_graph() {
        let graph = build_graph(&BipartiteDataset::default());
        assert_eq!(graph.node_count(), 0);
        assert_eq!(graph.edge_count(), 0);
        assert!(degree_histogram(&graph, NodeKind::Company).counts().is_empty());
    }

    #[test]
    fn fixture_company_histogram() {
        let graph = build_graph(&fig_dataset());
        let histogram = degree_histogram(&graph, NodeKind::Company);
        let expected: BTreeMap<usize, usize> = [(1, 2), (2, 1), (3, 1), (5, 1)].into();
        assert_eq!(histogram.counts(), &expected);
        assert_eq!(histogram.total(), 5);
    }

    #[test]
    fn fixture_director_histogram() {
        let graph = build_graph(&fig_dataset());
        let histogram = degree_histogram(&graph, NodeKind::Director);
        let expected: BTreeMap<usize, usize> = [(1, 1), (2, 4), (3, 1)].into();
        assert_eq!(histogram.counts(), &expected);
        assert_eq!(histogram.total(), 6);
    }

    #[test]
    fn single_company_two_directors_histogram() {
        let dataset = dataset_from_edges(1, 2, &[(0, 0), (0, 1)]);
        let histogram = degree_histogram(&build_graph(&dataset), NodeKind::Company);
        assert_eq!(histogram.counts(), &BTreeMap::from([(2, 1)]));
    }

    #[test]
    fn histogram_fractions_and_cumulative() {
        let graph = build_graph(&fig_dataset());
        let histogram = degree_histogram(&graph, NodeKind::Company);
        let sum: f64 = histogram.rows().iter().map(|row| row.fraction).sum();
        assert!((sum - 1.0).abs() < 1e-9);
        assert_eq!(histogram.cumulative_ge_fraction(1), 1.0);
        assert_eq!(histogram.cumulative_ge_fraction(2), 1.0 - histogram.fraction(1));
        assert_eq!(histogram.cumulative_ge_fraction(4), 1.0 - 4.0 / 5.0);
        assert_eq!(histogram.cumulative_ge_fraction(6), 0.0);
    }

    #[test]
    fn star_nodes_on_fixture() {
        let graph = build_graph(&fig_dataset());
        assert_eq!(
            star_nodes(&graph, NodeKind::Company, 4),
            vec![("B".to_string(), 5)]
        );
        assert_eq!(
            star_nodes(&graph, NodeKind::Director, 3),
            vec![("1".to_string(), 3)]
        );
        assert_eq!(star_nodes(&graph, NodeKind::Company, 1).len(), 5);
    }

    #[test]
    fn star_nodes_match_histogram_tail() {
        let graph = build_graph(&fig_dataset());
        for kind in [NodeKind::Company, NodeKind::Director] {
            let histogram = degree_histogram(&graph, kind);
            for min_degree in 1..=6 {
                let tail: usize = histogram
                    .counts()
                    .range(min_degree..)
                    .map(|(_, &count)| count)
                    .sum();
                assert_eq!(star_nodes(&graph, kind, min_degree).len(), tail);
            }
        }
    }

    #[test]
    fn fixture_cut_vertices() {
        let graph = build_graph(&fig_dataset());
        assert_eq!(
            articulation_report(&graph),
            vec![
                (NodeKind::Company, "B".to_string()),
                (NodeKind::Company, "E".to_string()),
                (NodeKind::Director, "1".to_string()),
                (NodeKind::Director, "3".to_string()),
            ]
        );
    }

    #[test]
    fn single_edge_has_no_cut_vertex() {
        let dataset = dataset_from_edges(1, 1, &[(0, 0)]);
        assert!(articulation_report(&build_graph(&dataset)).is_empty());
    }

    #[test]
    fn path_midpoint_is_cut_vertex() {
        // c00 - d00 - c01: the director bridges the two companies.
        let dataset = dataset_from_edges(2, 1, &[(0, 0), (1, 0)]);
        assert_eq!(
            articulation_report(&build_graph(&dataset)),
            vec![(NodeKind::Director, "d00".to_string())]
        );
    }

    fn edge_set_strategy(
        max_companies: usize,
        max_directors: usize,
    ) -> impl Strategy<Value = (usize, usize, Vec<(usize, usize)>)> {
        (1..=max_companies, 1..=max_directors).prop_flat_map(|(nc, nd)| {
            proptest::collection::btree_set((0..nc, 0..nd), 0..=(nc * nd).min(40)).prop_map(
                move |edges| (nc, nd, edges.into_iter().collect::<Vec<_>>()),
            )
        })
    }

    proptest! {
        #[test]
        fn adjacency_is_symmetric((nc, nd, edges) in edge_set_strategy(8, 8)) {
            let graph = build_graph(&dataset_from_edges(nc, nd, &edges));
            for (c, neighbors) in graph.adjacency(NodeKind::Company).iter().enumerate() {
                for &d in neighbors {
                    prop_assert!(graph.adjacency(NodeKind::Director)[d as usize].contains(&(c as u32)));
                }
            }
            let director_degree_sum: usize = graph
                .adjacency(NodeKind::Director)
                .iter()
                .map(Vec::len)
                .sum();
            prop_assert_eq!(director_degree_sum, graph.edge_count());
        }

        #[test]
        fn histogram_totals_and_fractions((nc, nd, edges) in edge_set_strategy(10, 10)) {
            let graph = build_graph(&dataset_from_edges(nc, nd, &edges));
            for kind in [NodeKind::Company, NodeKind::Director] {
                let histogram = degree_histogram(&graph, kind);
                let total: usize = histogram.counts().values().sum();
                prop_assert_eq!(total, graph.ids(kind).len());
                let sum: f64 = histogram.rows().iter().map(|row| row.fraction).sum();
                prop_assert!((sum - 1.0).abs() < 1e-9);
            }
        }

        #[test]
        fn cut_vertices_match_brute_force((nc, nd, edges) in edge_set_strategy(15, 15)) {
            let graph = build_graph(&dataset_from_edges(nc, nd, &edges));
            let expected = brute_force_cut_vertices(&graph);
            prop_assert_eq!(articulation_report(&graph), expected);
        }
    }

    #[test]
    fn cut_vertices_match_brute_force_on_seeded_graphs() {
        use rand::prelude::*;
        use rand_chacha::ChaCha8Rng;
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..60 {
            let nc = rng.gen_range(1..=15);
            let nd = rng.gen_range(1..=15);
            let mut edges = BTreeSet::new();
            for _ in 0..rng.gen_range(0..=40) {
                edges.insert((rng.gen_range(0..nc), rng.gen_range(0..nd)));
            }
            let edges: Vec<_> = edges.into_iter().collect();
            let graph = build_graph(&dataset_from_edges(nc, nd, &edges));
            assert_eq!(articulation_report(&graph), brute_force_cut_vertices(&graph));
        }
    }
}
