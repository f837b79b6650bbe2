//! Network topology: validated simple connected undirected graphs, the
//! example-topology generators, edge-list ingestion and the brute-force
//! metrics oracle.

use std::collections::{BTreeMap, BTreeSet, VecDeque};
use std::fmt;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::GraphError;

/// Globally unique node identifier.
#[derive(
    Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize,
)]
#[serde(transparent)]
pub struct NodeId(pub u64);

impl fmt::Display for NodeId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.0.fmt(f)
    }
}

impl From<u64> for NodeId {
    fn from(v: u64) -> Self {
        NodeId(v)
    }
}

/// A simple, connected, undirected, unweighted graph with at least two nodes.
///
/// Nodes are stored in increasing id order; most internal structures index
/// nodes densely by their position in that order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Graph {
    ids: Vec<NodeId>,
    index: BTreeMap<NodeId, usize>,
    adj: Vec<Vec<usize>>,
}

impl Graph {
    /// Builds a graph from an edge list and checks every invariant.
    pub fn from_edges<I>(edges: I) -> Result<Self, GraphError>
    where
        I: IntoIterator<Item = (NodeId, NodeId)>,
    {
        let mut set: BTreeMap<NodeId, BTreeSet<NodeId>> = BTreeMap::new();
        for (u, v) in edges {
            if u == v {
                return Err(GraphError::SelfLoop { node: u, line: None });
            }
            set.entry(u).or_default().insert(v);
            set.entry(v).or_default().insert(u);
        }
        Self::from_adjacency(set)
    }

    fn from_adjacency(set: BTreeMap<NodeId, BTreeSet<NodeId>>) -> Result<Self, GraphError> {
        let ids: Vec<NodeId> = set.keys().copied().collect();
        let index: BTreeMap<NodeId, usize> =
            ids.iter().enumerate().map(|(k, &id)| (id, k)).collect();
        let adj = set
            .values()
            .map(|nbrs| nbrs.iter().map(|n| index[n]).collect())
            .collect();
        let g = Graph { ids, index, adj };
        g.validate()?;
        Ok(g)
    }

    /// Checks the graph invariants: undirected, simple, connected, |V| >= 2.
    pub fn validate(&self) -> Result<(), GraphError> {
        if self.ids.len() < 2 {
            return Err(GraphError::TooFewNodes(self.ids.len()));
        }
        for (i, nbrs) in self.adj.iter().enumerate() {
            let mut seen = BTreeSet::new();
            for &j in nbrs {
                if j == i {
                    return Err(GraphError::SelfLoop { node: self.ids[i], line: None });
                }
                if !seen.insert(j) {
                    return Err(GraphError::DuplicateEdge(self.ids[i], self.ids[j]));
                }
                if !self.adj[j].contains(&i) {
                    return Err(GraphError::Asymmetric(self.ids[i], self.ids[j]));
                }
            }
        }
        let reached = self.bfs_distances(0).iter().filter(|d| d.is_some()).count();
        if reached != self.ids.len() {
            return Err(GraphError::Disconnected {
                reachable: reached,
                total: self.ids.len(),
            });
        }
        Ok(())
    }

    pub fn node_count(&self) -> usize {
        self.ids.len()
    }

    pub fn edge_count(&self) -> usize {
        self.adj.iter().map(Vec::len).sum::<usize>() / 2
    }

    /// Node ids in increasing order.
    pub fn node_ids(&self) -> &[NodeId] {
        &self.ids
    }

    pub fn contains(&self, id: NodeId) -> bool {
        self.index.contains_key(&id)
    }

    /// Dense index of `id`, if present.
    pub fn index_of(&self, id: NodeId) -> Option<usize> {
        self.index.get(&id).copied()
    }

    pub fn id_at(&self, idx: usize) -> NodeId {
        self.ids[idx]
    }

    /// Neighbor indices of the node at dense index `idx`, sorted.
    pub fn neighbors_of(&self, idx: usize) -> &[usize] {
        &self.adj[idx]
    }

    pub fn neighbors(&self, id: NodeId) -> impl Iterator<Item = NodeId> + '_ {
        let idx = self.index.get(&id).copied();
        idx.into_iter()
            .flat_map(move |i| self.adj[i].iter().map(move |&j| self.ids[j]))
    }

    pub fn degree(&self, id: NodeId) -> usize {
        self.index_of(id).map_or(0, |i| self.adj[i].len())
    }

    /// Edges as `(u, v)` with `u < v`, sorted.
    pub fn edges(&self) -> Vec<(NodeId, NodeId)> {
        let mut out = Vec::with_capacity(self.edge_count());
        for (i, nbrs) in self.adj.iter().enumerate() {
            for &j in nbrs {
                if i < j {
                    out.push((self.ids[i], self.ids[j]));
                }
            }
        }
        out
    }

    /// Renders the graph in the edge-list text format, one edge per line.
    pub fn to_edge_list(&self) -> String {
        let mut s = String::new();
        for (u, v) in self.edges() {
            s.push_str(&format!("{u} {v}\n"));
        }
        s
    }

    fn bfs_distances(&self, src: usize) -> Vec<Option<u32>> {
        let mut dist = vec![None; self.ids.len()];
        let mut queue = VecDeque::new();
        dist[src] = Some(0);
        queue.push_back(src);
        while let Some(u) = queue.pop_front() {
            let du = dist[u].unwrap_or(0);
            for &v in &self.adj[u] {
                if dist[v].is_none() {
                    dist[v] = Some(du + 1);
                    queue.push_back(v);
                }
            }
        }
        dist
    }
}

/// Path on `n` nodes `0..n` with edges `{k, k+1}`.
pub fn path_graph(n: usize) -> Result<Graph, GraphError> {
    if n < 2 {
        return Err(GraphError::InvalidParameter(format!(
            "path graph needs at least 2 nodes, got {n}"
        )));
    }
    Graph::from_edges((0..n as u64 - 1).map(|k| (NodeId(k), NodeId(k + 1))))
}

/// T-shaped graph: a horizontal path of `left + right + 1` nodes (ids
/// `0..=left+right`, junction at id `left`) with a vertical path of `stem`
/// nodes hanging off the junction (ids continuing from `left+right+1`).
pub fn t_graph(left: usize, right: usize, stem: usize) -> Result<Graph, GraphError> {
    if left < 1 || right < 1 || stem < 1 {
        return Err(GraphError::InvalidParameter(format!(
            "T graph arms must all be >= 1, got left={left} right={right} stem={stem}"
        )));
    }
    let bar = (left + right + 1) as u64;
    let junction = left as u64;
    let mut edges: Vec<(NodeId, NodeId)> =
        (0..bar - 1).map(|k| (NodeId(k), NodeId(k + 1))).collect();
    let mut prev = junction;
    for k in 0..stem as u64 {
        let node = bar + k;
        edges.push((NodeId(prev), NodeId(node)));
        prev = node;
    }
    Graph::from_edges(edges)
}

/// Complete graph on `n` nodes.
pub fn complete_graph(n: usize) -> Result<Graph, GraphError> {
    if n < 2 {
        return Err(GraphError::InvalidParameter(format!(
            "complete graph needs at least 2 nodes, got {n}"
        )));
    }
    let n = n as u64;
    Graph::from_edges((0..n).flat_map(|u| (u + 1..n).map(move |v| (NodeId(u), NodeId(v)))))
}

/// Random connected graph: a uniformly random labelled spanning tree (Prüfer
/// decoding) plus each remaining pair independently with probability
/// `edge_prob`. Deterministic in `(n, edge_prob, seed)`.
pub fn random_connected_graph(n: usize, edge_prob: f64, seed: u64) -> Result<Graph, GraphError> {
    if n < 2 {
        return Err(GraphError::InvalidParameter(format!(
            "random graph needs at least 2 nodes, got {n}"
        )));
    }
    if !(edge_prob > 0.0 && edge_prob <= 1.0) {
        return Err(GraphError::InvalidParameter(format!(
            "edge probability must be in (0, 1], got {edge_prob}"
        )));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut adj = vec![BTreeSet::new(); n];
    for (u, v) in random_tree_edges(n, &mut rng) {
        adj[u].insert(v);
        adj[v].insert(u);
    }
    for u in 0..n {
        for v in u + 1..n {
            // Draw for every pair so the stream does not depend on the tree.
            let hit = rng.gen::<f64>() < edge_prob;
            if hit && !adj[u].contains(&v) {
                adj[u].insert(v);
                adj[v].insert(u);
            }
        }
    }
    let set = adj
        .into_iter()
        .enumerate()
        .map(|(u, nbrs)| {
            (
                NodeId(u as u64),
                nbrs.into_iter().map(|v| NodeId(v as u64)).collect(),
            )
        })
        .collect();
    Graph::from_adjacency(set)
}

fn random_tree_edges(n: usize, rng: &mut ChaCha8Rng) -> Vec<(usize, usize)> {
    if n == 2 {
        return vec![(0, 1)];
    }
    let prufer: Vec<usize> = (0..n - 2).map(|_| rng.gen_range(0..n)).collect();
    let mut degree = vec![1usize; n];
    for &x in &prufer {
        degree[x] += 1;
    }
    let mut leaves: BTreeSet<usize> = (0..n).filter(|&v| degree[v] == 1).collect();
    let mut edges = Vec::with_capacity(n - 1);
    for &x in &prufer {
        let leaf = *leaves.iter().next().expect("Prüfer decoding always has a leaf");
        leaves.remove(&leaf);
        edges.push((leaf, x));
        degree[x] -= 1;
        if degree[x] == 1 {
            leaves.insert(x);
        }
    }
    let mut rest = leaves.into_iter();
    let (a, b) = (rest.next().unwrap(), rest.next().unwrap());
    edges.push((a, b));
    edges.shuffle(rng);
    edges
}

/// Parses the edge-list text format: one `u v` pair per line, `#` starts a
/// comment, blank lines are ignored.
pub fn parse_edge_list(text: &str) -> Result<Graph, GraphError> {
    let mut edges = Vec::new();
    for (lineno, raw) in text.lines().enumerate() {
        let line = lineno + 1;
        let content = raw.split('#').next().unwrap_or("").trim();
        if content.is_empty() {
            continue;
        }
        let fields: Vec<&str> = content.split_whitespace().collect();
        if fields.len() != 2 {
            return Err(GraphError::Malformed {
                line,
                reason: format!("expected two node ids, found {} fields", fields.len()),
            });
        }
        let parse = |s: &str| {
            s.parse::<u64>().map(NodeId).map_err(|_| GraphError::Malformed {
                line,
                reason: format!("`{s}` is not a non-negative integer"),
            })
        };
        let (u, v) = (parse(fields[0])?, parse(fields[1])?);
        if u == v {
            return Err(GraphError::SelfLoop { node: u, line: Some(line) });
        }
        edges.push((u, v));
    }
    Graph::from_edges(edges)
}

/// Ground-truth distances and derived metrics computed by one BFS per node.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OracleMetrics {
    ids: Vec<NodeId>,
    index: BTreeMap<NodeId, usize>,
    dist: Vec<Vec<u32>>,
    ecc: Vec<u32>,
    pub diameter: u32,
    pub radius: u32,
    pub centers: BTreeSet<NodeId>,
    pub periphery: BTreeSet<NodeId>,
}

impl OracleMetrics {
    /// Hop distance between two nodes. Panics if either id is unknown.
    pub fn dist(&self, a: NodeId, b: NodeId) -> u32 {
        self.dist[self.index[&a]][self.index[&b]]
    }

    pub fn ecc(&self, id: NodeId) -> u32 {
        self.ecc[self.index[&id]]
    }

    pub fn eccentricities(&self) -> impl Iterator<Item = (NodeId, u32)> + '_ {
        self.ids.iter().copied().zip(self.ecc.iter().copied())
    }

    pub fn node_ids(&self) -> &[NodeId] {
        &self.ids
    }
}

pub fn oracle_metrics(g: &Graph) -> OracleMetrics {
    let n = g.node_count();
    let dist: Vec<Vec<u32>> = (0..n)
        .map(|s| {
            g.bfs_distances(s)
                .into_iter()
                .map(|d| d.expect("graph is connected"))
                .collect()
        })
        .collect();
    let ecc: Vec<u32> = dist.iter().map(|row| row.iter().copied().max().unwrap_or(0)).collect();
    let diameter = ecc.iter().copied().max().unwrap_or(0);
    let radius = ecc.iter().copied().min().unwrap_or(0);
    let pick = |target: u32| {
        g.node_ids()
            .iter()
            .zip(&ecc)
            .filter(|(_, &e)| e == target)
            .map(|(&id, _)| id)
            .collect()
    };
    OracleMetrics {
        ids: g.node_ids().to_vec(),
        index: g.index.clone(),
        centers: pick(radius),
        periphery: pick(diameter),
        dist,
        ecc,
        diameter,
        radius,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ids(v: &[u64]) -> BTreeSet<NodeId> {
        v.iter().map(|&x| NodeId(x)).collect()
    }

    #[test]
    fn path_eleven_metrics() {
        let g = path_graph(11).unwrap();
        assert_eq!(g.node_count(), 11);
        assert_eq!(g.edge_count(), 10);
        let m = oracle_metrics(&g);
        assert_eq!(m.diameter, 10);
        assert_eq!(m.radius, 5);
        assert_eq!(m.centers, ids(&[5]));
        assert_eq!(m.periphery, ids(&[0, 10]));
        assert_eq!(m.ecc(NodeId(0)), 10);
        assert_eq!(m.ecc(NodeId(5)), 5);
        assert_eq!(m.ecc(NodeId(10)), 10);
    }

    #[test]
    fn small_paths() {
        let m = oracle_metrics(&path_graph(2).unwrap());
        assert_eq!((m.diameter, m.radius), (1, 1));
        let m = oracle_metrics(&path_graph(3).unwrap());
        assert_eq!((m.diameter, m.radius), (2, 1));
        assert_eq!(m.centers, ids(&[1]));
        let m = oracle_metrics(&path_graph(4).unwrap());
        let ecc: Vec<u32> = m.eccentricities().map(|(_, e)| e).collect();
        assert_eq!(ecc, vec![3, 2, 2, 3]);
        assert_eq!((m.diameter, m.radius), (3, 2));
    }

    #[test]
    fn path_rejects_short() {
        assert!(matches!(path_graph(1), Err(GraphError::InvalidParameter(_))));
        assert!(matches!(path_graph(0), Err(GraphError::InvalidParameter(_))));
    }

    #[test]
    fn complete_four() {
        let m = oracle_metrics(&complete_graph(4).unwrap());
        assert!(m.eccentricities().all(|(_, e)| e == 1));
        assert_eq!((m.diameter, m.radius), (1, 1));
    }

    #[test]
    fn t_graph_shapes() {
        let g = t_graph(5, 5, 4).unwrap();
        assert_eq!(g.node_count(), 15);
        assert_eq!(g.edge_count(), 14);
        assert_eq!(g.degree(NodeId(5)), 3);
        // stem end
        assert_eq!(g.degree(NodeId(14)), 1);
        assert_eq!(oracle_metrics(&g).diameter, 10);

        let star = t_graph(1, 1, 1).unwrap();
        assert_eq!(star.node_count(), 4);
        assert_eq!(star.degree(NodeId(1)), 3);
        let m = oracle_metrics(&star);
        assert_eq!((m.diameter, m.radius), (2, 1));

        assert!(t_graph(0, 1, 1).is_err());
        assert!(t_graph(1, 1, 0).is_err());
    }

    #[test]
    fn random_graph_determinism_and_edge_cases() {
        let a = random_connected_graph(20, 0.15, 42).unwrap();
        let b = random_connected_graph(20, 0.15, 42).unwrap();
        assert_eq!(a.edges(), b.edges());

        for seed in 0..5 {
            let g = random_connected_graph(2, 0.7, seed).unwrap();
            assert_eq!(g.edges(), vec![(NodeId(0), NodeId(1))]);
        }

        let m = oracle_metrics(&random_connected_graph(30, 0.1, 7).unwrap());
        assert!(m.radius <= m.diameter && m.diameter <= 2 * m.radius);

        assert!(random_connected_graph(5, 0.0, 1).is_err());
        assert!(random_connected_graph(1, 0.5, 1).is_err());
    }

    #[test]
    fn full_probability_is_complete() {
        let g = random_connected_graph(9, 1.0, 3).unwrap();
        assert_eq!(g.edge_count(), 36);
    }

    #[test]
    fn parse_examples() {
        let g = parse_edge_list("0 1\n1 2").unwrap();
        assert_eq!(g, path_graph(3).unwrap());

        assert!(matches!(
            parse_edge_list("0 0"),
            Err(GraphError::SelfLoop { line: Some(1), .. })
        ));
        assert!(matches!(
            parse_edge_list("0 1\n2 3"),
            Err(GraphError::Disconnected { .. })
        ));
    }

    #[test]
    fn parse_comments_and_errors() {
        let text = "# header\n\n  10 20  # trailing\n20 30\n";
        let g = parse_edge_list(text).unwrap();
        assert_eq!(g.node_ids(), &[NodeId(10), NodeId(20), NodeId(30)]);

        assert!(matches!(parse_edge_list("# nothing\n"), Err(GraphError::TooFewNodes(0))));
        assert!(matches!(
            parse_edge_list("0 1\n1 x\n"),
            Err(GraphError::Malformed { line: 2, .. })
        ));
        assert!(matches!(
            parse_edge_list("0 1 2\n"),
            Err(GraphError::Malformed { line: 1, .. })
        ));
        assert!(matches!(
            parse_edge_list("-1 2\n"),
            Err(GraphError::Malformed { line: 1, .. })
        ));
        // duplicate lines collapse into one edge
        assert_eq!(parse_edge_list("0 1\n1 0\n").unwrap().edge_count(), 1);
    }

    #[test]
    fn edge_list_round_trip() {
        let g = t_graph(2, 3, 2).unwrap();
        assert_eq!(parse_edge_list(&g.to_edge_list()).unwrap(), g);
    }
}
