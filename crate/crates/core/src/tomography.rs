//! Routing matrices for network tomography.
//!
//! Rows are measurement paths, columns are edges, and an entry is 1 when
//! the path uses the edge. Paths are random walks on the graph. Random
//! graphs start from a uniform spanning tree drawn with Wilson's algorithm.

use std::collections::{BTreeSet, HashMap, HashSet};
use std::path::Path;

use rand::Rng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::matrix::{seeded_rng, Provenance, SensingMatrix};

/// Undirected simple graph on nodes `0..num_nodes`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Graph {
    pub num_nodes: usize,
    /// Edges with `u < v`, in insertion order.
    pub edges: Vec<(usize, usize)>,
    #[serde(skip)]
    adj: Vec<Vec<usize>>,
}

impl Graph {
    pub fn new(num_nodes: usize, edges: &[(usize, usize)]) -> Result<Self> {
        let mut adj = vec![Vec::new(); num_nodes];
        let mut seen = HashSet::new();
        let mut out = Vec::with_capacity(edges.len());
        for &(u, v) in edges {
            let n = num_nodes;
            if u >= n || v >= n {
                return Err(Error::IndexOutOfRange { index: u.max(v), n });
            }
            if u == v {
                return Err(Error::InvalidArgument(format!("self-loop at node {}", u + 1)));
            }
            let e = (u.min(v), u.max(v));
            if !seen.insert(e) {
                return Err(Error::InvalidArgument(format!(
                    "duplicate edge {} {}",
                    e.0 + 1,
                    e.1 + 1
                )));
            }
            adj[u].push(v);
            adj[v].push(u);
            out.push(e);
        }
        Ok(Self {
            num_nodes,
            edges: out,
            adj,
        })
    }

    pub fn complete(num_nodes: usize) -> Self {
        let edges: Vec<(usize, usize)> = (0..num_nodes)
            .flat_map(|u| (u + 1..num_nodes).map(move |v| (u, v)))
            .collect();
        Self::new(num_nodes, &edges).expect("complete graph is simple")
    }

    /// Random spanning tree plus `num_edges - (num_nodes - 1)` extra edges
    /// drawn uniformly from the remaining pairs.
    pub fn random_connected(num_nodes: usize, num_edges: usize, seed: u64) -> Result<Self> {
        if num_nodes < 2 {
            return Err(Error::InvalidArgument("need at least two nodes".into()));
        }
        let max_edges = num_nodes * (num_nodes - 1) / 2;
        if num_edges < num_nodes - 1 || num_edges > max_edges {
            return Err(Error::InvalidArgument(format!(
                "{num_edges} edges cannot form a connected simple graph on {num_nodes} nodes"
            )));
        }
        let mut rng = seeded_rng(seed);
        let tree = wilson_tree(&Self::complete(num_nodes), &mut rng)?;
        let mut edges = tree;
        let mut present: HashSet<(usize, usize)> = edges.iter().copied().collect();
        while edges.len() < num_edges {
            let u = rng.random_range(0..num_nodes);
            let v = rng.random_range(0..num_nodes);
            if u == v {
                continue;
            }
            let e = (u.min(v), u.max(v));
            if present.insert(e) {
                edges.push(e);
            }
        }
        Self::new(num_nodes, &edges)
    }

    /// The 300-node, 400-edge network model.
    pub fn network_model(seed: u64) -> Self {
        Self::random_connected(300, 400, seed).expect("valid model size")
    }

    pub fn neighbors(&self, u: usize) -> &[usize] {
        &self.adj[u]
    }

    pub fn is_connected(&self) -> bool {
        if self.num_nodes == 0 {
            return true;
        }
        let mut seen = vec![false; self.num_nodes];
        let mut stack = vec![0];
        seen[0] = true;
        let mut count = 1;
        while let Some(u) = stack.pop() {
            for &v in &self.adj[u] {
                if !seen[v] {
                    seen[v] = true;
                    count += 1;
                    stack.push(v);
                }
            }
        }
        count == self.num_nodes
    }
}

/// Parse an edge list: one `u v` pair of 1-based node ids per line; blank
/// lines and `#` comments are skipped. The node count is the largest id.
pub fn parse_edge_list(text: &str) -> Result<Graph> {
    let mut edges = Vec::new();
    let mut n = 0;
    for (lineno, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let cells: Vec<&str> = line.split_whitespace().collect();
        if cells.len() != 2 {
            return Err(Error::RaggedRows {
                line: lineno + 1,
                expected: 2,
                found: cells.len(),
            });
        }
        let mut ids = [0usize; 2];
        for (slot, cell) in ids.iter_mut().zip(&cells) {
            *slot = match cell.parse::<usize>() {
                Ok(v) if v >= 1 => v,
                _ => {
                    return Err(Error::BadCell {
                        line: lineno + 1,
                        cell: cell.to_string(),
                    })
                }
            };
        }
        n = n.max(ids[0]).max(ids[1]);
        edges.push((ids[0] - 1, ids[1] - 1));
    }
    if edges.is_empty() {
        return Err(Error::EmptyFile);
    }
    Graph::new(n, &edges)
}

pub fn load_edge_list(path: &Path) -> Result<Graph> {
    let text = std::fs::read_to_string(path).map_err(|source| Error::Io {
        path: path.to_path_buf(),
        source,
    })?;
    parse_edge_list(&text)
}

fn wilson_tree(graph: &Graph, rng: &mut ChaCha8Rng) -> Result<Vec<(usize, usize)>> {
    let n = graph.num_nodes;
    if n == 0 {
        return Ok(Vec::new());
    }
    if !graph.is_connected() {
        return Err(Error::Disconnected);
    }
    let mut in_tree = vec![false; n];
    let mut next = vec![usize::MAX; n];
    let root = rng.random_range(0..n);
    in_tree[root] = true;
    let mut edges = Vec::with_capacity(n - 1);
    for start in 0..n {
        // Loop-erased walk: overwriting `next` erases cycles.
        let mut u = start;
        while !in_tree[u] {
            let nb = graph.neighbors(u);
            next[u] = nb[rng.random_range(0..nb.len())];
            u = next[u];
        }
        let mut u = start;
        while !in_tree[u] {
            in_tree[u] = true;
            let v = next[u];
            edges.push((u.min(v), u.max(v)));
            u = v;
        }
    }
    Ok(edges)
}

/// Uniformly random spanning tree of a connected graph, as an edge list.
pub fn wilson_spanning_tree(graph: &Graph, seed: u64) -> Result<Vec<(usize, usize)>> {
    wilson_tree(graph, &mut seeded_rng(seed))
}

#[derive(Debug, Clone, Serialize)]
pub struct NetworkInstance {
    pub num_nodes: usize,
    /// Links; column `j` of the routing matrix is `edges[j]`.
    pub edges: Vec<(usize, usize)>,
    /// Edge indices used by each path, sorted.
    pub paths: Vec<Vec<usize>>,
    #[serde(skip)]
    pub routing: SensingMatrix,
}

const DUPLICATE_RETRIES: usize = 1000;

/// `num_paths` random walks of `walk_len` steps on `graph`, each from a
/// uniform start node. A path keeps the distinct edges it crossed.
/// Duplicate paths are redrawn a bounded number of times, then kept.
pub fn build_random_walk_instance(
    graph: &Graph,
    num_paths: usize,
    walk_len: usize,
    seed: u64,
) -> Result<NetworkInstance> {
    if num_paths == 0 || walk_len == 0 {
        return Err(Error::InvalidArgument("need at least one path of length >= 1".into()));
    }
    if graph.num_nodes < 2 {
        return Err(Error::InvalidArgument("need at least two nodes".into()));
    }
    if !graph.is_connected() {
        return Err(Error::Disconnected);
    }
    let index: HashMap<(usize, usize), usize> =
        graph.edges.iter().enumerate().map(|(i, &e)| (e, i)).collect();
    let mut rng = seeded_rng(seed);
    let mut paths = Vec::with_capacity(num_paths);
    let mut seen: HashSet<Vec<usize>> = HashSet::new();
    let mut retries = 0;
    while paths.len() < num_paths {
        let mut u = rng.random_range(0..graph.num_nodes);
        let mut used = BTreeSet::new();
        for _ in 0..walk_len {
            let nb = graph.neighbors(u);
            let v = nb[rng.random_range(0..nb.len())];
            used.insert(index[&(u.min(v), u.max(v))]);
            u = v;
        }
        let path: Vec<usize> = used.into_iter().collect();
        if !seen.insert(path.clone()) {
            if retries < DUPLICATE_RETRIES {
                retries += 1;
                continue;
            }
            if retries == DUPLICATE_RETRIES {
                log::warn!("keeping duplicate paths after {DUPLICATE_RETRIES} redraws");
                retries += 1;
            }
        }
        paths.push(path);
    }
    let cols = graph.edges.len();
    let mut entries = vec![0.0; num_paths * cols];
    for (r, p) in paths.iter().enumerate() {
        for &e in p {
            entries[r * cols + e] = 1.0;
        }
    }
    let routing = SensingMatrix::from_row_major(
        num_paths,
        cols,
        entries,
        Provenance::Derived {
            description: format!(
                "random-walk routing: {num_paths} paths of {walk_len} steps on a {}-node graph, seed {seed}",
                graph.num_nodes
            ),
        },
    )?;
    Ok(NetworkInstance {
        num_nodes: graph.num_nodes,
        edges: graph.edges.clone(),
        paths,
        routing,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn find(parent: &mut [usize], x: usize) -> usize {
        let mut r = x;
        while parent[r] != r {
            r = parent[r];
        }
        parent[x] = r;
        r
    }

    fn is_spanning_tree(n: usize, edges: &[(usize, usize)], base: &Graph) -> bool {
        if edges.len() != n - 1 {
            return false;
        }
        let mut parent: Vec<usize> = (0..n).collect();
        for &(u, v) in edges {
            if !base.edges.contains(&(u, v)) {
                return false;
            }
            let (a, b) = (find(&mut parent, u), find(&mut parent, v));
            if a == b {
                return false;
            }
            parent[a] = b;
        }
        true
    }

    #[test]
    fn wilson_gives_spanning_trees() {
        let g = Graph::random_connected(10, 20, 4).unwrap();
        for seed in 0..100 {
            let t = wilson_spanning_tree(&g, seed).unwrap();
            assert!(is_spanning_tree(10, &t, &g));
        }
    }

    #[test]
    fn disconnected_graph_is_rejected() {
        let g = Graph::new(4, &[(0, 1), (2, 3)]).unwrap();
        assert!(matches!(wilson_spanning_tree(&g, 0), Err(Error::Disconnected)));
        assert!(matches!(
            build_random_walk_instance(&g, 3, 2, 0),
            Err(Error::Disconnected)
        ));
    }

    #[test]
    fn graph_validation() {
        assert!(Graph::new(3, &[(0, 0)]).is_err());
        assert!(Graph::new(3, &[(0, 1), (1, 0)]).is_err());
        assert!(Graph::new(3, &[(0, 3)]).is_err());
        assert!(Graph::random_connected(5, 3, 0).is_err());
        assert!(Graph::random_connected(5, 11, 0).is_err());
        let g = Graph::network_model(1);
        assert_eq!((g.num_nodes, g.edges.len()), (300, 400));
        assert!(g.is_connected());
    }

    #[test]
    fn edge_list_parsing() {
        let g = parse_edge_list("# ring\n1 2\n2 3\n\n3 1\n").unwrap();
        assert_eq!(g.num_nodes, 3);
        assert_eq!(g.edges, vec![(0, 1), (1, 2), (0, 2)]);
        assert!(matches!(parse_edge_list("1 2 3"), Err(Error::RaggedRows { .. })));
        assert!(matches!(parse_edge_list("0 2"), Err(Error::BadCell { .. })));
        assert!(matches!(parse_edge_list("# none\n"), Err(Error::EmptyFile)));
    }

    #[test]
    fn instance_shape_and_determinism() {
        let g = Graph::complete(12);
        let inst = build_random_walk_instance(&g, 33, 5, 11).unwrap();
        let a = &inst.routing;
        assert_eq!((a.rows(), a.cols()), (33, 66));
        assert!(a.entries().iter().all(|&v| v == 0.0 || v == 1.0));
        for (r, p) in inst.paths.iter().enumerate() {
            assert!(!p.is_empty() && p.len() <= 5);
            let ones = a.row(r).iter().filter(|&&v| v == 1.0).count();
            assert_eq!(ones, p.len());
        }
        let again = build_random_walk_instance(&g, 33, 5, 11).unwrap();
        assert_eq!(again.routing.entries(), a.entries());
        assert_eq!(again.edges, inst.edges);
    }

    #[test]
    fn complete_graph_walks_of_20() {
        let inst = build_random_walk_instance(&Graph::complete(12), 33, 20, 3).unwrap();
        assert_eq!((inst.routing.rows(), inst.routing.cols()), (33, 66));
        let uniq: HashSet<&Vec<usize>> = inst.paths.iter().collect();
        assert_eq!(uniq.len(), 33);
    }

    #[test]
    fn network_model_instance() {
        let g = Graph::network_model(5);
        let inst = build_random_walk_instance(&g, 320, 100, 5).unwrap();
        assert_eq!((inst.routing.rows(), inst.routing.cols()), (320, 400));
    }

    #[test]
    fn three_node_trees_roughly_uniform() {
        let g = Graph::complete(3);
        let mut counts: HashMap<Vec<(usize, usize)>, usize> = HashMap::new();
        for seed in 0..3000 {
            let mut t = wilson_spanning_tree(&g, seed).unwrap();
            t.sort();
            *counts.entry(t).or_default() += 1;
        }
        assert_eq!(counts.len(), 3);
        assert!(counts.values().all(|&c| (750..=1260).contains(&c)));
    }

    #[test]
    fn single_step_paths_have_one_edge() {
        let g = Graph::complete(6);
        let inst = build_random_walk_instance(&g, 4, 1, 9).unwrap();
        for r in 0..4 {
            let ones = inst.routing.row(r).iter().filter(|&&v| v == 1.0).count();
            assert_eq!(ones, 1);
        }
    }
}
