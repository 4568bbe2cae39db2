use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{check_index, Error, Result};

/// Simple undirected graph on nodes `0..n`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "GraphFile", into = "GraphFile")]
pub struct Graph {
    n: usize,
    // (u, v) with u < v, sorted.
    edges: Vec<(usize, usize)>,
    degree: Vec<usize>,
}

#[derive(Serialize, Deserialize)]
struct GraphFile {
    n: usize,
    edges: Vec<(usize, usize)>,
}

impl TryFrom<GraphFile> for Graph {
    type Error = Error;

    fn try_from(f: GraphFile) -> Result<Self> {
        Graph::new(f.n, f.edges)
    }
}

impl From<Graph> for GraphFile {
    fn from(g: Graph) -> Self {
        GraphFile { n: g.n, edges: g.edges }
    }
}

impl Graph {
    /// Rejects self-loops, duplicate edges and out-of-range endpoints.
    pub fn new(n: usize, edges: Vec<(usize, usize)>) -> Result<Self> {
        let mut norm = Vec::with_capacity(edges.len());
        for (u, v) in edges {
            check_index(u, n)?;
            check_index(v, n)?;
            if u == v {
                return Err(Error::Input(format!("self-loop on node {u}")));
            }
            norm.push((u.min(v), u.max(v)));
        }
        norm.sort_unstable();
        if let Some(w) = norm.windows(2).find(|w| w[0] == w[1]) {
            return Err(Error::Input(format!("duplicate edge {:?}", w[0])));
        }
        let mut degree = vec![0; n];
        for &(u, v) in &norm {
            degree[u] += 1;
            degree[v] += 1;
        }
        Ok(Graph { n, edges: norm, degree })
    }

    pub fn complete(n: usize) -> Self {
        let edges = (0..n).flat_map(|u| (u + 1..n).map(move |v| (u, v))).collect();
        Graph::new(n, edges).expect("complete graph is simple")
    }

    pub fn path(n: usize) -> Self {
        Graph::new(n, (1..n).map(|v| (v - 1, v)).collect()).expect("path is simple")
    }

    pub fn empty(n: usize) -> Self {
        Graph::new(n, Vec::new()).expect("edgeless graph is simple")
    }

    /// Random graph with maximum degree at most `max_degree`: candidate pairs
    /// are visited in random order and each is kept with probability `p` if
    /// both endpoints still have room.
    pub fn random_bounded_degree(n: usize, max_degree: usize, p: f64, seed: u64) -> Self {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut pairs: Vec<(usize, usize)> = (0..n).flat_map(|u| (u + 1..n).map(move |v| (u, v))).collect();
        pairs.shuffle(&mut rng);
        let mut degree = vec![0; n];
        let mut edges = Vec::new();
        for (u, v) in pairs {
            if degree[u] < max_degree && degree[v] < max_degree && rng.random_bool(p) {
                degree[u] += 1;
                degree[v] += 1;
                edges.push((u, v));
            }
        }
        Graph::new(n, edges).expect("generated graph is simple")
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn degree(&self, v: usize) -> usize {
        self.degree[v]
    }

    pub fn max_degree(&self) -> usize {
        self.degree.iter().copied().max().unwrap_or(0)
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        self.edges.binary_search(&(u.min(v), u.max(v))).is_ok()
    }
}

/// Degree-normalized adjacency embedding in `R^(n + m)`.
///
/// Every node gets a self-loop, the `n + m` resulting edges are ordered
/// lexicographically by sorted endpoints (the loop at `v` is the pair
/// `(v, v)`), and coordinate `e` of node `v` is `sqrt(1 / (2 deg'(v)))` when
/// `v` is an endpoint of `e`, where `deg'` counts the self-loop. Non-adjacent
/// nodes land at distance exactly 1 and adjacent ones strictly closer.
pub fn embed_graph(graph: &Graph) -> Vec<Vec<f64>> {
    let n = graph.n;
    let mut augmented: Vec<(usize, usize)> = graph.edges.iter().copied().chain((0..n).map(|v| (v, v))).collect();
    augmented.sort_unstable();
    let scale: Vec<f64> = (0..n).map(|v| (1.0 / (2.0 * (graph.degree[v] + 1) as f64)).sqrt()).collect();
    let mut out = vec![vec![0.0; augmented.len()]; n];
    for (e, &(u, v)) in augmented.iter().enumerate() {
        out[u][e] = scale[u];
        out[v][e] = scale[v];
    }
    out
}
