//! Graph value types, thresholding, shortest paths and efficiency metrics.
//!
//! All graphs are undirected, simple and immutable once built. Weighted
//! graphs carry nonnegative weights; a zero weight means "no edge".

use std::collections::VecDeque;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::matrix::{pair_count, upper_pairs, SquareMatrix};

fn default_labels(n: usize) -> Vec<String> {
    (0..n).map(|i| format!("v{i}")).collect()
}

fn check_labels(labels: &[String], n: usize) -> Result<()> {
    if labels.len() != n {
        return Err(Error::Validation(format!(
            "{} node labels supplied for {n} nodes",
            labels.len()
        )));
    }
    Ok(())
}

/// Unweighted undirected simple graph.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(into = "BinaryGraphRepr", try_from = "BinaryGraphRepr")]
pub struct BinaryGraph {
    node_labels: Vec<String>,
    adjacency: Vec<bool>,
    edge_count: usize,
}

#[derive(Serialize, Deserialize)]
struct BinaryGraphRepr {
    node_labels: Vec<String>,
    edges: Vec<[usize; 2]>,
}

impl From<BinaryGraph> for BinaryGraphRepr {
    fn from(g: BinaryGraph) -> Self {
        let edges = g.edges().into_iter().map(|(i, j)| [i, j]).collect();
        Self {
            node_labels: g.node_labels,
            edges,
        }
    }
}

impl TryFrom<BinaryGraphRepr> for BinaryGraph {
    type Error = Error;

    fn try_from(r: BinaryGraphRepr) -> Result<Self> {
        let n = r.node_labels.len();
        BinaryGraph::from_edges(n, r.edges.into_iter().map(|[i, j]| (i, j)))?
            .with_labels(r.node_labels)
    }
}

impl BinaryGraph {
    pub fn empty(n: usize) -> Self {
        Self {
            node_labels: default_labels(n),
            adjacency: vec![false; n * n],
            edge_count: 0,
        }
    }

    pub fn complete(n: usize) -> Self {
        let mut g = Self::empty(n);
        for (i, j) in upper_pairs(n) {
            g.insert(i, j);
        }
        g
    }

    /// Builds a graph from an edge list. Duplicate edges are merged;
    /// self-loops and out-of-range endpoints are rejected.
    pub fn from_edges(n: usize, edges: impl IntoIterator<Item = (usize, usize)>) -> Result<Self> {
        let mut g = Self::empty(n);
        for (i, j) in edges {
            if i >= n || j >= n {
                return Err(Error::Validation(format!(
                    "edge ({i}, {j}) out of range for {n} nodes"
                )));
            }
            if i == j {
                return Err(Error::Validation(format!("self-loop at node {i}")));
            }
            g.insert(i, j);
        }
        Ok(g)
    }

    /// Reads a 0/1 adjacency matrix. Entries other than 0 and 1, asymmetry
    /// or a nonzero diagonal are validation errors.
    pub fn from_adjacency(m: &SquareMatrix) -> Result<Self> {
        let n = m.n();
        let mut g = Self::empty(n);
        for i in 0..n {
            for j in 0..n {
                let v = m.get(i, j);
                if v != 0.0 && v != 1.0 {
                    return Err(Error::Validation(format!(
                        "adjacency entry ({i}, {j}) = {v} is not 0 or 1"
                    )));
                }
                if v != m.get(j, i) {
                    return Err(Error::Validation("adjacency is not symmetric".into()));
                }
                if i == j && v != 0.0 {
                    return Err(Error::Validation(format!("self-loop at node {i}")));
                }
            }
        }
        for (i, j) in upper_pairs(n) {
            if m.get(i, j) == 1.0 {
                g.insert(i, j);
            }
        }
        Ok(g)
    }

    pub fn with_labels(mut self, labels: Vec<String>) -> Result<Self> {
        check_labels(&labels, self.n())?;
        self.node_labels = labels;
        Ok(self)
    }

    fn insert(&mut self, i: usize, j: usize) {
        let n = self.n();
        if !self.adjacency[i * n + j] {
            self.adjacency[i * n + j] = true;
            self.adjacency[j * n + i] = true;
            self.edge_count += 1;
        }
    }

    #[inline]
    pub fn n(&self) -> usize {
        self.node_labels.len()
    }

    #[inline]
    pub fn edge_count(&self) -> usize {
        self.edge_count
    }

    pub fn node_labels(&self) -> &[String] {
        &self.node_labels
    }

    #[inline]
    pub fn has_edge(&self, i: usize, j: usize) -> bool {
        self.adjacency[i * self.n() + j]
    }

    pub fn neighbors(&self, i: usize) -> impl Iterator<Item = usize> + '_ {
        let n = self.n();
        self.adjacency[i * n..(i + 1) * n]
            .iter()
            .enumerate()
            .filter_map(|(j, &a)| a.then_some(j))
    }

    pub fn degree(&self, i: usize) -> usize {
        self.neighbors(i).count()
    }

    /// Edges as `(i, j)` with `i < j`, in row-major order.
    pub fn edges(&self) -> Vec<(usize, usize)> {
        upper_pairs(self.n())
            .filter(|&(i, j)| self.has_edge(i, j))
            .collect()
    }

    pub fn is_complete(&self) -> bool {
        self.edge_count == pair_count(self.n())
    }

    pub fn to_adjacency_matrix(&self) -> SquareMatrix {
        let n = self.n();
        let mut m = SquareMatrix::zeros(n);
        for (i, j) in self.edges() {
            m.set(i, j, 1.0);
            m.set(j, i, 1.0);
        }
        m
    }

    /// Subgraph induced by `nodes`, relabelled `0..nodes.len()` in the given order.
    pub fn induced(&self, nodes: &[usize]) -> BinaryGraph {
        let mut sub = BinaryGraph::empty(nodes.len());
        for (a, &u) in nodes.iter().enumerate() {
            for (b, &v) in nodes.iter().enumerate().skip(a + 1) {
                if self.has_edge(u, v) {
                    sub.insert(a, b);
                }
            }
        }
        sub.node_labels = nodes.iter().map(|&u| self.node_labels[u].clone()).collect();
        sub
    }

    /// Relabels nodes so that old node `i` becomes node `perm[i]`.
    pub fn permuted(&self, perm: &[usize]) -> BinaryGraph {
        let n = self.n();
        let mut g = BinaryGraph::empty(n);
        let mut labels = vec![String::new(); n];
        for i in 0..n {
            labels[perm[i]] = self.node_labels[i].clone();
        }
        for (i, j) in self.edges() {
            g.insert(perm[i], perm[j]);
        }
        g.node_labels = labels;
        g
    }
}

/// Optional per-node stereotaxic coordinates, carried through untouched.
pub type Coords = [f64; 3];

/// Undirected graph with nonnegative symmetric weights and a zero diagonal.
#[derive(Clone, Debug, PartialEq)]
pub struct WeightedGraph {
    node_labels: Vec<String>,
    node_coords: Option<Vec<Coords>>,
    weights: SquareMatrix,
}

impl WeightedGraph {
    /// Validates symmetry (then symmetrizes), finiteness and nonnegativity.
    /// The diagonal is forced to zero.
    pub fn new(weights: SquareMatrix) -> Result<Self> {
        let mut w = weights.validated_symmetric()?;
        for i in 0..w.n() {
            w.set(i, i, 0.0);
        }
        for (i, j) in upper_pairs(w.n()) {
            if w.get(i, j) < 0.0 {
                return Err(Error::Validation(format!(
                    "negative weight {} at ({i}, {j}); standardize signed matrices first",
                    w.get(i, j)
                )));
            }
        }
        Ok(Self {
            node_labels: default_labels(w.n()),
            node_coords: None,
            weights: w,
        })
    }

    pub fn with_labels(mut self, labels: Vec<String>) -> Result<Self> {
        check_labels(&labels, self.n())?;
        self.node_labels = labels;
        Ok(self)
    }

    pub fn with_coords(mut self, coords: Option<Vec<Coords>>) -> Result<Self> {
        if let Some(c) = &coords {
            if c.len() != self.n() {
                return Err(Error::Validation(format!(
                    "{} coordinates supplied for {} nodes",
                    c.len(),
                    self.n()
                )));
            }
        }
        self.node_coords = coords;
        Ok(self)
    }

    #[inline]
    pub fn n(&self) -> usize {
        self.weights.n()
    }

    #[inline]
    pub fn weight(&self, i: usize, j: usize) -> f64 {
        self.weights.get(i, j)
    }

    pub fn weights(&self) -> &SquareMatrix {
        &self.weights
    }

    pub fn node_labels(&self) -> &[String] {
        &self.node_labels
    }

    pub fn node_coords(&self) -> Option<&[Coords]> {
        self.node_coords.as_deref()
    }

    /// Pairs `i < j` carrying a positive weight, in row-major order.
    pub fn positive_edges(&self) -> Vec<(usize, usize)> {
        upper_pairs(self.n())
            .filter(|&(i, j)| self.weight(i, j) > 0.0)
            .collect()
    }

    pub fn positive_edge_count(&self) -> usize {
        upper_pairs(self.n())
            .filter(|&(i, j)| self.weight(i, j) > 0.0)
            .count()
    }

    /// Applies `f` to every positive weight; absent pairs stay absent.
    pub fn map_weights(&self, f: impl Fn(f64) -> f64) -> Result<Self> {
        let w = self.weights.map(|v| if v > 0.0 { f(v) } else { 0.0 });
        Ok(Self {
            node_labels: self.node_labels.clone(),
            node_coords: self.node_coords.clone(),
            ..Self::new(w)?
        })
    }

    /// Relabels nodes so that old node `i` becomes node `perm[i]`.
    pub fn permuted(&self, perm: &[usize]) -> WeightedGraph {
        let n = self.n();
        let mut w = SquareMatrix::zeros(n);
        let mut labels = vec![String::new(); n];
        for i in 0..n {
            labels[perm[i]] = self.node_labels[i].clone();
            for j in 0..n {
                w.set(perm[i], perm[j], self.weight(i, j));
            }
        }
        let coords = self.node_coords.as_ref().map(|c| {
            let mut out = vec![[0.0; 3]; n];
            for i in 0..n {
                out[perm[i]] = c[i];
            }
            out
        });
        Self {
            node_labels: labels,
            node_coords: coords,
            weights: w,
        }
    }
}

/// All-pairs shortest path lengths. Unreachable pairs hold `f64::INFINITY`.
#[derive(Clone, Debug, PartialEq)]
pub struct DistanceMatrix {
    n: usize,
    dist: Vec<f64>,
}

impl DistanceMatrix {
    pub const UNREACHABLE: f64 = f64::INFINITY;

    #[inline]
    pub fn n(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.dist[i * self.n + j]
    }

    pub fn is_reachable(&self, i: usize, j: usize) -> bool {
        self.get(i, j).is_finite()
    }

    /// `sum_{i != j} 1 / d_ij / (n (n - 1))`, with unreachable pairs contributing 0.
    fn mean_inverse(&self) -> f64 {
        let n = self.n;
        let mut total = 0.0;
        for i in 0..n {
            for j in 0..n {
                if i != j {
                    total += 1.0 / self.get(i, j);
                }
            }
        }
        total / (n * (n - 1)) as f64
    }
}

/// Edges `(i, j)` with `matrix[i][j] > tau`.
pub fn threshold(matrix: &SquareMatrix, tau: f64) -> Result<BinaryGraph> {
    let m = matrix.validated_symmetric_hollow()?;
    let edges = upper_pairs(m.n()).filter(|&(i, j)| m.get(i, j) > tau);
    BinaryGraph::from_edges(m.n(), edges)
}

/// Hop-count distances by breadth-first search from every source.
pub fn shortest_paths_unweighted(g: &BinaryGraph) -> DistanceMatrix {
    let n = g.n();
    let mut dist = vec![DistanceMatrix::UNREACHABLE; n * n];
    let mut queue = VecDeque::with_capacity(n);
    for s in 0..n {
        let row = &mut dist[s * n..(s + 1) * n];
        row[s] = 0.0;
        queue.clear();
        queue.push_back(s);
        while let Some(u) = queue.pop_front() {
            let du = row[u];
            for v in g.neighbors(u) {
                if row[v].is_infinite() {
                    row[v] = du + 1.0;
                    queue.push_back(v);
                }
            }
        }
    }
    DistanceMatrix { n, dist }
}

/// Dijkstra from every source, traversing an edge of weight `w` at length `1 / w`.
pub fn shortest_paths_weighted(g: &WeightedGraph) -> DistanceMatrix {
    let n = g.n();
    let mut dist = vec![DistanceMatrix::UNREACHABLE; n * n];
    let mut done = vec![false; n];
    for s in 0..n {
        let row = &mut dist[s * n..(s + 1) * n];
        done.iter_mut().for_each(|d| *d = false);
        row[s] = 0.0;
        // Dense O(n^2) Dijkstra: the graphs here are small and often complete.
        loop {
            let mut u = usize::MAX;
            let mut best = f64::INFINITY;
            for v in 0..n {
                if !done[v] && row[v] < best {
                    best = row[v];
                    u = v;
                }
            }
            if u == usize::MAX {
                break;
            }
            done[u] = true;
            for v in 0..n {
                let w = g.weight(u, v);
                if w > 0.0 && !done[v] {
                    let alt = best + 1.0 / w;
                    if alt < row[v] {
                        row[v] = alt;
                    }
                }
            }
        }
    }
    DistanceMatrix { n, dist }
}

fn require_two_nodes(n: usize) -> Result<()> {
    if n < 2 {
        return Err(Error::Domain(format!(
            "metric needs at least 2 nodes, graph has {n}"
        )));
    }
    Ok(())
}

/// Mean inverse hop distance over ordered node pairs.
pub fn global_efficiency(g: &BinaryGraph) -> Result<f64> {
    require_two_nodes(g.n())?;
    if g.edge_count() == 0 {
        return Ok(0.0);
    }
    Ok(shortest_paths_unweighted(g).mean_inverse())
}

/// Mean over nodes of the global efficiency of each node's open
/// neighbourhood; nodes with fewer than two neighbours contribute 0.
pub fn local_efficiency(g: &BinaryGraph) -> Result<f64> {
    require_two_nodes(g.n())?;
    let mut total = 0.0;
    for v in 0..g.n() {
        let nbrs: Vec<usize> = g.neighbors(v).collect();
        if nbrs.len() >= 2 {
            total += global_efficiency(&g.induced(&nbrs))?;
        }
    }
    Ok(total / g.n() as f64)
}

/// Mean inverse weighted distance over ordered node pairs.
pub fn weighted_efficiency(g: &WeightedGraph) -> Result<f64> {
    require_two_nodes(g.n())?;
    Ok(shortest_paths_weighted(g).mean_inverse())
}

/// Mean off-diagonal weight (weighted cost).
pub fn weighted_density(g: &WeightedGraph) -> Result<f64> {
    require_two_nodes(g.n())?;
    let n = g.n();
    let sum: f64 = upper_pairs(n).map(|(i, j)| g.weight(i, j)).sum();
    Ok(2.0 * sum / (n * (n - 1)) as f64)
}

/// Whether the smallest positive weight is at least half the largest.
///
/// When this holds and every node pair carries a positive weight, no
/// two-hop detour beats a direct edge, so weighted efficiency equals
/// weighted density.
pub fn spread_condition_holds(g: &WeightedGraph) -> Result<bool> {
    let mut min = f64::INFINITY;
    let mut max = 0.0f64;
    for (i, j) in upper_pairs(g.n()) {
        let w = g.weight(i, j);
        if w > 0.0 {
            min = min.min(w);
            max = max.max(w);
        }
    }
    if max == 0.0 {
        return Err(Error::Domain("graph has no positive weights".into()));
    }
    Ok(min >= 0.5 * max)
}
