//! Undirected simple graphs over agent indices.
//!
//! Three generators are provided: the complete graph, the Watts–Strogatz
//! small-world model and Barabási–Albert preferential attachment. Graphs are
//! immutable once built and are plain data, so they can be shared freely
//! between threads.

use std::collections::VecDeque;
use std::io::{BufRead, Write};

use rand::Rng;

use crate::error::{Error, Result};

/// Undirected simple graph on nodes `0..node_count`.
///
/// Adjacency lists are kept sorted, which makes neighbor iteration order
/// (and hence every summation over neighbors) deterministic.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Graph {
    adjacency: Vec<Vec<usize>>,
    edge_count: usize,
}

impl Graph {
    /// Graph with `n` nodes and no edges.
    pub fn empty(n: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::config("graph must have at least one node"));
        }
        Ok(Graph {
            adjacency: vec![Vec::new(); n],
            edge_count: 0,
        })
    }

    /// Builds a graph from an edge list, rejecting self-loops, duplicates and
    /// out-of-range endpoints.
    pub fn from_edges<I>(n: usize, edges: I) -> Result<Self>
    where
        I: IntoIterator<Item = (usize, usize)>,
    {
        let mut builder = Builder::new(n)?;
        for (u, v) in edges {
            if u >= n || v >= n {
                return Err(Error::config(format!(
                    "edge ({u}, {v}) has an endpoint >= node count {n}"
                )));
            }
            if u == v {
                return Err(Error::config(format!("self-loop at node {u}")));
            }
            if !builder.insert(u, v) {
                return Err(Error::config(format!("duplicate edge ({u}, {v})")));
            }
        }
        Ok(builder.finish())
    }

    pub fn node_count(&self) -> usize {
        self.adjacency.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edge_count
    }

    /// Sorted neighbors of `u`.
    pub fn neighbors(&self, u: usize) -> &[usize] {
        &self.adjacency[u]
    }

    pub fn degree(&self, u: usize) -> usize {
        self.adjacency[u].len()
    }

    pub fn max_degree(&self) -> usize {
        self.adjacency.iter().map(Vec::len).max().unwrap_or(0)
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        u < self.node_count() && v < self.node_count() && self.adjacency[u].binary_search(&v).is_ok()
    }

    /// Edges as `(u, v)` with `u < v`, in lexicographic order.
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.adjacency
            .iter()
            .enumerate()
            .flat_map(|(u, nbrs)| nbrs.iter().filter(move |&&v| v > u).map(move |&v| (u, v)))
    }

    /// Whether every pair of distinct nodes is adjacent.
    pub fn is_complete(&self) -> bool {
        let n = self.node_count();
        self.edge_count == n * (n - 1) / 2
    }

    pub fn component_count(&self) -> usize {
        let n = self.node_count();
        let mut seen = vec![false; n];
        let mut queue = VecDeque::new();
        let mut components = 0;
        for start in 0..n {
            if seen[start] {
                continue;
            }
            components += 1;
            seen[start] = true;
            queue.push_back(start);
            while let Some(u) = queue.pop_front() {
                for &v in &self.adjacency[u] {
                    if !seen[v] {
                        seen[v] = true;
                        queue.push_back(v);
                    }
                }
            }
        }
        components
    }

    /// Relabels nodes so that old node `u` becomes `perm[u]`.
    pub fn permuted(&self, perm: &[usize]) -> Result<Self> {
        if perm.len() != self.node_count() {
            return Err(Error::contract("permutation length differs from node count"));
        }
        Graph::from_edges(self.node_count(), self.edges().map(|(u, v)| (perm[u], perm[v])))
    }
}

/// Incremental construction over sorted adjacency lists.
struct Builder {
    adjacency: Vec<Vec<usize>>,
    edge_count: usize,
}

impl Builder {
    fn new(n: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::config("graph must have at least one node"));
        }
        Ok(Builder {
            adjacency: vec![Vec::new(); n],
            edge_count: 0,
        })
    }

    fn contains(&self, u: usize, v: usize) -> bool {
        self.adjacency[u].binary_search(&v).is_ok()
    }

    /// Returns false if the edge already exists.
    fn insert(&mut self, u: usize, v: usize) -> bool {
        match self.adjacency[u].binary_search(&v) {
            Ok(_) => false,
            Err(pos) => {
                self.adjacency[u].insert(pos, v);
                let pos = self.adjacency[v].binary_search(&u).unwrap_err();
                self.adjacency[v].insert(pos, u);
                self.edge_count += 1;
                true
            }
        }
    }

    fn remove(&mut self, u: usize, v: usize) {
        if let Ok(pos) = self.adjacency[u].binary_search(&v) {
            self.adjacency[u].remove(pos);
            let pos = self.adjacency[v].binary_search(&u).expect("asymmetric adjacency");
            self.adjacency[v].remove(pos);
            self.edge_count -= 1;
        }
    }

    fn degree(&self, u: usize) -> usize {
        self.adjacency[u].len()
    }

    fn finish(self) -> Graph {
        Graph {
            adjacency: self.adjacency,
            edge_count: self.edge_count,
        }
    }
}

/// The complete graph K_n.
pub fn complete_graph(n: usize) -> Result<Graph> {
    if n == 0 {
        return Err(Error::config("complete graph needs n >= 1"));
    }
    let adjacency = (0..n)
        .map(|u| (0..n).filter(|&v| v != u).collect())
        .collect();
    Ok(Graph {
        adjacency,
        edge_count: n * (n - 1) / 2,
    })
}

/// Watts–Strogatz small-world graph SW(n, k, p).
///
/// Starts from a ring lattice where each node links to its `k/2` nearest
/// neighbors on either side, then visits every lattice edge `(u, u+j)` once
/// (by offset `j`, then by node `u`) and with probability `p` replaces its far
/// endpoint by a uniformly drawn node. Draws that would create a self-loop or
/// a duplicate edge are rejected; if `u` is already adjacent to every other
/// node the edge is kept. The edge count is always `n*k/2`.
pub fn watts_strogatz<R: Rng + ?Sized>(n: usize, k: usize, p: f64, rng: &mut R) -> Result<Graph> {
    if k < 2 {
        return Err(Error::config("k must be at least 2"));
    }
    if !k.is_multiple_of(2) {
        return Err(Error::config("k must be even"));
    }
    if n <= k {
        return Err(Error::config(format!("n must exceed k (n = {n}, k = {k})")));
    }
    if !(0.0..=1.0).contains(&p) {
        return Err(Error::config(format!("p must lie in [0, 1], got {p}")));
    }

    let mut builder = Builder::new(n)?;
    for u in 0..n {
        for j in 1..=k / 2 {
            builder.insert(u, (u + j) % n);
        }
    }

    for j in 1..=k / 2 {
        for u in 0..n {
            let v = (u + j) % n;
            if !rng.gen_bool(p) {
                continue;
            }
            if builder.degree(u) >= n - 1 {
                continue;
            }
            let w = loop {
                let w = rng.gen_range(0..n);
                if w != u && !builder.contains(u, w) {
                    break w;
                }
            };
            builder.remove(u, v);
            builder.insert(u, w);
        }
    }
    Ok(builder.finish())
}

/// Barabási–Albert scale-free graph SF(n, m0, m).
///
/// Grows from K_{m0}; each new node attaches to `m` distinct existing nodes
/// drawn with probability proportional to their current degree. Duplicate
/// draws are redrawn. When every existing node has degree zero (only possible
/// for `m0 = 1`) targets are drawn uniformly.
pub fn barabasi_albert<R: Rng + ?Sized>(n: usize, m0: usize, m: usize, rng: &mut R) -> Result<Graph> {
    if m == 0 {
        return Err(Error::config("m must be at least 1"));
    }
    if m0 < m {
        return Err(Error::config(format!("m0 must be >= m (m0 = {m0}, m = {m})")));
    }
    if n < m0 {
        return Err(Error::config(format!("n must be >= m0 (n = {n}, m0 = {m0})")));
    }

    let mut builder = Builder::new(n)?;
    // Each node appears once per incident edge end.
    let mut endpoints: Vec<usize> = Vec::with_capacity(2 * (m0 * m0 + n * m));
    for u in 0..m0 {
        for v in u + 1..m0 {
            builder.insert(u, v);
            endpoints.push(u);
            endpoints.push(v);
        }
    }

    let mut targets: Vec<usize> = Vec::with_capacity(m);
    for new in m0..n {
        targets.clear();
        while targets.len() < m {
            let t = if endpoints.is_empty() {
                rng.gen_range(0..new)
            } else {
                endpoints[rng.gen_range(0..endpoints.len())]
            };
            if !targets.contains(&t) {
                targets.push(t);
            }
        }
        for &t in &targets {
            builder.insert(new, t);
            endpoints.push(new);
            endpoints.push(t);
        }
    }
    Ok(builder.finish())
}

/// Writes the edge-list text format: the node count on the first line, then
/// one `u v` line (with `u < v`) per edge.
pub fn write_edge_list<W: Write>(graph: &Graph, mut sink: W) -> Result<()> {
    writeln!(sink, "{}", graph.node_count())?;
    for (u, v) in graph.edges() {
        writeln!(sink, "{u} {v}")?;
    }
    sink.flush()?;
    Ok(())
}

/// Parses the edge-list text format. Blank lines are ignored.
pub fn read_edge_list<R: BufRead>(source: R) -> Result<Graph> {
    let mut lines = source.lines().enumerate();
    let n = loop {
        let Some((idx, line)) = lines.next() else {
            return Err(Error::EdgeList {
                line: 1,
                reason: "missing node-count header".into(),
            });
        };
        let line = line?;
        let trimmed = line.trim();
        if trimmed.is_empty() {
            continue;
        }
        let n: usize = trimmed.parse().map_err(|_| Error::EdgeList {
            line: idx + 1,
            reason: format!("invalid node count {trimmed:?}"),
        })?;
        if n == 0 {
            return Err(Error::EdgeList {
                line: idx + 1,
                reason: "node count must be positive".into(),
            });
        }
        break n;
    };

    let mut builder = Builder::new(n)?;
    for (idx, line) in lines {
        let line = line?;
        let lineno = idx + 1;
        let trimmed = line.trim();
        if trimmed.is_empty() {
            continue;
        }
        let err = |reason: String| Error::EdgeList { line: lineno, reason };
        let mut fields = trimmed.split_whitespace();
        let (Some(a), Some(b), None) = (fields.next(), fields.next(), fields.next()) else {
            return Err(err(format!("expected two endpoints, got {trimmed:?}")));
        };
        let u: usize = a.parse().map_err(|_| err(format!("invalid endpoint {a:?}")))?;
        let v: usize = b.parse().map_err(|_| err(format!("invalid endpoint {b:?}")))?;
        if u >= n || v >= n {
            return Err(err(format!("endpoint out of range for {n} nodes")));
        }
        if u == v {
            return Err(err(format!("self-loop at node {u}")));
        }
        if !builder.insert(u, v) {
            return Err(err(format!("duplicate edge {u} {v}")));
        }
    }
    Ok(builder.finish())
}
