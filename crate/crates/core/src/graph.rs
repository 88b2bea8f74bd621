//! Simple undirected graphs with a canonical edge order.
//!
//! Vertices are dense indices `0..n`. Edges are stored once, as `(u, v)` with
//! `u < v`, sorted lexicographically; the position of an edge in that order is
//! its [`EdgeId`]. Every other module refers to edges through these ids, so the
//! ordering is part of the certificate format and must not change.

use std::collections::VecDeque;
use std::fmt;

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};
use thiserror::Error;

/// Name of the hash used for graph digests, recorded in certificate headers.
pub const DIGEST_ALGORITHM: &str = "sha256";

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GraphError {
    #[error("self-loop at vertex {0}")]
    SelfLoop(usize),
    #[error("duplicate edge {{{0}, {1}}}")]
    DuplicateEdge(usize, usize),
    #[error("vertex {vertex} out of range for a graph on {n} vertices")]
    VertexOutOfRange { vertex: usize, n: usize },
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ParseError {
    #[error("line {line}: malformed header, expected \"n m\"")]
    MalformedHeader { line: usize },
    #[error("missing header line")]
    MissingHeader,
    #[error("line {line}: malformed edge, expected \"u v\"")]
    MalformedEdge { line: usize },
    #[error("line {line}: {source}")]
    Invalid {
        line: usize,
        #[source]
        source: GraphError,
    },
    #[error("expected {expected} edges, found {found}")]
    EdgeCount { expected: usize, found: usize },
}

/// Index of an edge in the canonical (lexicographic) edge order.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct EdgeId(pub usize);

impl EdgeId {
    #[inline]
    pub fn index(self) -> usize {
        self.0
    }
}

impl fmt::Display for EdgeId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "e{}", self.0)
    }
}

/// Length of the shortest cycle. `Infinite` sorts after every finite value.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Girth {
    Finite(usize),
    Infinite,
}

impl Girth {
    pub fn finite(self) -> Option<usize> {
        match self {
            Girth::Finite(g) => Some(g),
            Girth::Infinite => None,
        }
    }

    /// `true` when every cycle has length at least `bound`.
    pub fn at_least(self, bound: usize) -> bool {
        match self {
            Girth::Finite(g) => g >= bound,
            Girth::Infinite => true,
        }
    }
}

impl fmt::Display for Girth {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Girth::Finite(g) => write!(f, "{g}"),
            Girth::Infinite => f.write_str("inf"),
        }
    }
}

/// An immutable simple undirected graph.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Graph {
    n: usize,
    edges: Vec<(usize, usize)>,
    adj: Vec<Vec<usize>>,
}

impl Graph {
    /// Builds a graph, rejecting loops, parallel edges and out-of-range endpoints.
    /// Endpoint order and edge order in the input do not matter.
    pub fn new<I>(n: usize, edges: I) -> Result<Self, GraphError>
    where
        I: IntoIterator<Item = (usize, usize)>,
    {
        let mut list = Vec::new();
        for (u, v) in edges {
            check_edge(n, u, v)?;
            list.push(if u < v { (u, v) } else { (v, u) });
        }
        list.sort_unstable();
        if let Some(w) = list.windows(2).find(|w| w[0] == w[1]) {
            return Err(GraphError::DuplicateEdge(w[0].0, w[0].1));
        }
        Ok(Self::from_sorted(n, list))
    }

    /// `list` must already be canonical: `u < v`, sorted, no duplicates.
    fn from_sorted(n: usize, edges: Vec<(usize, usize)>) -> Self {
        let mut adj = vec![Vec::new(); n];
        for &(u, v) in &edges {
            adj[u].push(v);
            adj[v].push(u);
        }
        for a in &mut adj {
            a.sort_unstable();
        }
        Graph { n, edges, adj }
    }

    pub fn empty(n: usize) -> Self {
        Self::from_sorted(n, Vec::new())
    }

    #[inline]
    pub fn vertex_count(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    /// Canonical edge list; `edges()[id.0]` is the edge with that id.
    #[inline]
    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    #[inline]
    pub fn edge(&self, id: EdgeId) -> (usize, usize) {
        self.edges[id.0]
    }

    pub fn edge_ids(&self) -> impl Iterator<Item = EdgeId> + '_ {
        (0..self.edges.len()).map(EdgeId)
    }

    /// Looks up the id of `{u, v}`; endpoint order is irrelevant.
    pub fn edge_id(&self, u: usize, v: usize) -> Option<EdgeId> {
        let key = if u < v { (u, v) } else { (v, u) };
        self.edges.binary_search(&key).ok().map(EdgeId)
    }

    #[inline]
    pub fn neighbors(&self, v: usize) -> &[usize] {
        &self.adj[v]
    }

    #[inline]
    pub fn degree(&self, v: usize) -> usize {
        self.adj[v].len()
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        u < self.n && v < self.n && self.adj[u].binary_search(&v).is_ok()
    }

    pub fn max_degree(&self) -> usize {
        self.adj.iter().map(Vec::len).max().unwrap_or(0)
    }

    pub fn is_regular(&self, r: usize) -> bool {
        self.adj.iter().all(|a| a.len() == r)
    }

    /// Connected components as sorted vertex lists, ordered by smallest vertex.
    pub fn components(&self) -> Vec<Vec<usize>> {
        let mut seen = vec![false; self.n];
        let mut out = Vec::new();
        for root in 0..self.n {
            if seen[root] {
                continue;
            }
            seen[root] = true;
            let mut comp = vec![root];
            let mut stack = vec![root];
            while let Some(u) = stack.pop() {
                for &w in &self.adj[u] {
                    if !seen[w] {
                        seen[w] = true;
                        comp.push(w);
                        stack.push(w);
                    }
                }
            }
            comp.sort_unstable();
            out.push(comp);
        }
        out
    }

    /// Exact girth by a breadth-first search from every vertex.
    pub fn girth(&self) -> Girth {
        self.shortest_cycle_below(usize::MAX)
            .map_or(Girth::Infinite, Girth::Finite)
    }

    /// `true` iff the graph has no cycle shorter than `bound`. Cheaper than
    /// [`Graph::girth`] for large graphs since each search stops at depth `bound / 2`.
    pub fn girth_at_least(&self, bound: usize) -> bool {
        bound <= 3 || self.shortest_cycle_below(bound).is_none()
    }

    /// Shortest cycle of length `< limit`, if any.
    fn shortest_cycle_below(&self, limit: usize) -> Option<usize> {
        let mut best = limit;
        let mut dist = vec![usize::MAX; self.n];
        let mut parent = vec![usize::MAX; self.n];
        let mut touched = Vec::new();
        let mut queue = VecDeque::new();
        for root in 0..self.n {
            if best == 3 {
                break;
            }
            for &v in &touched {
                dist[v] = usize::MAX;
                parent[v] = usize::MAX;
            }
            touched.clear();
            queue.clear();
            dist[root] = 0;
            touched.push(root);
            queue.push_back(root);
            'bfs: while let Some(u) = queue.pop_front() {
                // Any cycle closed from here has length >= 2 * dist[u] + 1.
                if 2 * dist[u] + 1 >= best {
                    break;
                }
                for &w in &self.adj[u] {
                    if dist[w] == usize::MAX {
                        dist[w] = dist[u] + 1;
                        parent[w] = u;
                        touched.push(w);
                        queue.push_back(w);
                    } else if parent[u] != w {
                        let len = dist[u] + dist[w] + 1;
                        if len < best {
                            best = len;
                        }
                        if best == 3 {
                            break 'bfs;
                        }
                    }
                }
            }
        }
        (best < limit).then_some(best)
    }

    /// Subgraph on the same vertex set keeping only the listed edges.
    pub fn edge_subgraph(&self, ids: &[EdgeId]) -> Graph {
        let mut list: Vec<(usize, usize)> = ids.iter().map(|&e| self.edges[e.0]).collect();
        list.sort_unstable();
        list.dedup();
        Self::from_sorted(self.n, list)
    }

    /// Degree of every vertex in the subgraph formed by `ids`.
    pub fn degrees_in(&self, ids: &[EdgeId]) -> Vec<usize> {
        let mut deg = vec![0; self.n];
        for &e in ids {
            let (u, v) = self.edges[e.0];
            deg[u] += 1;
            deg[v] += 1;
        }
        deg
    }

    /// Canonical edge-list serialization: header, then edges in id order, LF endings.
    pub fn serialize(&self) -> String {
        let mut out = String::with_capacity(8 * (self.edges.len() + 1));
        out.push_str(&format!("{} {}\n", self.n, self.edges.len()));
        for &(u, v) in &self.edges {
            out.push_str(&format!("{u} {v}\n"));
        }
        out
    }

    /// Hex SHA-256 of [`Graph::serialize`].
    pub fn digest(&self) -> String {
        hex::encode(Sha256::digest(self.serialize().as_bytes()))
    }

    /// Parses the edge-list format. Lines starting with `#` and blank lines are
    /// skipped; the first remaining line is `n m`, followed by exactly `m` edges.
    pub fn parse(text: &str) -> Result<Self, ParseError> {
        let mut lines = text
            .lines()
            .enumerate()
            .map(|(i, l)| (i + 1, l.trim()))
            .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'));

        let (hline, header) = lines.next().ok_or(ParseError::MissingHeader)?;
        let (n, m) = parse_pair(header).ok_or(ParseError::MalformedHeader { line: hline })?;

        let mut list = Vec::with_capacity(m);
        let mut seen = std::collections::HashMap::with_capacity(m);
        for (line, text) in lines {
            let (u, v) = parse_pair(text).ok_or(ParseError::MalformedEdge { line })?;
            check_edge(n, u, v).map_err(|source| ParseError::Invalid { line, source })?;
            let key = if u < v { (u, v) } else { (v, u) };
            if seen.insert(key, line).is_some() {
                return Err(ParseError::Invalid {
                    line,
                    source: GraphError::DuplicateEdge(key.0, key.1),
                });
            }
            list.push(key);
        }
        if list.len() != m {
            return Err(ParseError::EdgeCount {
                expected: m,
                found: list.len(),
            });
        }
        list.sort_unstable();
        Ok(Self::from_sorted(n, list))
    }
}

fn check_edge(n: usize, u: usize, v: usize) -> Result<(), GraphError> {
    for x in [u, v] {
        if x >= n {
            return Err(GraphError::VertexOutOfRange { vertex: x, n });
        }
    }
    if u == v {
        return Err(GraphError::SelfLoop(u));
    }
    Ok(())
}

fn parse_pair(line: &str) -> Option<(usize, usize)> {
    let mut it = line.split_whitespace();
    let a = it.next()?.parse().ok()?;
    let b = it.next()?.parse().ok()?;
    it.next().is_none().then_some((a, b))
}

impl fmt::Display for Graph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.serialize())
    }
}

/// Sorts an edge-id list and removes duplicates.
pub(crate) fn normalize_ids(ids: &mut Vec<EdgeId>) {
    ids.sort_unstable();
    ids.dedup();
}
