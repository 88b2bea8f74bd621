//! Splitting a `2k`-regular graph into `k` edge-disjoint 2-factors.
//!
//! Each component is walked along an Euler circuit and its edges oriented in
//! walking order, so every vertex has in- and out-degree `k`. The arcs then form
//! a `k`-regular bipartite graph between out-copies and in-copies of the
//! vertices, and `k` perfect matchings are peeled off one after another. A
//! perfect matching gives every vertex exactly one outgoing and one incoming
//! arc, i.e. a permutation of the vertex set with no fixed points and no
//! 2-cycles; its cycles form one 2-factor.

use std::collections::VecDeque;

use thiserror::Error;

use crate::generators::FactorizationHint;
use crate::graph::{EdgeId, Graph};
use crate::verdict::Verdict;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum FactorizeError {
    #[error("graph is not {expected}-regular")]
    NotRegular { expected: usize },
    #[error("k must be positive")]
    ZeroK,
    #[error("{{{0}, {1}}} is not an edge of the graph")]
    NotAnEdge(usize, usize),
    #[error("cycle {0:?} is shorter than 3 or repeats a vertex")]
    BadCycle(Vec<usize>),
    #[error("internal fault: no perfect matching in round {round}")]
    NoPerfectMatching { round: usize },
}

/// A cycle of some 2-factor, as a cyclic vertex sequence plus its edge ids.
/// `edges[i]` joins `vertices[i]` and `vertices[(i + 1) % len]`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Cycle {
    vertices: Vec<usize>,
    edges: Vec<EdgeId>,
}

impl Cycle {
    pub fn from_vertices(g: &Graph, vertices: Vec<usize>) -> Result<Self, FactorizeError> {
        let len = vertices.len();
        if len < 3 {
            return Err(FactorizeError::BadCycle(vertices));
        }
        let mut sorted = vertices.clone();
        sorted.sort_unstable();
        if sorted.windows(2).any(|w| w[0] == w[1]) {
            return Err(FactorizeError::BadCycle(vertices));
        }
        let mut edges = Vec::with_capacity(len);
        for i in 0..len {
            let (u, v) = (vertices[i], vertices[(i + 1) % len]);
            edges.push(g.edge_id(u, v).ok_or(FactorizeError::NotAnEdge(u, v))?);
        }
        Ok(Cycle { vertices, edges })
    }

    pub fn vertices(&self) -> &[usize] {
        &self.vertices
    }

    pub fn edges(&self) -> &[EdgeId] {
        &self.edges
    }

    pub fn len(&self) -> usize {
        self.vertices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }
}

/// One 2-factor: vertex-disjoint cycles covering every vertex.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Factor {
    pub cycles: Vec<Cycle>,
}

impl Factor {
    pub fn edge_count(&self) -> usize {
        self.cycles.iter().map(Cycle::len).sum()
    }

    pub fn edges(&self) -> impl Iterator<Item = EdgeId> + '_ {
        self.cycles.iter().flat_map(|c| c.edges.iter().copied())
    }
}

/// Position of a cycle inside a factorization.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct CycleRef {
    pub factor: usize,
    pub cycle: usize,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TwoFactorization {
    factors: Vec<Factor>,
    /// Indexed by edge id; the first cycle containing the edge.
    cycle_index: Vec<Option<CycleRef>>,
}

impl TwoFactorization {
    /// Assembles a factorization from raw cycles without checking the
    /// 2-factor invariants; see [`verify_two_factorization`].
    pub fn from_cycles(g: &Graph, factors: Vec<Vec<Vec<usize>>>) -> Result<Self, FactorizeError> {
        let factors = factors
            .into_iter()
            .map(|cycles| {
                let cycles = cycles
                    .into_iter()
                    .map(|c| Cycle::from_vertices(g, c))
                    .collect::<Result<Vec<_>, _>>()?;
                Ok(Factor { cycles })
            })
            .collect::<Result<Vec<_>, _>>()?;
        let mut cycle_index = vec![None; g.edge_count()];
        for (fi, f) in factors.iter().enumerate() {
            for (ci, c) in f.cycles.iter().enumerate() {
                for e in &c.edges {
                    cycle_index[e.0].get_or_insert(CycleRef {
                        factor: fi,
                        cycle: ci,
                    });
                }
            }
        }
        Ok(TwoFactorization {
            factors,
            cycle_index,
        })
    }

    pub fn from_hint(g: &Graph, hint: &FactorizationHint) -> Result<Self, FactorizeError> {
        let factors = hint
            .factors
            .iter()
            .map(|f| f.iter().map(|c| canonical_rotation(c.clone())).collect())
            .collect();
        Self::from_cycles(g, factors)
    }

    pub fn k(&self) -> usize {
        self.factors.len()
    }

    pub fn factors(&self) -> &[Factor] {
        &self.factors
    }

    pub fn cycle(&self, r: CycleRef) -> &Cycle {
        &self.factors[r.factor].cycles[r.cycle]
    }

    /// Every cycle with its position, factor by factor.
    pub fn cycles(&self) -> impl Iterator<Item = (CycleRef, &Cycle)> + '_ {
        self.factors.iter().enumerate().flat_map(|(fi, f)| {
            f.cycles.iter().enumerate().map(move |(ci, c)| {
                (
                    CycleRef {
                        factor: fi,
                        cycle: ci,
                    },
                    c,
                )
            })
        })
    }

    pub fn cycle_count(&self) -> usize {
        self.factors.iter().map(|f| f.cycles.len()).sum()
    }

    pub fn cycle_of(&self, e: EdgeId) -> Option<CycleRef> {
        self.cycle_index.get(e.0).copied().flatten()
    }

    pub fn shortest_cycle(&self) -> Option<usize> {
        self.cycles().map(|(_, c)| c.len()).min()
    }

    /// Raw vertex sequences, `[factor][cycle][position]`.
    pub fn vertex_lists(&self) -> Vec<Vec<Vec<usize>>> {
        self.factors
            .iter()
            .map(|f| f.cycles.iter().map(|c| c.vertices.clone()).collect())
            .collect()
    }
}

/// Decomposes a `2k`-regular graph into `k` edge-disjoint 2-factors.
pub fn two_factorize(g: &Graph, k: usize) -> Result<TwoFactorization, FactorizeError> {
    if k == 0 {
        return Err(FactorizeError::ZeroK);
    }
    if !g.is_regular(2 * k) {
        return Err(FactorizeError::NotRegular { expected: 2 * k });
    }
    let n = g.vertex_count();
    let arcs = euler_orientation(g);

    // out_arcs[u] = heads of arcs leaving u, sorted for a deterministic scan.
    let mut out_arcs = vec![Vec::with_capacity(k); n];
    for &(u, v) in &arcs {
        out_arcs[u].push(v);
    }
    for a in &mut out_arcs {
        a.sort_unstable();
    }

    let mut factors = Vec::with_capacity(k);
    for round in 0..k {
        let succ =
            perfect_matching(&out_arcs).ok_or(FactorizeError::NoPerfectMatching { round })?;
        for (u, &v) in succ.iter().enumerate() {
            let pos = out_arcs[u].binary_search(&v).expect("matched arc exists");
            out_arcs[u].remove(pos);
        }
        factors.push(permutation_cycles(&succ));
    }
    TwoFactorization::from_cycles(g, factors)
}

/// Orients every edge along an Euler circuit of its component (Hierholzer).
fn euler_orientation(g: &Graph) -> Vec<(usize, usize)> {
    let n = g.vertex_count();
    let mut used = vec![false; g.edge_count()];
    let mut next = vec![0usize; n];
    let mut arcs = Vec::with_capacity(g.edge_count());

    for root in 0..n {
        if next[root] >= g.degree(root) {
            continue;
        }
        // Stack of (vertex, edge used to arrive); popping yields the circuit in reverse.
        let mut stack: Vec<(usize, Option<EdgeId>)> = vec![(root, None)];
        let mut circuit: Vec<(usize, Option<EdgeId>)> = Vec::new();
        while let Some(&(u, _)) = stack.last() {
            let nbrs = g.neighbors(u);
            let mut advanced = false;
            while next[u] < nbrs.len() {
                let w = nbrs[next[u]];
                next[u] += 1;
                let e = g.edge_id(u, w).expect("neighbor edge exists");
                if !used[e.0] {
                    used[e.0] = true;
                    stack.push((w, Some(e)));
                    advanced = true;
                    break;
                }
            }
            if !advanced {
                circuit.push(stack.pop().expect("non-empty stack"));
            }
        }
        circuit.reverse();
        for pair in circuit.windows(2) {
            arcs.push((pair[0].0, pair[1].0));
        }
    }
    arcs
}

/// Hopcroft–Karp on the bipartite graph `left u -> right v` for `v` in `adj[u]`.
/// Returns `succ` with `succ[u]` the right vertex matched to `u`, or `None`
/// if no perfect matching exists.
fn perfect_matching(adj: &[Vec<usize>]) -> Option<Vec<usize>> {
    const NIL: usize = usize::MAX;
    let n = adj.len();
    let mut match_l = vec![NIL; n];
    let mut match_r = vec![NIL; n];
    let mut dist = vec![0usize; n];
    let mut size = 0;

    loop {
        // BFS layers from free left vertices.
        let mut queue = VecDeque::new();
        for u in 0..n {
            if match_l[u] == NIL {
                dist[u] = 0;
                queue.push_back(u);
            } else {
                dist[u] = usize::MAX;
            }
        }
        let mut found = false;
        while let Some(u) = queue.pop_front() {
            for &v in &adj[u] {
                let w = match_r[v];
                if w == NIL {
                    found = true;
                } else if dist[w] == usize::MAX {
                    dist[w] = dist[u] + 1;
                    queue.push_back(w);
                }
            }
        }
        if !found {
            break;
        }
        let mut it = vec![0usize; n];
        for u in 0..n {
            if match_l[u] == NIL && augment(u, adj, &mut match_l, &mut match_r, &mut dist, &mut it)
            {
                size += 1;
            }
        }
    }
    (size == n).then_some(match_l)
}

fn augment(
    root: usize,
    adj: &[Vec<usize>],
    match_l: &mut [usize],
    match_r: &mut [usize],
    dist: &mut [usize],
    it: &mut [usize],
) -> bool {
    const NIL: usize = usize::MAX;
    // Iterative DFS over the layered graph.
    let mut path: Vec<usize> = vec![root];
    while let Some(&u) = path.last() {
        if it[u] == adj[u].len() {
            dist[u] = usize::MAX;
            path.pop();
            continue;
        }
        let v = adj[u][it[u]];
        let w = match_r[v];
        if w == NIL {
            // Flip along the path: each left vertex takes its current candidate.
            for &x in path.iter().rev() {
                let y = adj[x][it[x]];
                match_r[y] = x;
                match_l[x] = y;
            }
            return true;
        }
        if dist[w] == dist[u].wrapping_add(1) {
            path.push(w);
        } else {
            it[u] += 1;
        }
    }
    false
}

/// Cycles of a fixed-point-free permutation, each in canonical rotation,
/// ordered by smallest vertex.
fn permutation_cycles(succ: &[usize]) -> Vec<Vec<usize>> {
    let mut seen = vec![false; succ.len()];
    let mut cycles = Vec::new();
    for start in 0..succ.len() {
        if seen[start] {
            continue;
        }
        let mut cyc = Vec::new();
        let mut v = start;
        while !seen[v] {
            seen[v] = true;
            cyc.push(v);
            v = succ[v];
        }
        cycles.push(canonical_rotation(cyc));
    }
    cycles
}

/// Rotates a cycle to start at its smallest vertex, oriented towards the
/// smaller of that vertex's two cycle neighbours.
pub fn canonical_rotation(mut cyc: Vec<usize>) -> Vec<usize> {
    if cyc.is_empty() {
        return cyc;
    }
    let pos = (0..cyc.len()).min_by_key(|&i| cyc[i]).expect("non-empty");
    cyc.rotate_left(pos);
    if cyc.len() > 2 && cyc[cyc.len() - 1] < cyc[1] {
        cyc[1..].reverse();
    }
    cyc
}

/// Checks every 2-factorization invariant against `g`. Failures are listed in
/// the order: edge-disjointness, coverage, per-factor 2-regularity.
pub fn verify_two_factorization(g: &Graph, tf: &TwoFactorization) -> Verdict {
    let mut verdict = Verdict::default();
    let mut uses = vec![0usize; g.edge_count()];
    for (_, c) in tf.cycles() {
        for e in c.edges() {
            uses[e.0] += 1;
        }
    }
    if let Some(e) = (0..uses.len()).find(|&e| uses[e] > 1) {
        let (u, v) = g.edge(EdgeId(e));
        verdict.fail(format!(
            "edge-disjointness violated: edge {{{u}, {v}}} lies on {} cycles",
            uses[e]
        ));
    }
    if let Some(e) = (0..uses.len()).find(|&e| uses[e] == 0) {
        let (u, v) = g.edge(EdgeId(e));
        verdict.fail(format!(
            "union does not cover E(G): edge {{{u}, {v}}} is in no factor"
        ));
    }
    for (fi, f) in tf.factors().iter().enumerate() {
        let mut cover = vec![0usize; g.vertex_count()];
        for c in &f.cycles {
            for &v in c.vertices() {
                cover[v] += 1;
            }
        }
        if let Some(v) = (0..cover.len()).find(|&v| cover[v] != 1) {
            verdict.fail(format!(
                "factor {fi} is not a 2-factor: vertex {v} lies on {} of its cycles",
                cover[v]
            ));
        }
    }
    verdict
}
