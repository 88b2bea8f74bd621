//! Embedding a bounded-degree graph with large girth as an induced subgraph
//! of a regular graph with the same girth bound.
//!
//! The host has `M` layers; vertex `(v_i, alpha)` has index `i * M + alpha`.
//! Every layer carries a copy of `H`, and extra edges only ever join two
//! copies of the same vertex, so each layer stays induced. Those extra edges
//! come from circulant shifts when that yields enough girth, and otherwise
//! from a greedy girth-checked matching inside each fibre.

use std::collections::{BTreeSet, VecDeque};

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::graph::{Girth, Graph};
use crate::verdict::Verdict;

/// Layer-count doublings tried with circulant shifts.
pub const CIRCULANT_ROUNDS: usize = 3;
/// Layer-count doublings tried with the greedy construction.
pub const GREEDY_ROUNDS: usize = 5;
/// Randomized greedy attempts per layer count.
pub const GREEDY_ATTEMPTS: u64 = 8;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum EmbedError {
    #[error("max degree {max_degree} exceeds target degree {delta}")]
    DegreeTooLarge { max_degree: usize, delta: usize },
    #[error("girth {girth} is below target {target}")]
    GirthTooSmall { girth: Girth, target: usize },
    #[error("layer count must be positive and even, got {0}")]
    BadLayerCount(usize),
    #[error("invalid shifts for vertex {vertex}: {reason}")]
    BadShifts { vertex: usize, reason: String },
    #[error("no embedding found up to {last_layers} layers")]
    RetriesExceeded { last_layers: usize },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum EmbedMethod {
    Circulant,
    Greedy,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EmbeddedGraph {
    pub graph: Graph,
    /// Number of layers `M`.
    pub layers: usize,
    /// Vertex count of `H`.
    pub base_n: usize,
    /// Per-vertex shift sets, for circulant embeddings.
    pub shifts: Option<Vec<Vec<usize>>>,
    pub method: EmbedMethod,
}

impl EmbeddedGraph {
    pub fn index(&self, v: usize, alpha: usize) -> usize {
        v * self.layers + alpha
    }

    /// Host indices of layer `alpha`, in the order of `H`'s vertices.
    pub fn layer(&self, alpha: usize) -> Vec<usize> {
        (0..self.base_n).map(|v| self.index(v, alpha)).collect()
    }

    pub fn base_layer(&self) -> Vec<usize> {
        self.layer(0)
    }

    pub fn sidecar(&self, delta: usize, girth_target: usize) -> EmbeddingSidecar {
        EmbeddingSidecar {
            version: 1,
            method: self.method,
            layers: self.layers,
            delta,
            girth_target,
            girth: self.graph.girth().finite(),
            vertex_index: "i * layers + alpha".to_string(),
            shifts: self.shifts.clone(),
            base_layer: self.base_layer(),
        }
    }
}

/// JSON written next to an embedded graph.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct EmbeddingSidecar {
    pub version: u32,
    pub method: EmbedMethod,
    pub layers: usize,
    pub delta: usize,
    pub girth_target: usize,
    pub girth: Option<usize>,
    pub vertex_index: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub shifts: Option<Vec<Vec<usize>>>,
    /// `base_layer[i]` is the host vertex playing `v_i`.
    pub base_layer: Vec<usize>,
}

/// `2 * g * (delta + 1)`, rounded up to even.
pub fn default_layers(delta: usize, girth: usize) -> usize {
    let m = (2 * girth * (delta + 1)).max(2);
    m + m % 2
}

fn check_pre(h: &Graph, delta: usize, girth: usize) -> Result<(), EmbedError> {
    let max_degree = h.max_degree();
    if max_degree > delta {
        return Err(EmbedError::DegreeTooLarge { max_degree, delta });
    }
    if !h.girth_at_least(girth) {
        return Err(EmbedError::GirthTooSmall {
            girth: h.girth(),
            target: girth,
        });
    }
    Ok(())
}

/// Builds a `delta`-regular host of girth at least `girth` with `h` induced
/// in every layer, starting from `layers_start` layers and doubling on failure.
pub fn embed(
    h: &Graph,
    delta: usize,
    girth: usize,
    layers_start: usize,
) -> Result<EmbeddedGraph, EmbedError> {
    check_pre(h, delta, girth)?;
    if layers_start == 0 || layers_start % 2 == 1 {
        return Err(EmbedError::BadLayerCount(layers_start));
    }
    let mut m = layers_start;
    for _ in 0..CIRCULANT_ROUNDS {
        if let Some(shifts) = choose_shifts(h, delta, girth, m) {
            let eg = circulant_embedding(h, delta, m, &shifts)?;
            if verify_embedding(h, &eg, delta, girth).ok() {
                return Ok(eg);
            }
        }
        m *= 2;
    }
    let mut m = layers_start;
    for _ in 0..GREEDY_ROUNDS {
        for attempt in 0..GREEDY_ATTEMPTS {
            if let Some(eg) = greedy_embedding(h, delta, girth, m, attempt) {
                if verify_embedding(h, &eg, delta, girth).ok() {
                    return Ok(eg);
                }
            }
        }
        m *= 2;
    }
    Err(EmbedError::RetriesExceeded { last_layers: m / 2 })
}

fn layered_copies(h: &Graph, m: usize) -> Vec<(usize, usize)> {
    let mut edges = Vec::with_capacity(h.edge_count() * m);
    for &(u, v) in h.edges() {
        for alpha in 0..m {
            edges.push((u * m + alpha, v * m + alpha));
        }
    }
    edges
}

fn deficiency(h: &Graph, delta: usize, v: usize) -> usize {
    delta - h.degree(v)
}

/// Layered copies plus `(v, alpha) ~ (v, alpha + s)` for every `s` in
/// `shifts[v]`. A shift `s != M/2` adds two neighbours, `M/2` adds one.
pub fn circulant_embedding(
    h: &Graph,
    delta: usize,
    layers: usize,
    shifts: &[Vec<usize>],
) -> Result<EmbeddedGraph, EmbedError> {
    let m = layers;
    if m == 0 || m % 2 == 1 {
        return Err(EmbedError::BadLayerCount(m));
    }
    if h.max_degree() > delta {
        return Err(EmbedError::DegreeTooLarge {
            max_degree: h.max_degree(),
            delta,
        });
    }
    let n = h.vertex_count();
    if shifts.len() != n {
        return Err(EmbedError::BadShifts {
            vertex: shifts.len().min(n),
            reason: format!("expected {n} shift sets, got {}", shifts.len()),
        });
    }
    let mut edges = layered_copies(h, m);
    for (v, set) in shifts.iter().enumerate() {
        let bad = |reason: String| EmbedError::BadShifts { vertex: v, reason };
        let mut seen = BTreeSet::new();
        let mut slots = 0;
        for &s in set {
            if s == 0 || s >= m {
                return Err(bad(format!("shift {s} not a nonzero residue mod {m}")));
            }
            if !seen.insert(s.min(m - s)) {
                return Err(bad(format!("shift {s} repeats (as s or M - s)")));
            }
            slots += if 2 * s == m { 1 } else { 2 };
            for alpha in 0..m {
                let beta = (alpha + s) % m;
                if 2 * s == m && beta < alpha {
                    continue;
                }
                edges.push((v * m + alpha, v * m + beta));
            }
        }
        if slots != deficiency(h, delta, v) {
            return Err(bad(format!(
                "shifts fill {slots} slots, deficiency is {}",
                deficiency(h, delta, v)
            )));
        }
    }
    let graph = Graph::new(n * m, edges).map_err(|e| EmbedError::BadShifts {
        vertex: 0,
        reason: e.to_string(),
    })?;
    Ok(EmbeddedGraph {
        graph,
        layers: m,
        base_n: n,
        shifts: Some(shifts.to_vec()),
        method: EmbedMethod::Circulant,
    })
}

/// Greedy Sidon-style shift selection: every vertex gets fresh residues in
/// `1..M/2` (never reused by another vertex), each generating a cycle of
/// length at least `girth`, with pairwise sums and differences distinct from
/// all earlier ones. `M/2` covers an odd deficiency. `None` if `M` is too small.
fn choose_shifts(h: &Graph, delta: usize, girth: usize, m: usize) -> Option<Vec<Vec<usize>>> {
    let half = m / 2;
    let mut used: BTreeSet<usize> = BTreeSet::new();
    let mut combos: BTreeSet<usize> = BTreeSet::new();
    let norm = |x: usize| x.min(m - x) % m;
    let mut out = Vec::with_capacity(h.vertex_count());
    for v in 0..h.vertex_count() {
        let d = deficiency(h, delta, v);
        let mut set = Vec::new();
        if d % 2 == 1 {
            set.push(half);
        }
        let mut candidate = 1;
        while set.len() < d.div_ceil(2) && candidate < half {
            let s = candidate;
            candidate += 1;
            let order = m / gcd(s, m);
            if used.contains(&s) || order < girth {
                continue;
            }
            let new_combos: Vec<usize> = used
                .iter()
                .flat_map(|&t| [norm((s + t) % m), norm((s + m - t) % m)])
                .collect();
            if new_combos
                .iter()
                .any(|c| *c == 0 || used.contains(c) || combos.contains(c))
                || combos.contains(&s)
            {
                continue;
            }
            used.insert(s);
            combos.extend(new_combos);
            set.push(s);
        }
        if set.len() < d.div_ceil(2) {
            return None;
        }
        set.sort_unstable();
        out.push(set);
    }
    Some(out)
}

fn gcd(a: usize, b: usize) -> usize {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

/// Randomized greedy lift: repeatedly joins a deficient copy `(v, a)` to
/// another deficient copy `(v, b)` at distance at least `girth - 1`; when no
/// partner is far enough, an existing fibre edge `xy` is swapped for `(v,a)x`
/// and `(v,b)y`. Every added edge is checked against the current graph, so
/// the result has girth at least `girth` by construction.
fn greedy_embedding(
    h: &Graph,
    delta: usize,
    girth: usize,
    m: usize,
    attempt: u64,
) -> Option<EmbeddedGraph> {
    let n = h.vertex_count();
    let total = n * m;
    let mut rng = ChaCha8Rng::seed_from_u64(attempt);
    let mut adj: Vec<Vec<usize>> = vec![Vec::new(); total];
    for (u, v) in layered_copies(h, m) {
        adj[u].push(v);
        adj[v].push(u);
    }
    let mut need: Vec<usize> = (0..total).map(|x| deficiency(h, delta, x / m)).collect();
    let far = girth.saturating_sub(1);

    for v in 0..n {
        let fibre: Vec<usize> = (0..m).map(|a| v * m + a).collect();
        // Fibre edges added so far, for the swap step.
        let mut placed: Vec<(usize, usize)> = Vec::new();
        let mut stalls = 0;
        loop {
            let mut open: Vec<usize> = fibre.iter().copied().filter(|&x| need[x] > 0).collect();
            if open.is_empty() {
                break;
            }
            open.shuffle(&mut rng);
            open.sort_by_key(|&x| std::cmp::Reverse(need[x]));
            let x = open[0];
            let near = ball(&adj, x, far.saturating_sub(1));
            let partners: Vec<usize> = open
                .iter()
                .copied()
                .filter(|&y| y != x && !near.contains(&y) && !adj[x].contains(&y))
                .collect();
            if let Some(&y) = partners.choose(&mut rng) {
                link(&mut adj, &mut need, x, y);
                placed.push((x, y));
                continue;
            }
            // Swap: y is another open copy, or x itself when it needs two more.
            let y = open
                .iter()
                .copied()
                .find(|&y| y != x)
                .or((need[x] >= 2).then_some(x))?;
            let mut order: Vec<usize> = (0..placed.len()).collect();
            order.shuffle(&mut rng);
            let mut swapped = false;
            for i in order {
                let (a, b) = placed[i];
                for (p, q) in [(a, b), (b, a)] {
                    if [p, q].iter().any(|&z| z == x || z == y) {
                        continue;
                    }
                    unlink(&mut adj, &mut need, p, q);
                    if dist_at_least(&adj, x, p, far) && !adj[x].contains(&p) {
                        link(&mut adj, &mut need, x, p);
                        if dist_at_least(&adj, y, q, far) && !adj[y].contains(&q) {
                            link(&mut adj, &mut need, y, q);
                            placed.swap_remove(i);
                            placed.push((x, p));
                            placed.push((y, q));
                            swapped = true;
                            break;
                        }
                        unlink(&mut adj, &mut need, x, p);
                    }
                    link(&mut adj, &mut need, p, q);
                }
                if swapped {
                    break;
                }
            }
            if !swapped {
                return None;
            }
            stalls += 1;
            if stalls > 4 * m * delta.max(1) {
                return None;
            }
        }
    }
    let mut edges = Vec::new();
    for (u, list) in adj.iter().enumerate() {
        edges.extend(list.iter().filter(|&&w| u < w).map(|&w| (u, w)));
    }
    let graph = Graph::new(total, edges).ok()?;
    Some(EmbeddedGraph {
        graph,
        layers: m,
        base_n: n,
        shifts: None,
        method: EmbedMethod::Greedy,
    })
}

fn link(adj: &mut [Vec<usize>], need: &mut [usize], x: usize, y: usize) {
    adj[x].push(y);
    adj[y].push(x);
    need[x] -= 1;
    need[y] -= 1;
}

fn unlink(adj: &mut [Vec<usize>], need: &mut [usize], x: usize, y: usize) {
    adj[x].retain(|&w| w != y);
    adj[y].retain(|&w| w != x);
    need[x] += 1;
    need[y] += 1;
}

/// Vertices within distance `radius` of `s`.
fn ball(adj: &[Vec<usize>], s: usize, radius: usize) -> BTreeSet<usize> {
    let mut seen = BTreeSet::from([s]);
    let mut q = VecDeque::from([(s, 0)]);
    while let Some((u, d)) = q.pop_front() {
        if d == radius {
            continue;
        }
        for &w in &adj[u] {
            if seen.insert(w) {
                q.push_back((w, d + 1));
            }
        }
    }
    seen
}

fn dist_at_least(adj: &[Vec<usize>], a: usize, b: usize, bound: usize) -> bool {
    bound == 0 || !ball(adj, a, bound - 1).contains(&b)
}

/// Checks every layer induces `h`, `delta`-regularity and girth >= `girth`.
pub fn verify_embedding(h: &Graph, eg: &EmbeddedGraph, delta: usize, girth: usize) -> Verdict {
    let mut v = Verdict::default();
    let g = &eg.graph;
    let n = h.vertex_count();
    if eg.base_n != n || g.vertex_count() != n * eg.layers {
        v.fail(format!(
            "host has {} vertices, expected {n} x {} layers",
            g.vertex_count(),
            eg.layers
        ));
        return v;
    }
    'layers: for alpha in 0..eg.layers {
        let layer = eg.layer(alpha);
        for i in 0..n {
            for j in i + 1..n {
                if g.has_edge(layer[i], layer[j]) != h.has_edge(i, j) {
                    v.fail(format!(
                        "layer {alpha} is not induced: pair ({i},{j}) differs"
                    ));
                    break 'layers;
                }
            }
        }
    }
    if let Some(x) = (0..g.vertex_count()).find(|&x| g.degree(x) != delta) {
        v.fail(format!(
            "not {delta}-regular: vertex {x} has degree {}",
            g.degree(x)
        ));
    }
    if !g.girth_at_least(girth) {
        v.fail(format!("girth violated: {} < {girth}", g.girth()));
    }
    v
}
