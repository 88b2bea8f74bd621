//! Linear-forest decompositions and the end-to-end pipeline.
//!
//! The pipeline for a `2k`-regular graph: measure the girth, plan the regime,
//! split into `k` 2-factors, pick a transversal `H` meeting every factor cycle,
//! take `L_i = F_i \ H` (each a linear forest because every cycle lost an
//! edge), and split `H` itself into as few linear forests as the ladder in
//! [`decompose_h`] manages. The result is packaged as a
//! [`DecompositionCertificate`] and re-checked by [`crate::verify`].

use std::fmt;
use std::time::{Duration, Instant};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::factorize::{two_factorize, FactorizeError, TwoFactorization};
use crate::graph::{normalize_ids, EdgeId, Graph, DIGEST_ALGORITHM};
use crate::transversal::{
    plan_regime, solve_paper, solve_strict, PaperOutcome, RegimePlan, RegimeTag, StrictOutcome,
    Transversal, TransversalError, TransversalMode, DEFAULT_C_MAX, DEFAULT_STRICT_BUDGET,
};
use crate::verify::verify_certificate;

pub const CERTIFICATE_VERSION: u32 = 1;
pub const DEFAULT_EXACT_BUDGET: Duration = Duration::from_secs(10);

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ForestError {
    #[error("cycle ({factor},{cycle}) is not broken by the transversal")]
    CycleUnbroken { factor: usize, cycle: usize },
}

#[derive(Debug, Error)]
pub enum DecomposeError {
    #[error("graph is not {expected}-regular")]
    NotRegular { expected: usize },
    #[error("graph has no edges")]
    Empty,
    #[error(transparent)]
    Factorize(#[from] FactorizeError),
    #[error(transparent)]
    Regime(#[from] TransversalError),
    #[error("strict transversal search failed for every delta in {from}..={to}")]
    StrictExhausted { from: usize, to: usize },
    #[error(transparent)]
    Residual(#[from] ForestError),
}

/// A set of edges whose subgraph is a disjoint union of paths.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct LinearForest {
    pub edges: Vec<EdgeId>,
}

impl LinearForest {
    pub fn new(mut edges: Vec<EdgeId>) -> Self {
        normalize_ids(&mut edges);
        LinearForest { edges }
    }

    pub fn len(&self) -> usize {
        self.edges.len()
    }

    pub fn is_empty(&self) -> bool {
        self.edges.is_empty()
    }
}

/// Max degree at most 2 and no cycle.
pub fn is_linear_forest(g: &Graph, edges: &[EdgeId]) -> bool {
    let deg = g.degrees_in(edges);
    if deg.iter().any(|&d| d > 2) {
        return false;
    }
    let mut dsu = Dsu::new(g.vertex_count());
    edges.iter().all(|&e| {
        let (u, v) = g.edge(e);
        dsu.union(u, v)
    })
}

/// `L_i = F_i \ H` for every factor, checked to be linear forests.
pub fn residual_forests(
    g: &Graph,
    tf: &TwoFactorization,
    h: &Transversal,
) -> Result<Vec<LinearForest>, ForestError> {
    let mut in_h = vec![false; g.edge_count()];
    for e in &h.edges {
        in_h[e.0] = true;
    }
    let mut out = Vec::with_capacity(tf.k());
    for (fi, f) in tf.factors().iter().enumerate() {
        let mut edges = Vec::with_capacity(f.edge_count());
        for (ci, c) in f.cycles.iter().enumerate() {
            if !c.edges().iter().any(|e| in_h[e.0]) {
                return Err(ForestError::CycleUnbroken {
                    factor: fi,
                    cycle: ci,
                });
            }
            edges.extend(c.edges().iter().copied().filter(|e| !in_h[e.0]));
        }
        let forest = LinearForest::new(edges);
        debug_assert!(is_linear_forest(g, &forest.edges));
        out.push(forest);
    }
    Ok(out)
}

/// Which step of the ladder produced a decomposition of `H`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "rung", rename_all = "snake_case")]
pub enum Rung {
    /// `H` is empty.
    Empty,
    /// Max degree <= 1: `H` is one forest.
    Identity,
    /// Max degree <= 2: one edge removed from every cycle component.
    PathsAndCycles,
    /// Exact branch and bound succeeded with `target` forests.
    Exact { target: usize },
    /// Budget ran out; recursive Euler halving into `leaves` parts of degree <= 2.
    EulerSplit { leaves: usize },
}

impl fmt::Display for Rung {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Rung::Empty => f.write_str("empty"),
            Rung::Identity => f.write_str("identity"),
            Rung::PathsAndCycles => f.write_str("paths-and-cycles"),
            Rung::Exact { target } => write!(f, "exact({target})"),
            Rung::EulerSplit { leaves } => write!(f, "euler-split({leaves} leaves)"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HDecomposition {
    pub forests: Vec<LinearForest>,
    pub rung: Rung,
    /// Measured maximum degree of `H`.
    pub max_degree: usize,
}

/// Partitions the edges `h` into linear forests, choosing the method from the
/// measured maximum degree `d` of `h`:
///
/// * `d <= 1`: one forest;
/// * `d <= 2`: paths stay, each cycle donates one edge to a second forest;
/// * `d >= 3`: exact search from `ceil((d+1)/2)` forests upwards within
///   `budget`, falling back to recursive Euler halving down to degree 2.
pub fn decompose_h(g: &Graph, h: &[EdgeId], budget: Duration) -> HDecomposition {
    let mut h = h.to_vec();
    normalize_ids(&mut h);
    let d = g.degrees_in(&h).into_iter().max().unwrap_or(0);
    let (forests, rung) = match d {
        0 => (Vec::new(), Rung::Empty),
        1 => (vec![LinearForest::new(h)], Rung::Identity),
        2 => (split_paths_and_cycles(g, &h), Rung::PathsAndCycles),
        _ => {
            let deadline = Instant::now() + budget;
            match exact_partition(g, &h, (d + 1).div_ceil(2), deadline) {
                Some(parts) => {
                    let target = parts.len();
                    (parts, Rung::Exact { target })
                }
                None => {
                    let leaves = euler_halving(g, &h);
                    let count = leaves.len();
                    let forests = leaves
                        .iter()
                        .flat_map(|leaf| split_paths_and_cycles(g, leaf))
                        .collect();
                    (forests, Rung::EulerSplit { leaves: count })
                }
            }
        }
    };
    HDecomposition {
        forests,
        rung,
        max_degree: d,
    }
}

/// Degree <= 2 input: returns one forest if acyclic, otherwise the paths plus
/// one edge per cycle (a matching, since cycle components are vertex-disjoint).
fn split_paths_and_cycles(g: &Graph, h: &[EdgeId]) -> Vec<LinearForest> {
    let mut dsu = Dsu::new(g.vertex_count());
    let mut keep = Vec::with_capacity(h.len());
    let mut removed = Vec::new();
    for &e in h {
        let (u, v) = g.edge(e);
        if dsu.union(u, v) {
            keep.push(e);
        } else {
            removed.push(e);
        }
    }
    let mut out = Vec::with_capacity(2);
    if !keep.is_empty() {
        out.push(LinearForest::new(keep));
    }
    if !removed.is_empty() {
        out.push(LinearForest::new(removed));
    }
    out
}

/// Branch and bound over edge-to-forest assignments, trying `target`,
/// `target + 1`, ... until one succeeds or the deadline passes.
fn exact_partition(
    g: &Graph,
    h: &[EdgeId],
    mut target: usize,
    deadline: Instant,
) -> Option<Vec<LinearForest>> {
    let n = g.vertex_count();
    // Order edges by a BFS over H's vertices so constraints meet early.
    let sub = g.edge_subgraph(h);
    let mut pos = vec![usize::MAX; n];
    let mut next = 0;
    let mut roots: Vec<usize> = (0..n).collect();
    roots.sort_by_key(|&v| (std::cmp::Reverse(sub.degree(v)), v));
    for r in roots {
        if pos[r] != usize::MAX {
            continue;
        }
        pos[r] = next;
        next += 1;
        let mut q = std::collections::VecDeque::from([r]);
        while let Some(u) = q.pop_front() {
            for &w in sub.neighbors(u) {
                if pos[w] == usize::MAX {
                    pos[w] = next;
                    next += 1;
                    q.push_back(w);
                }
            }
        }
    }
    let mut order = h.to_vec();
    order.sort_by_key(|&e| {
        let (u, v) = g.edge(e);
        (pos[u].min(pos[v]), pos[u].max(pos[v]))
    });

    while target <= order.len().max(1) {
        let mut search = ExactSearch::new(g, &order, target, deadline);
        match search.run(0, 0) {
            SearchResult::Found => {
                let mut parts = vec![Vec::new(); target];
                for (i, &e) in order.iter().enumerate() {
                    parts[search.color[i]].push(e);
                }
                return Some(
                    parts
                        .into_iter()
                        .filter(|p| !p.is_empty())
                        .map(LinearForest::new)
                        .collect(),
                );
            }
            SearchResult::Refuted => target += 1,
            SearchResult::TimedOut => return None,
        }
    }
    None
}

enum SearchResult {
    Found,
    Refuted,
    TimedOut,
}

struct ExactSearch<'a> {
    g: &'a Graph,
    order: &'a [EdgeId],
    colors: usize,
    n: usize,
    /// `deg[c * n + v]`
    deg: Vec<u8>,
    dsu: RollbackDsu,
    /// Unassigned incident edges per vertex.
    open: Vec<usize>,
    color: Vec<usize>,
    deadline: Instant,
    nodes: u64,
}

impl<'a> ExactSearch<'a> {
    fn new(g: &'a Graph, order: &'a [EdgeId], colors: usize, deadline: Instant) -> Self {
        let n = g.vertex_count();
        let mut open = vec![0; n];
        for &e in order {
            let (u, v) = g.edge(e);
            open[u] += 1;
            open[v] += 1;
        }
        ExactSearch {
            g,
            order,
            colors,
            n,
            deg: vec![0; colors * n],
            dsu: RollbackDsu::new(colors * n),
            open,
            color: vec![0; order.len()],
            deadline,
            nodes: 0,
        }
    }

    /// Remaining room at `v` across all colors covers its open edges.
    fn room_ok(&self, v: usize) -> bool {
        let room: usize = (0..self.colors)
            .map(|c| 2 - self.deg[c * self.n + v] as usize)
            .sum();
        room >= self.open[v]
    }

    fn run(&mut self, i: usize, used: usize) -> SearchResult {
        if i == self.order.len() {
            return SearchResult::Found;
        }
        self.nodes += 1;
        if self.nodes.is_multiple_of(4096) && Instant::now() >= self.deadline {
            return SearchResult::TimedOut;
        }
        let (u, v) = self.g.edge(self.order[i]);
        // Colors are opened in index order, so only one fresh color is tried.
        let limit = (used + 1).min(self.colors);
        for c in 0..limit {
            let (cu, cv) = (c * self.n + u, c * self.n + v);
            if self.deg[cu] >= 2 || self.deg[cv] >= 2 {
                continue;
            }
            let mark = self.dsu.mark();
            if !self.dsu.union(cu, cv) {
                continue;
            }
            self.deg[cu] += 1;
            self.deg[cv] += 1;
            self.open[u] -= 1;
            self.open[v] -= 1;
            self.color[i] = c;
            let result = if self.room_ok(u) && self.room_ok(v) {
                self.run(i + 1, used.max(c + 1))
            } else {
                SearchResult::Refuted
            };
            self.open[u] += 1;
            self.open[v] += 1;
            self.deg[cu] -= 1;
            self.deg[cv] -= 1;
            self.dsu.rollback(mark);
            match result {
                SearchResult::Refuted => {}
                other => return other,
            }
        }
        SearchResult::Refuted
    }
}

/// Recursively halves `h` along Euler circuits until every part has maximum
/// degree at most 2.
fn euler_halving(g: &Graph, h: &[EdgeId]) -> Vec<Vec<EdgeId>> {
    let d = g.degrees_in(h).into_iter().max().unwrap_or(0);
    if d <= 2 {
        return if h.is_empty() {
            Vec::new()
        } else {
            vec![h.to_vec()]
        };
    }
    let (a, b) = euler_split(g, h);
    let mut out = euler_halving(g, &a);
    out.extend(euler_halving(g, &b));
    out
}

/// Splits `h` into two edge sets in which every vertex of degree `d` gets
/// `floor(d/2)` and `ceil(d/2)` edges (up to one vertex per odd component
/// without odd-degree vertices). Odd-degree vertices are joined to a virtual
/// vertex so Euler circuits exist; edges alternate sides along each circuit.
pub fn euler_split(g: &Graph, h: &[EdgeId]) -> (Vec<EdgeId>, Vec<EdgeId>) {
    let n = g.vertex_count();
    let virt = n;
    let deg = g.degrees_in(h);
    // Multigraph edges: (u, v, Some(real id)) or virtual (v, virt, None).
    let mut edges: Vec<(usize, usize, Option<EdgeId>)> = h
        .iter()
        .map(|&e| (g.edge(e).0, g.edge(e).1, Some(e)))
        .collect();
    edges.extend((0..n).filter(|&v| deg[v] % 2 == 1).map(|v| (v, virt, None)));
    let mut adj: Vec<Vec<(usize, usize)>> = vec![Vec::new(); n + 1];
    for (i, &(u, v, _)) in edges.iter().enumerate() {
        adj[u].push((v, i));
        adj[v].push((u, i));
    }

    // Start at the virtual vertex first, then at low-degree vertices, so the
    // one unavoidable imbalance of an odd closed circuit lands where it costs least.
    let mut starts: Vec<usize> = vec![virt];
    let mut rest: Vec<usize> = (0..n).filter(|&v| !adj[v].is_empty()).collect();
    rest.sort_by_key(|&v| (adj[v].len(), v));
    starts.extend(rest);

    let mut used = vec![false; edges.len()];
    let mut next = vec![0usize; n + 1];
    let (mut a, mut b) = (Vec::new(), Vec::new());
    for s in starts {
        if next[s] >= adj[s].len() {
            continue;
        }
        let mut stack: Vec<(usize, Option<usize>)> = vec![(s, None)];
        let mut circuit: Vec<usize> = Vec::new();
        while let Some(&(u, _)) = stack.last() {
            let mut advanced = false;
            while next[u] < adj[u].len() {
                let (w, ei) = adj[u][next[u]];
                next[u] += 1;
                if !used[ei] {
                    used[ei] = true;
                    stack.push((w, Some(ei)));
                    advanced = true;
                    break;
                }
            }
            if !advanced {
                let (_, via) = stack.pop().expect("non-empty");
                if let Some(ei) = via {
                    circuit.push(ei);
                }
            }
        }
        for (i, &ei) in circuit.iter().enumerate() {
            if let Some(id) = edges[ei].2 {
                if i % 2 == 0 {
                    a.push(id);
                } else {
                    b.push(id);
                }
            }
        }
    }
    (a, b)
}

/// Knobs for [`decompose`].
#[derive(Debug, Clone)]
pub struct DecomposeOptions {
    /// Skip the flow network and go straight to the exact degree-bounded search.
    pub strict_only: bool,
    pub strict_budget: Duration,
    pub exact_budget: Duration,
    pub c_max: usize,
}

impl Default for DecomposeOptions {
    fn default() -> Self {
        DecomposeOptions {
            strict_only: false,
            strict_budget: DEFAULT_STRICT_BUDGET,
            exact_budget: DEFAULT_EXACT_BUDGET,
            c_max: DEFAULT_C_MAX,
        }
    }
}

/// A stage that did not deliver what the plan promised.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Flag {
    /// The flow network had no feasible flow.
    PaperInfeasible,
    /// The strict search needed a larger vertex budget than planned.
    StrictEscalated { planned: usize, used: usize },
    /// Decomposing `H` took more forests than the plan allows.
    LadderOvershoot { forests: usize, target: usize },
    /// The independent verifier rejected the certificate.
    Unverified,
}

impl Flag {
    pub fn code(&self) -> &'static str {
        match self {
            Flag::PaperInfeasible => "paper_infeasible",
            Flag::StrictEscalated { .. } => "strict_escalated",
            Flag::LadderOvershoot { .. } => "ladder_overshoot",
            Flag::Unverified => "unverified",
        }
    }
}

impl fmt::Display for Flag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Flag::PaperInfeasible => f.write_str("paper-mode flow infeasible"),
            Flag::StrictEscalated { planned, used } => {
                write!(
                    f,
                    "strict transversal needed delta={used} (planned {planned})"
                )
            }
            Flag::LadderOvershoot { forests, target } => {
                write!(f, "H split into {forests} forests, plan allows {target}")
            }
            Flag::Unverified => f.write_str("certificate failed verification"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RegimeRecord {
    pub tag: RegimeTag,
    pub delta: usize,
    pub t: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TransversalRecord {
    pub mode: TransversalMode,
    /// Vertex budget the transversal satisfies (may exceed the planned one).
    pub delta: usize,
    pub edges: Vec<[usize; 2]>,
    /// Paper mode: the charged endpoint of each entry of `edges`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub charged: Option<Vec<usize>>,
}

/// Serializable certificate; everything needed to re-check a decomposition
/// from the raw graph alone.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DecompositionCertificate {
    pub version: u32,
    pub digest_algorithm: String,
    pub graph_digest: String,
    pub n: usize,
    pub m: usize,
    pub k: usize,
    pub girth: Option<usize>,
    pub regime: RegimeRecord,
    /// `[factor][cycle][position]` vertex sequences.
    pub factors: Vec<Vec<Vec<usize>>>,
    pub transversal: TransversalRecord,
    pub forests: Vec<Vec<[usize; 2]>>,
    pub claimed_bound: usize,
    pub achieved_count: usize,
    pub verified: bool,
    #[serde(default)]
    pub notes: Vec<String>,
}

impl DecompositionCertificate {
    /// Pretty JSON with a trailing newline.
    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("certificate serializes");
        s.push('\n');
        s
    }

    pub fn from_json(text: &str) -> serde_json::Result<Self> {
        serde_json::from_str(text)
    }
}

/// Everything the pipeline produced, typed, alongside the certificate.
#[derive(Debug, Clone)]
pub struct Decomposition {
    pub plan: RegimePlan,
    pub factorization: TwoFactorization,
    pub transversal: Transversal,
    /// True maximum degree of the paper-mode transversal, when it was computed.
    pub paper_degree: Option<usize>,
    pub residual: Vec<LinearForest>,
    pub h_split: HDecomposition,
    pub flags: Vec<Flag>,
    pub certificate: DecompositionCertificate,
}

impl Decomposition {
    pub fn achieved_count(&self) -> usize {
        self.certificate.achieved_count
    }

    /// `"ok"` or `"flagged:<code>,<code>..."`.
    pub fn status(&self) -> String {
        if self.flags.is_empty() {
            "ok".to_string()
        } else {
            let codes: Vec<&str> = self.flags.iter().map(Flag::code).collect();
            format!("flagged:{}", codes.join(","))
        }
    }
}

/// Runs the full pipeline on a `2k`-regular graph, computing the 2-factorization.
pub fn decompose(
    g: &Graph,
    k: usize,
    opts: &DecomposeOptions,
) -> Result<Decomposition, DecomposeError> {
    check_input(g, k)?;
    let tf = two_factorize(g, k)?;
    decompose_with_factorization(g, k, tf, opts)
}

fn check_input(g: &Graph, k: usize) -> Result<(), DecomposeError> {
    if !g.is_regular(2 * k) {
        return Err(DecomposeError::NotRegular { expected: 2 * k });
    }
    if g.edge_count() == 0 {
        return Err(DecomposeError::Empty);
    }
    Ok(())
}

/// Runs the pipeline with a caller-supplied 2-factorization (e.g. from a
/// generator hint).
pub fn decompose_with_factorization(
    g: &Graph,
    k: usize,
    tf: TwoFactorization,
    opts: &DecomposeOptions,
) -> Result<Decomposition, DecomposeError> {
    check_input(g, k)?;
    let girth = g
        .girth()
        .finite()
        .expect("a non-empty regular graph has a cycle");
    let plan = plan_regime(k, girth, opts.c_max)?;
    let mut flags = Vec::new();

    let mut paper_degree = None;
    let mut chosen = None;
    if !opts.strict_only {
        match solve_paper(g, &tf, plan.delta) {
            PaperOutcome::Found(t) => {
                let d = t.max_degree(g);
                paper_degree = Some(d);
                if d <= plan.delta {
                    chosen = Some(t);
                }
            }
            PaperOutcome::Infeasible(_) => flags.push(Flag::PaperInfeasible),
        }
    }
    let transversal = match chosen {
        Some(t) => t,
        None => strict_with_escalation(g, &tf, &plan, opts, &mut flags)?,
    };

    let residual = residual_forests(g, &tf, &transversal)?;
    let h_split = decompose_h(g, &transversal.edges, opts.exact_budget);
    if h_split.forests.len() > plan.extra_forests {
        flags.push(Flag::LadderOvershoot {
            forests: h_split.forests.len(),
            target: plan.extra_forests,
        });
    }

    let pair = |e: &EdgeId| {
        let (u, v) = g.edge(*e);
        [u, v]
    };
    let forests: Vec<Vec<[usize; 2]>> = residual
        .iter()
        .chain(&h_split.forests)
        .map(|f| f.edges.iter().map(pair).collect())
        .collect();
    let mut notes = Vec::new();
    if let Some(d) = paper_degree {
        notes.push(format!("paper-mode transversal true max degree {d}"));
    }
    notes.push(format!("H decomposition rung: {}", h_split.rung));
    let mut certificate = DecompositionCertificate {
        version: CERTIFICATE_VERSION,
        digest_algorithm: DIGEST_ALGORITHM.to_string(),
        graph_digest: g.digest(),
        n: g.vertex_count(),
        m: g.edge_count(),
        k,
        girth: Some(girth),
        regime: RegimeRecord {
            tag: plan.tag,
            delta: plan.delta,
            t: plan.extra_forests,
        },
        factors: tf.vertex_lists(),
        transversal: TransversalRecord {
            mode: transversal.mode,
            delta: transversal.delta,
            edges: transversal.edges.iter().map(pair).collect(),
            charged: transversal
                .charge
                .as_ref()
                .map(|c| c.iter().map(|&(_, v)| v).collect()),
        },
        achieved_count: forests.len(),
        forests,
        claimed_bound: plan.claimed_bound(),
        verified: false,
        notes,
    };
    certificate.verified = verify_certificate(g, &certificate).overall;
    if !certificate.verified {
        flags.push(Flag::Unverified);
    }
    certificate
        .notes
        .extend(flags.iter().map(|f| f.to_string()));

    Ok(Decomposition {
        plan,
        factorization: tf,
        transversal,
        paper_degree,
        residual,
        h_split,
        flags,
        certificate,
    })
}

fn strict_with_escalation(
    g: &Graph,
    tf: &TwoFactorization,
    plan: &RegimePlan,
    opts: &DecomposeOptions,
    flags: &mut Vec<Flag>,
) -> Result<Transversal, DecomposeError> {
    // At delta = 2k any one-edge-per-cycle choice works, so there is no point going higher.
    let top = opts.c_max.max(plan.delta).min(2 * plan.k).max(plan.delta);
    for delta in plan.delta..=top {
        if let StrictOutcome::Found(t) = solve_strict(g, tf, delta, opts.strict_budget) {
            if delta > plan.delta {
                flags.push(Flag::StrictEscalated {
                    planned: plan.delta,
                    used: delta,
                });
            }
            return Ok(t);
        }
    }
    Err(DecomposeError::StrictExhausted {
        from: plan.delta,
        to: top,
    })
}

/// Union-find with path halving.
struct Dsu {
    parent: Vec<usize>,
}

impl Dsu {
    fn new(n: usize) -> Self {
        Dsu {
            parent: (0..n).collect(),
        }
    }

    fn find(&mut self, mut x: usize) -> usize {
        while self.parent[x] != x {
            self.parent[x] = self.parent[self.parent[x]];
            x = self.parent[x];
        }
        x
    }

    /// Returns `false` if `a` and `b` were already connected.
    fn union(&mut self, a: usize, b: usize) -> bool {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra == rb {
            return false;
        }
        self.parent[ra] = rb;
        true
    }
}

/// Union by size without compression, so unions can be undone.
struct RollbackDsu {
    parent: Vec<usize>,
    size: Vec<usize>,
    history: Vec<usize>,
}

impl RollbackDsu {
    fn new(n: usize) -> Self {
        RollbackDsu {
            parent: (0..n).collect(),
            size: vec![1; n],
            history: Vec::new(),
        }
    }

    fn find(&self, mut x: usize) -> usize {
        while self.parent[x] != x {
            x = self.parent[x];
        }
        x
    }

    fn mark(&self) -> usize {
        self.history.len()
    }

    fn union(&mut self, a: usize, b: usize) -> bool {
        let (mut ra, mut rb) = (self.find(a), self.find(b));
        if ra == rb {
            return false;
        }
        if self.size[ra] > self.size[rb] {
            std::mem::swap(&mut ra, &mut rb);
        }
        self.parent[ra] = rb;
        self.size[rb] += self.size[ra];
        self.history.push(ra);
        true
    }

    fn rollback(&mut self, mark: usize) {
        while self.history.len() > mark {
            let ra = self.history.pop().expect("history non-empty");
            let rb = self.parent[ra];
            self.size[rb] -= self.size[ra];
            self.parent[ra] = ra;
        }
    }
}
