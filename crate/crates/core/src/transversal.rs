//! Cycle-breaking transversals of a 2-factorization.
//!
//! A transversal is an edge set `H` meeting every cycle of every factor. Two
//! solvers are provided:
//!
//! * [`solve_paper`] builds the four-layer flow network (source, cycle nodes,
//!   edge nodes, vertex nodes, sink) with a lower bound of one unit on every
//!   cycle and capacity `delta` into the sink from every vertex, then reads `H`
//!   off an integer feasible flow. Each selected edge sends its unit to a
//!   single endpoint, so the capacity layer bounds how many selected edges
//!   *charge* a vertex, not the degree of `H` itself.
//! * [`solve_strict`] is an exact backtracking search for `H` with true
//!   maximum degree at most `delta`.
//!
//! [`plan_regime`] picks the capacity `delta` and the promised number of extra
//! forests from `k` and the girth.

use std::fmt;
use std::str::FromStr;
use std::time::{Duration, Instant};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::factorize::{CycleRef, TwoFactorization};
use crate::flow::{feasible_circulation, Capacity, FlowNetwork, FlowSolution};
use crate::graph::{normalize_ids, EdgeId, Graph};
use crate::verdict::Verdict;

pub const DEFAULT_C_MAX: usize = 64;
pub const DEFAULT_STRICT_BUDGET: Duration = Duration::from_secs(10);

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum TransversalError {
    #[error("no applicable regime for k={k}, girth={girth} with c_max={c_max}")]
    NoRegime {
        k: usize,
        girth: usize,
        c_max: usize,
    },
    #[error("unknown regime tag {0:?}")]
    UnknownTag(String),
}

/// Which girth condition a plan relies on.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum RegimeTag {
    /// girth >= 2k: matching transversal, one extra forest.
    G2K,
    /// girth >= k: delta 2, two extra forests.
    GK,
    /// girth >= k/2: delta 4, three extra forests.
    GK2,
    /// girth >= k/4: delta 8, five extra forests.
    GK4,
    /// girth >= 2k/c: delta c, ceil((3c+2)/2) extra forests.
    G2KC(usize),
}

impl RegimeTag {
    pub fn delta(self) -> usize {
        match self {
            RegimeTag::G2K => 1,
            RegimeTag::GK => 2,
            RegimeTag::GK2 => 4,
            RegimeTag::GK4 => 8,
            RegimeTag::G2KC(c) => c,
        }
    }

    pub fn extra_forests(self) -> usize {
        match self {
            RegimeTag::G2K => 1,
            RegimeTag::GK => 2,
            RegimeTag::GK2 => 3,
            RegimeTag::GK4 => 5,
            RegimeTag::G2KC(c) => (3 * c + 3) / 2,
        }
    }

    /// Whether the girth condition of this regime holds.
    pub fn applies(self, k: usize, girth: usize) -> bool {
        match self {
            RegimeTag::G2K => girth >= 2 * k,
            RegimeTag::GK => girth >= k,
            RegimeTag::GK2 => 2 * girth >= k,
            RegimeTag::GK4 => 4 * girth >= k,
            RegimeTag::G2KC(c) => c * girth >= 2 * k,
        }
    }
}

impl fmt::Display for RegimeTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            RegimeTag::G2K => f.write_str("G2K"),
            RegimeTag::GK => f.write_str("GK"),
            RegimeTag::GK2 => f.write_str("GK2"),
            RegimeTag::GK4 => f.write_str("GK4"),
            RegimeTag::G2KC(c) => write!(f, "G2KC({c})"),
        }
    }
}

impl FromStr for RegimeTag {
    type Err = TransversalError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "G2K" => Ok(RegimeTag::G2K),
            "GK" => Ok(RegimeTag::GK),
            "GK2" => Ok(RegimeTag::GK2),
            "GK4" => Ok(RegimeTag::GK4),
            _ => s
                .strip_prefix("G2KC(")
                .and_then(|r| r.strip_suffix(')'))
                .and_then(|c| c.parse().ok())
                .filter(|&c| c > 0)
                .map(RegimeTag::G2KC)
                .ok_or_else(|| TransversalError::UnknownTag(s.to_string())),
        }
    }
}

impl Serialize for RegimeTag {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for RegimeTag {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct RegimePlan {
    pub k: usize,
    pub girth: usize,
    pub delta: usize,
    pub extra_forests: usize,
    pub tag: RegimeTag,
}

impl RegimePlan {
    pub fn claimed_bound(&self) -> usize {
        self.k + self.extra_forests
    }
}

/// Among the regimes whose girth condition holds, picks the one promising the
/// fewest extra forests, breaking ties by smaller `delta`. The general regime
/// uses `c = ceil(2k / girth)` and is only considered for `c <= c_max`.
pub fn plan_regime(k: usize, girth: usize, c_max: usize) -> Result<RegimePlan, TransversalError> {
    let no_regime = TransversalError::NoRegime { k, girth, c_max };
    if k == 0 || girth == 0 {
        return Err(no_regime);
    }
    let mut candidates = vec![
        RegimeTag::G2K,
        RegimeTag::GK,
        RegimeTag::GK2,
        RegimeTag::GK4,
    ];
    let c = (2 * k).div_ceil(girth).max(1);
    if c <= c_max {
        candidates.push(RegimeTag::G2KC(c));
    }
    candidates
        .into_iter()
        .filter(|t| t.applies(k, girth))
        .min_by_key(|t| (t.extra_forests(), t.delta()))
        .map(|tag| RegimePlan {
            k,
            girth,
            delta: tag.delta(),
            extra_forests: tag.extra_forests(),
            tag,
        })
        .ok_or(no_regime)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TransversalMode {
    /// Read off the flow network; vertex budgets bound charges.
    Paper,
    /// Exact search; vertex budgets bound the true degree.
    Strict,
}

impl fmt::Display for TransversalMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            TransversalMode::Paper => "paper",
            TransversalMode::Strict => "strict",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Transversal {
    pub mode: TransversalMode,
    /// Vertex budget the transversal was solved under.
    pub delta: usize,
    /// Selected edges, sorted.
    pub edges: Vec<EdgeId>,
    /// Paper mode only: the endpoint each selected edge charged.
    pub charge: Option<Vec<(EdgeId, usize)>>,
    /// `hits[factor][cycle]`: selected edges lying on that cycle.
    pub hits: Vec<Vec<Vec<EdgeId>>>,
}

impl Transversal {
    pub fn max_degree(&self, g: &Graph) -> usize {
        g.degrees_in(&self.edges).into_iter().max().unwrap_or(0)
    }

    fn from_edges(
        tf: &TwoFactorization,
        mode: TransversalMode,
        delta: usize,
        mut edges: Vec<EdgeId>,
        charge: Option<Vec<(EdgeId, usize)>>,
    ) -> Self {
        normalize_ids(&mut edges);
        let mut hits: Vec<Vec<Vec<EdgeId>>> = tf
            .factors()
            .iter()
            .map(|f| vec![Vec::new(); f.cycles.len()])
            .collect();
        for &e in &edges {
            if let Some(r) = tf.cycle_of(e) {
                hits[r.factor][r.cycle].push(e);
            }
        }
        Transversal {
            mode,
            delta,
            edges,
            charge,
            hits,
        }
    }
}

/// The flow network together with the node and arc layout needed to read a
/// transversal back from a flow.
#[derive(Debug, Clone)]
pub struct TransversalNetwork {
    pub net: FlowNetwork,
    pub cycles: Vec<CycleRef>,
    /// `(cycle position, edge, arc index)` for every selection arc.
    pub selection_arcs: Vec<(usize, EdgeId, usize)>,
    /// Per edge id: arc indices towards its lower and higher endpoint.
    pub incidence_arcs: Vec<(usize, usize)>,
    edge_base: usize,
    vertex_base: usize,
}

impl TransversalNetwork {
    pub const SOURCE: usize = 0;
    pub const SINK: usize = 1;

    pub fn cycle_node(&self, i: usize) -> usize {
        2 + i
    }

    pub fn edge_node(&self, e: EdgeId) -> usize {
        self.edge_base + e.0
    }

    pub fn vertex_node(&self, v: usize) -> usize {
        self.vertex_base + v
    }
}

/// Builds the network: demand arcs `S -> C` (lower 1, unbounded), selection
/// arcs `C -> e` for `e` on `C` (capacity 1), incidence arcs `e -> u`, `e -> v`
/// (capacity 1) and capacity arcs `v -> T` (capacity `delta`), in that order.
pub fn build_network(g: &Graph, tf: &TwoFactorization, delta: usize) -> TransversalNetwork {
    let cycles: Vec<CycleRef> = tf.cycles().map(|(r, _)| r).collect();
    let edge_base = 2 + cycles.len();
    let vertex_base = edge_base + g.edge_count();
    let mut net = FlowNetwork::with_terminals(
        vertex_base + g.vertex_count(),
        TransversalNetwork::SOURCE,
        TransversalNetwork::SINK,
    );

    for i in 0..cycles.len() {
        net.add_arc(TransversalNetwork::SOURCE, 2 + i, 1, Capacity::Unbounded);
    }
    let mut selection_arcs = Vec::new();
    for (i, &r) in cycles.iter().enumerate() {
        for &e in tf.cycle(r).edges() {
            let a = net.add_arc(2 + i, edge_base + e.0, 0, Capacity::Finite(1));
            selection_arcs.push((i, e, a));
        }
    }
    let mut incidence_arcs = Vec::with_capacity(g.edge_count());
    for (i, &(u, v)) in g.edges().iter().enumerate() {
        let au = net.add_arc(edge_base + i, vertex_base + u, 0, Capacity::Finite(1));
        let av = net.add_arc(edge_base + i, vertex_base + v, 0, Capacity::Finite(1));
        incidence_arcs.push((au, av));
    }
    for v in 0..g.vertex_count() {
        net.add_arc(
            vertex_base + v,
            TransversalNetwork::SINK,
            0,
            Capacity::Finite(delta as u64),
        );
    }
    TransversalNetwork {
        net,
        cycles,
        selection_arcs,
        incidence_arcs,
        edge_base,
        vertex_base,
    }
}

#[derive(Debug, Clone)]
pub enum PaperOutcome {
    Found(Transversal),
    Infeasible(FlowSolution),
}

/// Solves the flow network and takes `H` = edges whose node forwards a unit.
pub fn solve_paper(g: &Graph, tf: &TwoFactorization, delta: usize) -> PaperOutcome {
    let tn = build_network(g, tf, delta);
    let sol = feasible_circulation(&tn.net).expect("transversal network is well formed");
    if !sol.feasible {
        return PaperOutcome::Infeasible(sol);
    }
    let mut edges = Vec::new();
    let mut charge = Vec::new();
    for (i, &(u, v)) in g.edges().iter().enumerate() {
        let (au, av) = tn.incidence_arcs[i];
        let (fu, fv) = (sol.flows[au], sol.flows[av]);
        if fu + fv >= 1 {
            edges.push(EdgeId(i));
            charge.push((EdgeId(i), if fu >= 1 { u } else { v }));
        }
    }
    PaperOutcome::Found(Transversal::from_edges(
        tf,
        TransversalMode::Paper,
        delta,
        edges,
        Some(charge),
    ))
}

#[derive(Debug, Clone)]
pub enum StrictOutcome {
    Found(Transversal),
    /// The search space was exhausted: no transversal with degree <= delta exists.
    Unsatisfiable,
    /// The time budget ran out first.
    Exhausted,
}

/// Exact search for one edge per cycle with every vertex used at most `delta`
/// times. Cycles are branched on in order of fewest still-selectable edges
/// (ties: shorter cycle first); candidates are tried in order of decreasing
/// remaining budget of their tighter endpoint. A cycle with no selectable edge
/// left prunes the branch.
pub fn solve_strict(
    g: &Graph,
    tf: &TwoFactorization,
    delta: usize,
    budget: Duration,
) -> StrictOutcome {
    let cycles: Vec<&[EdgeId]> = tf.cycles().map(|(_, c)| c.edges()).collect();
    let mut search = StrictSearch {
        g,
        cycles: &cycles,
        remaining: vec![delta; g.vertex_count()],
        chosen: vec![None; cycles.len()],
        deadline: Instant::now() + budget,
        nodes: 0,
        timed_out: false,
    };
    if search.run(cycles.len()) {
        let edges = search
            .chosen
            .iter()
            .map(|e| e.expect("all assigned"))
            .collect();
        StrictOutcome::Found(Transversal::from_edges(
            tf,
            TransversalMode::Strict,
            delta,
            edges,
            None,
        ))
    } else if search.timed_out {
        StrictOutcome::Exhausted
    } else {
        StrictOutcome::Unsatisfiable
    }
}

struct StrictSearch<'a> {
    g: &'a Graph,
    cycles: &'a [&'a [EdgeId]],
    remaining: Vec<usize>,
    chosen: Vec<Option<EdgeId>>,
    deadline: Instant,
    nodes: u64,
    timed_out: bool,
}

impl StrictSearch<'_> {
    fn selectable(&self, e: EdgeId) -> bool {
        let (u, v) = self.g.edge(e);
        self.remaining[u] > 0 && self.remaining[v] > 0
    }

    fn run(&mut self, open: usize) -> bool {
        if open == 0 {
            return true;
        }
        self.nodes += 1;
        if self.nodes.is_multiple_of(1024) && Instant::now() >= self.deadline {
            self.timed_out = true;
        }
        if self.timed_out {
            return false;
        }

        let mut best: Option<(usize, usize, usize)> = None; // (options, length, index)
        for (i, c) in self.cycles.iter().enumerate() {
            if self.chosen[i].is_some() {
                continue;
            }
            let options = c.iter().filter(|&&e| self.selectable(e)).count();
            if options == 0 {
                return false;
            }
            let key = (options, c.len(), i);
            if best.is_none_or(|b| key < b) {
                best = Some(key);
            }
        }
        let (_, _, ci) = best.expect("open > 0 implies an unassigned cycle");

        let mut candidates: Vec<EdgeId> = self.cycles[ci]
            .iter()
            .copied()
            .filter(|&e| self.selectable(e))
            .collect();
        candidates.sort_by_key(|&e| {
            let (u, v) = self.g.edge(e);
            (
                std::cmp::Reverse(self.remaining[u].min(self.remaining[v])),
                e,
            )
        });
        for e in candidates {
            let (u, v) = self.g.edge(e);
            self.remaining[u] -= 1;
            self.remaining[v] -= 1;
            self.chosen[ci] = Some(e);
            if self.run(open - 1) {
                return true;
            }
            self.chosen[ci] = None;
            self.remaining[u] += 1;
            self.remaining[v] += 1;
            if self.timed_out {
                return false;
            }
        }
        false
    }
}

/// Checks that `t` meets every cycle of `tf` and respects `delta`: in strict
/// mode on the true degree of `H`, in paper mode on per-vertex charges (the
/// true degree is then reported as a warning when it exceeds `delta`).
pub fn verify_transversal(
    g: &Graph,
    tf: &TwoFactorization,
    t: &Transversal,
    delta: usize,
    strict: bool,
) -> Verdict {
    let mut verdict = Verdict::default();
    if let Some(e) = t.edges.iter().find(|e| e.0 >= g.edge_count()) {
        verdict.fail(format!("edge id {} out of range", e.0));
        return verdict;
    }
    let mut selected = vec![false; g.edge_count()];
    for e in &t.edges {
        selected[e.0] = true;
    }
    for (r, c) in tf.cycles() {
        if !c.edges().iter().any(|e| selected[e.0]) {
            verdict.fail(format!("cycle ({},{}) unhit", r.factor, r.cycle));
        }
    }

    let deg = g.degrees_in(&t.edges);
    let (worst, true_max) = deg
        .iter()
        .enumerate()
        .max_by_key(|&(v, &d)| (d, std::cmp::Reverse(v)))
        .map_or((0, 0), |(v, &d)| (v, d));
    if strict {
        if true_max > delta {
            verdict.fail(format!(
                "true degree {true_max} at vertex {worst} exceeds delta={delta}"
            ));
        }
        return verdict;
    }

    let Some(charge) = &t.charge else {
        verdict.fail("paper-mode check needs charge data");
        return verdict;
    };
    let mut charged = vec![0usize; g.vertex_count()];
    let mut seen = vec![false; g.edge_count()];
    for &(e, v) in charge {
        if e.0 >= g.edge_count() || !selected[e.0] {
            verdict.fail(format!("charge recorded for unselected edge {}", e.0));
            continue;
        }
        let (a, b) = g.edge(e);
        if v != a && v != b {
            verdict.fail(format!("edge {{{a}, {b}}} charges non-endpoint {v}"));
            continue;
        }
        if std::mem::replace(&mut seen[e.0], true) {
            verdict.fail(format!("edge {{{a}, {b}}} charged twice"));
        }
        charged[v] += 1;
    }
    if let Some(e) = t.edges.iter().find(|e| !seen[e.0]) {
        let (a, b) = g.edge(*e);
        verdict.fail(format!("selected edge {{{a}, {b}}} charges no vertex"));
    }
    if let Some(v) = (0..charged.len()).find(|&v| charged[v] > delta) {
        verdict.fail(format!(
            "vertex {v} charged {} times, exceeding delta={delta}",
            charged[v]
        ));
    }
    if true_max > delta {
        verdict.warn(format!(
            "true degree exceeds δ: {true_max} at vertex {worst} (delta={delta})"
        ));
    }
    verdict
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::factorize::two_factorize;
    use crate::generators;
    use crate::graph::Graph;

    #[test]
    fn regime_examples() {
        let p = plan_regime(2, 4, DEFAULT_C_MAX).unwrap();
        assert_eq!((p.tag, p.delta, p.extra_forests), (RegimeTag::G2K, 1, 1));
        let p = plan_regime(4, 4, DEFAULT_C_MAX).unwrap();
        assert_eq!((p.tag, p.delta, p.extra_forests), (RegimeTag::GK, 2, 2));
        let p = plan_regime(10, 5, 10).unwrap();
        assert_eq!((p.tag, p.delta, p.extra_forests), (RegimeTag::GK2, 4, 3));
    }

    #[test]
    fn regime_general_c_and_failure() {
        // k=40, girth=3: 4*3 < 40, c = ceil(80/3) = 27.
        let p = plan_regime(40, 3, DEFAULT_C_MAX).unwrap();
        assert_eq!(p.tag, RegimeTag::G2KC(27));
        assert_eq!(p.extra_forests, 42); // ceil(83/2)
        assert_eq!(
            plan_regime(40, 3, 20),
            Err(TransversalError::NoRegime {
                k: 40,
                girth: 3,
                c_max: 20
            })
        );
    }

    #[test]
    fn regime_table_matches_bound_formula() {
        for c in 1..40usize {
            let t = RegimeTag::G2KC(c).extra_forests();
            assert!(2 * t >= 3 * c + 2 && 2 * t < 3 * c + 4, "c={c}");
        }
    }

    #[test]
    fn tag_round_trip() {
        for t in [
            RegimeTag::G2K,
            RegimeTag::GK,
            RegimeTag::GK2,
            RegimeTag::GK4,
            RegimeTag::G2KC(13),
        ] {
            assert_eq!(t.to_string().parse::<RegimeTag>().unwrap(), t);
        }
        assert!("G2KC(0)".parse::<RegimeTag>().is_err());
        assert!("X".parse::<RegimeTag>().is_err());
    }

    #[test]
    fn network_shape_for_c6() {
        let g = generators::cycle(6);
        let tf = two_factorize(&g, 1).unwrap();
        let tn = build_network(&g, &tf, 1);
        assert_eq!(tn.net.node_count, 2 + 1 + 6 + 6);
        assert_eq!(tn.net.arcs.len(), 1 + 6 + 12 + 6);
        for &(ci, e, a) in &tn.selection_arcs {
            assert_eq!(tf.cycle_of(e), Some(tn.cycles[ci]));
            assert_eq!(tn.net.arcs[a].head, tn.edge_node(e));
            assert_eq!(tn.net.arcs[a].tail, tn.cycle_node(ci));
        }
    }

    #[test]
    fn network_shape_for_k44() {
        let g = generators::complete_bipartite(4, 4);
        let tf = two_factorize(&g, 2).unwrap();
        let tn = build_network(&g, &tf, 1);
        let demand = tn
            .net
            .arcs
            .iter()
            .filter(|a| a.tail == TransversalNetwork::SOURCE)
            .count();
        assert_eq!(demand, tf.cycle_count());
        assert_eq!(tn.net.arcs.len(), tf.cycle_count() + 16 + 2 * 16 + 8);
    }

    #[test]
    fn paper_solver_on_c6() {
        let g = generators::cycle(6);
        let tf = two_factorize(&g, 1).unwrap();
        let PaperOutcome::Found(t) = solve_paper(&g, &tf, 1) else {
            panic!("C6 must be feasible");
        };
        assert!(!t.edges.is_empty() && t.edges.len() <= 6);
        assert_eq!(t.hits[0][0].len(), t.edges.len());
        assert!(verify_transversal(&g, &tf, &t, 1, false).ok());
    }

    #[test]
    fn strict_solver_on_c6_and_k5() {
        let g = generators::cycle(6);
        let tf = two_factorize(&g, 1).unwrap();
        let StrictOutcome::Found(t) = solve_strict(&g, &tf, 1, DEFAULT_STRICT_BUDGET) else {
            panic!("C6 must be solvable");
        };
        assert_eq!(t.edges.len(), 1);
        assert!(verify_transversal(&g, &tf, &t, 1, true).ok());

        let g = generators::complete(5);
        let tf = two_factorize(&g, 2).unwrap();
        for delta in [1, 2] {
            let StrictOutcome::Found(t) = solve_strict(&g, &tf, delta, DEFAULT_STRICT_BUDGET)
            else {
                panic!("K5 must be solvable at delta={delta}");
            };
            assert!(t.max_degree(&g) <= delta);
            assert!(verify_transversal(&g, &tf, &t, delta, true).ok());
        }
    }

    #[test]
    fn strict_solver_unsatisfiable() {
        let g = generators::cycle(3);
        let tf = two_factorize(&g, 1).unwrap();
        assert!(matches!(
            solve_strict(&g, &tf, 0, DEFAULT_STRICT_BUDGET),
            StrictOutcome::Unsatisfiable
        ));
    }

    #[test]
    fn verifier_flags_unhit_cycle() {
        let g = generators::complete(5);
        let tf = two_factorize(&g, 2).unwrap();
        let e = tf.factors()[0].cycles[0].edges()[0];
        let t = Transversal::from_edges(&tf, TransversalMode::Strict, 1, vec![e], None);
        let v = verify_transversal(&g, &tf, &t, 1, true);
        assert!(!v.ok());
        assert!(v.mentions("cycle (1,0) unhit"));
    }

    #[test]
    fn paper_mode_warns_on_true_degree() {
        // Triangle 0-1-2 as a single factor, two edges meeting at vertex 1 but
        // charged to different endpoints: charges fit delta=1, true degree is 2.
        let g = Graph::new(3, [(0, 1), (1, 2), (0, 2)]).unwrap();
        let tf = two_factorize(&g, 1).unwrap();
        let e01 = g.edge_id(0, 1).unwrap();
        let e12 = g.edge_id(1, 2).unwrap();
        let t = Transversal::from_edges(
            &tf,
            TransversalMode::Paper,
            1,
            vec![e01, e12],
            Some(vec![(e01, 0), (e12, 2)]),
        );
        let v = verify_transversal(&g, &tf, &t, 1, false);
        assert!(v.ok(), "{v}");
        assert!(v.warnings[0].contains("true degree exceeds δ"));
        assert!(!verify_transversal(&g, &tf, &t, 1, true).ok());
    }

    #[test]
    fn paper_mode_rejects_overcharged_vertex() {
        let g = Graph::new(3, [(0, 1), (1, 2), (0, 2)]).unwrap();
        let tf = two_factorize(&g, 1).unwrap();
        let e01 = g.edge_id(0, 1).unwrap();
        let e12 = g.edge_id(1, 2).unwrap();
        let t = Transversal::from_edges(
            &tf,
            TransversalMode::Paper,
            1,
            vec![e01, e12],
            Some(vec![(e01, 1), (e12, 1)]),
        );
        assert!(verify_transversal(&g, &tf, &t, 1, false).mentions("charged 2 times"));
    }

    #[test]
    fn paper_solver_feasible_under_girth_condition() {
        for seed in 0..10 {
            let (g, _) =
                generators::random_regular_with_girth(24, 2, 4, seed, generators::DEFAULT_RETRIES)
                    .unwrap();
            let tf = two_factorize(&g, 2).unwrap();
            let plan = plan_regime(2, g.girth().finite().unwrap(), DEFAULT_C_MAX).unwrap();
            let PaperOutcome::Found(t) = solve_paper(&g, &tf, plan.delta) else {
                panic!("girth condition guarantees feasibility (seed {seed})");
            };
            assert!(verify_transversal(&g, &tf, &t, plan.delta, false).ok());
        }
    }
}
