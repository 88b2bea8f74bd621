//! Integer maximum flow and feasible flows with lower bounds.
//!
//! [`max_flow`] is Dinic's algorithm: each phase builds the BFS level graph
//! of the residual network and saturates it with a blocking flow.
//! [`feasible_circulation`] applies the textbook lower-bound reduction on top
//! of it. All arithmetic is in `u64`; unbounded capacities are replaced by a
//! finite surrogate larger than any flow the network can carry.

use std::collections::VecDeque;
use std::fmt::{self, Write as _};

use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum FlowError {
    #[error("arc {arc}: node index out of range")]
    NodeOutOfRange { arc: usize },
    #[error("arc {arc}: lower bound {lower} exceeds capacity {capacity}")]
    LowerAboveCapacity {
        arc: usize,
        lower: u64,
        capacity: u64,
    },
    #[error("max_flow requires zero lower bounds, arc {arc} has {lower}")]
    LowerBoundPresent { arc: usize, lower: u64 },
    #[error("source and sink must be distinct nodes in range")]
    BadTerminals,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Capacity {
    Finite(u64),
    Unbounded,
}

impl Capacity {
    fn clamp(self, surrogate: u64) -> u64 {
        match self {
            Capacity::Finite(c) => c,
            Capacity::Unbounded => surrogate,
        }
    }

    pub fn admits(self, f: u64) -> bool {
        match self {
            Capacity::Finite(c) => f <= c,
            Capacity::Unbounded => true,
        }
    }
}

impl fmt::Display for Capacity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Capacity::Finite(c) => write!(f, "{c}"),
            Capacity::Unbounded => f.write_str("inf"),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Arc {
    pub tail: usize,
    pub head: usize,
    pub lower: u64,
    pub capacity: Capacity,
}

/// A directed network with lower bounds and capacities on arcs.
///
/// With both terminals set, conservation is required everywhere except at the
/// source and sink, and the net flow into the sink must be non-negative.
/// Without terminals the network is a pure circulation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FlowNetwork {
    pub node_count: usize,
    pub arcs: Vec<Arc>,
    pub source: Option<usize>,
    pub sink: Option<usize>,
}

impl FlowNetwork {
    pub fn new(node_count: usize) -> Self {
        FlowNetwork {
            node_count,
            arcs: Vec::new(),
            source: None,
            sink: None,
        }
    }

    pub fn with_terminals(node_count: usize, source: usize, sink: usize) -> Self {
        FlowNetwork {
            source: Some(source),
            sink: Some(sink),
            ..Self::new(node_count)
        }
    }

    /// Appends an arc and returns its index.
    pub fn add_arc(&mut self, tail: usize, head: usize, lower: u64, capacity: Capacity) -> usize {
        self.arcs.push(Arc {
            tail,
            head,
            lower,
            capacity,
        });
        self.arcs.len() - 1
    }

    pub fn validate(&self) -> Result<(), FlowError> {
        for (i, a) in self.arcs.iter().enumerate() {
            if a.tail >= self.node_count || a.head >= self.node_count {
                return Err(FlowError::NodeOutOfRange { arc: i });
            }
            if let Capacity::Finite(c) = a.capacity {
                if a.lower > c {
                    return Err(FlowError::LowerAboveCapacity {
                        arc: i,
                        lower: a.lower,
                        capacity: c,
                    });
                }
            }
        }
        match (self.source, self.sink) {
            (Some(s), Some(t)) if s == t || s >= self.node_count || t >= self.node_count => {
                Err(FlowError::BadTerminals)
            }
            (Some(_), None) | (None, Some(_)) => Err(FlowError::BadTerminals),
            _ => Ok(()),
        }
    }

    /// A finite value strictly larger than any flow this network can carry.
    fn surrogate(&self) -> u64 {
        let mut total: u64 = 1;
        for a in &self.arcs {
            total = total.saturating_add(a.lower);
            if let Capacity::Finite(c) = a.capacity {
                total = total.saturating_add(c);
            }
        }
        total
    }

    /// Readable DIMACS-like arc listing: `a tail head lower capacity` per line.
    pub fn dump(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "p flow {} {}", self.node_count, self.arcs.len());
        if let (Some(s), Some(t)) = (self.source, self.sink) {
            let _ = writeln!(out, "n {s} s");
            let _ = writeln!(out, "n {t} t");
        }
        for a in &self.arcs {
            let _ = writeln!(out, "a {} {} {} {}", a.tail, a.head, a.lower, a.capacity);
        }
        out
    }

    /// Checks `flows` against bounds and conservation. Returns the first violation.
    pub fn check_flow(&self, flows: &[u64]) -> Result<(), String> {
        if flows.len() != self.arcs.len() {
            return Err(format!(
                "{} flow values for {} arcs",
                flows.len(),
                self.arcs.len()
            ));
        }
        let mut excess = vec![0i128; self.node_count];
        for (i, (a, &f)) in self.arcs.iter().zip(flows).enumerate() {
            if f < a.lower || !a.capacity.admits(f) {
                return Err(format!(
                    "arc {i} ({} -> {}) carries {f}, outside [{}, {}]",
                    a.tail, a.head, a.lower, a.capacity
                ));
            }
            excess[a.tail] -= f as i128;
            excess[a.head] += f as i128;
        }
        for (v, &x) in excess.iter().enumerate() {
            if Some(v) == self.source || Some(v) == self.sink {
                continue;
            }
            if x != 0 {
                return Err(format!("conservation fails at node {v} (excess {x})"));
            }
        }
        if let Some(t) = self.sink {
            if excess[t] < 0 {
                return Err(format!("negative net flow {} into sink", excess[t]));
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FlowValue {
    Finite(u64),
    Unbounded,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MaxFlow {
    pub value: FlowValue,
    /// Per-arc flow. When the value is unbounded these are the flows of the
    /// surrogate-capacity run and carry no particular meaning.
    pub flows: Vec<u64>,
}

/// Result of [`feasible_circulation`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FlowSolution {
    /// Per-arc flow `f*`; meaningful only when `feasible`.
    pub flows: Vec<u64>,
    pub feasible: bool,
    /// Nodes whose super-source arc was left unsaturated (the infeasibility witness).
    pub unsaturated: Vec<usize>,
    /// Total lower-bound demand the reduction failed to route.
    pub deficit: u64,
}

/// Maximum `s`–`t` flow of a network without lower bounds.
pub fn max_flow(net: &FlowNetwork, s: usize, t: usize) -> Result<MaxFlow, FlowError> {
    net.validate()?;
    if s == t || s >= net.node_count || t >= net.node_count {
        return Err(FlowError::BadTerminals);
    }
    if let Some((i, a)) = net.arcs.iter().enumerate().find(|(_, a)| a.lower > 0) {
        return Err(FlowError::LowerBoundPresent {
            arc: i,
            lower: a.lower,
        });
    }
    let unbounded = unbounded_path_exists(net, s, t);
    let surrogate = net.surrogate();
    let mut d = Dinic::new(net.node_count);
    for a in &net.arcs {
        d.add_edge(a.tail, a.head, a.capacity.clamp(surrogate));
    }
    let value = d.run(s, t);
    Ok(MaxFlow {
        value: if unbounded {
            FlowValue::Unbounded
        } else {
            FlowValue::Finite(value)
        },
        flows: (0..net.arcs.len()).map(|i| d.flow(i)).collect(),
    })
}

fn unbounded_path_exists(net: &FlowNetwork, s: usize, t: usize) -> bool {
    let mut seen = vec![false; net.node_count];
    seen[s] = true;
    let mut stack = vec![s];
    while let Some(u) = stack.pop() {
        if u == t {
            return true;
        }
        for a in &net.arcs {
            if a.tail == u && a.capacity == Capacity::Unbounded && !seen[a.head] {
                seen[a.head] = true;
                stack.push(a.head);
            }
        }
    }
    false
}

/// Finds an integer flow meeting every lower bound and capacity, or reports
/// infeasibility with the unsaturated demand as witness.
///
/// Each arc `(u, v, l, c)` becomes `(u, v, 0, c - l)`; a super-source feeds
/// every node its total lower-bound inflow and a super-sink drains every node's
/// total lower-bound outflow. With terminals, an unbounded return arc
/// `sink -> source` is added. The instance is feasible iff the maximum flow
/// saturates all super-source arcs, and then `f*(a) = f(a) + l(a)`.
pub fn feasible_circulation(net: &FlowNetwork) -> Result<FlowSolution, FlowError> {
    net.validate()?;
    let n = net.node_count;
    let (ss, st) = (n, n + 1);
    let surrogate = net.surrogate();
    let mut d = Dinic::new(n + 2);

    let mut lower_in = vec![0u64; n];
    let mut lower_out = vec![0u64; n];
    for a in &net.arcs {
        let cap = a.capacity.clamp(surrogate) - a.lower;
        d.add_edge(a.tail, a.head, cap);
        lower_in[a.head] += a.lower;
        lower_out[a.tail] += a.lower;
    }
    if let (Some(s), Some(t)) = (net.source, net.sink) {
        d.add_edge(t, s, surrogate);
    }
    let mut supply_edges = Vec::new();
    for v in 0..n {
        if lower_in[v] > 0 {
            supply_edges.push((v, d.add_edge(ss, v, lower_in[v])));
        }
        if lower_out[v] > 0 {
            d.add_edge(v, st, lower_out[v]);
        }
    }
    let demand: u64 = lower_in.iter().sum();
    let routed = d.run(ss, st);

    let unsaturated: Vec<usize> = supply_edges
        .iter()
        .filter(|&&(v, e)| d.flow(e) < lower_in[v])
        .map(|&(v, _)| v)
        .collect();
    let feasible = routed == demand;
    let flows = net
        .arcs
        .iter()
        .enumerate()
        .map(|(i, a)| if feasible { d.flow(i) + a.lower } else { 0 })
        .collect();
    Ok(FlowSolution {
        flows,
        feasible,
        unsaturated,
        deficit: demand - routed,
    })
}

/// Residual graph for Dinic's algorithm; edge `2i` is the `i`-th added edge and
/// `2i + 1` its reverse.
struct Dinic {
    adj: Vec<Vec<usize>>,
    to: Vec<usize>,
    cap: Vec<u64>,
    original: Vec<u64>,
    level: Vec<usize>,
    iter: Vec<usize>,
}

impl Dinic {
    fn new(n: usize) -> Self {
        Dinic {
            adj: vec![Vec::new(); n],
            to: Vec::new(),
            cap: Vec::new(),
            original: Vec::new(),
            level: vec![0; n],
            iter: vec![0; n],
        }
    }

    fn add_edge(&mut self, u: usize, v: usize, c: u64) -> usize {
        let id = self.original.len();
        self.adj[u].push(self.to.len());
        self.to.push(v);
        self.cap.push(c);
        self.adj[v].push(self.to.len());
        self.to.push(u);
        self.cap.push(0);
        self.original.push(c);
        id
    }

    fn flow(&self, id: usize) -> u64 {
        self.original[id] - self.cap[2 * id]
    }

    fn bfs(&mut self, s: usize, t: usize) -> bool {
        self.level.fill(usize::MAX);
        self.level[s] = 0;
        let mut q = VecDeque::from([s]);
        while let Some(u) = q.pop_front() {
            for &e in &self.adj[u] {
                let v = self.to[e];
                if self.cap[e] > 0 && self.level[v] == usize::MAX {
                    self.level[v] = self.level[u] + 1;
                    q.push_back(v);
                }
            }
        }
        self.level[t] != usize::MAX
    }

    /// One augmenting path of the level graph, found iteratively.
    fn augment(&mut self, s: usize, t: usize) -> u64 {
        let mut path: Vec<usize> = Vec::new();
        let mut u = s;
        loop {
            if u == t {
                let push = path.iter().map(|&e| self.cap[e]).min().unwrap_or(0);
                for &e in &path {
                    self.cap[e] -= push;
                    self.cap[e ^ 1] += push;
                }
                return push;
            }
            let mut advanced = false;
            while self.iter[u] < self.adj[u].len() {
                let e = self.adj[u][self.iter[u]];
                let v = self.to[e];
                if self.cap[e] > 0 && self.level[v] == self.level[u] + 1 {
                    path.push(e);
                    u = v;
                    advanced = true;
                    break;
                }
                self.iter[u] += 1;
            }
            if !advanced {
                // Dead end: prune it from the level graph and retreat.
                self.level[u] = usize::MAX;
                match path.pop() {
                    Some(e) => {
                        u = self.to[e ^ 1];
                        self.iter[u] += 1;
                    }
                    None => return 0,
                }
            }
        }
    }

    fn run(&mut self, s: usize, t: usize) -> u64 {
        let mut total = 0u64;
        while self.bfs(s, t) {
            self.iter.fill(0);
            loop {
                let f = self.augment(s, t);
                if f == 0 {
                    break;
                }
                total += f;
            }
        }
        total
    }
}
