//! Independent checking of certificates, plus exhaustive oracles.
//!
//! Nothing here calls the factorization, flow, transversal or forest code;
//! only [`Graph`] is shared with the pipeline.

use std::collections::{BTreeMap, HashSet};
use std::fs;
use std::io;
use std::path::{Path, PathBuf};
use std::sync::Mutex;
use std::time::{Duration, Instant};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::factorize::TwoFactorization;
use crate::forest::DecompositionCertificate;
use crate::graph::{EdgeId, Graph, DIGEST_ALGORITHM};
use crate::transversal::{RegimeTag, TransversalMode};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Check {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct VerificationReport {
    pub checks: Vec<Check>,
    pub overall: bool,
}

impl VerificationReport {
    pub fn failed(&self) -> impl Iterator<Item = &Check> {
        self.checks.iter().filter(|c| !c.passed)
    }

    pub fn check(&self, name: &str) -> Option<&Check> {
        self.checks.iter().find(|c| c.name == name)
    }
}

struct Builder {
    checks: Vec<Check>,
}

impl Builder {
    fn record(&mut self, name: &str, result: Result<String, String>) {
        let (passed, detail) = match result {
            Ok(d) => (true, d),
            Err(d) => (false, d),
        };
        self.checks.push(Check {
            name: name.to_string(),
            passed,
            detail,
        });
    }

    fn finish(self) -> VerificationReport {
        let overall = self.checks.iter().all(|c| c.passed);
        VerificationReport {
            checks: self.checks,
            overall,
        }
    }
}

/// `(delta, t, condition holds)` for a tag, from the regime table.
fn regime_row(tag: RegimeTag, k: usize, girth: usize) -> (usize, usize, bool) {
    match tag {
        RegimeTag::G2K => (1, 1, girth >= 2 * k),
        RegimeTag::GK => (2, 2, girth >= k),
        RegimeTag::GK2 => (4, 3, 2 * girth >= k),
        RegimeTag::GK4 => (8, 5, 4 * girth >= k),
        RegimeTag::G2KC(c) => (c, (3 * c + 2).div_ceil(2), c >= 1 && c * girth >= 2 * k),
    }
}

fn lookup(g: &Graph, u: usize, v: usize) -> Result<usize, String> {
    if u >= g.vertex_count() || v >= g.vertex_count() {
        return Err(format!("vertex out of range in ({u},{v})"));
    }
    g.edge_id(u, v)
        .map(EdgeId::index)
        .ok_or_else(|| format!("({u},{v}) is not an edge"))
}

/// Degree <= 2 and acyclic, by walking each path from its ends.
fn linear_forest_check(n: usize, edges: &[(usize, usize)]) -> Result<(), String> {
    let mut adj: Vec<Vec<usize>> = vec![Vec::new(); n];
    for &(u, v) in edges {
        adj[u].push(v);
        adj[v].push(u);
        if adj[u].len() > 2 || adj[v].len() > 2 {
            let w = if adj[u].len() > 2 { u } else { v };
            return Err(format!("vertex {w} has degree 3"));
        }
    }
    let mut seen = vec![false; n];
    let mut covered = 0usize;
    for s in 0..n {
        if seen[s] || adj[s].len() != 1 {
            continue;
        }
        let (mut prev, mut cur) = (usize::MAX, s);
        seen[s] = true;
        loop {
            let next = adj[cur].iter().copied().find(|&w| w != prev);
            match next {
                Some(w) => {
                    covered += 1;
                    seen[w] = true;
                    prev = cur;
                    cur = w;
                }
                None => break,
            }
        }
    }
    // Every edge on a path is reached from an endpoint; leftovers lie on cycles.
    if covered != edges.len() {
        let v = (0..n)
            .find(|&v| !seen[v] && !adj[v].is_empty())
            .unwrap_or(0);
        return Err(format!("cycle through vertex {v}"));
    }
    Ok(())
}

/// Re-checks every claim in `cert` against `g` from scratch.
pub fn verify_certificate(g: &Graph, cert: &DecompositionCertificate) -> VerificationReport {
    let mut b = Builder { checks: Vec::new() };
    let n = g.vertex_count();
    let m = g.edge_count();
    let k = cert.k;

    b.record(
        "digest",
        if cert.digest_algorithm != DIGEST_ALGORITHM {
            Err(format!(
                "unsupported digest algorithm {}",
                cert.digest_algorithm
            ))
        } else if cert.graph_digest != g.digest() {
            Err("graph digest mismatch".to_string())
        } else {
            Ok(cert.graph_digest.clone())
        },
    );

    b.record(
        "dimensions",
        if cert.n == n && cert.m == m {
            Ok(format!("n={n} m={m}"))
        } else {
            Err(format!(
                "certificate says n={} m={}, graph has n={n} m={m}",
                cert.n, cert.m
            ))
        },
    );

    b.record(
        "regularity",
        if k >= 1 && (0..n).all(|v| g.degree(v) == 2 * k) {
            Ok(format!("{}-regular", 2 * k))
        } else {
            Err(format!("graph is not {}-regular", 2 * k))
        },
    );

    let girth = g.girth().finite();
    b.record(
        "girth",
        if cert.girth == girth {
            Ok(girth.map_or("inf".to_string(), |g| g.to_string()))
        } else {
            Err(format!(
                "certificate girth {:?}, measured {girth:?}",
                cert.girth
            ))
        },
    );

    let (delta, t, holds) = regime_row(cert.regime.tag, k, girth.unwrap_or(0));
    b.record(
        "regime",
        if !holds {
            Err(format!(
                "condition of {} fails for k={k}, girth={girth:?}",
                cert.regime.tag
            ))
        } else if delta != cert.regime.delta || t != cert.regime.t {
            Err(format!(
                "{} has delta={delta}, t={t}; certificate says delta={}, t={}",
                cert.regime.tag, cert.regime.delta, cert.regime.t
            ))
        } else if cert.claimed_bound != k + t {
            Err(format!(
                "claimed bound {} != k + t = {}",
                cert.claimed_bound,
                k + t
            ))
        } else {
            Ok(format!("{} delta={delta} t={t}", cert.regime.tag))
        },
    );

    // Factor cycles as edge-index lists, reused by the transversal check.
    let mut factor_cycles: Vec<Vec<Vec<usize>>> = Vec::new();
    let factor_result = (|| -> Result<String, String> {
        if cert.factors.len() != k {
            return Err(format!("{} factors, expected {k}", cert.factors.len()));
        }
        let mut owner = vec![usize::MAX; m];
        for (fi, factor) in cert.factors.iter().enumerate() {
            let mut visits = vec![0usize; n];
            let mut cycles = Vec::new();
            for (ci, cyc) in factor.iter().enumerate() {
                if cyc.len() < 3 {
                    return Err(format!("cycle ({fi},{ci}) has length {}", cyc.len()));
                }
                let mut edges = Vec::with_capacity(cyc.len());
                for i in 0..cyc.len() {
                    let (u, w) = (cyc[i], cyc[(i + 1) % cyc.len()]);
                    let e = lookup(g, u, w).map_err(|e| format!("cycle ({fi},{ci}): {e}"))?;
                    if owner[e] != usize::MAX {
                        return Err(format!("edge ({u},{w}) used twice"));
                    }
                    owner[e] = fi;
                    visits[u] += 1;
                    edges.push(e);
                }
                cycles.push(edges);
            }
            if let Some(v) = (0..n).find(|&v| visits[v] != 1) {
                return Err(format!("factor {fi} visits vertex {v} {} times", visits[v]));
            }
            factor_cycles.push(cycles);
        }
        if owner.contains(&usize::MAX) {
            return Err("factors do not cover every edge".to_string());
        }
        Ok(format!("{k} factors"))
    })();
    let factors_ok = factor_result.is_ok();
    b.record("factorization", factor_result);

    let tr = &cert.transversal;
    let mut in_h = vec![false; m];
    let transversal_result = (|| -> Result<String, String> {
        let mut ids = Vec::with_capacity(tr.edges.len());
        for &[u, v] in &tr.edges {
            let e = lookup(g, u, v)?;
            if in_h[e] {
                return Err(format!("edge ({u},{v}) listed twice"));
            }
            in_h[e] = true;
            ids.push(e);
        }
        if !factors_ok {
            return Err("cannot check hits without a valid factorization".to_string());
        }
        for (fi, cycles) in factor_cycles.iter().enumerate() {
            for (ci, cyc) in cycles.iter().enumerate() {
                if !cyc.iter().any(|&e| in_h[e]) {
                    return Err(format!("cycle ({fi},{ci}) unhit"));
                }
            }
        }
        let mut deg = vec![0usize; n];
        for &[u, v] in &tr.edges {
            deg[u] += 1;
            deg[v] += 1;
        }
        let true_max = deg.iter().copied().max().unwrap_or(0);
        match tr.mode {
            TransversalMode::Strict => {
                if true_max > tr.delta {
                    return Err(format!("max degree {true_max} exceeds delta {}", tr.delta));
                }
                Ok(format!("strict, max degree {true_max}"))
            }
            TransversalMode::Paper => {
                let charged = tr.charged.as_ref().ok_or("paper mode without charges")?;
                if charged.len() != tr.edges.len() {
                    return Err("charge list length mismatch".to_string());
                }
                let mut load = vec![0usize; n];
                for (&[u, v], &c) in tr.edges.iter().zip(charged) {
                    if c != u && c != v {
                        return Err(format!("({u},{v}) charged to non-endpoint {c}"));
                    }
                    load[c] += 1;
                }
                let max_load = load.iter().copied().max().unwrap_or(0);
                if max_load > tr.delta {
                    return Err(format!("charge {max_load} exceeds delta {}", tr.delta));
                }
                Ok(format!(
                    "paper, max charge {max_load}, max degree {true_max}"
                ))
            }
        }
    })();
    b.record("transversal", transversal_result);

    let mut count = vec![0usize; m];
    let partition_result = (|| -> Result<String, String> {
        for forest in &cert.forests {
            for &[u, v] in forest {
                count[lookup(g, u, v)?] += 1;
            }
        }
        if let Some(e) = (0..m).find(|&e| count[e] != 1) {
            let (u, v) = g.edges()[e];
            return Err(format!("edge ({u},{v}) appears {} times", count[e]));
        }
        Ok(format!(
            "{} forests partition {m} edges",
            cert.forests.len()
        ))
    })();
    let partition_ok = partition_result.is_ok();
    b.record("partition", partition_result);

    let linear_result = (|| -> Result<String, String> {
        for (i, forest) in cert.forests.iter().enumerate() {
            if forest.iter().any(|&[u, v]| u >= n || v >= n) {
                return Err(format!("forest {i}: vertex out of range"));
            }
            let pairs: Vec<(usize, usize)> = forest.iter().map(|&[u, v]| (u, v)).collect();
            linear_forest_check(n, &pairs).map_err(|e| format!("forest {i}: {e}"))?;
        }
        Ok("all linear".to_string())
    })();
    b.record("linear_forests", linear_result);

    // The first k forests must be the factors with H removed.
    let residual_result = (|| -> Result<String, String> {
        if !factors_ok || !partition_ok || cert.forests.len() < k {
            return Err("skipped: factorization or partition invalid".to_string());
        }
        for (fi, cycles) in factor_cycles.iter().enumerate() {
            let want: HashSet<usize> = cycles
                .iter()
                .flatten()
                .copied()
                .filter(|&e| !in_h[e])
                .collect();
            let got: HashSet<usize> = cert.forests[fi]
                .iter()
                .filter_map(|&[u, v]| g.edge_id(u, v).map(EdgeId::index))
                .collect();
            if want != got {
                return Err(format!("forest {fi} is not factor {fi} minus H"));
            }
        }
        Ok(format!("{k} residual forests"))
    })();
    b.record("residuals", residual_result);

    b.record(
        "counts",
        if cert.achieved_count != cert.forests.len() {
            Err(format!(
                "achieved_count {} but {} forests listed",
                cert.achieved_count,
                cert.forests.len()
            ))
        } else if cert.achieved_count > cert.claimed_bound {
            Err(format!(
                "achieved {} exceeds claimed bound {}",
                cert.achieved_count, cert.claimed_bound
            ))
        } else {
            Ok(format!("{} <= {}", cert.achieved_count, cert.claimed_bound))
        },
    );

    b.finish()
}

/// Result of the exact linear-arboricity oracle.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", content = "value", rename_all = "snake_case")]
pub enum OracleLa {
    Exact(usize),
    /// The budget ran out; every count below this was refuted.
    LowerBoundOnly(usize),
}

impl OracleLa {
    pub fn value(self) -> usize {
        match self {
            OracleLa::Exact(v) | OracleLa::LowerBoundOnly(v) => v,
        }
    }

    pub fn exact(self) -> Option<usize> {
        match self {
            OracleLa::Exact(v) => Some(v),
            OracleLa::LowerBoundOnly(_) => None,
        }
    }
}

/// Exact linear arboricity by backtracking, starting from the degree floor
/// (`ceil(D/2)`, or `D/2 + 1` for a `D`-regular graph with `D` even).
pub fn oracle_la(g: &Graph, budget: Duration) -> OracleLa {
    let m = g.edge_count();
    if m == 0 {
        return OracleLa::Exact(0);
    }
    let d = g.max_degree();
    let mut target = if d.is_multiple_of(2) && g.is_regular(d) {
        d / 2 + 1
    } else {
        d.div_ceil(2)
    };
    let deadline = Instant::now() + budget;
    // Edges in DFS order of first discovery keep partial colourings connected.
    let order = dfs_edge_order(g);
    loop {
        let mut s = LaSearch {
            n: g.vertex_count(),
            edges: &order,
            colors: target,
            mate: vec![[usize::MAX; 2]; target * g.vertex_count()],
            assign: vec![0; order.len()],
            deadline,
            steps: 0,
        };
        match s.go(0, 0) {
            Some(true) => return OracleLa::Exact(target),
            Some(false) => target += 1,
            None => return OracleLa::LowerBoundOnly(target),
        }
        if target > m {
            return OracleLa::Exact(m);
        }
    }
}

fn dfs_edge_order(g: &Graph) -> Vec<(usize, usize)> {
    let n = g.vertex_count();
    let mut seen = vec![false; n];
    let mut taken = HashSet::new();
    let mut out = Vec::with_capacity(g.edge_count());
    for s in 0..n {
        if seen[s] {
            continue;
        }
        let mut stack = vec![s];
        while let Some(u) = stack.pop() {
            if seen[u] {
                continue;
            }
            seen[u] = true;
            for &w in g.neighbors(u) {
                if taken.insert((u.min(w), u.max(w))) {
                    out.push((u.min(w), u.max(w)));
                }
                if !seen[w] {
                    stack.push(w);
                }
            }
        }
    }
    out
}

struct LaSearch<'a> {
    n: usize,
    edges: &'a [(usize, usize)],
    colors: usize,
    /// `mate[c * n + v]`: up to two neighbours of `v` in colour `c`.
    mate: Vec<[usize; 2]>,
    assign: Vec<usize>,
    deadline: Instant,
    steps: u64,
}

impl LaSearch<'_> {
    fn free_slot(&self, c: usize, v: usize) -> Option<usize> {
        self.mate[c * self.n + v]
            .iter()
            .position(|&x| x == usize::MAX)
    }

    /// Follows the colour-`c` path starting at `from` and returns its other end.
    fn path_end(&self, c: usize, from: usize) -> usize {
        let (mut prev, mut cur) = (usize::MAX, from);
        loop {
            let next = self.mate[c * self.n + cur]
                .iter()
                .copied()
                .find(|&w| w != usize::MAX && w != prev);
            match next {
                Some(w) => {
                    prev = cur;
                    cur = w;
                }
                None => return cur,
            }
        }
    }

    /// `Some(true)` found, `Some(false)` refuted, `None` out of time.
    fn go(&mut self, i: usize, opened: usize) -> Option<bool> {
        if i == self.edges.len() {
            return Some(true);
        }
        self.steps += 1;
        if self.steps.is_multiple_of(2048) && Instant::now() >= self.deadline {
            return None;
        }
        let (u, v) = self.edges[i];
        for c in 0..self.colors.min(opened + 1) {
            let (Some(su), Some(sv)) = (self.free_slot(c, u), self.free_slot(c, v)) else {
                continue;
            };
            if self.path_end(c, u) == v {
                continue;
            }
            self.mate[c * self.n + u][su] = v;
            self.mate[c * self.n + v][sv] = u;
            self.assign[i] = c;
            let r = self.go(i + 1, opened.max(c + 1));
            self.mate[c * self.n + u][su] = usize::MAX;
            self.mate[c * self.n + v][sv] = usize::MAX;
            if r != Some(false) {
                return r;
            }
        }
        Some(false)
    }
}

/// Result of the exhaustive transversal search.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum TransversalOracle {
    /// A smallest valid transversal (lowest bitmask among the smallest).
    Minimal(Vec<EdgeId>),
    NoneExists,
    /// Too many edges to enumerate subsets.
    OutOfReach,
}

/// Largest edge count [`oracle_transversal`] will enumerate.
pub const ORACLE_TRANSVERSAL_MAX_EDGES: usize = 24;

/// Enumerates edge subsets to find one that meets every factor cycle with
/// true maximum degree at most `delta`.
pub fn oracle_transversal(g: &Graph, tf: &TwoFactorization, delta: usize) -> TransversalOracle {
    let m = g.edge_count();
    if m > ORACLE_TRANSVERSAL_MAX_EDGES {
        return TransversalOracle::OutOfReach;
    }
    let cycle_masks: Vec<u32> = tf
        .cycles()
        .map(|(_, c)| c.edges().iter().fold(0u32, |acc, e| acc | (1 << e.index())))
        .collect();
    let incident: Vec<u32> = (0..g.vertex_count())
        .map(|v| {
            g.neighbors(v).iter().fold(0u32, |acc, &w| {
                acc | (1 << g.edge_id(v, w).expect("neighbour edge").index())
            })
        })
        .collect();
    let mut best: Option<u32> = None;
    for mask in 0u32..(1u32 << m) {
        if let Some(b) = best {
            if mask.count_ones() >= b.count_ones() {
                continue;
            }
        }
        if cycle_masks.iter().all(|&c| c & mask != 0)
            && incident
                .iter()
                .all(|&i| (i & mask).count_ones() as usize <= delta)
        {
            best = Some(mask);
        }
    }
    match best {
        Some(mask) => {
            TransversalOracle::Minimal((0..m).filter(|&i| mask >> i & 1 == 1).map(EdgeId).collect())
        }
        None => TransversalOracle::NoneExists,
    }
}

#[derive(Debug, Error)]
pub enum CacheError {
    #[error("reading oracle cache {path}: {source}")]
    Io { path: PathBuf, source: io::Error },
    #[error("parsing oracle cache {path}: {source}")]
    Parse {
        path: PathBuf,
        source: serde_json::Error,
    },
}

/// Oracle results keyed by graph digest, persisted as JSON. Exact results
/// are reused; lower bounds are kept only until an exact value replaces them.
#[derive(Debug)]
pub struct OracleCache {
    path: PathBuf,
    entries: Mutex<BTreeMap<String, OracleLa>>,
}

impl OracleCache {
    pub fn open(path: impl Into<PathBuf>) -> Result<Self, CacheError> {
        let path = path.into();
        let entries = match fs::read_to_string(&path) {
            Ok(text) => serde_json::from_str(&text).map_err(|source| CacheError::Parse {
                path: path.clone(),
                source,
            })?,
            Err(e) if e.kind() == io::ErrorKind::NotFound => BTreeMap::new(),
            Err(source) => return Err(CacheError::Io { path, source }),
        };
        Ok(OracleCache {
            path,
            entries: Mutex::new(entries),
        })
    }

    pub fn path(&self) -> &Path {
        &self.path
    }

    pub fn get(&self, digest: &str) -> Option<OracleLa> {
        self.entries
            .lock()
            .expect("cache lock")
            .get(digest)
            .copied()
    }

    /// Computes (or reuses) the oracle value for `g`.
    pub fn oracle_la(&self, g: &Graph, budget: Duration) -> OracleLa {
        let digest = g.digest();
        if let Some(hit @ OracleLa::Exact(_)) = self.get(&digest) {
            return hit;
        }
        let value = oracle_la(g, budget);
        self.entries
            .lock()
            .expect("cache lock")
            .insert(digest, value);
        value
    }

    /// Writes the cache through a temporary file and a rename.
    pub fn save(&self) -> Result<(), CacheError> {
        let entries = self.entries.lock().expect("cache lock");
        let text = serde_json::to_string_pretty(&*entries).expect("cache serializes");
        let tmp = self.path.with_extension("tmp");
        let io_err = |source| CacheError::Io {
            path: self.path.clone(),
            source,
        };
        fs::write(&tmp, text + "\n").map_err(io_err)?;
        fs::rename(&tmp, &self.path).map_err(io_err)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::factorize::two_factorize;
    use crate::forest::{decompose, DecomposeOptions};
    use crate::generators;

    const BUDGET: Duration = Duration::from_secs(20);

    #[test]
    fn oracle_on_named_graphs() {
        assert_eq!(oracle_la(&generators::cycle(5), BUDGET), OracleLa::Exact(2));
        assert_eq!(oracle_la(&generators::path(5), BUDGET), OracleLa::Exact(1));
        assert_eq!(
            oracle_la(&generators::complete(5), BUDGET),
            OracleLa::Exact(3)
        );
        assert_eq!(
            oracle_la(&generators::complete(4), BUDGET),
            OracleLa::Exact(2)
        );
        assert_eq!(
            oracle_la(&generators::petersen(), BUDGET),
            OracleLa::Exact(2)
        );
        assert_eq!(oracle_la(&generators::star(5), BUDGET), OracleLa::Exact(3));
        assert_eq!(
            oracle_la(&generators::complete_bipartite(4, 4), BUDGET),
            OracleLa::Exact(3)
        );
        assert_eq!(oracle_la(&Graph::empty(3), BUDGET), OracleLa::Exact(0));
    }

    #[test]
    fn oracle_k7_is_four() {
        // 6-regular: floor 4, reached by the known decomposition of K_7.
        assert_eq!(
            oracle_la(&generators::complete(7), BUDGET),
            OracleLa::Exact(4)
        );
    }

    #[test]
    fn linear_forest_checker() {
        assert!(linear_forest_check(4, &[(0, 1), (1, 2), (2, 3)]).is_ok());
        assert!(linear_forest_check(3, &[(0, 1), (1, 2), (0, 2)]).is_err());
        assert!(linear_forest_check(4, &[(0, 1), (0, 2), (0, 3)]).is_err());
        assert!(linear_forest_check(6, &[(0, 1), (3, 4), (4, 5), (3, 5)]).is_err());
    }

    #[test]
    fn certificate_tampering_is_caught() {
        let g = generators::complete_bipartite(4, 4);
        let cert = decompose(&g, 2, &DecomposeOptions::default())
            .unwrap()
            .certificate;
        assert!(verify_certificate(&g, &cert).overall);

        let mut bad = cert.clone();
        let dup = bad.forests.last().unwrap()[0];
        bad.forests[0].push(dup);
        let r = verify_certificate(&g, &bad);
        assert!(!r.check("partition").unwrap().passed);

        let mut bad = cert.clone();
        bad.graph_digest = "00".repeat(32);
        assert!(!verify_certificate(&g, &bad).check("digest").unwrap().passed);

        let mut bad = cert.clone();
        bad.claimed_bound = 2;
        let r = verify_certificate(&g, &bad);
        assert!(!r.check("regime").unwrap().passed);
        assert!(!r.check("counts").unwrap().passed);

        let mut bad = cert.clone();
        bad.transversal.edges.clear();
        bad.transversal.charged = bad.transversal.charged.map(|_| Vec::new());
        assert!(
            !verify_certificate(&g, &bad)
                .check("transversal")
                .unwrap()
                .passed
        );

        let mut bad = cert;
        bad.factors.swap(0, 1);
        assert!(
            !verify_certificate(&g, &bad)
                .check("residuals")
                .unwrap()
                .passed
        );

        let other = generators::complete(5);
        assert!(!verify_certificate(&other, &bad).overall);
    }

    #[test]
    fn merged_forests_with_a_cycle_fail() {
        let g = generators::cycle(6);
        let mut cert = decompose(&g, 1, &DecomposeOptions::default())
            .unwrap()
            .certificate;
        let all: Vec<[usize; 2]> = cert.forests.concat();
        cert.forests = vec![all];
        cert.achieved_count = 1;
        let r = verify_certificate(&g, &cert);
        assert!(!r.check("linear_forests").unwrap().passed);
    }

    #[test]
    fn transversal_oracle_matches_expectations() {
        let g = generators::cycle(5);
        let tf = two_factorize(&g, 1).unwrap();
        assert!(
            matches!(oracle_transversal(&g, &tf, 1), TransversalOracle::Minimal(v) if v.len() == 1)
        );
        assert_eq!(
            oracle_transversal(&g, &tf, 0),
            TransversalOracle::NoneExists
        );
        let k5 = generators::complete(5);
        let tf = two_factorize(&k5, 2).unwrap();
        assert!(
            matches!(oracle_transversal(&k5, &tf, 1), TransversalOracle::Minimal(v) if v.len() == 2)
        );
        let big = generators::circulant(13, &[1, 5]).unwrap();
        let tf = two_factorize(&big, 2).unwrap();
        assert_eq!(
            oracle_transversal(&big, &tf, 1),
            TransversalOracle::OutOfReach
        );
    }

    #[test]
    fn cache_round_trip() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("cache.json");
        let cache = OracleCache::open(&path).unwrap();
        let g = generators::complete(5);
        assert_eq!(cache.oracle_la(&g, BUDGET), OracleLa::Exact(3));
        cache.save().unwrap();
        let again = OracleCache::open(&path).unwrap();
        assert_eq!(again.get(&g.digest()), Some(OracleLa::Exact(3)));
    }
}
