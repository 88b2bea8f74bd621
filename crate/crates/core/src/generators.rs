//! Test-graph families: cycles, complete and complete bipartite graphs,
//! circulants, a few named graphs, and random `2k`-regular graphs built as
//! unions of random Hamilton cycles.

use std::collections::HashSet;

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::graph::Graph;

pub const DEFAULT_RETRIES: usize = 10_000;
/// Samples per Hamilton cycle before an attempt starts over.
const CYCLE_RESAMPLES: usize = 200;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GenError {
    #[error("invalid parameters: {0}")]
    InvalidParameters(String),
    #[error("retry budget of {retries} exhausted for n={n}, k={k}, g_min={g_min}")]
    BudgetExhausted {
        n: usize,
        k: usize,
        g_min: usize,
        retries: usize,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum NamedGraph {
    Petersen,
    K5,
    K7,
    K44,
}

impl std::str::FromStr for NamedGraph {
    type Err = GenError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "petersen" => Ok(NamedGraph::Petersen),
            "k5" => Ok(NamedGraph::K5),
            "k7" => Ok(NamedGraph::K7),
            "k44" | "k4,4" | "k_4_4" => Ok(NamedGraph::K44),
            other => Err(GenError::InvalidParameters(format!(
                "unknown named graph {other:?}"
            ))),
        }
    }
}

/// What to generate. Randomized families carry their own seed.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "family", rename_all = "snake_case")]
pub enum GenSpec {
    Cycle {
        n: usize,
    },
    Path {
        n: usize,
    },
    Star {
        leaves: usize,
    },
    Complete {
        n: usize,
    },
    CompleteBipartite {
        a: usize,
        b: usize,
    },
    Circulant {
        n: usize,
        shifts: Vec<usize>,
    },
    RandomRegular {
        n: usize,
        k: usize,
        g_min: usize,
        seed: u64,
        retries: usize,
    },
    Named {
        name: NamedGraph,
    },
}

pub fn generate(spec: &GenSpec) -> Result<Graph, GenError> {
    match *spec {
        GenSpec::Cycle { n } => {
            if n < 3 {
                return Err(GenError::InvalidParameters(format!(
                    "cycle needs n >= 3, got {n}"
                )));
            }
            Ok(cycle(n))
        }
        GenSpec::Path { n } => Ok(path(n)),
        GenSpec::Star { leaves } => Ok(star(leaves)),
        GenSpec::Complete { n } => Ok(complete(n)),
        GenSpec::CompleteBipartite { a, b } => Ok(complete_bipartite(a, b)),
        GenSpec::Circulant { n, ref shifts } => circulant(n, shifts),
        GenSpec::RandomRegular {
            n,
            k,
            g_min,
            seed,
            retries,
        } => random_regular_with_girth(n, k, g_min, seed, retries).map(|(g, _)| g),
        GenSpec::Named { name } => Ok(named(name)),
    }
}

pub fn named(name: NamedGraph) -> Graph {
    match name {
        NamedGraph::Petersen => petersen(),
        NamedGraph::K5 => complete(5),
        NamedGraph::K7 => complete(7),
        NamedGraph::K44 => complete_bipartite(4, 4),
    }
}

pub fn cycle(n: usize) -> Graph {
    Graph::new(n, (0..n).map(|i| (i, (i + 1) % n))).expect("cycle with n >= 3 is simple")
}

/// Path on `n` vertices (`n - 1` edges).
pub fn path(n: usize) -> Graph {
    Graph::new(n, (1..n).map(|i| (i - 1, i))).expect("path is simple")
}

/// Star with centre 0 and `leaves` leaves.
pub fn star(leaves: usize) -> Graph {
    Graph::new(leaves + 1, (1..=leaves).map(|i| (0, i))).expect("star is simple")
}

pub fn complete(n: usize) -> Graph {
    let edges = (0..n).flat_map(|u| (u + 1..n).map(move |v| (u, v)));
    Graph::new(n, edges).expect("complete graph is simple")
}

/// `K_{a,b}` with parts `0..a` and `a..a+b`.
pub fn complete_bipartite(a: usize, b: usize) -> Graph {
    let edges = (0..a).flat_map(|u| (a..a + b).map(move |v| (u, v)));
    Graph::new(a + b, edges).expect("complete bipartite graph is simple")
}

pub fn petersen() -> Graph {
    let mut edges = Vec::with_capacity(15);
    for i in 0..5 {
        edges.push((i, (i + 1) % 5));
        edges.push((i, i + 5));
        edges.push((5 + i, 5 + (i + 2) % 5));
    }
    Graph::new(10, edges).expect("Petersen graph is simple")
}

/// Circulant graph on `Z_n`: `i ~ i ± s` for each shift `s`. Shifts must be
/// distinct, nonzero and at most `n / 2`.
pub fn circulant(n: usize, shifts: &[usize]) -> Result<Graph, GenError> {
    if n < 3 {
        return Err(GenError::InvalidParameters(format!(
            "circulant needs n >= 3, got {n}"
        )));
    }
    let mut seen = HashSet::new();
    for &s in shifts {
        if s == 0 || 2 * s > n {
            return Err(GenError::InvalidParameters(format!(
                "circulant shift {s} must lie in 1..={}",
                n / 2
            )));
        }
        if !seen.insert(s) {
            return Err(GenError::InvalidParameters(format!(
                "repeated circulant shift {s}"
            )));
        }
    }
    let mut edges = HashSet::new();
    for i in 0..n {
        for &s in shifts {
            let j = (i + s) % n;
            edges.insert((i.min(j), i.max(j)));
        }
    }
    Ok(Graph::new(n, edges).expect("validated circulant is simple"))
}

/// Records which Hamilton cycle each edge of a random regular graph came from,
/// so the graph can be 2-factorized without any work.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FactorizationHint {
    /// `factors[i]` is the list of cycles (vertex sequences) of 2-factor `i`.
    pub factors: Vec<Vec<Vec<usize>>>,
}

/// Random simple `2k`-regular graph on `n` vertices with girth at least `g_min`,
/// built as the union of `k` random Hamilton cycles. A cycle that would add a
/// parallel edge or a short cycle is redrawn; `retries * k` draws are allowed
/// in total, and the sequence of draws is a deterministic function of `seed`.
pub fn random_regular_with_girth(
    n: usize,
    k: usize,
    g_min: usize,
    seed: u64,
    retries: usize,
) -> Result<(Graph, FactorizationHint), GenError> {
    if n < 3 || k < 1 {
        return Err(GenError::InvalidParameters(format!(
            "random regular graph needs n >= 3 and k >= 1, got n={n}, k={k}"
        )));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut order: Vec<usize> = (0..n).collect();
    // Budget counts sampled cycles; a cycle that keeps failing restarts the attempt.
    let mut budget = retries.saturating_mul(k);
    'attempt: while budget > 0 {
        let mut used: HashSet<(usize, usize)> = HashSet::with_capacity(n * k);
        let mut cycles = Vec::with_capacity(k);
        while cycles.len() < k {
            let mut fits = false;
            for _ in 0..CYCLE_RESAMPLES {
                if budget == 0 {
                    break 'attempt;
                }
                budget -= 1;
                order.shuffle(&mut rng);
                let new: Vec<(usize, usize)> = (0..n)
                    .map(|i| {
                        let (u, v) = (order[i], order[(i + 1) % n]);
                        (u.min(v), u.max(v))
                    })
                    .collect();
                if new.iter().any(|e| used.contains(e)) {
                    continue;
                }
                // Girth only drops as edges are added, so check each partial union.
                let partial = Graph::new(n, used.iter().copied().chain(new.iter().copied()))
                    .expect("rejection keeps the union simple");
                if !partial.girth_at_least(g_min) {
                    continue;
                }
                used.extend(new);
                fits = true;
                break;
            }
            if !fits {
                continue 'attempt;
            }
            cycles.push(order.clone());
        }
        let g = Graph::new(n, used.iter().copied()).expect("rejection keeps the union simple");
        let factors = cycles.into_iter().map(|c| vec![c]).collect();
        return Ok((g, FactorizationHint { factors }));
    }
    Err(GenError::BudgetExhausted {
        n,
        k,
        g_min,
        retries,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::Girth;

    #[test]
    fn simple_families() {
        let c7 = generate(&GenSpec::Cycle { n: 7 }).unwrap();
        assert!(c7.is_regular(2));
        assert_eq!(c7.girth(), Girth::Finite(7));

        let k44 = generate(&GenSpec::CompleteBipartite { a: 4, b: 4 }).unwrap();
        assert!(k44.is_regular(4));
        assert_eq!(k44.girth(), Girth::Finite(4));

        assert!(named(NamedGraph::K7).is_regular(6));
        assert!(petersen().is_regular(3));
    }

    #[test]
    fn circulant_13_1_5() {
        let g = generate(&GenSpec::Circulant {
            n: 13,
            shifts: vec![1, 5],
        })
        .unwrap();
        assert!(g.is_regular(4));
        // No three of ±1, ±5 sum to 0 mod 13; 0-1-6-5-0 is a 4-cycle.
        assert_eq!(g.girth(), Girth::Finite(4));
    }

    #[test]
    fn circulant_rejects_bad_shifts() {
        assert!(circulant(8, &[0]).is_err());
        assert!(circulant(8, &[5]).is_err());
        assert!(circulant(8, &[1, 1]).is_err());
        let g = circulant(8, &[4]).unwrap();
        assert!(g.is_regular(1));
    }

    #[test]
    fn random_regular_hamilton_cycle() {
        for seed in 0..5 {
            let (g, hint) = random_regular_with_girth(20, 1, 20, seed, DEFAULT_RETRIES).unwrap();
            assert!(g.is_regular(2));
            assert_eq!(g.girth(), Girth::Finite(20));
            assert_eq!(hint.factors.len(), 1);
            assert_eq!(hint.factors[0][0].len(), 20);
        }
    }

    #[test]
    fn random_regular_degree_and_girth() {
        let (g, hint) = random_regular_with_girth(30, 2, 4, 1, DEFAULT_RETRIES).unwrap();
        assert!(g.is_regular(4));
        assert!(g.girth().at_least(4));
        // hint factors partition the edges
        let mut count = 0;
        for f in &hint.factors {
            for c in f {
                for i in 0..c.len() {
                    assert!(g.has_edge(c[i], c[(i + 1) % c.len()]));
                    count += 1;
                }
            }
        }
        assert_eq!(count, g.edge_count());
    }

    #[test]
    fn random_regular_exhausts_budget() {
        assert!(matches!(
            random_regular_with_girth(6, 3, 7, 0, DEFAULT_RETRIES),
            Err(GenError::BudgetExhausted { .. })
        ));
    }

    #[test]
    fn same_seed_same_graph() {
        let a = random_regular_with_girth(25, 2, 4, 42, DEFAULT_RETRIES)
            .unwrap()
            .0;
        let b = random_regular_with_girth(25, 2, 4, 42, DEFAULT_RETRIES)
            .unwrap()
            .0;
        assert_eq!(a.serialize(), b.serialize());
    }
}
