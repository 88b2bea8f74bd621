//! Command-line front end. Exit codes: 0 success, 1 domain failure, 2 usage error.

use std::ffi::OsString;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::time::Duration;

use clap::{Parser, Subcommand, ValueEnum};

use crate::embed::{default_layers, embed};
use crate::factorize::{two_factorize, TwoFactorization};
use crate::forest::{
    decompose, decompose_with_factorization, DecomposeOptions, DecompositionCertificate,
};
use crate::generators::{self, FactorizationHint, GenSpec, NamedGraph, DEFAULT_RETRIES};
use crate::graph::Graph;
use crate::sweep::{run_sweep, SweepSpec};
use crate::transversal::{build_network, DEFAULT_C_MAX};
use crate::verify::{oracle_la, verify_certificate, OracleCache, OracleLa};

#[derive(Debug, Parser)]
#[command(
    name = "linarb",
    version,
    about = "Certified linear-forest decompositions of regular graphs"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum Family {
    Cycle,
    Path,
    Star,
    Complete,
    CompleteBipartite,
    Circulant,
    RandomRegular,
    Named,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Generate a graph as an edge list.
    Gen {
        #[arg(long, value_enum)]
        family: Family,
        /// Vertex count (cycle, path, complete, circulant, random-regular).
        #[arg(long)]
        n: Option<usize>,
        /// Half the degree (random-regular).
        #[arg(short, long)]
        k: Option<usize>,
        /// Minimum girth (random-regular).
        #[arg(long, default_value_t = 3)]
        g_min: usize,
        #[arg(long)]
        leaves: Option<usize>,
        /// Part sizes (complete-bipartite).
        #[arg(long)]
        a: Option<usize>,
        #[arg(long)]
        b: Option<usize>,
        /// Comma-separated shifts (circulant).
        #[arg(long, value_delimiter = ',')]
        shifts: Vec<usize>,
        /// petersen, k5, k7 or k44 (named).
        #[arg(long)]
        name: Option<String>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = DEFAULT_RETRIES)]
        retries: usize,
        /// Also write the generator's 2-factorization (random-regular).
        #[arg(long)]
        hint: Option<PathBuf>,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Print the girth ("inf" for forests).
    Girth { file: PathBuf },
    /// Split a 2k-regular graph into k 2-factors.
    Factorize {
        file: PathBuf,
        #[arg(short, long)]
        k: usize,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Run the full pipeline and write a certificate.
    Decompose {
        file: PathBuf,
        #[arg(short, long)]
        k: usize,
        /// Skip the flow network; bound the true degree of H directly.
        #[arg(long)]
        strict: bool,
        /// Strict-search budget in milliseconds.
        #[arg(long, default_value_t = 10_000)]
        time_budget: u64,
        /// Exact H-split budget in milliseconds.
        #[arg(long, default_value_t = 10_000)]
        exact_budget: u64,
        #[arg(long, default_value_t = DEFAULT_C_MAX)]
        c_max: usize,
        /// Use this 2-factorization (JSON from `factorize` or `gen --hint`).
        #[arg(long)]
        hint: Option<PathBuf>,
        /// Write the transversal flow network for the planned delta.
        #[arg(long)]
        dump_network: Option<PathBuf>,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Independently re-check a certificate.
    Verify {
        graph: PathBuf,
        certificate: PathBuf,
    },
    /// Exact linear arboricity by exhaustive search.
    OracleLa {
        file: PathBuf,
        /// Budget in milliseconds.
        #[arg(long, default_value_t = 60_000)]
        budget: u64,
        /// JSON cache keyed by graph digest.
        #[arg(long)]
        cache: Option<PathBuf>,
    },
    /// Embed a graph as an induced subgraph of a regular graph of large girth.
    Embed {
        file: PathBuf,
        #[arg(long)]
        delta: usize,
        #[arg(long)]
        girth: usize,
        /// Starting layer count (even); defaults to 2 * girth * (delta + 1).
        #[arg(long)]
        layers: Option<usize>,
        #[arg(short, long)]
        output: PathBuf,
        /// Sidecar JSON path; defaults to OUTPUT with ".json" appended.
        #[arg(long)]
        sidecar: Option<PathBuf>,
    },
    /// Run a grid of random instances.
    Sweep {
        #[arg(long)]
        spec: PathBuf,
        #[arg(short, long)]
        output: PathBuf,
        #[arg(long, default_value_t = 1)]
        jobs: usize,
        /// Record wall time per instance (makes output non-reproducible).
        #[arg(long)]
        timing: bool,
    },
}

/// A failure with a one-line diagnostic.
#[derive(Debug)]
pub enum Failure {
    Domain(String),
    Usage(String),
}

impl<E: std::fmt::Display> From<E> for Failure {
    fn from(e: E) -> Self {
        Failure::Domain(e.to_string())
    }
}

type Out<'a> = &'a mut dyn Write;

fn read(path: &Path) -> Result<String, Failure> {
    fs::read_to_string(path).map_err(|e| Failure::Domain(format!("{}: {e}", path.display())))
}

fn write(path: &Path, text: &str) -> Result<(), Failure> {
    fs::write(path, text).map_err(|e| Failure::Domain(format!("{}: {e}", path.display())))
}

fn load_graph(path: &Path) -> Result<Graph, Failure> {
    Graph::parse(&read(path)?).map_err(|e| Failure::Domain(format!("{}: {e}", path.display())))
}

fn json<T: serde::Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("value serializes");
    s.push('\n');
    s
}

fn emit(out: Out, path: Option<&Path>, text: &str) -> Result<(), Failure> {
    match path {
        Some(p) => write(p, text),
        None => Ok(out.write_all(text.as_bytes())?),
    }
}

/// Parses `args` (including the program name) and runs the command.
pub fn run<I, T>(args: I, out: Out, err: Out) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let text = e.render().to_string();
            let _ = if code == 0 {
                out.write_all(text.as_bytes())
            } else {
                err.write_all(text.as_bytes())
            };
            return code;
        }
    };
    match execute(cli.command, out, err) {
        Ok(code) => code,
        Err(Failure::Domain(msg)) => {
            let _ = writeln!(err, "error: {msg}");
            1
        }
        Err(Failure::Usage(msg)) => {
            let _ = writeln!(err, "usage error: {msg}");
            2
        }
    }
}

fn need<T>(value: Option<T>, flag: &str, family: &str) -> Result<T, Failure> {
    value.ok_or_else(|| Failure::Usage(format!("--{flag} is required for family {family}")))
}

fn execute(cmd: Command, out: Out, err: Out) -> Result<i32, Failure> {
    match cmd {
        Command::Gen {
            family,
            n,
            k,
            g_min,
            leaves,
            a,
            b,
            shifts,
            name,
            seed,
            retries,
            hint,
            output,
        } => {
            let fam = format!("{family:?}").to_lowercase();
            let spec = match family {
                Family::Cycle => GenSpec::Cycle {
                    n: need(n, "n", &fam)?,
                },
                Family::Path => GenSpec::Path {
                    n: need(n, "n", &fam)?,
                },
                Family::Star => GenSpec::Star {
                    leaves: need(leaves, "leaves", &fam)?,
                },
                Family::Complete => GenSpec::Complete {
                    n: need(n, "n", &fam)?,
                },
                Family::CompleteBipartite => GenSpec::CompleteBipartite {
                    a: need(a, "a", &fam)?,
                    b: need(b, "b", &fam)?,
                },
                Family::Circulant => GenSpec::Circulant {
                    n: need(n, "n", &fam)?,
                    shifts,
                },
                Family::RandomRegular => GenSpec::RandomRegular {
                    n: need(n, "n", &fam)?,
                    k: need(k, "k", &fam)?,
                    g_min,
                    seed,
                    retries,
                },
                Family::Named => GenSpec::Named {
                    name: need(name, "name", &fam)?.parse::<NamedGraph>()?,
                },
            };
            let graph = match (&spec, &hint) {
                (
                    GenSpec::RandomRegular {
                        n,
                        k,
                        g_min,
                        seed,
                        retries,
                    },
                    Some(path),
                ) => {
                    let (g, h) =
                        generators::random_regular_with_girth(*n, *k, *g_min, *seed, *retries)?;
                    write(path, &json(&h))?;
                    g
                }
                (_, Some(_)) => {
                    return Err(Failure::Usage(
                        "--hint is only available for random-regular".into(),
                    ))
                }
                _ => generators::generate(&spec)?,
            };
            emit(out, output.as_deref(), &graph.serialize())?;
            Ok(0)
        }
        Command::Girth { file } => {
            writeln!(out, "{}", load_graph(&file)?.girth())?;
            Ok(0)
        }
        Command::Factorize { file, k, output } => {
            let g = load_graph(&file)?;
            let tf = two_factorize(&g, k)?;
            let hint = FactorizationHint {
                factors: tf.vertex_lists(),
            };
            emit(out, output.as_deref(), &json(&hint))?;
            Ok(0)
        }
        Command::Decompose {
            file,
            k,
            strict,
            time_budget,
            exact_budget,
            c_max,
            hint,
            dump_network,
            output,
        } => {
            let g = load_graph(&file)?;
            let opts = DecomposeOptions {
                strict_only: strict,
                strict_budget: Duration::from_millis(time_budget),
                exact_budget: Duration::from_millis(exact_budget),
                c_max,
            };
            let d = match hint {
                Some(path) => {
                    let hint: FactorizationHint = serde_json::from_str(&read(&path)?)?;
                    let tf = TwoFactorization::from_hint(&g, &hint)?;
                    decompose_with_factorization(&g, k, tf, &opts)?
                }
                None => decompose(&g, k, &opts)?,
            };
            if let Some(path) = dump_network {
                write(
                    &path,
                    &build_network(&g, &d.factorization, d.plan.delta).net.dump(),
                )?;
            }
            let cert = &d.certificate;
            if let Some(path) = &output {
                write(path, &cert.to_json())?;
            }
            writeln!(
                out,
                "claimed \u{2264} {}, achieved {}, verified {}",
                cert.claimed_bound,
                cert.achieved_count,
                if cert.verified { "yes" } else { "no" }
            )?;
            for flag in &d.flags {
                writeln!(err, "flagged: {flag}")?;
            }
            Ok(if cert.verified { 0 } else { 1 })
        }
        Command::Verify { graph, certificate } => {
            let g = load_graph(&graph)?;
            let cert = DecompositionCertificate::from_json(&read(&certificate)?)
                .map_err(|e| Failure::Domain(format!("{}: {e}", certificate.display())))?;
            let report = verify_certificate(&g, &cert);
            for c in &report.checks {
                writeln!(
                    out,
                    "{} {}: {}",
                    if c.passed { "PASS" } else { "FAIL" },
                    c.name,
                    c.detail
                )?;
            }
            writeln!(
                out,
                "overall: {}",
                if report.overall { "pass" } else { "fail" }
            )?;
            Ok(if report.overall { 0 } else { 1 })
        }
        Command::OracleLa {
            file,
            budget,
            cache,
        } => {
            let g = load_graph(&file)?;
            let budget = Duration::from_millis(budget);
            let value = match cache {
                Some(path) => {
                    let cache = OracleCache::open(path)?;
                    let v = cache.oracle_la(&g, budget);
                    cache.save()?;
                    v
                }
                None => oracle_la(&g, budget),
            };
            match value {
                OracleLa::Exact(v) => writeln!(out, "{v}")?,
                OracleLa::LowerBoundOnly(v) => writeln!(out, ">= {v} (budget exhausted)")?,
            }
            Ok(0)
        }
        Command::Embed {
            file,
            delta,
            girth,
            layers,
            output,
            sidecar,
        } => {
            let h = load_graph(&file)?;
            let eg = embed(
                &h,
                delta,
                girth,
                layers.unwrap_or_else(|| default_layers(delta, girth)),
            )?;
            write(&output, &eg.graph.serialize())?;
            let sidecar = sidecar.unwrap_or_else(|| {
                let mut s = output.clone().into_os_string();
                s.push(".json");
                PathBuf::from(s)
            });
            write(&sidecar, &json(&eg.sidecar(delta, girth)))?;
            writeln!(
                out,
                "{} vertices, {} layers, method {:?}",
                eg.graph.vertex_count(),
                eg.layers,
                eg.method
            )?;
            Ok(0)
        }
        Command::Sweep {
            spec,
            output,
            jobs,
            timing,
        } => {
            let spec: SweepSpec = serde_json::from_str(&read(&spec)?)
                .map_err(|e| Failure::Domain(format!("{}: {e}", spec.display())))?;
            let results = run_sweep(&spec, jobs, timing)?;
            write(&output, &results.to_json())?;
            let ok = results.records.iter().filter(|r| r.status == "ok").count();
            writeln!(out, "{} records, {ok} ok", results.records.len())?;
            Ok(0)
        }
    }
}
