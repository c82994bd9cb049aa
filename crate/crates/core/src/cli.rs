//! The `h3` command line.
//!
//! Exit codes: 0 success, 1 usage or I/O error, 2 infeasible or certified
//! impossible, 3 a search ran out of budget or failed to construct an object.

use std::ffi::OsString;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use serde::Serialize;
use serde_json::json;

use crate::counterexample::{self, Certification, Tripartition};
use crate::decomposer::{
    self, CoverDownParams, DecompositionReport, DecompositionStatus, FractionalStatus, PipelineParams,
    WellBehavedParams,
};
use crate::error::{Error, Result};
use crate::euler::{self, EulerOutcome};
use crate::gadgets;
use crate::graph::{DivisibilityKind, ThreeGraph, VertexSet};
use crate::io;
use crate::tour_trail;

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 1;
pub const EXIT_INFEASIBLE: i32 = 2;
pub const EXIT_BUDGET: i32 = 3;

#[derive(Parser, Debug)]
#[command(name = "h3", version, about = "Tight cycle decompositions of 3-uniform hypergraphs")]
pub struct Cli {
    /// Seed for every random choice of the run.
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    /// Write the JSON result here instead of standard output.
    #[arg(long, global = true)]
    pub json: Option<PathBuf>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Args, Debug)]
pub struct Input {
    /// Input graph in `.3g` format.
    #[arg(long = "in")]
    pub input: PathBuf,
}

#[derive(Args, Debug)]
pub struct HostArgs {
    /// Host graph in `.3g` format.
    #[arg(long, conflicts_with = "host_n")]
    pub host: Option<PathBuf>,
    /// Use the complete graph on this many vertices as host.
    #[arg(long)]
    pub host_n: Option<usize>,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Write the graph H_n on 18k vertices.
    GenHn {
        #[arg(long)]
        k: usize,
        /// Build the vertex-regular variant.
        #[arg(long)]
        regular: bool,
        #[arg(long)]
        out: PathBuf,
    },
    /// Write a divisible dense graph with no tour decomposition, plus its certificate.
    GenCounterexample {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        ell: usize,
        #[arg(long)]
        out: PathBuf,
    },
    /// Write the K4-divisible graph with no K4 decomposition.
    GenK43 {
        #[arg(long)]
        k: usize,
        #[arg(long)]
        out: PathBuf,
    },
    /// Report size, codegrees and one divisibility condition.
    Check {
        #[command(flatten)]
        input: Input,
        /// `vertex3`, `k43` or `cycle:<ell>`.
        #[arg(long, default_value = "vertex3")]
        divisibility: String,
    },
    /// Certify that a tripartitioned graph has no tour decomposition.
    CertifyNoTour {
        #[command(flatten)]
        input: Input,
        /// JSON array of labels 0, 1, 2.
        #[arg(long)]
        partition: PathBuf,
    },
    /// Exact decomposition into tight cycles.
    SolveExact {
        #[command(flatten)]
        input: Input,
        #[arg(long)]
        ell: usize,
        #[arg(long, default_value_t = decomposer::DEFAULT_EXACT_BUDGET)]
        budget: u64,
    },
    /// Greedy cycle packing.
    PackGreedy {
        #[command(flatten)]
        input: Input,
        #[arg(long)]
        ell: usize,
    },
    /// Packing with bounded leftover codegree.
    PackWellbehaved {
        #[command(flatten)]
        input: Input,
        #[arg(long)]
        ell: usize,
        #[arg(long, default_value_t = 0.1)]
        gamma: f64,
    },
    /// Fractional decomposition by linear programming.
    Fractional {
        #[command(flatten)]
        input: Input,
        #[arg(long)]
        ell: usize,
        /// Largest number of cycles to enumerate.
        #[arg(long, default_value_t = 200_000)]
        budget: usize,
    },
    /// Build an absorber for a divisible graph.
    Absorber {
        /// The graph to absorb, in `.3g` format.
        #[arg(long)]
        r: PathBuf,
        #[command(flatten)]
        host: HostArgs,
        #[arg(long)]
        ell: usize,
    },
    /// Build a vortex.
    Vortex {
        #[command(flatten)]
        input: Input,
        /// Density; defaults to the minimum codegree over n.
        #[arg(long)]
        delta: Option<f64>,
        #[arg(long, default_value_t = 0.25)]
        xi: f64,
        #[arg(long, default_value_t = 40)]
        m_prime: usize,
        #[arg(long, default_value_t = 20)]
        retries: usize,
    },
    /// Cover every edge outside H[U] by cycles.
    CoverDown {
        #[command(flatten)]
        input: Input,
        #[arg(long)]
        ell: usize,
        /// Vertices of U, as `a..b` or a comma-separated list.
        #[arg(long)]
        u: String,
        #[arg(long, default_value_t = 0.5)]
        mu: f64,
    },
    /// Vortex, absorbers, iterated cover-down and final absorption.
    Pipeline {
        #[command(flatten)]
        input: Input,
        #[arg(long)]
        ell: usize,
        #[arg(long, default_value_t = 0.25)]
        xi: f64,
        #[arg(long, default_value_t = 20)]
        m_prime: usize,
        #[arg(long, default_value_t = decomposer::DEFAULT_EXACT_BUDGET)]
        budget: u64,
    },
    /// Euler tour of a vertex-divisible graph.
    Euler {
        #[command(flatten)]
        input: Input,
        /// Cycle length used for the edges off the spanning tour.
        #[arg(long, default_value_t = 9)]
        ell: usize,
        /// Use the exhaustive search instead of assembly.
        #[arg(long)]
        exact: bool,
        #[arg(long, default_value_t = euler::DEFAULT_EULER_BUDGET)]
        budget: u64,
    },
    /// Drive the residual of a graph to a sea of triangles, one JSON line per step.
    TraceSea {
        #[arg(long)]
        r: PathBuf,
        #[command(flatten)]
        host: HostArgs,
        #[arg(long)]
        ell: usize,
    },
}

/// Parses `argv` and runs the command; returns the exit code.
pub fn run<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let _ = e.print();
            return code;
        }
    };
    match execute(&cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("h3: {e}");
            exit_code(&e)
        }
    }
}

/// Exit code for an error that ends a run.
pub fn exit_code(e: &Error) -> i32 {
    match e {
        Error::IterationBudgetExceeded(_)
        | Error::LimitExceeded(_)
        | Error::CodegreeBudgetExceeded(_)
        | Error::NoExtensionAvailable(_)
        | Error::ConstructionFailed(_)
        | Error::GadgetConstructionFailed(_)
        | Error::VortexFailed(_) => EXIT_BUDGET,
        _ => EXIT_USAGE,
    }
}

fn emit<T: Serialize>(cli: &Cli, value: &T) -> Result<()> {
    let mut text = serde_json::to_string_pretty(value)?;
    text.push('\n');
    match &cli.json {
        Some(p) => std::fs::write(p, text)?,
        None => print!("{text}"),
    }
    Ok(())
}

fn status_code(s: DecompositionStatus) -> i32 {
    match s {
        DecompositionStatus::Complete | DecompositionStatus::Partial => EXIT_OK,
        DecompositionStatus::Infeasible => EXIT_INFEASIBLE,
        DecompositionStatus::BudgetExceeded => EXIT_BUDGET,
    }
}

fn read(input: &Input) -> Result<ThreeGraph> {
    io::read_3g_file(&input.input)
}

fn host(args: &HostArgs, fallback: usize) -> Result<ThreeGraph> {
    match (&args.host, args.host_n) {
        (Some(p), _) => io::read_3g_file(p),
        (None, Some(n)) => Ok(ThreeGraph::complete(n)),
        (None, None) => Ok(ThreeGraph::complete(fallback)),
    }
}

/// Reads `r` and lifts it to the host's vertex set.
fn read_r(path: &Path, host: &ThreeGraph) -> Result<ThreeGraph> {
    let r = io::read_3g_file(path)?;
    if r.n() > host.n() {
        return Err(Error::Precondition(format!("r has {} vertices, the host {}", r.n(), host.n())));
    }
    ThreeGraph::from_edges(host.n(), r.edges().collect::<Vec<_>>().iter())
}

fn sidecar(out: &Path, suffix: &str) -> PathBuf {
    let mut s = out.as_os_str().to_owned();
    s.push(suffix);
    PathBuf::from(s)
}

/// Parses `a..b` or `x,y,z`.
fn parse_vertices(spec: &str, n: usize) -> Result<VertexSet> {
    let bad = || Error::BadParams(format!("cannot read vertex set `{spec}`"));
    let vs: Vec<usize> = if let Some((a, b)) = spec.split_once("..") {
        let (a, b): (usize, usize) = (a.trim().parse().map_err(|_| bad())?, b.trim().parse().map_err(|_| bad())?);
        (a..b).collect()
    } else {
        spec.split(',').filter(|s| !s.trim().is_empty()).map(|s| s.trim().parse().map_err(|_| bad())).collect::<Result<_>>()?
    };
    VertexSet::from_vertices(n, vs)
}

fn graph_summary(g: &ThreeGraph) -> serde_json::Value {
    json!({
        "n": g.n(),
        "edges": g.edge_count(),
        "min_codegree": g.min_codegree(),
        "max_codegree": g.max_codegree(),
    })
}

fn execute(cli: &Cli) -> Result<i32> {
    match &cli.command {
        Command::GenHn { k, regular, out } => {
            let (g, part) =
                if *regular { counterexample::build_regular_variant(*k, cli.seed)? } else { counterexample::build_hn(*k)? };
            io::write_3g_file(out, &g)?;
            std::fs::write(sidecar(out, ".partition.json"), serde_json::to_string(part.labels())?)?;
            emit(cli, &json!({ "graph": graph_summary(&g), "cluster_sizes": part.sizes() }))?;
            Ok(EXIT_OK)
        }
        Command::GenCounterexample { n, ell, out } => {
            let c = counterexample::build_counterexample(*n, *ell)?;
            io::write_3g_file(out, &c.graph)?;
            let cert = serde_json::to_string_pretty(&c.certificate)?;
            std::fs::write(sidecar(out, ".cert.json"), cert + "\n")?;
            let div = c.graph.check_divisibility(DivisibilityKind::Cycle(*ell))?;
            emit(
                cli,
                &json!({
                    "graph": graph_summary(&c.graph),
                    "divisibility": div,
                    "added_cycle_len": c.added_cycle_len,
                    "certificate": c.certificate,
                }),
            )?;
            Ok(EXIT_OK)
        }
        Command::GenK43 { k, out } => {
            let (g, cert) = counterexample::build_k43_example(*k)?;
            io::write_3g_file(out, &g)?;
            let div = g.check_divisibility(DivisibilityKind::K43)?;
            emit(cli, &json!({ "graph": graph_summary(&g), "divisibility": div, "certificate": cert, "holds": cert.holds() }))?;
            Ok(EXIT_OK)
        }
        Command::Check { input, divisibility } => {
            let g = read(input)?;
            let kind: DivisibilityKind = divisibility.parse()?;
            let check = g.check_divisibility(kind)?;
            let code = if check.divisible { EXIT_OK } else { EXIT_INFEASIBLE };
            emit(cli, &json!({ "graph": graph_summary(&g), "kind": divisibility, "check": check }))?;
            Ok(code)
        }
        Command::CertifyNoTour { input, partition } => {
            let g = read(input)?;
            let labels: Vec<u8> = serde_json::from_str(&std::fs::read_to_string(partition)?)?;
            let part = Tripartition::new(labels)?;
            match counterexample::certify_no_tour(&g, &part) {
                Certification::Certified(cert) => {
                    emit(cli, &json!({ "certified": true, "certificate": cert }))?;
                    Ok(EXIT_INFEASIBLE)
                }
                Certification::Inapplicable(reason) => {
                    emit(cli, &json!({ "certified": false, "reason": reason }))?;
                    Ok(EXIT_OK)
                }
            }
        }
        Command::SolveExact { input, ell, budget } => {
            let g = read(input)?;
            let r = decomposer::exact_decompose(&g, *ell, *budget);
            emit(cli, &r)?;
            Ok(status_code(r.status))
        }
        Command::PackGreedy { input, ell } => {
            let g = read(input)?;
            let r = decomposer::greedy_pack(&g, *ell, cli.seed);
            emit(cli, &r)?;
            Ok(EXIT_OK)
        }
        Command::PackWellbehaved { input, ell, gamma } => {
            let g = read(input)?;
            let params = WellBehavedParams { gamma: *gamma, ..Default::default() };
            let r = decomposer::well_behaved_pack(&g, *ell, &params, cli.seed);
            emit(cli, &r)?;
            Ok(EXIT_OK)
        }
        Command::Fractional { input, ell, budget } => {
            let g = read(input)?;
            let f = decomposer::fractional_decompose(&g, *ell, *budget)?;
            emit(cli, &f)?;
            Ok(if f.status == FractionalStatus::Feasible { EXIT_OK } else { EXIT_INFEASIBLE })
        }
        Command::Absorber { r, host: h, ell } => {
            let host_g = host(h, 300)?;
            let rg = read_r(r, &host_g)?;
            let a = gadgets::build_absorber(&host_g, &rg, *ell, cli.seed)?;
            a.validate(&host_g, &rg, *ell)?;
            emit(cli, &a)?;
            Ok(EXIT_OK)
        }
        Command::Vortex { input, delta, xi, m_prime, retries } => {
            let g = read(input)?;
            let delta = delta.unwrap_or(g.min_codegree() as f64 / g.n().max(1) as f64);
            let v = decomposer::build_vortex(&g, delta, *xi, *m_prime, cli.seed, *retries)?;
            let verified = decomposer::check_vortex(&g, &v, delta - xi);
            emit(cli, &json!({ "vortex": v, "verified": verified.is_ok(), "violation": verified.err() }))?;
            Ok(EXIT_OK)
        }
        Command::CoverDown { input, ell, u, mu } => {
            let g = read(input)?;
            let u = parse_vertices(u, g.n())?;
            let params = CoverDownParams { mu: *mu, ..Default::default() };
            let out = decomposer::cover_down(&g, &u, *ell, &params, cli.seed)?;
            emit(cli, &out)?;
            Ok(EXIT_OK)
        }
        Command::Pipeline { input, ell, xi, m_prime, budget } => {
            let g = read(input)?;
            let params = PipelineParams { xi: *xi, m_prime: *m_prime, exact_budget: *budget, ..Default::default() };
            let r: DecompositionReport = decomposer::full_pipeline(&g, *ell, &params, cli.seed)?;
            emit(cli, &r)?;
            Ok(EXIT_OK)
        }
        Command::Euler { input, ell, exact, budget } => {
            let g = read(input)?;
            if *exact {
                return match euler::exact_euler(&g, *budget) {
                    EulerOutcome::Tour(w) => {
                        emit(cli, &w.vertices())?;
                        Ok(EXIT_OK)
                    }
                    EulerOutcome::Infeasible => {
                        eprintln!("h3: no Euler tour");
                        Ok(EXIT_INFEASIBLE)
                    }
                    EulerOutcome::BudgetExceeded => {
                        eprintln!("h3: search budget exhausted");
                        Ok(EXIT_BUDGET)
                    }
                };
            }
            match euler::assemble_euler(&g, *ell, cli.seed) {
                Ok(w) => {
                    emit(cli, &w.vertices())?;
                    Ok(EXIT_OK)
                }
                Err(Error::Precondition(msg)) => {
                    eprintln!("h3: {msg}");
                    Ok(EXIT_INFEASIBLE)
                }
                Err(e) => Err(e),
            }
        }
        Command::TraceSea { r, host: h, ell } => {
            let host_g = host(h, 300)?;
            let rg = read_r(r, &host_g)?;
            let support = rg.support();
            let reservoir =
                VertexSet::from_vertices(host_g.n(), (0..host_g.n()).filter(|&v| !support.contains(v)).step_by(2))?;
            let t = tour_trail::greedy_ttd(&rg);
            let out = tour_trail::reduce_to_sea(&host_g, &rg, t, &reservoir, *ell, cli.seed)?;
            let mut lines = String::new();
            for step in &out.trace {
                lines.push_str(&serde_json::to_string(step)?);
                lines.push('\n');
            }
            let residual = out.decomposition.residual();
            let summary = json!({
                "done": true,
                "steps": out.trace.len(),
                "added_edges": out.added.len(),
                "certificate_cycles": out.certificate.len(),
                "sea": residual.is_sea(),
                "arcs": residual.arc_count(),
            });
            lines.push_str(&serde_json::to_string(&summary)?);
            lines.push('\n');
            match &cli.json {
                Some(p) => std::fs::write(p, lines)?,
                None => print!("{lines}"),
            }
            Ok(EXIT_OK)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn vertex_set_syntax() {
        assert_eq!(parse_vertices("2..5", 10).unwrap().to_vec(), vec![2, 3, 4]);
        assert_eq!(parse_vertices("1, 7,3", 10).unwrap().to_vec(), vec![1, 3, 7]);
        assert!(parse_vertices("a..b", 10).is_err());
        assert!(parse_vertices("12", 10).is_err());
    }

    #[test]
    fn usage_errors_exit_one() {
        assert_eq!(run(["h3", "no-such-command"]), EXIT_USAGE);
        assert_eq!(run(["h3", "check", "--in", "/nonexistent/g.3g"]), EXIT_USAGE);
    }

    #[test]
    fn budget_errors_exit_three() {
        assert_eq!(exit_code(&Error::VortexFailed(1)), EXIT_BUDGET);
        assert_eq!(exit_code(&Error::Precondition("x".into())), EXIT_USAGE);
    }
}
