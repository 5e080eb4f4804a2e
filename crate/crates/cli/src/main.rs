//! `trvb` command-line tool.
//!
//! Exit status: 0 yes/valid, 1 no/invalid, 2 bad input or other error,
//! 3 a brute-force guard was exceeded.

use std::fs;
use std::io::Write as _;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{anyhow, Context, Result};
use clap::{Args, Parser, Subcommand};
use rand::rngs::StdRng;
use rand::SeedableRng;
use trvb::classify::classify;
use trvb::gadgets::{self, GadgetError, CATALOG};
use trvb::hypergraph::{self, HstReduction, Hypergraph, HypergraphError};
use trvb::io::{self, SolveReport};
use trvb::reductions::{self, Preprocessed, ReductionError};
use trvb::scorecert;
use trvb::solver::{self, SolveOptions};
use trvb::{corpus, validate, DegreeSet, Multigraph, VariantSpec, VertexId, VertexKind};

/// Marks errors that come from a brute-force size guard.
#[derive(Debug)]
struct GuardViolation(String);

impl std::fmt::Display for GuardViolation {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for GuardViolation {}

fn guard(e: impl std::fmt::Display) -> anyhow::Error {
    GuardViolation(e.to_string()).into()
}

fn gadget_err(e: GadgetError) -> anyhow::Error {
    match e {
        GadgetError::GuardExceeded { .. } => guard(e),
        other => other.into(),
    }
}

fn hst_err(e: HypergraphError) -> anyhow::Error {
    match e {
        HypergraphError::GuardExceeded { .. } => guard(e),
        other => other.into(),
    }
}

fn reduction_err(e: ReductionError) -> anyhow::Error {
    match e {
        ReductionError::GuardExceeded { .. } => guard(e),
        other => other.into(),
    }
}

/// Outcome of a command that answers a decision question.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Verdict {
    Yes,
    No,
}

impl From<bool> for Verdict {
    fn from(yes: bool) -> Self {
        if yes {
            Verdict::Yes
        } else {
            Verdict::No
        }
    }
}

#[derive(Parser)]
#[command(name = "trvb", version, about = "Tree-Residue Vertex-Breaking toolkit")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct Output {
    /// Write the result here instead of standard output.
    #[arg(short, long, global = true)]
    output: Option<PathBuf>,
}

#[derive(Args, Clone)]
struct SpecArgs {
    /// Allowed breakable degrees, e.g. `4`, `2,3`, `6+`, `2-4`, `all`, `none`.
    #[arg(long = "B", value_name = "DEGREES")]
    breakable: DegreeSet,
    /// Allowed unbreakable degrees, same syntax as --B.
    #[arg(long = "U", value_name = "DEGREES")]
    unbreakable: DegreeSet,
    /// Restrict to planar instances (a rotation system is then required).
    #[arg(long)]
    planar: bool,
    /// Restrict to simple graphs (no self-loops or parallel edges).
    #[arg(long)]
    simple: bool,
}

impl SpecArgs {
    fn spec(&self) -> VariantSpec {
        VariantSpec {
            breakable: self.breakable.clone(),
            unbreakable: self.unbreakable.clone(),
            planar: self.planar,
            simple: self.simple,
        }
    }
}

#[derive(Subcommand)]
enum Command {
    /// Decide an instance; prints the answer and a certificate as JSON.
    Solve {
        instance: PathBuf,
        /// Use unpruned enumeration instead of the pruned search.
        #[arg(long)]
        oracle: bool,
        /// Disable the degree-budget pruning rule.
        #[arg(long)]
        no_budget: bool,
        /// Disable the adjacent-break pruning rule.
        #[arg(long)]
        no_adjacency: bool,
        /// Disable the unbroken-cycle pruning rule.
        #[arg(long)]
        no_cycle: bool,
        /// Refuse instances with more breakable vertices than this.
        #[arg(long, default_value_t = 64)]
        max_breakable: usize,
        /// Print search statistics to standard error.
        #[arg(long)]
        stats: bool,
        #[command(flatten)]
        out: Output,
    },
    /// Check a certificate (JSON list of vertex ids) against an instance.
    Verify { instance: PathBuf, certificate: PathBuf },
    /// Check an instance against a degree-restricted variant.
    Validate {
        instance: PathBuf,
        #[command(flatten)]
        spec: SpecArgs,
    },
    /// Instance rewrites and the Hamiltonicity reduction.
    #[command(subcommand)]
    Reduce(ReduceCommand),
    /// Conversions between TRVB and Hypergraph Spanning Tree.
    #[command(subcommand)]
    Convert(ConvertCommand),
    /// Complexity class of a degree-restricted variant.
    Classify {
        #[command(flatten)]
        spec: SpecArgs,
    },
    /// Gadget catalog and behavioral certification.
    #[command(subcommand)]
    Gadget(GadgetCommand),
    /// Bundles and scores of every vertex.
    Score { instance: PathBuf },
    /// Graphviz rendering of an instance.
    ExportDot {
        instance: PathBuf,
        #[command(flatten)]
        out: Output,
    },
    /// Brute-force Hamiltonicity of a directed instance.
    Ham { directed: PathBuf },
    /// Seeded instance generators.
    Generate {
        #[command(subcommand)]
        kind: GenerateKind,
        /// RNG seed; identical seeds give identical output.
        #[arg(long, default_value_t = 0, global = true)]
        seed: u64,
        #[command(flatten)]
        out: Output,
    },
}

#[derive(Subcommand)]
enum ReduceCommand {
    /// Directed graph (in/out-degrees 1 or 2, planar non-alternating
    /// rotation) to a planar TRVB instance with degree-k breakable vertices.
    HamToTrvb {
        directed: PathBuf,
        #[arg(long)]
        k: u32,
        /// Vertex whose node is dropped; defaults to the lowest id.
        #[arg(long)]
        vhat: Option<u64>,
        #[command(flatten)]
        out: Output,
    },
    /// Subdivide every edge with unbreakable degree-2 vertices.
    InsertDeg2 {
        instance: PathBuf,
        #[arg(long, default_value_t = 1)]
        per_edge: usize,
        #[command(flatten)]
        out: Output,
    },
    /// Contract every edge between two unbreakable vertices.
    Contract {
        instance: PathBuf,
        #[command(flatten)]
        out: Output,
    },
}

#[derive(Subcommand)]
enum ConvertCommand {
    /// TRVB instance to a hypergraph with the same answer.
    TrvbToHst {
        instance: PathBuf,
        #[command(flatten)]
        out: Output,
    },
    /// Hypergraph to its incidence-graph TRVB instance.
    HstToTrvb {
        hypergraph: PathBuf,
        #[command(flatten)]
        out: Output,
    },
}

#[derive(Subcommand)]
enum GadgetCommand {
    /// List catalog entries.
    List,
    /// Certify a catalog gadget's behavior against the vertex it simulates.
    Verify {
        name: String,
        #[arg(long)]
        k: Option<u32>,
        #[arg(long)]
        a: Option<u32>,
        /// Override the limit on internal breakable vertices.
        #[arg(long, default_value_t = gadgets::BEHAVIOR_GUARD)]
        guard: usize,
    },
    /// Certify a gadget read from a JSON file.
    Check {
        file: PathBuf,
        #[arg(long, default_value_t = gadgets::BEHAVIOR_GUARD)]
        guard: usize,
    },
    /// Write a catalog gadget as JSON.
    Export {
        name: String,
        #[arg(long)]
        k: Option<u32>,
        #[arg(long)]
        a: Option<u32>,
        #[command(flatten)]
        out: Output,
    },
}

#[derive(Subcommand)]
enum GenerateKind {
    /// Random multigraph with self-loops and parallel edges allowed.
    Multigraph {
        #[arg(long, default_value_t = 6)]
        vertices: u64,
        #[arg(long, default_value_t = 9)]
        edges: usize,
    },
    /// Planar simple instance with minimum degree 5 (always "no").
    AlwaysNo {
        #[arg(long, default_value_t = 20)]
        flips: usize,
        #[arg(long, default_value_t = 0.0)]
        p_breakable: f64,
    },
    /// The icosahedron with all vertices of one kind.
    Icosahedron {
        #[arg(long)]
        breakable: bool,
    },
    /// Planar non-alternating directed graph with all in/out-degrees 2.
    Digraph {
        #[arg(long, default_value_t = 4)]
        vertices: u64,
    },
}

fn read(path: &Path) -> Result<String> {
    fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))
}

fn load_instance(path: &Path) -> Result<Multigraph> {
    io::parse_instance(&read(path)?).with_context(|| format!("parsing {}", path.display()))
}

fn emit(out: &Output, text: &str) -> Result<()> {
    match &out.output {
        Some(p) => fs::write(p, text).with_context(|| format!("writing {}", p.display())),
        None => {
            std::io::stdout().write_all(text.as_bytes())?;
            Ok(())
        }
    }
}

fn run(cli: Cli) -> Result<Option<Verdict>> {
    match cli.command {
        Command::Solve { instance, oracle, no_budget, no_adjacency, no_cycle, max_breakable, stats, out } => {
            let g = load_instance(&instance)?;
            let count = g.breakable_vertices().count();
            if count > max_breakable {
                return Err(guard(format!(
                    "{count} breakable vertices exceed --max-breakable {max_breakable}"
                )));
            }
            let (cert, st) = if oracle {
                let (all, st) = solver::enumerate_solutions_with(&g, 1, SolveOptions::unpruned());
                (all.solutions.into_iter().next(), st)
            } else {
                let opts = SolveOptions {
                    budget: !no_budget,
                    adjacency: !no_adjacency,
                    isolated_cycle: !no_cycle,
                };
                solver::solve_with(&g, opts)
            };
            if stats {
                eprintln!("{st:?}");
            }
            let report = SolveReport::new(cert);
            emit(&out, &report.to_json())?;
            Ok(Some(report.answer.into()))
        }
        Command::Verify { instance, certificate } => {
            let g = load_instance(&instance)?;
            let cert = io::parse_certificate(&read(&certificate)?)
                .with_context(|| format!("parsing {}", certificate.display()))?;
            let result = solver::verify_detailed(&g, &cert);
            let value = match &result {
                Ok(()) => serde_json::json!({ "valid": true }),
                Err(f) => serde_json::json!({ "valid": false, "reason": f.code(), "detail": f.to_string() }),
            };
            println!("{}", serde_json::to_string_pretty(&value)?);
            Ok(Some(result.is_ok().into()))
        }
        Command::Validate { instance, spec } => {
            let g = load_instance(&instance)?;
            let spec = spec.spec();
            let report = validate(&g, &spec);
            println!("{spec}");
            for v in &report.violations {
                println!("violation: {v}");
            }
            if report.is_valid() {
                println!("valid");
            }
            Ok(Some(report.is_valid().into()))
        }
        Command::Reduce(r) => reduce(r),
        Command::Convert(c) => convert(c),
        Command::Classify { spec } => {
            let spec = spec.spec();
            let c = classify(&spec);
            println!("{spec}: {}", c.class);
            println!("class: {}", c.class.code());
            println!("reason: {}", c.citation);
            Ok(None)
        }
        Command::Gadget(g) => gadget(g),
        Command::Score { instance } => {
            let g = load_instance(&instance)?;
            match g.embedding_summary() {
                Ok(s) if !s.is_planar() => {
                    eprintln!("warning: rotation system is not planar; scores are computed anyway")
                }
                _ => {}
            }
            for v in g.vertex_ids() {
                let bundles = scorecert::bundles_at(&g, v)?;
                if bundles.is_empty() {
                    continue;
                }
                let sizes: Vec<String> = bundles.iter().map(|b| b.len().to_string()).collect();
                let score: i64 = bundles.iter().map(|b| b.score()).sum();
                println!("vertex {v}: bundles [{}] score {score}", sizes.join(", "));
            }
            println!("total {}", scorecert::score(&g)?);
            Ok(None)
        }
        Command::ExportDot { instance, out } => {
            let g = load_instance(&instance)?;
            emit(&out, &io::to_dot(&g))?;
            Ok(None)
        }
        Command::Ham { directed } => {
            let d = io::parse_directed(&read(&directed)?)
                .with_context(|| format!("parsing {}", directed.display()))?;
            let cycle = reductions::hamiltonian_cycle(&d).map_err(reduction_err)?;
            println!("{}", serde_json::json!({ "hamiltonian": cycle.is_some(), "arcs": cycle }));
            Ok(Some(cycle.is_some().into()))
        }
        Command::Generate { kind, seed, out } => {
            let mut rng = StdRng::seed_from_u64(seed);
            let text = match kind {
                GenerateKind::Multigraph { vertices, edges } => {
                    if vertices == 0 || edges == 0 {
                        return Err(anyhow!("need at least one vertex and one edge"));
                    }
                    io::instance_to_json(&corpus::random_multigraph(&mut rng, vertices, edges))
                }
                GenerateKind::AlwaysNo { flips, p_breakable } => {
                    if !(0.0..=1.0).contains(&p_breakable) {
                        return Err(anyhow!("--p-breakable must lie in [0, 1]"));
                    }
                    io::instance_to_json(&corpus::min_degree_five_planar(&mut rng, flips, 0, p_breakable))
                }
                GenerateKind::Icosahedron { breakable } => {
                    let kind = if breakable { VertexKind::Breakable } else { VertexKind::Unbreakable };
                    io::instance_to_json(&corpus::icosahedron(kind))
                }
                GenerateKind::Digraph { vertices } => {
                    let d = corpus::random_planar_two_in_two_out(&mut rng, vertices, 10_000)
                        .ok_or_else(|| anyhow!("no planar non-alternating sample found"))?;
                    io::directed_to_json(&d)
                }
            };
            emit(&out, &text)?;
            Ok(None)
        }
    }
}

fn reduce(r: ReduceCommand) -> Result<Option<Verdict>> {
    match r {
        ReduceCommand::HamToTrvb { directed, k, vhat, out } => {
            let d = io::parse_directed(&read(&directed)?)
                .with_context(|| format!("parsing {}", directed.display()))?;
            let g = match reductions::preprocess_to_degree2(&d)? {
                Preprocessed::Reduced { graph, simplifications } => {
                    eprintln!("preprocessing: {simplifications} simplifications");
                    reductions::r_k(&graph, k, vhat.map(VertexId)).map_err(reduction_err)?.graph
                }
                Preprocessed::Decided { hamiltonian, simplifications, .. } => {
                    eprintln!(
                        "preprocessing decided the instance after {simplifications} simplifications \
                         (hamiltonian: {hamiltonian}); emitting a fixed equivalent instance"
                    );
                    let u = VertexKind::Unbreakable;
                    if hamiltonian { corpus::path(&[u, u]) } else { corpus::cycle(&[u, u, u]) }
                }
            };
            emit(&out, &io::instance_to_json(&g))?;
            Ok(None)
        }
        ReduceCommand::InsertDeg2 { instance, per_edge, out } => {
            let g = load_instance(&instance)?;
            emit(&out, &io::instance_to_json(&reductions::insert_unbreakable_deg2(&g, per_edge)))?;
            Ok(None)
        }
        ReduceCommand::Contract { instance, out } => {
            let g = load_instance(&instance)?;
            emit(&out, &io::instance_to_json(&reductions::contract_unbreakable_adjacent(&g)))?;
            Ok(None)
        }
    }
}

fn convert(c: ConvertCommand) -> Result<Option<Verdict>> {
    match c {
        ConvertCommand::TrvbToHst { instance, out } => {
            let g = load_instance(&instance)?;
            let h = match hypergraph::trvb_to_hst(&g) {
                HstReduction::TrivialNo => {
                    eprintln!("unbreakable self-loop after contraction: emitting a fixed no instance");
                    Hypergraph::new([VertexId(0), VertexId(1)], Vec::new()).map_err(hst_err)?
                }
                HstReduction::Hypergraph { hypergraph, forced, .. } => {
                    if !forced.is_empty() {
                        let ids: Vec<String> = forced.iter().map(ToString::to_string).collect();
                        eprintln!("forced broken (repeated neighbour): {}", ids.join(", "));
                    }
                    hypergraph
                }
            };
            emit(&out, &io::hypergraph_to_json(&h))?;
            Ok(None)
        }
        ConvertCommand::HstToTrvb { hypergraph: path, out } => {
            let h = io::parse_hypergraph(&read(&path)?)
                .with_context(|| format!("parsing {}", path.display()))?;
            emit(&out, &io::instance_to_json(&hypergraph::hst_to_trvb(&h)))?;
            Ok(None)
        }
    }
}

fn gadget(g: GadgetCommand) -> Result<Option<Verdict>> {
    match g {
        GadgetCommand::List => {
            for e in CATALOG {
                let mut flags = Vec::new();
                if e.takes_k {
                    flags.push(format!("k={}", e.default_k));
                }
                if e.takes_a {
                    flags.push(format!("a={}", e.default_a));
                }
                if e.reconstructed {
                    flags.push("reconstructed".into());
                }
                if !e.constructed {
                    flags.push("omitted".into());
                }
                println!("{:<16} {} [{}]", e.name, e.description, flags.join(", "));
            }
            Ok(None)
        }
        GadgetCommand::Verify { name, k, a, guard } => {
            let gd = gadgets::builtin(&name, k, a).map_err(gadget_err)?;
            report_certification(&gd, guard)
        }
        GadgetCommand::Check { file, guard } => {
            let gd = io::parse_gadget(&read(&file)?).with_context(|| format!("parsing {}", file.display()))?;
            report_certification(&gd, guard)
        }
        GadgetCommand::Export { name, k, a, out } => {
            let gd = gadgets::builtin(&name, k, a).map_err(gadget_err)?;
            emit(&out, &io::gadget_to_json(&gd))?;
            Ok(None)
        }
    }
}

fn report_certification(gd: &gadgets::Gadget, limit: usize) -> Result<Option<Verdict>> {
    let b = gadgets::behavior_with_guard(gd, limit).map_err(gadget_err)?;
    let ok = gadgets::certify_with_guard(gd, limit).map_err(gadget_err)?;
    let s = gd.simulates();
    let kind = match s.kind {
        VertexKind::Breakable => "breakable",
        VertexKind::Unbreakable => "unbreakable",
    };
    println!("{}: simulates {kind} degree {}", gd.name(), s.degree);
    for (p, r) in &b.admissible {
        println!("  {p}: {} realization{}", r.count, if r.count == 1 { "" } else { "s" });
    }
    println!("{}", if ok { "certified" } else { "NOT certified" });
    Ok(Some(ok.into()))
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(None | Some(Verdict::Yes)) => ExitCode::SUCCESS,
        Ok(Some(Verdict::No)) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e:#}");
            if e.downcast_ref::<GuardViolation>().is_some() {
                ExitCode::from(3)
            } else {
                ExitCode::from(2)
            }
        }
    }
}
