use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use eccsim_core::verify::{self, Corruption};
use eccsim_core::{oracle_metrics, round_cap, run, Graph, RunSummary, SimulationResult, Variant};
use rayon::prelude::*;
use serde::Serialize;

mod source;

#[derive(Parser)]
#[command(name = "eccsim", version, about = "Simulate distributed eccentricity, diameter and radius computation")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Generate a graph as an edge list and print its metrics.
    Generate {
        /// Generator: path, t, random or complete.
        kind: String,
        /// Generator parameters: `path N`, `t LEFT RIGHT STEM`, `random N P SEED`, `complete N`.
        params: Vec<String>,
        /// Write the edge list here instead of standard output.
        #[arg(short, long)]
        out: Option<PathBuf>,
    },
    /// Run one simulation and write its trace and summary.
    Run(RunArgs),
    /// Run the simulation and check it against the oracle and the round bounds.
    Verify(VerifyArgs),
}

#[derive(Args, Clone)]
struct GraphArgs {
    /// Generated graph, e.g. `path:11`, `t:5,5,4`, `random:30,0.1,7`.
    #[arg(long, conflicts_with = "edges")]
    graph: Option<String>,
    /// Edge-list file.
    #[arg(long)]
    edges: Option<PathBuf>,
    /// Wake schedule: `node:round,...` or `all:0`. Defaults to the lowest id at round 0.
    #[arg(long)]
    wake: Option<String>,
    /// Round limit; defaults to the theoretical termination bound.
    #[arg(long)]
    max_rounds: Option<u32>,
}

#[derive(Clone, Copy, ValueEnum)]
enum VariantArg {
    Full,
    Sliding,
}

impl From<VariantArg> for Variant {
    fn from(v: VariantArg) -> Self {
        match v {
            VariantArg::Full => Variant::FullSet,
            VariantArg::Sliding => Variant::SlidingWindow,
        }
    }
}

#[derive(Args)]
struct RunArgs {
    #[command(flatten)]
    graph: GraphArgs,
    #[arg(long, value_enum, default_value = "full")]
    variant: VariantArg,
    /// Nodes to trace: comma-separated ids or `all`.
    #[arg(long)]
    probe: Option<String>,
    /// Trace CSV output path (`-` for standard output).
    #[arg(long)]
    trace: Option<PathBuf>,
    /// Summary JSON output path; printed to standard output when absent.
    #[arg(long)]
    summary: Option<PathBuf>,
}

#[derive(Args)]
struct VerifyArgs {
    #[command(flatten)]
    graph: GraphArgs,
    /// Verify this many random graphs instead of a single input.
    #[arg(long, conflicts_with_all = ["graph", "edges", "wake"])]
    random: Option<usize>,
    #[arg(long, default_value_t = 40)]
    max_n: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Corrupt the run before checking it (checker self-test).
    #[arg(long, value_enum)]
    corrupt: Option<CorruptArg>,
    /// Report JSON output path; printed to standard output when absent.
    #[arg(long)]
    report: Option<PathBuf>,
}

#[derive(Clone, Copy, ValueEnum)]
enum CorruptArg {
    Diameter,
    Detection,
    Delivery,
    Origin,
    Traffic,
}

impl From<CorruptArg> for Corruption {
    fn from(c: CorruptArg) -> Self {
        match c {
            CorruptArg::Diameter => Corruption::DiameterAtDetection,
            CorruptArg::Detection => Corruption::LateDetection,
            CorruptArg::Delivery => Corruption::ShiftedDelivery,
            CorruptArg::Origin => Corruption::MissingOrigin,
            CorruptArg::Traffic => Corruption::PostTerminationTraffic,
        }
    }
}

/// Exit status: 0 success, 1 assertion failure, 2 usage or input error.
enum Outcome {
    Pass,
    Fail,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Generate { kind, params, out } => cmd_generate(&kind, &params, out.as_deref()),
        Command::Run(args) => cmd_run(args),
        Command::Verify(args) => cmd_verify(args),
    };
    match result {
        Ok(Outcome::Pass) => ExitCode::SUCCESS,
        Ok(Outcome::Fail) => ExitCode::from(1),
        Err(err) => {
            eprintln!("eccsim: error: {err:#}");
            ExitCode::from(2)
        }
    }
}

fn cmd_generate(kind: &str, params: &[String], out: Option<&Path>) -> Result<Outcome> {
    let g = source::generate(kind, params)?;
    let m = oracle_metrics(&g);
    let centers: Vec<String> = m.centers.iter().map(ToString::to_string).collect();
    let line = format!(
        "nodes={} edges={} diameter={} radius={} centers={}",
        g.node_count(),
        g.edge_count(),
        m.diameter,
        m.radius,
        centers.join(",")
    );
    match out {
        Some(path) => {
            write_file(path, &g.to_edge_list())?;
            println!("{line}");
        }
        None => {
            let mut stdout = io::stdout().lock();
            writeln!(stdout, "# {line}")?;
            stdout.write_all(g.to_edge_list().as_bytes())?;
        }
    }
    Ok(Outcome::Pass)
}

struct Input {
    graph: Graph,
    schedule: eccsim_core::WakeSchedule,
    max_rounds: u32,
}

fn load(args: &GraphArgs) -> Result<Input> {
    let graph = match (&args.graph, &args.edges) {
        (Some(spec), None) => source::graph_spec(spec)?,
        (None, Some(path)) => source::edge_file(path)?,
        _ => anyhow::bail!("exactly one of --graph or --edges is required"),
    };
    let schedule = match &args.wake {
        Some(spec) => source::schedule(spec, &graph)?,
        None => eccsim_core::WakeSchedule::single(graph.id_at(0)),
    };
    let max_rounds = args
        .max_rounds
        .unwrap_or_else(|| round_cap(&schedule, &oracle_metrics(&graph)));
    Ok(Input { graph, schedule, max_rounds })
}

fn cmd_run(args: RunArgs) -> Result<Outcome> {
    if args.trace.as_deref().is_some_and(|p| p.as_os_str() == "-") && args.summary.is_none() {
        anyhow::bail!("--trace - writes to standard output; give --summary a file path");
    }
    let input = load(&args.graph)?;
    let probes = source::probes(args.probe.as_deref(), &input.graph)?;
    let result = run(
        &input.graph,
        &input.schedule,
        args.variant.into(),
        &probes,
        input.max_rounds,
    )?;
    if let Some(path) = &args.trace {
        let csv = trace_csv(&result)?;
        if path.as_os_str() == "-" {
            io::stdout().write_all(csv.as_bytes())?;
        } else {
            write_file(path, &csv)?;
        }
    }
    let summary = RunSummary::new(&input.graph, &oracle_metrics(&input.graph), &result);
    emit_json(args.summary.as_deref(), &summary)?;
    Ok(Outcome::Pass)
}

fn trace_csv(result: &SimulationResult) -> Result<String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    for entry in &result.trace {
        w.serialize(entry)?;
    }
    let bytes = w.into_inner().context("flushing trace")?;
    Ok(String::from_utf8(bytes)?)
}

#[derive(Serialize)]
struct CaseOutcome {
    index: usize,
    nodes: usize,
    edges: usize,
    edge_prob: f64,
    graph_seed: u64,
    schedule: Vec<(u64, u32)>,
    passed: bool,
    failures: Vec<&'static str>,
}

#[derive(Serialize)]
struct SuiteReport {
    cases: usize,
    passed: usize,
    failed: usize,
    max_n: usize,
    seed: u64,
    results: Vec<CaseOutcome>,
}

fn cmd_verify(args: VerifyArgs) -> Result<Outcome> {
    let corruption = args.corrupt.map(Corruption::from);
    if let Some(count) = args.random {
        let suite = verify::random_suite(count, args.max_n, args.seed);
        let results = suite
            .par_iter()
            .map(|case| {
                let oracle = oracle_metrics(&case.graph);
                let cap = round_cap(&case.schedule, &oracle);
                let (_, rep) = verify::verify_with(&case.graph, &case.schedule, cap, corruption)?;
                Ok(CaseOutcome {
                    index: case.index,
                    nodes: case.nodes,
                    edges: case.graph.edge_count(),
                    edge_prob: case.edge_prob,
                    graph_seed: case.graph_seed,
                    schedule: case.schedule.iter().map(|(id, r)| (id.0, r)).collect(),
                    passed: rep.passed(),
                    failures: rep.failures(),
                })
            })
            .collect::<Result<Vec<_>, eccsim_core::SimError>>()?;
        let passed = results.iter().filter(|r| r.passed).count();
        let report = SuiteReport {
            cases: results.len(),
            passed,
            failed: results.len() - passed,
            max_n: args.max_n,
            seed: args.seed,
            results,
        };
        emit_json(args.report.as_deref(), &report)?;
        return Ok(if report.failed == 0 { Outcome::Pass } else { Outcome::Fail });
    }

    let input = load(&args.graph)?;
    let (_, report) = verify::verify_with(&input.graph, &input.schedule, input.max_rounds, corruption)?;
    emit_json(args.report.as_deref(), &report)?;
    if report.passed() {
        Ok(Outcome::Pass)
    } else {
        eprintln!("eccsim: verification failed: {}", report.failures().join(", "));
        Ok(Outcome::Fail)
    }
}

fn emit_json<T: Serialize>(path: Option<&Path>, value: &T) -> Result<()> {
    let mut text = serde_json::to_string_pretty(value)?;
    text.push('\n');
    match path {
        Some(p) => write_file(p, &text),
        None => Ok(io::stdout().write_all(text.as_bytes())?),
    }
}

fn write_file(path: &Path, contents: &str) -> Result<()> {
    fs::write(path, contents).with_context(|| format!("writing {}", path.display()))
}
