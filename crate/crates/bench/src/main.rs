use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::error::ErrorKind;
use clap::{Args, CommandFactory, Parser, Subcommand};
use opmos_bench::{
    check_graph, check_matrix, random_check_graph, run_sweep, Algo, CheckOutcome, RunReport, SolverConfig, SweepSpec,
};
use opmos_core::graph::{compute_heuristic, generate_synthetic, load_graph, write_graph, write_graph_to, GenParams, Topology};
use opmos_core::oracle::{compare_fronts, DEFAULT_NODE_LIMIT};
use opmos_core::{ExecModel, Graph, LbPolicy, QueueKind, RunConfig};

const EXIT_RUNTIME: u8 = 1;
const EXIT_CHECK_FAILED: u8 = 3;

#[derive(Parser)]
#[command(name = "opmos", version, about = "Exact multi-objective shortest paths: sequential and ordered-parallel solvers")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Solve one graph and print a JSON report.
    Run(RunArgs),
    /// Solve one graph under every combination of the given settings; CSV out.
    Sweep(SweepArgs),
    /// Generate a synthetic graph in MOG v1 format.
    Gen(GenArgs),
    /// Cross-check oracle, sequential and parallel fronts.
    Check(CheckArgs),
}

#[derive(Args)]
struct RunArgs {
    #[arg(long)]
    graph: PathBuf,
    /// seq | opmos
    #[arg(long, default_value = "opmos")]
    algo: Algo,
    /// Total threads, coordinator included.
    #[arg(long, default_value_t = 2)]
    threads: usize,
    #[arg(long, default_value_t = 1)]
    num_pop: usize,
    /// pq | fifo
    #[arg(long, default_value = "pq")]
    queue: QueueKind,
    /// async | in-place | async-open-sync-upd | sync | dup-dom
    #[arg(long, default_value = "async")]
    exec: ExecModel,
    /// opmos | label | neighbor | goal-priority
    #[arg(long, default_value = "opmos")]
    lb: LbPolicy,
    /// Also write the stats object to this file.
    #[arg(long)]
    stats: Option<PathBuf>,
    /// Write the per-iteration trace to this file.
    #[arg(long)]
    trace: Option<PathBuf>,
    /// Include reconstructed node paths in the report.
    #[arg(long)]
    emit_paths: bool,
    /// Solve again with this algorithm and compare fronts.
    #[arg(long)]
    check_against: Option<Algo>,
    /// Write the report here instead of stdout.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct SweepArgs {
    #[arg(long)]
    graph: PathBuf,
    #[arg(long, num_args = 0.., value_delimiter = ',')]
    algo: Option<Vec<Algo>>,
    #[arg(long, num_args = 0.., value_delimiter = ',')]
    threads: Option<Vec<usize>>,
    #[arg(long, num_args = 0.., value_delimiter = ',')]
    num_pop: Option<Vec<usize>>,
    #[arg(long, num_args = 0.., value_delimiter = ',')]
    queue: Option<Vec<QueueKind>>,
    #[arg(long, num_args = 0.., value_delimiter = ',')]
    exec: Option<Vec<ExecModel>>,
    #[arg(long, num_args = 0.., value_delimiter = ',')]
    lb: Option<Vec<LbPolicy>>,
    /// Repetitions per configuration.
    #[arg(long, default_value_t = 1)]
    reps: usize,
    /// Write CSV here instead of stdout.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct GenArgs {
    /// grid | random-digraph
    #[arg(long, default_value = "random-digraph", value_parser = parse_topology)]
    topology: Topology,
    #[arg(long, default_value_t = 100)]
    nodes: usize,
    #[arg(long, default_value_t = 4)]
    degree: usize,
    #[arg(long, default_value_t = 2, value_parser = clap::value_parser!(u32).range(1..))]
    objectives: u32,
    /// Inter-objective correlation in [-1, 1].
    #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
    correlation: f64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Append the per-objective heuristic section.
    #[arg(long)]
    with_heuristic: bool,
    /// Output file; stdout when absent.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct CheckArgs {
    #[arg(long, conflicts_with = "random", required_unless_present = "random")]
    graph: Option<PathBuf>,
    /// Check this many generated oracle-eligible instances.
    #[arg(long)]
    random: Option<u64>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Compare parallel fronts with the sequential front only.
    #[arg(long)]
    skip_oracle: bool,
    /// Allow the oracle on graphs up to this many nodes.
    #[arg(long, default_value_t = DEFAULT_NODE_LIMIT)]
    oracle_limit: usize,
    #[arg(long, num_args = 1.., value_delimiter = ',', default_value = "2,3,5,9")]
    threads: Vec<usize>,
    #[arg(long, num_args = 1.., value_delimiter = ',', default_value = "1,4,16")]
    num_pop: Vec<usize>,
    /// Test hook: drop one sequential front entry before comparing.
    #[arg(long, hide = true)]
    corrupt_front: bool,
}

fn parse_topology(s: &str) -> Result<Topology, String> {
    match s {
        "grid" => Ok(Topology::Grid),
        "random-digraph" | "random" => Ok(Topology::RandomDigraph),
        other => Err(format!("unknown topology '{other}' (expected grid or random-digraph)")),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let outcome = match cli.command {
        Command::Run(a) => cmd_run(a),
        Command::Sweep(a) => cmd_sweep(a),
        Command::Gen(a) => cmd_gen(a),
        Command::Check(a) => cmd_check(a),
    };
    match outcome {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(EXIT_CHECK_FAILED),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(EXIT_RUNTIME)
        }
    }
}

/// Reports a semantically invalid flag combination the way clap reports
/// parse errors: on stderr with exit code 2.
fn usage_error(msg: impl std::fmt::Display) -> ! {
    Cli::command().error(ErrorKind::ValueValidation, msg).exit()
}

fn validated(cfg: RunConfig) -> RunConfig {
    if let Err(e) = cfg.validate() {
        usage_error(e);
    }
    cfg
}

fn load(path: &Path) -> Result<Graph> {
    load_graph(path).with_context(|| format!("loading {}", path.display()))
}

fn output(path: Option<&Path>) -> Result<Box<dyn Write>> {
    Ok(match path {
        Some(p) => Box::new(BufWriter::new(File::create(p).with_context(|| format!("creating {}", p.display()))?)),
        None => Box::new(BufWriter::new(io::stdout().lock())),
    })
}

fn write_json<T: serde::Serialize>(value: &T, path: Option<&Path>) -> Result<()> {
    let mut out = output(path)?;
    serde_json::to_writer_pretty(&mut out, value)?;
    writeln!(out)?;
    out.flush()?;
    Ok(())
}

fn cmd_run(a: RunArgs) -> Result<bool> {
    let g = load(&a.graph)?;
    let run = RunConfig { num_threads: a.threads, num_pop: a.num_pop, queue: a.queue, exec: a.exec, lb: a.lb };
    let cfg = match a.algo {
        Algo::Seq => SolverConfig::sequential(a.queue),
        Algo::Opmos => SolverConfig::parallel(validated(run)),
    };
    let result = cfg.solve(&g)?;
    let mut report = RunReport::new(&cfg, Some(a.graph.display().to_string()), &result, a.emit_paths, false);
    let mut passed = true;
    if let Some(against) = a.check_against {
        let reference = match against {
            Algo::Seq => SolverConfig::sequential(QueueKind::Priority),
            Algo::Opmos => SolverConfig::parallel(run),
        }
        .solve(&g)?;
        let diff = compare_fronts(&result.front_costs(), &reference.front_costs())?;
        passed = diff.equal;
        if diff.equal {
            eprintln!("fronts equal ({} entries)", result.front.len());
        } else {
            eprintln!("fronts differ: only in {}: {:?}; only in {}: {:?}", cfg.algo, diff.only_in_a, against, diff.only_in_b);
        }
        report.check = Some(CheckOutcome {
            against,
            equal: diff.equal,
            only_in_run: diff.only_in_a,
            only_in_reference: diff.only_in_b,
        });
    }
    if let Some(p) = &a.stats {
        write_json(&result.stats, Some(p))?;
    }
    if let Some(p) = &a.trace {
        write_json(&result.trace, Some(p))?;
    }
    write_json(&report, a.out.as_deref())?;
    Ok(passed)
}

fn cmd_sweep(a: SweepArgs) -> Result<bool> {
    let g = load(&a.graph)?;
    let d = SweepSpec::default();
    let spec = SweepSpec {
        algos: a.algo.unwrap_or(d.algos),
        threads: a.threads.unwrap_or(d.threads),
        num_pop: a.num_pop.unwrap_or(d.num_pop),
        queues: a.queue.unwrap_or(d.queues),
        execs: a.exec.unwrap_or(d.execs),
        lbs: a.lb.unwrap_or(d.lbs),
        reps: a.reps,
    };
    for cfg in spec.configs() {
        if cfg.algo == Algo::Opmos {
            validated(cfg.run);
        }
    }
    let summary = run_sweep(&g, &spec, output(a.out.as_deref())?)?;
    if !summary.consistent() {
        eprintln!("front_hash differs across rows: {:?}", summary.distinct_hashes);
    }
    Ok(summary.consistent())
}

fn cmd_gen(a: GenArgs) -> Result<bool> {
    let p = GenParams {
        topology: a.topology,
        num_nodes: a.nodes,
        avg_out_degree: a.degree,
        num_objectives: a.objectives as usize,
        correlation: a.correlation,
        seed: a.seed,
    };
    let mut g = generate_synthetic(&p)?;
    if a.with_heuristic {
        g = compute_heuristic(&g);
    }
    let summary = format!("nodes {} edges {} objectives {} seed {}", g.num_nodes(), g.num_edges(), g.num_objectives(), a.seed);
    match &a.out {
        Some(path) => {
            write_graph(&g, path).with_context(|| format!("writing {}", path.display()))?;
            println!("{summary}");
        }
        None => {
            let mut out = BufWriter::new(io::stdout().lock());
            write_graph_to(&g, &mut out)?;
            out.flush()?;
            eprintln!("{summary}");
        }
    }
    Ok(true)
}

fn cmd_check(a: CheckArgs) -> Result<bool> {
    let graphs: Vec<(String, Graph)> = match (&a.graph, a.random) {
        (Some(path), _) => vec![(path.display().to_string(), load(path)?)],
        (None, Some(n)) => (0..n).map(|i| (format!("random seed={} #{i}", a.seed), random_check_graph(a.seed, i))).collect(),
        (None, None) => bail!("either --graph or --random is required"),
    };
    let use_oracle = !a.skip_oracle;
    if use_oracle {
        for (name, g) in &graphs {
            if g.num_nodes() > a.oracle_limit {
                bail!(
                    "{name}: {} nodes exceeds the oracle limit of {}; pass --skip-oracle or raise --oracle-limit",
                    g.num_nodes(),
                    a.oracle_limit
                );
            }
        }
    }
    let matrix = check_matrix(&a.threads, &a.num_pop);
    for cfg in &matrix {
        validated(*cfg);
    }
    let corrupt = |front: &mut Vec<Vec<f64>>| {
        front.pop();
    };
    let hook: Option<opmos_bench::FrontHook<'_>> = a.corrupt_front.then_some(&corrupt as _);
    let mut all_passed = true;
    for (name, g) in &graphs {
        let report = check_graph(g, use_oracle, &matrix, hook)?;
        if report.passed() {
            println!("PASS {name} ({} solves)", report.solves);
        } else {
            all_passed = false;
            println!("FAIL {name}");
            for f in &report.failures {
                println!("  {}: only_in_a={:?} only_in_b={:?}", f.label, f.diff.only_in_a, f.diff.only_in_b);
            }
        }
    }
    Ok(all_passed)
}
