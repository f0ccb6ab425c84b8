//! Reporting, sweeping and cross-checking around the opmos solvers.

use std::fmt::Write as _;
use std::io::Write;

use anyhow::Result;
use opmos_core::graph::{generate_synthetic, GenParams, Topology};
use opmos_core::oracle::{brute_force_pareto, compare_fronts, FrontDiff};
use opmos_core::{
    solve_parallel, solve_sequential_with, ExecModel, FrontEntry, Graph, IterationTrace, LbPolicy, QueueKind, RunConfig,
    SolveResult, Stats,
};
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Algo {
    Seq,
    Opmos,
}

impl Algo {
    pub fn as_str(self) -> &'static str {
        match self {
            Algo::Seq => "seq",
            Algo::Opmos => "opmos",
        }
    }
}

impl std::fmt::Display for Algo {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.as_str())
    }
}

impl std::str::FromStr for Algo {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "seq" => Ok(Algo::Seq),
            "opmos" => Ok(Algo::Opmos),
            other => Err(format!("unknown algorithm '{other}' (expected seq or opmos)")),
        }
    }
}

/// Which solver to run and how.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct SolverConfig {
    pub algo: Algo,
    /// Parallel settings; only `queue` applies to the sequential solver.
    #[serde(flatten)]
    pub run: RunConfig,
}

impl SolverConfig {
    pub fn sequential(queue: QueueKind) -> Self {
        SolverConfig { algo: Algo::Seq, run: RunConfig { queue, ..Default::default() } }
    }

    pub fn parallel(run: RunConfig) -> Self {
        SolverConfig { algo: Algo::Opmos, run }
    }

    pub fn workers(&self) -> usize {
        match self.algo {
            Algo::Seq => 0,
            Algo::Opmos => self.run.num_workers(),
        }
    }

    pub fn solve(&self, g: &Graph) -> Result<SolveResult> {
        Ok(match self.algo {
            Algo::Seq => solve_sequential_with(g, self.run.queue),
            Algo::Opmos => solve_parallel(g, &self.run)?,
        })
    }
}

/// Order-insensitive digest of a front's cost vectors: SHA-256 over the
/// lexicographically sorted vectors, one per line, components rendered in
/// shortest round-trip decimal form.
pub fn front_hash(costs: &[Vec<f64>]) -> String {
    let mut sorted = costs.to_vec();
    sorted.sort_by(|a, b| {
        a.iter().zip(b).map(|(x, y)| x.total_cmp(y)).find(|o| o.is_ne()).unwrap_or(a.len().cmp(&b.len()))
    });
    let mut text = String::new();
    for c in &sorted {
        let parts: Vec<String> = c.iter().map(|x| format!("{x:?}")).collect();
        text.push_str(&parts.join(","));
        text.push('\n');
    }
    let digest = Sha256::digest(text.as_bytes());
    digest.iter().fold(String::with_capacity(64), |mut s, b| {
        let _ = write!(s, "{b:02x}");
        s
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReportFrontEntry {
    pub cost: Vec<f64>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub path: Option<Vec<u32>>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CheckOutcome {
    pub against: Algo,
    pub equal: bool,
    pub only_in_run: Vec<Vec<f64>>,
    pub only_in_reference: Vec<Vec<f64>>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunReport {
    pub schema_version: u32,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub graph: Option<String>,
    pub algo: Algo,
    pub workers: usize,
    pub config: SolverConfig,
    pub front_hash: String,
    pub front: Vec<ReportFrontEntry>,
    pub stats: Stats,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub trace: Option<Vec<IterationTrace>>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub check: Option<CheckOutcome>,
}

impl RunReport {
    pub fn new(cfg: &SolverConfig, graph: Option<String>, result: &SolveResult, emit_paths: bool, trace: bool) -> Self {
        RunReport {
            schema_version: SCHEMA_VERSION,
            graph,
            algo: cfg.algo,
            workers: cfg.workers(),
            config: *cfg,
            front_hash: front_hash(&result.front_costs()),
            front: result.front.iter().map(|e: &FrontEntry| ReportFrontEntry {
                cost: e.cost.clone(),
                path: emit_paths.then(|| e.path.clone()),
            })
            .collect(),
            stats: result.stats.clone(),
            trace: trace.then(|| result.trace.clone()),
            check: None,
        }
    }
}

/// Lists of values to sweep; every combination is run.
#[derive(Debug, Clone, PartialEq)]
pub struct SweepSpec {
    pub algos: Vec<Algo>,
    pub threads: Vec<usize>,
    pub num_pop: Vec<usize>,
    pub queues: Vec<QueueKind>,
    pub execs: Vec<ExecModel>,
    pub lbs: Vec<LbPolicy>,
    pub reps: usize,
}

impl Default for SweepSpec {
    fn default() -> Self {
        SweepSpec {
            algos: vec![Algo::Opmos],
            threads: vec![2],
            num_pop: vec![1],
            queues: vec![QueueKind::Priority],
            execs: vec![ExecModel::Async],
            lbs: vec![LbPolicy::Opmos],
            reps: 1,
        }
    }
}

impl SweepSpec {
    /// Configurations in sweep order. The sequential solver ignores the
    /// parallel axes, so it contributes one configuration per queue kind.
    pub fn configs(&self) -> Vec<SolverConfig> {
        let mut out = Vec::new();
        for &algo in &self.algos {
            for &queue in &self.queues {
                match algo {
                    Algo::Seq => out.push(SolverConfig::sequential(queue)),
                    Algo::Opmos => {
                        for &num_threads in &self.threads {
                            for &num_pop in &self.num_pop {
                                for &exec in &self.execs {
                                    for &lb in &self.lbs {
                                        out.push(SolverConfig::parallel(RunConfig { num_threads, num_pop, queue, exec, lb }));
                                    }
                                }
                            }
                        }
                    }
                }
            }
        }
        out
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepRow {
    pub algo: Algo,
    pub threads: usize,
    pub workers: usize,
    pub num_pop: usize,
    pub queue: QueueKind,
    pub exec: ExecModel,
    pub lb: LbPolicy,
    pub rep: usize,
    pub labels_extracted: u64,
    pub labels_skipped: u64,
    pub candidates_generated: u64,
    pub dominance_comparisons: u64,
    pub iterations: u64,
    pub time_total_ns: u64,
    pub time_open_extract_ns: u64,
    pub time_updates_ns: u64,
    pub time_label_processing_ns: u64,
    pub time_communication_ns: u64,
    pub front_size: u64,
    pub front_hash: String,
}

pub const SWEEP_HEADER: [&str; 20] = [
    "algo",
    "threads",
    "workers",
    "num_pop",
    "queue",
    "exec",
    "lb",
    "rep",
    "labels_extracted",
    "labels_skipped",
    "candidates_generated",
    "dominance_comparisons",
    "iterations",
    "time_total_ns",
    "time_open_extract_ns",
    "time_updates_ns",
    "time_label_processing_ns",
    "time_communication_ns",
    "front_size",
    "front_hash",
];

fn nanos(d: std::time::Duration) -> u64 {
    d.as_nanos().min(u64::MAX as u128) as u64
}

impl SweepRow {
    pub fn new(cfg: &SolverConfig, rep: usize, r: &SolveResult) -> Self {
        let s = &r.stats;
        SweepRow {
            algo: cfg.algo,
            threads: if cfg.algo == Algo::Seq { 1 } else { cfg.run.num_threads },
            workers: cfg.workers(),
            num_pop: if cfg.algo == Algo::Seq { 1 } else { cfg.run.num_pop },
            queue: cfg.run.queue,
            exec: cfg.run.exec,
            lb: cfg.run.lb,
            rep,
            labels_extracted: s.labels_extracted,
            labels_skipped: s.labels_skipped,
            candidates_generated: s.candidates_generated,
            dominance_comparisons: s.dominance_comparisons,
            iterations: s.iterations,
            time_total_ns: nanos(s.time_total),
            time_open_extract_ns: nanos(s.time_open_extract),
            time_updates_ns: nanos(s.time_updates),
            time_label_processing_ns: nanos(s.time_label_processing),
            time_communication_ns: nanos(s.time_communication),
            front_size: s.front_size,
            front_hash: front_hash(&r.front_costs()),
        }
    }
}

/// Result of a sweep: the rows written plus whether every row agreed on the
/// front.
#[derive(Debug, Clone, PartialEq)]
pub struct SweepSummary {
    pub rows: usize,
    pub distinct_hashes: Vec<String>,
}

impl SweepSummary {
    pub fn consistent(&self) -> bool {
        self.distinct_hashes.len() <= 1
    }
}

/// Runs every configuration `reps` times and streams one CSV row per run.
pub fn run_sweep(g: &Graph, spec: &SweepSpec, out: impl Write) -> Result<SweepSummary> {
    let mut w = csv::WriterBuilder::new().has_headers(false).from_writer(out);
    w.write_record(SWEEP_HEADER)?;
    let mut rows = 0;
    let mut hashes: Vec<String> = Vec::new();
    for cfg in spec.configs() {
        for rep in 0..spec.reps {
            let r = cfg.solve(g)?;
            let row = SweepRow::new(&cfg, rep, &r);
            if !hashes.contains(&row.front_hash) {
                hashes.push(row.front_hash.clone());
            }
            w.serialize(&row)?;
            w.flush()?;
            rows += 1;
        }
    }
    w.flush()?;
    Ok(SweepSummary { rows, distinct_hashes: hashes })
}

/// The configuration matrix used by `check`: every queue, execution model
/// and load balancer for each worker count and pop size.
pub fn check_matrix(threads: &[usize], pops: &[usize]) -> Vec<RunConfig> {
    let spec = SweepSpec {
        algos: vec![Algo::Opmos],
        threads: threads.to_vec(),
        num_pop: pops.to_vec(),
        queues: QueueKind::ALL.to_vec(),
        execs: ExecModel::ALL.to_vec(),
        lbs: LbPolicy::ALL.to_vec(),
        reps: 1,
    };
    spec.configs().into_iter().map(|c| c.run).collect()
}

#[derive(Debug, Clone, PartialEq)]
pub struct CheckFailure {
    pub label: String,
    pub diff: FrontDiff,
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct CheckReport {
    pub solves: usize,
    pub failures: Vec<CheckFailure>,
}

impl CheckReport {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }
}

/// Optional fault injection for exercising the failure path.
pub type FrontHook<'a> = &'a dyn Fn(&mut Vec<Vec<f64>>);

/// Compares the sequential front, and every parallel configuration, against
/// the reference (the brute-force oracle unless skipped, else sequential).
pub fn check_graph(
    g: &Graph,
    use_oracle: bool,
    matrix: &[RunConfig],
    hook: Option<FrontHook<'_>>,
) -> Result<CheckReport> {
    let mut report = CheckReport::default();
    let mut seq = solve_sequential_with(g, QueueKind::Priority).front_costs();
    if let Some(h) = hook {
        h(&mut seq);
    }
    report.solves += 1;
    let reference = if use_oracle {
        let oracle = brute_force_pareto(g, g.num_nodes())?;
        let diff = compare_fronts(&seq, &oracle)?;
        if !diff.equal {
            report.failures.push(CheckFailure { label: "seq vs oracle".into(), diff });
        }
        oracle
    } else {
        seq
    };
    for cfg in matrix {
        let par = solve_parallel(g, cfg)?.front_costs();
        report.solves += 1;
        let diff = compare_fronts(&par, &reference)?;
        if !diff.equal {
            let label = format!(
                "opmos threads={} num_pop={} queue={} exec={} lb={} vs {}",
                cfg.num_threads,
                cfg.num_pop,
                cfg.queue,
                cfg.exec,
                cfg.lb,
                if use_oracle { "oracle" } else { "seq" }
            );
            report.failures.push(CheckFailure { label, diff });
        }
    }
    Ok(report)
}

/// Oracle-eligible random instance `i` of a seeded check corpus: at most 12
/// nodes, two to four objectives, correlation cycling through mixed values.
pub fn random_check_graph(seed: u64, i: u64) -> Graph {
    const CORRELATIONS: [f64; 4] = [-0.8, -0.3, 0.0, 0.5];
    let s = seed.wrapping_mul(1_000_003).wrapping_add(i);
    let num_nodes = 6 + (s % 7) as usize;
    generate_synthetic(&GenParams {
        topology: Topology::RandomDigraph,
        num_nodes,
        avg_out_degree: 2 + (s % 3) as usize,
        num_objectives: 2 + (i % 3) as usize,
        correlation: CORRELATIONS[(i % 4) as usize],
        seed: s,
    })
    .expect("check corpus parameters are feasible")
}
