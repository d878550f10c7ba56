//! Argument parsing, command execution and table reproduction for `hcp`.

use std::path::PathBuf;

use anyhow::{bail, Context, Result};
use clap::error::ErrorKind;
use clap::{Args, CommandFactory, Parser, Subcommand, ValueEnum};
use rayon::prelude::*;
use serde::Serialize;
use serde_json::{json, Value};

use hcp_core::basis::arc_columns;
use hcp_core::census::{
    enumerate_feasible_bases, monte_carlo_census, trial_seed, CensusReport, MonteCarloReport, DEFAULT_BUDGET,
};
use hcp_core::graph::{gen_binomial, gen_hamiltonian_binomial, Arc, DirectedGraph};
use hcp_core::structure::{classify_basis, BasisType};
use hcp_core::walk::{walk_count_visits, walk_until_target, WalkConfig, WalkOutcome, WalkResult, WalkTarget};
use hcp_core::polytope::PolytopeError;
use hcp_core::{Beta, NumericMode, PolytopeKind, PolytopeSystem};

/// Environment override for the census subset budget.
pub const CENSUS_BUDGET_ENV: &str = "HCP_CENSUS_BUDGET";
/// Environment override for the total pivot steps one table row may spend.
pub const TABLE_BUDGET_ENV: &str = "HCP_TABLE_STEP_BUDGET";
pub const DEFAULT_TABLE_STEP_BUDGET: u64 = 50_000_000;

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Format {
    Json,
    Csv,
    Text,
}

#[derive(Debug, Parser)]
#[command(name = "hcp", version, about = "Random walks and censuses over feasible bases of Hamiltonian-cycle polytopes")]
struct Cli {
    /// Seed for every randomized step (echoed in the output).
    #[arg(long, global = true, default_value_t = 1)]
    seed: u64,
    /// Worker threads (default: all cores).
    #[arg(long, global = true)]
    threads: Option<usize>,
    /// Report format on stdout.
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    format: Format,
    /// Also write the JSON report (or, for `gen`, the edge list) here.
    #[arg(short, long, global = true)]
    output: Option<PathBuf>,
    #[command(subcommand)]
    command: CliCommand,
}

#[derive(Debug, Args)]
struct GraphArgs {
    /// Edge-list file ("n" on the first line, then one "i j" arc per line).
    #[arg(long, conflicts_with = "complete")]
    graph: Option<PathBuf>,
    /// Use the complete digraph on `--n` nodes.
    #[arg(long)]
    complete: bool,
    /// Node count for `--complete`.
    #[arg(long)]
    n: Option<usize>,
}

#[derive(Debug, Subcommand)]
enum CliCommand {
    /// Draw G(n,p), or with --planted the Hamiltonian variant.
    Gen {
        #[arg(long)]
        n: usize,
        /// Arc probability.
        #[arg(long, value_parser = parse_probability)]
        p: f64,
        /// Plant a uniformly random Hamiltonian cycle.
        #[arg(long)]
        planted: bool,
    },
    /// Assemble the constraint system and emit it as JSON.
    Build {
        #[command(flatten)]
        graph: GraphArgs,
        /// Discount factor in (0, 1): a fraction p/q (exact) or a decimal (float).
        #[arg(long, value_parser = parse_beta)]
        beta: Beta,
        /// Add the wedge rows (WH instead of H).
        #[arg(long)]
        wedge: bool,
    },
    /// Classify one basis given by its arcs ("1-2,2-3,...") plus optional slack columns.
    Classify {
        #[command(flatten)]
        graph: GraphArgs,
        /// Discount factor in (0, 1): a fraction p/q (exact) or a decimal (float).
        #[arg(long, value_parser = parse_beta)]
        beta: Beta,
        /// Add the wedge rows (WH instead of H).
        #[arg(long)]
        wedge: bool,
        #[arg(long, value_delimiter = ',', value_parser = parse_arc)]
        arcs: Vec<Arc>,
        /// Extra (slack) column indices for wedge systems.
        #[arg(long, value_delimiter = ',')]
        columns: Vec<usize>,
    },
    /// Exhaustive census of (n+1)-arc subsets.
    Enumerate {
        #[command(flatten)]
        graph: GraphArgs,
        /// Discount factor in (0, 1): a fraction p/q (exact) or a decimal (float).
        #[arg(long, value_parser = parse_beta)]
        beta: Beta,
        /// Refuse censuses with more subsets than this.
        #[arg(long)]
        budget: Option<u64>,
    },
    /// Census of one graph, or with --p/--trials a Monte-Carlo census of G(n,p).
    Census {
        #[command(flatten)]
        graph: GraphArgs,
        /// Discount factor in (0, 1): a fraction p/q (exact) or a decimal (float).
        #[arg(long, value_parser = parse_beta)]
        beta: Beta,
        /// Monte-Carlo mode: arc probability of the sampled graphs.
        #[arg(long, value_parser = parse_probability, requires = "trials")]
        p: Option<f64>,
        /// Monte-Carlo mode: number of sampled graphs.
        #[arg(long, requires = "p")]
        trials: Option<usize>,
        /// Refuse censuses with more subsets than this.
        #[arg(long)]
        budget: Option<u64>,
    },
    /// Random walk over feasible bases.
    Walk {
        #[command(flatten)]
        graph: GraphArgs,
        /// Discount factor in (0, 1): a fraction p/q (exact) or a decimal (float).
        #[arg(long, value_parser = parse_beta)]
        beta: Beta,
        /// Add the wedge rows (WH instead of H).
        #[arg(long)]
        wedge: bool,
        /// Stop at a quasi-Hamiltonian (wedge only) or a Hamiltonian basis.
        #[arg(long, value_enum, default_value_t = TargetArg::Quasi)]
        target: TargetArg,
        /// Step limit (MaxStep).
        #[arg(long, default_value_t = 30_000)]
        max_steps: u64,
        /// Histogram the type of every visited basis.
        #[arg(long)]
        record_types: bool,
        /// Count target visits over exactly max-steps moves instead of stopping.
        #[arg(long)]
        count: bool,
    },
    /// Search for a quasi-Hamiltonian basis at several β values.
    SweepBeta {
        #[command(flatten)]
        graph: GraphArgs,
        #[arg(long, value_delimiter = ',', value_parser = parse_beta, default_value = DEFAULT_SWEEP)]
        betas: Vec<Beta>,
        /// Step limit per walk.
        #[arg(long, default_value_t = 30_000)]
        max_steps: u64,
        /// Independent seeded runs per row.
        #[arg(long, default_value_t = 1)]
        replicas: usize,
    },
    /// Reproduce one of the three experiment tables.
    Tables {
        /// 1: steps vs n, 2: β sweep, 3: Hamiltonian visits.
        #[arg(long, value_parser = clap::value_parser!(u8).range(1..=3))]
        which: u8,
        /// Independent seeded runs per row.
        #[arg(long, default_value_t = 1)]
        replicas: usize,
        /// Restrict to these graph sizes (tables 1 and 3).
        #[arg(long, value_delimiter = ',')]
        sizes: Vec<usize>,
        /// Restrict to these β values (table 2).
        #[arg(long, value_delimiter = ',', value_parser = parse_beta)]
        betas: Vec<Beta>,
        /// Override the per-walk step limit.
        #[arg(long)]
        max_steps: Option<u64>,
    },
}

const DEFAULT_SWEEP: &str = "0.5,0.6,0.7,0.8,0.9,0.99,0.995,0.999,0.9995,0.9999";

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum TargetArg {
    Quasi,
    Ham,
}

fn parse_beta(s: &str) -> Result<Beta, String> {
    s.parse::<Beta>().map_err(|e| match e {
        PolytopeError::BetaSyntax(_) => format!("{e}; β is a decimal or p/q in the open interval (0, 1)"),
        e => e.to_string(),
    })
}

fn parse_probability(s: &str) -> Result<f64, String> {
    let p: f64 = s.parse().map_err(|_| format!("cannot parse probability `{s}`"))?;
    if (0.0..=1.0).contains(&p) {
        Ok(p)
    } else {
        Err(format!("probability {p} must lie in [0, 1]"))
    }
}

fn parse_arc(s: &str) -> Result<Arc, String> {
    let (i, j) = s
        .trim()
        .split_once('-')
        .ok_or_else(|| format!("arc `{s}` is not of the form i-j"))?;
    let node = |t: &str| t.trim().parse().map_err(|_| format!("bad node in arc `{s}`"));
    Ok((node(i)?, node(j)?))
}

#[derive(Clone, Debug, PartialEq)]
pub enum GraphSource {
    Complete(usize),
    File(PathBuf),
}

impl GraphSource {
    pub fn load(&self) -> Result<DirectedGraph> {
        match self {
            GraphSource::Complete(n) => Ok(DirectedGraph::complete(*n)),
            GraphSource::File(p) => {
                DirectedGraph::read_edge_list(p).with_context(|| format!("reading graph {}", p.display()))
            }
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum TableId {
    Steps,
    BetaSweep,
    Visits,
}

#[derive(Clone, Debug, PartialEq)]
pub enum Command {
    Gen { n: usize, p: f64, planted: bool },
    Build { graph: GraphSource, beta: Beta, kind: PolytopeKind },
    Classify { graph: GraphSource, beta: Beta, kind: PolytopeKind, arcs: Vec<Arc>, columns: Vec<usize> },
    Enumerate { graph: GraphSource, beta: Beta, budget: u64 },
    Census { graph: GraphSource, beta: Beta, budget: u64 },
    MonteCarlo { n: usize, p: f64, trials: usize, beta: Beta },
    Walk { graph: GraphSource, beta: Beta, kind: PolytopeKind, config: WalkConfig, count: bool },
    SweepBeta { graph: GraphSource, betas: Vec<Beta>, max_steps: u64, replicas: usize },
    Tables { which: TableId, replicas: usize, sizes: Vec<usize>, betas: Vec<Beta>, max_steps: Option<u64> },
}

impl Command {
    pub fn is_randomized(&self) -> bool {
        matches!(
            self,
            Command::Gen { .. }
                | Command::MonteCarlo { .. }
                | Command::Walk { .. }
                | Command::SweepBeta { .. }
                | Command::Tables { .. }
        )
    }
}

/// Validated invocation.
#[derive(Clone, Debug, PartialEq)]
pub struct ExperimentSpec {
    pub command: Command,
    pub seed: u64,
    pub threads: Option<usize>,
    pub format: Format,
    pub output: Option<PathBuf>,
}

fn usage(kind: ErrorKind, msg: impl std::fmt::Display) -> clap::Error {
    Cli::command().error(kind, msg)
}

fn graph_source(g: GraphArgs) -> Result<GraphSource, clap::Error> {
    match (g.graph, g.complete, g.n) {
        (Some(p), false, _) => Ok(GraphSource::File(p)),
        (None, true, Some(n)) => Ok(GraphSource::Complete(n)),
        (None, true, None) => Err(usage(ErrorKind::MissingRequiredArgument, "--complete needs --n")),
        _ => Err(usage(ErrorKind::MissingRequiredArgument, "give --graph FILE or --complete --n N")),
    }
}

fn env_budget(var: &str, default: u64) -> Result<u64, clap::Error> {
    match std::env::var(var) {
        Ok(v) => v
            .trim()
            .parse()
            .map_err(|_| usage(ErrorKind::InvalidValue, format!("{var}={v} is not a count"))),
        Err(_) => Ok(default),
    }
}

/// Parse and validate a full argument vector (program name first).
pub fn parse_args<I, T>(argv: I) -> Result<ExperimentSpec, clap::Error>
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = Cli::try_parse_from(argv)?;
    let kind = |wedge: bool| if wedge { PolytopeKind::WH } else { PolytopeKind::H };
    let census_budget = |b: Option<u64>| b.map_or_else(|| env_budget(CENSUS_BUDGET_ENV, DEFAULT_BUDGET), Ok);
    let exact = |beta: &Beta| {
        if beta.is_exact() {
            Ok(())
        } else {
            Err(usage(ErrorKind::InvalidValue, "census needs an exact β given as p/q"))
        }
    };
    let command = match cli.command {
        CliCommand::Gen { n, p, planted } => {
            if n < 2 {
                return Err(usage(ErrorKind::InvalidValue, "--n must be at least 2"));
            }
            Command::Gen { n, p, planted }
        }
        CliCommand::Build { graph, beta, wedge } => Command::Build {
            graph: graph_source(graph)?,
            beta,
            kind: kind(wedge),
        },
        CliCommand::Classify { graph, beta, wedge, arcs, columns } => Command::Classify {
            graph: graph_source(graph)?,
            beta,
            kind: kind(wedge),
            arcs,
            columns,
        },
        CliCommand::Enumerate { graph, beta, budget } => {
            exact(&beta)?;
            Command::Enumerate {
                graph: graph_source(graph)?,
                beta,
                budget: census_budget(budget)?,
            }
        }
        CliCommand::Census { graph, beta, p, trials, budget } => {
            exact(&beta)?;
            match (p, trials) {
                (Some(p), Some(trials)) => {
                    let n = graph
                        .n
                        .ok_or_else(|| usage(ErrorKind::MissingRequiredArgument, "Monte-Carlo census needs --n"))?;
                    if trials == 0 {
                        return Err(usage(ErrorKind::InvalidValue, "--trials must be positive"));
                    }
                    Command::MonteCarlo { n, p, trials, beta }
                }
                _ => Command::Census {
                    graph: graph_source(graph)?,
                    beta,
                    budget: census_budget(budget)?,
                },
            }
        }
        CliCommand::Walk { graph, beta, wedge, target, max_steps, record_types, count } => {
            let target = match target {
                TargetArg::Quasi => WalkTarget::QuasiHamiltonian,
                TargetArg::Ham => WalkTarget::Hamiltonian,
            };
            if target == WalkTarget::QuasiHamiltonian && !wedge {
                return Err(usage(ErrorKind::ArgumentConflict, "--target quasi needs --wedge"));
            }
            if max_steps == 0 {
                return Err(usage(ErrorKind::InvalidValue, "--max-steps must be at least 1"));
            }
            let mut config = WalkConfig::new(max_steps, cli.seed, target);
            config.record_types = record_types;
            Command::Walk {
                graph: graph_source(graph)?,
                beta,
                kind: kind(wedge),
                config,
                count,
            }
        }
        CliCommand::SweepBeta { graph, betas, max_steps, replicas } => Command::SweepBeta {
            graph: graph_source(graph)?,
            betas,
            max_steps,
            replicas: replicas.max(1),
        },
        CliCommand::Tables { which, replicas, sizes, betas, max_steps } => Command::Tables {
            which: match which {
                1 => TableId::Steps,
                2 => TableId::BetaSweep,
                _ => TableId::Visits,
            },
            replicas: replicas.max(1),
            sizes,
            betas,
            max_steps,
        },
    };
    Ok(ExperimentSpec {
        command,
        seed: cli.seed,
        threads: cli.threads,
        format: cli.format,
        output: cli.output,
    })
}

/// Rendered result of one command.
#[derive(Clone, Debug, PartialEq)]
pub struct Report {
    pub json: Value,
    pub text: String,
    pub csv: String,
    /// File body for `--output` when it is not the JSON report (`gen` writes an edge list).
    pub artifact: Option<String>,
}

impl Report {
    pub fn render(&self, format: Format) -> String {
        match format {
            Format::Json => serde_json::to_string_pretty(&self.json).expect("report values serialise"),
            Format::Csv => self.csv.clone(),
            Format::Text => self.text.clone(),
        }
    }
}

fn build_system(graph: &GraphSource, beta: &Beta, kind: PolytopeKind) -> Result<PolytopeSystem> {
    let g = graph.load()?;
    let mode = if beta.is_exact() {
        NumericMode::ExactRational
    } else {
        NumericMode::float()
    };
    Ok(PolytopeSystem::build(&g, beta, mode, kind)?)
}

fn census_report(r: &CensusReport) -> Result<Report> {
    let mut csv = String::from("type,count,closed_form\n");
    for t in BasisType::ALL {
        let cf = r
            .closed_form
            .as_ref()
            .map_or(String::new(), |cf| cf.as_array()[t.index()].to_string());
        csv += &format!("{t:?},{},{cf}\n", r.count(t));
    }
    Ok(Report {
        json: serde_json::to_value(r)?,
        text: r.to_table(),
        csv,
        artifact: None,
    })
}

fn monte_carlo_report(r: &MonteCarloReport) -> Result<Report> {
    let mut text = format!(
        "monte-carlo census n={} p={} trials={} beta={} seed={}\n{:<8}{:>12}{:>12}{:>14}\n",
        r.n, r.p, r.trials, r.beta, r.seed, "type", "mean", "std err", "expected"
    );
    let mut csv = String::from("type,mean,std_error,expected\n");
    for t in BasisType::ALL {
        let e = &r.types[t.index()];
        let x = r.expected.values[t.index()];
        text += &format!("{:<8}{:>12.4}{:>12.4}{:>14.4}\n", format!("{t:?}"), e.mean, e.std_error, x);
        csv += &format!("{t:?},{},{},{x}\n", e.mean, e.std_error);
    }
    Ok(Report {
        json: serde_json::to_value(r)?,
        text,
        csv,
        artifact: None,
    })
}

fn walk_text(r: &WalkResult) -> String {
    let outcome = match &r.outcome {
        WalkOutcome::Found { steps, basis } => format!("found after {steps} steps\nbasis={basis:?}"),
        WalkOutcome::Fail { max_step, steps, isolated } => {
            format!("fail: no target within {max_step} steps ({steps} taken{})", if *isolated { ", isolated basis" } else { "" })
        }
        WalkOutcome::Completed { steps } => format!("completed {steps} steps"),
    };
    let mut s = format!("seed={}\noutcome: {outcome}\nvisit_counter={}\n", r.seed, r.visit_counter);
    if let Some(h) = &r.type_histogram {
        s += &format!("types={:?} unclassified={}\n", h.types, h.unclassified);
    }
    if let Some(h) = &r.common_extreme_types {
        s += &format!("common_extreme_types={:?} unclassified={}\n", h.types, h.unclassified);
    }
    s
}

/// Order statistics of replicated walk outcomes; `None` marks a failed run.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct RowStats {
    pub label: String,
    /// Value reported in the original experiment, for reference.
    pub reference: String,
    pub replicas: usize,
    pub successes: usize,
    /// Median with failures ranked above every success.
    pub median: Option<u64>,
    pub min: Option<u64>,
    pub max: Option<u64>,
    pub seeds: Vec<u64>,
    pub note: Option<String>,
}

impl RowStats {
    fn new(label: String, reference: String, runs: &[(u64, Option<u64>)]) -> Self {
        let mut ok: Vec<u64> = runs.iter().filter_map(|r| r.1).collect();
        ok.sort_unstable();
        // Rank failures as +∞.
        let mid = runs.len() / 2;
        let median = if runs.len() % 2 == 1 {
            ok.get(mid).copied()
        } else {
            match (ok.get(mid - 1), ok.get(mid)) {
                (Some(&a), Some(&b)) => Some((a + b) / 2),
                _ => None,
            }
        };
        RowStats {
            label,
            reference,
            replicas: runs.len(),
            successes: ok.len(),
            median,
            min: ok.first().copied(),
            max: ok.last().copied(),
            seeds: runs.iter().map(|r| r.0).collect(),
            note: None,
        }
    }

    fn skipped(label: String, reference: String, note: String) -> Self {
        RowStats {
            label,
            reference,
            replicas: 0,
            successes: 0,
            median: None,
            min: None,
            max: None,
            seeds: Vec::new(),
            note: Some(note),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct TableReport {
    pub which: u8,
    pub title: String,
    pub column: String,
    pub seed: u64,
    pub max_steps: Vec<u64>,
    pub rows: Vec<RowStats>,
}

fn show(v: Option<u64>) -> String {
    v.map_or_else(|| "fail".into(), |v| v.to_string())
}

impl TableReport {
    pub fn to_csv(&self) -> String {
        let mut s = String::from("row,reference,replicas,successes,median,min,max,note\n");
        for r in &self.rows {
            s += &format!(
                "{},{},{},{},{},{},{},{}\n",
                r.label,
                r.reference,
                r.replicas,
                r.successes,
                show(r.median),
                show(r.min),
                show(r.max),
                r.note.as_deref().unwrap_or("")
            );
        }
        s
    }

    pub fn to_text(&self) -> String {
        let mut s = format!(
            "Table {}: {} (seed {})\n{:<16}{:>10}{:>10}{:>10}{:>10}{:>10}   {}\n",
            self.which, self.title, self.seed, "row", "reference", "ok", "median", "min", "max", self.column
        );
        for r in &self.rows {
            s += &format!(
                "{:<16}{:>10}{:>10}{:>10}{:>10}{:>10}",
                r.label,
                r.reference,
                format!("{}/{}", r.successes, r.replicas),
                show(r.median),
                show(r.min),
                show(r.max)
            );
            if let Some(n) = &r.note {
                s += &format!("   {n}");
            }
            s.push('\n');
        }
        s
    }
}

const TABLE1: [(usize, u64); 7] = [(10, 6), (20, 454), (30, 1358), (40, 5714), (50, 4392), (60, 6230), (70, 6387)];
const TABLE2: [(&str, Option<u64>); 10] = [
    ("0.5", None),
    ("0.6", None),
    ("0.7", None),
    ("0.8", None),
    ("0.9", None),
    ("0.99", Some(1944)),
    ("0.995", Some(1139)),
    ("0.999", Some(1001)),
    ("0.9995", Some(84)),
    ("0.9999", Some(23)),
];
const TABLE3: [(usize, u64); 7] = [
    (10, 70_197),
    (20, 47_897),
    (30, 6629),
    (40, 34_434),
    (50, 19_472),
    (60, 1790),
    (70, 2863),
];
/// Step limit for table 1 as a multiple of the reference count.
pub const TABLE1_STEP_FACTOR: u64 = 50;
pub const TABLE2_MAX_STEPS: u64 = 30_000;
pub const TABLE3_STEPS: u64 = 100_000;
pub const TABLE_BETA: f64 = 0.999;

/// Graph seed and walk seed of replica `r` for graph size `n`.
pub fn replica_seeds(seed: u64, n: usize, r: usize) -> (u64, u64) {
    let base = trial_seed(seed, n as u64);
    (trial_seed(base, 2 * r as u64), trial_seed(base, 2 * r as u64 + 1))
}

fn wh_system(g: &DirectedGraph, beta: f64) -> Result<PolytopeSystem> {
    Ok(PolytopeSystem::build(g, &Beta::float(beta)?, NumericMode::float(), PolytopeKind::WH)?)
}

fn row_budget() -> Result<u64> {
    Ok(env_budget(TABLE_BUDGET_ENV, DEFAULT_TABLE_STEP_BUDGET)?)
}

/// Reproduce table `which` (1: steps to a quasi-Hamiltonian basis by graph
/// size; 2: the same against β on one 30-node graph; 3: quasi-Hamiltonian
/// visits in a fixed number of moves), each row over `replicas` seeds.
pub fn run_tables(which: u8, replicas: usize, seed: u64) -> Result<TableReport> {
    run_tables_with(which, replicas, seed, &[], &[], None)
}

pub fn run_tables_with(
    which: u8,
    replicas: usize,
    seed: u64,
    sizes: &[usize],
    betas: &[Beta],
    max_steps: Option<u64>,
) -> Result<TableReport> {
    let replicas = replicas.max(1);
    let budget = row_budget()?;
    let keep = |n: usize| sizes.is_empty() || sizes.contains(&n);
    match which {
        1 | 3 => {
            let table: &[(usize, u64)] = if which == 1 { &TABLE1 } else { &TABLE3 };
            let mut rows = Vec::new();
            let mut limits = Vec::new();
            for &(n, reference) in table.iter().filter(|r| keep(r.0)) {
                let limit = max_steps.unwrap_or(if which == 1 { TABLE1_STEP_FACTOR * reference } else { TABLE3_STEPS });
                limits.push(limit);
                let label = format!("G({n},3/{n})");
                if limit.saturating_mul(replicas as u64) > budget {
                    rows.push(RowStats::skipped(
                        label,
                        reference.to_string(),
                        format!("skipped: {replicas} x {limit} steps exceed the budget of {budget}"),
                    ));
                    continue;
                }
                let runs = (0..replicas)
                    .into_par_iter()
                    .map(|r| {
                        let (gs, ws) = replica_seeds(seed, n, r);
                        let g = gen_hamiltonian_binomial(n, 3.0 / n as f64, gs)?.graph;
                        let sys = wh_system(&g, TABLE_BETA)?;
                        let cfg = WalkConfig::new(limit, ws, WalkTarget::QuasiHamiltonian);
                        let v = if which == 1 {
                            walk_until_target(&sys, &cfg)?.found_steps()
                        } else {
                            Some(walk_count_visits(&sys, &cfg)?.visit_counter)
                        };
                        Ok((ws, v))
                    })
                    .collect::<Result<Vec<_>>>()?;
                rows.push(RowStats::new(label, reference.to_string(), &runs));
            }
            let (title, column) = if which == 1 {
                ("steps to a quasi-Hamiltonian basis, beta=0.999", "steps")
            } else {
                ("quasi-Hamiltonian bases visited in the walk, beta=0.999", "visits")
            };
            Ok(TableReport {
                which,
                title: title.into(),
                column: column.into(),
                seed,
                max_steps: limits,
                rows,
            })
        }
        2 => {
            let limit = max_steps.unwrap_or(TABLE2_MAX_STEPS);
            let (gs, _) = replica_seeds(seed, 30, 0);
            let g = gen_hamiltonian_binomial(30, 0.1, gs)?.graph;
            let chosen: Vec<(Beta, String)> = if betas.is_empty() {
                TABLE2
                    .iter()
                    .map(|(b, r)| Ok((b.parse::<Beta>()?, show(*r))))
                    .collect::<Result<_>>()?
            } else {
                betas
                    .iter()
                    .map(|b| {
                        let r = TABLE2
                            .iter()
                            .find(|(s, _)| s.parse::<f64>().ok() == Some(b.value()))
                            .map_or_else(|| "-".into(), |(_, r)| show(*r));
                        (b.clone(), r)
                    })
                    .collect()
            };
            let mut rows = Vec::new();
            for (beta, reference) in chosen {
                let label = format!("beta={beta}");
                if limit.saturating_mul(replicas as u64) > budget {
                    rows.push(RowStats::skipped(label, reference, format!("skipped: step budget {budget}")));
                    continue;
                }
                let sys = wh_system(&g, beta.value())?;
                let runs = (0..replicas)
                    .into_par_iter()
                    .map(|r| {
                        let ws = replica_seeds(seed, 30, r).1;
                        let cfg = WalkConfig::new(limit, ws, WalkTarget::QuasiHamiltonian);
                        Ok((ws, walk_until_target(&sys, &cfg)?.found_steps()))
                    })
                    .collect::<Result<Vec<_>>>()?;
                rows.push(RowStats::new(label, reference, &runs));
            }
            Ok(TableReport {
                which,
                title: "dependence on beta, G(30,3/30)".into(),
                column: "steps".into(),
                seed,
                max_steps: vec![limit],
                rows,
            })
        }
        _ => bail!("no table {which}; choose 1, 2 or 3"),
    }
}

fn table_report(t: &TableReport) -> Result<Report> {
    Ok(Report {
        json: serde_json::to_value(t)?,
        text: t.to_text(),
        csv: t.to_csv(),
        artifact: None,
    })
}

/// Run a validated spec.
pub fn run(spec: &ExperimentSpec) -> Result<Report> {
    if let Some(t) = spec.threads {
        // A second initialisation in the same process is harmless to ignore.
        let _ = rayon::ThreadPoolBuilder::new().num_threads(t).build_global();
    }
    let seed = spec.seed;
    match &spec.command {
        Command::Gen { n, p, planted } => {
            let (g, cycle) = if *planted {
                let inst = gen_hamiltonian_binomial(*n, *p, seed)?;
                (inst.graph, Some(inst.planted_cycle))
            } else {
                (gen_binomial(*n, *p, seed)?, None)
            };
            let json = json!({"seed": seed, "n": n, "p": p, "planted_cycle": cycle, "graph": g});
            let mut text = format!("# seed={seed} n={n} p={p}\n");
            if let Some(c) = &cycle {
                text += &format!("# planted cycle {c:?}\n");
            }
            text += &g.to_edge_list();
            let mut csv = String::from("i,j\n");
            for &(i, j) in g.arcs() {
                csv += &format!("{i},{j}\n");
            }
            Ok(Report {
                json,
                text,
                csv,
                artifact: Some(g.to_edge_list()),
            })
        }
        Command::Build { graph, beta, kind } => {
            let sys = build_system(graph, beta, *kind)?;
            let doc = sys.to_document();
            let text = format!(
                "{:?} system: {} rows x {} columns, beta={}, mode={:?}\n",
                kind,
                sys.rows(),
                sys.cols(),
                beta,
                sys.mode()
            );
            let mut csv = String::new();
            for r in 0..sys.rows() {
                let row: Vec<String> = (0..sys.cols()).map(|c| sys.entry(r, c).to_string()).collect();
                csv += &format!("{},{}\n", row.join(","), sys.rhs()[r]);
            }
            Ok(Report {
                json: serde_json::to_value(doc)?,
                text,
                csv,
                artifact: None,
            })
        }
        Command::Classify { graph, beta, kind, arcs, columns } => {
            let sys = build_system(graph, beta, *kind)?;
            let mut cols = arc_columns(&sys, arcs)?;
            cols.extend(columns);
            let class = classify_basis(&sys, &cols)?;
            let text = format!(
                "class={:?} quasi_hamiltonian={} components={}\n",
                class.class, class.quasi_hamiltonian, class.components
            );
            let csv = format!("class,quasi_hamiltonian,components\n{:?},{},{}\n", class.class, class.quasi_hamiltonian, class.components);
            Ok(Report {
                json: serde_json::to_value(&class)?,
                text,
                csv,
                artifact: None,
            })
        }
        Command::Enumerate { graph, beta, budget } | Command::Census { graph, beta, budget } => {
            let g = graph.load()?;
            census_report(&enumerate_feasible_bases(&g, beta, *budget)?)
        }
        Command::MonteCarlo { n, p, trials, beta } => {
            monte_carlo_report(&monte_carlo_census(*n, *p, *trials, beta, seed)?)
        }
        Command::Walk { graph, beta, kind, config, count } => {
            let sys = build_system(graph, beta, *kind)?;
            let r = if *count {
                walk_count_visits(&sys, config)?
            } else {
                walk_until_target(&sys, config)?
            };
            let csv = format!(
                "seed,steps,visit_counter\n{},{},{}\n",
                r.seed,
                show(r.found_steps()),
                r.visit_counter
            );
            Ok(Report {
                json: serde_json::to_value(&r)?,
                text: walk_text(&r),
                csv,
                artifact: None,
            })
        }
        Command::SweepBeta { graph, betas, max_steps, replicas } => {
            let g = graph.load()?;
            let mut rows = Vec::new();
            for beta in betas {
                let sys = wh_system(&g, beta.value())?;
                let runs = (0..*replicas)
                    .into_par_iter()
                    .map(|r| {
                        let ws = trial_seed(seed, r as u64);
                        let cfg = WalkConfig::new(*max_steps, ws, WalkTarget::QuasiHamiltonian);
                        Ok((ws, walk_until_target(&sys, &cfg)?.found_steps()))
                    })
                    .collect::<Result<Vec<_>>>()?;
                rows.push(RowStats::new(format!("beta={beta}"), "-".into(), &runs));
            }
            table_report(&TableReport {
                which: 2,
                title: format!("dependence on beta, {} nodes", g.node_count()),
                column: "steps".into(),
                seed,
                max_steps: vec![*max_steps],
                rows,
            })
        }
        Command::Tables { which, replicas, sizes, betas, max_steps } => {
            let w = match which {
                TableId::Steps => 1,
                TableId::BetaSweep => 2,
                TableId::Visits => 3,
            };
            table_report(&run_tables_with(w, *replicas, seed, sizes, betas, *max_steps)?)
        }
    }
}
