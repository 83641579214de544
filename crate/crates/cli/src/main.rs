use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Args, CommandFactory, FromArgMatches, Parser, Subcommand};
use serde_json::json;

use rbcsp_core::bench::{self, Rtd};
use rbcsp_core::csp::{emit_csp, parse_csp, CspFile, CspInstance};
use rbcsp_core::misbridge::{csp_to_mis, emit_dimacs, mis_to_csp, parse_dimacs};
use rbcsp_core::modelrb::{self, ModelRbParams};
use rbcsp_core::rng::PRNG_ID;
use rbcsp_core::target::{default_conflict_cap, TargetSpec};
use rbcsp_core::ulsa::{self, UlsaConfig};

/// Random binary CSP workbench: Model RB generation, ULSA local search,
/// MIS conversion and runtime-distribution benchmarks.
#[derive(Debug, Parser)]
#[command(name = "rbcsp")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Generate a Model RB instance (phase-transition parameters by default).
    Gen(GenArgs),
    /// Run ULSA once and print a JSON record.
    Solve(SolveArgs),
    /// Run ULSA many times and report runtime distribution statistics.
    Bench(BenchArgs),
    /// Convert between the native CSP format and DIMACS graphs.
    Convert(ConvertArgs),
    /// Recover a CSP from a BHOSLIB-style DIMACS graph.
    Recover(RecoverArgs),
}

#[derive(Debug, Args)]
struct GenArgs {
    #[arg(long)]
    n: usize,
    #[arg(long, default_value_t = modelrb::PHASE_TRANSITION_ALPHA)]
    alpha: f64,
    /// Defaults to 0.8 / (ln 4 - ln 3).
    #[arg(long)]
    r: Option<f64>,
    #[arg(long, default_value_t = modelrb::PHASE_TRANSITION_P)]
    p: f64,
    /// Drawn from entropy and echoed when omitted.
    #[arg(long)]
    seed: Option<u64>,
    /// Plant a hidden solution and emit it as an `s` line.
    #[arg(long)]
    forced: bool,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct SearchArgs {
    /// Iteration budget per run; 0 = unbounded.
    #[arg(long, default_value_t = 0)]
    max_iters: u64,
    /// Stop at a partial solution satisfying this many variables.
    #[arg(long)]
    target: Option<usize>,
    /// Check the target only in states with at most this many conflicts.
    #[arg(long, requires = "target")]
    conflict_cap: Option<usize>,
    /// Reinitialize every N iterations.
    #[arg(long)]
    restart_every: Option<u64>,
}

#[derive(Debug, Args)]
struct SolveArgs {
    #[arg(long = "in")]
    input: PathBuf,
    #[arg(long)]
    seed: Option<u64>,
    #[command(flatten)]
    search: SearchArgs,
    /// Include expansion/worsening counters.
    #[arg(long)]
    stats: bool,
}

#[derive(Debug, Args)]
struct BenchArgs {
    #[arg(long = "in")]
    input: PathBuf,
    #[arg(long, default_value_t = 100)]
    runs: usize,
    #[arg(long)]
    base_seed: Option<u64>,
    #[command(flatten)]
    search: SearchArgs,
    #[arg(long, default_value_t = 1)]
    workers: usize,
    /// Upper ecdf probability for the early linear fit.
    #[arg(long, default_value_t = bench::DEFAULT_EARLY_QUANTILE)]
    early_quantile: f64,
    /// CSV: iterations,ecdf,fitted
    #[arg(long)]
    rtd_out: Option<PathBuf>,
    /// CSV: conflicts,runs (best conflict count per run)
    #[arg(long)]
    hist_out: Option<PathBuf>,
    /// JSON summary; printed to stdout when omitted.
    #[arg(long)]
    summary_out: Option<PathBuf>,
}

#[derive(Debug, Args)]
#[command(group(clap::ArgGroup::new("direction").required(true).args(["to_mis", "to_csp"])))]
struct ConvertArgs {
    /// Native CSP -> DIMACS graph.
    #[arg(long)]
    to_mis: bool,
    /// DIMACS graph -> native CSP.
    #[arg(long, requires = "block_size")]
    to_csp: bool,
    #[arg(long)]
    block_size: Option<usize>,
    #[arg(long = "in")]
    input: PathBuf,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct RecoverArgs {
    dimacs: PathBuf,
    /// Domain size (vertices per variable block).
    #[arg(long)]
    d: usize,
    #[arg(long)]
    out: Option<PathBuf>,
}

fn main() -> ExitCode {
    let version: &'static str =
        Box::leak(format!("{} (prng {PRNG_ID})", env!("CARGO_PKG_VERSION")).into_boxed_str());
    let matches = Cli::command().version(version).get_matches();
    let cli = match Cli::from_arg_matches(&matches) {
        Ok(cli) => cli,
        Err(e) => e.exit(),
    };
    match dispatch(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(1)
        }
    }
}

fn dispatch(cmd: Command) -> Result<()> {
    match cmd {
        Command::Gen(a) => gen(a),
        Command::Solve(a) => solve(a),
        Command::Bench(a) => run_bench(a),
        Command::Convert(a) => convert(a),
        Command::Recover(a) => recover(a),
    }
}

fn gen(a: GenArgs) -> Result<()> {
    let r = a.r.unwrap_or_else(modelrb::phase_transition_r);
    let params = ModelRbParams::new(a.n, a.alpha, r, a.p)?;
    let seed = seed_or_entropy(a.seed, "seed");
    let comments = vec![
        format!(
            "model rb n={} alpha={} r={} p={} d={} m={} forbidden={}",
            params.n,
            params.alpha,
            params.r,
            params.p,
            params.domain_size(),
            params.constraint_count(),
            params.forbidden_per_constraint()
        ),
        format!("seed {seed}{}", if a.forced { " forced" } else { "" }),
    ];
    let text = if a.forced {
        let (inst, hidden) = modelrb::generate_forced(&params, seed)?;
        emit_csp(&inst, Some(&hidden), &comments)
    } else {
        emit_csp(&modelrb::generate(&params, seed)?, None, &comments)
    };
    write_output(a.out.as_deref(), &text)
}

fn solve(a: SolveArgs) -> Result<()> {
    let file = read_csp(&a.input)?;
    let seed = seed_or_entropy(a.seed, "seed");
    let config = search_config(&a.search, &file.instance, a.stats)?;
    let record = ulsa::run(&file.instance, &config, seed)?;
    let mut value = serde_json::to_value(&record)?;
    if !a.stats {
        value["stats"] = serde_json::Value::Null;
    }
    write_output(None, &format!("{}\n", serde_json::to_string(&value)?))
}

fn run_bench(a: BenchArgs) -> Result<()> {
    let file = read_csp(&a.input)?;
    let inst = &file.instance;
    let base_seed = seed_or_entropy(a.base_seed, "base seed");
    let mut config = search_config(&a.search, inst, true)?;
    config.track_best = true;
    let records = bench::run_many(inst, &config, a.runs, base_seed, a.workers)?;
    let summary = bench::summarize(&records, a.early_quantile);
    let rtd = Rtd::from_records(&records);
    let histogram = bench::histogram(inst, &records);

    if let Some(path) = &a.rtd_out {
        let f = create(path)?;
        bench::write_rtd_csv(&rtd, summary.exponential_fit.as_ref(), f)?;
    }
    if let Some(path) = &a.hist_out {
        bench::write_histogram_csv(&histogram, create(path)?)?;
    }
    let report = json!({
        "instance": {
            "n": inst.num_vars(),
            "d": inst.domain_size(),
            "constraints": inst.num_constraints(),
            "path": a.input.display().to_string(),
        },
        "base_seed": base_seed,
        "prng": PRNG_ID,
        "max_iters": config.max_iterations,
        "target": config.target.map(|t| json!({"t": t.target(), "conflict_cap": t.conflict_cap()})),
        "summary": summary,
        "histogram": histogram,
        "iterations": records.iter().map(|r| r.iterations).collect::<Vec<_>>(),
    });
    let text = format!("{}\n", serde_json::to_string_pretty(&report)?);
    write_output(a.summary_out.as_deref(), &text)
}

fn convert(a: ConvertArgs) -> Result<()> {
    let text = if a.to_mis {
        let file = read_csp(&a.input)?;
        emit_dimacs(&csp_to_mis(&file.instance))
    } else {
        let d = a.block_size.expect("clap enforces --block-size");
        emit_csp(&graph_to_csp(&a.input, d)?, None, &[])
    };
    write_output(a.out.as_deref(), &text)
}

fn recover(a: RecoverArgs) -> Result<()> {
    let inst = graph_to_csp(&a.dimacs, a.d)?;
    let note = format!(
        "recovered from {} (constraints over the same variable pair are merged)",
        a.dimacs.display()
    );
    write_output(a.out.as_deref(), &emit_csp(&inst, None, &[note]))
}

fn graph_to_csp(path: &Path, d: usize) -> Result<CspInstance> {
    let text = read(path)?;
    let parsed = parse_dimacs(&text).with_context(|| format!("{}", path.display()))?;
    if parsed.duplicate_edges > 0 {
        eprintln!("warning: {}: dropped {} duplicate edges", path.display(), parsed.duplicate_edges);
    }
    if parsed.declared_edges != parsed.graph.num_edges() + parsed.duplicate_edges {
        eprintln!(
            "warning: {}: header declares {} edges, file has {}",
            path.display(),
            parsed.declared_edges,
            parsed.graph.num_edges() + parsed.duplicate_edges
        );
    }
    mis_to_csp(&parsed.graph, d).with_context(|| format!("{}", path.display()))
}

fn search_config(s: &SearchArgs, inst: &CspInstance, stats: bool) -> Result<UlsaConfig> {
    let n = inst.num_vars();
    let target = match s.target {
        Some(t) => {
            if t > n {
                bail!("--target {t} exceeds the {n} variables of the instance");
            }
            let cap = s.conflict_cap.unwrap_or_else(|| default_conflict_cap(n - t));
            Some(TargetSpec::new(n, t, cap)?)
        }
        None => None,
    };
    if s.restart_every == Some(0) {
        bail!("--restart-every must be positive");
    }
    Ok(UlsaConfig {
        max_iterations: s.max_iters,
        target,
        restart_interval: s.restart_every,
        stats_enabled: stats,
        track_best: false,
    })
}

fn seed_or_entropy(seed: Option<u64>, what: &str) -> u64 {
    seed.unwrap_or_else(|| {
        let s = rand::random();
        eprintln!("{what} {s}");
        s
    })
}

fn read(path: &Path) -> Result<String> {
    fs::read_to_string(path).with_context(|| format!("cannot read {}", path.display()))
}

fn read_csp(path: &Path) -> Result<CspFile> {
    parse_csp(&read(path)?).with_context(|| format!("{}", path.display()))
}

fn create(path: &Path) -> Result<fs::File> {
    fs::File::create(path).with_context(|| format!("cannot create {}", path.display()))
}

fn write_output(path: Option<&Path>, text: &str) -> Result<()> {
    match path {
        Some(p) => fs::write(p, text).with_context(|| format!("cannot write {}", p.display())),
        None => {
            let mut out = io::stdout().lock();
            out.write_all(text.as_bytes())?;
            Ok(out.flush()?)
        }
    }
}
