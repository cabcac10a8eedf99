//! `mars` — exact probe-set anonymity analysis for graphs.
//!
//! Exit codes: 0 for a decisive answer (found, proven absent, file
//! written, certificate settled either way), 1 for usage or input errors,
//! 2 for inconclusive searches (size bound or budget reached first).

mod report;

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use mars_core::families::{generate, FamilyError, FamilySpec};
use mars_core::graph::{DistanceMatrix, Graph, GraphError};
use mars_core::milp::{build_model, MilpError};
use mars_core::multiset::SetError;
use mars_core::solver::{
    anonymity_level, k_spectrum, kappa, msad, verify_witness, Budget, SolverError,
};

use report::{
    anonymity_outcome, decisive, export_outcome, kappa_outcome, render_text, search_row,
    verify_outcome, Input, Outcome, Params, Report,
};

/// Default cap on set evaluations per requested guarantee.
const DEFAULT_SUBSET_BUDGET: u64 = 100_000_000;

#[derive(Parser)]
#[command(
    name = "mars",
    version,
    about = "Exact analysis of multiset-based probe-set anonymity in graphs",
    propagate_version = true
)]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
    /// Report format written to stdout.
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    format: Format,
    /// Worker threads for the search commands; falls back to the
    /// MARS_THREADS environment variable, then to all available cores.
    #[arg(long, global = true)]
    threads: Option<usize>,
    /// Wall-clock budget in seconds for each search command (set
    /// evaluations are additionally capped at 10^8 per requested k).
    #[arg(long, global = true, default_value_t = 60.0)]
    budget: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
}

#[derive(Subcommand)]
enum Cmd {
    /// Find a minimum probe set whose anonymity guarantee is exactly k.
    Analyze(AnalyzeArgs),
    /// Find the largest guarantee any probe set achieves.
    Kappa(KappaArgs),
    /// Worst-case guarantee against any probe set of size at most ell.
    Anonymity(AnonymityArgs),
    /// Minimum probe sets for several guarantees in one shared sweep.
    Spectrum(SpectrumArgs),
    /// Generate a named graph family as an edge list.
    Gen(GenArgs),
    /// Export the integer-program formulation in LP format.
    ExportMilp(ExportArgs),
    /// Check a claimed probe set and certify the bound it proves.
    Verify(VerifyArgs),
}

#[derive(Args)]
struct AnalyzeArgs {
    /// Graph file in edge-list format (`u v` per line, optional `n` header).
    graph: PathBuf,
    /// Required guarantee: smallest indistinguishable group size.
    #[arg(short, long)]
    k: usize,
    /// Largest probe-set size to search (default: n - 1, i.e. everything).
    #[arg(long)]
    max_card: Option<usize>,
}

#[derive(Args)]
struct KappaArgs {
    /// Graph file in edge-list format.
    graph: PathBuf,
    /// Largest probe-set size to search (default: n - 1).
    #[arg(long)]
    max_card: Option<usize>,
}

#[derive(Args)]
struct AnonymityArgs {
    /// Graph file in edge-list format.
    graph: PathBuf,
    /// Attacker budget: largest probe-set size considered.
    #[arg(long)]
    ell: usize,
}

#[derive(Args)]
struct SpectrumArgs {
    /// Graph file in edge-list format.
    graph: PathBuf,
    /// Guarantees to search: a single value `3`, a range `1..5`
    /// (inclusive), or a comma list `1,2,4`.
    #[arg(short, long)]
    k: String,
    /// Largest probe-set size to search (default: n - 1).
    #[arg(long)]
    max_card: Option<usize>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Family {
    Path,
    Cycle,
    Bipartite,
    Wheel,
    Btree,
    Hypercube3,
    Twinstar,
    Sparse,
    Dense,
    Tree,
}

#[derive(Args)]
struct GenArgs {
    /// Which family to generate.
    #[arg(long, value_enum)]
    family: Family,
    /// Vertex count (path, cycle, wheel, sparse, dense, tree).
    #[arg(long)]
    n: Option<usize>,
    /// First side size (bipartite).
    #[arg(long)]
    r: Option<usize>,
    /// Second side size (bipartite).
    #[arg(long)]
    t: Option<usize>,
    /// Height (btree).
    #[arg(long)]
    d: Option<usize>,
    /// Per-vertex degree budget cap (sparse).
    #[arg(long)]
    max_degree: Option<usize>,
    /// Number of random edges removed from the complete graph (dense).
    #[arg(long)]
    delta: Option<usize>,
    /// Seed for the random families (sparse, dense, tree).
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Output file; without it the edge list goes to stdout and the
    /// summary line to stderr.
    #[arg(short, long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct ExportArgs {
    /// Graph file in edge-list format.
    graph: PathBuf,
    /// Guarantee the formulation should target.
    #[arg(short, long)]
    k: usize,
    /// Output file; without it the LP text goes to stdout and the
    /// summary line to stderr.
    #[arg(short, long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct VerifyArgs {
    /// Graph file in edge-list format.
    graph: PathBuf,
    /// Claimed guarantee.
    #[arg(short, long)]
    k: usize,
    /// The probe set, as comma-separated vertex indices (e.g. `0,5,20`).
    #[arg(long)]
    set: String,
}

#[derive(Debug, thiserror::Error)]
enum CliError {
    #[error("{path}: {source}")]
    File {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error(transparent)]
    Family(#[from] FamilyError),
    #[error(transparent)]
    Solver(#[from] SolverError),
    #[error(transparent)]
    Milp(#[from] MilpError),
    #[error(transparent)]
    Set(#[from] SetError),
    #[error("thread pool: {0}")]
    Pool(#[from] rayon::ThreadPoolBuildError),
    #[error("{0}")]
    Usage(String),
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(err) => {
            // Help and version displays are successes; everything else is
            // a usage error.
            let code = u8::from(err.use_stderr());
            let _ = err.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(code) => code,
        Err(err) => {
            eprintln!("error: {err}");
            ExitCode::from(1)
        }
    }
}

fn run(cli: Cli) -> Result<ExitCode, CliError> {
    match &cli.cmd {
        Cmd::Analyze(args) => cmd_analyze(&cli, args),
        Cmd::Kappa(args) => cmd_kappa(&cli, args),
        Cmd::Anonymity(args) => cmd_anonymity(&cli, args),
        Cmd::Spectrum(args) => cmd_spectrum(&cli, args),
        Cmd::Gen(args) => cmd_gen(&cli, args),
        Cmd::ExportMilp(args) => cmd_export_milp(&cli, args),
        Cmd::Verify(args) => cmd_verify(&cli, args),
    }
}

/// Resolves `--threads`, the MARS_THREADS variable, or the machine width.
fn resolve_threads(flag: Option<usize>) -> Result<usize, CliError> {
    let threads = match flag {
        Some(t) => t,
        None => match std::env::var("MARS_THREADS") {
            Ok(raw) => raw.trim().parse().map_err(|_| {
                CliError::Usage(format!("MARS_THREADS must be a positive integer, got `{raw}`"))
            })?,
            Err(_) => std::thread::available_parallelism()
                .map(|w| w.get())
                .unwrap_or(1),
        },
    };
    if threads == 0 {
        return Err(CliError::Usage("--threads must be at least 1".into()));
    }
    Ok(threads)
}

fn worker_pool(threads: usize) -> Result<rayon::ThreadPool, CliError> {
    Ok(rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build()?)
}

fn load_graph(path: &Path) -> Result<(Graph, DistanceMatrix), CliError> {
    let text = fs::read_to_string(path).map_err(|source| CliError::File {
        path: path.to_path_buf(),
        source,
    })?;
    let g = Graph::parse_edge_list(&text)?;
    let dm = DistanceMatrix::from_graph(&g);
    Ok((g, dm))
}

fn input_block(path: &Path, g: &Graph, dm: &DistanceMatrix) -> Input {
    Input {
        path: Some(path.display().to_string()),
        family: None,
        n: g.n(),
        m: g.m(),
        diameter: dm.diameter(),
    }
}

fn budget_of(cli: &Cli, searches: usize) -> Budget {
    Budget {
        max_seconds: cli.budget,
        max_subsets: DEFAULT_SUBSET_BUDGET.saturating_mul(searches as u64),
    }
}

/// Prints the report in the requested format and converts the decisive
/// flag into the exit code.
fn finish(cli: &Cli, report: &Report, decisive_run: bool) -> Result<ExitCode, CliError> {
    emit(cli.format, report)?;
    Ok(ExitCode::from(if decisive_run { 0 } else { 2 }))
}

fn emit(format: Format, report: &Report) -> Result<(), CliError> {
    match format {
        Format::Text => print!("{}", render_text(report)),
        Format::Json => {
            let text = serde_json::to_string_pretty(report)
                .expect("reports contain no unserializable values");
            println!("{text}");
        }
    }
    Ok(())
}

fn cmd_analyze(cli: &Cli, args: &AnalyzeArgs) -> Result<ExitCode, CliError> {
    let started = Instant::now();
    let (g, dm) = load_graph(&args.graph)?;
    let max_card = args.max_card.unwrap_or(dm.n() - 1);
    let threads = resolve_threads(cli.threads)?;
    let budget = budget_of(cli, 1);
    let pool = worker_pool(threads)?;
    let out = pool.install(|| msad(&dm, args.k, max_card, budget))?;
    let report = Report {
        tool: "mars",
        version: env!("CARGO_PKG_VERSION"),
        operation: "analyze",
        input: input_block(&args.graph, &g, &dm),
        parameters: Params {
            k: Some(args.k),
            max_card: Some(max_card),
            budget_seconds: Some(budget.max_seconds),
            budget_subsets: Some(budget.max_subsets),
            threads: Some(threads),
            ..Params::default()
        },
        outcome: Outcome::Search(search_row(None, &out)),
        elapsed_seconds: started.elapsed().as_secs_f64(),
    };
    finish(cli, &report, decisive(out.status))
}

fn cmd_kappa(cli: &Cli, args: &KappaArgs) -> Result<ExitCode, CliError> {
    let started = Instant::now();
    let (g, dm) = load_graph(&args.graph)?;
    let max_card = args.max_card.unwrap_or(dm.n() - 1);
    let threads = resolve_threads(cli.threads)?;
    let budget = budget_of(cli, 1);
    let pool = worker_pool(threads)?;
    let out = pool.install(|| kappa(&dm, max_card, budget))?;
    let report = Report {
        tool: "mars",
        version: env!("CARGO_PKG_VERSION"),
        operation: "kappa",
        input: input_block(&args.graph, &g, &dm),
        parameters: Params {
            max_card: Some(max_card),
            budget_seconds: Some(budget.max_seconds),
            budget_subsets: Some(budget.max_subsets),
            threads: Some(threads),
            ..Params::default()
        },
        outcome: kappa_outcome(&out),
        elapsed_seconds: started.elapsed().as_secs_f64(),
    };
    finish(cli, &report, out.exact)
}

fn cmd_anonymity(cli: &Cli, args: &AnonymityArgs) -> Result<ExitCode, CliError> {
    let started = Instant::now();
    let (g, dm) = load_graph(&args.graph)?;
    let threads = resolve_threads(cli.threads)?;
    let budget = budget_of(cli, 1);
    let pool = worker_pool(threads)?;
    let profile = pool.install(|| anonymity_level(&dm, args.ell, budget))?;
    let report = Report {
        tool: "mars",
        version: env!("CARGO_PKG_VERSION"),
        operation: "anonymity",
        input: input_block(&args.graph, &g, &dm),
        parameters: Params {
            ell: Some(args.ell),
            budget_seconds: Some(budget.max_seconds),
            budget_subsets: Some(budget.max_subsets),
            threads: Some(threads),
            ..Params::default()
        },
        outcome: anonymity_outcome(&profile),
        elapsed_seconds: started.elapsed().as_secs_f64(),
    };
    finish(cli, &report, profile.exact)
}

fn cmd_spectrum(cli: &Cli, args: &SpectrumArgs) -> Result<ExitCode, CliError> {
    let started = Instant::now();
    let ks = parse_ks(&args.k)?;
    let (g, dm) = load_graph(&args.graph)?;
    let max_card = args.max_card.unwrap_or(dm.n() - 1);
    let threads = resolve_threads(cli.threads)?;
    let budget = budget_of(cli, ks.len());
    let pool = worker_pool(threads)?;
    let outcomes = pool.install(|| k_spectrum(&dm, &ks, max_card, budget))?;
    let rows: Vec<_> = outcomes
        .iter()
        .map(|(&k, out)| search_row(Some(k), out))
        .collect();
    let all_decisive = outcomes.values().all(|out| decisive(out.status));
    let report = Report {
        tool: "mars",
        version: env!("CARGO_PKG_VERSION"),
        operation: "spectrum",
        input: input_block(&args.graph, &g, &dm),
        parameters: Params {
            ks: Some(ks),
            max_card: Some(max_card),
            budget_seconds: Some(budget.max_seconds),
            budget_subsets: Some(budget.max_subsets),
            threads: Some(threads),
            ..Params::default()
        },
        outcome: Outcome::Spectrum { rows },
        elapsed_seconds: started.elapsed().as_secs_f64(),
    };
    finish(cli, &report, all_decisive)
}

/// `3`, `1..5` (inclusive), or `1,2,4` — sorted and deduplicated.
fn parse_ks(text: &str) -> Result<Vec<usize>, CliError> {
    let bad = |reason: &str| CliError::Usage(format!("bad guarantee list `{text}`: {reason}"));
    let trimmed = text.trim();
    let mut ks: Vec<usize> = if let Some((lo, hi)) = trimmed.split_once("..") {
        let lo: usize = lo.trim().parse().map_err(|_| bad("range start"))?;
        let hi: usize = hi.trim().parse().map_err(|_| bad("range end"))?;
        if lo > hi {
            return Err(bad("range start exceeds range end"));
        }
        (lo..=hi).collect()
    } else {
        trimmed
            .split(',')
            .map(|part| part.trim().parse::<usize>().map_err(|_| bad("not a number")))
            .collect::<Result<Vec<_>, _>>()?
    };
    ks.sort_unstable();
    ks.dedup();
    if ks.is_empty() || ks[0] == 0 {
        return Err(bad("guarantees start at 1"));
    }
    Ok(ks)
}

/// `0,5,20` → vertex list (order preserved; the library normalizes).
fn parse_set(text: &str) -> Result<Vec<usize>, CliError> {
    text.trim()
        .split(',')
        .map(|part| {
            part.trim()
                .parse::<usize>()
                .map_err(|_| CliError::Usage(format!("bad vertex `{part}` in --set")))
        })
        .collect()
}

fn family_spec(args: &GenArgs) -> Result<FamilySpec, CliError> {
    let need = |flag: &str, value: Option<usize>| {
        value.ok_or_else(|| {
            CliError::Usage(format!(
                "--family {:?} requires --{flag}",
                args.family
            ))
        })
    };
    Ok(match args.family {
        Family::Path => FamilySpec::Path {
            n: need("n", args.n)?,
        },
        Family::Cycle => FamilySpec::Cycle {
            n: need("n", args.n)?,
        },
        Family::Bipartite => FamilySpec::CompleteBipartite {
            r: need("r", args.r)?,
            t: need("t", args.t)?,
        },
        Family::Wheel => FamilySpec::Wheel {
            n: need("n", args.n)?,
        },
        Family::Btree => FamilySpec::CompleteBinaryTree {
            depth: need("d", args.d)?,
        },
        Family::Hypercube3 => FamilySpec::Hypercube3,
        Family::Twinstar => FamilySpec::TwinStar,
        Family::Sparse => FamilySpec::SparseRandom {
            n: need("n", args.n)?,
            max_degree: need("max-degree", args.max_degree)?,
            seed: args.seed,
        },
        Family::Dense => FamilySpec::DenseRandom {
            n: need("n", args.n)?,
            removed: need("delta", args.delta)?,
            seed: args.seed,
        },
        Family::Tree => FamilySpec::RandomTree {
            n: need("n", args.n)?,
            seed: args.seed,
        },
    })
}

fn family_label(spec: &FamilySpec) -> String {
    match spec {
        FamilySpec::Path { n } => format!("path n={n}"),
        FamilySpec::Cycle { n } => format!("cycle n={n}"),
        FamilySpec::CompleteBipartite { r, t } => format!("bipartite r={r} t={t}"),
        FamilySpec::Wheel { n } => format!("wheel n={n}"),
        FamilySpec::CompleteBinaryTree { depth } => format!("btree d={depth}"),
        FamilySpec::Hypercube3 => "hypercube3".into(),
        FamilySpec::TwinStar => "twinstar".into(),
        FamilySpec::SparseRandom {
            n,
            max_degree,
            seed,
        } => format!("sparse n={n} max-degree={max_degree} seed={seed}"),
        FamilySpec::DenseRandom { n, removed, seed } => {
            format!("dense n={n} delta={removed} seed={seed}")
        }
        FamilySpec::RandomTree { n, seed } => format!("tree n={n} seed={seed}"),
    }
}

fn uses_seed(family: Family) -> bool {
    matches!(family, Family::Sparse | Family::Dense | Family::Tree)
}

fn cmd_gen(cli: &Cli, args: &GenArgs) -> Result<ExitCode, CliError> {
    let started = Instant::now();
    let spec = family_spec(args)?;
    let g = generate(&spec)?;
    let dm = DistanceMatrix::from_graph(&g);
    let text = g.to_edge_list();
    let out_str = args.out.as_ref().map(|p| p.display().to_string());
    match &args.out {
        Some(path) => fs::write(path, &text).map_err(|source| CliError::File {
            path: path.clone(),
            source,
        })?,
        None => print!("{text}"),
    }
    let report = Report {
        tool: "mars",
        version: env!("CARGO_PKG_VERSION"),
        operation: "gen",
        input: Input {
            path: None,
            family: Some(family_label(&spec)),
            n: g.n(),
            m: g.m(),
            diameter: dm.diameter(),
        },
        parameters: Params {
            seed: uses_seed(args.family).then_some(args.seed),
            out: out_str.clone(),
            ..Params::default()
        },
        outcome: Outcome::Gen {
            path: out_str,
            n: g.n(),
            m: g.m(),
            diameter: dm.diameter(),
        },
        elapsed_seconds: started.elapsed().as_secs_f64(),
    };
    if args.out.is_some() {
        emit(cli.format, &report)?;
    } else {
        // The edge list owns stdout; keep the summary visible on stderr.
        eprint!("{}", render_text(&report));
    }
    Ok(ExitCode::from(0))
}

fn cmd_export_milp(cli: &Cli, args: &ExportArgs) -> Result<ExitCode, CliError> {
    let started = Instant::now();
    let (g, dm) = load_graph(&args.graph)?;
    let model = build_model(&dm, args.k)?;
    let lp = model.export_lp();
    let out_str = args.out.as_ref().map(|p| p.display().to_string());
    match &args.out {
        Some(path) => fs::write(path, &lp).map_err(|source| CliError::File {
            path: path.clone(),
            source,
        })?,
        None => print!("{lp}"),
    }
    let report = Report {
        tool: "mars",
        version: env!("CARGO_PKG_VERSION"),
        operation: "export-milp",
        input: input_block(&args.graph, &g, &dm),
        parameters: Params {
            k: Some(args.k),
            out: out_str.clone(),
            ..Params::default()
        },
        outcome: export_outcome(&model, out_str),
        elapsed_seconds: started.elapsed().as_secs_f64(),
    };
    if args.out.is_some() {
        emit(cli.format, &report)?;
    } else {
        eprint!("{}", render_text(&report));
    }
    Ok(ExitCode::from(0))
}

fn cmd_verify(cli: &Cli, args: &VerifyArgs) -> Result<ExitCode, CliError> {
    let started = Instant::now();
    let set = parse_set(&args.set)?;
    let (g, dm) = load_graph(&args.graph)?;
    let witness = verify_witness(&dm, &set, args.k)?;
    let report = Report {
        tool: "mars",
        version: env!("CARGO_PKG_VERSION"),
        operation: "verify",
        input: input_block(&args.graph, &g, &dm),
        parameters: Params {
            k: Some(args.k),
            set: Some(witness.set.clone()),
            ..Params::default()
        },
        outcome: verify_outcome(&witness),
        elapsed_seconds: started.elapsed().as_secs_f64(),
    };
    // Either way the question is settled: certified, or refuted with the
    // actual guarantee.
    finish(cli, &report, true)
}
