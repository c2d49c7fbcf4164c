//! `entroply`: solve positions, run divisor sweeps, compare depth policies,
//! inspect entropy rates and check move generation.

mod config;

use std::fs::File;
use std::io::{self, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{ArgGroup, Args, Parser, Subcommand, ValueEnum};
use rand::seq::index::sample;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use entroply::chess::{PieceKind, Position};
use entroply::entropy::{asymptotic_rate, EntropyModel, MobilityGraph, RateMode};
use entroply::harness::{
    bundled_suite, compare_policies, emit_csv, read_epd, run_sweep, EpdRecord, PolicyFamily,
    PolicySummary, SweepSpec,
};
use entroply::policy::{table_from_model, DepthPolicy, DEFAULT_CATEGORY_COUNT};
use entroply::search::{search_root, SearchParams};

use config::{resolve, Defaults, FileConfig, Overrides, Resolved};

const SUITE_DIR_VAR: &str = "ENTROPLY_SUITE_DIR";
const DEFAULT_SUITE: &str = "mate35";

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("{0}")]
    Input(String),
    #[error("{0}")]
    Unsolved(String),
}

impl CliError {
    fn exit_code(&self) -> u8 {
        match self {
            CliError::Unsolved(_) => 1,
            CliError::Usage(_) | CliError::Input(_) => 2,
        }
    }
}

#[derive(Parser, Debug)]
#[command(
    name = "entroply",
    version,
    about = "Entropy-driven fractional-ply search laboratory"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Search one position and print the result.
    Solve(SolveArgs),
    /// Run a divisor × depth sweep over a suite and write CSV.
    Sweep(SweepArgs),
    /// Compare depth policies on a suite.
    Compare(CompareArgs),
    /// Print piece entropy rates or the entropy of a position.
    Entropy(EntropyArgs),
    /// Count leaf nodes of the legal move tree.
    Perft(PerftArgs),
}

#[derive(Args, Debug, Clone, Default)]
struct SearchFlags {
    /// Depth policy: uniform, ers, winands, rp or appendix.
    #[arg(long)]
    policy: Option<String>,
    /// Reduction divisor (appendix policy only).
    #[arg(long)]
    divisor: Option<f64>,
    /// Virtual depth of one full ply.
    #[arg(long)]
    step: Option<f64>,
    /// Entropy reduction assigned to checks, in bits.
    #[arg(long)]
    best_gain: Option<f64>,
    /// Depth budget in full plies.
    #[arg(long)]
    max_uniform_depth: Option<u32>,
    /// Hard cap on real plies.
    #[arg(long)]
    max_extension: Option<u32>,
    /// Node budget.
    #[arg(long)]
    budget: Option<u64>,
    /// Realization-probability cut-off (rp policy).
    #[arg(long, default_value_t = 1e-6)]
    rp_threshold: f64,
    /// TOML file with defaults for the options above.
    #[arg(long)]
    config: Option<PathBuf>,
}

impl SearchFlags {
    fn overrides(&self, jobs: Option<usize>) -> Overrides {
        Overrides {
            policy: self.policy.clone(),
            divisor: self.divisor,
            step: self.step,
            best_gain: self.best_gain,
            max_uniform_depth: self.max_uniform_depth,
            max_extension: self.max_extension,
            budget: self.budget,
            jobs,
        }
    }

    fn resolve(&self, jobs: Option<usize>, defaults: &Defaults) -> Result<Resolved, CliError> {
        let file = match &self.config {
            Some(p) => FileConfig::load(p)?,
            None => FileConfig::default(),
        };
        Ok(resolve(&self.overrides(jobs), &file, defaults))
    }
}

#[derive(Args, Debug)]
struct SolveArgs {
    /// Position in FEN.
    fen: String,
    #[command(flatten)]
    search: SearchFlags,
    /// Require a mate in at most this many moves (exit 1 otherwise).
    #[arg(long)]
    dm: Option<u32>,
}

#[derive(Args, Debug, Clone)]
struct SuiteFlags {
    /// EPD file, or a bundled suite name (mate3, mate5, mate35). Relative
    /// paths are also looked up in $ENTROPLY_SUITE_DIR.
    #[arg(long)]
    suite: Option<String>,
    /// Use a random sample of this many records.
    #[arg(long)]
    sample: Option<usize>,
    /// Seed for --sample.
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Concurrent cases.
    #[arg(long)]
    jobs: Option<usize>,
}

#[derive(Args, Debug)]
struct SweepArgs {
    #[command(flatten)]
    suite: SuiteFlags,
    #[command(flatten)]
    search: SearchFlags,
    /// Divisors to sweep.
    #[arg(long, value_delimiter = ',', default_value = "1,1.5,2,3,4,5")]
    divisors: Vec<f64>,
    /// Uniform depths to sweep (defaults to --max-uniform-depth).
    #[arg(long, value_delimiter = ',')]
    depths: Vec<u32>,
    /// Output CSV path, or - for standard output.
    #[arg(long, default_value = "-")]
    out: String,
}

#[derive(Args, Debug)]
struct CompareArgs {
    #[command(flatten)]
    suite: SuiteFlags,
    #[command(flatten)]
    search: SearchFlags,
    /// Policies to compare, comma separated.
    #[arg(long, value_delimiter = ',', required = true)]
    policies: Vec<String>,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
enum ModeArg {
    Exact,
    Asymptotic,
}

#[derive(Args, Debug)]
#[command(group(ArgGroup::new("subject").required(true).args(["piece", "fen"])))]
struct EntropyArgs {
    /// Piece kind (king, queen, rook, bishop, knight, pawn).
    #[arg(long)]
    piece: Option<String>,
    /// Position whose entropy to sum.
    #[arg(long)]
    fen: Option<String>,
    #[arg(long, default_value_t = 8)]
    board_size: usize,
    #[arg(long, value_enum, default_value_t = ModeArg::Asymptotic)]
    mode: ModeArg,
    /// Dump node, degree, stationary mass and row entropy (piece only; - for stdout).
    #[arg(long)]
    csv: Option<String>,
}

#[derive(Args, Debug)]
struct PerftArgs {
    /// Position in FEN, or `startpos`.
    fen: String,
    depth: u32,
}

fn parse_fen(fen: &str) -> Result<Position, CliError> {
    if fen == "startpos" {
        return Ok(Position::startpos());
    }
    Position::from_fen(fen).map_err(|e| CliError::Input(format!("bad FEN `{fen}`: {e}")))
}

fn entropy_model(best_gain: Option<f64>) -> Result<EntropyModel, CliError> {
    let model = EntropyModel::asymptotic();
    match best_gain {
        Some(g) => model
            .with_best_gain(g)
            .map_err(|e| CliError::Usage(e.to_string())),
        None => Ok(model),
    }
}

fn build_policy(name: &str, r: &Resolved, rp_threshold: f64) -> Result<DepthPolicy, CliError> {
    let usage = |e: &dyn std::fmt::Display| CliError::Usage(e.to_string());
    let table = || -> Result<_, CliError> {
        Ok(table_from_model(
            &entropy_model(r.best_gain)?,
            DEFAULT_CATEGORY_COUNT,
        ))
    };
    match name {
        "uniform" => Ok(DepthPolicy::Uniform),
        "ers" => Ok(DepthPolicy::entropy_reduction(entropy_model(r.best_gain)?)),
        "winands" => DepthPolicy::winands(table()?, DEFAULT_CATEGORY_COUNT).map_err(|e| usage(&e)),
        "rp" => DepthPolicy::realization_probability(table()?, rp_threshold).map_err(|e| usage(&e)),
        "appendix" => DepthPolicy::appendix(r.divisor.unwrap_or(1.0)).map_err(|e| usage(&e)),
        other => Err(CliError::Usage(format!(
            "unknown policy `{other}` (expected uniform, ers, winands, rp or appendix)"
        ))),
    }
}

fn check_divisor(policies: &[&str], r: &Resolved) -> Result<(), CliError> {
    if r.divisor.is_some() && !policies.contains(&"appendix") {
        return Err(CliError::Usage(
            "--divisor only applies to the appendix policy".into(),
        ));
    }
    Ok(())
}

fn search_params(policy: DepthPolicy, r: &Resolved) -> Result<SearchParams, CliError> {
    if r.step.is_nan() || r.step <= 0.0 {
        return Err(CliError::Usage(format!(
            "step must be positive, got {}",
            r.step
        )));
    }
    let params = SearchParams::new(policy, r.max_uniform_depth)
        .with_step(r.step)
        .with_max_extension(r.max_extension)
        .with_budget(r.budget);
    params
        .validate()
        .map_err(|e| CliError::Usage(e.to_string()))?;
    Ok(params)
}

fn cmd_solve(args: &SolveArgs) -> Result<(), CliError> {
    let defaults = Defaults {
        policy: "ers",
        max_uniform_depth: 4,
        max_extension: 16,
        budget: None,
    };
    let r = args.search.resolve(None, &defaults)?;
    check_divisor(&[r.policy.as_str()], &r)?;
    let position = parse_fen(&args.fen)?;
    let params = search_params(build_policy(&r.policy, &r, args.search.rp_threshold)?, &r)?;
    let result = search_root(&position, &params).map_err(|e| CliError::Input(e.to_string()))?;

    println!("policy: {}", params.policy);
    if result.aborted {
        println!("nodes: {}", result.nodes);
        return Err(CliError::Unsolved(format!(
            "aborted after {} nodes (budget)",
            result.nodes
        )));
    }
    println!("value: {}", result.value);
    if let Some(m) = result.solved_mate_in {
        println!("mate: in {m}");
    }
    if let Some(m) = result.best_move {
        println!("best: {}", position.san(&m));
    }
    println!("pv: {}", position.san_line(&result.pv));
    println!("nodes: {}", result.nodes);
    println!("max_depth: {}", result.max_depth_attained);
    println!("cutoffs: {}", result.cutoffs);
    match args.dm {
        Some(dm) if !result.solved_mate_in.is_some_and(|k| k <= dm) => {
            Err(CliError::Unsolved(format!("no mate in {dm} found")))
        }
        _ => Ok(()),
    }
}

fn read_suite_file(path: &Path) -> Result<Vec<EpdRecord>, CliError> {
    let file = File::open(path)
        .map_err(|e| CliError::Input(format!("cannot read suite {}: {e}", path.display())))?;
    read_epd(file).map_err(|e| CliError::Input(format!("{}: {e}", path.display())))
}

fn load_suite(flags: &SuiteFlags) -> Result<Vec<EpdRecord>, CliError> {
    let dir = std::env::var_os(SUITE_DIR_VAR).map(PathBuf::from);
    let records = match (&flags.suite, &dir) {
        (Some(s), _) if Path::new(s).is_file() => read_suite_file(Path::new(s))?,
        (Some(s), Some(d)) if d.join(s).is_file() => read_suite_file(&d.join(s))?,
        (Some(s), _) => {
            bundled_suite(s).map_err(|e| CliError::Input(format!("suite `{s}`: {e}")))?
        }
        (None, Some(d)) => {
            let mut files: Vec<PathBuf> = std::fs::read_dir(d)
                .map_err(|e| CliError::Input(format!("{SUITE_DIR_VAR}={}: {e}", d.display())))?
                .filter_map(|e| e.ok().map(|e| e.path()))
                .filter(|p| p.extension().is_some_and(|x| x == "epd"))
                .collect();
            files.sort();
            if files.is_empty() {
                return Err(CliError::Input(format!("no .epd files in {}", d.display())));
            }
            let mut all = Vec::new();
            for f in files {
                all.extend(read_suite_file(&f)?);
            }
            all
        }
        (None, None) => bundled_suite(DEFAULT_SUITE).map_err(|e| CliError::Input(e.to_string()))?,
    };
    if records.is_empty() {
        return Err(CliError::Input("suite is empty".into()));
    }
    Ok(match flags.sample {
        Some(n) if n < records.len() => {
            let mut rng = ChaCha8Rng::seed_from_u64(flags.seed);
            let mut picked = sample(&mut rng, records.len(), n).into_vec();
            picked.sort_unstable();
            picked.into_iter().map(|i| records[i].clone()).collect()
        }
        _ => records,
    })
}

fn open_out(out: &str) -> Result<Box<dyn Write>, CliError> {
    if out == "-" {
        return Ok(Box::new(io::stdout().lock()));
    }
    let f = File::create(out).map_err(|e| CliError::Input(format!("cannot write {out}: {e}")))?;
    Ok(Box::new(io::BufWriter::new(f)))
}

fn cmd_sweep(args: &SweepArgs) -> Result<(), CliError> {
    let defaults = Defaults {
        policy: "appendix",
        max_uniform_depth: 4,
        max_extension: 12,
        budget: Some(1_000_000),
    };
    let r = args.search.resolve(args.suite.jobs, &defaults)?;
    let suite = load_suite(&args.suite)?;
    let family = match r.policy.as_str() {
        "appendix" => PolicyFamily::Appendix,
        other => {
            check_divisor(&[other], &r)?;
            PolicyFamily::Fixed(build_policy(other, &r, args.search.rp_threshold)?)
        }
    };
    let depths = if args.depths.is_empty() {
        vec![r.max_uniform_depth]
    } else {
        args.depths.clone()
    };
    let spec = SweepSpec {
        suite,
        divisors: args.divisors.clone(),
        uniform_depths: depths,
        family,
        step_size: r.step,
        max_extension: r.max_extension,
        node_budget: r.budget.unwrap_or(u64::MAX),
        jobs: r.jobs,
    };
    let rows = run_sweep(&spec).map_err(|e| CliError::Input(e.to_string()))?;
    let mut out = open_out(&args.out)?;
    emit_csv(&rows, &mut out).map_err(|e| CliError::Input(e.to_string()))?;
    out.flush().map_err(|e| CliError::Input(e.to_string()))?;
    let solved = rows.iter().filter(|r| r.solved).count();
    eprintln!("{} rows, {solved} solved", rows.len());
    Ok(())
}

fn cmd_compare(args: &CompareArgs) -> Result<(), CliError> {
    let defaults = Defaults {
        policy: "ers",
        max_uniform_depth: 9,
        max_extension: 12,
        budget: Some(2_000_000),
    };
    let r = args.search.resolve(args.suite.jobs, &defaults)?;
    let names: Vec<&str> = args.policies.iter().map(|s| s.trim()).collect();
    if names.len() < 2 {
        return Err(CliError::Usage(format!(
            "need at least two policies, got {}",
            names.len()
        )));
    }
    check_divisor(&names, &r)?;
    let policies = names
        .iter()
        .map(|n| build_policy(n, &r, args.search.rp_threshold))
        .collect::<Result<Vec<_>, _>>()?;
    let suite = load_suite(&args.suite)?;
    let base = search_params(DepthPolicy::Uniform, &r)?;
    let pool = rayon_pool(r.jobs)?;
    let summaries = pool
        .install(|| compare_policies(&suite, &policies, &base))
        .map_err(|e| CliError::Input(e.to_string()))?;
    print!("{}", PolicySummary::table(&summaries));
    Ok(())
}

fn rayon_pool(jobs: usize) -> Result<rayon::ThreadPool, CliError> {
    if jobs == 0 {
        return Err(CliError::Usage("jobs must be at least 1".into()));
    }
    rayon::ThreadPoolBuilder::new()
        .num_threads(jobs)
        .build()
        .map_err(|e| CliError::Input(e.to_string()))
}

fn parse_piece(name: &str) -> Result<PieceKind, CliError> {
    name.parse::<PieceKind>()
        .map_err(|_| CliError::Usage(format!("unknown piece `{name}`")))
}

fn cmd_entropy(args: &EntropyArgs) -> Result<(), CliError> {
    let mode = match args.mode {
        ModeArg::Asymptotic => RateMode::Asymptotic,
        ModeArg::Exact => RateMode::ExactFinite(args.board_size),
    };
    if let Some(piece) = &args.piece {
        let kind = parse_piece(piece)?;
        let explain = |e: entroply::entropy::EntropyError| CliError::Input(e.to_string());
        // Keep standard output clean when the CSV goes there.
        let mut info: Box<dyn Write> = if args.csv.as_deref() == Some("-") {
            Box::new(io::stderr())
        } else {
            Box::new(io::stdout())
        };
        let report = match mode {
            RateMode::Asymptotic => {
                let rate = asymptotic_rate(kind).map_err(explain)?;
                format!("{kind} asymptotic rate: {rate:.4} bits\n")
            }
            RateMode::ExactFinite(n) => {
                let g = MobilityGraph::for_piece(kind, n).map_err(explain)?;
                let rate = g.mixture_entropy_rate().map_err(explain)?;
                format!(
                    "{kind} exact rate on {n}x{n}: {rate:.4} bits\ngraph: {} nodes, {} edges, {} components, max degree {}\n",
                    g.n_nodes(),
                    g.edges().len(),
                    g.components().len(),
                    g.max_degree()
                )
            }
        };
        info.write_all(report.as_bytes())
            .map_err(|e| CliError::Input(e.to_string()))?;
        if let Some(dest) = &args.csv {
            let g = MobilityGraph::for_piece(kind, args.board_size).map_err(explain)?;
            let mut out = open_out(dest)?;
            g.write_csv(&mut out).map_err(explain)?;
            out.flush().map_err(|e| CliError::Input(e.to_string()))?;
        }
        return Ok(());
    }
    if args.csv.is_some() {
        return Err(CliError::Usage("--csv needs --piece".into()));
    }
    let fen = args.fen.as_deref().expect("clap enforces --piece or --fen");
    let position = parse_fen(fen)?;
    let model = EntropyModel::with_mode(mode).map_err(|e| CliError::Input(e.to_string()))?;
    for kind in PieceKind::ALL {
        let count = position.pieces().filter(|(_, p)| p.kind == kind).count();
        if count > 0 {
            println!(
                "{:<7} x{count:<2} {:.4} bits",
                kind.name(),
                count as f64 * model.rate(kind)
            );
        }
    }
    println!("total: {:.4} bits", model.position_entropy(&position));
    Ok(())
}

fn cmd_perft(args: &PerftArgs) -> Result<(), CliError> {
    if args.depth > 6 {
        return Err(CliError::Usage(format!(
            "depth {} is above the limit of 6",
            args.depth
        )));
    }
    let position = parse_fen(&args.fen)?;
    println!("{}", position.perft(args.depth));
    Ok(())
}

fn main() -> ExitCode {
    env_logger::init();
    let cli = Cli::parse();
    let outcome = match &cli.command {
        Command::Solve(a) => cmd_solve(a),
        Command::Sweep(a) => cmd_sweep(a),
        Command::Compare(a) => cmd_compare(a),
        Command::Entropy(a) => cmd_entropy(a),
        Command::Perft(a) => cmd_perft(a),
    };
    match outcome {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
