//! `jsr-relax`: joint spectral radius and Barabanov norms of 2x2 families.
//!
//! Exit codes: 0 success or converged, 1 usage and I/O errors, 2 iteration
//! cap reached without convergence, 3 family rejected as reducible.

use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use jsr_core::io::{parse_problem, render_unit_sphere, write_norm, write_trace};
use jsr_core::matrix::Eigendirections;
use jsr_core::oracle::{product_bounds_capped, trace_estimate_capped, DEFAULT_PRODUCT_CAP};
use jsr_core::{
    relax, Algorithm, AngularNorm, Averaging, LambdaSchedule, MatrixSet, RelaxConfig, Status,
};

const EXIT_ERROR: u8 = 1;
const EXIT_NOT_CONVERGED: u8 = 2;
const EXIT_REJECTED: u8 = 3;

const THREADS_ENV: &str = "JSR_RELAX_THREADS";

#[derive(Parser, Debug)]
#[command(
    name = "jsr-relax",
    version,
    about = "Joint spectral radius of 2x2 matrix families"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Run the LR or MR iteration on a problem file.
    Run(RunArgs),
    /// Brute-force product bounds and trace estimates over a depth range.
    Oracle(OracleArgs),
    /// Report whether the family is irreducible.
    Check(CheckArgs),
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum AlgorithmArg {
    Lr,
    Mr,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum AveragingArg {
    Arith,
    Geom,
    Harm,
}

#[derive(Args, Debug)]
struct RunArgs {
    /// Problem file (JSON).
    problem: PathBuf,
    #[arg(long, value_enum, default_value = "lr")]
    algorithm: AlgorithmArg,
    /// Constant relaxation parameter for LR.
    #[arg(long, default_value_t = 0.3)]
    lambda: f64,
    #[arg(long, default_value_t = 0.05)]
    lambda_lo: f64,
    #[arg(long, default_value_t = 0.95)]
    lambda_hi: f64,
    /// Averaging function for MR.
    #[arg(long, value_enum, default_value = "arith")]
    averaging: AveragingArg,
    /// Grid size of the norm profile.
    #[arg(long, default_value_t = 3000)]
    nodes: usize,
    /// Target half-width of the final bracket.
    #[arg(long, default_value_t = 1e-3)]
    tol: f64,
    #[arg(long, default_value_t = 10_000)]
    max_iters: usize,
    /// Normalization vector `x,y`; must point along a grid node.
    #[arg(long, value_parser = parse_vector, allow_hyphen_values = true, default_value = "1,0")]
    e: [f64; 2],
    /// Run even if the family is reducible.
    #[arg(long)]
    force: bool,
    /// LR with lambda = 0 (no convergence guarantee).
    #[arg(long)]
    unsafe_direct: bool,
    /// Write the unit sphere of the final norm as SVG.
    #[arg(long)]
    svg: Option<PathBuf>,
    #[arg(long, default_value_t = 512)]
    svg_size: u32,
    /// Write the iteration trace as CSV.
    #[arg(long)]
    trace: Option<PathBuf>,
    /// Write the final norm profile as CSV.
    #[arg(long)]
    norm_out: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct OracleArgs {
    problem: PathBuf,
    #[arg(long, default_value_t = 1)]
    min_depth: usize,
    #[arg(long, default_value_t = 8)]
    max_depth: usize,
    /// Grid size of the Euclidean norm behind the upper bounds.
    #[arg(long, default_value_t = 3000)]
    nodes: usize,
    /// Largest number of products enumerated at one depth.
    #[arg(long, default_value_t = DEFAULT_PRODUCT_CAP)]
    cap: u128,
}

#[derive(Args, Debug)]
struct CheckArgs {
    problem: PathBuf,
}

fn parse_vector(s: &str) -> Result<[f64; 2], String> {
    let (x, y) = s
        .split_once(',')
        .ok_or_else(|| format!("expected `x,y`, got {s:?}"))?;
    let num = |t: &str| {
        t.trim()
            .parse::<f64>()
            .map_err(|_| format!("cannot parse {t:?} as a number"))
    };
    Ok([num(x)?, num(y)?])
}

type CliResult<T> = Result<T, String>;

fn load(path: &Path) -> CliResult<(Option<String>, MatrixSet)> {
    let bytes = std::fs::read(path).map_err(|e| format!("{}: {e}", path.display()))?;
    let problem = parse_problem(&bytes).map_err(|e| format!("{}: {e}", path.display()))?;
    let set = problem
        .matrix_set()
        .map_err(|e| format!("{}: {e}", path.display()))?;
    Ok((problem.label, set))
}

fn create(path: &Path) -> CliResult<BufWriter<File>> {
    File::create(path)
        .map(BufWriter::new)
        .map_err(|e| format!("{}: {e}", path.display()))
}

fn configure_threads() -> CliResult<()> {
    let Ok(raw) = std::env::var(THREADS_ENV) else {
        return Ok(());
    };
    let threads: usize = raw
        .trim()
        .parse()
        .map_err(|_| format!("{THREADS_ENV}={raw:?} is not a thread count"))?;
    if threads > 0 {
        rayon::ThreadPoolBuilder::new()
            .num_threads(threads)
            .build_global()
            .map_err(|e| e.to_string())?;
    }
    Ok(())
}

fn run_cmd(args: &RunArgs) -> CliResult<u8> {
    let (label, set) = load(&args.problem)?;
    let cfg = RelaxConfig {
        algorithm: match args.algorithm {
            AlgorithmArg::Lr => Algorithm::Lr,
            AlgorithmArg::Mr => Algorithm::Mr,
        },
        lambda_lo: args.lambda_lo,
        lambda_hi: args.lambda_hi,
        lambda_schedule: LambdaSchedule::Constant(args.lambda),
        averaging: match args.averaging {
            AveragingArg::Arith => Averaging::Arithmetic,
            AveragingArg::Geom => Averaging::Geometric,
            AveragingArg::Harm => Averaging::Harmonic,
        },
        node_count: args.nodes,
        e: args.e,
        tol: args.tol,
        max_iters: args.max_iters,
        force: args.force,
        unsafe_direct: args.unsafe_direct,
        ..RelaxConfig::default()
    };
    let result = relax::run(&set, &cfg).map_err(|e| e.to_string())?;

    if result.status == Status::NotIrreducibleRejected {
        eprintln!("family has a common invariant line; rerun with --force to iterate anyway");
        return Ok(EXIT_REJECTED);
    }

    if let Some(path) = &args.trace {
        write_trace(&result, &cfg, create(path)?)
            .map_err(|e| format!("{}: {e}", path.display()))?;
    }
    if let Some(path) = &args.norm_out {
        write_norm(&result.norm, create(path)?).map_err(|e| format!("{}: {e}", path.display()))?;
    }
    if let Some(path) = &args.svg {
        let svg = render_unit_sphere(&result.norm, args.svg_size).map_err(|e| e.to_string())?;
        let mut out = create(path)?;
        out.write_all(svg.as_bytes())
            .and_then(|_| out.flush())
            .map_err(|e| format!("{}: {e}", path.display()))?;
    }

    if let Some(label) = label {
        println!("problem: {label}");
    }
    let status = match result.status {
        Status::Converged => "converged",
        Status::MaxItersReached => "max_iters_reached",
        Status::NotIrreducibleRejected => unreachable!(),
    };
    println!("status: {status}");
    println!("iterations: {}", result.iterations());
    println!("bracket: [{:.10}, {:.10}]", result.rho_lo, result.rho_hi);
    println!("midpoint: {:.10}", result.rho_mid);
    println!("half_width: {:.3e}", result.half_width());

    Ok(match result.status {
        Status::Converged => 0,
        _ => EXIT_NOT_CONVERGED,
    })
}

fn oracle_cmd(args: &OracleArgs) -> CliResult<u8> {
    let (_, set) = load(&args.problem)?;
    if args.min_depth == 0 || args.min_depth > args.max_depth {
        return Err(format!(
            "invalid depth range {}..={}",
            args.min_depth, args.max_depth
        ));
    }
    let nm = AngularNorm::euclidean(args.nodes).map_err(|e| e.to_string())?;
    println!("n,lower,upper,trace");
    for depth in args.min_depth..=args.max_depth {
        let b = product_bounds_capped(&set, depth, &nm, args.cap).map_err(|e| e.to_string())?;
        let t = trace_estimate_capped(&set, depth, args.cap).map_err(|e| e.to_string())?;
        println!("{depth},{:.12},{:.12},{:.12}", b.lower, b.upper, t);
    }
    Ok(0)
}

fn check_cmd(args: &CheckArgs) -> CliResult<u8> {
    let (label, set) = load(&args.problem)?;
    if let Some(label) = label {
        println!("problem: {label}");
    }
    println!("matrices: {}", set.len());
    println!("dimension: {}", set.dim());
    for (i, a) in set.iter().enumerate() {
        let rho = a.spectral_radius().map_err(|e| e.to_string())?;
        let dirs = match a.eigendirections().map_err(|e| e.to_string())? {
            Eigendirections::All => "all (scalar matrix)".to_string(),
            Eigendirections::None => "none (complex pair)".to_string(),
            Eigendirections::Lines(l) => l
                .iter()
                .map(|a| format!("{:.6} rad", a))
                .collect::<Vec<_>>()
                .join(", "),
        };
        println!(
            "A{}: spectral radius {:.12}; real eigendirections: {}",
            i + 1,
            rho,
            dirs
        );
    }
    let irreducible = set.is_irreducible().map_err(|e| e.to_string())?;
    println!("irreducible: {}", if irreducible { "yes" } else { "no" });
    Ok(if irreducible { 0 } else { EXIT_REJECTED })
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_ERROR } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    let outcome = configure_threads().and_then(|_| match &cli.command {
        Command::Run(args) => run_cmd(args),
        Command::Oracle(args) => oracle_cmd(args),
        Command::Check(args) => check_cmd(args),
    });
    match outcome {
        Ok(code) => ExitCode::from(code),
        Err(msg) => {
            eprintln!("error: {msg}");
            ExitCode::from(EXIT_ERROR)
        }
    }
}
