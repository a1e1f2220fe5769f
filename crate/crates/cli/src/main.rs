//! Command-line front end: solve the forward non-local subdiffusion problem,
//! recover a source or the non-local datum from one observation, verify
//! residuals, run seeded round-trip experiments and scan for critical
//! coupling weights. Configuration comes from a JSON file; results land in
//! an output directory as JSON and plot-ready CSV.

mod config;
mod jsonfmt;
mod run;

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::Context;
use clap::{Args, Parser, Subcommand};

use config::{parse_config, Problem, RunConfig};
use subdiff_core::{ml, ml_a, ml_b, ml_kernel, MlParams};

#[derive(Parser)]
#[command(
    name = "subdiff",
    about = "Spectral solver for the subdiffusion equation with a non-local time condition",
    version
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct CommonArgs {
    /// Path to the JSON configuration
    config: PathBuf,
    /// Output directory (overrides the configuration)
    #[arg(long)]
    out: Option<String>,
    /// Number of spectrum modes (overrides a dirichlet spectrum)
    #[arg(long)]
    modes: Option<usize>,
    /// Quadrature intervals and verification steps (overrides both)
    #[arg(long)]
    grid: Option<usize>,
    /// Seed for randomized data
    #[arg(long)]
    seed: Option<u64>,
}

#[derive(Subcommand)]
enum Command {
    /// Solve the forward problem
    Forward(CommonArgs),
    /// Recover the time-independent source from u(xi1) = V
    InvertSource(CommonArgs),
    /// Recover the non-local datum from u(xi2) = W
    InvertPhi(CommonArgs),
    /// Run the configured problem and print the residual table
    Verify(CommonArgs),
    /// Randomized forward-then-invert experiment
    Roundtrip(CommonArgs),
    /// Sweep the coupling weight over (0,1) and report critical sets
    CriticalScan(CommonArgs),
    /// Evaluate the special functions directly
    MlEval(MlEvalArgs),
}

#[derive(Args)]
struct MlEvalArgs {
    /// Fractional order in (0, 1]
    #[arg(long)]
    rho: f64,
    /// Second parameter (defaults to 1)
    #[arg(long)]
    mu: Option<f64>,
    /// Evaluate E_{rho,mu}(z) at this non-positive argument
    #[arg(long, allow_hyphen_values = true)]
    z: Option<f64>,
    /// Eigenvalue for the derived kernels
    #[arg(long)]
    lambda: Option<f64>,
    /// Time for the decay/accumulation factors
    #[arg(long)]
    t: Option<f64>,
    /// Point for the convolution kernel
    #[arg(long)]
    eta: Option<f64>,
}

fn exit_code_for(err: &anyhow::Error) -> u8 {
    use subdiff_core::Error::*;
    match err.downcast_ref::<subdiff_core::Error>() {
        Some(BadGeometry { .. }) => 4,
        Some(OrthogonalityViolation { .. }) => 5,
        Some(DegenerateDenominator { .. }) => 6,
        Some(NearCriticalDenominator { .. }) => 7,
        Some(_) => 3,
        None => 2,
    }
}

fn load_config(args: &CommonArgs) -> anyhow::Result<(RunConfig, PathBuf)> {
    let text = std::fs::read_to_string(&args.config)
        .with_context(|| format!("reading {}", args.config.display()))?;
    let base_dir = args
        .config
        .parent()
        .map(Path::to_path_buf)
        .unwrap_or_else(|| PathBuf::from("."));
    let mut cfg = parse_config(&text, &base_dir)?;
    if let Some(out) = &args.out {
        cfg.out_dir = out.clone();
    }
    if let Some(modes) = args.modes {
        cfg.spectrum = match cfg.spectrum.realization() {
            Some(subdiff_core::Realization::DirichletInterval { length }) => {
                subdiff_core::Spectrum::dirichlet(modes, *length)?
            }
            None => anyhow::bail!("--modes only applies to a dirichlet spectrum"),
        };
    }
    if let Some(grid) = args.grid {
        cfg.quad_intervals = grid;
        cfg.verify_nodes = grid;
    }
    if let Some(seed) = args.seed {
        cfg.seed = seed;
    }
    Ok((cfg, base_dir))
}

fn dispatch(cli: Cli) -> anyhow::Result<bool> {
    match cli.command {
        Command::Forward(args) => {
            let (mut cfg, base) = load_config(&args)?;
            cfg.problem = Some(Problem::Forward);
            Ok(run::run_problem(&cfg, &base, false)?.passed)
        }
        Command::InvertSource(args) => {
            let (mut cfg, base) = load_config(&args)?;
            cfg.problem = Some(Problem::InvertSource);
            if cfg.xi1.is_none() {
                anyhow::bail!("invert-source requires xi1 in the configuration");
            }
            Ok(run::run_problem(&cfg, &base, false)?.passed)
        }
        Command::InvertPhi(args) => {
            let (mut cfg, base) = load_config(&args)?;
            cfg.problem = Some(Problem::InvertPhi);
            if cfg.xi2.is_none() {
                anyhow::bail!("invert-phi requires xi2 in the configuration");
            }
            Ok(run::run_problem(&cfg, &base, false)?.passed)
        }
        Command::Verify(args) => {
            let (cfg, base) = load_config(&args)?;
            Ok(run::run_problem(&cfg, &base, true)?.passed)
        }
        Command::Roundtrip(args) => {
            let (cfg, base) = load_config(&args)?;
            Ok(run::run_roundtrip(&cfg, &base)?.passed)
        }
        Command::CriticalScan(args) => {
            let (cfg, base) = load_config(&args)?;
            Ok(run::run_critical_scan(&cfg, &base)?.passed)
        }
        Command::MlEval(args) => {
            let mu = args.mu.unwrap_or(1.0);
            match (args.z, args.lambda) {
                (Some(z), None) => {
                    let v = ml(MlParams::new(args.rho, mu)?, z)?;
                    println!("E_{{{}, {}}}({}) = {}", args.rho, mu, z, jsonfmt::num(v));
                }
                (None, Some(lambda)) => {
                    if let Some(t) = args.t {
                        let b = ml_b(args.rho, lambda, t)?;
                        let a = ml_a(args.rho, lambda, t)?;
                        println!("b(t) = {}", jsonfmt::num(b));
                        println!("a(t) = {}", jsonfmt::num(a));
                    }
                    if let Some(eta) = args.eta {
                        let k = ml_kernel(args.rho, lambda, eta)?;
                        println!("kernel(eta) = {}", jsonfmt::num(k));
                    }
                    if args.t.is_none() && args.eta.is_none() {
                        anyhow::bail!("ml-eval with --lambda needs --t and/or --eta");
                    }
                }
                _ => anyhow::bail!("ml-eval needs either --z or --lambda with --t/--eta"),
            }
            Ok(true)
        }
    }
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = Cli::parse();
    match dispatch(cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => {
            eprintln!("residuals exceeded the configured tolerances");
            ExitCode::from(1)
        }
        Err(err) => {
            eprintln!("error: {err:#}");
            ExitCode::from(exit_code_for(&err))
        }
    }
}
