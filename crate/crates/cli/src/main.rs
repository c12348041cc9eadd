//! `verify`: runs a verification suite and reports the verdict.
//!
//! Exit status: 0 when every check passed, 1 when a check failed (the report
//! is still written), 2 for an invalid configuration.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use skewalg::identities::{FactorialBudget, MAX_DEGREE_ENV};
use skewalg::report::Verdict;
use skewalg::suite::{emit_report, run_suite, OutputFormat, RingFamily, RunConfig, Suite, DEFAULT_SEED};

#[derive(Parser)]
#[command(name = "verify", version, about = "Exact verification of truncated skew polynomial constructions")]
struct Cli {
    #[command(subcommand)]
    suite: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Embedding of R[w,sigma]/(w^t) into t x t matrices: homomorphism, injectivity, trace
    Mu(Opts),
    /// The embedding R -> M_2(R) built from an involution
    Theta(Opts),
    /// Closure of (sigma, n, k)-supermatrices
    Supermatrix(Opts),
    /// Characteristic coefficients and the Cayley-Hamilton identity over the fixed ring
    CayleyHamilton(Opts),
    /// Standard polynomial identities on truncated rings and their matrix rings
    StandardIdentities(Opts),
    /// Matrix representations of Grassmann algebras
    GrassmannTower(Opts),
    /// The full default acceptance matrix
    All(Opts),
}

#[derive(Clone, Copy, ValueEnum)]
enum Family {
    Rotation,
    Grassmann,
    Gaussian,
    Rationals,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Text,
    Json,
}

#[derive(Args)]
struct Opts {
    /// Base ring family
    #[arg(long, value_enum, default_value = "rotation")]
    ring: Family,
    /// Truncation degree
    #[arg(long, default_value_t = 2)]
    t: usize,
    /// Matrix size
    #[arg(long)]
    n: Option<usize>,
    /// Number of Grassmann generators
    #[arg(long)]
    m: Option<usize>,
    /// Size of the first diagonal block of a supermatrix
    #[arg(long)]
    k: Option<usize>,
    /// Trials per check (defaults differ per check)
    #[arg(long)]
    trials: Option<usize>,
    /// Seed, or "random"
    #[arg(long, default_value_t = DEFAULT_SEED.to_string())]
    seed: String,
    /// Largest standard polynomial degree evaluated [env: SKEWALG_MAX_DEGREE]
    #[arg(long)]
    max_degree: Option<usize>,
    #[arg(long, value_enum, default_value = "text")]
    format: Format,
    /// Write the report here instead of stdout
    #[arg(long)]
    output: Option<PathBuf>,
    /// Worker threads for independent trials
    #[arg(long, default_value_t = 1)]
    jobs: usize,
}

fn build_config(suite: Suite, opts: &Opts) -> Result<RunConfig, String> {
    let seed = match opts.seed.as_str() {
        "random" => rand::random(),
        s => s.parse().map_err(|_| format!("--seed expects an integer or \"random\", got {s:?}"))?,
    };
    let budget = match opts.max_degree {
        Some(d) => FactorialBudget::new(d),
        None => FactorialBudget::from_env().map_err(|e| e.to_string())?,
    };
    Ok(RunConfig {
        suite,
        ring: match opts.ring {
            Family::Rotation => RingFamily::Rotation,
            Family::Grassmann => RingFamily::Grassmann,
            Family::Gaussian => RingFamily::Gaussian,
            Family::Rationals => RingFamily::Rationals,
        },
        t: opts.t,
        n: opts.n,
        m: opts.m,
        k: opts.k,
        trials: opts.trials,
        seed,
        budget,
        format: match opts.format {
            Format::Text => OutputFormat::Text,
            Format::Json => OutputFormat::Json,
        },
        output: opts.output.clone(),
    })
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = Cli::parse();
    let (suite, opts) = match &cli.suite {
        Command::Mu(o) => (Suite::Mu, o),
        Command::Theta(o) => (Suite::Theta, o),
        Command::Supermatrix(o) => (Suite::Supermatrix, o),
        Command::CayleyHamilton(o) => (Suite::CayleyHamilton, o),
        Command::StandardIdentities(o) => (Suite::StandardIdentities, o),
        Command::GrassmannTower(o) => (Suite::GrassmannTower, o),
        Command::All(o) => (Suite::All, o),
    };
    let config = match build_config(suite, opts) {
        Ok(c) => c,
        Err(msg) => {
            eprintln!("invalid config: {msg}");
            return ExitCode::from(2);
        }
    };
    if opts.jobs == 0 {
        eprintln!("invalid config: --jobs must be >= 1");
        return ExitCode::from(2);
    }
    if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(opts.jobs).build_global() {
        eprintln!("cannot start worker pool: {e}");
        return ExitCode::from(1);
    }
    log::info!("budget: max degree {} ({MAX_DEGREE_ENV})", config.budget.max_degree);
    let report = match run_suite(&config) {
        Ok(r) => r,
        Err(e) => {
            eprintln!("invalid config: {e}");
            return ExitCode::from(2);
        }
    };
    if let Err(e) = emit_report(&report, config.format, config.output.as_deref()) {
        eprintln!("cannot write report: {e}");
        return ExitCode::from(1);
    }
    match report.verdict {
        Verdict::Fail => ExitCode::from(1),
        _ => ExitCode::SUCCESS,
    }
}
