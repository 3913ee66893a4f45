use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use cfmm::checks;
use cfmm::experiments::bench::{run_fmm_bench, BenchConfig};
use cfmm::experiments::inspect::run_plan_inspect;
use cfmm::experiments::m2m::{run_m2m_accuracy, run_m2m_kappa};
use cfmm::experiments::opcount::run_opcount;
use cfmm::output::{write_csv, CsvRow};
use cfmm::pde_file::read_pde_file;
use cfmm::{init_threads, ExperimentConfig, HarnessError, Result};
use cfmm_core::fmm::M2lMode;
use cfmm_core::Kernel;
use clap::{Parser, Subcommand, ValueEnum};

/// Compressed Cartesian Taylor FMM operators: plans, experiments, benchmarks.
///
/// The worker thread count is read from CFMM_THREADS.
#[derive(Parser)]
#[command(name = "cfmm", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Print the compression plan of a PDE file.
    Plan {
        pde_file: PathBuf,
        #[arg(long, short = 'p')]
        order: usize,
    },
    /// Compressed versus uncompressed M2M error over an R sweep.
    M2mAccuracy(ExperimentArgs),
    /// M2M error and truncation error over a wavenumber sweep.
    M2mKappa(ExperimentArgs),
    /// Operation counts per operator and representation.
    Opcount(ExperimentArgs),
    /// End-to-end FMM accuracy and timing.
    FmmBench(BenchArgs),
}

#[derive(clap::Args)]
struct ExperimentArgs {
    #[arg(long)]
    config: PathBuf,
    /// Write CSV here instead of the configured output (`-` for stdout).
    #[arg(long, short = 'o')]
    output: Option<PathBuf>,
    /// Exit with status 3 when the numerical assertions fail.
    #[arg(long)]
    check: bool,
}

#[derive(Clone, Copy, PartialEq, ValueEnum)]
enum ModeArg {
    Direct,
    Fft,
    Both,
}

#[derive(clap::Args)]
struct BenchArgs {
    #[arg(long, default_value = "laplace2d")]
    kernel: String,
    #[arg(long)]
    kappa: Option<f64>,
    #[arg(long, short = 'p', default_value_t = 10)]
    order: usize,
    /// Tree depth; about 40 points per leaf when absent.
    #[arg(long)]
    depth: Option<usize>,
    /// Problem sizes, comma separated.
    #[arg(long, short = 'n', value_delimiter = ',', default_value = "10000")]
    n: Vec<usize>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, value_enum, default_value_t = ModeArg::Both)]
    mode: ModeArg,
    /// Targets compared against direct summation.
    #[arg(long, default_value_t = 1000)]
    samples: usize,
    #[arg(long, default_value_t = 1)]
    repeats: usize,
    /// Also run the instrumented evaluation and report its flops.
    #[arg(long)]
    count_flops: bool,
    #[arg(long, short = 'o')]
    output: Option<PathBuf>,
    #[arg(long)]
    check: bool,
    /// ℓ² relative error bound for `--check`.
    #[arg(long, default_value_t = 1e-6)]
    tol: f64,
}

fn emit<R: CsvRow>(rows: &[R], path: Option<&Path>) -> Result<()> {
    match path {
        Some(p) if p != Path::new("-") => {
            let mut f = BufWriter::new(File::create(p)?);
            write_csv(&mut f, rows)?;
            f.flush()?;
        }
        _ => write_csv(std::io::stdout().lock(), rows)?,
    }
    Ok(())
}

fn load(args: &ExperimentArgs) -> Result<(ExperimentConfig, Option<PathBuf>)> {
    let cfg = ExperimentConfig::load(&args.config)?;
    let out = args.output.clone().or_else(|| cfg.output.clone());
    Ok((cfg, out))
}

fn run(cli: Cli) -> Result<()> {
    init_threads()?;
    match cli.command {
        Command::Plan { pde_file, order } => {
            let pde = read_pde_file(&pde_file)?;
            print!("{}", run_plan_inspect(&pde, order)?);
        }
        Command::M2mAccuracy(args) => {
            let (cfg, out) = load(&args)?;
            let rows = run_m2m_accuracy(&cfg)?;
            emit(&rows, out.as_deref())?;
            if args.check {
                checks::check_m2m(&rows, cfg.kernel()?.kappa().is_some())?;
            }
        }
        Command::M2mKappa(args) => {
            let (cfg, out) = load(&args)?;
            let rows = run_m2m_kappa(&cfg)?;
            emit(&rows, out.as_deref())?;
            if args.check {
                checks::check_kappa(&rows)?;
            }
        }
        Command::Opcount(args) => {
            let (cfg, out) = load(&args)?;
            let rows = run_opcount(&cfg)?;
            emit(&rows, out.as_deref())?;
            if args.check {
                checks::check_opcount(&rows)?;
            }
        }
        Command::FmmBench(args) => {
            let kernel = Kernel::from_id(&args.kernel, args.kappa)
                .map_err(|e| HarnessError::Config(format!("kernel `{}`: {e}", args.kernel)))?;
            if args.n.is_empty() || args.n.contains(&0) {
                return Err(HarnessError::Config("`-n` needs positive sizes".into()));
            }
            let modes = match args.mode {
                ModeArg::Direct => vec![M2lMode::Direct],
                ModeArg::Fft => vec![M2lMode::Fft],
                ModeArg::Both => vec![M2lMode::Fft, M2lMode::Direct],
            };
            let cfg = BenchConfig {
                kernel,
                order: args.order,
                depth: args.depth,
                sizes: args.n.clone(),
                seed: args.seed,
                modes,
                samples: args.samples,
                repeats: args.repeats,
                count_flops: args.count_flops,
            };
            let rows = run_fmm_bench(&cfg).map_err(|e| match e {
                HarnessError::Core(c) => HarnessError::Config(c.to_string()),
                other => other,
            })?;
            emit(&rows, args.output.as_deref())?;
            if args.check {
                checks::check_bench(&rows, args.tol)?;
            }
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("cfmm: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
