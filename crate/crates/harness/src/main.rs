use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use katz_harness::commands::{self, HarnessError};
use katz_harness::config::ConfigOverlay;
use katz_harness::records;

#[derive(Parser)]
#[command(
    name = "katz-bench",
    version,
    about = "Katz centrality under node/edge removal: computation, updates, and experiments"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Compute Katz centrality and total communicability for one graph
    Compute(CommonArgs),
    /// Compare the walk-loss update against recompute baselines
    Compare(CommonArgs),
    /// Sequential removal experiment: approximate vs exact per step
    Sequential(CommonArgs),
    /// Total-communicability bounds along a removal sequence
    TcBounds(CommonArgs),
    /// Generate a graph and write it as an edge list
    Gen(CommonArgs),
}

#[derive(Args, Clone)]
struct CommonArgs {
    /// Graph file: edge list, or Matrix Market when the extension is .mtx
    #[arg(long, conflicts_with = "gen")]
    graph: Option<PathBuf>,
    /// Generator spec: `erdrey:<n>,<m>` or `pref:<n>,<d>`
    #[arg(long)]
    gen: Option<String>,
    /// Damping is alpha = FACTOR / rho(A) [default: 0.85]
    #[arg(long, value_name = "FACTOR")]
    alpha_factor: Option<f64>,
    /// Tolerance for truncated-series methods [default: 1e-4]
    #[arg(long)]
    tol: Option<f64>,
    /// Maximum walk length for node updates [default: 30]
    #[arg(long)]
    lmax_node: Option<usize>,
    /// Maximum walk length for edge updates [default: 30]
    #[arg(long)]
    lmax_edge: Option<usize>,
    /// Trials per experiment [default: 30]
    #[arg(long)]
    trials: Option<usize>,
    /// Base RNG seed; trial i uses seed XOR i [default: 1]
    #[arg(long)]
    seed: Option<u64>,
    /// Target selection: random, top-katz, or min-product
    #[arg(long)]
    policy: Option<String>,
    /// Removal kind for sequential and tc-bounds: node or edge
    #[arg(long)]
    kind: Option<String>,
    /// Fraction of nodes/edges removed sequentially [default: 0.01]
    #[arg(long)]
    fraction: Option<f64>,
    /// Output path (CSV for experiments, scores or edge list otherwise)
    #[arg(long)]
    out: Option<PathBuf>,
    /// Treat edge-list node ids as 0-based
    #[arg(long)]
    zero_based: bool,
    /// Evaluate bounds from the initial state instead of the current one
    #[arg(long)]
    stale_bounds: bool,
    /// Recompute when an update hits the length cap without converging
    #[arg(long)]
    recompute_on_maxlen: bool,
    /// Flat key=value config file; CLI flags override its entries
    #[arg(long)]
    config: Option<PathBuf>,
}

impl CommonArgs {
    fn overlay(&self) -> ConfigOverlay {
        ConfigOverlay {
            graph: self.graph.clone(),
            gen: self.gen.clone(),
            alpha_factor: self.alpha_factor,
            tol: self.tol,
            tol_pcg: None,
            lmax_node: self.lmax_node,
            lmax_edge: self.lmax_edge,
            fraction: self.fraction,
            policy: self.policy.clone(),
            trials: self.trials,
            seed: self.seed,
            kind: self.kind.clone(),
            zero_based: if self.zero_based { Some(true) } else { None },
            stale_bounds: if self.stale_bounds { Some(true) } else { None },
            recompute_on_maxlen: if self.recompute_on_maxlen {
                Some(true)
            } else {
                None
            },
            out: self.out.clone(),
        }
    }
}

fn build_config(args: &CommonArgs) -> Result<katz_harness::ExperimentConfig, HarnessError> {
    let base = match &args.config {
        Some(path) => {
            let text = std::fs::read_to_string(path).map_err(|e| {
                HarnessError::Config(format!("cannot read config {}: {e}", path.display()))
            })?;
            ConfigOverlay::from_file_text(&text)?
        }
        None => ConfigOverlay::default(),
    };
    base.overridden_by(args.overlay()).finish()
}

fn emit(records: &[records::Record], out: &Option<PathBuf>) -> Result<(), HarnessError> {
    match out {
        Some(path) => {
            records::write_outputs(path, records).map_err(|e| HarnessError::Data(e.to_string()))?;
            eprintln!(
                "wrote {} rows to {} (timing in {})",
                records.len(),
                path.display(),
                records::timing_path(path).display()
            );
            Ok(())
        }
        None => {
            print!("{}", records::main_csv_text(records));
            Ok(())
        }
    }
}

fn run(cli: Cli) -> Result<(), HarnessError> {
    match cli.command {
        Command::Compute(args) => {
            let cfg = build_config(&args)?;
            let s = commands::run_compute(&cfg)?;
            println!(
                "n={} m={} rho={:.6} alpha={:.6} cg_iterations={} kappa={:.3} tc={:.6}",
                s.n, s.m, s.rho, s.alpha, s.iterations, s.kappa, s.tc
            );
            if s.duplicates_merged > 0 {
                eprintln!("merged {} duplicate input edges", s.duplicates_merged);
            }
            Ok(())
        }
        Command::Compare(args) => {
            let cfg = build_config(&args)?;
            let recs = commands::run_compare(&cfg)?;
            emit(&recs, &cfg.out)
        }
        Command::Sequential(args) => {
            let cfg = build_config(&args)?;
            let recs = commands::run_sequential(&cfg)?;
            emit(&recs, &cfg.out)
        }
        Command::TcBounds(args) => {
            let cfg = build_config(&args)?;
            let recs = commands::run_tc_bounds(&cfg)?;
            emit(&recs, &cfg.out)
        }
        Command::Gen(args) => {
            let cfg = build_config(&args)?;
            let path = commands::run_gen(&cfg)?;
            eprintln!("wrote edge list to {}", path.display());
            Ok(())
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
