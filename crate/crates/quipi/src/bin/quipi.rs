use clap::{Parser, Subcommand};
use quipi::experiments::{write_tables, Context, ExperimentConfig, Study};
use std::path::PathBuf;
use std::process::ExitCode;
use std::time::{SystemTime, UNIX_EPOCH};

/// Runs the inverse-iteration studies and writes their CSV tables.
#[derive(Parser, Debug)]
#[command(name = "quipi", version)]
struct Cli {
    /// INI-style configuration file; command-line flags take precedence.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Output directory.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Worker threads; 0 uses every core.
    #[arg(long, global = true)]
    threads: Option<usize>,
    /// Print the resolved configuration and exit.
    #[arg(long, global = true)]
    dry_run: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug, Clone, Copy)]
enum Command {
    /// Ground energy across the tabulated H2 bond distances.
    H2Curve,
    /// Convergence for several energy shifts.
    RatioStudy,
    /// Accuracy and success probability against the squeezing factor.
    SqueezeStudy,
    /// Accuracy against the resource truncation.
    CutStudy,
    /// Boson loss, qubit depolarization and zero-noise extrapolation.
    NoiseStudy,
    /// Energy error against the Trotter number.
    TrotterStudy,
    /// Field sweep across the Kitaev ring transition.
    KitaevSweep,
    /// Discretized-sum inverse iteration against the exact inverse.
    HybridCompare,
    /// Displacement-sequence preparation of the resource state.
    ResourcePrep,
    /// Single-round weight against 1/E for truncated resources.
    AdditionalWeight,
}

impl Command {
    fn study(self) -> Study {
        match self {
            Command::H2Curve => Study::H2Curve,
            Command::RatioStudy => Study::Ratio,
            Command::SqueezeStudy => Study::Squeeze,
            Command::CutStudy => Study::Cut,
            Command::NoiseStudy => Study::Noise,
            Command::TrotterStudy => Study::Trotter,
            Command::KitaevSweep => Study::Kitaev,
            Command::HybridCompare => Study::HybridCompare,
            Command::ResourcePrep => Study::ResourcePrep,
            Command::AdditionalWeight => Study::AdditionalWeight,
        }
    }
}

fn run(cli: Cli) -> quipi::Result<()> {
    let mut cfg = match &cli.config {
        Some(p) => ExperimentConfig::from_path(p)?,
        None => ExperimentConfig::default(),
    };
    if let Some(o) = cli.out {
        cfg.out = o;
    }
    if let Some(s) = cli.seed {
        cfg.seed = s;
    }
    if let Some(t) = cli.threads {
        cfg.threads = t;
    }
    let study = cli.command.study();
    if cli.dry_run {
        print!("# {}\n{}", study.name(), cfg.to_ini());
        return Ok(());
    }
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(cfg.threads)
        .build()
        .map_err(|e| quipi::Error::InvalidArgument(format!("thread pool: {e}")))?;
    let ctx = Context::new(cfg)?;
    let tables = pool.install(|| study.run(&ctx))?;
    let stamp = SystemTime::now().duration_since(UNIX_EPOCH).map(|d| d.as_secs()).unwrap_or(0);
    let comment = format!("quipi {} seed={} unix_time={stamp}", study.name(), ctx.config.seed);
    for p in write_tables(&ctx.config.out, &tables, &comment)? {
        println!("{}", p.display());
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            let msg = e.to_string().replace('\n', " ");
            eprintln!("error code={} {msg}", e.code());
            ExitCode::FAILURE
        }
    }
}
