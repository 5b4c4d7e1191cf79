use std::path::PathBuf;
use std::process::ExitCode;

use clap::Parser;
use hdlaser::cli_experiments::{load_config, run_experiment, Experiment};
use hdlaser::DlsError;

/// Run one highly-dispersive-laser experiment from a TOML config.
#[derive(Parser, Debug)]
#[command(name = "simulate", version)]
struct Args {
    config: PathBuf,
    /// Output directory (overrides `output.dir`).
    #[arg(long)]
    out: Option<PathBuf>,
    /// Worker threads for sweeps; results do not depend on this.
    #[arg(long)]
    workers: Option<usize>,
    /// Experiment name (overrides `experiment`).
    #[arg(long)]
    experiment: Option<String>,
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::new().filter_or("DLS_LOG", "warn")).init();
    let args = Args::parse();
    match run(&args) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(match e {
                DlsError::Config(_) | DlsError::Io(_) => 3,
                DlsError::NoConvergence { .. } => 4,
                _ => 3,
            })
        }
    }
}

fn run(args: &Args) -> Result<u8, DlsError> {
    let mut cfg = load_config(&args.config)?;
    if let Some(name) = &args.experiment {
        cfg.experiment = Experiment::parse(name)?;
    }
    let out_dir = args.out.clone().unwrap_or_else(|| PathBuf::from(&cfg.output.dir));
    let mut pool = rayon::ThreadPoolBuilder::new();
    if let Some(n) = args.workers {
        if n == 0 {
            return Err(DlsError::Config("--workers must be at least 1".into()));
        }
        pool = pool.num_threads(n);
    }
    let pool = pool.build().map_err(|e| DlsError::Config(e.to_string()))?;
    let out = pool.install(|| run_experiment(&cfg))?;
    let files = out.write(&out_dir, cfg.output.precision)?;
    print!("{}", out.report);
    for f in files {
        log::info!("wrote {}", f.display());
    }
    Ok(out.exit_code() as u8)
}
