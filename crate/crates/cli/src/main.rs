use clap::Parser;
use flatamp_cli::config::RunConfig;
use flatamp_cli::suites::{run_suite, write_output, SUITES};
use flatamp_cli::CliError;
use std::path::PathBuf;
use std::process::ExitCode;

/// Runs verification suites and writes their reports.
#[derive(Parser, Debug)]
#[command(name = "flatamp", version)]
struct Args {
    /// Suite: hecke, amplifier, lattice, spherical, oscillatory or report (all of them).
    suite: String,
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long)]
    seed: Option<u64>,
    /// Comma-separated primes.
    #[arg(long)]
    primes: Option<String>,
    /// Amplifier length.
    #[arg(long = "N")]
    n: Option<u64>,
    /// Comma-separated geometric list of frequencies for the slope fits.
    #[arg(long)]
    t: Option<String>,
    /// Comma-separated spectral distances for the off-spectrum sweep.
    #[arg(long)]
    beta: Option<String>,
    /// Radii in the envelope sample grid.
    #[arg(long)]
    grid: Option<usize>,
    #[arg(long)]
    tol: Option<f64>,
    /// json or csv.
    #[arg(long)]
    out: Option<String>,
    #[arg(long)]
    out_dir: Option<PathBuf>,
    /// Use all cores inside suites.
    #[arg(long)]
    parallel: bool,
}

fn configure(args: &Args) -> Result<RunConfig, CliError> {
    if !SUITES.contains(&args.suite.as_str()) {
        return Err(CliError::Usage(format!("unknown suite {:?}; expected one of {}", args.suite, SUITES.join(", "))));
    }
    let mut cfg = RunConfig::default();
    if let Some(p) = &args.config {
        cfg.apply_file(p)?;
    }
    let flags = [("seed", args.seed.map(|v| v.to_string())), ("primes", args.primes.clone()), ("N", args.n.map(|v| v.to_string())), ("t", args.t.clone()), ("beta", args.beta.clone()), ("grid", args.grid.map(|v| v.to_string())), ("tol", args.tol.map(|v| v.to_string())), ("out", args.out.clone())];
    for (k, v) in flags {
        if let Some(v) = v {
            cfg.set(k, &v)?;
        }
    }
    if let Some(d) = &args.out_dir {
        cfg.out_dir = d.clone();
    }
    cfg.parallel |= args.parallel;
    cfg.validate()?;
    Ok(cfg)
}

fn run(args: &Args) -> Result<bool, CliError> {
    let cfg = configure(args)?;
    let threads = if cfg.parallel { 0 } else { 1 };
    rayon::ThreadPoolBuilder::new().num_threads(threads).build_global().map_err(|e| CliError::Usage(e.to_string()))?;
    let out = run_suite(&args.suite, &cfg)?;
    write_output(&out, &cfg, &cfg.out_dir)?;
    for rep in &out.reports {
        for r in &rep.records {
            println!("{:<12} {:<24} {}", rep.suite, r.id, serde_json::to_value(r.status).expect("status").as_str().unwrap_or_default());
        }
    }
    Ok(out.passed())
}

fn main() -> ExitCode {
    let args = match Args::try_parse() {
        Ok(a) => a,
        Err(e) if e.use_stderr() => {
            let _ = e.print();
            return ExitCode::from(2);
        }
        Err(e) => {
            let _ = e.print();
            return ExitCode::SUCCESS;
        }
    };
    match run(&args) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("flatamp: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
