use clap::Parser;
use semidelta_cli::config::{Config, Suite};
use semidelta_cli::{load_config, run, RunError};
use std::path::PathBuf;
use std::process::ExitCode;

/// Semiclassical error sweeps for a point interaction.
#[derive(Debug, Parser)]
#[command(name = "semidelta", version)]
struct Args {
    /// TOML run configuration; the desk scenario and its five-point sweep when absent.
    #[arg(long, value_name = "PATH")]
    config: Option<PathBuf>,
    /// Suite to run, overriding the configuration.
    #[arg(long, value_name = "NAME")]
    suite: Option<Suite>,
    /// Output directory.
    #[arg(long, value_name = "DIR", default_value = "out")]
    out: PathBuf,
    /// Worker threads; 1 gives the serial reference ordering.
    #[arg(long, value_name = "N")]
    threads: Option<usize>,
    /// Treat warnings as failures.
    #[arg(long)]
    strict: bool,
}

fn execute(args: &Args) -> Result<i32, RunError> {
    let mut config = match &args.config {
        Some(path) => load_config(path)?,
        None => Config::default(),
    };
    if let Some(suite) = args.suite {
        config.suite = suite;
    }
    let mut pool = rayon::ThreadPoolBuilder::new();
    if let Some(n) = args.threads {
        pool = pool.num_threads(n);
    }
    let pool = pool.build().map_err(|e| {
        RunError::Config(semidelta_cli::config::ConfigError {
            line: None,
            message: format!("thread pool: {e}"),
        })
    })?;
    let outcome = pool.install(|| run(&config, &args.out))?;
    for s in &outcome.summaries {
        let t = s.t.map(|t| format!(" t={t}")).unwrap_or_default();
        let slope = s.slope.map(|v| format!(" slope={v:.4}")).unwrap_or_default();
        let r2 = s.r2.map(|v| format!(" r2={v:.4}")).unwrap_or_default();
        let c = s.c.map(|v| format!(" C={v:.3e}")).unwrap_or_default();
        println!("{:<5} {} {}{t}{slope}{r2}{c}  {}", s.status, s.suite, s.case, s.note);
    }
    println!("{} rows written to {}", outcome.rows, args.out.display());
    Ok(outcome.exit_code(args.strict))
}

fn main() -> ExitCode {
    let args = match Args::try_parse() {
        Ok(a) => a,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match execute(&args) {
        Ok(code) => ExitCode::from(code as u8),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
