//! Batch driver: reads a run configuration, executes the selected suites and
//! writes `errors.csv`, `sweep_summary.csv` and `plots.gp`.

// `!(x > 0.0)` rejects NaN along with nonpositive values.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod config;
pub mod output;
pub mod suites;

use config::{Config, ConfigError, Suite};
use output::Sink;
use std::path::Path;
use suites::{run_suites, Status, Summary};

#[derive(Debug, thiserror::Error)]
pub enum RunError {
    #[error("{0}")]
    Config(#[from] ConfigError),
    #[error("cannot read {path}: {source}")]
    Read { path: String, source: std::io::Error },
    #[error("writing output: {0}")]
    Write(#[from] std::io::Error),
    #[error("suite {suite} failed: {source}")]
    Numeric {
        suite: &'static str,
        source: semidelta::Error,
    },
}

impl RunError {
    /// Process exit code: 2 for configuration or usage problems, 3 for
    /// numeric and I/O failures.
    pub fn exit_code(&self) -> i32 {
        match self {
            RunError::Config(_) | RunError::Read { .. } => 2,
            RunError::Write(_) | RunError::Numeric { .. } => 3,
        }
    }
}

/// Loads a configuration file.
pub fn load_config(path: &Path) -> Result<Config, RunError> {
    let text = std::fs::read_to_string(path).map_err(|source| RunError::Read {
        path: path.display().to_string(),
        source,
    })?;
    Ok(Config::parse(&text)?)
}

/// Worst status over a run, plus every summary line.
#[derive(Debug, Clone, PartialEq)]
pub struct RunOutcome {
    pub summaries: Vec<Summary>,
    pub rows: usize,
}

impl RunOutcome {
    pub fn worst(&self) -> Status {
        self.summaries.iter().map(|s| s.status).max().unwrap_or(Status::Info)
    }

    /// 0 when every check passed, 1 on a failed check or, under `strict`,
    /// a warning.
    pub fn exit_code(&self, strict: bool) -> i32 {
        match self.worst() {
            Status::Fail => 1,
            Status::Warn if strict => 1,
            _ => 0,
        }
    }
}

/// Runs the configured suites, writing each suite's rows into `out` as soon
/// as it finishes.
pub fn run(config: &Config, out: &Path) -> Result<RunOutcome, RunError> {
    let mut sink = Sink::create(out)?;
    let mut outcome = RunOutcome {
        summaries: Vec::new(),
        rows: 0,
    };
    let mut io_error = None;
    let result = run_suites(config, |_: Suite, part| {
        if io_error.is_none() {
            if let Err(e) = sink.write(&part.rows, &part.summaries) {
                io_error = Some(e);
            }
        }
        outcome.rows += part.rows.len();
        outcome.summaries.extend(part.summaries);
    });
    if let Some(e) = io_error {
        return Err(e.into());
    }
    result.map_err(|(suite, source)| RunError::Numeric {
        suite: suite.name(),
        source,
    })?;
    Ok(outcome)
}

#[cfg(test)]
mod tests {
    use super::*;

    const MINIMAL: &str = "\
[physics]
hbar = 0.1
alpha = 1.0

[state]
q = -2.0
p = 1.0

[time]
t_list = [1.0, 3.0, 4.0]
";

    fn data_lines(path: &Path) -> usize {
        std::fs::read_to_string(path).unwrap().lines().count() - 1
    }

    #[test]
    fn minimal_config_gives_one_row_per_time() {
        let dir = tempfile::tempdir().unwrap();
        let config = Config::parse(MINIMAL).unwrap();
        let outcome = run(&config, dir.path()).unwrap();
        assert_eq!(outcome.rows, 3);
        assert_eq!(data_lines(&dir.path().join(output::ERRORS_FILE)), 3);
        assert_eq!(data_lines(&dir.path().join(output::SUMMARY_FILE)), 3);
        assert!(dir.path().join(output::PLOT_FILE).exists());
        assert_eq!(outcome.exit_code(false), 0);
        assert_eq!(outcome.exit_code(true), 1);
    }

    #[test]
    fn zero_position_is_a_usage_error() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("bad.toml");
        std::fs::write(&path, MINIMAL.replace("q = -2.0", "q = 0.0")).unwrap();
        let err = load_config(&path).unwrap_err();
        assert_eq!(err.exit_code(), 2);
        assert!(err.to_string().contains("excludes cases with either q = 0"));
    }

    #[test]
    fn numeric_failure_keeps_earlier_suites() {
        let dir = tempfile::tempdir().unwrap();
        let mut config = Config::parse(MINIMAL).unwrap();
        config.times = vec![4.0];
        config.suite = Suite::All;
        config.oracle.box_half = Some(3.0);
        config.draws = 1;
        let err = run(&config, dir.path()).unwrap_err();
        assert_eq!(err.exit_code(), 3);
        assert!(err.to_string().contains("oracle"), "{err}");
        let text = std::fs::read_to_string(dir.path().join(output::ERRORS_FILE)).unwrap();
        assert!(text.lines().any(|l| l.starts_with("theorem1,")));
        assert!(text.lines().any(|l| l.starts_with("lemmas,")));
    }

    #[test]
    fn output_is_independent_of_thread_count() {
        let mut config = Config::parse(MINIMAL).unwrap();
        config.hbars = vec![0.2, 0.1, 0.05];
        config.suite = Suite::Theorem1;
        let mut tables = Vec::new();
        for threads in [1, 4] {
            let dir = tempfile::tempdir().unwrap();
            let pool = rayon::ThreadPoolBuilder::new().num_threads(threads).build().unwrap();
            pool.install(|| run(&config, dir.path())).unwrap();
            let read = |f: &str| std::fs::read(dir.path().join(f)).unwrap();
            tables.push((read(output::ERRORS_FILE), read(output::SUMMARY_FILE)));
        }
        assert_eq!(tables[0], tables[1]);
    }
}
