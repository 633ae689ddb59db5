//! Suite runners. Each turns a [`Config`] into error rows and summary lines.

use crate::config::{Config, Suite};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use semidelta::classical::Sign;
use semidelta::comparator::{
    admissible_draw, dirichlet_regime, dirichlet_sweep, lemma_checks, long_time_sweep, oracle_distance,
    theorem1_sweep, LongTime, RhsTerm, Scenario, SweepOutcome,
};
use semidelta::numerics::par_map;
use semidelta::oracle::OracleConfig;
use semidelta::Error;
use std::fmt;

pub const THEOREM_SLOPE: (f64, f64) = (1.3, 1.7);
pub const WALL_SLOPE: (f64, f64) = (0.85, 1.15);
pub const MIN_R2: f64 = 0.98;
pub const C_STABILITY: f64 = 3.0;
pub const LEMMA_C_MAX: f64 = 10.0;
pub const ORACLE_TOLERANCE: f64 = 1e-3;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum Status {
    Info,
    Skip,
    Pass,
    Warn,
    Fail,
}

impl fmt::Display for Status {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Status::Info => "info",
            Status::Skip => "skip",
            Status::Pass => "pass",
            Status::Warn => "warn",
            Status::Fail => "fail",
        })
    }
}

/// One line of `errors.csv`.
#[derive(Debug, Clone, PartialEq)]
pub struct Row {
    pub suite: &'static str,
    pub case: String,
    pub scenario: Scenario,
    pub t: Option<f64>,
    pub lhs: f64,
    pub terms: Vec<RhsTerm>,
    pub fitted_c: Option<f64>,
    /// Whether the row entered the fit behind `fitted_c` and the slope.
    pub in_fit: bool,
}

/// One line of `sweep_summary.csv`.
#[derive(Debug, Clone, PartialEq)]
pub struct Summary {
    pub suite: &'static str,
    pub case: String,
    pub t: Option<f64>,
    pub points: usize,
    pub slope: Option<f64>,
    pub r2: Option<f64>,
    pub c: Option<f64>,
    pub status: Status,
    pub note: String,
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct SuiteOutput {
    pub rows: Vec<Row>,
    pub summaries: Vec<Summary>,
}

fn within(x: f64, (lo, hi): (f64, f64)) -> bool {
    x >= lo && x <= hi
}

fn sweep_rows(suite: &'static str, case: &str, out: &SweepOutcome) -> Vec<Row> {
    out.rows
        .iter()
        .map(|r| Row {
            suite,
            case: case.to_string(),
            scenario: r.scenario,
            t: r.t,
            lhs: r.report.lhs,
            terms: r.report.rhs_terms.clone(),
            fitted_c: r.report.fitted_c,
            in_fit: r.included,
        })
        .collect()
}

/// Summary of a sweep whose slope must land in `range`; too few usable
/// points is a warning rather than a failure.
fn slope_summary(suite: &'static str, case: &str, t: Option<f64>, out: &SweepOutcome, range: Option<(f64, f64)>) -> Summary {
    let base = Summary {
        suite,
        case: case.to_string(),
        t,
        points: out.rows.iter().filter(|r| r.included).count(),
        slope: None,
        r2: None,
        c: Some(out.fitted_c),
        status: Status::Info,
        note: String::new(),
    };
    match (&out.fit, range) {
        (Ok(fit), None) => Summary {
            slope: Some(fit.slope),
            r2: Some(fit.r2),
            note: "slope not checked".into(),
            ..base
        },
        (Ok(fit), Some(range)) => {
            let ok = within(fit.slope, range) && fit.r2 >= MIN_R2;
            Summary {
                slope: Some(fit.slope),
                r2: Some(fit.r2),
                status: if ok { Status::Pass } else { Status::Fail },
                note: format!("slope in [{}, {}], r2 >= {MIN_R2}", range.0, range.1),
                ..base
            }
        }
        (Err(e), range) => Summary {
            status: if range.is_some() { Status::Warn } else { Status::Info },
            note: e.to_string(),
            ..base
        },
    }
}

/// Runs the selected suites in order, handing each result to `emit` as soon
/// as it is complete. A numeric failure stops the run after earlier suites
/// have been emitted.
pub fn run_suites<E>(config: &Config, mut emit: E) -> Result<(), (Suite, Error)>
where
    E: FnMut(Suite, SuiteOutput),
{
    let mut cache: Vec<(f64, SweepOutcome)> = Vec::new();
    for suite in config.suite.expand() {
        let out = match suite {
            Suite::Theorem1 => theorem1(config, &mut cache),
            Suite::Dirichlet => dirichlet(config, &mut cache),
            Suite::Theorem2 => theorem2(config),
            Suite::Lemmas => lemmas(config),
            Suite::Oracle => oracle(config),
            Suite::All => unreachable!("expanded above"),
        }
        .map_err(|e| (suite, e))?;
        emit(suite, out);
    }
    Ok(())
}

fn theorem1_at(config: &Config, t: f64, cache: &mut Vec<(f64, SweepOutcome)>) -> Result<SweepOutcome, Error> {
    if let Some((_, out)) = cache.iter().find(|(s, _)| *s == t) {
        return Ok(out.clone());
    }
    let out = theorem1_sweep(&config.scenario, &config.hbars, t, config.lambda, config.c0, &config.propagator)?;
    cache.push((t, out.clone()));
    Ok(out)
}

fn theorem1(config: &Config, cache: &mut Vec<(f64, SweepOutcome)>) -> Result<SuiteOutput, Error> {
    let mut output = SuiteOutput::default();
    for &t in &config.times {
        let out = theorem1_at(config, t, cache)?;
        output.rows.extend(sweep_rows("theorem1", "quasiclassical", &out));
        output
            .summaries
            .push(slope_summary("theorem1", "quasiclassical", Some(t), &out, Some(THEOREM_SLOPE)));
    }
    Ok(output)
}

fn dirichlet(config: &Config, cache: &mut Vec<(f64, SweepOutcome)>) -> Result<SuiteOutput, Error> {
    let mut output = SuiteOutput::default();
    let params = config.scenario.params()?;
    for &t in &config.times {
        if !dirichlet_regime(&params, t)? {
            output.summaries.push(Summary {
                suite: "dirichlet",
                case: "wall".into(),
                t: Some(t),
                points: 0,
                slope: None,
                r2: None,
                c: None,
                status: Status::Skip,
                note: "packet has not crossed the origin".into(),
            });
            continue;
        }
        let wall = dirichlet_sweep(&config.scenario, &config.hbars, t, &config.propagator)?;
        let transmitted = theorem1_at(config, t, cache)?;
        output.rows.extend(sweep_rows("dirichlet", "wall", &wall));
        let mut summary = slope_summary("dirichlet", "wall", Some(t), &wall, Some(WALL_SLOPE));
        let dominated = wall
            .rows
            .iter()
            .zip(&transmitted.rows)
            .filter(|(w, q)| w.report.lhs <= q.report.lhs)
            .count();
        if dominated > 0 {
            summary.status = Status::Fail;
            summary.note = format!("{dominated} point(s) not above the quasiclassical error");
        } else {
            summary.note.push_str("; above the quasiclassical error at every hbar");
        }
        output.summaries.push(summary);
    }
    Ok(output)
}

/// The wave-operator sign whose approximant carries a reflected term.
pub fn active_wave_sign(scenario: &Scenario) -> Sign {
    if scenario.q * scenario.p < 0.0 {
        Sign::Plus
    } else {
        Sign::Minus
    }
}

fn theorem2(config: &Config) -> Result<SuiteOutput, Error> {
    let mut output = SuiteOutput::default();
    let active = active_wave_sign(&config.scenario);
    let kinds = [
        ("wave_plus", LongTime::Wave(Sign::Plus)),
        ("wave_minus", LongTime::Wave(Sign::Minus)),
        ("scattering", LongTime::Scattering),
    ];
    for (name, which) in kinds {
        let mut constants = Vec::new();
        for &alpha in &config.alphas {
            let base = config.scenario.with_alpha(alpha);
            let out = long_time_sweep(&base, &config.hbars, which, config.lambda, &config.propagator)?;
            let case = format!("{name} alpha={alpha}");
            let checked = which == LongTime::Scattering || which == LongTime::Wave(active);
            output.rows.extend(sweep_rows("theorem2", &case, &out));
            output
                .summaries
                .push(slope_summary("theorem2", &case, None, &out, checked.then_some(THEOREM_SLOPE)));
            constants.push(out.fitted_c);
        }
        let hi = constants.iter().copied().fold(0.0, f64::max);
        let lo = constants.iter().copied().fold(f64::INFINITY, f64::min);
        let spread = hi / lo;
        output.summaries.push(Summary {
            suite: "theorem2",
            case: format!("{name} constant"),
            t: None,
            points: constants.len(),
            slope: None,
            r2: None,
            c: Some(hi),
            status: if spread <= C_STABILITY { Status::Pass } else { Status::Fail },
            note: format!("max/min constant over alpha = {spread:.3}"),
        });
    }
    Ok(output)
}

fn lemmas(config: &Config) -> Result<SuiteOutput, Error> {
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    let draws: Vec<(usize, Scenario, f64)> = (0..config.draws)
        .map(|j| {
            let (s, t) = admissible_draw(&mut rng);
            (j, s, t)
        })
        .collect();
    let results = par_map(&draws, |(j, s, t)| -> Result<Vec<Row>, Error> {
        let checks = lemma_checks(&s.params()?, t, &s.coupling()?, config.lambda, &config.propagator)?;
        Ok(checks
            .into_iter()
            .map(|c| Row {
                suite: "lemmas",
                case: format!("draw{j:02} {}", c.name),
                scenario: s,
                t: Some(t),
                lhs: c.lhs,
                terms: vec![RhsTerm { name: "bound", value: c.bound }],
                fitted_c: None,
                in_fit: true,
            })
            .collect())
    });
    let mut rows = Vec::new();
    for r in results {
        rows.extend(r?);
    }
    let c = rows.iter().map(|r| r.lhs / r.terms[0].value).fold(0.0, f64::max);
    for r in &mut rows {
        r.fitted_c = Some(c);
    }
    let summary = Summary {
        suite: "lemmas",
        case: "all draws".into(),
        t: None,
        points: config.draws,
        slope: None,
        r2: None,
        c: Some(c),
        status: if c <= LEMMA_C_MAX { Status::Pass } else { Status::Fail },
        note: format!("single constant <= {LEMMA_C_MAX}, seed {}", config.seed),
    };
    Ok(SuiteOutput {
        rows,
        summaries: vec![summary],
    })
}

fn oracle(config: &Config) -> Result<SuiteOutput, Error> {
    let cases: Vec<(f64, f64)> = config
        .alphas
        .iter()
        .flat_map(|&a| config.times.iter().map(move |&t| (a, t)))
        .collect();
    let results = par_map(&cases, |(alpha, t)| -> Result<Row, Error> {
        let s = config.scenario.with_alpha(alpha);
        let params = s.params()?;
        let box_half = config
            .oracle
            .box_half
            .unwrap_or_else(|| OracleConfig::covering_box(&params, t));
        let cfg = OracleConfig::new(config.oracle.dx, config.oracle.dt, box_half)?;
        let lhs = oracle_distance(&params, t, &s.coupling()?, &cfg, &config.propagator)?;
        Ok(Row {
            suite: "oracle",
            case: format!("alpha={alpha}"),
            scenario: s,
            t: Some(t),
            lhs,
            terms: vec![RhsTerm {
                name: "tolerance",
                value: ORACLE_TOLERANCE,
            }],
            fitted_c: None,
            in_fit: true,
        })
    });
    let rows: Vec<Row> = results.into_iter().collect::<Result<_, _>>()?;
    let mut summaries = Vec::new();
    for &alpha in &config.alphas {
        let worst = rows
            .iter()
            .filter(|r| r.scenario.alpha == alpha)
            .map(|r| r.lhs)
            .fold(0.0, f64::max);
        summaries.push(Summary {
            suite: "oracle",
            case: format!("alpha={alpha}"),
            t: None,
            points: config.times.len(),
            slope: None,
            r2: None,
            c: Some(worst / ORACLE_TOLERANCE),
            status: if worst <= ORACLE_TOLERANCE { Status::Pass } else { Status::Fail },
            note: format!("max distance {worst:.3e}"),
        });
    }
    Ok(SuiteOutput { rows, summaries })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn active_sign_follows_incoming_side() {
        assert_eq!(active_wave_sign(&Scenario::desk()), Sign::Plus);
        let outgoing = Scenario { q: 2.0, ..Scenario::desk() };
        assert_eq!(active_wave_sign(&outgoing), Sign::Minus);
    }

    #[test]
    fn wall_suite_skips_before_crossing() {
        let config = Config {
            times: vec![1.0],
            hbars: vec![0.1],
            suite: Suite::Dirichlet,
            ..Config::default()
        };
        let mut seen = Vec::new();
        run_suites(&config, |_, out| seen.push(out)).unwrap();
        assert!(seen[0].rows.is_empty());
        assert_eq!(seen[0].summaries[0].status, Status::Skip);
    }

    #[test]
    fn single_point_sweep_warns() {
        let config = Config {
            hbars: vec![0.1],
            ..Config::default()
        };
        let mut seen = Vec::new();
        run_suites(&config, |_, out| seen.push(out)).unwrap();
        assert_eq!(seen[0].rows.len(), 1);
        assert_eq!(seen[0].summaries[0].status, Status::Warn);
    }
}
