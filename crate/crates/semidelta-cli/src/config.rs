//! Run configuration: a TOML file with sections `[physics]`, `[state]`,
//! `[time]`, `[sweep]`, `[numerics]` and `[suite]`.

use semidelta::comparator::{Scenario, DEFAULT_C0, DEFAULT_LAMBDA};
use semidelta::numerics::QuadratureSpec;
use semidelta::quantum::PropagatorOptions;
use serde::Deserialize;
use std::fmt;
use std::str::FromStr;

/// A validation failure, with the 1-based line it refers to when known.
#[derive(Debug, Clone, PartialEq)]
pub struct ConfigError {
    pub line: Option<usize>,
    pub message: String,
}

impl fmt::Display for ConfigError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.line {
            Some(l) => write!(f, "line {l}: {}", self.message),
            None => write!(f, "{}", self.message),
        }
    }
}

impl std::error::Error for ConfigError {}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Suite {
    Theorem1,
    Theorem2,
    Dirichlet,
    Lemmas,
    Oracle,
    All,
}

impl Suite {
    pub const EACH: [Suite; 5] = [Suite::Theorem1, Suite::Dirichlet, Suite::Theorem2, Suite::Lemmas, Suite::Oracle];

    pub fn name(self) -> &'static str {
        match self {
            Suite::Theorem1 => "theorem1",
            Suite::Theorem2 => "theorem2",
            Suite::Dirichlet => "dirichlet",
            Suite::Lemmas => "lemmas",
            Suite::Oracle => "oracle",
            Suite::All => "all",
        }
    }

    /// The suites this selection runs, in output order.
    pub fn expand(self) -> Vec<Suite> {
        match self {
            Suite::All => Suite::EACH.to_vec(),
            s => vec![s],
        }
    }
}

impl FromStr for Suite {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        [Suite::Theorem1, Suite::Theorem2, Suite::Dirichlet, Suite::Lemmas, Suite::Oracle, Suite::All]
            .into_iter()
            .find(|x| x.name() == s)
            .ok_or_else(|| format!("unknown suite '{s}' (theorem1, theorem2, dirichlet, lemmas, oracle, all)"))
    }
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawConfig {
    physics: RawPhysics,
    state: RawState,
    time: Option<RawTime>,
    sweep: Option<RawSweep>,
    numerics: Option<RawNumerics>,
    suite: Option<RawSuite>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawPhysics {
    hbar: f64,
    #[serde(default = "one")]
    mass: f64,
    alpha: f64,
    #[serde(default = "one")]
    sigma0: f64,
    beta: Option<f64>,
}

fn one() -> f64 {
    1.0
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawState {
    q: f64,
    p: f64,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawTime {
    t_list: Option<Vec<f64>>,
    t_range: Option<RawRange>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawRange {
    start: f64,
    stop: f64,
    count: usize,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawSweep {
    hbar_list: Option<Vec<f64>>,
    alpha_list: Option<Vec<f64>>,
    lambda: Option<f64>,
    c0: Option<f64>,
    draws: Option<usize>,
    seed: Option<u64>,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawNumerics {
    rel_tol: Option<f64>,
    n_sd: Option<f64>,
    dx: Option<f64>,
    dt: Option<f64>,
    #[serde(rename = "box")]
    box_half: Option<f64>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawSuite {
    name: String,
}

/// Finite-difference oracle settings.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OracleSettings {
    pub dx: f64,
    pub dt: f64,
    /// Fixed half-width; `None` sizes the box from the packet.
    pub box_half: Option<f64>,
}

/// A validated configuration.
#[derive(Debug, Clone, PartialEq)]
pub struct Config {
    pub scenario: Scenario,
    pub times: Vec<f64>,
    pub hbars: Vec<f64>,
    pub alphas: Vec<f64>,
    pub lambda: f64,
    pub c0: f64,
    pub draws: usize,
    pub seed: u64,
    pub propagator: PropagatorOptions,
    pub oracle: OracleSettings,
    pub suite: Suite,
}

impl Default for Config {
    /// The desk scenario with the five-point ħ sweep at t = 4.
    fn default() -> Self {
        let scenario = Scenario::desk();
        Self {
            scenario,
            times: vec![4.0],
            hbars: vec![0.2, 0.1, 0.05, 0.025, 0.0125],
            alphas: vec![scenario.alpha, -scenario.alpha],
            lambda: DEFAULT_LAMBDA,
            c0: DEFAULT_C0,
            draws: 20,
            seed: 2024,
            propagator: PropagatorOptions::default(),
            oracle: OracleSettings {
                dx: 2e-3,
                dt: 2e-4,
                box_half: Some(20.0),
            },
            suite: Suite::Theorem1,
        }
    }
}

/// Line of `key = ...` inside `[section]`, if present.
fn locate(text: &str, section: &str, key: &str) -> Option<usize> {
    let header = format!("[{section}]");
    let mut inside = false;
    for (j, line) in text.lines().enumerate() {
        let trimmed = line.trim();
        if trimmed.starts_with('[') {
            inside = trimmed == header;
            continue;
        }
        if inside {
            if let Some((k, _)) = trimmed.split_once('=') {
                if k.trim() == key {
                    return Some(j + 1);
                }
            }
        }
    }
    None
}

fn line_of_offset(text: &str, offset: usize) -> usize {
    text[..offset.min(text.len())].matches('\n').count() + 1
}

impl Config {
    pub fn parse(text: &str) -> Result<Self, ConfigError> {
        let raw: RawConfig = toml::from_str(text).map_err(|e| ConfigError {
            line: e.span().map(|s| line_of_offset(text, s.start)),
            message: e.message().to_string(),
        })?;
        let fail = |section: &str, key: &str, message: String| ConfigError {
            line: locate(text, section, key),
            message,
        };

        let ph = &raw.physics;
        for (key, v) in [("hbar", ph.hbar), ("mass", ph.mass), ("sigma0", ph.sigma0)] {
            if !(v > 0.0 && v.is_finite()) {
                return Err(fail("physics", key, format!("{key} must be positive and finite, got {v}")));
            }
        }
        if ph.alpha == 0.0 || !ph.alpha.is_finite() {
            return Err(fail("physics", "alpha", "alpha must be nonzero and finite".into()));
        }
        if let Some(beta) = ph.beta {
            let want = 2.0 * ph.alpha / ph.hbar;
            if (beta - want).abs() > 1e-12 * want.abs() {
                return Err(fail(
                    "physics",
                    "beta",
                    format!("beta must equal 2*alpha/hbar = {want}, got {beta}"),
                ));
            }
        }
        let st = &raw.state;
        for (key, v) in [("q", st.q), ("p", st.p)] {
            if v == 0.0 {
                return Err(fail(
                    "state",
                    key,
                    format!("{key} = 0 is not admissible: the standing assumption qp != 0 excludes cases with either q = 0 or p = 0"),
                ));
            }
            if !v.is_finite() {
                return Err(fail("state", key, format!("{key} must be finite")));
            }
        }
        let scenario = Scenario {
            hbar: ph.hbar,
            mass: ph.mass,
            alpha: ph.alpha,
            sigma0: ph.sigma0,
            q: st.q,
            p: st.p,
        };

        let times = match &raw.time {
            None => vec![Config::default().times[0]],
            Some(t) => match (&t.t_list, &t.t_range) {
                (Some(_), Some(_)) => {
                    return Err(fail("time", "t_range", "give either t_list or t_range, not both".into()))
                }
                (Some(list), None) if !list.is_empty() => list.clone(),
                (None, Some(r)) if r.count >= 1 => {
                    if r.count == 1 {
                        vec![r.start]
                    } else {
                        let step = (r.stop - r.start) / (r.count - 1) as f64;
                        (0..r.count).map(|j| r.start + step * j as f64).collect()
                    }
                }
                _ => return Err(fail("time", "t_list", "the time list is empty".into())),
            },
        };
        if times.iter().any(|t| !t.is_finite()) {
            return Err(fail("time", "t_list", "times must be finite".into()));
        }

        let sweep = raw.sweep.unwrap_or_default();
        let hbars = sweep.hbar_list.unwrap_or_else(|| vec![ph.hbar]);
        if hbars.is_empty() || hbars.iter().any(|h| !(*h > 0.0)) {
            return Err(fail("sweep", "hbar_list", "hbar_list needs positive entries".into()));
        }
        let alphas = sweep.alpha_list.unwrap_or_else(|| vec![ph.alpha, -ph.alpha]);
        if alphas.is_empty() || alphas.iter().any(|a| *a == 0.0 || !a.is_finite()) {
            return Err(fail("sweep", "alpha_list", "alpha_list needs nonzero entries".into()));
        }
        let lambda = sweep.lambda.unwrap_or(DEFAULT_LAMBDA);
        if !(lambda > 0.0 && lambda < 1.5) {
            return Err(fail("sweep", "lambda", format!("lambda must lie in (0, 3/2), got {lambda}")));
        }
        let c0 = sweep.c0.unwrap_or(DEFAULT_C0);
        if !(c0 > 0.0) {
            return Err(fail("sweep", "c0", "c0 must be positive".into()));
        }

        let num = raw.numerics.unwrap_or_default();
        let defaults = Config::default();
        let rel_tol = num.rel_tol.unwrap_or(defaults.propagator.spec.relative_tol);
        let n_sd = num.n_sd.unwrap_or(defaults.propagator.n_sd);
        if !(rel_tol > 0.0 && rel_tol < 1.0) {
            return Err(fail("numerics", "rel_tol", "rel_tol must lie in (0, 1)".into()));
        }
        if !(n_sd >= 4.0) {
            return Err(fail("numerics", "n_sd", "n_sd must be at least 4".into()));
        }
        let oracle = OracleSettings {
            dx: num.dx.unwrap_or(defaults.oracle.dx),
            dt: num.dt.unwrap_or(defaults.oracle.dt),
            box_half: num.box_half,
        };
        for (key, v) in [("dx", oracle.dx), ("dt", oracle.dt), ("box", oracle.box_half.unwrap_or(1.0))] {
            if !(v > 0.0) {
                return Err(fail("numerics", key, format!("{key} must be positive")));
            }
        }

        let suite = match raw.suite {
            None => Suite::Theorem1,
            Some(s) => s.name.parse().map_err(|m| fail("suite", "name", m))?,
        };

        Ok(Config {
            scenario,
            times,
            hbars,
            alphas,
            lambda,
            c0,
            draws: sweep.draws.unwrap_or(defaults.draws),
            seed: sweep.seed.unwrap_or(defaults.seed),
            propagator: PropagatorOptions {
                spec: QuadratureSpec {
                    relative_tol: rel_tol,
                    ..QuadratureSpec::default()
                },
                n_sd,
            },
            oracle,
            suite,
        })
    }
}
