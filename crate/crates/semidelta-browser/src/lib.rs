//! Browser bindings. Three operations back the demo page in `www/`:
//! packet densities at one time, the error sweep over ħ, and the
//! reflection probability against wavenumber.

use semidelta::classical::{dirichlet_approximant, quasiclassical_approximant};
use semidelta::comparator::{theorem1_error, Scenario};
use semidelta::quantum::{evolution_grid, quantum_evolve, DeltaCoupling, PropagatorOptions};
use semidelta::states::PhysicalConstants;
use wasm_bindgen::prelude::*;

fn scenario(hbar: f64, alpha: f64, q: f64, p: f64) -> Scenario {
    Scenario {
        hbar,
        alpha,
        q,
        p,
        ..Scenario::desk()
    }
}

/// Every `stride`-th node: x, then |ψ|² for the exact, quasiclassical and
/// wall states, as four consecutive blocks of equal length.
pub fn densities(s: &Scenario, t: f64, points: usize) -> semidelta::Result<Vec<f64>> {
    let params = s.params()?;
    let grid = evolution_grid(&params, t)?;
    let exact = quantum_evolve(&params, t, &s.coupling()?, &grid, &PropagatorOptions::default())?;
    let quasi = quasiclassical_approximant(&params, t, s.alpha, &grid)?;
    let wall = dirichlet_approximant(&params, t, &grid)?;
    let stride = (grid.xs.len() / points.max(2)).max(1);
    let mut out: Vec<f64> = grid.xs.iter().step_by(stride).copied().collect();
    for state in [&exact, &quasi, &wall] {
        out.extend(state.values.iter().step_by(stride).map(|v| v.norm_sqr()));
    }
    Ok(out)
}

/// L² distance between the exact and quasiclassical states at each ħ.
pub fn error_sweep(s: &Scenario, t: f64, hbars: &[f64]) -> semidelta::Result<Vec<f64>> {
    hbars
        .iter()
        .map(|&h| {
            let sh = s.with_hbar(h);
            theorem1_error(&sh.params()?, t, &sh.coupling()?, &PropagatorOptions::default())
        })
        .collect()
}

/// |R₊(k)|² on `ks`.
pub fn reflection_probability(hbar: f64, alpha: f64, ks: &[f64]) -> semidelta::Result<Vec<f64>> {
    let c = DeltaCoupling::new(alpha, PhysicalConstants::new(hbar, 1.0)?)?;
    Ok(ks.iter().map(|&k| c.r_plus(k).norm_sqr()).collect())
}

fn js<T>(r: semidelta::Result<T>) -> Result<T, JsError> {
    r.map_err(|e| JsError::new(&e.to_string()))
}

#[wasm_bindgen(js_name = densities)]
pub fn densities_js(hbar: f64, alpha: f64, q: f64, p: f64, t: f64, points: usize) -> Result<Vec<f64>, JsError> {
    js(densities(&scenario(hbar, alpha, q, p), t, points))
}

#[wasm_bindgen(js_name = errorSweep)]
pub fn error_sweep_js(alpha: f64, q: f64, p: f64, t: f64, hbars: Vec<f64>) -> Result<Vec<f64>, JsError> {
    js(error_sweep(&scenario(0.1, alpha, q, p), t, &hbars))
}

#[wasm_bindgen(js_name = reflectionProbability)]
pub fn reflection_probability_js(hbar: f64, alpha: f64, ks: Vec<f64>) -> Result<Vec<f64>, JsError> {
    js(reflection_probability(hbar, alpha, &ks))
}
