//! Gauss-Legendre panels and panel-doubling adaptive integration.

use crate::error::{Error, Result};
use num_complex::Complex64;
use std::collections::HashMap;
use std::sync::{Mutex, OnceLock};

/// Tolerances shared by every quadrature in the crate.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadratureSpec {
    pub relative_tol: f64,
    pub absolute_floor: f64,
    pub max_refinements: u32,
    pub panel_order: usize,
}

impl Default for QuadratureSpec {
    fn default() -> Self {
        Self {
            relative_tol: 1e-8,
            absolute_floor: 1e-14,
            max_refinements: 20,
            panel_order: 32,
        }
    }
}

impl QuadratureSpec {
    pub fn validate(&self) -> Result<()> {
        if !(self.relative_tol > 0.0) || !(self.absolute_floor > 0.0) {
            return Err(Error::Domain("quadrature tolerances must be positive".into()));
        }
        if self.max_refinements < 1 || self.panel_order < 2 {
            return Err(Error::Domain("need max_refinements >= 1 and panel_order >= 2".into()));
        }
        Ok(())
    }

    pub fn tolerance_for(&self, magnitude: f64) -> f64 {
        (self.relative_tol * magnitude).max(self.absolute_floor)
    }
}

/// Result of an adaptive integration.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Integral {
    pub value: Complex64,
    pub achieved_error: f64,
}

/// Nodes and weights of the n-point Gauss-Legendre rule on [-1, 1].
pub fn gauss_legendre(n: usize) -> (Vec<f64>, Vec<f64>) {
    let mut nodes = vec![0.0; n];
    let mut weights = vec![0.0; n];
    let m = n.div_ceil(2);
    for i in 0..m {
        let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            let (p, d) = legendre(n, x);
            dp = d;
            let dx = p / d;
            x -= dx;
            if dx.abs() < 1e-16 {
                break;
            }
        }
        let (_, d) = legendre(n, x);
        dp = if d != 0.0 { d } else { dp };
        let w = 2.0 / ((1.0 - x * x) * dp * dp);
        nodes[i] = -x;
        nodes[n - 1 - i] = x;
        weights[i] = w;
        weights[n - 1 - i] = w;
    }
    (nodes, weights)
}

fn legendre(n: usize, x: f64) -> (f64, f64) {
    let mut p0 = 1.0;
    let mut p1 = x;
    for k in 2..=n {
        let p2 = ((2 * k - 1) as f64 * x * p1 - (k - 1) as f64 * p0) / k as f64;
        p0 = p1;
        p1 = p2;
    }
    let d = n as f64 * (x * p1 - p0) / (x * x - 1.0);
    (p1, d)
}

type Rule = &'static (Vec<f64>, Vec<f64>);

/// Cached reference rule of the given order.
pub fn reference_rule(n: usize) -> Rule {
    static CACHE: OnceLock<Mutex<HashMap<usize, Rule>>> = OnceLock::new();
    let cache = CACHE.get_or_init(|| Mutex::new(HashMap::new()));
    let mut guard = cache.lock().expect("rule cache poisoned");
    guard
        .entry(n)
        .or_insert_with(|| Box::leak(Box::new(gauss_legendre(n))))
}

/// Composite Gauss-Legendre rule: flat lists of nodes and weights.
#[derive(Debug, Clone, Default)]
pub struct PanelRule {
    pub nodes: Vec<f64>,
    pub weights: Vec<f64>,
}

impl PanelRule {
    /// Splits every segment between consecutive breakpoints into panels no
    /// wider than `panel_width`.
    pub fn new(breaks: &[f64], panel_width: f64, order: usize) -> Self {
        let (x, w) = reference_rule(order);
        let mut rule = PanelRule::default();
        for seg in breaks.windows(2) {
            let (a, b) = (seg[0], seg[1]);
            if !(b > a) {
                continue;
            }
            let panels = ((b - a) / panel_width).ceil().max(1.0) as usize;
            let h = (b - a) / panels as f64;
            for j in 0..panels {
                let lo = a + j as f64 * h;
                let mid = lo + 0.5 * h;
                for (xi, wi) in x.iter().zip(w.iter()) {
                    rule.nodes.push(mid + 0.5 * h * xi);
                    rule.weights.push(0.5 * h * wi);
                }
            }
        }
        rule
    }

    /// Rule with a fixed number of equal panels per segment.
    pub fn with_panels(breaks: &[f64], panels: usize, order: usize) -> Self {
        let (x, w) = reference_rule(order);
        let mut rule = PanelRule::default();
        for seg in breaks.windows(2) {
            let (a, b) = (seg[0], seg[1]);
            if !(b > a) {
                continue;
            }
            let h = (b - a) / panels as f64;
            for j in 0..panels {
                let mid = a + (j as f64 + 0.5) * h;
                for (xi, wi) in x.iter().zip(w.iter()) {
                    rule.nodes.push(mid + 0.5 * h * xi);
                    rule.weights.push(0.5 * h * wi);
                }
            }
        }
        rule
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn integrate<F: Fn(f64) -> Complex64>(&self, f: F) -> Complex64 {
        self.nodes
            .iter()
            .zip(self.weights.iter())
            .fold(Complex64::new(0.0, 0.0), |acc, (&x, &w)| acc + w * f(x))
    }
}

/// Integral of `f` over [a, b].
pub fn adaptive_integral<F>(f: F, a: f64, b: f64, spec: &QuadratureSpec) -> Result<Integral>
where
    F: Fn(f64) -> Complex64,
{
    adaptive_integral_breaks(f, &[a, b], spec)
}

/// Integral of `f` over [breaks[0], breaks[last]], doubling the panel count
/// on every segment until two successive estimates agree.
pub fn adaptive_integral_breaks<F>(f: F, breaks: &[f64], spec: &QuadratureSpec) -> Result<Integral>
where
    F: Fn(f64) -> Complex64,
{
    if breaks.len() < 2 || !(breaks[breaks.len() - 1] > breaks[0]) {
        return Err(Error::Domain("integration interval must satisfy a < b".into()));
    }
    if breaks.windows(2).any(|w| w[1] < w[0]) {
        return Err(Error::Domain("breakpoints must be sorted".into()));
    }
    let mut panels = 1usize;
    let mut prev = PanelRule::with_panels(breaks, panels, spec.panel_order).integrate(&f);
    let mut achieved = f64::INFINITY;
    for _ in 0..spec.max_refinements {
        panels *= 2;
        let cur = PanelRule::with_panels(breaks, panels, spec.panel_order).integrate(&f);
        achieved = (cur - prev).norm();
        if achieved <= spec.tolerance_for(cur.norm()) {
            return Ok(Integral {
                value: cur,
                achieved_error: achieved,
            });
        }
        prev = cur;
    }
    Err(Error::Tolerance {
        estimate: prev.norm(),
        achieved,
        refinements: spec.max_refinements,
    })
}

/// Real-valued convenience wrapper.
pub fn adaptive_integral_real<F>(f: F, breaks: &[f64], spec: &QuadratureSpec) -> Result<f64>
where
    F: Fn(f64) -> f64,
{
    adaptive_integral_breaks(|x| Complex64::new(f(x), 0.0), breaks, spec).map(|r| r.value.re)
}
