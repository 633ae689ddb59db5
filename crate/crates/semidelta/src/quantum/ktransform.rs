//! Oscillatory k-integrals (2π)^{-1/2} ∫ h(k) e^{ikX} dk evaluated for many X.

use crate::error::{Error, Result};
use crate::numerics::{PanelRule, QuadratureSpec, XGrid};
use num_complex::Complex64;
use std::f64::consts::PI;

/// Phase rotations are re-seeded with an exact exponential this often.
const RESEED: usize = 128;

/// A converged quadrature rule with the integrand folded into the weights.
#[derive(Debug, Clone)]
pub struct KTransform {
    nodes: Vec<f64>,
    coeffs: Vec<Complex64>,
    /// Largest change between the accepted rule and one of half the width.
    pub achieved: f64,
}

impl KTransform {
    /// Builds the rule on the segments between `breaks`.
    ///
    /// `omega` bounds the total phase rate of h(k) e^{ikX} over the X range
    /// of interest. The panel width starts at 20/omega and is halved until
    /// every probe X agrees with the next halving to `spec.relative_tol`
    /// times ∫|h|.
    pub fn build<H>(h: H, breaks: &[f64], omega: f64, probes: &[f64], spec: &QuadratureSpec) -> Result<Self>
    where
        H: Fn(f64) -> Complex64,
    {
        if breaks.len() < 2 || !(breaks[breaks.len() - 1] > breaks[0]) {
            return Err(Error::Domain("k-window must be non-empty".into()));
        }
        let span = breaks[breaks.len() - 1] - breaks[0];
        let mut width = (20.0 / omega.max(1e-12)).min(span);
        let mut coarse = Self::with_width(&h, breaks, width, spec.panel_order);
        let mut achieved = f64::INFINITY;
        for _ in 0..spec.max_refinements {
            width *= 0.5;
            let fine = Self::with_width(&h, breaks, width, spec.panel_order);
            let scale: f64 = fine.coeffs.iter().map(|c| c.norm()).sum();
            achieved = probes
                .iter()
                .map(|&x| (fine.at(x) - coarse.at(x)).norm())
                .fold(0.0, f64::max);
            if achieved <= (spec.relative_tol * scale).max(f64::MIN_POSITIVE) {
                return Ok(Self { achieved, ..fine });
            }
            coarse = fine;
        }
        Err(Error::Tolerance {
            estimate: probes.first().map(|&x| coarse.at(x).norm()).unwrap_or(0.0),
            achieved,
            refinements: spec.max_refinements,
        })
    }

    fn with_width<H: Fn(f64) -> Complex64>(h: &H, breaks: &[f64], width: f64, order: usize) -> Self {
        let rule = PanelRule::new(breaks, width, order);
        let norm = 1.0 / (2.0 * PI).sqrt();
        let coeffs = rule
            .nodes
            .iter()
            .zip(&rule.weights)
            .map(|(&k, &w)| w * norm * h(k))
            .collect();
        Self {
            nodes: rule.nodes,
            coeffs,
            achieved: 0.0,
        }
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn at(&self, x: f64) -> Complex64 {
        self.nodes
            .iter()
            .zip(&self.coeffs)
            .map(|(&k, c)| c * Complex64::new(0.0, k * x).exp())
            .sum()
    }

    /// Values at x0 + j·dx for j in 0..count.
    pub fn on_uniform(&self, x0: f64, dx: f64, count: usize) -> Vec<Complex64> {
        let starts: Vec<usize> = (0..count).step_by(RESEED).collect();
        let blocks = crate::numerics::par_map(&starts, |start| {
            let len = RESEED.min(count - start);
            let mut out = vec![Complex64::new(0.0, 0.0); len];
            let x_start = x0 + start as f64 * dx;
            for (&k, c) in self.nodes.iter().zip(&self.coeffs) {
                let step = Complex64::new(0.0, k * dx).exp();
                let mut term = c * Complex64::new(0.0, k * x_start).exp();
                for v in out.iter_mut() {
                    *v += term;
                    term *= step;
                }
            }
            out
        });
        blocks.into_iter().flatten().collect()
    }

    /// Values at X = sign·|x| for every node of a symmetric grid.
    pub fn on_folded(&self, grid: &XGrid, sign: f64) -> Vec<Complex64> {
        let n = grid.len();
        let per_side = n / 2;
        let h = grid.spacing();
        let half = self.on_uniform(0.0, sign * h, per_side + 1);
        (0..n)
            .map(|j| half[(j as isize - per_side as isize).unsigned_abs()])
            .collect()
    }
}
