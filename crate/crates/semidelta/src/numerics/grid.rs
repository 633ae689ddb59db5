//! Uniform Simpson grids, sampled wave functions and discrete L2 norms.

use crate::error::{Error, Result};
use num_complex::Complex64;

/// Sample positions with quadrature weights.
#[derive(Debug, Clone, PartialEq)]
pub struct XGrid {
    pub xs: Vec<f64>,
    pub weights: Vec<f64>,
}

impl XGrid {
    /// Grid on [-half_width, half_width] with spacing at most `max_spacing`.
    ///
    /// The origin is a node and a Simpson panel boundary, so integrands with a
    /// kink at x = 0 keep their order.
    pub fn symmetric(half_width: f64, max_spacing: f64) -> Result<Self> {
        if !(half_width > 0.0) || !(max_spacing > 0.0) {
            return Err(Error::Domain("grid half-width and spacing must be positive".into()));
        }
        let mut per_side = (half_width / max_spacing).ceil() as usize;
        per_side += per_side % 2;
        per_side = per_side.max(2);
        let h = half_width / per_side as f64;
        let n = 2 * per_side + 1;
        let xs = (0..n).map(|j| (j as f64 - per_side as f64) * h).collect();
        Ok(Self {
            xs,
            weights: simpson_weights(n, h),
        })
    }

    /// Every `stride`-th node of `self`, re-weighted with Simpson's rule.
    pub fn subsample(&self, stride: usize) -> Result<Self> {
        let n = self.xs.len();
        if stride == 0 || (n - 1) % (4 * stride) != 0 {
            return Err(Error::GridMismatch("stride incompatible with grid".into()));
        }
        let xs: Vec<f64> = self.xs.iter().step_by(stride).copied().collect();
        let h = xs[1] - xs[0];
        let weights = simpson_weights(xs.len(), h);
        Ok(Self { xs, weights })
    }

    pub fn len(&self) -> usize {
        self.xs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.xs.is_empty()
    }

    pub fn spacing(&self) -> f64 {
        self.xs[1] - self.xs[0]
    }

    pub fn half_width(&self) -> f64 {
        self.xs[self.xs.len() - 1]
    }

    /// Samples `f` at every node.
    pub fn sample<F>(&self, f: F) -> WaveFunctionGrid
    where
        F: Fn(f64) -> Complex64 + Sync + Send,
    {
        WaveFunctionGrid {
            xs: self.xs.clone(),
            values: par_map(&self.xs, f),
            weights: self.weights.clone(),
        }
    }

    pub fn integrate(&self, values: &[f64]) -> f64 {
        self.weights.iter().zip(values).map(|(w, v)| w * v).sum()
    }
}

/// Composite Simpson weights for `n` (odd) equally spaced nodes.
pub fn simpson_weights(n: usize, h: f64) -> Vec<f64> {
    debug_assert!(n % 2 == 1 && n >= 3);
    (0..n)
        .map(|j| {
            let c = if j == 0 || j == n - 1 {
                1.0
            } else if j % 2 == 1 {
                4.0
            } else {
                2.0
            };
            c * h / 3.0
        })
        .collect()
}

/// Complex samples of a wave function with quadrature weights.
#[derive(Debug, Clone, PartialEq)]
pub struct WaveFunctionGrid {
    pub xs: Vec<f64>,
    pub values: Vec<Complex64>,
    pub weights: Vec<f64>,
}

impl WaveFunctionGrid {
    pub fn new(xs: Vec<f64>, values: Vec<Complex64>, weights: Vec<f64>) -> Result<Self> {
        if xs.len() != values.len() || xs.len() != weights.len() {
            return Err(Error::GridMismatch("length mismatch".into()));
        }
        if xs.windows(2).any(|w| w[1] <= w[0]) {
            return Err(Error::GridMismatch("nodes must increase strictly".into()));
        }
        if weights.iter().any(|&w| !(w > 0.0)) {
            return Err(Error::GridMismatch("weights must be positive".into()));
        }
        Ok(Self { xs, values, weights })
    }

    pub fn norm(&self) -> f64 {
        self.weights
            .iter()
            .zip(&self.values)
            .map(|(w, v)| w * v.norm_sqr())
            .sum::<f64>()
            .sqrt()
    }

    /// Weighted sum of conj(self) * other.
    pub fn inner(&self, other: &WaveFunctionGrid) -> Result<Complex64> {
        check_same(self, other)?;
        Ok(self
            .weights
            .iter()
            .zip(self.values.iter().zip(&other.values))
            .map(|(w, (a, b))| *w * a.conj() * b)
            .sum())
    }

    /// Pointwise `self + c * other`.
    pub fn axpy(&self, c: Complex64, other: &WaveFunctionGrid) -> Result<WaveFunctionGrid> {
        check_same(self, other)?;
        let values = self.values.iter().zip(&other.values).map(|(a, b)| a + c * b).collect();
        Ok(WaveFunctionGrid {
            xs: self.xs.clone(),
            values,
            weights: self.weights.clone(),
        })
    }

    pub fn grid(&self) -> XGrid {
        XGrid {
            xs: self.xs.clone(),
            weights: self.weights.clone(),
        }
    }
}

fn check_same(a: &WaveFunctionGrid, b: &WaveFunctionGrid) -> Result<()> {
    if a.xs.len() != b.xs.len() {
        return Err(Error::GridMismatch(format!("{} vs {} nodes", a.xs.len(), b.xs.len())));
    }
    if a.xs.iter().zip(&b.xs).any(|(x, y)| x != y) {
        return Err(Error::GridMismatch("node positions differ".into()));
    }
    Ok(())
}

/// Discrete L2 distance on identical grids.
pub fn l2_distance(g1: &WaveFunctionGrid, g2: &WaveFunctionGrid) -> Result<f64> {
    check_same(g1, g2)?;
    Ok(g1
        .weights
        .iter()
        .zip(g1.values.iter().zip(&g2.values))
        .map(|(w, (a, b))| w * (a - b).norm_sqr())
        .sum::<f64>()
        .sqrt())
}

/// Heaviside step with θ(0) = 0.
pub fn heaviside(x: f64) -> f64 {
    if x > 0.0 {
        1.0
    } else {
        0.0
    }
}

/// Sign with sgn(0) = 0.
pub fn sgn(x: f64) -> f64 {
    if x > 0.0 {
        1.0
    } else if x < 0.0 {
        -1.0
    } else {
        0.0
    }
}

/// Order-preserving map, parallel when the `parallel` feature is on.
pub fn par_map<T, U, F>(items: &[T], f: F) -> Vec<U>
where
    T: Sync,
    U: Send,
    F: Fn(T) -> U + Sync + Send,
    T: Copy,
{
    #[cfg(feature = "parallel")]
    {
        use rayon::prelude::*;
        items.par_iter().map(|&t| f(t)).collect()
    }
    #[cfg(not(feature = "parallel"))]
    {
        items.iter().map(|&t| f(t)).collect()
    }
}
