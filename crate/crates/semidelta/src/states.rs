//! Gaussian coherent states, their Fourier transforms and free evolution.

use crate::error::{Error, Result};
use crate::numerics::XGrid;
use num_complex::Complex64;
use std::f64::consts::PI;

/// Reduced Planck constant and particle mass.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PhysicalConstants {
    pub hbar: f64,
    pub mass: f64,
}

impl PhysicalConstants {
    pub fn new(hbar: f64, mass: f64) -> Result<Self> {
        if !(hbar > 0.0) || !(mass > 0.0) || !hbar.is_finite() || !mass.is_finite() {
            return Err(Error::Domain(format!("need hbar > 0 and mass > 0, got {hbar}, {mass}")));
        }
        Ok(Self { hbar, mass })
    }
}

/// Parameters of ψ(σ, σ̆, q, p; x).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CoherentParams {
    pub constants: PhysicalConstants,
    pub sigma0: f64,
    pub sigma: Complex64,
    pub sigma_breve: Complex64,
    pub q: f64,
    pub p: f64,
}

/// Output of free evolution: phase A_t, width σ_t, centre q_t, momentum p.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FreeEvolutionResult {
    pub action_phase: f64,
    pub sigma_t: Complex64,
    pub q_t: f64,
    pub p_t: f64,
}

/// Principal square root, checked to have positive real part.
pub fn root(z: Complex64) -> Complex64 {
    let r = z.sqrt();
    debug_assert!(r.re > 0.0, "square root branch violated for {z}");
    r
}

impl CoherentParams {
    /// Standard family: σ = σ₀, σ̆ = 1/σ₀.
    pub fn standard(constants: PhysicalConstants, sigma0: f64, q: f64, p: f64) -> Result<Self> {
        Self::general(
            constants,
            sigma0,
            Complex64::new(sigma0, 0.0),
            Complex64::new(1.0 / sigma0, 0.0),
            q,
            p,
        )
    }

    pub fn general(
        constants: PhysicalConstants,
        sigma0: f64,
        sigma: Complex64,
        sigma_breve: Complex64,
        q: f64,
        p: f64,
    ) -> Result<Self> {
        if !(sigma0 > 0.0) {
            return Err(Error::Domain(format!("sigma0 must be positive, got {sigma0}")));
        }
        if !(sigma.re > 0.0) || !(sigma_breve.re > 0.0) {
            return Err(Error::Domain("need Re sigma > 0 and Re sigma_breve > 0".into()));
        }
        let pairing = (sigma.conj() * sigma_breve).re;
        if (pairing - 1.0).abs() > 1e-12 {
            return Err(Error::Domain(format!("Re(conj(sigma) sigma_breve) = {pairing}, expected 1")));
        }
        if !q.is_finite() || !p.is_finite() {
            return Err(Error::Domain("q and p must be finite".into()));
        }
        Ok(Self {
            constants,
            sigma0,
            sigma,
            sigma_breve,
            q,
            p,
        })
    }

    pub fn hbar(&self) -> f64 {
        self.constants.hbar
    }

    pub fn mass(&self) -> f64 {
        self.constants.mass
    }

    /// Gaussian rate a = σ̆/(4ħσ) in exp(-a(x-q)^2).
    pub fn rate(&self) -> Complex64 {
        self.sigma_breve / (4.0 * self.hbar() * self.sigma)
    }

    /// Prefactor (2πħ)^{-1/4} σ^{-1/2}.
    pub fn amplitude(&self) -> Complex64 {
        (2.0 * PI * self.hbar()).powf(-0.25) / root(self.sigma)
    }

    /// ψ(σ, σ̆, q, p; x).
    pub fn eval(&self, x: f64) -> Complex64 {
        let d = x - self.q;
        let expo = -self.rate() * d * d + Complex64::new(0.0, self.p * d / self.hbar());
        self.amplitude() * expo.exp()
    }

    /// ψ̂(k) with the unitary convention (2π)^{-1/2} ∫ e^{-ikx} ψ(x) dx.
    pub fn fourier(&self, k: f64) -> Complex64 {
        let h = self.hbar();
        let d = k - self.p / h;
        let pre = (2.0 * h / PI).powf(0.25) / root(self.sigma_breve);
        let expo = -h * self.sigma * d * d / self.sigma_breve - Complex64::new(0.0, k * self.q);
        pre * expo.exp()
    }

    /// Centres reflected through the origin: ψ(−q, −p; x) = ψ(q, p; −x).
    pub fn reflected(&self) -> Self {
        Self {
            q: -self.q,
            p: -self.p,
            ..*self
        }
    }

    /// Free evolution data for time t.
    pub fn free_evolve(&self, t: f64) -> FreeEvolutionResult {
        let m = self.mass();
        FreeEvolutionResult {
            action_phase: self.p * self.p * t / (2.0 * m),
            sigma_t: self.sigma + Complex64::new(0.0, t / (2.0 * m)) * self.sigma_breve,
            q_t: self.q + self.p * t / m,
            p_t: self.p,
        }
    }

    /// The freely evolved state e^{-itH₀/ħ}ψ as (global phase, parameters).
    pub fn evolved(&self, t: f64) -> (Complex64, CoherentParams) {
        let r = self.free_evolve(t);
        let phase = Complex64::new(0.0, r.action_phase / self.hbar()).exp();
        let params = Self {
            sigma: r.sigma_t,
            q: r.q_t,
            p: r.p_t,
            ..*self
        };
        (phase, params)
    }

    /// (e^{-itH₀/ħ}ψ)(x).
    pub fn eval_free(&self, t: f64, x: f64) -> Complex64 {
        let (phase, params) = self.evolved(t);
        phase * params.eval(x)
    }

    /// (⟨x⟩, sd_x, ⟨p⟩, sd_p).
    pub fn moments(&self) -> (f64, f64, f64, f64) {
        let s = self.hbar().sqrt();
        (self.q, s * self.sigma.norm(), self.p, s * self.sigma_breve.norm() / 2.0)
    }

    /// Position spread √ħ|σ|.
    pub fn width(&self) -> f64 {
        self.hbar().sqrt() * self.sigma.norm()
    }

    /// Scale of |ψ̂|: |ψ̂(k)| ∝ exp(-((k - p/ħ)/scale)^2).
    pub fn k_scale(&self) -> f64 {
        self.sigma_breve.norm() / self.hbar().sqrt()
    }

    /// Largest wavenumber carried with non-negligible weight.
    pub fn k_reach(&self, n_sd: f64) -> f64 {
        self.p.abs() / self.hbar() + n_sd * self.k_scale()
    }
}

/// φ_{σ,x}(ξ) = ψ(σ, 1/σ₀, ξ; x): the coherent state read as a function of
/// its phase-space centre.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PhaseSpaceKernel {
    pub constants: PhysicalConstants,
    pub sigma0: f64,
    pub sigma: Complex64,
    pub x: f64,
}

impl PhaseSpaceKernel {
    pub fn new(constants: PhysicalConstants, sigma0: f64, sigma: Complex64, x: f64) -> Self {
        Self {
            constants,
            sigma0,
            sigma,
            x,
        }
    }

    pub fn eval(&self, q: f64, p: f64) -> Complex64 {
        let h = self.constants.hbar;
        let d = self.x - q;
        let rate = 1.0 / (4.0 * h * self.sigma0 * self.sigma);
        let amp = (2.0 * PI * h).powf(-0.25) / root(self.sigma);
        amp * (-rate * d * d + Complex64::new(0.0, p * d / h)).exp()
    }
}

/// Grid options shared by every x-space evaluation.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GridOptions {
    /// Window half-width in packet widths.
    pub n_sd: f64,
    /// Nodes per shortest wavelength.
    pub points_per_wavelength: f64,
    /// Stop refining once the probe norm changes less than this.
    pub norm_tol: f64,
}

impl Default for GridOptions {
    fn default() -> Self {
        Self {
            n_sd: 14.0,
            points_per_wavelength: 16.0,
            norm_tol: 1e-9,
        }
    }
}

/// Symmetric grid covering the packets of `states` and their mirror images.
///
/// The spacing starts from the shortest relevant wavelength and is halved
/// until the norms of the closed-form packets stop changing.
pub fn covering_grid(states: &[CoherentParams], opts: &GridOptions) -> Result<XGrid> {
    if states.is_empty() {
        return Err(Error::Domain("covering_grid needs at least one state".into()));
    }
    let half = states
        .iter()
        .map(|s| s.q.abs() + opts.n_sd * s.width())
        .fold(0.0, f64::max);
    let k_max = states.iter().map(|s| s.k_reach(8.0)).fold(0.0, f64::max);
    let mut spacing = 2.0 * PI / (opts.points_per_wavelength * k_max);
    let mut grid = XGrid::symmetric(half, spacing)?;
    let probe = |g: &XGrid| -> Vec<f64> {
        states
            .iter()
            .map(|s| g.sample(|x| s.eval(x)).norm())
            .collect()
    };
    let mut last = probe(&grid);
    for _ in 0..6 {
        spacing *= 0.5;
        let finer = XGrid::symmetric(half, spacing)?;
        let now = probe(&finer);
        let change = now
            .iter()
            .zip(&last)
            .map(|(a, b)| (a - b).abs() / b)
            .fold(0.0, f64::max);
        if change < opts.norm_tol {
            return Ok(grid);
        }
        grid = finer;
        last = now;
    }
    Ok(grid)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use proptest::prelude::*;

    fn desk() -> CoherentParams {
        CoherentParams::standard(PhysicalConstants::new(0.1, 1.0).unwrap(), 1.0, -2.0, 1.0).unwrap()
    }

    #[test]
    fn value_at_centre() {
        let s = desk();
        let want = (2.0 * PI * 0.1f64).powf(-0.25);
        assert_relative_eq!(s.eval(-2.0).re, want, max_relative = 1e-15);
        assert_eq!(s.eval(-2.0).im, 0.0);
    }

    #[test]
    fn fourier_peak() {
        let s = CoherentParams::standard(PhysicalConstants::new(0.1, 1.0).unwrap(), 1.0, 0.0, 1.0).unwrap();
        assert_relative_eq!(s.fourier(10.0).re, (0.2 / PI).powf(0.25), max_relative = 1e-15);
    }

    #[test]
    fn invalid_width_rejected() {
        let c = PhysicalConstants::new(0.1, 1.0).unwrap();
        let bad = CoherentParams::general(c, 1.0, Complex64::new(-1.0, 0.0), Complex64::new(-1.0, 0.0), 1.0, 1.0);
        assert!(matches!(bad, Err(Error::Domain(_))));
        let unpaired = CoherentParams::general(c, 1.0, Complex64::new(1.0, 0.0), Complex64::new(2.0, 0.0), 1.0, 1.0);
        assert!(unpaired.is_err());
    }

    #[test]
    fn free_evolution_examples() {
        let s = CoherentParams::standard(PhysicalConstants::new(0.1, 1.0).unwrap(), 1.0, -2.0, 1.0).unwrap();
        let r0 = s.free_evolve(0.0);
        assert_eq!((r0.action_phase, r0.sigma_t, r0.q_t, r0.p_t), (0.0, Complex64::new(1.0, 0.0), -2.0, 1.0));
        let r = s.free_evolve(2.0);
        assert_eq!(r.action_phase, 1.0);
        assert_eq!(r.sigma_t, Complex64::new(1.0, 1.0));
        assert_eq!(r.q_t, 0.0);
    }

    #[test]
    fn moments_example() {
        let s = CoherentParams::standard(PhysicalConstants::new(0.04, 1.0).unwrap(), 1.0, 0.5, 2.0).unwrap();
        let (_, sq, _, sp) = s.moments();
        assert_relative_eq!(sq, 0.2, max_relative = 1e-15);
        assert_relative_eq!(sp, 0.1, max_relative = 1e-15);
    }

    #[test]
    fn norms_and_mean_on_grid() {
        let s = desk();
        let g = covering_grid(&[s], &GridOptions::default()).unwrap();
        let w = g.sample(|x| s.eval(x));
        assert!((w.norm() - 1.0).abs() < 1e-10);
        let density: Vec<f64> = w.values.iter().zip(&w.xs).map(|(v, x)| v.norm_sqr() * x).collect();
        assert!((g.integrate(&density) - s.q).abs() < 1e-9);
        // momentum side: k-space norm
        let kg = XGrid::symmetric(s.k_reach(14.0) + 10.0, 0.01).unwrap();
        let wk = kg.sample(|k| s.fourier(k));
        assert!((wk.norm() - 1.0).abs() < 1e-10);
    }

    #[test]
    fn discrete_fourier_matches_closed_form() {
        let s = desk();
        let g = XGrid::symmetric(12.0, 0.004).unwrap();
        let vals = g.sample(|x| s.eval(x));
        for &k in &[0.0, 5.0, 8.5, 10.0, 11.7, 14.0] {
            let dft: Complex64 = vals
                .values
                .iter()
                .zip(&g.xs)
                .zip(&g.weights)
                .map(|((v, x), w)| *w * v * Complex64::new(0.0, -k * x).exp())
                .sum::<Complex64>()
                / (2.0 * PI).sqrt();
            assert!((dft - s.fourier(k)).norm() < 1e-7, "k = {k}");
        }
    }

    #[test]
    fn phase_space_kernel_matches_state() {
        let c = PhysicalConstants::new(0.07, 1.3).unwrap();
        let sigma = Complex64::new(0.8, 0.4 / 0.8);
        let s = CoherentParams::general(c, 0.8, sigma, Complex64::new(1.0 / 0.8, 0.0), 0.3, -1.1).unwrap();
        let k = PhaseSpaceKernel::new(c, 0.8, sigma, 0.45);
        assert_eq!(k.eval(0.3, -1.1), s.eval(0.45));
        let even = k.eval(0.3, -1.1) + k.eval(-0.3, 1.1);
        let mirror = s.eval(0.45) + s.eval(-0.45);
        assert!((even - mirror).norm() < 1e-14);
    }

    proptest! {
        #[test]
        fn reflection_symmetry(q in -3.0..3.0f64, p in -2.0..2.0f64, x in -4.0..4.0f64, h in 0.01..0.5f64) {
            let s = CoherentParams::standard(PhysicalConstants::new(h, 1.0).unwrap(), 1.0, q, p).unwrap();
            let a = s.reflected().eval(x);
            let b = s.eval(-x);
            prop_assert!((a - b).norm() <= 1e-14 * (1.0 + b.norm()));
        }

        #[test]
        fn free_group_law(t in -3.0..3.0f64, u in -3.0..3.0f64, s0 in 0.5..2.0f64, m in 0.5..2.0f64) {
            let s = CoherentParams::standard(PhysicalConstants::new(0.1, m).unwrap(), s0, -1.0, 0.7).unwrap();
            let (ph1, a) = s.evolved(t);
            let (ph2, b) = a.evolved(u);
            let (ph, c) = s.evolved(t + u);
            prop_assert!((b.sigma - c.sigma).norm() < 1e-12);
            prop_assert!((b.q - c.q).abs() < 1e-12);
            prop_assert!((ph1 * ph2 - ph).norm() < 1e-12);
        }

        #[test]
        fn uncertainty_saturated(h in 0.001..1.0f64, s0 in 0.1..10.0f64) {
            let s = CoherentParams::standard(PhysicalConstants::new(h, 1.0).unwrap(), s0, 1.0, 1.0).unwrap();
            let (_, sq, _, sp) = s.moments();
            prop_assert!((sq * sp - h / 2.0).abs() <= 4.0 * f64::EPSILON * h);
        }
    }
}
