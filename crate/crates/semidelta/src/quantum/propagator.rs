//! Exact coherent-state evolution under the point interaction, split into
//! a free part, a reflected part and small remainders.

use super::ktransform::KTransform;
use super::spectral::{half_line, DeltaCoupling};
use crate::error::{Error, Result};
use crate::numerics::{
    adaptive_integral_breaks, erfc_real, gaussian_half_line, heaviside, par_map, sgn, QuadratureSpec,
    WaveFunctionGrid, XGrid,
};
use crate::states::{covering_grid, CoherentParams, GridOptions};
use num_complex::Complex64;
use std::f64::consts::PI;

/// Quadrature controls for every k- and s-integral of the propagator.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PropagatorOptions {
    pub spec: QuadratureSpec,
    /// Half-width of k-windows in units of the momentum spread.
    pub n_sd: f64,
}

impl Default for PropagatorOptions {
    fn default() -> Self {
        Self {
            spec: QuadratureSpec::default(),
            n_sd: 14.0,
        }
    }
}

/// The terms of the decomposition, each sampled on the same grid.
///
/// Only one of `f_plus_t`, `f_minus_t` is active (selected by the sign of
/// qp); the other is stored as zeros.
#[derive(Debug, Clone, PartialEq)]
pub struct PropagatorPieces {
    pub free_part: WaveFunctionGrid,
    pub f_plus_t: WaveFunctionGrid,
    pub f_minus_t: WaveFunctionGrid,
    pub e1: WaveFunctionGrid,
    pub e2: WaveFunctionGrid,
    pub e_alpha: WaveFunctionGrid,
}

impl PropagatorPieces {
    pub fn assemble(&self) -> WaveFunctionGrid {
        let mut out = self.free_part.clone();
        for piece in [&self.f_plus_t, &self.f_minus_t, &self.e1, &self.e2, &self.e_alpha] {
            for (o, v) in out.values.iter_mut().zip(&piece.values) {
                *o += v;
            }
        }
        out
    }
}

pub(crate) fn require_qp(params: &CoherentParams) -> Result<()> {
    if params.q * params.p == 0.0 {
        return Err(Error::Domain(format!(
            "coherent state needs qp != 0, got q = {}, p = {}",
            params.q, params.p
        )));
    }
    Ok(())
}

/// Grid covering ψ, its free evolution to time t, and their mirror images.
pub fn evolution_grid(params: &CoherentParams, t: f64) -> Result<XGrid> {
    covering_grid(&[*params, params.evolved(t).1], &GridOptions::default())
}

/// A = ħt/(2m), the coefficient of k² in the free phase.
pub(crate) fn dispersion(params: &CoherentParams, t: f64) -> f64 {
    params.hbar() * t / (2.0 * params.mass())
}

fn chirp(a: f64, k: f64) -> Complex64 {
    Complex64::new(0.0, -a * k * k).exp()
}

/// k-window around p/ħ with a break at k = 0 when it lies inside.
pub(crate) fn centred_breaks(params: &CoherentParams, n_sd: f64) -> Vec<f64> {
    let c = params.p / params.hbar();
    let w = n_sd * params.k_scale();
    let mut b = vec![c - w, c + w];
    if c - w < 0.0 && c + w > 0.0 {
        b.insert(1, 0.0);
    }
    b
}

pub(crate) fn probes(x_max: f64) -> Vec<f64> {
    vec![0.0, 0.5 * x_max, -0.5 * x_max, x_max, -x_max]
}

pub(crate) fn phase_rate(params: &CoherentParams, x_max: f64, a: f64, k_max: f64) -> f64 {
    x_max + params.q.abs() + 2.0 * a.abs() * k_max
}

/// F±,t as a transform: (2π)^{-1/2} ∫ e^{-iAk²} e^{ikX} R±(k) ψ̂(k) dk.
pub fn reflected_transform(
    params: &CoherentParams,
    coupling: &DeltaCoupling,
    sign: f64,
    t: f64,
    x_max: f64,
    opts: &PropagatorOptions,
) -> Result<KTransform> {
    let a = dispersion(params, t);
    let breaks = centred_breaks(params, opts.n_sd);
    let k_max = breaks[0].abs().max(breaks[breaks.len() - 1].abs());
    KTransform::build(
        |k| chirp(a, k) * coupling.r(sign, k) * params.fourier(k),
        &breaks,
        phase_rate(params, x_max, a, k_max),
        &probes(x_max),
        &opts.spec,
    )
}

/// F±,t − R±(p/ħ)·(free evolution), built from (R±(k) − R±(p/ħ)) ψ̂(k) so
/// that small values keep their relative accuracy.
pub fn reflection_remainder_transform(
    params: &CoherentParams,
    coupling: &DeltaCoupling,
    sign: f64,
    t: f64,
    x_max: f64,
    opts: &PropagatorOptions,
) -> Result<KTransform> {
    let a = dispersion(params, t);
    let breaks = centred_breaks(params, opts.n_sd);
    let k_max = breaks[0].abs().max(breaks[breaks.len() - 1].abs());
    let r0 = coupling.r(sign, params.p / params.hbar());
    KTransform::build(
        |k| chirp(a, k) * (coupling.r(sign, k) - r0) * params.fourier(k),
        &breaks,
        phase_rate(params, x_max, a, k_max),
        &probes(x_max),
        &opts.spec,
    )
}

/// E2 as a transform over k > 0, to be read at X = sgn(qp)|x|.
pub fn e2_transform(
    params: &CoherentParams,
    coupling: &DeltaCoupling,
    t: f64,
    x_max: f64,
    opts: &PropagatorOptions,
) -> Result<KTransform> {
    let a = dispersion(params, t);
    let k_max = opts.n_sd * params.k_scale();
    let s = sgn(params.q * params.p);
    let sp = sgn(params.p);
    KTransform::build(
        |k| s * chirp(a, k) * (coupling.r_minus(k) - coupling.r_plus(k)) * params.fourier(-sp * k),
        &[0.0, k_max],
        phase_rate(params, x_max, a, k_max),
        &probes(x_max),
        &opts.spec,
    )
}

/// The half-line convolutions behind E1.
///
/// With f(y) = ψ(εy), ε = −sgn q, and the free kernel
/// P(Y) = √(π/(iA)) e^{iY²/(4A)}, returns Q(Z) − Q̃(Z) where
/// Q(Z) = ∫₀^∞ f(y) P(Z + y) dy and Q̃(Z) = ∫₀^∞ f(y) P(Z − y) dy.
struct HalfLineKernel {
    params: CoherentParams,
    eps: f64,
    a: f64,
}

impl HalfLineKernel {
    fn difference(&self, z: f64) -> Complex64 {
        let p = &self.params;
        if self.a == 0.0 {
            let f = |y: f64| p.eval(self.eps * y);
            return 2.0 * PI * (heaviside(-z) * f(-z) - heaviside(z) * f(z));
        }
        let (h, q, mom, eps, a) = (p.hbar(), p.q, p.p, self.eps, self.a);
        let i = Complex64::i();
        let rate = p.rate();
        let quad = rate - i / (4.0 * a);
        let lin = 2.0 * rate * eps * q + i * (eps * mom / h);
        let c = -rate * q * q - i * (mom * q / h) + i * (z * z / (4.0 * a));
        let shift = i * (z / (2.0 * a));
        let pref = p.amplitude() * (PI / (i * a)).sqrt();
        pref * (gaussian_half_line(quad, lin + shift, c) - gaussian_half_line(quad, lin - shift, c))
    }
}

/// E1 at one point, from the exponential-kernel form
/// E1(x) = −(1/(2π|B|)) ∫₀^∞ e^{−s/|B|} [Q − Q̃](|x| + sgn(α) s) ds,
/// B = ħ²/(mα).
pub fn e1_value(
    params: &CoherentParams,
    coupling: &DeltaCoupling,
    t: f64,
    x: f64,
    spec: &QuadratureSpec,
) -> Result<Complex64> {
    let b = coupling.length();
    let scale = b.abs();
    let dir = sgn(b);
    let upper = 40.0 * scale;
    let ax = x.abs();
    let mut breaks = vec![0.0, upper];
    if dir < 0.0 && ax > 0.0 && ax < upper {
        breaks.insert(1, ax);
    }
    let kernel = HalfLineKernel {
        params: *params,
        eps: -sgn(params.q),
        a: dispersion(params, t),
    };
    let r = adaptive_integral_breaks(
        |s| (-s / scale).exp() * kernel.difference(ax + dir * s),
        &breaks,
        spec,
    )?;
    Ok(-r.value / (2.0 * PI * scale))
}

fn zeros_like(grid: &XGrid) -> WaveFunctionGrid {
    WaveFunctionGrid {
        xs: grid.xs.clone(),
        values: vec![Complex64::new(0.0, 0.0); grid.len()],
        weights: grid.weights.clone(),
    }
}

fn on_grid(grid: &XGrid, values: Vec<Complex64>) -> WaveFunctionGrid {
    WaveFunctionGrid {
        xs: grid.xs.clone(),
        values,
        weights: grid.weights.clone(),
    }
}

/// E1 on every node of `grid`.
pub fn e1_on_grid(
    params: &CoherentParams,
    coupling: &DeltaCoupling,
    t: f64,
    grid: &XGrid,
    spec: &QuadratureSpec,
) -> Result<WaveFunctionGrid> {
    // E1 depends on |x| only
    let per_side = grid.len() / 2;
    let half: Vec<f64> = grid.xs[per_side..].to_vec();
    let vals = par_map(&half, |x| e1_value(params, coupling, t, x, spec));
    let vals: Vec<Complex64> = vals.into_iter().collect::<Result<_>>()?;
    let values = (0..grid.len())
        .map(|j| vals[(j as isize - per_side as isize).unsigned_abs()])
        .collect();
    Ok(on_grid(grid, values))
}

/// e^{−itλ_α/ħ} P_α ψ on the grid; zero for a repulsive interaction.
pub fn bound_part(params: &CoherentParams, coupling: &DeltaCoupling, t: f64, grid: &XGrid) -> Result<WaveFunctionGrid> {
    match coupling.bound_state() {
        None => Ok(zeros_like(grid)),
        Some(b) => {
            let c = b.overlap(params)? * Complex64::new(0.0, -t * b.lambda_alpha / params.hbar()).exp();
            Ok(grid.sample(|x| c * b.eval(x)))
        }
    }
}

/// Every term of the decomposition on `grid`.
pub fn propagator_pieces(
    params: &CoherentParams,
    t: f64,
    coupling: &DeltaCoupling,
    grid: &XGrid,
    opts: &PropagatorOptions,
) -> Result<PropagatorPieces> {
    require_qp(params)?;
    let x_max = grid.half_width();
    let qp = params.q * params.p;
    let branch = sgn(qp);
    let reflected = reflected_transform(params, coupling, branch, t, x_max, opts)?;
    let folded = on_grid(grid, reflected.on_folded(grid, -sgn(params.q)));
    let (f_plus_t, f_minus_t) = if qp > 0.0 {
        (folded, zeros_like(grid))
    } else {
        (zeros_like(grid), folded)
    };
    let e2 = e2_transform(params, coupling, t, x_max, opts)?;
    Ok(PropagatorPieces {
        free_part: grid.sample(|x| params.eval_free(t, x)),
        f_plus_t,
        f_minus_t,
        e1: e1_on_grid(params, coupling, t, grid, &opts.spec)?,
        e2: on_grid(grid, e2.on_folded(grid, branch)),
        e_alpha: bound_part(params, coupling, t, grid)?,
    })
}

/// e^{−itH_α/ħ}ψ on `grid`, assembled from the decomposition.
pub fn quantum_evolve(
    params: &CoherentParams,
    t: f64,
    coupling: &DeltaCoupling,
    grid: &XGrid,
    opts: &PropagatorOptions,
) -> Result<WaveFunctionGrid> {
    Ok(propagator_pieces(params, t, coupling, grid, opts)?.assemble())
}

/// ⟨φ⁺_k, ψ⟩ = ψ̂(k) + conj(R₊(k)) (2π)^{-1/2} ∫ e^{i|k||y|} ψ(y) dy.
pub fn distorted_transform(params: &CoherentParams, coupling: &DeltaCoupling, k: f64) -> Complex64 {
    let kappa = Complex64::new(k.abs(), 0.0);
    let tail = half_line(params, 1.0, kappa) + half_line(params, -1.0, kappa);
    params.fourier(k) + coupling.r_plus(k).conj() * tail / (2.0 * PI).sqrt()
}

/// Evolution straight from the eigenfunction expansion; cross-check only.
pub fn spectral_evolve(
    params: &CoherentParams,
    t: f64,
    coupling: &DeltaCoupling,
    grid: &XGrid,
    opts: &PropagatorOptions,
) -> Result<WaveFunctionGrid> {
    let a = dispersion(params, t);
    let k_max = params.p.abs() / params.hbar() + opts.n_sd * params.k_scale();
    let x_max = grid.half_width();
    let omega = phase_rate(params, x_max, a, k_max);
    let pr = probes(x_max);
    let spec = &opts.spec;
    let weight = |k: f64| chirp(a, k) * distorted_transform(params, coupling, k);
    let direct = KTransform::build(weight, &[-k_max, 0.0, k_max], omega, &pr, spec)?;
    let outgoing = KTransform::build(|k| coupling.r_plus(k) * weight(k), &[0.0, k_max], omega, &pr, spec)?;
    let incoming = KTransform::build(|k| coupling.r_plus(k) * weight(k), &[-k_max, 0.0], omega, &pr, spec)?;
    let d = direct.on_uniform(grid.xs[0], grid.spacing(), grid.len());
    let o = outgoing.on_folded(grid, -1.0);
    let i = incoming.on_folded(grid, 1.0);
    let bound = bound_part(params, coupling, t, grid)?;
    let values = (0..grid.len()).map(|j| d[j] + o[j] + i[j] + bound.values[j]).collect();
    Ok(on_grid(grid, values))
}

/// Υ_t: free evolution plus the reflected free packet scaled by R±(p/ħ).
pub fn upsilon_approximant(
    params: &CoherentParams,
    t: f64,
    coupling: &DeltaCoupling,
    grid: &XGrid,
) -> Result<WaveFunctionGrid> {
    require_qp(params)?;
    let r = coupling.r(sgn(params.q * params.p), params.p / params.hbar());
    let fold = -sgn(params.q);
    Ok(grid.sample(|x| params.eval_free(t, x) + r * params.eval_free(t, fold * x.abs())))
}

/// ‖ψ(sgn(q)|·|) − (ψ + ψ(−·))‖ and ‖ψ(−sgn(q)|·|)‖.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ReflectedGaps {
    pub gap_even: f64,
    pub gap_mirror: f64,
}

/// Both gaps by adaptive quadrature of the literal integrands over x > 0
/// and x < 0; `spec` should carry a negligible absolute floor so tiny gaps
/// keep their relative accuracy.
pub fn reflected_state_estimates(params: &CoherentParams, spec: &QuadratureSpec) -> Result<ReflectedGaps> {
    if params.q == 0.0 {
        return Err(Error::Domain("reflected-state gaps need q != 0".into()));
    }
    let s = sgn(params.q);
    let reach = params.q.abs() + 14.0 * params.width();
    let even = |x: f64| (params.eval(s * x.abs()) - params.eval(x)) - params.eval(-x);
    let mirror = |x: f64| params.eval(-s * x.abs());
    let norm = |f: &dyn Fn(f64) -> Complex64| -> Result<f64> {
        let both = |y: f64| Complex64::new(f(y).norm_sqr() + f(-y).norm_sqr(), 0.0);
        Ok(adaptive_integral_breaks(both, &[0.0, reach], spec)?.value.re.sqrt())
    };
    Ok(ReflectedGaps {
        gap_even: norm(&even)?,
        gap_mirror: norm(&mirror)?,
    })
}

/// Closed value shared by both gaps: √erfc(|q| / (√(2ħ)|σ|)).
pub fn reflected_gap_closed(params: &CoherentParams) -> f64 {
    erfc_real(params.q.abs() / ((2.0 * params.hbar()).sqrt() * params.sigma.norm())).sqrt()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numerics::l2_distance;
    use crate::states::PhysicalConstants;

    fn setup(h: f64, q: f64, p: f64, alpha: f64) -> (CoherentParams, DeltaCoupling) {
        let c = PhysicalConstants::new(h, 1.0).unwrap();
        (
            CoherentParams::standard(c, 1.0, q, p).unwrap(),
            DeltaCoupling::new(alpha, c).unwrap(),
        )
    }

    #[test]
    fn zero_time_reproduces_state() {
        let (s, c) = setup(0.1, -2.0, 1.0, 1.0);
        let grid = evolution_grid(&s, 0.0).unwrap();
        let out = quantum_evolve(&s, 0.0, &c, &grid, &PropagatorOptions::default()).unwrap();
        let want = grid.sample(|x| s.eval(x));
        assert!(l2_distance(&out, &want).unwrap() < 1e-8);
    }

    #[test]
    fn rejects_vanishing_qp() {
        let (s, c) = setup(0.1, 0.0, 1.0, 1.0);
        let grid = XGrid::symmetric(5.0, 0.05).unwrap();
        assert!(matches!(
            quantum_evolve(&s, 1.0, &c, &grid, &PropagatorOptions::default()),
            Err(Error::Domain(_))
        ));
    }

    #[test]
    fn decomposition_matches_spectral_expansion() {
        // |q| large enough that ψ(0) is negligible: the spectral path
        // truncates an algebraic k-tail proportional to ψ(0)
        for &(q, p, alpha, t) in &[(-2.0, 1.0, 1.0, 3.0), (2.5, 1.2, -0.6, 2.0), (-2.2, -1.0, 0.5, 1.5)] {
            let (s, c) = setup(0.1, q, p, alpha);
            let grid = evolution_grid(&s, t).unwrap();
            let opts = PropagatorOptions::default();
            let a = quantum_evolve(&s, t, &c, &grid, &opts).unwrap();
            let wide = PropagatorOptions { n_sd: 40.0, ..opts };
            let b = spectral_evolve(&s, t, &c, &grid, &wide).unwrap();
            let d = l2_distance(&a, &b).unwrap();
            assert!(d < 1e-7, "({q}, {p}, {alpha}, {t}): {d:e}");
        }
    }

    #[test]
    fn upsilon_is_free_when_reflection_vanishes() {
        let (s, c) = setup(0.1, -2.0, 1.0, 1e-4);
        let grid = evolution_grid(&s, 1.0).unwrap();
        let u = upsilon_approximant(&s, 1.0, &c, &grid).unwrap();
        let f = grid.sample(|x| s.eval_free(1.0, x));
        let r = c.r_minus(s.p / s.hbar()).norm();
        assert!(l2_distance(&u, &f).unwrap() <= 2.0 * r);
    }

    fn fine() -> QuadratureSpec {
        QuadratureSpec {
            relative_tol: 1e-12,
            absolute_floor: f64::MIN_POSITIVE,
            ..QuadratureSpec::default()
        }
    }

    #[test]
    fn gaps_agree_with_closed_form() {
        for &(h, q) in &[(0.1, -1.0), (0.05, 2.0), (0.2, -0.4)] {
            let (s, _) = setup(h, q, 1.0, 1.0);
            let g = reflected_state_estimates(&s, &fine()).unwrap();
            let closed = reflected_gap_closed(&s);
            assert!((g.gap_even - closed).abs() < 1e-9 * closed);
            assert!((g.gap_mirror.powi(2) - closed.powi(2)).abs() < 1e-9 * closed.powi(2));
            let bound = (-s.q * s.q / (4.0 * s.hbar() * s.sigma.norm_sqr())).exp();
            assert!(g.gap_even <= bound && g.gap_mirror <= bound);
        }
    }

    #[test]
    fn gap_mirror_on_grid_matches_closed_form() {
        // grid fine enough for the steep one-sided tail
        let (s, _) = setup(0.1, -1.0, 1.0, 1.0);
        let grid = XGrid::symmetric(6.0, 2e-4).unwrap();
        let mirror = grid.sample(|x| s.eval(-sgn(s.q) * x.abs()));
        let closed = reflected_gap_closed(&s);
        assert!((mirror.norm().powi(2) - closed.powi(2)).abs() < 1e-9);
    }

    #[test]
    fn far_packet_gaps_are_negligible() {
        let (s, _) = setup(0.05, -4.0, 1.0, 1.0);
        let g = reflected_state_estimates(&s, &fine()).unwrap();
        assert!(g.gap_even < 1e-30 && g.gap_mirror < 1e-30);
    }
}
