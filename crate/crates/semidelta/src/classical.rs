//! Free and singular classical transport on phase space, the singular
//! resolvent, classical wave and scattering operators, and the
//! quasi-classical wave-function approximant built from them.

use crate::error::{Error, Result};
use crate::numerics::{
    adaptive_integral_breaks, heaviside, par_map, sgn, QuadratureSpec, WaveFunctionGrid, XGrid,
};
use crate::states::{CoherentParams, PhaseSpaceKernel};
use num_complex::Complex64;
use std::cell::RefCell;

/// A complex function on phase space.
pub trait PhaseSpaceFn: Send + Sync {
    fn eval(&self, q: f64, p: f64) -> Complex64;

    /// f(q, p) + f(-q, -p).
    fn even(&self, q: f64, p: f64) -> Complex64 {
        self.eval(q, p) + self.eval(-q, -p)
    }
}

impl<T: PhaseSpaceFn + ?Sized> PhaseSpaceFn for &T {
    fn eval(&self, q: f64, p: f64) -> Complex64 {
        (**self).eval(q, p)
    }
}

impl<T: PhaseSpaceFn + ?Sized> PhaseSpaceFn for Box<T> {
    fn eval(&self, q: f64, p: f64) -> Complex64 {
        (**self).eval(q, p)
    }
}

/// Adapter turning a closure into a [`PhaseSpaceFn`].
#[derive(Clone, Copy)]
pub struct PhaseFn<F>(pub F);

impl<F: Fn(f64, f64) -> Complex64 + Send + Sync> PhaseSpaceFn for PhaseFn<F> {
    fn eval(&self, q: f64, p: f64) -> Complex64 {
        (self.0)(q, p)
    }
}

impl PhaseSpaceFn for PhaseSpaceKernel {
    fn eval(&self, q: f64, p: f64) -> Complex64 {
        PhaseSpaceKernel::eval(self, q, p)
    }
}

/// Point interaction strength on the classical side; `Infinite` is the
/// completely reflecting wall.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum BetaCoupling {
    Finite(f64),
    Infinite,
}

impl BetaCoupling {
    pub fn finite(beta: f64) -> Result<Self> {
        if beta == 0.0 || beta.is_nan() {
            return Err(Error::Domain("beta must be nonzero (beta = 0 is free transport)".into()));
        }
        if beta.is_infinite() {
            return Ok(Self::Infinite);
        }
        Ok(Self::Finite(beta))
    }

    /// 1/β, zero for the wall.
    pub fn inverse(&self) -> f64 {
        match self {
            Self::Finite(b) => 1.0 / b,
            Self::Infinite => 0.0,
        }
    }

    /// 1 + s·2i|p|/(mβ).
    fn divisor(&self, s: f64, p: f64, mass: f64) -> Complex64 {
        Complex64::new(1.0, s * 2.0 * p.abs() * self.inverse() / mass)
    }
}

/// Value plus a flag raised on the measure-zero discontinuity set.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Evaluation {
    pub value: Complex64,
    pub on_boundary: bool,
}

/// (q, p) ↦ f(q - pt/m, p).
#[derive(Clone, Copy)]
pub struct FreeTransport<F> {
    pub f: F,
    pub t: f64,
    pub mass: f64,
}

pub fn free_transport<F: PhaseSpaceFn>(f: F, t: f64, mass: f64) -> FreeTransport<F> {
    FreeTransport { f, t, mass }
}

impl<F: PhaseSpaceFn> PhaseSpaceFn for FreeTransport<F> {
    fn eval(&self, q: f64, p: f64) -> Complex64 {
        self.f.eval(q - p * self.t / self.mass, p)
    }
}

/// The singular transport group e^{-itL_β} applied to f.
#[derive(Clone, Copy)]
pub struct SingularTransport<F> {
    pub f: F,
    pub t: f64,
    pub beta: BetaCoupling,
    pub mass: f64,
}

pub fn singular_transport<F: PhaseSpaceFn>(f: F, t: f64, beta: BetaCoupling, mass: f64) -> SingularTransport<F> {
    SingularTransport { f, t, beta, mass }
}

impl<F: PhaseSpaceFn> SingularTransport<F> {
    pub fn evaluate(&self, q: f64, p: f64) -> Evaluation {
        let t = self.t;
        let shift = p * t / self.mass;
        let free = self.f.eval(q - shift, p);
        let reach = shift.abs() - q.abs();
        let on_boundary = t * q * p == 0.0 || reach == 0.0;
        if heaviside(t * q * p) * heaviside(reach) == 0.0 {
            return Evaluation { value: free, on_boundary };
        }
        let value = free - self.f.even(q - shift, p) / self.beta.divisor(sgn(t), p, self.mass);
        Evaluation { value, on_boundary }
    }
}

impl<F: PhaseSpaceFn> PhaseSpaceFn for SingularTransport<F> {
    fn eval(&self, q: f64, p: f64) -> Complex64 {
        self.evaluate(q, p).value
    }
}

/// Asymptotic direction of a wave operator.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Sign {
    Plus,
    Minus,
}

impl Sign {
    pub fn value(self) -> f64 {
        match self {
            Sign::Plus => 1.0,
            Sign::Minus => -1.0,
        }
    }
}

/// W±_β f, or the reverse operator W̆±_β f when `reverse` is set.
#[derive(Clone, Copy)]
pub struct WaveOperator<F> {
    pub f: F,
    pub sign: Sign,
    pub beta: BetaCoupling,
    pub mass: f64,
    pub reverse: bool,
}

pub fn classical_wave_operator<F: PhaseSpaceFn>(f: F, sign: Sign, beta: BetaCoupling, mass: f64) -> WaveOperator<F> {
    WaveOperator {
        f,
        sign,
        beta,
        mass,
        reverse: false,
    }
}

pub fn classical_wave_operator_reverse<F: PhaseSpaceFn>(
    f: F,
    sign: Sign,
    beta: BetaCoupling,
    mass: f64,
) -> WaveOperator<F> {
    WaveOperator {
        f,
        sign,
        beta,
        mass,
        reverse: true,
    }
}

impl<F: PhaseSpaceFn> WaveOperator<F> {
    pub fn evaluate(&self, q: f64, p: f64) -> Evaluation {
        let s = self.sign.value();
        let value = self.f.eval(q, p);
        let on_boundary = q * p == 0.0;
        if heaviside(-s * q * p) == 0.0 {
            return Evaluation { value, on_boundary };
        }
        let d = if self.reverse { -s } else { s };
        Evaluation {
            value: value - self.f.even(q, p) / self.beta.divisor(d, p, self.mass),
            on_boundary,
        }
    }
}

impl<F: PhaseSpaceFn> PhaseSpaceFn for WaveOperator<F> {
    fn eval(&self, q: f64, p: f64) -> Complex64 {
        self.evaluate(q, p).value
    }
}

/// S^cl_β f = f - f_ev/(1 - 2i|p|/(mβ)).
#[derive(Clone, Copy)]
pub struct ClassicalScattering<F> {
    pub f: F,
    pub beta: BetaCoupling,
    pub mass: f64,
}

pub fn classical_scattering<F: PhaseSpaceFn>(f: F, beta: BetaCoupling, mass: f64) -> ClassicalScattering<F> {
    ClassicalScattering { f, beta, mass }
}

impl<F: PhaseSpaceFn> PhaseSpaceFn for ClassicalScattering<F> {
    fn eval(&self, q: f64, p: f64) -> Complex64 {
        self.f.eval(q, p) - self.f.even(q, p) / self.beta.divisor(-1.0, p, self.mass)
    }
}

/// A point z off the real axis.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ResolventPoint {
    z: Complex64,
}

impl ResolventPoint {
    pub fn new(z: Complex64) -> Result<Self> {
        if z.im == 0.0 || !z.im.is_finite() || !z.re.is_finite() {
            return Err(Error::Domain(format!("resolvent point must satisfy Im z != 0, got {z}")));
        }
        Ok(Self { z })
    }

    pub fn z(&self) -> Complex64 {
        self.z
    }
}

/// Kernel g_z(q, p) of the free resolvent.
pub fn free_resolvent_kernel(q: f64, p: f64, z: ResolventPoint, mass: f64) -> Result<Complex64> {
    if p == 0.0 {
        return Err(Error::Singular("free resolvent kernel at p = 0".into()));
    }
    let zi = z.z.im;
    if heaviside(q * p * zi) == 0.0 {
        return Ok(Complex64::new(0.0, 0.0));
    }
    let i = Complex64::i();
    Ok(sgn(zi) * (i * mass / p.abs()) * (i * mass * z.z * q / p).exp())
}

/// (R⁰_z f)(q, p) = ∫ g_z(q - q', p) f(q', p) dq'.
///
/// `window` bounds the q-support of f; the kernel is one-sided so only the
/// part of the window on the active side of q contributes.
pub fn free_resolvent<F: PhaseSpaceFn>(
    f: &F,
    z: ResolventPoint,
    mass: f64,
    q: f64,
    p: f64,
    window: (f64, f64),
    spec: &QuadratureSpec,
) -> Result<Complex64> {
    if p == 0.0 {
        return Err(Error::Singular("free resolvent at p = 0".into()));
    }
    let decay = mass * z.z.im.abs() / p.abs();
    let reach = 45.0 / decay;
    let (lo, hi) = if p * z.z.im > 0.0 {
        (window.0.max(q - reach), window.1.min(q))
    } else {
        (window.0.max(q), window.1.min(q + reach))
    };
    if !(hi > lo) {
        return Ok(Complex64::new(0.0, 0.0));
    }
    let pieces = 8;
    let mut breaks: Vec<f64> = (0..=pieces).map(|j| lo + (hi - lo) * j as f64 / pieces as f64).collect();
    // outputs of the singular resolvent jump at q = 0
    if lo < 0.0 && hi > 0.0 {
        breaks.push(0.0);
        breaks.sort_by(|a, b| a.partial_cmp(b).expect("finite breakpoints"));
    }
    let integrand = |qp: f64| -> Complex64 {
        let g = free_resolvent_kernel(q - qp, p, z, mass).unwrap_or_default();
        g * f.eval(qp, p)
    };
    Ok(adaptive_integral_breaks(integrand, &breaks, spec)?.value)
}

/// (R^β_z f)(q, p): the free resolvent plus the boundary correction
/// g_z(q,p) Π[γR⁰_z f](p) / m^β_z(p).
#[allow(clippy::too_many_arguments)]
pub fn apply_resolvent_beta<F: PhaseSpaceFn>(
    f: &F,
    z: ResolventPoint,
    beta: BetaCoupling,
    mass: f64,
    q: f64,
    p: f64,
    window: (f64, f64),
    spec: &QuadratureSpec,
) -> Result<Complex64> {
    let multiplier = Complex64::new(beta.inverse(), -sgn(z.z.im) * mass / (2.0 * p.abs()));
    if multiplier.norm() < 1e-14 {
        return Err(Error::Singular("resolvent multiplier vanishes".into()));
    }
    let bulk = free_resolvent(f, z, mass, q, p, window, spec)?;
    let trace_plus = free_resolvent(f, z, mass, 0.0, p, window, spec)?;
    let trace_minus = free_resolvent(f, z, mass, 0.0, -p, window, spec)?;
    let projected = 0.5 * (trace_plus + trace_minus);
    Ok(bulk + free_resolvent_kernel(q, p, z, mass)? * projected / multiplier)
}

/// ‖f‖ on a phase-space box, iterated Gauss-Legendre with breakpoints.
///
/// `q_breaks(p)` lists the interior q-discontinuities at momentum p.
pub fn phase_space_norm<F, B>(
    f: &F,
    q_range: (f64, f64),
    p_range: (f64, f64),
    q_breaks: B,
    spec: &QuadratureSpec,
) -> Result<f64>
where
    F: PhaseSpaceFn,
    B: Fn(f64) -> Vec<f64>,
{
    let failure: RefCell<Option<Error>> = RefCell::new(None);
    let inner = |p: f64| -> Complex64 {
        let mut breaks = vec![q_range.0, q_range.1];
        breaks.extend(q_breaks(p).into_iter().filter(|b| *b > q_range.0 && *b < q_range.1));
        breaks.sort_by(|a, b| a.partial_cmp(b).expect("finite breakpoints"));
        breaks.dedup();
        match adaptive_integral_breaks(|q| Complex64::new(f.eval(q, p).norm_sqr(), 0.0), &breaks, spec) {
            Ok(r) => r.value,
            Err(e) => {
                failure.borrow_mut().get_or_insert(e);
                Complex64::new(0.0, 0.0)
            }
        }
    };
    let mut p_breaks = vec![p_range.0, p_range.1];
    if p_range.0 < 0.0 && p_range.1 > 0.0 {
        p_breaks.insert(1, 0.0);
    }
    let total = adaptive_integral_breaks(inner, &p_breaks, spec)?;
    if let Some(e) = failure.into_inner() {
        return Err(e);
    }
    Ok(total.value.re.max(0.0).sqrt())
}

fn require_standard(params: &CoherentParams) -> Result<()> {
    if params.q * params.p == 0.0 {
        return Err(Error::Domain("approximant needs qp != 0".into()));
    }
    let standard = Complex64::new(1.0 / params.sigma0, 0.0);
    if (params.sigma_breve - standard).norm() > 1e-12 || (params.sigma.im).abs() > 0.0 {
        return Err(Error::Domain("approximant is defined for the standard family".into()));
    }
    Ok(())
}

/// x ↦ e^{iA_t/ħ}(e^{itL_β} φ_{σ_t,x})(ξ) on `grid`, for the standard family.
pub fn classical_approximant(
    params: &CoherentParams,
    t: f64,
    beta: BetaCoupling,
    grid: &XGrid,
) -> Result<WaveFunctionGrid> {
    require_standard(params)?;
    let evolved = params.free_evolve(t);
    let phase = Complex64::new(0.0, evolved.action_phase / params.hbar()).exp();
    let (c, s0, m, q, p) = (params.constants, params.sigma0, params.mass(), params.q, params.p);
    let values = par_map(&grid.xs, |x| {
        let kernel = PhaseSpaceKernel::new(c, s0, evolved.sigma_t, x);
        phase * singular_transport(kernel, -t, beta, m).eval(q, p)
    });
    WaveFunctionGrid::new(grid.xs.clone(), values, grid.weights.clone())
}

/// Quasi-classical approximant with β = 2α/ħ.
pub fn quasiclassical_approximant(
    params: &CoherentParams,
    t: f64,
    alpha: f64,
    grid: &XGrid,
) -> Result<WaveFunctionGrid> {
    let beta = BetaCoupling::finite(2.0 * alpha / params.hbar())?;
    classical_approximant(params, t, beta, grid)
}

/// Approximant driven by the completely reflecting wall.
pub fn dirichlet_approximant(params: &CoherentParams, t: f64, grid: &XGrid) -> Result<WaveFunctionGrid> {
    classical_approximant(params, t, BetaCoupling::Infinite, grid)
}

/// x ↦ (W±_β φ_{σ₀,x})(ξ) on `grid`.
pub fn wave_operator_approximant(
    params: &CoherentParams,
    sign: Sign,
    beta: BetaCoupling,
    grid: &XGrid,
) -> Result<WaveFunctionGrid> {
    require_standard(params)?;
    let (c, s0, m, q, p) = (params.constants, params.sigma0, params.mass(), params.q, params.p);
    let values = par_map(&grid.xs, |x| {
        let kernel = PhaseSpaceKernel::new(c, s0, Complex64::new(s0, 0.0), x);
        classical_wave_operator(kernel, sign, beta, m).eval(q, p)
    });
    WaveFunctionGrid::new(grid.xs.clone(), values, grid.weights.clone())
}

/// x ↦ (S^cl_β φ_{σ₀,x})(ξ) on `grid`.
pub fn scattering_approximant(params: &CoherentParams, beta: BetaCoupling, grid: &XGrid) -> Result<WaveFunctionGrid> {
    require_standard(params)?;
    let (c, s0, m, q, p) = (params.constants, params.sigma0, params.mass(), params.q, params.p);
    let values = par_map(&grid.xs, |x| {
        let kernel = PhaseSpaceKernel::new(c, s0, Complex64::new(s0, 0.0), x);
        classical_scattering(kernel, beta, m).eval(q, p)
    });
    WaveFunctionGrid::new(grid.xs.clone(), values, grid.weights.clone())
}

/// Closed value of ‖e^{itL_β}φ − e^{itL_∞}φ‖ for the standard family.
pub fn dirichlet_classical_gap(params: &CoherentParams, t: f64, beta: BetaCoupling) -> f64 {
    let (q, p, m, h, s0) = (params.q, params.p, params.mass(), params.hbar(), params.sigma0);
    let active = -t * q * p > 0.0 && (p * t / m).abs() > q.abs();
    if !active {
        return 0.0;
    }
    let x2 = (2.0 * p * beta.inverse() / m).powi(2);
    let overlap = (-q * q / (2.0 * h * s0 * s0)).exp() * (-2.0 * s0 * s0 * p * p / h).exp();
    (2.0 * x2 / (1.0 + x2) * (1.0 + overlap)).sqrt()
}
