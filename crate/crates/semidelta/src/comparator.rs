//! Error bounds of the semiclassical approximations: right-hand sides,
//! measured left-hand sides, constant fitting and scaling fits.

use crate::classical::{
    dirichlet_approximant, quasiclassical_approximant, scattering_approximant, wave_operator_approximant,
    BetaCoupling, Sign,
};
use crate::error::{Error, Result};
use crate::oracle::{crank_nicolson_delta_with, OracleConfig};
use crate::numerics::{adaptive_integral_real, l2_distance, par_map, QuadratureSpec, WaveFunctionGrid, XGrid};
use crate::quantum::{
    e1_on_grid, e2_transform, e3_transform, evolution_grid, quantum_evolve, quantum_scattering,
    quantum_wave_operator, reflected_state_estimates, wave_operator_grid, DeltaCoupling, PropagatorOptions,
};
use crate::states::{CoherentParams, PhysicalConstants};
use rand::Rng;

pub const DEFAULT_LAMBDA: f64 = 0.1;
pub const DEFAULT_C0: f64 = 2.5;
/// Fewest usable samples accepted by [`scaling_fit`].
pub const MIN_FIT_SAMPLES: usize = 4;

/// Exponent parameters of the time-dependent bound; λ₁ = (3/2)λ₂ = λ by default.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Lambdas {
    pub lambda1: f64,
    pub lambda2: f64,
}

impl Lambdas {
    pub fn from_lambda(lambda: f64) -> Self {
        Self {
            lambda1: lambda,
            lambda2: lambda / 1.5,
        }
    }
}

impl Default for Lambdas {
    fn default() -> Self {
        Self::from_lambda(DEFAULT_LAMBDA)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RhsTerm {
    pub name: &'static str,
    pub value: f64,
}

/// Named right-hand-side terms and the constant multiplying their sum.
#[derive(Debug, Clone, PartialEq)]
pub struct Rhs {
    pub terms: Vec<RhsTerm>,
    pub scale: f64,
}

impl Rhs {
    pub fn sum(&self) -> f64 {
        self.terms.iter().map(|t| t.value).sum()
    }

    pub fn total(&self) -> f64 {
        self.scale * self.sum()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ErrorReport {
    pub lhs: f64,
    pub rhs_terms: Vec<RhsTerm>,
    pub underline_h: f64,
    pub double_underline_h: f64,
    pub fitted_c: Option<f64>,
    pub slope: Option<f64>,
}

impl ErrorReport {
    pub fn rhs_sum(&self) -> f64 {
        self.rhs_terms.iter().map(|t| t.value).sum()
    }

    /// lhs / Σ rhs, the smallest constant this point admits.
    pub fn ratio(&self) -> f64 {
        self.lhs / self.rhs_sum()
    }
}

/// Physical and state parameters of one standard-family scenario.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Scenario {
    pub hbar: f64,
    pub mass: f64,
    pub alpha: f64,
    pub sigma0: f64,
    pub q: f64,
    pub p: f64,
}

impl Scenario {
    pub fn desk() -> Self {
        Self {
            hbar: 0.1,
            mass: 1.0,
            alpha: 1.0,
            sigma0: 1.0,
            q: -2.0,
            p: 1.0,
        }
    }

    pub fn with_hbar(self, hbar: f64) -> Self {
        Self { hbar, ..self }
    }

    pub fn with_alpha(self, alpha: f64) -> Self {
        Self { alpha, ..self }
    }

    pub fn constants(&self) -> Result<PhysicalConstants> {
        PhysicalConstants::new(self.hbar, self.mass)
    }

    pub fn params(&self) -> Result<CoherentParams> {
        CoherentParams::standard(self.constants()?, self.sigma0, self.q, self.p)
    }

    pub fn coupling(&self) -> Result<DeltaCoupling> {
        DeltaCoupling::new(self.alpha, self.constants()?)
    }
}

/// t_coll = −mq/p.
pub fn collision_time(q: f64, p: f64, mass: f64) -> Result<f64> {
    if p == 0.0 {
        return Err(Error::Domain("collision time needs p != 0".into()));
    }
    Ok(-mass * q / p)
}

/// ħ/(m|α|σ₀)^{2/3}.
fn coupling_parameter(params: &CoherentParams, alpha: f64) -> f64 {
    params.hbar() / (params.mass() * alpha.abs() * params.sigma0).powf(2.0 / 3.0)
}

/// ū_h = max(ħσ₀²/q², ħ/(m|α|σ₀)^{2/3}).
pub fn underline_h(params: &CoherentParams, alpha: f64) -> f64 {
    let geometric = params.hbar() * params.sigma0.powi(2) / params.q.powi(2);
    geometric.max(coupling_parameter(params, alpha))
}

/// ū̄_h: ū_h together with ħ/(σ₀²p²).
pub fn double_underline_h(params: &CoherentParams, alpha: f64) -> f64 {
    let momentum = params.hbar() / (params.sigma0.powi(2) * params.p.powi(2));
    underline_h(params, alpha).max(momentum)
}

/// |t − t_coll| ≥ c₀|t_coll|√((3/2 − λ) ū_h |ln ū_h|).
pub fn collision_exclusion(params: &CoherentParams, t: f64, alpha: f64, lambda: f64, c0: f64) -> Result<bool> {
    let u = underline_h(params, alpha);
    if !(u > 0.0 && u < 1.0) {
        return Err(Error::Regime(format!("small parameter {u} outside (0, 1)")));
    }
    let tc = collision_time(params.q, params.p, params.mass())?;
    let margin = c0 * tc.abs() * ((1.5 - lambda) * u * u.ln().abs()).sqrt();
    Ok((t - tc).abs() >= margin)
}

/// The power and stretched-exponential pair shared by every bound, for a
/// small parameter `u` and exponents `power`, `lambda`.
fn power_pair(u: f64, power: f64, lambda: f64) -> (f64, f64) {
    (u.powf(power), (-0.5 * (1.0 / u).powf(2.0 * lambda)).exp())
}

/// The seven terms of the time-dependent bound, evaluated as printed for
/// the standard family.
pub fn theorem1_rhs(params: &CoherentParams, t: f64, alpha: f64, lambdas: Lambdas, c: f64) -> Result<Rhs> {
    if !(lambdas.lambda1 > 0.0 && lambdas.lambda2 > 0.0) {
        return Err(Error::Domain("lambda exponents must be positive".into()));
    }
    let (h, m, s0, q, p) = (params.hbar(), params.mass(), params.sigma0, params.q, params.p);
    let u = coupling_parameter(params, alpha);
    let (pow1, str1) = power_pair(u, 1.5 - lambdas.lambda1, lambdas.lambda1);
    let (pow2, str2) = power_pair(u, 1.5 - 1.5 * lambdas.lambda2, lambdas.lambda2);
    let momentum = (-s0 * p * p / h).exp();
    let late = params.evolved(t).1;
    let collision = (-late.q.powi(2) / (4.0 * h * late.sigma.norm_sqr())).exp();
    Ok(Rhs {
        terms: vec![
            RhsTerm { name: "power", value: pow1 },
            RhsTerm { name: "stretched", value: str1 },
            RhsTerm { name: "momentum_power", value: momentum * pow2 },
            RhsTerm { name: "momentum_stretched", value: momentum * str2 },
            RhsTerm { name: "position", value: (-q * q / (8.0 * h * s0 * s0)).exp() },
            RhsTerm { name: "binding", value: (-m * alpha.abs() * q.abs() / (8.0 * h * h)).exp() },
            RhsTerm { name: "collision", value: collision },
        ],
        scale: c,
    })
}

/// Terms of the wave-operator bound.
pub fn wave_rhs(params: &CoherentParams, alpha: f64, lambda: f64, c: f64) -> Rhs {
    let (h, s0, q, p) = (params.hbar(), params.sigma0, params.q, params.p);
    let (pow, stretched) = power_pair(coupling_parameter(params, alpha), 1.5 - lambda, lambda);
    Rhs {
        terms: vec![
            RhsTerm { name: "power", value: pow },
            RhsTerm { name: "stretched", value: stretched },
            RhsTerm { name: "momentum", value: (-s0 * s0 * p * p / h).exp() },
            RhsTerm { name: "position_wave", value: (-q * q / (4.0 * h * s0 * s0)).exp() },
        ],
        scale: c,
    }
}

/// Terms of the scattering-operator bound.
pub fn scattering_rhs(params: &CoherentParams, alpha: f64, lambda: f64, c: f64) -> Rhs {
    let (h, m, s0, q, p) = (params.hbar(), params.mass(), params.sigma0, params.q, params.p);
    let (pow, stretched) = power_pair(coupling_parameter(params, alpha), 1.5 - lambda, lambda);
    Rhs {
        terms: vec![
            RhsTerm { name: "power", value: pow },
            RhsTerm { name: "stretched", value: stretched },
            RhsTerm { name: "momentum", value: (-s0 * s0 * p * p / h).exp() },
            RhsTerm { name: "position", value: (-q * q / (8.0 * h * s0 * s0)).exp() },
            RhsTerm { name: "binding", value: (-m * alpha.abs() * q.abs() / (8.0 * h * h)).exp() },
        ],
        scale: c,
    }
}

fn beta_for(params: &CoherentParams, coupling: &DeltaCoupling) -> Result<BetaCoupling> {
    BetaCoupling::finite(2.0 * coupling.alpha / params.hbar())
}

/// ‖e^{−itH_α/ħ}ψ − quasi-classical approximant‖.
pub fn theorem1_error(params: &CoherentParams, t: f64, coupling: &DeltaCoupling, opts: &PropagatorOptions) -> Result<f64> {
    let grid = evolution_grid(params, t)?;
    let quantum = quantum_evolve(params, t, coupling, &grid, opts)?;
    let classical = quasiclassical_approximant(params, t, coupling.alpha, &grid)?;
    l2_distance(&quantum, &classical)
}

pub fn theorem1_report(
    params: &CoherentParams,
    t: f64,
    coupling: &DeltaCoupling,
    lambdas: Lambdas,
    opts: &PropagatorOptions,
) -> Result<ErrorReport> {
    let lhs = theorem1_error(params, t, coupling, opts)?;
    Ok(report(lhs, theorem1_rhs(params, t, coupling.alpha, lambdas, 1.0)?, params, coupling.alpha))
}

fn report(lhs: f64, rhs: Rhs, params: &CoherentParams, alpha: f64) -> ErrorReport {
    ErrorReport {
        lhs,
        rhs_terms: rhs.terms,
        underline_h: underline_h(params, alpha),
        double_underline_h: double_underline_h(params, alpha),
        fitted_c: None,
        slope: None,
    }
}

/// True when the completely reflecting wall and the transmitting transport
/// disagree: (qp < 0, t > t_coll) or (qp > 0, t < t_coll).
pub fn dirichlet_regime(params: &CoherentParams, t: f64) -> Result<bool> {
    let tc = collision_time(params.q, params.p, params.mass())?;
    let qp = params.q * params.p;
    Ok((qp < 0.0 && t > tc) || (qp > 0.0 && t < tc))
}

/// ‖e^{−itH_α/ħ}ψ − wall approximant‖.
pub fn dirichlet_gap(params: &CoherentParams, t: f64, coupling: &DeltaCoupling, opts: &PropagatorOptions) -> Result<f64> {
    if !dirichlet_regime(params, t)? {
        return Err(Error::Regime("the wall gap needs the packet past the origin".into()));
    }
    let grid = evolution_grid(params, t)?;
    let quantum = quantum_evolve(params, t, coupling, &grid, opts)?;
    let wall = dirichlet_approximant(params, t, &grid)?;
    l2_distance(&quantum, &wall)
}

/// ħ|p|/(m|α|), the order of the wall gap.
pub fn dirichlet_scale(params: &CoherentParams, alpha: f64) -> f64 {
    params.hbar() * params.p.abs() / (params.mass() * alpha.abs())
}

/// ‖Ω±ψ − W±φ(ξ)‖ with its bound terms.
pub fn wave_error(
    params: &CoherentParams,
    sign: Sign,
    coupling: &DeltaCoupling,
    lambda: f64,
    opts: &PropagatorOptions,
) -> Result<ErrorReport> {
    let grid = wave_operator_grid(params)?;
    let quantum = quantum_wave_operator(params, sign.value(), coupling, &grid, opts)?;
    let classical = wave_operator_approximant(params, sign, beta_for(params, coupling)?, &grid)?;
    let lhs = l2_distance(&quantum, &classical)?;
    Ok(report(lhs, wave_rhs(params, coupling.alpha, lambda, 1.0), params, coupling.alpha))
}

/// ‖S_αψ − S^cl φ(ξ)‖ with its bound terms.
pub fn scattering_error(
    params: &CoherentParams,
    coupling: &DeltaCoupling,
    lambda: f64,
    opts: &PropagatorOptions,
) -> Result<ErrorReport> {
    let grid = wave_operator_grid(params)?;
    let quantum = quantum_scattering(params, coupling, &grid, opts)?;
    let classical = scattering_approximant(params, beta_for(params, coupling)?, &grid)?;
    let lhs = l2_distance(&quantum, &classical)?;
    Ok(report(lhs, scattering_rhs(params, coupling.alpha, lambda, 1.0), params, coupling.alpha))
}

/// Stride at which oracle nodes are compared with the propagator.
pub const ORACLE_STRIDE: usize = 5;

/// ‖quantum_evolve − finite-difference oracle‖ on every fifth oracle node.
pub fn oracle_distance(
    params: &CoherentParams,
    t: f64,
    coupling: &DeltaCoupling,
    oracle: &OracleConfig,
    opts: &PropagatorOptions,
) -> Result<f64> {
    let run = crank_nicolson_delta_with(params, t, coupling.alpha, oracle)?;
    let grid = run.state.grid().subsample(ORACLE_STRIDE)?;
    let values = run.state.values.iter().step_by(ORACLE_STRIDE).copied().collect();
    let coarse = WaveFunctionGrid::new(grid.xs.clone(), values, grid.weights.clone())?;
    let exact = quantum_evolve(params, t, coupling, &grid, opts)?;
    l2_distance(&coarse, &exact)
}

/// Least-squares line through (ln h, ln error).
#[derive(Debug, Clone, PartialEq)]
pub struct ScalingFit {
    pub slope: f64,
    pub intercept: f64,
    pub r2: f64,
    pub used: usize,
    /// Indices of samples dropped for a nonpositive or non-finite value.
    pub excluded: Vec<usize>,
}

pub fn scaling_fit(samples: &[(f64, f64)]) -> Result<ScalingFit> {
    let mut excluded = Vec::new();
    let mut pts = Vec::new();
    for (j, &(h, e)) in samples.iter().enumerate() {
        if h > 0.0 && e > 0.0 && h.is_finite() && e.is_finite() {
            pts.push((h.ln(), e.ln()));
        } else {
            excluded.push(j);
        }
    }
    if pts.len() < MIN_FIT_SAMPLES {
        return Err(Error::InsufficientSamples {
            needed: MIN_FIT_SAMPLES,
            got: pts.len(),
        });
    }
    let n = pts.len() as f64;
    let mx = pts.iter().map(|p| p.0).sum::<f64>() / n;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / n;
    let sxx: f64 = pts.iter().map(|p| (p.0 - mx).powi(2)).sum();
    let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let syy: f64 = pts.iter().map(|p| (p.1 - my).powi(2)).sum();
    if sxx == 0.0 {
        return Err(Error::Domain("scaling fit needs distinct h values".into()));
    }
    let slope = sxy / sxx;
    let r2 = if syy == 0.0 { 1.0 } else { sxy * sxy / (sxx * syy) };
    Ok(ScalingFit {
        slope,
        intercept: my - slope * mx,
        r2,
        used: pts.len(),
        excluded,
    })
}

/// Largest lhs/rhs ratio over a set of reports.
pub fn fitted_constant(reports: &[ErrorReport]) -> f64 {
    reports.iter().map(ErrorReport::ratio).fold(0.0, f64::max)
}

/// One row of a sweep.
#[derive(Debug, Clone, PartialEq)]
pub struct SweepRow {
    pub scenario: Scenario,
    pub t: Option<f64>,
    pub report: ErrorReport,
    /// Whether the row enters the slope fit.
    pub included: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepOutcome {
    pub rows: Vec<SweepRow>,
    pub fit: std::result::Result<ScalingFit, Error>,
    pub fitted_c: f64,
}

impl SweepOutcome {
    fn finish(mut rows: Vec<SweepRow>, abscissa: impl Fn(&SweepRow) -> f64) -> Self {
        let samples: Vec<(f64, f64)> = rows
            .iter()
            .filter(|r| r.included)
            .map(|r| (abscissa(r), r.report.lhs))
            .collect();
        let fit = scaling_fit(&samples);
        let reports: Vec<ErrorReport> = rows.iter().map(|r| r.report.clone()).collect();
        let fitted_c = fitted_constant(&reports);
        for r in &mut rows {
            r.report.fitted_c = Some(fitted_c);
            r.report.slope = fit.as_ref().ok().map(|f| f.slope);
        }
        Self { rows, fit, fitted_c }
    }
}

fn collect_rows(results: Vec<Result<SweepRow>>) -> Result<Vec<SweepRow>> {
    results.into_iter().collect()
}

/// Time-dependent error over an ħ sweep; rows failing the collision
/// exclusion are kept but left out of the fit against ū_h.
pub fn theorem1_sweep(
    base: &Scenario,
    hbars: &[f64],
    t: f64,
    lambda: f64,
    c0: f64,
    opts: &PropagatorOptions,
) -> Result<SweepOutcome> {
    let rows = collect_rows(par_map(hbars, |h| {
        let s = base.with_hbar(h);
        let params = s.params()?;
        let report = theorem1_report(&params, t, &s.coupling()?, Lambdas::from_lambda(lambda), opts)?;
        // outside the small-parameter regime the exclusion cannot be certified
        let included = matches!(collision_exclusion(&params, t, s.alpha, lambda, c0), Ok(true));
        Ok(SweepRow {
            scenario: s,
            t: Some(t),
            report,
            included,
        })
    }))?;
    Ok(SweepOutcome::finish(rows, |r| r.report.underline_h))
}

/// Wall gap over an ħ sweep, fitted against ħ. The reported right-hand side
/// is the lower-bound scale ħ|p|/(m|α|).
pub fn dirichlet_sweep(base: &Scenario, hbars: &[f64], t: f64, opts: &PropagatorOptions) -> Result<SweepOutcome> {
    let rows = collect_rows(par_map(hbars, |h| {
        let s = base.with_hbar(h);
        let params = s.params()?;
        let lhs = dirichlet_gap(&params, t, &s.coupling()?, opts)?;
        let rhs = Rhs {
            terms: vec![RhsTerm {
                name: "wall_scale",
                value: dirichlet_scale(&params, s.alpha),
            }],
            scale: 1.0,
        };
        Ok(SweepRow {
            scenario: s,
            t: Some(t),
            report: report(lhs, rhs, &params, s.alpha),
            included: true,
        })
    }))?;
    Ok(SweepOutcome::finish(rows, |r| r.scenario.hbar))
}

/// Which time-independent operator a sweep compares.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LongTime {
    Wave(Sign),
    Scattering,
}

/// Wave- or scattering-operator error over an ħ sweep, fitted against ū̄_h.
pub fn long_time_sweep(
    base: &Scenario,
    hbars: &[f64],
    which: LongTime,
    lambda: f64,
    opts: &PropagatorOptions,
) -> Result<SweepOutcome> {
    let rows = collect_rows(par_map(hbars, |h| {
        let s = base.with_hbar(h);
        let params = s.params()?;
        let coupling = s.coupling()?;
        let report = match which {
            LongTime::Wave(sign) => wave_error(&params, sign, &coupling, lambda, opts)?,
            LongTime::Scattering => scattering_error(&params, &coupling, lambda, opts)?,
        };
        Ok(SweepRow {
            scenario: s,
            t: None,
            report,
            included: true,
        })
    }))?;
    Ok(SweepOutcome::finish(rows, |r| r.report.double_underline_h))
}

/// One lemma-level estimate: a computed norm against its printed bound
/// without the constant.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LemmaCheck {
    pub name: &'static str,
    pub lhs: f64,
    pub bound: f64,
}

impl LemmaCheck {
    pub fn ratio(&self) -> f64 {
        self.lhs / self.bound
    }
}

fn grid_norm(values: Vec<num_complex::Complex64>, grid: &XGrid) -> Result<f64> {
    Ok(WaveFunctionGrid::new(grid.xs.clone(), values, grid.weights.clone())?.norm())
}

/// ‖(R±(k) − R±(p/ħ)) ψ̂‖ in k-space; equal to the x-space norm of
/// F±,t − R±(p/ħ)·(free evolution) at every t.
pub fn reflection_remainder_norm(
    params: &CoherentParams,
    coupling: &DeltaCoupling,
    sign: f64,
    opts: &PropagatorOptions,
) -> Result<f64> {
    let centre = params.p / params.hbar();
    let reach = opts.n_sd * params.k_scale();
    let (lo, hi) = (centre - reach, centre + reach);
    let mut breaks = vec![lo, hi];
    if lo < 0.0 && hi > 0.0 {
        breaks.insert(1, 0.0);
    }
    let r0 = coupling.r(sign, centre);
    let spec = fine(&opts.spec);
    let sq = adaptive_integral_real(|k| ((coupling.r(sign, k) - r0) * params.fourier(k)).norm_sqr(), &breaks, &spec)?;
    Ok(sq.max(0.0).sqrt())
}

fn fine(spec: &QuadratureSpec) -> QuadratureSpec {
    QuadratureSpec {
        absolute_floor: f64::MIN_POSITIVE,
        ..*spec
    }
}

/// Every lemma-level norm at one state and time, each with its bound.
pub fn lemma_checks(
    params: &CoherentParams,
    t: f64,
    coupling: &DeltaCoupling,
    lambda: f64,
    opts: &PropagatorOptions,
) -> Result<Vec<LemmaCheck>> {
    let (h, m, q, p) = (params.hbar(), params.mass(), params.q, params.p);
    let a = coupling.alpha.abs();
    let sb = params.sigma_breve.norm();
    let s = params.sigma.norm();
    let u = h * (sb / (m * a)).powf(2.0 / 3.0);
    let (pow, stretched) = power_pair(u, 1.5 - lambda, lambda);
    let (pow_e2, stretched_e2) = power_pair(u, 1.5 - 1.5 * lambda, lambda);
    let momentum = (-p * p / (h * sb * sb)).exp();
    let position = (-q * q / (4.0 * h * s * s)).exp();

    let mut out = Vec::new();
    for (name, sign) in [("reflection_plus", 1.0), ("reflection_minus", -1.0)] {
        out.push(LemmaCheck {
            name,
            lhs: reflection_remainder_norm(params, coupling, sign, opts)?,
            bound: pow + stretched,
        });
    }

    let grid = evolution_grid(params, t)?;
    let e1 = e1_on_grid(params, coupling, t, &grid, &opts.spec)?;
    out.push(LemmaCheck {
        name: "e1",
        lhs: e1.norm(),
        bound: position,
    });
    let e2 = e2_transform(params, coupling, t, grid.half_width(), opts)?;
    let branch = (q * p).signum();
    out.push(LemmaCheck {
        name: "e2",
        lhs: grid_norm(e2.on_folded(&grid, branch), &grid)?,
        bound: momentum * (pow_e2 + stretched_e2),
    });

    let wgrid = wave_operator_grid(params)?;
    for (name, sign) in [("e3_plus", 1.0), ("e3_minus", -1.0)] {
        let e3 = e3_transform(params, sign, coupling, wgrid.half_width(), opts)?;
        let lo = e3.on_folded(&wgrid, -branch);
        let hi = e3.on_folded(&wgrid, branch);
        let values = lo.iter().zip(&hi).map(|(a, b)| a - b).collect();
        out.push(LemmaCheck {
            name,
            lhs: grid_norm(values, &wgrid)?,
            bound: momentum,
        });
    }

    let projection = match coupling.bound_state() {
        Some(b) => b.overlap(params)?.norm(),
        None => 0.0,
    };
    out.push(LemmaCheck {
        name: "bound_state",
        lhs: projection,
        bound: (-m * a * q.abs() / (8.0 * h * h)).exp() + (-q * q / (8.0 * h * s * s)).exp(),
    });

    let gaps = reflected_state_estimates(params, &fine(&opts.spec))?;
    out.push(LemmaCheck {
        name: "gap_even",
        lhs: gaps.gap_even,
        bound: position,
    });
    out.push(LemmaCheck {
        name: "gap_mirror",
        lhs: gaps.gap_mirror,
        bound: position,
    });
    Ok(out)
}

/// A random admissible scenario and time: qp ≠ 0, with the Gaussian
/// exponents q²/(4ħσ₀²) and σ₀²p²/ħ drawn in [2, 10] so every bound stays
/// above the quadrature floor.
pub fn admissible_draw<R: Rng>(rng: &mut R) -> (Scenario, f64) {
    let hbar = rng.gen_range(0.05..0.2);
    let sigma0 = rng.gen_range(0.7..1.4);
    let a: f64 = rng.gen_range(2.0..10.0);
    let b: f64 = rng.gen_range(2.0..10.0);
    let mut sign = || if rng.gen_bool(0.5) { 1.0 } else { -1.0 };
    let q = sign() * sigma0 * (4.0 * hbar * a).sqrt();
    let p = sign() * (hbar * b).sqrt() / sigma0;
    let alpha = sign() * rng.gen_range(0.5..2.0);
    let t = rng.gen_range(-4.0..4.0);
    (
        Scenario {
            hbar,
            mass: 1.0,
            alpha,
            sigma0,
            q,
            p,
        },
        t,
    )
}
