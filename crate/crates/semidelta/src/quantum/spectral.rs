//! Reflection coefficients, generalized eigenfunctions, the bound state and
//! closed-form half-line transforms of coherent states.

use crate::error::{Error, Result};
use crate::numerics::gaussian_half_line;
use crate::states::{CoherentParams, PhysicalConstants};
use num_complex::Complex64;
use std::f64::consts::PI;

/// Strength α of the point interaction together with ħ and m.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DeltaCoupling {
    pub alpha: f64,
    pub constants: PhysicalConstants,
}

impl DeltaCoupling {
    pub fn new(alpha: f64, constants: PhysicalConstants) -> Result<Self> {
        if alpha == 0.0 || !alpha.is_finite() {
            return Err(Error::Domain(format!("alpha must be finite and nonzero, got {alpha}")));
        }
        Ok(Self { alpha, constants })
    }

    /// Classical counterpart β = 2α/ħ.
    pub fn beta(&self) -> f64 {
        2.0 * self.alpha / self.constants.hbar
    }

    /// Signed length ħ²/(mα) in the denominators of R±.
    pub fn length(&self) -> f64 {
        self.constants.hbar.powi(2) / (self.constants.mass * self.alpha)
    }

    pub fn r_plus(&self, k: f64) -> Complex64 {
        -1.0 / Complex64::new(1.0, self.length() * k.abs())
    }

    pub fn r_minus(&self, k: f64) -> Complex64 {
        -1.0 / Complex64::new(1.0, -self.length() * k.abs())
    }

    /// R₊ for `Sign::Plus`-style `+1.0`, R₋ for `-1.0`.
    pub fn r(&self, sign: f64, k: f64) -> Complex64 {
        if sign > 0.0 {
            self.r_plus(k)
        } else {
            self.r_minus(k)
        }
    }

    pub fn bound_state(&self) -> Option<BoundState> {
        (self.alpha < 0.0).then(|| {
            let (h, m) = (self.constants.hbar, self.constants.mass);
            BoundState {
                decay: m * self.alpha.abs() / (h * h),
                lambda_alpha: -m * self.alpha * self.alpha / (2.0 * h * h),
            }
        })
    }
}

/// (R₊(k), R₋(k)).
pub fn reflection_coefficients(k: f64, coupling: &DeltaCoupling) -> (Complex64, Complex64) {
    (coupling.r_plus(k), coupling.r_minus(k))
}

/// φ^±_k(x) = (e^{ikx} + R±(k) e^{∓i|k||x|}) / √(2π).
pub fn generalized_eigenfunction(k: f64, x: f64, sign: f64, coupling: &DeltaCoupling) -> Complex64 {
    let s = if sign > 0.0 { -1.0 } else { 1.0 };
    let incoming = Complex64::new(0.0, k * x).exp();
    let scattered = coupling.r(sign, k) * Complex64::new(0.0, s * k.abs() * x.abs()).exp();
    (incoming + scattered) / (2.0 * PI).sqrt()
}

/// Eigenpair of the attractive interaction: λ_α and φ_α(x) = √κ e^{-κ|x|}.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BoundState {
    /// κ = m|α|/ħ².
    pub decay: f64,
    pub lambda_alpha: f64,
}

impl BoundState {
    pub fn eval(&self, x: f64) -> f64 {
        self.decay.sqrt() * (-self.decay * x.abs()).exp()
    }

    /// ⟨φ_α, ψ⟩ in closed form.
    pub fn overlap(&self, params: &CoherentParams) -> Result<Complex64> {
        let (hp, hm) = half_line_transforms(params, Complex64::new(0.0, self.decay))?;
        Ok(self.decay.sqrt() * (hp + hm))
    }
}

/// (∫₀^∞ e^{iκy} ψ(y) dy, ∫₀^∞ e^{iκy} ψ(-y) dy).
pub fn half_line_transforms(params: &CoherentParams, kappa: Complex64) -> Result<(Complex64, Complex64)> {
    let a = params.rate();
    if !(a.re > 0.0) {
        return Err(Error::Domain(format!("Gaussian rate must have positive real part, got {a}")));
    }
    Ok((half_line(params, 1.0, kappa), half_line(params, -1.0, kappa)))
}

/// ∫₀^∞ e^{iκy} ψ(s y) dy for s = ±1.
pub(crate) fn half_line(params: &CoherentParams, s: f64, kappa: Complex64) -> Complex64 {
    let (h, q, p) = (params.hbar(), params.q, params.p);
    let a = params.rate();
    let i = Complex64::i();
    let b = 2.0 * a * s * q + i * (s * p / h) + i * kappa;
    let c = -a * q * q - i * (p * q / h);
    params.amplitude() * gaussian_half_line(a, b, c)
}
