//! Shared numerical kernels.

pub mod faddeeva;
pub mod grid;
pub mod quadrature;

pub use faddeeva::{erfc_real, faddeeva, gaussian_half_line, scaled_erfc_complex};
pub use grid::{heaviside, l2_distance, par_map, sgn, simpson_weights, WaveFunctionGrid, XGrid};
pub use quadrature::{
    adaptive_integral, adaptive_integral_breaks, adaptive_integral_real, gauss_legendre, Integral, PanelRule,
    QuadratureSpec,
};
