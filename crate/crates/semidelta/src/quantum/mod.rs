//! Quantum side: spectral data of the point interaction, the exact
//! coherent-state propagator, wave operators and the scattering operator.

mod ktransform;
mod propagator;
mod scattering;
mod spectral;

pub use ktransform::KTransform;
pub use propagator::{
    bound_part, distorted_transform, e1_on_grid, e1_value, e2_transform, evolution_grid, propagator_pieces,
    quantum_evolve, reflected_gap_closed, reflected_state_estimates, reflected_transform,
    reflection_remainder_transform, spectral_evolve, upsilon_approximant, PropagatorOptions, PropagatorPieces,
    ReflectedGaps,
};
pub use scattering::{
    e3_transform, quantum_scattering, quantum_wave_operator, quantum_wave_operator_direct, wave_operator_grid,
};
pub use spectral::{
    generalized_eigenfunction, half_line_transforms, reflection_coefficients, BoundState, DeltaCoupling,
};
