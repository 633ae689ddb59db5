use num_complex::Complex64;
use semidelta::numerics::{adaptive_integral_breaks, l2_distance, QuadratureSpec};
use semidelta::quantum::*;
use semidelta::states::{CoherentParams, PhysicalConstants};
use std::f64::consts::PI;

fn setup(h: f64, q: f64, p: f64, alpha: f64) -> (CoherentParams, DeltaCoupling) {
    let c = PhysicalConstants::new(h, 1.0).unwrap();
    (
        CoherentParams::standard(c, 1.0, q, p).unwrap(),
        DeltaCoupling::new(alpha, c).unwrap(),
    )
}

/// E1 from its defining k-integral, with the inner y-integral in closed form.
fn e1_defining_form(s: &CoherentParams, c: &DeltaCoupling, t: f64, x: f64, k_max: f64) -> Complex64 {
    let a = s.hbar() * t / (2.0 * s.mass());
    let inner = |kappa: f64| {
        let pick = |v: (Complex64, Complex64)| if s.q < 0.0 { v.0 } else { v.1 };
        pick(half_line_transforms(s, Complex64::new(kappa, 0.0)).unwrap())
            - pick(half_line_transforms(s, Complex64::new(-kappa, 0.0)).unwrap())
    };
    let integrand = |k: f64| {
        let (rp, rm) = reflection_coefficients(k, c);
        let outer = Complex64::new(0.0, k * x).exp() * rm + Complex64::new(0.0, -k.abs() * x.abs()).exp() * rp.norm_sqr();
        Complex64::new(0.0, -a * k * k).exp() * outer * inner(k.abs()) / (2.0 * PI)
    };
    let breaks: Vec<f64> = (0..=400).map(|j| -k_max + 2.0 * k_max * j as f64 / 400.0).collect();
    let spec = QuadratureSpec {
        relative_tol: 1e-10,
        ..QuadratureSpec::default()
    };
    adaptive_integral_breaks(integrand, &breaks, &spec).unwrap().value
}

#[test]
fn e1_kernel_form_matches_definition() {
    // ψ(0) is sizeable here so E1 is far from negligible
    for &alpha in &[0.5, -0.5] {
        let (s, c) = setup(0.1, -1.0, -1.0, alpha);
        let t = 0.2;
        for &x in &[-0.8, 0.0, 0.3, 1.5] {
            let fast = e1_value(&s, &c, t, x, &QuadratureSpec::default()).unwrap();
            let slow = e1_defining_form(&s, &c, t, x, 2000.0);
            assert!((fast - slow).norm() < 1e-7, "alpha {alpha}, x {x}: {fast} vs {slow}");
            assert!(fast.norm() > 1e-4);
        }
    }
}

#[test]
fn zero_time_decomposition_is_identity_with_large_remainders() {
    let (s, c) = setup(0.1, -1.0, -1.0, 0.5);
    let grid = evolution_grid(&s, 0.0).unwrap();
    let pieces = propagator_pieces(&s, 0.0, &c, &grid, &PropagatorOptions::default()).unwrap();
    assert!(pieces.e1.norm() > 1e-3);
    let want = grid.sample(|x| s.eval(x));
    assert!(l2_distance(&pieces.assemble(), &want).unwrap() < 1e-8);
}

#[test]
fn evolution_is_unitary_at_desk_parameters() {
    let opts = PropagatorOptions::default();
    for &alpha in &[1.0, -1.0, 0.2, -0.2] {
        let (s, c) = setup(0.1, -2.0, 1.0, alpha);
        for &t in &[0.0, 1.0, 2.0, 3.0, 4.0] {
            let grid = evolution_grid(&s, t).unwrap();
            let out = quantum_evolve(&s, t, &c, &grid, &opts).unwrap();
            assert!((out.norm() - 1.0).abs() < 1e-6, "alpha {alpha}, t {t}: {}", out.norm());
            if t == 0.0 {
                let want = grid.sample(|x| s.eval(x));
                assert!(l2_distance(&out, &want).unwrap() < 1e-8);
            }
        }
    }
}

#[test]
fn spectral_projections_are_complete() {
    // ‖P_ac ψ‖² + ‖P_α ψ‖² = 1, with ‖P_ac ψ‖² = ∫|⟨φ⁺_k, ψ⟩|² dk
    for &(h, q, alpha) in &[(0.1, -0.5, -1.0), (0.2, 0.4, -0.3)] {
        let (s, c) = setup(h, q, 1.0, alpha);
        let b = c.bound_state().unwrap();
        let bound = b.overlap(&s).unwrap().norm_sqr();
        assert!(bound > 1e-3);
        let k_max = 2e4;
        let mut breaks = vec![-k_max, -200.0, -50.0, 0.0, 50.0, 200.0, k_max];
        breaks.sort_by(|a, b| a.partial_cmp(b).unwrap());
        let spec = QuadratureSpec {
            relative_tol: 1e-10,
            ..QuadratureSpec::default()
        };
        let ac = adaptive_integral_breaks(|k| Complex64::new(distorted_transform(&s, &c, k).norm_sqr(), 0.0), &breaks, &spec)
            .unwrap()
            .value
            .re;
        assert!((ac + bound - 1.0).abs() < 1e-5, "ac {ac}, bound {bound}");
    }
}

#[test]
fn bound_part_vanishes_for_repulsion() {
    let (s, c) = setup(0.1, -2.0, 1.0, 1.0);
    let grid = evolution_grid(&s, 1.0).unwrap();
    assert_eq!(bound_part(&s, &c, 1.0, &grid).unwrap().norm(), 0.0);
}

#[test]
fn incoming_wave_operator_is_a_long_time_limit() {
    // outgoing packets (qp > 0) scattered in the past; for incoming ones the
    // gap sits at the e^{-p²/ħ} floor of slow components from the start
    for &(h, q, p) in &[(0.1, 0.3, 1.2), (0.2, 0.5, 1.5)] {
        let (s, c) = setup(h, q, p, 1.0);
        let opts = PropagatorOptions::default();
        let mut gaps = Vec::new();
        for &t in &[-4.0, -8.0, -16.0] {
            let (phase, moved) = s.evolved(t);
            let grid = evolution_grid(&moved, -t).unwrap();
            let mut prod = quantum_evolve(&moved, -t, &c, &grid, &opts).unwrap();
            for v in prod.values.iter_mut() {
                *v *= phase;
            }
            let omega = quantum_wave_operator(&s, -1.0, &c, &grid, &opts).unwrap();
            gaps.push(l2_distance(&omega, &prod).unwrap());
        }
        assert!(gaps[0] > gaps[1] && gaps[1] > gaps[2], "{gaps:?}");
        assert!(gaps[2] < 1e-5, "{gaps:?}");
    }
}

proptest::proptest! {
    #[test]
    fn reflection_coefficients_obey_the_unitarity_relation(
        alpha in proptest::prop_oneof![-5.0f64..-0.05, 0.05f64..5.0],
        hbar in 0.01f64..1.0,
        k in -200.0f64..200.0,
    ) {
        let c = DeltaCoupling::new(alpha, PhysicalConstants::new(hbar, 1.0).unwrap()).unwrap();
        let (rp, rm) = (c.r_plus(k), c.r_minus(k));
        proptest::prop_assert!((rp + rm + 2.0 * rp.norm_sqr()).norm() <= 4.0 * f64::EPSILON);
        proptest::prop_assert!(((1.0 + rp).norm_sqr() + rp.norm_sqr() - 1.0).abs() <= 8.0 * f64::EPSILON);
    }

    #[test]
    fn coherent_states_have_unit_norm(
        hbar in 0.02f64..0.5,
        sigma0 in 0.5f64..2.0,
        q in -3.0f64..3.0,
        p in -2.0f64..2.0,
        t in -4.0f64..4.0,
    ) {
        let s = CoherentParams::standard(PhysicalConstants::new(hbar, 1.0).unwrap(), sigma0, q, p).unwrap();
        let late = s.evolved(t).1;
        let grid = semidelta::states::covering_grid(&[s, late], &Default::default()).unwrap();
        for state in [s, late] {
            proptest::prop_assert!((grid.sample(|x| state.eval(x)).norm() - 1.0).abs() < 1e-9);
        }
    }
}
