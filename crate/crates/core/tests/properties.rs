use std::f64::consts::{FRAC_PI_4, PI, TAU};

use proptest::prelude::*;
use slpin_core::control::{draw_magnitudes, PinningMode, PinningSchedule};
use slpin_core::dynamics::{draw_deviations, network_rhs, sl_vector_field, CouplingMatrix, FullState, SlParams};
use slpin_core::network::{laplacian, ring_lattice, Network};
use slpin_core::phase::{
    circular_distance, kuramoto_additive_pinned_rhs, kuramoto_parametric_pinned_rhs, kuramoto_rhs, phase_of_state,
    psf_eval, psf_projected_pin_term, wrap_phase, PhaseState,
};
use slpin_core::MagnitudeOrigin;

fn weighted_graph() -> impl Strategy<Value = (usize, Vec<f64>)> {
    (2usize..10)
        .prop_flat_map(|n| {
            let pairs = n * (n - 1) / 2;
            (
                Just(n),
                prop::collection::vec(prop_oneof![Just(0.0), 0.0f64..5.0], pairs),
            )
        })
        .prop_map(|(n, upper)| {
            let mut a = vec![0.0; n * n];
            let mut it = upper.into_iter();
            for i in 0..n {
                for j in i + 1..n {
                    let w = it.next().unwrap();
                    a[i * n + j] = w;
                    a[j * n + i] = w;
                }
            }
            (n, a)
        })
}

proptest! {
    #[test]
    fn laplacian_rows_vanish_and_match_definition((n, a) in weighted_graph()) {
        let net = Network::from_adjacency(n, a.clone()).unwrap();
        prop_assert!(net.max_row_sum() <= 1e-15);
        for i in 0..n {
            let mut k = 0.0;
            for j in 0..n {
                k += a[i * n + j];
            }
            for j in 0..n {
                let expected = if i == j { -k } else { a[i * n + j] };
                prop_assert_eq!(net.laplacian()[i * n + j], expected);
            }
        }
        prop_assert_eq!(laplacian(n, net.adjacency()).unwrap(), net.laplacian().to_vec());
    }

    #[test]
    fn ring_lattice_edge_count(n in 3usize..80, half in 1usize..10) {
        let k = 2 * half;
        prop_assume!(k < n);
        let net = ring_lattice(n, k).unwrap();
        prop_assert_eq!(net.edge_count(), n * k / 2);
        prop_assert!((0..n).all(|i| net.degree(i) == k as f64));
        prop_assert_eq!(net.max_row_sum(), 0.0);
    }

    #[test]
    fn radial_equation(x in -2.0f64..2.0, y in -2.0f64..2.0, alpha in 0.1f64..3.0, omega in -3.0f64..3.0) {
        let [fx, fy] = sl_vector_field([x, y], alpha, omega).unwrap();
        let r2 = x * x + y * y;
        let lhs = 2.0 * (x * fx + y * fy);
        let rhs = 2.0 * r2 * (alpha - r2);
        prop_assert!((lhs - rhs).abs() <= 1e-12 * (1.0 + rhs.abs()));
    }

    #[test]
    fn decoupled_network_is_isolated_field(
        phases in prop::collection::vec(0.0f64..TAU, 6),
        alpha in 0.2f64..2.0,
    ) {
        let net = ring_lattice(6, 2).unwrap();
        let params = SlParams::homogeneous(6, alpha, 0.7).unwrap();
        let state = FullState::on_cycle(&params, &phases);
        let d = network_rhs(&state, &net, &params, &CouplingMatrix::standard(0.0).unwrap()).unwrap();
        for i in 0..6 {
            let f = sl_vector_field(state.xy(i), alpha, 0.7).unwrap();
            prop_assert_eq!(d.xy(i), f);
        }
    }

    #[test]
    fn kuramoto_is_rotation_equivariant(
        phases in prop::collection::vec(-10.0f64..10.0, 8),
        shift in -10.0f64..10.0,
        eps in 0.0f64..0.5,
    ) {
        let net = ring_lattice(8, 4).unwrap();
        let params = SlParams::homogeneous(8, 1.0, 1.3).unwrap();
        let shifted: Vec<f64> = phases.iter().map(|p| p + shift).collect();
        let a = kuramoto_rhs(&PhaseState::new(phases), &net, &params, eps).unwrap();
        let b = kuramoto_rhs(&PhaseState::new(shifted), &net, &params, eps).unwrap();
        for (u, v) in a.iter().zip(&b) {
            prop_assert!((u - v).abs() <= 1e-12);
        }
    }

    #[test]
    fn kuramoto_protocols_coincide(
        phases in prop::collection::vec(0.0f64..TAU, 10),
        seed in any::<u64>(),
        t in -1.0f64..5.0,
    ) {
        let net = ring_lattice(10, 4).unwrap();
        let (d_omega, d_alpha) = draw_deviations(10, 0.05, 0.0, seed);
        let params = SlParams::heterogeneous(1.0, 1.0, &d_alpha, &d_omega, 0.1).unwrap();
        let pinned = vec![0, 1, 2, 7];
        let lambdas = draw_magnitudes(4, 0.3, seed).unwrap();
        let add = PinningSchedule::new(pinned.clone(), 2.0, PinningMode::Additive, lambdas.clone(), seed, MagnitudeOrigin::Drawn).unwrap();
        let omega_p = pinned.iter().zip(&lambdas).map(|(&i, l)| params.omega(i) + l).collect();
        let par = add.with_magnitudes(PinningMode::Parametric, omega_p, MagnitudeOrigin::Equivalent).unwrap();
        let state = PhaseState::new(phases);
        let a = kuramoto_additive_pinned_rhs(&state, &net, &params, 0.01, &add, t).unwrap();
        let b = kuramoto_parametric_pinned_rhs(&state, &net, &params, 0.01, &par, t).unwrap();
        prop_assert_eq!(a, b);
    }

    #[test]
    fn wrapping_preserves_circular_position(theta in -1e3f64..1e3) {
        let w = wrap_phase(theta);
        prop_assert!((0.0..TAU).contains(&w));
        prop_assert!(circular_distance(w, theta) <= 1e-12);
        let p = phase_of_state(theta.cos(), theta.sin()).unwrap();
        prop_assert!(circular_distance(p, theta) <= 1e-12);
    }

    #[test]
    fn circular_distance_is_a_bounded_metric(a in -20.0f64..20.0, b in -20.0f64..20.0) {
        let d = circular_distance(a, b);
        prop_assert!((0.0..=PI).contains(&d));
        prop_assert_eq!(d, circular_distance(b, a));
    }
}

#[test]
fn psf_is_normalized_on_the_cycle() {
    for alpha in [0.5f64, 1.0, 2.0] {
        for omega in [0.5, 1.0] {
            for k in 0..1000 {
                let th = TAU * k as f64 / 1000.0;
                let r = alpha.sqrt();
                let f = sl_vector_field([r * th.cos(), r * th.sin()], alpha, omega).unwrap();
                let z = psf_eval(th, alpha).unwrap();
                assert!((z[0] * f[0] + z[1] * f[1] - omega).abs() <= 1e-12);
                let lambda = 0.37;
                let proj = z[0] * lambda + z[1] * lambda;
                let closed = psf_projected_pin_term(th, lambda, alpha).unwrap();
                assert!((proj - closed).abs() <= 1e-12);
                assert!((closed - (2.0 / alpha).sqrt() * lambda * (th + FRAC_PI_4).cos()).abs() <= 1e-15);
            }
        }
    }
}

#[test]
fn deviations_are_seeded_and_bounded() {
    let (dw, da) = draw_deviations(50, 0.05, 0.02, 9);
    assert_eq!((dw.clone(), da.clone()), draw_deviations(50, 0.05, 0.02, 9));
    assert!(dw.iter().all(|d| d.abs() < 0.05));
    assert!(da.iter().all(|d| d.abs() < 0.02));
    let (dw0, da0) = draw_deviations(50, 0.05, 0.0, 9);
    assert_eq!(dw0, dw);
    assert!(da0.iter().all(|&d| d == 0.0));
}
