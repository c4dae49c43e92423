use proptest::prelude::*;

use steer3q::bloch::{decompose3, reconstruct3};
use steer3q::entanglement::{concurrence, pure_report};
use steer3q::families::{add_white_noise, classify, DEFAULT_EPS_CLASS};
use steer3q::qlinalg::{PureState, C64};
use steer3q::steering::{steering_report, DEFAULT_EPS_STEER};

fn state(parts: &[f64]) -> Option<PureState> {
    let amps: Vec<C64> = parts.chunks(2).map(|c| C64::new(c[0], c[1])).collect();
    PureState::normalized(amps).ok()
}

fn three_qubit() -> impl Strategy<Value = PureState> {
    prop::collection::vec(-1.0f64..1.0, 16).prop_filter_map("nonzero", |v| state(&v))
}

fn s_triple(psi: &PureState) -> [f64; 3] {
    steering_report(&psi.density(), DEFAULT_EPS_STEER).unwrap().s_triple()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn pure_steering_sum_is_three(psi in three_qubit()) {
        let s = s_triple(&psi);
        prop_assert!((s.iter().sum::<f64>() - 3.0).abs() < 1e-9);
    }

    #[test]
    fn pure_s_follows_concurrences(psi in three_qubit()) {
        let s = s_triple(&psi);
        let c = pure_report(&psi).unwrap().c2_triple();
        for k in 0..3 {
            let others = (c.iter().sum::<f64>() - c[k]) / 2.0;
            prop_assert!((s[k] - 1.0 - 2.0 * (c[k] - others)).abs() < 1e-8);
        }
    }

    #[test]
    fn noise_scales_s_quadratically(psi in three_qubit(), v in 0.0f64..=1.0) {
        let base = s_triple(&psi);
        let noisy = steering_report(&add_white_noise(&psi, v).unwrap(), DEFAULT_EPS_STEER).unwrap().s_triple();
        for k in 0..3 {
            prop_assert!((noisy[k] - v * v * base[k]).abs() < 1e-10);
        }
    }

    #[test]
    fn pauli_coefficients_reconstruct(psi in three_qubit()) {
        let rho = psi.density();
        let back = reconstruct3(&decompose3(&rho).unwrap());
        prop_assert!(back.max_abs_diff(rho.matrix()) < 1e-12);
    }

    #[test]
    fn classification_ignores_phases(psi in three_qubit(), g in 0.0f64..6.3, z in prop::array::uniform3(0.0f64..6.3)) {
        let rotated: Vec<C64> = psi
            .amplitudes()
            .iter()
            .enumerate()
            .map(|(i, a)| {
                let bits = [(i >> 2) & 1, (i >> 1) & 1, i & 1];
                let phase = g + (0..3).map(|q| bits[q] as f64 * z[q]).sum::<f64>();
                a * C64::from_polar(1.0, phase)
            })
            .collect();
        let other = PureState::normalized(rotated).unwrap();
        let a = classify(&psi, DEFAULT_EPS_CLASS).unwrap();
        let b = classify(&other, DEFAULT_EPS_CLASS).unwrap();
        prop_assert_eq!(a.subtype, b.subtype);
        prop_assert_eq!(a.steering_graph, b.steering_graph);
    }

    #[test]
    fn two_qubit_concurrence_closed_form(v in prop::collection::vec(-1.0f64..1.0, 8)) {
        let psi = state(&v);
        prop_assume!(psi.is_some());
        let psi = psi.unwrap();
        let a = psi.amplitudes();
        let expected = 2.0 * (a[0] * a[3] - a[1] * a[2]).norm();
        prop_assert!((concurrence(&psi.density()).unwrap() - expected).abs() < 1e-9);
    }
}
