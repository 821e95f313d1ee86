//! Invariants over generated inputs.

use std::f64::consts::TAU;

use num_complex::Complex64;
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use mixport::blockprops::random_psd;
use mixport::density::{partial_trace_matrix, partial_transpose_matrix, Subsystem};
use mixport::metrics::{d12, d34, d56, hs_distance_sq};
use mixport::teleport::run_channel;
use mixport::{Channel, ChannelSpec, ComplexMatrix, DensityMatrix, QubitState};

fn psd(seed: u64, dim: usize) -> ComplexMatrix {
    random_psd(&mut ChaCha8Rng::seed_from_u64(seed), dim)
}

fn qubit() -> impl Strategy<Value = QubitState> {
    (0.0f64..=1.0, 0.0f64..=1.0, 0.0f64..TAU)
        .prop_map(|(x, f, ph)| QubitState::from_polar(x, f * (x * (1.0 - x)).sqrt(), ph).unwrap())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn tensor_trace_factorizes(s1 in any::<u64>(), s2 in any::<u64>(), da in 1usize..4, db in 1usize..4) {
        let (a, b) = (psd(s1, da), psd(s2, db));
        let t = a.tensor(&b).trace();
        prop_assert!((t - a.trace() * b.trace()).norm() < 1e-14);
    }

    #[test]
    fn eigenvalues_sum_to_trace(seed in any::<u64>(), dim in 1usize..9) {
        let m = psd(seed, dim);
        let ev = m.hermitian_eigenvalues().unwrap();
        prop_assert!((ev.iter().sum::<f64>() - 1.0).abs() < 1e-13);
        prop_assert!(ev.windows(2).all(|w| w[0] >= w[1]));
        prop_assert!(*ev.last().unwrap() > -1e-14);
    }

    #[test]
    fn adjoint_is_an_involution(seed in any::<u64>(), dim in 1usize..9) {
        let g = psd(seed, dim).matmul(&psd(seed ^ 1, dim)).unwrap();
        prop_assert_eq!(g.adjoint().adjoint(), g);
    }

    #[test]
    fn partial_operations_preserve_trace(seed in any::<u64>(), da in 2usize..4, db in 2usize..4) {
        let m = psd(seed, da * db);
        for keep in [Subsystem::A, Subsystem::B] {
            let r = partial_trace_matrix(&m, (da, db), keep).unwrap();
            prop_assert!((r.trace().re - 1.0).abs() < 1e-14);
        }
        let pt = partial_transpose_matrix(&m, (da, db)).unwrap();
        prop_assert!((pt.trace() - m.trace()).norm() < 1e-15);
        prop_assert_eq!(partial_transpose_matrix(&pt, (da, db)).unwrap(), m);
    }

    #[test]
    fn product_states_trace_back(s1 in any::<u64>(), s2 in any::<u64>()) {
        let (a, b) = (psd(s1, 2), psd(s2, 3));
        let rho = DensityMatrix::new(a.tensor(&b), (2, 3)).unwrap();
        prop_assert!(rho.partial_trace(Subsystem::A).unwrap().matrix().max_abs_diff(&a).unwrap() < 1e-15);
        prop_assert!(rho.partial_trace(Subsystem::B).unwrap().matrix().max_abs_diff(&b).unwrap() < 1e-15);
    }

    #[test]
    fn outcome_probabilities_sum_to_one(q in qubit(), seed in any::<u64>()) {
        let channel = Channel {
            spec: ChannelSpec::Meps,
            state: DensityMatrix::new(psd(seed, 4), (2, 2)).unwrap(),
            warning: None,
        };
        let run = run_channel(&q, &channel).unwrap();
        prop_assert!((run.total_probability() - 1.0).abs() < 1e-13);
        for o in &run.outcomes {
            if let Some(b) = &o.bob_corrected {
                prop_assert!((b.matrix().trace().re - 1.0).abs() < 1e-13);
                prop_assert!(b.eigenvalues()[1] > -1e-12);
            }
        }
    }

    #[test]
    fn distortion_ignores_phase(x in 0.05f64..0.95, f in 0.0f64..=1.0, a in 0.0f64..TAU, b in 0.0f64..TAU, p in 0.0f64..=1.0) {
        let abs_y = f * (x * (1.0 - x)).sqrt();
        for spec in [
            ChannelSpec::MemsRank2 { p1: p },
            ChannelSpec::MemsRank3 { p1: p },
            ChannelSpec::MemsRank4 { p1: p },
            ChannelSpec::Werner { r: p },
        ] {
            let ch = spec.build().unwrap();
            let da = run_channel(&QubitState::from_polar(x, abs_y, a).unwrap(), &ch).unwrap().distortions();
            let db = run_channel(&QubitState::from_polar(x, abs_y, b).unwrap(), &ch).unwrap().distortions();
            for (u, v) in da.iter().zip(&db) {
                if let (Some(u), Some(v)) = (u, v) {
                    prop_assert!((u - v).abs() < 1e-12);
                }
            }
        }
    }

    #[test]
    fn hs_distance_is_symmetric_and_nonnegative(q1 in qubit(), q2 in qubit()) {
        let (a, b) = (q1.density(), q2.density());
        let d = hs_distance_sq(&a, &b).unwrap();
        prop_assert!(d >= 0.0);
        prop_assert_eq!(d, hs_distance_sq(&b, &a).unwrap());
        prop_assert_eq!(hs_distance_sq(&a, &a).unwrap(), 0.0);
    }

    #[test]
    fn balanced_distortions_nondecreasing(p in 0.0f64..=1.0, y1 in 0.0f64..=0.5, y2 in 0.0f64..=0.5) {
        let (lo, hi) = if y1 <= y2 { (y1, y2) } else { (y2, y1) };
        for f in [d12, d34, d56] {
            prop_assert!(f(p, hi).unwrap() - f(p, lo).unwrap() >= -1e-12);
        }
    }

    #[test]
    fn meps_teleports_exactly(q in qubit()) {
        let ch = ChannelSpec::Meps.build().unwrap();
        for d in run_channel(&q, &ch).unwrap().distortions() {
            prop_assert!(d.unwrap() < 1e-24);
        }
    }
}

#[test]
fn imaginary_coherence_is_carried() {
    let q = QubitState::new(0.5, Complex64::new(0.0, 0.4)).unwrap();
    let ch = ChannelSpec::Meps.build().unwrap();
    let run = run_channel(&q, &ch).unwrap();
    for o in &run.outcomes {
        let b = o.bob_corrected.as_ref().unwrap().matrix();
        assert!((b[(0, 1)] - Complex64::new(0.0, 0.4)).norm() < 1e-15);
    }
}
