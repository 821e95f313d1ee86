//! Cross-checks against an independent nalgebra implementation and frozen
//! reference values.

use approx::assert_abs_diff_eq;
use nalgebra::DMatrix;
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use mixport::blockprops::random_psd;
use mixport::channels::{build, ChannelSpec};
use mixport::metrics::{
    closed_form, crossing_y2, d12, d34, d56, d56_werner, werner_average_distortion, OutcomeClass,
};
use mixport::teleport::{run, run_channel, BellOutcome};
use mixport::{Channel, ComplexMatrix, DensityMatrix, QubitState};

type M = DMatrix<Complex64>;

fn to_na(m: &ComplexMatrix) -> M {
    M::from_fn(m.dim(), m.dim(), |i, j| m[(i, j)])
}

fn cx(re: f64) -> Complex64 {
    Complex64::new(re, 0.0)
}

fn pauli(k: usize) -> M {
    let z = cx(0.0);
    let one = cx(1.0);
    let i = Complex64::new(0.0, 1.0);
    match k {
        0 => M::identity(2, 2),
        1 => M::from_row_slice(2, 2, &[z, one, one, z]),
        2 => M::from_row_slice(2, 2, &[z, -i, i, z]),
        _ => M::from_row_slice(2, 2, &[one, z, z, -one]),
    }
}

/// Bob's corrected states computed with nalgebra: Bell vectors, explicit
/// Kronecker products, index-sum partial trace over qubits 1 and 2.
fn reference_teleport(input: &M, channel: &M) -> Vec<Option<(f64, M)>> {
    let h = std::f64::consts::FRAC_1_SQRT_2;
    let bell = [
        ([h, 0.0, 0.0, h], 3),  // phi+ -> sigma_z
        ([h, 0.0, 0.0, -h], 0), // phi- -> identity
        ([0.0, h, h, 0.0], 2),  // psi+ -> sigma_y
        ([0.0, h, -h, 0.0], 1), // psi- -> sigma_x
    ];
    let composite = input.kronecker(channel);
    bell.iter()
        .map(|(amps, corr)| {
            let v = M::from_fn(4, 1, |i, _| cx(amps[i]));
            let proj = (&v * v.adjoint()).kronecker(&M::identity(2, 2));
            let m = &proj * &composite * &proj;
            let mut bob = M::zeros(2, 2);
            for a in 0..2 {
                for b in 0..2 {
                    for k in 0..4 {
                        bob[(a, b)] += m[(2 * k + a, 2 * k + b)];
                    }
                }
            }
            let p = bob.trace().re;
            if p < 1e-14 {
                return None;
            }
            let u = pauli(*corr);
            Some((p, &u * (bob / cx(p)) * u.adjoint()))
        })
        .collect()
}

fn random_qubit(rng: &mut impl Rng) -> QubitState {
    let x: f64 = rng.random();
    let r = (x * (1.0 - x) * rng.random::<f64>()).sqrt();
    QubitState::from_polar(x, r, rng.random::<f64>() * std::f64::consts::TAU).unwrap()
}

fn compare(input: &QubitState, channel: &Channel) {
    let ours = run_channel(input, channel).unwrap();
    let reference = reference_teleport(&to_na(&input.matrix()), &to_na(channel.matrix()));
    for (k, refr) in reference.into_iter().enumerate() {
        let o = &ours.outcomes[k];
        match refr {
            None => assert!(o.is_degenerate()),
            Some((p, bob)) => {
                assert_abs_diff_eq!(o.probability, p, epsilon = 1e-14);
                let ours = to_na(o.bob_corrected.as_ref().unwrap().matrix());
                assert!((ours - bob).norm() < 1e-13);
            }
        }
    }
}

#[test]
fn pipeline_matches_nalgebra_on_random_channels() {
    let mut rng = ChaCha8Rng::seed_from_u64(41);
    for _ in 0..200 {
        let channel = Channel {
            spec: ChannelSpec::Meps,
            state: DensityMatrix::new(random_psd(&mut rng, 4), (2, 2)).unwrap(),
            warning: None,
        };
        compare(&random_qubit(&mut rng), &channel);
    }
}

#[test]
fn pipeline_matches_nalgebra_on_catalog() {
    let mut rng = ChaCha8Rng::seed_from_u64(42);
    let specs = [
        "meps",
        "mems2:p1=0.7",
        "mems3:p1=0.4",
        "mems3:p1=0.8",
        "mems4:p1=0.3",
        "werner:r=0.2",
        "xz:a=0.4,b=0.1,c=0.05-0.02i,d=0.1,e=0.3+0.1i",
        "mems:p1=0.4,p2=0.3,p3=0.2,p4=0.1",
    ];
    for s in specs {
        let channel = build(&s.parse().unwrap()).unwrap();
        for _ in 0..20 {
            compare(&random_qubit(&mut rng), &channel);
        }
    }
}

#[test]
fn eigenvalues_and_determinants_match_nalgebra() {
    let mut rng = ChaCha8Rng::seed_from_u64(43);
    for dim in [2, 3, 4, 6, 8] {
        for _ in 0..20 {
            let g = random_psd(&mut rng, dim);
            let h = ComplexMatrix::from_fn(dim, |i, j| {
                g[(i, j)]
                    - if i == j {
                        Complex64::new(1.0 / dim as f64, 0.0)
                    } else {
                        cx(0.0)
                    }
            });
            let mut expected: Vec<f64> =
                to_na(&h).symmetric_eigenvalues().iter().copied().collect();
            expected.sort_by(|a, b| b.partial_cmp(a).unwrap());
            let ours = h.hermitian_eigenvalues().unwrap();
            for (a, b) in ours.iter().zip(&expected) {
                assert_abs_diff_eq!(a, b, epsilon = 1e-13);
            }
            let det = to_na(&h).determinant();
            assert!((h.determinant() - det).norm() < 1e-15);
        }
    }
}

#[test]
fn frozen_distortion_values() {
    let q = QubitState::balanced(cx(0.3)).unwrap();
    let r2 = run(&q, &ChannelSpec::MemsRank2 { p1: 0.6 }).unwrap();
    for d in r2.distortions() {
        assert_abs_diff_eq!(d.unwrap(), 0.1088, epsilon = 1e-12);
    }
    assert_abs_diff_eq!(d12(1.0, 0.37).unwrap(), 0.0, epsilon = 1e-16);
    assert_abs_diff_eq!(d34(0.4, 0.0).unwrap(), 0.08, epsilon = 1e-16);
    assert_abs_diff_eq!(d56_werner(0.0, 0.25).unwrap(), 0.125, epsilon = 1e-16);
    assert_abs_diff_eq!(
        d56(0.7, 0.3).unwrap(),
        32.0 * 0.09 * 0.09 / 9.0,
        epsilon = 1e-16
    );
    assert_abs_diff_eq!(
        werner_average_distortion(0.5).unwrap(),
        1.0 / 48.0,
        epsilon = 1e-9
    );
    assert_abs_diff_eq!(
        crossing_y2(0.4).unwrap(),
        0.178_571_428_571_428_57,
        epsilon = 1e-15
    );
}

#[test]
fn rank4_corrected_states_are_uniform() {
    let q = QubitState::new(0.5, Complex64::new(0.3, 0.0)).unwrap();
    let run = run(&q, &ChannelSpec::MemsRank4 { p1: 0.7 }).unwrap();
    let first = run.outcomes[0]
        .bob_corrected
        .as_ref()
        .unwrap()
        .matrix()
        .clone();
    // Off-diagonal y(4p1 - 1)/3 = 0.18 at both positions.
    assert_abs_diff_eq!(first[(0, 1)].re, 0.18, epsilon = 1e-15);
    assert_abs_diff_eq!(first[(1, 0)].re, 0.18, epsilon = 1e-15);
    for o in &run.outcomes[1..] {
        let m = o.bob_corrected.as_ref().unwrap().matrix();
        assert!(m.max_abs_diff(&first).unwrap() < 1e-15);
    }
}

#[test]
fn general_x_branches_differ_and_match() {
    let q = QubitState::from_polar(0.8, 0.2, 0.7).unwrap();
    for spec in [
        ChannelSpec::MemsRank2 { p1: 0.7 },
        ChannelSpec::MemsRank3 { p1: 0.4 },
    ] {
        let run = run(&q, &spec).unwrap();
        let d = run.distortions();
        let fam = spec.family();
        let p = spec.parameter().unwrap();
        for (k, o) in BellOutcome::ALL.into_iter().enumerate() {
            let expected = closed_form(fam, OutcomeClass::of(fam, o), 0.8, 0.2, p).unwrap();
            assert_abs_diff_eq!(d[k].unwrap(), expected, epsilon = 1e-13);
        }
        assert!((d[0].unwrap() - d[2].unwrap()).abs() > 1e-3);
    }
}
