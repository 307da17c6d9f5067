//! Representation round trips and functorial identities on seeded channels.

use kslice_core::{
    kraus_from_choi, partial_trace, CMatrix, Channel, Factor, SplitMix64,
};
use kslice_core::rng::{haar_unit_vectors, random_density_matrix};
use kslice_core::zoo::{cq_channel, qc_channel, random_channel, randomizing_channel, werner_channel};

fn test_channels() -> Vec<Channel> {
    vec![
        random_channel(2, 2, 4, 1).unwrap(),
        random_channel(3, 3, 6, 2).unwrap(),
        random_channel(4, 4, 8, 3).unwrap(),
        random_channel(8, 8, 16, 4).unwrap(),
        random_channel(3, 2, 4, 5).unwrap(),
        random_channel(2, 6, 3, 6).unwrap(),
        randomizing_channel(4).unwrap(),
        werner_channel(3, 0.7).unwrap(),
        qc_channel(4, 8).unwrap(),
        cq_channel(8, 4).unwrap(),
    ]
}

#[test]
fn kraus_choi_kraus_round_trip_preserves_action() {
    let channels = test_channels();
    let mut worst = 0.0f64;
    let mut count = 0usize;
    for (i, ch) in channels.iter().enumerate() {
        let rebuilt = kraus_from_choi(&ch.to_choi(), 1e-10).unwrap();
        let mut rng = SplitMix64::new(1000 + i as u64);
        for _ in 0..10 {
            let rho = random_density_matrix(ch.dim_in(), &mut rng);
            let direct = ch.apply(&rho).unwrap();
            let via_choi = rebuilt.apply(&rho).unwrap();
            worst = worst.max(via_choi.max_abs_diff(&direct));
            count += 1;
        }
    }
    assert_eq!(count, 100);
    assert!(worst <= 1e-9, "worst deviation {worst:.3e}");
}

#[test]
fn stinespring_route_matches_direct_application() {
    let channels = test_channels();
    let mut worst = 0.0f64;
    for (i, ch) in channels.iter().enumerate() {
        let v = ch.stinespring();
        let mut rng = SplitMix64::new(2000 + i as u64);
        for _ in 0..10 {
            let rho = random_density_matrix(ch.dim_in(), &mut rng);
            let direct = ch.apply(&rho).unwrap();
            let via_v = v.channel_action(&rho).unwrap();
            worst = worst.max(via_v.max_abs_diff(&direct));
        }
    }
    assert!(worst <= 1e-10, "worst deviation {worst:.3e}");
}

#[test]
fn choi_is_linear_in_the_channel() {
    // The Choi of a convex combination (Kraus lists scaled by √w) is the
    // convex combination of the Choi matrices.
    let a = randomizing_channel(3).unwrap();
    let b = werner_channel(3, 0.9).unwrap();
    for &w in &[0.25f64, 0.5, 0.8] {
        let mut ops: Vec<CMatrix> = a
            .kraus()
            .iter()
            .map(|k| k.scale_re(w.sqrt()))
            .collect();
        ops.extend(b.kraus().iter().map(|k| k.scale_re((1.0 - w).sqrt())));
        let mixture = Channel::from_kraus(ops).unwrap();
        let expected = a
            .to_choi()
            .matrix()
            .scale_re(w)
            .add(&b.to_choi().matrix().scale_re(1.0 - w));
        assert!(mixture.to_choi().matrix().max_abs_diff(&expected) < 1e-12);
    }
}

#[test]
fn double_dual_acts_like_the_original() {
    for (i, ch) in test_channels().into_iter().enumerate() {
        let dd = ch.dual().dual();
        let mut rng = SplitMix64::new(3000 + i as u64);
        let rho = random_density_matrix(ch.dim_in(), &mut rng);
        let lhs = dd.apply_matrix(&rho).unwrap();
        let rhs = ch.apply_matrix(&rho).unwrap();
        assert!(lhs.max_abs_diff(&rhs) < 1e-12);
    }
}

#[test]
fn outputs_stay_positive_semidefinite() {
    for (i, ch) in test_channels().into_iter().enumerate() {
        let mut rng = SplitMix64::new(4000 + i as u64);
        for _ in 0..5 {
            let rho = random_density_matrix(ch.dim_in(), &mut rng);
            let out = ch.apply(&rho).unwrap();
            let eigs = kslice_core::hermitian_eig(&out.symmetrized()).unwrap().values;
            assert!(eigs[0] >= -1e-9, "eigenvalue {}", eigs[0]);
        }
        for psi in haar_unit_vectors(ch.dim_in(), 5, 5000 + i as u64) {
            let out = ch.apply_pure(&psi).unwrap();
            let eigs = kslice_core::hermitian_eig(&out.symmetrized()).unwrap().values;
            assert!(eigs[0] >= -1e-9);
        }
    }
}

#[test]
fn choi_trace_and_marginal_for_tp_channels() {
    for ch in test_channels() {
        let tau = ch.to_choi();
        assert!((tau.matrix().trace().re - 1.0).abs() < 1e-10);
        // The input marginal of the Choi state of a TP channel is 1/|A|.
        let marginal = partial_trace(tau.matrix(), &tau.index(), Factor::Left).unwrap();
        let flat = CMatrix::identity(ch.dim_in()).scale_re(1.0 / ch.dim_in() as f64);
        assert!(marginal.max_abs_diff(&flat) < 1e-10);
    }
}

#[test]
fn eigendecomposition_reconstructs_seeded_hermitians() {
    let mut rng = SplitMix64::new(9001);
    let sizes = [2usize, 3, 4, 6, 8, 12, 16, 24, 33, 48, 64];
    let mut done = 0usize;
    'outer: loop {
        for &n in &sizes {
            let g = CMatrix::from_fn(n, n, |_, _| rng.next_complex_gaussian());
            let m = g.add(&g.dagger()).scale_re(0.5);
            let eig = kslice_core::hermitian_eig(&m).unwrap();
            let rebuilt = eig.apply_spectral(|l| l);
            let top = eig.values.iter().fold(0.0f64, |a, &b| a.max(b.abs()));
            assert!(rebuilt.max_abs_diff(&m) <= 1e-10 * (1.0 + top));
            done += 1;
            if done == 100 {
                break 'outer;
            }
        }
    }
}
