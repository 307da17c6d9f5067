//! Statistical properties of the slicing construction across the channel zoo.

use kslice_core::compress::{
    compress, sample_env_vector, slice_kraus_operator, tail_probability_oracle, tp_correct,
    CompressionPlan, Sampler,
};
use kslice_core::metrics::{one_to_p_distance, OptBudget};
use kslice_core::rng::random_density_matrix;
use kslice_core::zoo::{cq_channel, qc_channel, random_channel, randomizing_channel, werner_channel};
use kslice_core::{CMatrix, CVector, Channel, SplitMix64};

/// Entrywise Monte-Carlo mean of N_φ(ρ) over `m` Haar slices against N(ρ),
/// aggregated for several input states in one pass; asserts every real and
/// imaginary part stays within four standard errors.
fn assert_unbiased(ch: &Channel, states: &[CMatrix], m: usize, seed: u64) {
    let v = ch.stinespring();
    let dim = ch.dim_out();
    let mut sums = vec![CMatrix::zeros(dim, dim); states.len()];
    let mut sq_re = vec![vec![0.0f64; dim * dim]; states.len()];
    let mut sq_im = vec![vec![0.0f64; dim * dim]; states.len()];
    for i in 0..m {
        let mut rng = SplitMix64::substream(seed, i as u64);
        let phi = sample_env_vector(Sampler::Haar, v.dim_env(), &mut rng).unwrap();
        let k = slice_kraus_operator(&v, &phi).unwrap();
        for (s, rho) in states.iter().enumerate() {
            let out = k.mul(rho).mul(&k.dagger());
            sums[s].add_assign(&out);
            for r in 0..dim {
                for c in 0..dim {
                    let z = out.get(r, c);
                    sq_re[s][r * dim + c] += z.re * z.re;
                    sq_im[s][r * dim + c] += z.im * z.im;
                }
            }
        }
    }
    let mf = m as f64;
    for (s, rho) in states.iter().enumerate() {
        let expected = ch.apply_matrix(rho).unwrap();
        for r in 0..dim {
            for c in 0..dim {
                let mean = sums[s].get(r, c) / mf;
                let var_re = (sq_re[s][r * dim + c] / mf - mean.re * mean.re).max(0.0);
                let var_im = (sq_im[s][r * dim + c] / mf - mean.im * mean.im).max(0.0);
                let e = expected.get(r, c);
                let dev_re = (mean.re - e.re).abs();
                let dev_im = (mean.im - e.im).abs();
                assert!(
                    dev_re <= 4.0 * (var_re / mf).sqrt() + 1e-12,
                    "re deviation {dev_re:.3e} at ({r},{c}) state {s}"
                );
                assert!(
                    dev_im <= 4.0 * (var_im / mf).sqrt() + 1e-12,
                    "im deviation {dev_im:.3e} at ({r},{c}) state {s}"
                );
            }
        }
    }
}

fn seeded_states(dim: usize, count: usize, seed: u64) -> Vec<CMatrix> {
    let mut rng = SplitMix64::new(seed);
    (0..count).map(|_| random_density_matrix(dim, &mut rng)).collect()
}

#[test]
fn slicing_is_unbiased_across_the_zoo() {
    let cases: Vec<(Channel, u64)> = vec![
        (randomizing_channel(2).unwrap(), 101),
        (randomizing_channel(8).unwrap(), 102),
        (werner_channel(3, 0.6).unwrap(), 103),
        (qc_channel(4, 8).unwrap(), 104),
        (cq_channel(8, 4).unwrap(), 105),
        (random_channel(8, 8, 64, 9).unwrap(), 106),
    ];
    for (ch, seed) in cases {
        let states = seeded_states(ch.dim_in(), 5, seed);
        assert_unbiased(&ch, &states, 10_000, seed.wrapping_mul(7919));
    }
}

#[test]
fn compressed_randomizing_channel_is_close_in_trace_norm() {
    // d = 8, |E| = 64, n = 4096: the estimated (1→1) error over a pool of
    // 10^3 seeded pure states stays below 0.25.
    let ch = randomizing_channel(8).unwrap();
    let plan = CompressionPlan::new(4096, Sampler::Haar, 42).unwrap();
    let result = compress(&ch, &plan).unwrap();
    let budget = OptBudget::custom(2, 20, 1000, 77).unwrap();
    let report = one_to_p_distance(&ch, &result.sliced, 1.0, &budget).unwrap();
    assert!(report.value <= 0.25, "estimated error {}", report.value);
}

#[test]
fn well_compressed_randomizing_channel_keeps_the_ordering() {
    // At a generous eps the two-sided ordering holds across a large scored
    // pool: the slack stays nonnegative everywhere.
    let ch = randomizing_channel(8).unwrap();
    let plan = CompressionPlan::new(4096, Sampler::Haar, 23).unwrap();
    let result = compress(&ch, &plan).unwrap();
    let budget = OptBudget::custom(3, 30, 1000, 71).unwrap();
    let margin =
        kslice_core::metrics::ordering_margin(&ch, &result.sliced, 0.5, &budget).unwrap();
    assert!(margin.value >= 0.0, "margin {}", margin.value);
}

#[test]
fn estimated_error_shrinks_with_n() {
    let ch = randomizing_channel(4).unwrap();
    let budget = OptBudget::custom(2, 20, 300, 5).unwrap();
    let mut errors = Vec::new();
    for &n in &[64usize, 256] {
        let plan = CompressionPlan::new(n, Sampler::Haar, 11).unwrap();
        let result = compress(&ch, &plan).unwrap();
        errors.push(one_to_p_distance(&ch, &result.sliced, 1.0, &budget).unwrap().value);
    }
    let ratio = errors[1] / errors[0];
    assert!(ratio > 0.3 && ratio < 0.8, "ratio {ratio}");
}

#[test]
fn correction_shift_is_controlled_by_the_defect() {
    let budget = OptBudget::custom(3, 30, 200, 8).unwrap();
    for seed in [1u64, 2, 3] {
        let ch = randomizing_channel(4).unwrap();
        let plan = CompressionPlan::new(256, Sampler::Haar, seed).unwrap();
        let result = compress(&ch, &plan).unwrap();
        assert!(result.tp_defect < 0.5);
        let corrected = tp_correct(&result).unwrap();
        assert!(corrected.kraus_sum().max_abs_diff(&CMatrix::identity(4)) <= 1e-10);
        let shift = one_to_p_distance(&corrected, &result.sliced, 1.0, &budget)
            .unwrap()
            .value;
        assert!(
            shift <= 1.5 * result.tp_defect + 1e-6,
            "shift {shift} vs defect {}",
            result.tp_defect
        );
    }
}

#[test]
fn compressed_output_entropy_is_bounded_by_log_rank() {
    let ch = randomizing_channel(4).unwrap();
    let plan = CompressionPlan::new(8, Sampler::Haar, 13).unwrap();
    let result = compress(&ch, &plan).unwrap();
    let rank = result.sliced.kraus_rank(1e-10);
    assert!(rank <= 8);
    let mut rng = SplitMix64::new(14);
    for _ in 0..10 {
        let rho = random_density_matrix(4, &mut rng);
        let out = result.sliced.apply_matrix(&rho).unwrap();
        let normalized = out.scale_re(1.0 / out.trace().re);
        let s = kslice_core::metrics::entropy_raw(&normalized, 1.0).unwrap();
        assert!(s <= (rank as f64).ln() + 1e-9, "entropy {s} rank {rank}");
    }
}

#[test]
fn tail_probability_vanishes_at_large_n() {
    let ch = randomizing_channel(4).unwrap();
    let x = CVector::basis(4, 0);
    let y = CVector::basis(4, 2);
    let freq = tail_probability_oracle(&ch, &x, &y, 100_000, 0.5, 200, 55).unwrap();
    assert_eq!(freq, 0.0);
}
