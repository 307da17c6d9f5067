//! Constructors for the concrete channel families used throughout:
//! tight normalized frames, quantum-classical and classical-quantum
//! channels, the fully randomizing channel, Werner channels, the completely
//! forgetful channel, and seeded Haar-random channels for experiments.

use alloc::format;
use alloc::vec::Vec;

use crate::channel::{kraus_from_choi, Channel, ChoiMatrix};
use crate::error::{Error, Result};
use crate::linalg::{hermitian_eig, EIG_CLIP};
use crate::mat::{CMatrix, CVector, C64, ZERO};
use crate::rng::{gaussian_isometry, SplitMix64};

/// Tight normalized frame: N unit vectors in dimension d whose average
/// projector is 1/d.
#[derive(Clone, Debug)]
pub struct Frame {
    dim: usize,
    vectors: Vec<CVector>,
}

impl Frame {
    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn count(&self) -> usize {
        self.vectors.len()
    }

    pub fn vectors(&self) -> &[CVector] {
        &self.vectors
    }

    /// (1/N) Σ_k ψ_k ψ_k†.
    pub fn frame_operator(&self) -> CMatrix {
        let mut op = CMatrix::zeros(self.dim, self.dim);
        let w = 1.0 / self.count() as f64;
        for v in &self.vectors {
            op.add_scaled_outer(v, w);
        }
        op
    }

    /// ‖frame_operator − 1/d‖∞.
    pub fn frame_defect(&self) -> f64 {
        let diff = self
            .frame_operator()
            .sub(&CMatrix::identity(self.dim).scale_re(1.0 / self.dim as f64));
        crate::linalg::operator_norm(&diff).unwrap_or(f64::INFINITY)
    }
}

/// The Fourier-phase frame ψ_k = (1/√d) Σ_j e^{2iπjk/N} |j⟩ for k = 1..N,
/// j = 1..d. Every overlap satisfies |⟨ψ_k|j⟩|² = 1/d.
pub fn tight_frame(count: usize, dim: usize) -> Result<Frame> {
    if dim == 0 || count < dim {
        return Err(Error::param(format!(
            "tight frame needs N ≥ d ≥ 1, got N={count}, d={dim}"
        )));
    }
    let norm = 1.0 / libm::sqrt(dim as f64);
    let mut vectors = Vec::with_capacity(count);
    for k in 1..=count {
        let mut v = CVector::zeros(dim);
        for j in 1..=dim {
            // Reduce j·k modulo N before the trig call to keep full precision.
            let phase = 2.0 * core::f64::consts::PI * ((j * k) % count) as f64 / count as f64;
            v.as_mut_slice()[j - 1] = C64::new(norm * libm::cos(phase), norm * libm::sin(phase));
        }
        vectors.push(v);
    }
    Ok(Frame { dim, vectors })
}

/// Quantum-classical channel (a measurement): K_i = √(|A|/|B|) |x_i⟩⟨ψ_i|
/// with {ψ_i} the tight frame of |B| vectors in dimension |A|. Every output
/// is diagonal in the computational basis of B.
pub fn qc_channel(dim_in: usize, dim_out: usize) -> Result<Channel> {
    if dim_out < dim_in {
        return Err(Error::param(format!(
            "quantum-classical channel needs |B| ≥ |A|, got |A|={dim_in}, |B|={dim_out}"
        )));
    }
    let frame = tight_frame(dim_out, dim_in)?;
    let scale = libm::sqrt(dim_in as f64 / dim_out as f64);
    let ops = frame
        .vectors()
        .iter()
        .enumerate()
        .map(|(i, psi)| {
            CVector::basis(dim_out, i)
                .outer(psi)
                .scale_re(scale)
        })
        .collect();
    Channel::from_kraus(ops)
}

/// Classical-quantum channel: K_i = |ψ_i⟩⟨x_i| with {ψ_i} the tight frame
/// of |A| vectors in dimension |B|.
pub fn cq_channel(dim_in: usize, dim_out: usize) -> Result<Channel> {
    if dim_in < dim_out {
        return Err(Error::param(format!(
            "classical-quantum channel needs |A| ≥ |B|, got |A|={dim_in}, |B|={dim_out}"
        )));
    }
    let frame = tight_frame(dim_in, dim_out)?;
    let ops = frame
        .vectors()
        .iter()
        .enumerate()
        .map(|(i, psi)| psi.outer(&CVector::basis(dim_in, i)))
        .collect();
    Channel::from_kraus(ops)
}

/// Generalized Pauli shift X|j⟩ = |j+1 mod d⟩.
pub fn pauli_shift(dim: usize) -> CMatrix {
    CMatrix::from_fn(dim, dim, |i, j| {
        if i == (j + 1) % dim {
            C64::new(1.0, 0.0)
        } else {
            ZERO
        }
    })
}

/// Generalized Pauli phase Z|j⟩ = e^{2πij/d}|j⟩.
pub fn pauli_phase(dim: usize) -> CMatrix {
    CMatrix::from_fn(dim, dim, |i, j| {
        if i == j {
            let phase = 2.0 * core::f64::consts::PI * i as f64 / dim as f64;
            C64::new(libm::cos(phase), libm::sin(phase))
        } else {
            ZERO
        }
    })
}

/// Fully randomizing channel X ↦ (tr X) 1/d, with the d² Kraus operators
/// X^j Z^k / d.
pub fn randomizing_channel(dim: usize) -> Result<Channel> {
    if dim == 0 {
        return Err(Error::param("randomizing channel needs d ≥ 1"));
    }
    let x = pauli_shift(dim);
    let z = pauli_phase(dim);
    let inv_d = 1.0 / dim as f64;
    let mut ops = Vec::with_capacity(dim * dim);
    let mut xj = CMatrix::identity(dim);
    for _j in 0..dim {
        let mut v = xj.clone();
        for _k in 0..dim {
            v = v.mul(&z);
            ops.push(v.scale_re(inv_d));
        }
        xj = x.mul(&xj);
    }
    Channel::from_kraus(ops)
}

/// Closed-form Werner channel action W_λ(X) = [(tr X)1 + (2λ−1)X^T]/(d+2λ−1).
pub fn werner_apply(dim: usize, lambda: f64, x: &CMatrix) -> Result<CMatrix> {
    check_werner_params(dim, lambda)?;
    if !x.is_square() || x.rows() != dim {
        return Err(Error::shape("Werner action input has the wrong dimension"));
    }
    let denom = dim as f64 + 2.0 * lambda - 1.0;
    let id_part = CMatrix::identity(dim).scale(x.trace());
    let xt = x.transpose().scale_re(2.0 * lambda - 1.0);
    Ok(id_part.add(&xt).scale_re(1.0 / denom))
}

/// Werner channel: Kraus operators extracted from the Choi matrix of the
/// closed-form action. Exactly trace preserving by construction.
pub fn werner_channel(dim: usize, lambda: f64) -> Result<Channel> {
    check_werner_params(dim, lambda)?;
    let denom = (dim as f64) * (dim as f64 + 2.0 * lambda - 1.0);
    let swap_weight = 2.0 * lambda - 1.0;
    let n = dim * dim;
    // τ(W_λ) = [1 + (2λ−1)·SWAP] / (d(d+2λ−1)).
    let tau = CMatrix::from_fn(n, n, |row, col| {
        let (j, b) = (row / dim, row % dim);
        let (k, bp) = (col / dim, col % dim);
        let mut v = 0.0;
        if j == k && b == bp {
            v += 1.0;
        }
        if b == k && bp == j {
            v += swap_weight;
        }
        C64::new(v / denom, 0.0)
    });
    kraus_from_choi(&ChoiMatrix::new(tau, dim, dim)?, crate::linalg::DEFAULT_RANK_TOL)
}

fn check_werner_params(dim: usize, lambda: f64) -> Result<()> {
    if dim < 2 {
        return Err(Error::param("Werner channel needs d ≥ 2"));
    }
    if !(0.0..=1.0).contains(&lambda) || lambda.is_nan() {
        return Err(Error::param(format!("Werner parameter λ={lambda} outside [0, 1]")));
    }
    Ok(())
}

/// Completely forgetful channel X ↦ (tr X) σ*: Kraus √μ_m |u_m⟩⟨a| over the
/// spectral decomposition of σ* and the input basis.
pub fn forgetful_channel(dim_in: usize, sigma: &CMatrix) -> Result<Channel> {
    if dim_in == 0 {
        return Err(Error::param("forgetful channel needs |A| ≥ 1"));
    }
    crate::channel::validate_state(sigma, sigma.rows())?;
    let eig = hermitian_eig(sigma)?;
    let mut ops = Vec::new();
    for (m, &mu) in eig.values.iter().enumerate() {
        if mu <= EIG_CLIP {
            continue;
        }
        let u = eig.column(m).scale_re(libm::sqrt(mu));
        for a in 0..dim_in {
            ops.push(u.outer(&CVector::basis(dim_in, a)));
        }
    }
    Channel::from_kraus(ops)
}

/// Haar-random channel: V is the positive-diagonal orthonormalization of a
/// seeded complex Gaussian (dim_out·dim_env) × dim_in matrix, and the Kraus
/// operators are its environment slices. Deterministic per seed.
pub fn random_channel(dim_in: usize, dim_out: usize, dim_env: usize, seed: u64) -> Result<Channel> {
    if dim_in == 0 || dim_out == 0 || dim_env == 0 {
        return Err(Error::param("random channel needs positive dimensions"));
    }
    if dim_out * dim_env < dim_in {
        return Err(Error::param(format!(
            "random channel needs |B|·|E| ≥ |A|, got {dim_out}·{dim_env} < {dim_in}"
        )));
    }
    let mut rng = SplitMix64::new(seed);
    let v = gaussian_isometry(dim_out * dim_env, dim_in, &mut rng);
    let ops = (0..dim_env)
        .map(|e| {
            CMatrix::from_fn(dim_out, dim_in, |b, a| v.get(b * dim_env + e, a))
        })
        .collect();
    Channel::from_kraus(ops)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mat::{partial_trace, Factor, TensorIndex};
    use crate::rng::{haar_unit_vectors, random_density_matrix};
    use alloc::vec;

    #[test]
    fn square_frame_is_fourier_basis() {
        let frame = tight_frame(4, 4).unwrap();
        assert!(frame.frame_defect() < 1e-13);
        for (a, va) in frame.vectors().iter().enumerate() {
            for (b, vb) in frame.vectors().iter().enumerate() {
                let ip = va.inner(vb).norm();
                let expected = if a == b { 1.0 } else { 0.0 };
                assert!((ip - expected).abs() < 1e-13);
            }
        }
    }

    #[test]
    fn oversampled_frame_identity() {
        let frame = tight_frame(8, 4).unwrap();
        assert!(frame.frame_defect() <= 1e-12);
    }

    #[test]
    fn flat_overlap_with_basis_states() {
        for (n, d) in [(4usize, 4usize), (16, 4), (37, 5)] {
            let frame = tight_frame(n, d).unwrap();
            for v in frame.vectors() {
                assert!((v.norm() - 1.0).abs() < 1e-12);
                for j in 0..d {
                    let overlap = v.as_slice()[j].norm_sqr();
                    assert!((overlap - 1.0 / d as f64).abs() < 1e-12);
                }
            }
        }
    }

    #[test]
    fn undersampled_frame_rejected() {
        assert!(matches!(tight_frame(3, 4), Err(Error::Param { .. })));
        assert!(matches!(qc_channel(8, 4), Err(Error::Param { .. })));
        assert!(matches!(cq_channel(4, 8), Err(Error::Param { .. })));
    }

    #[test]
    fn qc_channel_flattens_basis_state() {
        let ch = qc_channel(4, 8).unwrap();
        assert!(ch.tp_flag().is_exact());
        let rho = CVector::basis(4, 0).projector();
        let out = ch.apply(&rho).unwrap();
        let flat = CMatrix::identity(8).scale_re(1.0 / 8.0);
        assert!(out.max_abs_diff(&flat) < 1e-12);
        assert!(ch.kraus_rank(1e-10) <= 8);
    }

    #[test]
    fn qc_square_case_is_fourier_measurement() {
        let ch = qc_channel(4, 4).unwrap();
        let s = ch.kraus_sum();
        assert!(s.max_abs_diff(&CMatrix::identity(4)) < 1e-12);
    }

    #[test]
    fn qc_outputs_are_diagonal() {
        let ch = qc_channel(3, 6).unwrap();
        let mut rng = SplitMix64::new(21);
        for _ in 0..5 {
            let rho = random_density_matrix(3, &mut rng);
            let out = ch.apply(&rho).unwrap();
            let mut off = 0.0f64;
            for i in 0..6 {
                for j in 0..6 {
                    if i != j {
                        off = off.max(out.get(i, j).norm());
                    }
                }
            }
            assert!(off <= 1e-12);
        }
    }

    #[test]
    fn cq_channel_on_basis_and_uniform_inputs() {
        let ch = cq_channel(6, 3).unwrap();
        assert!(ch.tp_flag().is_exact());
        let frame = tight_frame(6, 3).unwrap();
        // Basis state |x_i⟩⟨x_i| goes to the pure frame state ψ_i ψ_i†.
        let out = ch.apply(&CVector::basis(6, 2).projector()).unwrap();
        assert!(out.max_abs_diff(&frame.vectors()[2].projector()) < 1e-12);
        // The uniform mixture goes to the maximally mixed output.
        let uniform = CMatrix::identity(6).scale_re(1.0 / 6.0);
        let out = ch.apply(&uniform).unwrap();
        assert!(out.max_abs_diff(&CMatrix::identity(3).scale_re(1.0 / 3.0)) < 1e-12);
    }

    #[test]
    fn cq_dual_is_scaled_qc() {
        let (a, b) = (6usize, 3usize);
        let cq = cq_channel(a, b).unwrap();
        let qc_form = qc_channel(b, a).unwrap();
        let dual = cq.dual();
        let mut rng = SplitMix64::new(33);
        for _ in 0..5 {
            let x = random_density_matrix(b, &mut rng);
            let lhs = dual.apply_matrix(&x).unwrap().scale_re(b as f64 / a as f64);
            let rhs = qc_form.apply_matrix(&x).unwrap();
            assert!(lhs.max_abs_diff(&rhs) < 1e-12);
        }
    }

    #[test]
    fn randomizing_channel_small_case() {
        let ch = randomizing_channel(2).unwrap();
        assert_eq!(ch.kraus().len(), 4);
        // The Kraus set is {1, X, Z, XZ}/2 (up to ordering).
        let x = pauli_shift(2);
        let z = pauli_phase(2);
        let expected = [
            CMatrix::identity(2),
            x.clone(),
            z.clone(),
            x.mul(&z),
        ];
        for e in &expected {
            let found = ch
                .kraus()
                .iter()
                .any(|k| k.max_abs_diff(&e.scale_re(0.5)) < 1e-14);
            assert!(found);
        }
        let mixed = CMatrix::identity(2).scale_re(0.5);
        for psi in haar_unit_vectors(2, 10, 9) {
            assert!(ch.apply_pure(&psi).unwrap().max_abs_diff(&mixed) < 1e-12);
        }
    }

    #[test]
    fn randomizing_channel_choi_and_rank() {
        for d in [2usize, 3] {
            let ch = randomizing_channel(d).unwrap();
            let tau = ch.to_choi();
            let flat = CMatrix::identity(d * d).scale_re(1.0 / (d * d) as f64);
            assert!(tau.matrix().max_abs_diff(&flat) < 1e-12);
            assert_eq!(ch.kraus_rank(1e-10), d * d);
        }
    }

    #[test]
    fn werner_matches_formula_on_seeded_inputs() {
        let mut rng = SplitMix64::new(12);
        for &lambda in &[0.0, 0.25, 0.5, 0.75, 1.0] {
            let ch = werner_channel(3, lambda).unwrap();
            assert!(ch.tp_flag().is_exact());
            for _ in 0..4 {
                let x = random_density_matrix(3, &mut rng);
                let via_kraus = ch.apply(&x).unwrap();
                let via_formula = werner_apply(3, lambda, &x).unwrap();
                assert!(via_kraus.max_abs_diff(&via_formula) < 1e-10);
            }
        }
    }

    #[test]
    fn werner_at_half_is_randomizing() {
        let d = 3;
        let w = werner_channel(d, 0.5).unwrap();
        let r = randomizing_channel(d).unwrap();
        let mut rng = SplitMix64::new(13);
        for _ in 0..10 {
            let x = random_density_matrix(d, &mut rng);
            let lhs = w.apply(&x).unwrap();
            let rhs = r.apply(&x).unwrap();
            assert!(lhs.max_abs_diff(&rhs) < 1e-10);
        }
    }

    #[test]
    fn werner_choi_is_a_werner_state() {
        // τ(W_λ) is the symmetric/antisymmetric mixture with symmetric
        // weight λ(d+1)/(d+2λ−1); at λ ∈ {0, 1} this is λς+(1−λ)α.
        let d = 3usize;
        let n = d * d;
        let swap = CMatrix::from_fn(n, n, |row, col| {
            let (j, b) = (row / d, row % d);
            let (k, bp) = (col / d, col % d);
            if j == bp && b == k {
                C64::new(1.0, 0.0)
            } else {
                ZERO
            }
        });
        let id = CMatrix::identity(n);
        let sym = id.add(&swap).scale_re(1.0 / (d * (d + 1)) as f64);
        let anti = id.sub(&swap).scale_re(1.0 / (d * (d - 1)) as f64);
        for &lambda in &[0.0f64, 0.3, 0.75, 1.0] {
            let tau = werner_channel(d, lambda).unwrap().to_choi();
            let w = lambda * (d as f64 + 1.0) / (d as f64 + 2.0 * lambda - 1.0);
            let expected = sym.scale_re(w).add(&anti.scale_re(1.0 - w));
            assert!(tau.matrix().max_abs_diff(&expected) < 1e-10, "lambda={lambda}");
        }
    }

    #[test]
    fn werner_kraus_ranks() {
        for d in [3usize, 4] {
            assert_eq!(werner_channel(d, 0.5).unwrap().kraus_rank(1e-10), d * d);
            assert_eq!(werner_channel(d, 1.0).unwrap().kraus_rank(1e-10), d * (d + 1) / 2);
            assert_eq!(werner_channel(d, 0.0).unwrap().kraus_rank(1e-10), d * (d - 1) / 2);
        }
    }

    #[test]
    fn werner_rejects_bad_lambda() {
        assert!(matches!(werner_channel(3, -0.1), Err(Error::Param { .. })));
        assert!(matches!(werner_channel(3, 1.1), Err(Error::Param { .. })));
    }

    #[test]
    fn forgetful_channel_sends_everything_to_sigma() {
        let mut rng = SplitMix64::new(14);
        let sigma = random_density_matrix(3, &mut rng);
        let ch = forgetful_channel(4, &sigma).unwrap();
        assert!(ch.tp_flag().is_exact());
        for psi in haar_unit_vectors(4, 5, 15) {
            let out = ch.apply_pure(&psi).unwrap();
            assert!(out.max_abs_diff(&sigma) < 1e-12);
        }
    }

    #[test]
    fn random_channel_is_a_seeded_isometry() {
        let ch = random_channel(4, 4, 6, 7).unwrap();
        assert!(ch.tp_flag().is_exact());
        let v = ch.stinespring();
        assert!(v.isometry_defect() < 1e-12);
        // Deterministic per seed.
        let again = random_channel(4, 4, 6, 7).unwrap();
        for (a, b) in ch.kraus().iter().zip(again.kraus()) {
            assert_eq!(a, b);
        }
        // Unitary case: one Kraus operator, rank one.
        let u = random_channel(3, 3, 1, 5).unwrap();
        assert_eq!(u.kraus_rank(1e-10), 1);
    }

    #[test]
    fn random_channel_generic_rank_is_env_dim() {
        for seed in 0..10u64 {
            let ch = random_channel(3, 3, 4, seed).unwrap();
            assert_eq!(ch.kraus_rank(1e-10), 4);
        }
    }

    #[test]
    fn random_channel_dimension_guard() {
        assert!(matches!(random_channel(5, 2, 2, 1), Err(Error::Param { .. })));
    }

    #[test]
    fn zoo_channels_are_exactly_tp() {
        let chans = vec![
            qc_channel(3, 5).unwrap(),
            cq_channel(5, 3).unwrap(),
            randomizing_channel(4).unwrap(),
            werner_channel(4, 0.3).unwrap(),
            random_channel(3, 4, 5, 2).unwrap(),
        ];
        for ch in &chans {
            assert!(ch.tp_flag().is_exact());
        }
    }

    #[test]
    fn choi_marginal_of_identity_channel() {
        // Tracing the output factor of the Choi state leaves 1/d.
        let ch = Channel::from_kraus(vec![CMatrix::identity(3)]).unwrap();
        let tau = ch.to_choi();
        let idx = TensorIndex::pair(3, 3).unwrap();
        let marginal = partial_trace(tau.matrix(), &idx, Factor::Left).unwrap();
        assert!(marginal.max_abs_diff(&CMatrix::identity(3).scale_re(1.0 / 3.0)) < 1e-13);
    }
}
