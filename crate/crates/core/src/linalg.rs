//! Hermitian eigendecomposition and the spectral functions built on it.
//!
//! The eigensolver is a cyclic complex Jacobi iteration: each rotation zeroes
//! one off-diagonal pair with a phased Givens rotation, and the off-diagonal
//! mass converges quadratically. For the dimensions this crate targets
//! (≤ 256) it is fast enough and backward stable to machine precision.

use alloc::format;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::mat::{CMatrix, C64, ZERO};

/// Relative Hermiticity tolerance: defect ≤ HERM_TOL · (1 + max|M|).
pub const HERM_TOL: f64 = 1e-12;

/// Default relative tolerance for numerical rank decisions.
pub const DEFAULT_RANK_TOL: f64 = 1e-10;

/// Eigenvalues below this magnitude are treated as exact zeros when a
/// nonnegative spectrum is required (entropy, square roots).
pub const EIG_CLIP: f64 = 1e-12;

/// Eigendecomposition of a Hermitian matrix: ascending eigenvalues and the
/// matching unitary of eigenvector columns.
#[derive(Clone, Debug)]
pub struct HermEig {
    pub values: Vec<f64>,
    pub vectors: CMatrix,
}

impl HermEig {
    /// U f(Λ) U† for a scalar function of the spectrum.
    pub fn apply_spectral(&self, f: impl Fn(f64) -> f64) -> CMatrix {
        let n = self.values.len();
        let mut out = CMatrix::zeros(n, n);
        for (k, &lambda) in self.values.iter().enumerate() {
            let w = f(lambda);
            if w == 0.0 {
                continue;
            }
            let col = self.column(k);
            out.add_scaled_outer(&col, w);
        }
        out
    }

    pub fn column(&self, k: usize) -> crate::mat::CVector {
        let n = self.vectors.rows();
        crate::mat::CVector::from_vec((0..n).map(|i| self.vectors.get(i, k)).collect())
    }

    pub fn min(&self) -> f64 {
        self.values[0]
    }

    pub fn max(&self) -> f64 {
        self.values[self.values.len() - 1]
    }
}

/// Hermitian eigendecomposition. Inputs within the symmetry tolerance are
/// symmetrized first; anything worse is rejected.
pub fn hermitian_eig(m: &CMatrix) -> Result<HermEig> {
    if !m.is_square() {
        return Err(Error::shape(format!(
            "eigendecomposition needs a square matrix, got {}x{}",
            m.rows(),
            m.cols()
        )));
    }
    let defect = m.herm_defect();
    if defect > HERM_TOL * (1.0 + m.max_abs()) {
        return Err(Error::NotHermitian { defect });
    }
    let (values, vectors) = jacobi(m.symmetrized());
    Ok(HermEig { values, vectors })
}

/// Ascending eigenvalues only.
pub fn hermitian_eigenvalues(m: &CMatrix) -> Result<Vec<f64>> {
    hermitian_eig(m).map(|e| e.values)
}

const MAX_SWEEPS: usize = 64;

/// Cyclic Jacobi for Hermitian input (assumed exactly Hermitian).
fn jacobi(mut a: CMatrix) -> (Vec<f64>, CMatrix) {
    let n = a.rows();
    let mut v = CMatrix::identity(n);
    if n == 1 {
        return (alloc::vec![a.get(0, 0).re], v);
    }
    let scale = a.frobenius().max(1e-300);
    let skip_tol = 1e-300;
    for _ in 0..MAX_SWEEPS {
        let mut off = 0.0f64;
        for p in 0..n {
            for q in (p + 1)..n {
                off += a.get(p, q).norm_sqr();
            }
        }
        if libm::sqrt(2.0 * off) <= 1e-15 * scale {
            break;
        }
        for p in 0..(n - 1) {
            for q in (p + 1)..n {
                let apq = a.get(p, q);
                let abs_apq = apq.norm();
                if abs_apq <= skip_tol {
                    continue;
                }
                let app = a.get(p, p).re;
                let aqq = a.get(q, q).re;
                let phase = apq / abs_apq; // e^{iβ}
                let w = phase.conj();
                let tau = (aqq - app) / (2.0 * abs_apq);
                let t = if tau >= 0.0 {
                    1.0 / (tau + libm::sqrt(1.0 + tau * tau))
                } else {
                    -1.0 / (-tau + libm::sqrt(1.0 + tau * tau))
                };
                let c = 1.0 / libm::sqrt(1.0 + t * t);
                let s = t * c;
                let ws = w * s;
                let wc = w * c;
                // A ← A·J with J = [[c, s], [−s·w, c·w]] on columns (p, q).
                for k in 0..n {
                    let akp = a.get(k, p);
                    let akq = a.get(k, q);
                    a.set(k, p, akp * c - akq * ws);
                    a.set(k, q, akp * s + akq * wc);
                }
                // A ← J†·A on rows (p, q).
                let ps = phase * s;
                let pc = phase * c;
                for k in 0..n {
                    let apk = a.get(p, k);
                    let aqk = a.get(q, k);
                    a.set(p, k, apk * c - aqk * ps);
                    a.set(q, k, apk * s + aqk * pc);
                }
                // The pivot is exactly zeroed and the diagonal stays real.
                a.set(p, q, ZERO);
                a.set(q, p, ZERO);
                let dp = a.get(p, p).re;
                let dq = a.get(q, q).re;
                a.set(p, p, C64::new(dp, 0.0));
                a.set(q, q, C64::new(dq, 0.0));
                // V ← V·J accumulates the eigenvectors.
                for k in 0..n {
                    let vkp = v.get(k, p);
                    let vkq = v.get(k, q);
                    v.set(k, p, vkp * c - vkq * ws);
                    v.set(k, q, vkp * s + vkq * wc);
                }
            }
        }
    }
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| {
        a.get(i, i)
            .re
            .partial_cmp(&a.get(j, j).re)
            .unwrap_or(core::cmp::Ordering::Equal)
    });
    let values: Vec<f64> = order.iter().map(|&i| a.get(i, i).re).collect();
    let vectors = CMatrix::from_fn(n, n, |i, k| v.get(i, order[k]));
    (values, vectors)
}

/// Singular values in ascending order.
fn singular_values(m: &CMatrix) -> Result<Vec<f64>> {
    if m.is_square() && m.herm_defect() <= HERM_TOL * (1.0 + m.max_abs()) {
        let mut sv: Vec<f64> = hermitian_eigenvalues(&m.symmetrized())?
            .into_iter()
            .map(f64::abs)
            .collect();
        sv.sort_by(|a, b| a.partial_cmp(b).unwrap_or(core::cmp::Ordering::Equal));
        return Ok(sv);
    }
    // σ(M) = sqrt(eig(M†M)), using whichever Gram matrix is smaller.
    let gram = if m.rows() >= m.cols() {
        m.dagger().mul(m)
    } else {
        m.mul(&m.dagger())
    };
    let eigs = hermitian_eigenvalues(&gram.symmetrized())?;
    Ok(eigs
        .into_iter()
        .map(|l| libm::sqrt(l.max(0.0)))
        .collect())
}

/// Schatten p-norm (Σ σ_i^p)^(1/p); p = ∞ gives the largest singular value.
pub fn schatten_norm(m: &CMatrix, p: f64) -> Result<f64> {
    if p.is_nan() || p < 1.0 {
        return Err(Error::domain(format!("Schatten norm needs p ≥ 1, got {p}")));
    }
    let sv = singular_values(m)?;
    let top = sv.last().copied().unwrap_or(0.0);
    if p.is_infinite() {
        return Ok(top);
    }
    if top == 0.0 {
        return Ok(0.0);
    }
    if p == 1.0 {
        return Ok(sv.iter().sum());
    }
    // Scale by the top singular value so large p cannot overflow.
    let sum: f64 = sv.iter().map(|&s| libm::pow(s / top, p)).sum();
    Ok(top * libm::pow(sum, 1.0 / p))
}

/// Trace norm ‖M‖₁.
pub fn trace_norm(m: &CMatrix) -> Result<f64> {
    schatten_norm(m, 1.0)
}

/// Operator norm ‖M‖∞.
pub fn operator_norm(m: &CMatrix) -> Result<f64> {
    schatten_norm(m, f64::INFINITY)
}

/// S^{−1/2} of a Hermitian PSD matrix with every eigenvalue above `floor`.
pub fn inv_sqrt_psd(s: &CMatrix, floor: f64) -> Result<CMatrix> {
    let eig = hermitian_eig(s)?;
    if eig.min() <= floor {
        return Err(Error::Singular { min_eig: eig.min(), floor });
    }
    Ok(eig.apply_spectral(|l| 1.0 / libm::sqrt(l)))
}

/// Principal square root of a Hermitian PSD matrix (eigenvalues in
/// [−EIG_CLIP, 0] are clipped to zero first).
pub fn sqrt_psd(m: &CMatrix) -> Result<CMatrix> {
    let eig = hermitian_eig(m)?;
    let scale = eig.max().abs().max(1.0);
    if eig.min() < -1e-9 * scale {
        return Err(Error::NotPsd { min_eig: eig.min() });
    }
    Ok(eig.apply_spectral(|l| libm::sqrt(l.max(0.0))))
}

/// Number of eigenvalues above rel_tol × (largest eigenvalue) of a Hermitian
/// PSD matrix.
pub fn numerical_rank(m: &CMatrix, rel_tol: f64) -> Result<usize> {
    let eig = hermitian_eig(m)?;
    let top = eig.max();
    if eig.min() < -1e-8 * (1.0 + top.abs()) {
        return Err(Error::NotPsd { min_eig: eig.min() });
    }
    if top <= 0.0 {
        return Ok(0);
    }
    Ok(eig.values.iter().filter(|&&l| l > rel_tol * top).count())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mat::{CVector, ONE, ZERO};
    use crate::rng::SplitMix64;

    fn random_hermitian(n: usize, rng: &mut SplitMix64) -> CMatrix {
        let g = CMatrix::from_fn(n, n, |_, _| rng.next_complex_gaussian());
        g.add(&g.dagger()).scale_re(0.5)
    }

    #[test]
    fn eig_identity() {
        let eig = hermitian_eig(&CMatrix::identity(2)).unwrap();
        assert!((eig.values[0] - 1.0).abs() < 1e-14);
        assert!((eig.values[1] - 1.0).abs() < 1e-14);
    }

    #[test]
    fn eig_diagonal_sorted_ascending() {
        let eig = hermitian_eig(&CMatrix::from_diag(&[3.0, 1.0])).unwrap();
        assert!((eig.values[0] - 1.0).abs() < 1e-14);
        assert!((eig.values[1] - 3.0).abs() < 1e-14);
    }

    #[test]
    fn eig_pauli_x() {
        let x = CMatrix::new(2, 2, alloc::vec![ZERO, ONE, ONE, ZERO]).unwrap();
        let eig = hermitian_eig(&x).unwrap();
        assert!((eig.values[0] + 1.0).abs() < 1e-14);
        assert!((eig.values[1] - 1.0).abs() < 1e-14);
        // Eigenvector columns must be unitary.
        let gram = eig.vectors.dagger().mul(&eig.vectors);
        assert!(gram.max_abs_diff(&CMatrix::identity(2)) < 1e-14);
    }

    #[test]
    fn eig_rejects_non_hermitian() {
        let m = CMatrix::new(2, 2, alloc::vec![ONE, ONE, ZERO, ONE]).unwrap();
        assert!(matches!(hermitian_eig(&m), Err(Error::NotHermitian { .. })));
        let rect = CMatrix::zeros(2, 3);
        assert!(matches!(hermitian_eig(&rect), Err(Error::Shape { .. })));
    }

    #[test]
    fn eig_reconstructs_input() {
        let mut rng = SplitMix64::new(2024);
        for n in [2usize, 3, 5, 8, 16] {
            let m = random_hermitian(n, &mut rng);
            let eig = hermitian_eig(&m).unwrap();
            let rebuilt = eig.apply_spectral(|l| l);
            let tol = 1e-12 * (1.0 + eig.values.iter().fold(0.0f64, |a, &b| a.max(b.abs())));
            assert!(rebuilt.max_abs_diff(&m) < tol, "n={n}");
        }
    }

    #[test]
    fn schatten_norm_examples() {
        let m = CMatrix::from_diag(&[1.0, -2.0]);
        assert!((schatten_norm(&m, 1.0).unwrap() - 3.0).abs() < 1e-14);
        assert!((schatten_norm(&m, f64::INFINITY).unwrap() - 2.0).abs() < 1e-14);
        assert!(matches!(schatten_norm(&m, 0.5), Err(Error::Domain { .. })));
    }

    #[test]
    fn schatten_two_matches_frobenius() {
        // Independent oracle: the entrywise sum of squares.
        let mut rng = SplitMix64::new(99);
        for _ in 0..20 {
            let m = CMatrix::from_fn(6, 6, |_, _| rng.next_complex_gaussian());
            let direct = libm::sqrt(m.data().iter().map(|c| c.norm_sqr()).sum::<f64>());
            let via_sv = schatten_norm(&m, 2.0).unwrap();
            assert!((via_sv - direct).abs() <= 1e-12 * direct);
        }
    }

    #[test]
    fn schatten_norm_monotone_in_p() {
        let mut rng = SplitMix64::new(4);
        let ps = [1.0, 1.3, 1.7, 2.0, 2.5, 3.0, 4.5, 7.0, 12.0, f64::INFINITY];
        for _ in 0..5 {
            let m = CMatrix::from_fn(5, 5, |_, _| rng.next_complex_gaussian());
            let mut prev = f64::INFINITY;
            for &p in &ps {
                let v = schatten_norm(&m, p).unwrap();
                assert!(v <= prev + 1e-12 * (1.0 + prev.abs()));
                prev = v;
            }
        }
    }

    #[test]
    fn inv_sqrt_diagonal_and_identity() {
        let id = CMatrix::identity(3);
        assert!(inv_sqrt_psd(&id, 0.0).unwrap().max_abs_diff(&id) < 1e-14);
        let s = CMatrix::from_diag(&[4.0, 9.0]);
        let r = inv_sqrt_psd(&s, 0.0).unwrap();
        let expected = CMatrix::from_diag(&[0.5, 1.0 / 3.0]);
        assert!(r.max_abs_diff(&expected) < 1e-14);
    }

    #[test]
    fn inv_sqrt_reconstruction_and_commutation() {
        let mut rng = SplitMix64::new(31);
        for _ in 0..10 {
            // PSD with spectrum inside [0.9, 1.1].
            let u = crate::rng::haar_unitary(6, &mut rng);
            let spectrum: Vec<f64> = (0..6).map(|_| 0.9 + 0.2 * rng.next_f64()).collect();
            let s = u.mul(&CMatrix::from_diag(&spectrum)).mul(&u.dagger()).symmetrized();
            let r = inv_sqrt_psd(&s, 0.0).unwrap();
            let id = CMatrix::identity(6);
            assert!(r.mul(&s).mul(&r).max_abs_diff(&id) < 1e-12);
            let comm = r.mul(&s).sub(&s.mul(&r));
            assert!(comm.max_abs() < 1e-12);
        }
    }

    #[test]
    fn inv_sqrt_rejects_floor_violation() {
        let s = CMatrix::from_diag(&[1.0, 1e-14]);
        assert!(matches!(inv_sqrt_psd(&s, 1e-12), Err(Error::Singular { .. })));
    }

    #[test]
    fn numerical_rank_thresholding() {
        let m = CMatrix::from_diag(&[1.0, 1e-16, 0.0]);
        assert_eq!(numerical_rank(&m, 1e-10).unwrap(), 1);
        for d in [2usize, 5, 9] {
            assert_eq!(numerical_rank(&CMatrix::identity(d), DEFAULT_RANK_TOL).unwrap(), d);
        }
    }

    #[test]
    fn sqrt_psd_squares_back() {
        let mut rng = SplitMix64::new(8);
        let rho = crate::rng::random_density_matrix(5, &mut rng);
        let r = sqrt_psd(&rho).unwrap();
        assert!(r.mul(&r).max_abs_diff(&rho) < 1e-12);
    }

    #[test]
    fn spectral_function_uses_unit_columns() {
        let mut rng = SplitMix64::new(77);
        let m = random_hermitian(4, &mut rng);
        let eig = hermitian_eig(&m).unwrap();
        for k in 0..4 {
            let col: CVector = eig.column(k);
            assert!((col.norm() - 1.0).abs() < 1e-13);
        }
    }
}
