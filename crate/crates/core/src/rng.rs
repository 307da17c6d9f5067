//! Seeded deterministic randomness.
//!
//! All sampling in the crate goes through a SplitMix64 stream: the state
//! advances by a fixed odd constant and the output is a bijective mix of it,
//! so the k-th draw is a pure function of (seed, k). Gaussians come from the
//! Box-Muller transform over that stream. The substream for indexed work
//! unit i (a slice, a trial) finalizes the seed and the index separately
//! before combining them, so parallel and serial generation agree bit for
//! bit and nearby (seed, index) pairs land on unrelated stream positions.

use alloc::vec::Vec;

use crate::mat::{CMatrix, CVector, C64};

const GAMMA: u64 = 0x9E37_79B9_7F4A_7C15;

#[inline]
fn mix64(mut z: u64) -> u64 {
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// SplitMix64 pseudo-random stream.
#[derive(Clone, Debug)]
pub struct SplitMix64 {
    state: u64,
}

impl SplitMix64 {
    pub fn new(seed: u64) -> Self {
        SplitMix64 { state: seed }
    }

    /// Substream for an indexed unit of work (slice, trial, pool entry).
    /// A plain `seed ^ index` would make xor-related seeds share their
    /// whole substream set, so both inputs are finalized first.
    pub fn substream(seed: u64, index: u64) -> Self {
        SplitMix64::new(mix64(seed ^ 0x243F_6A88_85A3_08D3).wrapping_add(mix64(index)))
    }

    #[inline]
    pub fn next_u64(&mut self) -> u64 {
        self.state = self.state.wrapping_add(GAMMA);
        mix64(self.state)
    }

    /// Uniform in [0, 1).
    #[inline]
    pub fn next_f64(&mut self) -> f64 {
        (self.next_u64() >> 11) as f64 * (1.0 / 9007199254740992.0)
    }

    /// Uniform in (0, 1]; safe as a logarithm argument.
    #[inline]
    pub fn next_open01(&mut self) -> f64 {
        ((self.next_u64() >> 11) + 1) as f64 * (1.0 / 9007199254740992.0)
    }

    /// Uniform index in 0..bound.
    #[inline]
    pub fn next_index(&mut self, bound: usize) -> usize {
        (self.next_u64() % bound as u64) as usize
    }

    /// One Box-Muller pair of independent standard normals.
    pub fn next_gaussian_pair(&mut self) -> (f64, f64) {
        let u1 = self.next_open01();
        let u2 = self.next_f64();
        let r = libm::sqrt(-2.0 * libm::log(u1));
        let theta = 2.0 * core::f64::consts::PI * u2;
        (r * libm::cos(theta), r * libm::sin(theta))
    }

    /// Standard complex Gaussian (independent N(0,1) real and imaginary parts).
    #[inline]
    pub fn next_complex_gaussian(&mut self) -> C64 {
        let (re, im) = self.next_gaussian_pair();
        C64::new(re, im)
    }
}

/// Gaussian vector normalized to the unit sphere: Haar-uniform direction.
pub fn haar_unit_vector(dim: usize, rng: &mut SplitMix64) -> CVector {
    loop {
        let g: Vec<C64> = (0..dim).map(|_| rng.next_complex_gaussian()).collect();
        let v = CVector::from_vec(g);
        if let Ok(u) = v.normalized() {
            return u;
        }
    }
}

/// Deterministic pool of Haar unit vectors, one substream per entry.
pub fn haar_unit_vectors(dim: usize, count: usize, seed: u64) -> Vec<CVector> {
    (0..count)
        .map(|i| haar_unit_vector(dim, &mut SplitMix64::substream(seed, i as u64)))
        .collect()
}

/// Orthonormal columns from a complex Gaussian matrix (modified Gram-Schmidt
/// with re-orthogonalization); the triangular factor has a positive diagonal
/// by construction, which makes the factor unique and the column distribution
/// Haar whenever rows ≥ cols.
pub fn gaussian_isometry(rows: usize, cols: usize, rng: &mut SplitMix64) -> CMatrix {
    assert!(rows >= cols, "gaussian_isometry: rows must be at least cols");
    let mut columns: Vec<CVector> = Vec::with_capacity(cols);
    for _ in 0..cols {
        let mut v = CVector::from_vec((0..rows).map(|_| rng.next_complex_gaussian()).collect());
        // Two rounds of projection keep orthogonality at machine precision.
        for _ in 0..2 {
            for q in &columns {
                let coeff = q.inner(&v);
                v = v.sub(&q.scale(coeff));
            }
        }
        match v.normalized() {
            Ok(u) => columns.push(u),
            Err(_) => {
                // Degenerate draw (probability zero); take a fresh one.
                let u = haar_unit_vector(rows, rng);
                columns.push(u);
            }
        }
    }
    CMatrix::from_fn(rows, cols, |i, j| columns[j].as_slice()[i])
}

/// Haar-distributed unitary.
pub fn haar_unitary(dim: usize, rng: &mut SplitMix64) -> CMatrix {
    gaussian_isometry(dim, dim, rng)
}

/// Random full-rank density matrix: Haar eigenbasis with a normalized
/// uniform spectrum.
pub fn random_density_matrix(dim: usize, rng: &mut SplitMix64) -> CMatrix {
    let u = haar_unitary(dim, rng);
    let mut spectrum: Vec<f64> = (0..dim).map(|_| rng.next_open01()).collect();
    let total: f64 = spectrum.iter().sum();
    for s in &mut spectrum {
        *s /= total;
    }
    u.mul(&CMatrix::from_diag(&spectrum)).mul(&u.dagger()).symmetrized()
}

/// Random PSD operator with spectrum in [0, 1]: a generic POVM element.
pub fn random_povm_element(dim: usize, rng: &mut SplitMix64) -> CMatrix {
    let u = haar_unitary(dim, rng);
    let spectrum: Vec<f64> = (0..dim).map(|_| rng.next_f64()).collect();
    u.mul(&CMatrix::from_diag(&spectrum)).mul(&u.dagger()).symmetrized()
}
