//! Dense complex matrices and vectors in row-major order, plus the
//! tensor-index plumbing (left factor slow) used for partial traces.
//!
//! The storage convention is global: an operator on B⊗E stores B as the
//! slow index and E as the fast one, so row (b, e) lives at b·|E| + e.

use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use crate::error::{Error, Result};

pub type C64 = num_complex::Complex<f64>;

pub const ZERO: C64 = C64::new(0.0, 0.0);
pub const ONE: C64 = C64::new(1.0, 0.0);

/// Dense complex matrix, row-major.
#[derive(Clone, Debug, PartialEq)]
pub struct CMatrix {
    rows: usize,
    cols: usize,
    data: Vec<C64>,
}

impl CMatrix {
    pub fn new(rows: usize, cols: usize, data: Vec<C64>) -> Result<Self> {
        if data.len() != rows * cols {
            return Err(Error::shape(format!(
                "entries length {} does not equal {rows}x{cols}",
                data.len()
            )));
        }
        if rows == 0 || cols == 0 {
            return Err(Error::shape("zero-dimensional matrix"));
        }
        Ok(CMatrix { rows, cols, data })
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        CMatrix { rows, cols, data: vec![ZERO; rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = CMatrix::zeros(n, n);
        for i in 0..n {
            m.data[i * n + i] = ONE;
        }
        m
    }

    pub fn from_diag(diag: &[f64]) -> Self {
        let n = diag.len();
        let mut m = CMatrix::zeros(n, n);
        for (i, &d) in diag.iter().enumerate() {
            m.data[i * n + i] = C64::new(d, 0.0);
        }
        m
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> C64) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        CMatrix { rows, cols, data }
    }

    #[inline]
    pub fn rows(&self) -> usize {
        self.rows
    }

    #[inline]
    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> C64 {
        self.data[i * self.cols + j]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, v: C64) {
        self.data[i * self.cols + j] = v;
    }

    #[inline]
    pub fn row(&self, i: usize) -> &[C64] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn data(&self) -> &[C64] {
        &self.data
    }

    pub fn into_data(self) -> Vec<C64> {
        self.data
    }

    pub fn add(&self, other: &CMatrix) -> CMatrix {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols), "add: shape mismatch");
        let data = self.data.iter().zip(&other.data).map(|(a, b)| a + b).collect();
        CMatrix { rows: self.rows, cols: self.cols, data }
    }

    pub fn sub(&self, other: &CMatrix) -> CMatrix {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols), "sub: shape mismatch");
        let data = self.data.iter().zip(&other.data).map(|(a, b)| a - b).collect();
        CMatrix { rows: self.rows, cols: self.cols, data }
    }

    pub fn add_assign(&mut self, other: &CMatrix) {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols), "add_assign: shape mismatch");
        for (a, b) in self.data.iter_mut().zip(&other.data) {
            *a += b;
        }
    }

    pub fn scale(&self, factor: C64) -> CMatrix {
        let data = self.data.iter().map(|a| a * factor).collect();
        CMatrix { rows: self.rows, cols: self.cols, data }
    }

    pub fn scale_re(&self, factor: f64) -> CMatrix {
        self.scale(C64::new(factor, 0.0))
    }

    /// Matrix product self · other.
    pub fn mul(&self, other: &CMatrix) -> CMatrix {
        assert_eq!(self.cols, other.rows, "mul: inner dimension mismatch");
        let mut out = CMatrix::zeros(self.rows, other.cols);
        let n = other.cols;
        for i in 0..self.rows {
            let arow = self.row(i);
            let orow = &mut out.data[i * n..(i + 1) * n];
            for (k, &aik) in arow.iter().enumerate() {
                if aik == ZERO {
                    continue;
                }
                let brow = &other.data[k * n..(k + 1) * n];
                for j in 0..n {
                    orow[j] += aik * brow[j];
                }
            }
        }
        out
    }

    /// Conjugate transpose.
    pub fn dagger(&self) -> CMatrix {
        let mut out = CMatrix::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                out.data[j * self.rows + i] = self.get(i, j).conj();
            }
        }
        out
    }

    pub fn transpose(&self) -> CMatrix {
        let mut out = CMatrix::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                out.data[j * self.rows + i] = self.get(i, j);
            }
        }
        out
    }

    pub fn conj(&self) -> CMatrix {
        let data = self.data.iter().map(|a| a.conj()).collect();
        CMatrix { rows: self.rows, cols: self.cols, data }
    }

    pub fn trace(&self) -> C64 {
        assert!(self.is_square(), "trace: non-square matrix");
        (0..self.rows).map(|i| self.get(i, i)).sum()
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().map(|a| a.norm()).fold(0.0, f64::max)
    }

    pub fn max_abs_diff(&self, other: &CMatrix) -> f64 {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        self.data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }

    pub fn frobenius(&self) -> f64 {
        libm::sqrt(self.data.iter().map(|a| a.norm_sqr()).sum())
    }

    /// max_{ij} |M_ij − conj(M_ji)|; infinity for non-square input.
    pub fn herm_defect(&self) -> f64 {
        if !self.is_square() {
            return f64::INFINITY;
        }
        let mut worst = 0.0f64;
        for i in 0..self.rows {
            for j in i..self.cols {
                let d = (self.get(i, j) - self.get(j, i).conj()).norm();
                if d > worst {
                    worst = d;
                }
            }
        }
        worst
    }

    /// Hermitian within defect ≤ tol·(1 + max|M|).
    pub fn is_hermitian(&self, tol: f64) -> bool {
        self.is_square() && self.herm_defect() <= tol * (1.0 + self.max_abs())
    }

    /// (M + M†)/2.
    pub fn symmetrized(&self) -> CMatrix {
        assert!(self.is_square(), "symmetrized: non-square matrix");
        let mut out = self.clone();
        for i in 0..self.rows {
            for j in i..self.cols {
                let v = (self.get(i, j) + self.get(j, i).conj()).scale(0.5);
                out.set(i, j, v);
                out.set(j, i, v.conj());
            }
        }
        out
    }

    /// Kronecker product; left factor is the slow index.
    pub fn kron(&self, other: &CMatrix) -> CMatrix {
        let rows = self.rows * other.rows;
        let cols = self.cols * other.cols;
        let mut out = CMatrix::zeros(rows, cols);
        for i in 0..self.rows {
            for j in 0..self.cols {
                let a = self.get(i, j);
                if a == ZERO {
                    continue;
                }
                for k in 0..other.rows {
                    for l in 0..other.cols {
                        out.data[(i * other.rows + k) * cols + (j * other.cols + l)] =
                            a * other.get(k, l);
                    }
                }
            }
        }
        out
    }

    pub fn mul_vec(&self, v: &CVector) -> CVector {
        assert_eq!(self.cols, v.dim(), "mul_vec: dimension mismatch");
        let mut out = vec![ZERO; self.rows];
        for (i, o) in out.iter_mut().enumerate() {
            let row = self.row(i);
            let mut acc = ZERO;
            for (a, b) in row.iter().zip(v.as_slice()) {
                acc += a * b;
            }
            *o = acc;
        }
        CVector::from_vec(out)
    }

    /// Re(⟨y|M|y⟩).
    pub fn quad_form(&self, y: &CVector) -> f64 {
        y.inner(&self.mul_vec(y)).re
    }

    /// self += weight · v v†.
    pub fn add_scaled_outer(&mut self, v: &CVector, weight: f64) {
        assert!(self.is_square() && self.rows == v.dim());
        let n = self.rows;
        for i in 0..n {
            let vi = v.as_slice()[i] * weight;
            let row = &mut self.data[i * n..(i + 1) * n];
            for (j, r) in row.iter_mut().enumerate() {
                *r += vi * v.as_slice()[j].conj();
            }
        }
    }
}

/// Dense complex column vector.
#[derive(Clone, Debug, PartialEq)]
pub struct CVector {
    data: Vec<C64>,
}

impl CVector {
    pub fn from_vec(data: Vec<C64>) -> Self {
        CVector { data }
    }

    pub fn zeros(dim: usize) -> Self {
        CVector { data: vec![ZERO; dim] }
    }

    /// Computational basis vector |k⟩.
    pub fn basis(dim: usize, k: usize) -> Self {
        assert!(k < dim, "basis index out of range");
        let mut v = CVector::zeros(dim);
        v.data[k] = ONE;
        v
    }

    #[inline]
    pub fn dim(&self) -> usize {
        self.data.len()
    }

    #[inline]
    pub fn as_slice(&self) -> &[C64] {
        &self.data
    }

    pub fn as_mut_slice(&mut self) -> &mut [C64] {
        &mut self.data
    }

    pub fn into_vec(self) -> Vec<C64> {
        self.data
    }

    pub fn norm(&self) -> f64 {
        libm::sqrt(self.data.iter().map(|c| c.norm_sqr()).sum())
    }

    pub fn normalized(&self) -> Result<CVector> {
        let n = self.norm();
        if n < 1e-300 {
            return Err(Error::domain("cannot normalize the zero vector"));
        }
        Ok(self.scale_re(1.0 / n))
    }

    /// ⟨self|other⟩, conjugate-linear in self.
    pub fn inner(&self, other: &CVector) -> C64 {
        assert_eq!(self.dim(), other.dim(), "inner: dimension mismatch");
        self.data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| a.conj() * b)
            .sum()
    }

    /// |self⟩⟨other|.
    pub fn outer(&self, other: &CVector) -> CMatrix {
        let mut out = CMatrix::zeros(self.dim(), other.dim());
        for i in 0..self.dim() {
            for j in 0..other.dim() {
                out.set(i, j, self.data[i] * other.data[j].conj());
            }
        }
        out
    }

    /// Projector |self⟩⟨self|.
    pub fn projector(&self) -> CMatrix {
        self.outer(self)
    }

    /// |self⟩ ⊗ |other⟩ under the left-slow convention.
    pub fn tensor(&self, other: &CVector) -> CVector {
        let mut out = Vec::with_capacity(self.dim() * other.dim());
        for a in &self.data {
            for b in &other.data {
                out.push(a * b);
            }
        }
        CVector::from_vec(out)
    }

    pub fn conj(&self) -> CVector {
        CVector { data: self.data.iter().map(|c| c.conj()).collect() }
    }

    pub fn scale(&self, factor: C64) -> CVector {
        CVector { data: self.data.iter().map(|c| c * factor).collect() }
    }

    pub fn scale_re(&self, factor: f64) -> CVector {
        self.scale(C64::new(factor, 0.0))
    }

    pub fn add(&self, other: &CVector) -> CVector {
        assert_eq!(self.dim(), other.dim());
        CVector { data: self.data.iter().zip(&other.data).map(|(a, b)| a + b).collect() }
    }

    pub fn sub(&self, other: &CVector) -> CVector {
        assert_eq!(self.dim(), other.dim());
        CVector { data: self.data.iter().zip(&other.data).map(|(a, b)| a - b).collect() }
    }

    /// self + factor · other.
    pub fn add_scaled(&self, other: &CVector, factor: f64) -> CVector {
        assert_eq!(self.dim(), other.dim());
        CVector {
            data: self
                .data
                .iter()
                .zip(&other.data)
                .map(|(a, b)| a + b * factor)
                .collect(),
        }
    }
}

/// Ordered factor dimensions labelling a tensor-product index, left factor slow.
#[derive(Clone, Debug, PartialEq)]
pub struct TensorIndex {
    dims: Vec<usize>,
}

impl TensorIndex {
    pub fn new(dims: Vec<usize>) -> Result<Self> {
        if dims.is_empty() || dims.iter().any(|&d| d == 0) {
            return Err(Error::shape("tensor factors must be nonempty positive counts"));
        }
        Ok(TensorIndex { dims })
    }

    pub fn pair(left: usize, right: usize) -> Result<Self> {
        TensorIndex::new(vec![left, right])
    }

    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    pub fn total(&self) -> usize {
        self.dims.iter().product()
    }

    fn bipartite(&self) -> Result<(usize, usize)> {
        if self.dims.len() != 2 {
            return Err(Error::shape(format!(
                "expected a bipartite tensor index, got {} factors",
                self.dims.len()
            )));
        }
        Ok((self.dims[0], self.dims[1]))
    }
}

/// Which tensor factor to keep in a partial trace.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Factor {
    Left,
    Right,
}

/// Partial trace of a square matrix on a bipartite space, keeping one factor.
pub fn partial_trace(m: &CMatrix, idx: &TensorIndex, keep: Factor) -> Result<CMatrix> {
    let (dl, dr) = idx.bipartite()?;
    if !m.is_square() || m.rows() != dl * dr {
        return Err(Error::shape(format!(
            "matrix is {}x{} but tensor index expects {}x{}",
            m.rows(),
            m.cols(),
            dl * dr,
            dl * dr
        )));
    }
    match keep {
        Factor::Left => {
            let mut out = CMatrix::zeros(dl, dl);
            for i in 0..dl {
                for j in 0..dl {
                    let mut acc = ZERO;
                    for r in 0..dr {
                        acc += m.get(i * dr + r, j * dr + r);
                    }
                    out.set(i, j, acc);
                }
            }
            Ok(out)
        }
        Factor::Right => {
            let mut out = CMatrix::zeros(dr, dr);
            for r in 0..dr {
                for s in 0..dr {
                    let mut acc = ZERO;
                    for i in 0..dl {
                        acc += m.get(i * dr + r, i * dr + s);
                    }
                    out.set(r, s, acc);
                }
            }
            Ok(out)
        }
    }
}
