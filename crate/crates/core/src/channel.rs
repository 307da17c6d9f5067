//! Canonical CP-map representation and the conversions among Kraus,
//! Stinespring and Choi forms.
//!
//! The Kraus list is the canonical form; Stinespring and Choi are derived
//! views computed on demand. Channels are immutable after construction and
//! completely positive by construction.

use alloc::format;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::linalg::{hermitian_eig, numerical_rank};
use crate::mat::{partial_trace, CMatrix, CVector, Factor, TensorIndex, C64, ZERO};

/// Trace-preservation defect threshold for the exact flag.
pub const TP_TOL: f64 = 1e-10;

/// How close Σ K†K is to the identity.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum TpFlag {
    /// ‖Σ K†K − 1‖∞ ≤ 1e-10.
    Exact,
    /// Defect below 1: the normalization witness is still invertible.
    Approximate { defect: f64 },
    /// Defect at least 1.
    NonTp { defect: f64 },
}

impl TpFlag {
    pub fn defect(&self) -> f64 {
        match *self {
            TpFlag::Exact => 0.0,
            TpFlag::Approximate { defect } | TpFlag::NonTp { defect } => defect,
        }
    }

    pub fn is_exact(&self) -> bool {
        matches!(self, TpFlag::Exact)
    }

    fn from_defect(defect: f64) -> Self {
        if defect <= TP_TOL {
            TpFlag::Exact
        } else if defect < 1.0 {
            TpFlag::Approximate { defect }
        } else {
            TpFlag::NonTp { defect }
        }
    }
}

/// Completely positive map held as an ordered list of Kraus operators,
/// each of shape dim_out × dim_in.
#[derive(Clone, Debug)]
pub struct Channel {
    dim_in: usize,
    dim_out: usize,
    kraus: Vec<CMatrix>,
    tp_flag: TpFlag,
}

impl Channel {
    /// Build a channel from Kraus operators; the trace-preservation flag is
    /// computed from ‖Σ K†K − 1‖∞.
    pub fn from_kraus(ops: Vec<CMatrix>) -> Result<Self> {
        let first = ops.first().ok_or(Error::EmptyKraus)?;
        let (dim_out, dim_in) = (first.rows(), first.cols());
        for (i, op) in ops.iter().enumerate() {
            if op.rows() != dim_out || op.cols() != dim_in {
                return Err(Error::shape(format!(
                    "Kraus operator {i} is {}x{}, expected {dim_out}x{dim_in}",
                    op.rows(),
                    op.cols()
                )));
            }
        }
        let witness = kraus_sum(&ops, dim_in);
        let defect = tp_defect_of(&witness)?;
        Ok(Channel {
            dim_in,
            dim_out,
            kraus: ops,
            tp_flag: TpFlag::from_defect(defect),
        })
    }

    /// Same construction when the witness S = Σ K†K is already at hand.
    pub(crate) fn from_kraus_with_witness(ops: Vec<CMatrix>, witness: &CMatrix) -> Result<Self> {
        let first = ops.first().ok_or(Error::EmptyKraus)?;
        let (dim_out, dim_in) = (first.rows(), first.cols());
        let defect = tp_defect_of(witness)?;
        Ok(Channel {
            dim_in,
            dim_out,
            kraus: ops,
            tp_flag: TpFlag::from_defect(defect),
        })
    }

    pub fn dim_in(&self) -> usize {
        self.dim_in
    }

    pub fn dim_out(&self) -> usize {
        self.dim_out
    }

    pub fn kraus(&self) -> &[CMatrix] {
        &self.kraus
    }

    pub fn tp_flag(&self) -> TpFlag {
        self.tp_flag
    }

    /// Normalization witness Σ K†K.
    pub fn kraus_sum(&self) -> CMatrix {
        kraus_sum(&self.kraus, self.dim_in)
    }

    /// Apply to a density operator. The input is validated as a state:
    /// Hermitian and trace 1 within 1e-10, PSD within 1e-9.
    pub fn apply(&self, rho: &CMatrix) -> Result<CMatrix> {
        validate_state(rho, self.dim_in)?;
        self.apply_matrix(rho)
    }

    /// Apply to an arbitrary matrix of the right shape (no state checks).
    pub fn apply_matrix(&self, x: &CMatrix) -> Result<CMatrix> {
        if !x.is_square() || x.rows() != self.dim_in {
            return Err(Error::shape(format!(
                "input is {}x{}, channel expects {}x{}",
                x.rows(),
                x.cols(),
                self.dim_in,
                self.dim_in
            )));
        }
        let mut out = CMatrix::zeros(self.dim_out, self.dim_out);
        for k in &self.kraus {
            let kx = k.mul(x);
            out.add_assign(&kx.mul(&k.dagger()));
        }
        Ok(out)
    }

    /// Apply to a pure state given as a unit vector: Σ (Kψ)(Kψ)†.
    pub fn apply_pure(&self, psi: &CVector) -> Result<CMatrix> {
        if psi.dim() != self.dim_in {
            return Err(Error::shape(format!(
                "input vector has dimension {}, channel expects {}",
                psi.dim(),
                self.dim_in
            )));
        }
        let mut out = CMatrix::zeros(self.dim_out, self.dim_out);
        for k in &self.kraus {
            let w = k.mul_vec(psi);
            out.add_scaled_outer(&w, 1.0);
        }
        Ok(out)
    }

    /// Apply the dual map without materializing it: Σ K† Y K.
    pub fn dual_apply(&self, y: &CMatrix) -> Result<CMatrix> {
        if !y.is_square() || y.rows() != self.dim_out {
            return Err(Error::shape(format!(
                "dual input is {}x{}, expected {}x{}",
                y.rows(),
                y.cols(),
                self.dim_out,
                self.dim_out
            )));
        }
        let mut out = CMatrix::zeros(self.dim_in, self.dim_in);
        for k in &self.kraus {
            let kd = k.dagger();
            out.add_assign(&kd.mul(y).mul(k));
        }
        Ok(out)
    }

    /// Trace-normalized Choi-Jamiolkowski state on A⊗B (A slow, B fast):
    /// τ = (1/|A|) Σ_{jk} |j⟩⟨k| ⊗ N(|j⟩⟨k|).
    pub fn to_choi(&self) -> ChoiMatrix {
        let (da, db) = (self.dim_in, self.dim_out);
        let n = da * db;
        let mut tau = CMatrix::zeros(n, n);
        let weight = 1.0 / da as f64;
        // τ = (1/|A|) Σ_i v_i v_i† with v_i the (A-slow) vectorization of K_i.
        for k in &self.kraus {
            let mut v = CVector::zeros(n);
            for a in 0..da {
                for b in 0..db {
                    v.as_mut_slice()[a * db + b] = k.get(b, a);
                }
            }
            tau.add_scaled_outer(&v, weight);
        }
        ChoiMatrix { matrix: tau, dim_in: da, dim_out: db }
    }

    /// Stack the Kraus operators into V : A → B⊗E with |E| = number of
    /// Kraus operators; row (b, e) of V is row b of K_e.
    pub fn stinespring(&self) -> StinespringIsometry {
        let dim_env = self.kraus.len();
        let mut v = CMatrix::zeros(self.dim_out * dim_env, self.dim_in);
        for (e, k) in self.kraus.iter().enumerate() {
            for b in 0..self.dim_out {
                for a in 0..self.dim_in {
                    v.set(b * dim_env + e, a, k.get(b, a));
                }
            }
        }
        StinespringIsometry {
            matrix: v,
            dim_in: self.dim_in,
            dim_out: self.dim_out,
            dim_env,
        }
    }

    /// Conjugate (dual) map, with Kraus operators K_i†. It is unital iff
    /// this channel is trace preserving.
    pub fn dual(&self) -> Channel {
        let ops: Vec<CMatrix> = self.kraus.iter().map(CMatrix::dagger).collect();
        Channel::from_kraus(ops).expect("dual of a valid channel is valid")
    }

    /// Numerical rank of the Choi matrix.
    pub fn kraus_rank(&self, rel_tol: f64) -> usize {
        numerical_rank(&self.to_choi().matrix, rel_tol)
            .expect("Choi matrix of a Kraus-form map is PSD")
    }

    /// Apply the channel on the A factor of a state on A⊗C (identity on C).
    pub fn apply_extended(&self, rho_ac: &CMatrix) -> Result<CMatrix> {
        if !rho_ac.is_square() || rho_ac.rows() % self.dim_in != 0 {
            return Err(Error::shape(format!(
                "extended input is {}x{}, not a multiple of dim_in {}",
                rho_ac.rows(),
                rho_ac.cols(),
                self.dim_in
            )));
        }
        let dc = rho_ac.rows() / self.dim_in;
        let (da, db) = (self.dim_in, self.dim_out);
        let mut out = CMatrix::zeros(db * dc, db * dc);
        let mut y = CMatrix::zeros(db * dc, da * dc);
        for k in &self.kraus {
            // y = (K ⊗ 1) ρ without materializing the Kronecker factor.
            for b in 0..db {
                for c in 0..dc {
                    let row_out = b * dc + c;
                    for col in 0..da * dc {
                        let mut acc = ZERO;
                        for a in 0..da {
                            let kba = k.get(b, a);
                            if kba != ZERO {
                                acc += kba * rho_ac.get(a * dc + c, col);
                            }
                        }
                        y.set(row_out, col, acc);
                    }
                }
            }
            // out += y (K ⊗ 1)†.
            for row in 0..db * dc {
                for b2 in 0..db {
                    for c2 in 0..dc {
                        let mut acc = ZERO;
                        for a2 in 0..da {
                            let conj = k.get(b2, a2).conj();
                            if conj != ZERO {
                                acc += y.get(row, a2 * dc + c2) * conj;
                            }
                        }
                        let prev = out.get(row, b2 * dc + c2);
                        out.set(row, b2 * dc + c2, prev + acc);
                    }
                }
            }
        }
        Ok(out)
    }
}

/// Stinespring dilation V : A ↪ B⊗E, stored with B slow and E fast.
#[derive(Clone, Debug)]
pub struct StinespringIsometry {
    matrix: CMatrix,
    dim_in: usize,
    dim_out: usize,
    dim_env: usize,
}

impl StinespringIsometry {
    pub fn matrix(&self) -> &CMatrix {
        &self.matrix
    }

    pub fn dim_in(&self) -> usize {
        self.dim_in
    }

    pub fn dim_out(&self) -> usize {
        self.dim_out
    }

    pub fn dim_env(&self) -> usize {
        self.dim_env
    }

    /// V ψ in B⊗E.
    pub fn apply_vec(&self, psi: &CVector) -> Result<CVector> {
        if psi.dim() != self.dim_in {
            return Err(Error::shape(format!(
                "vector has dimension {}, isometry expects {}",
                psi.dim(),
                self.dim_in
            )));
        }
        Ok(self.matrix.mul_vec(psi))
    }

    /// V ρ V† on B⊗E.
    pub fn conjugate_state(&self, rho: &CMatrix) -> Result<CMatrix> {
        if !rho.is_square() || rho.rows() != self.dim_in {
            return Err(Error::shape("state dimension does not match the isometry input"));
        }
        Ok(self.matrix.mul(rho).mul(&self.matrix.dagger()))
    }

    /// ‖V†V − 1‖∞.
    pub fn isometry_defect(&self) -> f64 {
        let gram = self.matrix.dagger().mul(&self.matrix);
        tp_defect_of(&gram).unwrap_or(f64::INFINITY)
    }

    pub fn env_index(&self) -> TensorIndex {
        TensorIndex::pair(self.dim_out, self.dim_env).expect("positive dims")
    }

    /// tr_E(V ρ V†): the channel action recovered from the dilation.
    pub fn channel_action(&self, rho: &CMatrix) -> Result<CMatrix> {
        let big = self.conjugate_state(rho)?;
        partial_trace(&big, &self.env_index(), Factor::Left)
    }
}

/// Trace-normalized Choi state of a CP map, on A⊗B with A slow.
#[derive(Clone, Debug)]
pub struct ChoiMatrix {
    matrix: CMatrix,
    dim_in: usize,
    dim_out: usize,
}

impl ChoiMatrix {
    pub fn new(matrix: CMatrix, dim_in: usize, dim_out: usize) -> Result<Self> {
        if !matrix.is_square() || matrix.rows() != dim_in * dim_out {
            return Err(Error::shape(format!(
                "Choi matrix is {}x{}, expected {}",
                matrix.rows(),
                matrix.cols(),
                dim_in * dim_out
            )));
        }
        Ok(ChoiMatrix { matrix, dim_in, dim_out })
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.matrix
    }

    pub fn dim_in(&self) -> usize {
        self.dim_in
    }

    pub fn dim_out(&self) -> usize {
        self.dim_out
    }

    pub fn index(&self) -> TensorIndex {
        TensorIndex::pair(self.dim_in, self.dim_out).expect("positive dims")
    }
}

/// Extract a Kraus form from a Choi state: eigendecompose |A|·τ and turn
/// each retained eigenpair into one operator by index reshaping. Eigenvalues
/// at or above rel_tol × (largest) are kept (ties inclusive).
pub fn kraus_from_choi(tau: &ChoiMatrix, rel_tol: f64) -> Result<Channel> {
    let (da, db) = (tau.dim_in, tau.dim_out);
    let eig = hermitian_eig(&tau.matrix)?;
    if eig.min() < -1e-8 {
        return Err(Error::NotCp { min_eig: eig.min() });
    }
    let top = eig.max().max(0.0);
    if top <= 0.0 {
        return Err(Error::domain("Choi matrix has no positive spectrum"));
    }
    // The trace-1 Choi convention scales back by |A| here, and only here.
    let scale = da as f64;
    let mut ops = Vec::new();
    for (k, &lambda) in eig.values.iter().enumerate() {
        if lambda < rel_tol * top {
            continue;
        }
        let coeff = libm::sqrt(lambda.max(0.0) * scale);
        let col = eig.column(k);
        let mut op = CMatrix::zeros(db, da);
        for a in 0..da {
            for b in 0..db {
                op.set(b, a, col.as_slice()[a * db + b] * C64::new(coeff, 0.0));
            }
        }
        ops.push(op);
    }
    Channel::from_kraus(ops)
}

fn kraus_sum(ops: &[CMatrix], dim_in: usize) -> CMatrix {
    let mut s = CMatrix::zeros(dim_in, dim_in);
    for k in ops {
        s.add_assign(&k.dagger().mul(k));
    }
    s.symmetrized()
}

/// ‖S − 1‖∞ for a Hermitian witness S.
pub(crate) fn tp_defect_of(witness: &CMatrix) -> Result<f64> {
    let eig = hermitian_eig(witness)?;
    Ok(eig
        .values
        .iter()
        .map(|l| (l - 1.0).abs())
        .fold(0.0, f64::max))
}

/// State validation shared by apply-style entry points.
pub(crate) fn validate_state(rho: &CMatrix, dim: usize) -> Result<()> {
    if !rho.is_square() || rho.rows() != dim {
        return Err(Error::shape(format!(
            "state is {}x{}, expected {dim}x{dim}",
            rho.rows(),
            rho.cols()
        )));
    }
    if rho.herm_defect() > 1e-10 * (1.0 + rho.max_abs()) {
        return Err(Error::not_a_state("not Hermitian within 1e-10"));
    }
    let tr = rho.trace();
    if (tr.re - 1.0).abs() > 1e-10 || tr.im.abs() > 1e-10 {
        return Err(Error::not_a_state(format!("trace {tr} is not 1 within 1e-10")));
    }
    let eig = hermitian_eig(&rho.symmetrized())?;
    if eig.min() < -1e-9 {
        return Err(Error::not_a_state(format!(
            "negative eigenvalue {:.3e}",
            eig.min()
        )));
    }
    Ok(())
}
