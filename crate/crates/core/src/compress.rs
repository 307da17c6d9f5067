//! Random environment slicing: sample unit vectors φ_1..φ_n in the
//! environment of a Stinespring dilation, average the single-Kraus CP maps
//! N_φ(ρ) = |E|·tr_E[(1⊗φ) VρV† (1⊗φ)], and optionally correct the result
//! to an exactly trace-preserving channel with the S^{−1/2} conjugation.
//!
//! Each N_φ is an unbiased estimator of the channel under Haar (or uniform
//! basis) sampling, so the n-slice average concentrates; the Monte-Carlo
//! oracles at the bottom expose the moment and tail behavior behind that.

use alloc::format;
use alloc::vec::Vec;

use crate::channel::{validate_state, Channel, StinespringIsometry, TpFlag};
use crate::error::{Error, Result};
use crate::linalg::{hermitian_eig, inv_sqrt_psd};
use crate::mat::{CMatrix, CVector, ZERO};
use crate::rng::{haar_unit_vector, SplitMix64};

/// Distribution of the environment vectors.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Sampler {
    /// Uniform on the unit sphere of E (normalized complex Gaussians).
    Haar,
    /// Uniform over the computational basis of E, with replacement.
    Basis,
    /// Every basis vector of E exactly once; requires n = |E| and
    /// reproduces the original channel exactly.
    BasisExhaustive,
}

impl Sampler {
    pub fn name(&self) -> &'static str {
        match self {
            Sampler::Haar => "haar",
            Sampler::Basis => "basis",
            Sampler::BasisExhaustive => "exhaustive",
        }
    }
}

/// What to compress and how: slice count, sampler, seed.
#[derive(Clone, Debug)]
pub struct CompressionPlan {
    pub n: usize,
    pub sampler: Sampler,
    pub seed: u64,
    /// Reporting only; the construction never consumes a target ε.
    pub epsilon_target: Option<f64>,
}

impl CompressionPlan {
    pub fn new(n: usize, sampler: Sampler, seed: u64) -> Result<Self> {
        if n == 0 {
            return Err(Error::param("compression plan needs n ≥ 1"));
        }
        Ok(CompressionPlan { n, sampler, seed, epsilon_target: None })
    }

    pub fn with_epsilon_target(mut self, eps: f64) -> Self {
        self.epsilon_target = Some(eps);
        self
    }
}

/// Output of `compress`: the sliced CP map, its normalization witness and
/// defect, the corrected channel when available, and the sampled vectors.
#[derive(Clone, Debug)]
pub struct CompressionResult {
    pub sliced: Channel,
    /// S = Σ K†K of the sliced map.
    pub witness_s: CMatrix,
    /// ‖S − 1‖∞.
    pub tp_defect: f64,
    /// Exactly TP correction; present iff tp_defect < 1.
    pub corrected: Option<Channel>,
    /// Environment dimension of the source dilation.
    pub env_dim: usize,
    /// The n sampled environment vectors.
    pub phis: Vec<CVector>,
    pub plan: CompressionPlan,
    /// Set when tp_defect ≥ 0.5: the correction exists but the proof's
    /// distance bounds no longer apply.
    pub warn_coarse: bool,
}

/// One environment vector from the requested sampler.
pub fn sample_env_vector(sampler: Sampler, dim_env: usize, rng: &mut SplitMix64) -> Result<CVector> {
    if dim_env == 0 {
        return Err(Error::param("environment dimension must be positive"));
    }
    match sampler {
        Sampler::Haar => Ok(haar_unit_vector(dim_env, rng)),
        Sampler::Basis => Ok(CVector::basis(dim_env, rng.next_index(dim_env))),
        Sampler::BasisExhaustive => Err(Error::param(
            "exhaustive basis vectors are enumerated by compress, not sampled",
        )),
    }
}

/// The single Kraus operator √|E| (1 ⊗ ⟨φ|) V of the slice map N_φ.
pub fn slice_kraus_operator(v: &StinespringIsometry, phi: &CVector) -> Result<CMatrix> {
    scaled_slice_kraus(v, phi, libm::sqrt(v.dim_env() as f64))
}

fn scaled_slice_kraus(v: &StinespringIsometry, phi: &CVector, scale: f64) -> Result<CMatrix> {
    let (da, db, de) = (v.dim_in(), v.dim_out(), v.dim_env());
    if phi.dim() != de {
        return Err(Error::shape(format!(
            "slice vector has dimension {}, environment is {de}",
            phi.dim()
        )));
    }
    let m = v.matrix();
    let mut k = CMatrix::zeros(db, da);
    for b in 0..db {
        for a in 0..da {
            let mut acc = ZERO;
            for e in 0..de {
                let phie = phi.as_slice()[e];
                if phie != ZERO {
                    acc += phie.conj() * m.get(b * de + e, a);
                }
            }
            k.set(b, a, acc * scale);
        }
    }
    Ok(k)
}

/// The slice map N_φ as a single-Kraus CP map.
pub fn slice_map(v: &StinespringIsometry, phi: &CVector) -> Result<Channel> {
    let k = slice_kraus_operator(v, phi)?;
    Channel::from_kraus(alloc::vec![k])
}

/// Average of n slice maps of the channel's dilation: the Kraus set
/// {√(|E|/n) (1 ⊗ ⟨φ_i|) V}. Each slice draws from its own substream of
/// (seed, i) so the result is deterministic and order-independent.
pub fn compress(ch: &Channel, plan: &CompressionPlan) -> Result<CompressionResult> {
    if let TpFlag::NonTp { defect } = ch.tp_flag() {
        return Err(Error::NonTp { defect });
    }
    let v = ch.stinespring();
    let s = v.dim_env();
    let phis: Vec<CVector> = match plan.sampler {
        Sampler::BasisExhaustive => {
            if plan.n != s {
                return Err(Error::param(format!(
                    "exhaustive basis mode needs n = |E| = {s}, got n = {}",
                    plan.n
                )));
            }
            (0..s).map(|e| CVector::basis(s, e)).collect()
        }
        sampler => (0..plan.n)
            .map(|i| {
                let mut rng = SplitMix64::substream(plan.seed, i as u64);
                sample_env_vector(sampler, s, &mut rng)
            })
            .collect::<Result<_>>()?,
    };
    let scale = libm::sqrt(s as f64 / plan.n as f64);
    let kraus: Vec<CMatrix> = phis
        .iter()
        .map(|phi| scaled_slice_kraus(&v, phi, scale))
        .collect::<Result<_>>()?;
    let mut witness = CMatrix::zeros(ch.dim_in(), ch.dim_in());
    for k in &kraus {
        witness.add_assign(&k.dagger().mul(k));
    }
    let witness = witness.symmetrized();
    let eig = hermitian_eig(&witness)?;
    let tp_defect = eig
        .values
        .iter()
        .map(|l| (l - 1.0).abs())
        .fold(0.0, f64::max);
    let sliced = Channel::from_kraus_with_witness(kraus, &witness)?;
    let corrected = if tp_defect < 1.0 {
        Some(correct_with_witness(&sliced, &witness)?)
    } else {
        None
    };
    Ok(CompressionResult {
        sliced,
        witness_s: witness,
        tp_defect,
        corrected,
        env_dim: s,
        phis,
        plan: plan.clone(),
        warn_coarse: tp_defect >= 0.5,
    })
}

/// The exactly trace-preserving correction {K_1 S^{−1/2}, …, K_n S^{−1/2}}.
pub fn tp_correct(result: &CompressionResult) -> Result<Channel> {
    match &result.corrected {
        Some(ch) => Ok(ch.clone()),
        None => Err(Error::Singular { min_eig: 1.0 - result.tp_defect, floor: 0.0 }),
    }
}

fn correct_with_witness(sliced: &Channel, witness: &CMatrix) -> Result<Channel> {
    let root = inv_sqrt_psd(witness, 0.0)?;
    let ops: Vec<CMatrix> = sliced.kraus().iter().map(|k| k.mul(&root)).collect();
    Channel::from_kraus(ops)
}

/// Empirical ψ₁ moment data for X_φ = tr[(y⊗φ) σ] under Haar φ.
#[derive(Clone, Copy, Debug)]
pub struct Psi1Moments {
    /// (E|X|^p)^{1/p} / p from m samples.
    pub empirical_normalized: f64,
    /// The ψ₁-norm bound (1/s)·tr[(y⊗1) σ], which is also the exact mean.
    pub bound: f64,
    /// Plain empirical mean of X.
    pub empirical_mean: f64,
}

/// Monte-Carlo estimate of the normalized p-th moment of X_φ(σ, y)
/// against its ψ₁ bound.
pub fn psi1_moment_oracle(
    sigma: &CMatrix,
    dim_b: usize,
    dim_e: usize,
    y: &CVector,
    p: u32,
    m: usize,
    seed: u64,
) -> Result<Psi1Moments> {
    if p < 1 {
        return Err(Error::param("moment order p must be at least 1"));
    }
    if m < 1000 {
        return Err(Error::param("need at least 10^3 samples"));
    }
    if y.dim() != dim_b {
        return Err(Error::shape("direction y does not match dim_b"));
    }
    validate_state(sigma, dim_b * dim_e)?;
    // σ_y = tr_B[(yy† ⊗ 1) σ]: a PSD operator on E with trace tr[(y⊗1)σ].
    let mut sigma_y = CMatrix::zeros(dim_e, dim_e);
    for e in 0..dim_e {
        for ep in 0..dim_e {
            let mut acc = ZERO;
            for b in 0..dim_b {
                for bp in 0..dim_b {
                    let yb = y.as_slice()[b];
                    let ybp = y.as_slice()[bp];
                    acc += yb.conj() * sigma.get(b * dim_e + e, bp * dim_e + ep) * ybp;
                }
            }
            sigma_y.set(e, ep, acc);
        }
    }
    let sigma_y = sigma_y.symmetrized();
    let bound = sigma_y.trace().re / dim_e as f64;
    let mut rng = SplitMix64::new(seed);
    let mut sum_p = 0.0f64;
    let mut sum_1 = 0.0f64;
    for _ in 0..m {
        let phi = haar_unit_vector(dim_e, &mut rng);
        let x = quad_form(&sigma_y, &phi);
        sum_1 += x;
        sum_p += libm::pow(x.abs(), p as f64);
    }
    let mf = m as f64;
    Ok(Psi1Moments {
        empirical_normalized: libm::pow(sum_p / mf, 1.0 / p as f64) / p as f64,
        bound,
        empirical_mean: sum_1 / mf,
    })
}

/// Fraction of n-slice averages of ⟨y|N_φ(x)|y⟩ deviating from ⟨y|N(x)|y⟩
/// by more than eps relative, over independent seeded trials.
pub fn tail_probability_oracle(
    ch: &Channel,
    x: &CVector,
    y: &CVector,
    n: usize,
    eps: f64,
    trials: usize,
    seed: u64,
) -> Result<f64> {
    if trials < 100 {
        return Err(Error::param("need at least 10^2 trials"));
    }
    if n == 0 {
        return Err(Error::param("need n ≥ 1 slices per trial"));
    }
    if !(eps > 0.0) {
        return Err(Error::domain("relative deviation eps must be positive"));
    }
    if x.dim() != ch.dim_in() || y.dim() != ch.dim_out() {
        return Err(Error::shape("test vectors do not match the channel dimensions"));
    }
    let target = quad_form(&ch.apply_pure(x)?, y);
    if target < 1e-12 {
        return Err(Error::DegenerateTarget { value: target });
    }
    let v = ch.stinespring();
    let s = v.dim_env();
    let w = v.apply_vec(x)?;
    // u_e = Σ_b conj(y_b) w_{b,e}; then ⟨y|N_φ(x)|y⟩ = s·|⟨φ|u⟩|².
    let mut u = CVector::zeros(s);
    for e in 0..s {
        let mut acc = ZERO;
        for b in 0..ch.dim_out() {
            acc += y.as_slice()[b].conj() * w.as_slice()[b * s + e];
        }
        u.as_mut_slice()[e] = acc;
    }
    let sf = s as f64;
    let mut exceed = 0usize;
    for trial in 0..trials {
        let mut rng = SplitMix64::substream(seed, trial as u64);
        let mut acc = 0.0f64;
        for _ in 0..n {
            let mut dot = ZERO;
            let mut norm_sqr = 0.0f64;
            for ue in u.as_slice() {
                let g = rng.next_complex_gaussian();
                norm_sqr += g.norm_sqr();
                dot += g.conj() * ue;
            }
            acc += sf * dot.norm_sqr() / norm_sqr;
        }
        let avg = acc / n as f64;
        if (avg - target).abs() > eps * target {
            exceed += 1;
        }
    }
    Ok(exceed as f64 / trials as f64)
}

fn quad_form(m: &CMatrix, y: &CVector) -> f64 {
    m.quad_form(y)
}
