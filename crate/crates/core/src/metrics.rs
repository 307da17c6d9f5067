//! Approximation-quality functionals: (1→p) distances via pure-state
//! maximization, the operator-ordering margin and its measured ε, Rényi and
//! von Neumann entropies, fidelities, entropy exchange, and the
//! entropy-difference lower bound on compressibility.
//!
//! Every maximization returns a certified lower bound together with the
//! witness that achieves it; restriction to pure inputs is exact for all of
//! them because each objective is convex over the input state.

use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

use crate::channel::{validate_state, Channel};
use crate::error::{Error, Result};
use crate::linalg::{hermitian_eig, inv_sqrt_psd, sqrt_psd, trace_norm, HermEig};
use crate::mat::{partial_trace, CMatrix, CVector, Factor};
use crate::rng::{haar_unit_vectors, random_density_matrix, SplitMix64};

/// Search effort for the pure-state maximizers: a seeded pool is scored,
/// the best `restarts` entries are refined by projected sphere ascent with
/// step halving, for `iterations` steps each.
#[derive(Clone, Debug)]
pub struct OptBudget {
    pub restarts: usize,
    pub iterations: usize,
    pub initial_step: f64,
    pub sample_pool: usize,
    pub seed: u64,
}

impl OptBudget {
    /// Default effort: pool 2000, 20 restarts, 200 refinement iterations.
    pub fn with_seed(seed: u64) -> Self {
        OptBudget { restarts: 20, iterations: 200, initial_step: 0.5, sample_pool: 2000, seed }
    }

    /// Reduced effort for sweeps and cheap cross-checks.
    pub fn quick(seed: u64) -> Self {
        OptBudget { restarts: 5, iterations: 60, initial_step: 0.5, sample_pool: 300, seed }
    }

    pub fn custom(
        restarts: usize,
        iterations: usize,
        sample_pool: usize,
        seed: u64,
    ) -> Result<Self> {
        let b = OptBudget { restarts, iterations, initial_step: 0.5, sample_pool, seed };
        b.validate()?;
        Ok(b)
    }

    fn validate(&self) -> Result<()> {
        if self.restarts == 0 || self.sample_pool < self.restarts {
            return Err(Error::param(
                "budget needs restarts ≥ 1 and sample_pool ≥ restarts",
            ));
        }
        if !(self.initial_step > 0.0) {
            return Err(Error::param("budget needs a positive initial step"));
        }
        Ok(())
    }
}

/// Argmax witness: a pure input vector or a mixed density matrix.
#[derive(Clone, Debug)]
pub enum Witness {
    Pure(CVector),
    Mixed(CMatrix),
}

/// An estimated extremal quantity with the state that achieves it. For
/// maximization problems the value is a certified lower bound: re-evaluating
/// the witness reproduces it.
#[derive(Clone, Debug)]
pub struct MetricReport {
    pub quantity: String,
    pub value: f64,
    pub witness: Witness,
    /// Output-side direction for the ordering quantities.
    pub direction: Option<CVector>,
    pub budget: OptBudget,
    pub seed: u64,
}

fn pool_states(dim: usize, budget: &OptBudget) -> Vec<CVector> {
    let mut pool: Vec<CVector> = (0..dim).map(|k| CVector::basis(dim, k)).collect();
    pool.extend(haar_unit_vectors(dim, budget.sample_pool, budget.seed));
    pool
}

/// Projected gradient ascent on the unit sphere with step halving.
fn ascend(
    start: &CVector,
    start_val: f64,
    budget: &OptBudget,
    eval: &dyn Fn(&CVector) -> f64,
    grad: &dyn Fn(&CVector) -> CVector,
) -> (CVector, f64) {
    let mut x = start.clone();
    let mut fx = start_val;
    let mut step = budget.initial_step;
    for _ in 0..budget.iterations {
        if step < 1e-12 {
            break;
        }
        let g = grad(&x);
        let gnorm = g.norm();
        if gnorm < 1e-14 {
            break;
        }
        let candidate = match x.add_scaled(&g, step / gnorm).normalized() {
            Ok(c) => c,
            Err(_) => break,
        };
        let fc = eval(&candidate);
        if fc > fx {
            x = candidate;
            fx = fc;
            step *= 1.5;
        } else {
            step *= 0.5;
        }
    }
    (x, fx)
}

fn maximize_over_sphere(
    dim: usize,
    budget: &OptBudget,
    eval: &dyn Fn(&CVector) -> f64,
    grad: &dyn Fn(&CVector) -> CVector,
) -> (CVector, f64) {
    let pool = pool_states(dim, budget);
    let mut scored: Vec<(f64, usize)> = pool
        .iter()
        .enumerate()
        .map(|(i, s)| (eval(s), i))
        .collect();
    scored.sort_by(|a, b| b.0.partial_cmp(&a.0).unwrap_or(core::cmp::Ordering::Equal));
    let mut best = pool[scored[0].1].clone();
    let mut best_val = scored[0].0;
    for &(v0, idx) in scored.iter().take(budget.restarts) {
        let (x, v) = ascend(&pool[idx], v0, budget, eval, grad);
        if v > best_val {
            best_val = v;
            best = x;
        }
    }
    (best, best_val)
}

fn check_same_dims(a: &Channel, b: &Channel) -> Result<()> {
    if a.dim_in() != b.dim_in() || a.dim_out() != b.dim_out() {
        return Err(Error::shape(format!(
            "channel dimensions differ: {}→{} vs {}→{}",
            a.dim_in(),
            a.dim_out(),
            b.dim_in(),
            b.dim_out()
        )));
    }
    Ok(())
}

fn p_label(p: f64) -> String {
    if p.is_infinite() {
        String::from("inf")
    } else if p == libm::floor(p) && p.abs() < 1e9 {
        format!("{}", p as i64)
    } else {
        format!("{p}")
    }
}

/// Spectral weight matrix of the subgradient of ‖M‖_p at Hermitian M.
fn schatten_subgradient(eig: &HermEig, p: f64) -> CMatrix {
    let scale = eig
        .values
        .iter()
        .fold(0.0f64, |a, &l| a.max(l.abs()))
        .max(1e-300);
    if p.is_infinite() {
        let (k, _) = eig
            .values
            .iter()
            .enumerate()
            .map(|(k, &l)| (k, l.abs()))
            .max_by(|a, b| a.1.partial_cmp(&b.1).unwrap_or(core::cmp::Ordering::Equal))
            .expect("nonempty spectrum");
        let sign = if eig.values[k] >= 0.0 { 1.0 } else { -1.0 };
        let mut w = CMatrix::zeros(eig.values.len(), eig.values.len());
        w.add_scaled_outer(&eig.column(k), sign);
        return w;
    }
    eig.apply_spectral(|l| {
        if l.abs() <= 1e-14 * scale {
            0.0
        } else {
            let sign = if l >= 0.0 { 1.0 } else { -1.0 };
            sign * libm::pow(l.abs() / scale, p - 1.0)
        }
    })
}

/// Estimated (1→p) distance: max over pure inputs of ‖(a−b)(ψψ†)‖_p.
pub fn one_to_p_distance(
    a: &Channel,
    b: &Channel,
    p: f64,
    budget: &OptBudget,
) -> Result<MetricReport> {
    check_same_dims(a, b)?;
    budget.validate()?;
    if p.is_nan() || p < 1.0 {
        return Err(Error::domain(format!("(1→p) distance needs p ≥ 1, got {p}")));
    }
    let diff = |psi: &CVector| -> CMatrix {
        let out_a = a.apply_pure(psi).expect("validated dims");
        let out_b = b.apply_pure(psi).expect("validated dims");
        out_a.sub(&out_b)
    };
    let eval = |psi: &CVector| -> f64 {
        crate::linalg::schatten_norm(&diff(psi), p).unwrap_or(0.0)
    };
    let grad = |psi: &CVector| -> CVector {
        let m = diff(psi).symmetrized();
        let eig = match hermitian_eig(&m) {
            Ok(e) => e,
            Err(_) => return CVector::zeros(psi.dim()),
        };
        let w = schatten_subgradient(&eig, p);
        let ga = a.dual_apply(&w).expect("validated dims");
        let gb = b.dual_apply(&w).expect("validated dims");
        ga.sub(&gb).mul_vec(psi)
    };
    let (witness, _) = maximize_over_sphere(a.dim_in(), budget, &eval, &grad);
    let value = eval(&witness);
    Ok(MetricReport {
        quantity: format!("one_to_p(p={})", p_label(p)),
        value,
        witness: Witness::Pure(witness),
        direction: None,
        budget: budget.clone(),
        seed: budget.seed,
    })
}

/// Estimated sup over inputs of ‖N(ρ)‖∞ (attained on pure inputs).
pub fn max_output_infnorm(ch: &Channel, budget: &OptBudget) -> Result<MetricReport> {
    budget.validate()?;
    let eval = |psi: &CVector| -> f64 {
        let out = ch.apply_pure(psi).expect("validated dims");
        hermitian_eig(&out.symmetrized()).map(|e| e.max()).unwrap_or(0.0)
    };
    let grad = |psi: &CVector| -> CVector {
        let out = ch.apply_pure(psi).expect("validated dims");
        let eig = match hermitian_eig(&out.symmetrized()) {
            Ok(e) => e,
            Err(_) => return CVector::zeros(psi.dim()),
        };
        let top = eig.column(eig.values.len() - 1);
        let w = top.projector();
        ch.dual_apply(&w).expect("validated dims").mul_vec(psi)
    };
    let (witness, _) = maximize_over_sphere(ch.dim_in(), budget, &eval, &grad);
    let value = eval(&witness);
    Ok(MetricReport {
        quantity: String::from("max_output_infnorm"),
        value,
        witness: Witness::Pure(witness),
        direction: None,
        budget: budget.clone(),
        seed: budget.seed,
    })
}

/// The two slack operators of the two-sided ordering at input x:
/// H_± = ε·N(x) + (ε/|B|)·1 ∓ (approx−ref)(x).
fn ordering_slack_operators(
    reference: &Channel,
    approx: &Channel,
    eps: f64,
    psi: &CVector,
) -> (CMatrix, CMatrix) {
    let nx = reference.apply_pure(psi).expect("validated dims");
    let dx = approx
        .apply_pure(psi)
        .expect("validated dims")
        .sub(&nx);
    let base = nx
        .scale_re(eps)
        .add(&CMatrix::identity(reference.dim_out()).scale_re(eps / reference.dim_out() as f64));
    (base.sub(&dx), base.add(&dx))
}

/// Minimum over scored pure x and all unit y of the two ordering slacks
/// ε⟨y|N(x)|y⟩ + ε/|B| ± ⟨y|(approx−ref)(x)|y⟩. A negative value certifies
/// an ordering violation at the recorded witness (x, y).
pub fn ordering_margin(
    reference: &Channel,
    approx: &Channel,
    eps: f64,
    budget: &OptBudget,
) -> Result<MetricReport> {
    check_same_dims(reference, approx)?;
    budget.validate()?;
    if !(eps > 0.0) {
        return Err(Error::domain("ordering margin needs eps > 0"));
    }
    // margin(x) = min eigenvalue over both slack branches; the extremal y
    // is an eigenvector of the chosen branch, obtained exactly.
    let margin_at = |psi: &CVector| -> (f64, CVector) {
        let (up, lo) = ordering_slack_operators(reference, approx, eps, psi);
        let eig_up = hermitian_eig(&up.symmetrized()).expect("Hermitian by construction");
        let eig_lo = hermitian_eig(&lo.symmetrized()).expect("Hermitian by construction");
        if eig_up.min() <= eig_lo.min() {
            (eig_up.min(), eig_up.column(0))
        } else {
            (eig_lo.min(), eig_lo.column(0))
        }
    };
    let eval = |psi: &CVector| -> f64 { -margin_at(psi).0 };
    let grad = |psi: &CVector| -> CVector {
        let (up, lo) = ordering_slack_operators(reference, approx, eps, psi);
        let eig_up = hermitian_eig(&up.symmetrized()).expect("Hermitian by construction");
        let eig_lo = hermitian_eig(&lo.symmetrized()).expect("Hermitian by construction");
        let (y, dx_sign) = if eig_up.min() <= eig_lo.min() {
            (eig_up.column(0), -1.0)
        } else {
            (eig_lo.column(0), 1.0)
        };
        let proj = y.projector();
        let gr = reference.dual_apply(&proj).expect("validated dims");
        let ga = approx.dual_apply(&proj).expect("validated dims");
        // d⟨y|H|y⟩/dψ̄ = ε·N*(yy†)ψ ± D*(yy†)ψ; descend on the margin.
        let h_grad = gr.scale_re(eps).add(&ga.sub(&gr).scale_re(dx_sign));
        h_grad.mul_vec(psi).scale_re(-1.0)
    };
    let (witness, _) = maximize_over_sphere(reference.dim_in(), budget, &eval, &grad);
    let (value, y) = margin_at(&witness);
    Ok(MetricReport {
        quantity: format!("ordering_margin(eps={eps})"),
        value,
        witness: Witness::Pure(witness),
        direction: Some(y),
        budget: budget.clone(),
        seed: budget.seed,
    })
}

/// Measured ordering parameter ε̂: the smallest ε for which the two-sided
/// ordering holds on the scored inputs, i.e. the maximum over pure x of
/// ‖P(x)^{−1/2} D(x) P(x)^{−1/2}‖∞ with P(x) = N(x) + 1/|B| and
/// D = approx − ref. A certified lower bound on the true parameter.
pub fn ordering_epsilon(
    reference: &Channel,
    approx: &Channel,
    budget: &OptBudget,
) -> Result<MetricReport> {
    check_same_dims(reference, approx)?;
    budget.validate()?;
    let db = reference.dim_out();
    let parts = |psi: &CVector| -> (f64, CVector, f64) {
        let nx = reference.apply_pure(psi).expect("validated dims");
        let dx = approx.apply_pure(psi).expect("validated dims").sub(&nx);
        let p = nx.add(&CMatrix::identity(db).scale_re(1.0 / db as f64));
        let root = inv_sqrt_psd(&p, 0.0).expect("P(x) has spectrum above 1/|B|");
        let t = root.mul(&dx).mul(&root).symmetrized();
        let eig = hermitian_eig(&t).expect("Hermitian by construction");
        let (lo, hi) = (eig.min(), eig.max());
        let (value, column) = if hi.abs() >= lo.abs() {
            (hi, eig.column(eig.values.len() - 1))
        } else {
            (lo, eig.column(0))
        };
        let y = root
            .mul_vec(&column)
            .normalized()
            .unwrap_or(column);
        (value.abs(), y, if value >= 0.0 { 1.0 } else { -1.0 })
    };
    let eval = |psi: &CVector| -> f64 { parts(psi).0 };
    let grad = |psi: &CVector| -> CVector {
        let (_, y, sign) = parts(psi);
        let proj = y.projector();
        let nx = reference.apply_pure(psi).expect("validated dims");
        let dx = approx.apply_pure(psi).expect("validated dims").sub(&nx);
        let a = dx.quad_form(&y);
        let b = nx.quad_form(&y) + 1.0 / db as f64;
        let da = approx
            .dual_apply(&proj)
            .expect("validated dims")
            .sub(&reference.dual_apply(&proj).expect("validated dims"))
            .mul_vec(psi);
        let dbv = reference.dual_apply(&proj).expect("validated dims").mul_vec(psi);
        // d(σA/B)/dψ̄ = σ(A'B − AB')/B².
        da.scale_re(sign * b)
            .sub(&dbv.scale_re(sign * a))
            .scale_re(1.0 / (b * b))
    };
    let (witness, _) = maximize_over_sphere(reference.dim_in(), budget, &eval, &grad);
    let (value, y, _) = parts(&witness);
    Ok(MetricReport {
        quantity: String::from("ordering_epsilon"),
        value,
        witness: Witness::Pure(witness),
        direction: Some(y),
        budget: budget.clone(),
        seed: budget.seed,
    })
}

fn spectrum_entropy(values: &[f64], p: f64) -> f64 {
    let clipped: Vec<f64> = values.iter().map(|&l| l.max(0.0)).collect();
    let top = clipped.iter().fold(0.0f64, |a, &b| a.max(b));
    if top <= 0.0 {
        return 0.0;
    }
    if p == 1.0 {
        return -clipped
            .iter()
            .filter(|&&l| l > 0.0)
            .map(|&l| l * libm::log(l))
            .sum::<f64>();
    }
    if p.is_infinite() {
        return -libm::log(top);
    }
    let sum: f64 = clipped.iter().map(|&l| libm::pow(l / top, p)).sum();
    let log_norm = libm::log(top) + libm::log(sum) / p;
    -(p / (p - 1.0)) * log_norm
}

/// Rényi entropy S_p in natural log: −(p/(p−1))·log‖ρ‖_p, with the
/// continuous limits S_1 = −tr(ρ log ρ) and S_∞ = −log λ_max.
pub fn renyi_entropy(rho: &CMatrix, p: f64) -> Result<f64> {
    if p.is_nan() || p < 1.0 {
        return Err(Error::domain(format!("Rényi entropy needs p ≥ 1, got {p}")));
    }
    if !rho.is_square() {
        return Err(Error::not_a_state("not square"));
    }
    if rho.herm_defect() > 1e-9 * (1.0 + rho.max_abs()) {
        return Err(Error::not_a_state("not Hermitian within 1e-9"));
    }
    let tr = rho.trace();
    if (tr.re - 1.0).abs() > 1e-9 || tr.im.abs() > 1e-9 {
        return Err(Error::not_a_state(format!("trace {tr} is not 1 within 1e-9")));
    }
    let eig = hermitian_eig(&rho.symmetrized())?;
    if eig.min() < -1e-9 {
        return Err(Error::not_a_state(format!("negative eigenvalue {:.3e}", eig.min())));
    }
    Ok(spectrum_entropy(&eig.values, p))
}

/// Von Neumann entropy (Rényi at p = 1).
pub fn vn_entropy(rho: &CMatrix) -> Result<f64> {
    renyi_entropy(rho, 1.0)
}

/// Entropy of a PSD operator without state validation (negative eigenvalues
/// clipped at zero); used on the raw outputs of CP maps that are only
/// approximately trace preserving.
pub fn entropy_raw(m: &CMatrix, p: f64) -> Result<f64> {
    if p.is_nan() || p < 1.0 {
        return Err(Error::domain(format!("entropy needs p ≥ 1, got {p}")));
    }
    let eig = hermitian_eig(&m.symmetrized())?;
    Ok(spectrum_entropy(&eig.values, p))
}

/// Fidelity F(ρ,σ) = ‖√ρ √σ‖₁, clamped into [0, 1].
pub fn fidelity(rho: &CMatrix, sigma: &CMatrix) -> Result<f64> {
    validate_state(rho, rho.rows())?;
    validate_state(sigma, rho.rows())?;
    Ok(fidelity_raw(rho, sigma)?.clamp(0.0, 1.0))
}

/// Fidelity without state validation or clamping, for subnormalized inputs.
pub fn fidelity_raw(rho: &CMatrix, sigma: &CMatrix) -> Result<f64> {
    if rho.rows() != sigma.rows() || !rho.is_square() || !sigma.is_square() {
        return Err(Error::shape("fidelity needs square operators of equal dimension"));
    }
    let root = sqrt_psd(&rho.symmetrized())?;
    let m = root.mul(&sigma.symmetrized()).mul(&root).symmetrized();
    let eig = hermitian_eig(&m)?;
    Ok(eig
        .values
        .iter()
        .map(|&l| libm::sqrt(l.max(0.0)))
        .sum())
}

/// Entropy exchange S(ρ, N): entropy of the environment marginal of VρV†.
pub fn entropy_exchange(ch: &Channel, rho: &CMatrix) -> Result<f64> {
    validate_state(rho, ch.dim_in())?;
    let v = ch.stinespring();
    let big = v.conjugate_state(rho)?;
    let env = partial_trace(&big, &v.env_index(), Factor::Right)?;
    entropy_raw(&env, 1.0)
}

/// Estimated max over states of |S(ρ) − S(N(ρ))|, a lower bound on
/// log |E| for any dilation of N (and, scaled by 1−ε, on log r_K of any
/// entropy-ε-approximation of N).
pub fn entropy_rank_bound(ch: &Channel, budget: &OptBudget) -> Result<MetricReport> {
    budget.validate()?;
    // Pure branch: |S(ψ) − S(N(ψ))| = S(N(ψ)), maximized by sphere ascent.
    let eval = |psi: &CVector| -> f64 {
        let out = ch.apply_pure(psi).expect("validated dims");
        entropy_raw(&out, 1.0).unwrap_or(0.0)
    };
    let grad = |psi: &CVector| -> CVector {
        let out = ch.apply_pure(psi).expect("validated dims");
        let eig = match hermitian_eig(&out.symmetrized()) {
            Ok(e) => e,
            Err(_) => return CVector::zeros(psi.dim()),
        };
        let w = eig.apply_spectral(|l| -(libm::log(l.max(1e-18)) + 1.0));
        ch.dual_apply(&w).expect("validated dims").mul_vec(psi)
    };
    let (pure_witness, _) = maximize_over_sphere(ch.dim_in(), budget, &eval, &grad);
    let pure_value = eval(&pure_witness);
    // Mixed candidates: the maximally mixed state and a few seeded ones.
    let dim = ch.dim_in();
    let mut best_mixed: Option<(f64, CMatrix)> = None;
    let mut candidates: Vec<CMatrix> =
        alloc::vec![CMatrix::identity(dim).scale_re(1.0 / dim as f64)];
    let mut rng = SplitMix64::new(budget.seed ^ 0x6d69_7865_6421);
    for _ in 0..16 {
        candidates.push(random_density_matrix(dim, &mut rng));
    }
    for rho in candidates {
        let s_in = entropy_raw(&rho, 1.0)?;
        let s_out = entropy_raw(&ch.apply_matrix(&rho)?, 1.0)?;
        let gap = (s_in - s_out).abs();
        if best_mixed.as_ref().map_or(true, |(v, _)| gap > *v) {
            best_mixed = Some((gap, rho));
        }
    }
    let (mixed_value, mixed_witness) = best_mixed.expect("nonempty candidate list");
    let (value, witness) = if pure_value >= mixed_value {
        (pure_value, Witness::Pure(pure_witness))
    } else {
        (mixed_value, Witness::Mixed(mixed_witness))
    };
    Ok(MetricReport {
        quantity: String::from("entropy_rank_bound"),
        value,
        witness,
        direction: None,
        budget: budget.clone(),
        seed: budget.seed,
    })
}

/// Pool-maximal output deviations between two maps, in Rényi entropies
/// (p ∈ {2, ∞}), von Neumann entropy, fidelity against a pool of reference
/// states, and trace norm, plus the Fannes-Audenaert right-hand side
/// evaluated at the measured trace-norm deviation for comparison.
#[derive(Clone, Debug)]
pub struct ApproximationReport {
    pub entropy_p2_dev: f64,
    pub entropy_pinf_dev: f64,
    pub vn_entropy_dev: f64,
    pub fidelity_dev: f64,
    pub one_norm_dev: f64,
    pub fannes_audenaert_rhs: f64,
    pub pool_size: usize,
    pub omega_pool_size: usize,
    pub seed: u64,
}

pub fn approximation_report(
    reference: &Channel,
    approx: &Channel,
    budget: &OptBudget,
) -> Result<ApproximationReport> {
    check_same_dims(reference, approx)?;
    budget.validate()?;
    let (da, db) = (reference.dim_in(), reference.dim_out());
    let pure_pool = pool_states(da, budget);
    let mut mixed_pool: Vec<CMatrix> =
        alloc::vec![CMatrix::identity(da).scale_re(1.0 / da as f64)];
    let mut rng = SplitMix64::new(budget.seed ^ 0x6d69_7865_6421);
    for _ in 0..4 {
        mixed_pool.push(random_density_matrix(da, &mut rng));
    }
    // Reference-side states the fidelities are measured against.
    let mut omega_pool: Vec<CMatrix> =
        alloc::vec![CMatrix::identity(db).scale_re(1.0 / db as f64)];
    let mut omega_rng = SplitMix64::new(budget.seed ^ 0x6f6d_6567_6121);
    for v in haar_unit_vectors(db, 8, omega_rng.next_u64()) {
        omega_pool.push(v.projector());
    }
    for _ in 0..4 {
        omega_pool.push(random_density_matrix(db, &mut omega_rng));
    }
    let mut report = ApproximationReport {
        entropy_p2_dev: 0.0,
        entropy_pinf_dev: 0.0,
        vn_entropy_dev: 0.0,
        fidelity_dev: 0.0,
        one_norm_dev: 0.0,
        fannes_audenaert_rhs: 0.0,
        pool_size: pure_pool.len() + mixed_pool.len(),
        omega_pool_size: omega_pool.len(),
        seed: budget.seed,
    };
    let mut tally = |sigma: &CMatrix, sigma_hat: &CMatrix| -> Result<()> {
        let e2 = (entropy_raw(sigma_hat, 2.0)? - entropy_raw(sigma, 2.0)?).abs();
        let einf =
            (entropy_raw(sigma_hat, f64::INFINITY)? - entropy_raw(sigma, f64::INFINITY)?).abs();
        let e1 = (entropy_raw(sigma_hat, 1.0)? - entropy_raw(sigma, 1.0)?).abs();
        report.entropy_p2_dev = report.entropy_p2_dev.max(e2);
        report.entropy_pinf_dev = report.entropy_pinf_dev.max(einf);
        report.vn_entropy_dev = report.vn_entropy_dev.max(e1);
        report.one_norm_dev = report
            .one_norm_dev
            .max(trace_norm(&sigma_hat.sub(sigma))?);
        for omega in &omega_pool {
            let f_dev = (fidelity_raw(sigma_hat, omega)? - fidelity_raw(sigma, omega)?).abs();
            report.fidelity_dev = report.fidelity_dev.max(f_dev);
        }
        Ok(())
    };
    for psi in &pure_pool {
        let sigma = reference.apply_pure(psi)?;
        let sigma_hat = approx.apply_pure(psi)?;
        tally(&sigma, &sigma_hat)?;
    }
    for rho in &mixed_pool {
        let sigma = reference.apply_matrix(rho)?;
        let sigma_hat = approx.apply_matrix(rho)?;
        tally(&sigma, &sigma_hat)?;
    }
    // Fannes-Audenaert comparison: the measured (1→1) deviation read as
    // 2ε/log|B| gives RHS = ε + 2ε/log|B| + √(ε/log|B|).
    let log_b = libm::log(db as f64);
    if log_b > 0.0 {
        let eps = report.one_norm_dev * log_b / 2.0;
        report.fannes_audenaert_rhs = eps + 2.0 * eps / log_b + libm::sqrt(eps / log_b);
    }
    Ok(report)
}
