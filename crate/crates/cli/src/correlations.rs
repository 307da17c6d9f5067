//! Correlation-destruction demo: compress the completely forgetful channel
//! to σ*, apply it (tensored with the identity) to a seeded separable state,
//! and compare the exact trace-norm distance from the product target with
//! the per-term convexity bound, plus the dual-map spot check behind the
//! one-way-LOCC statement.

use anyhow::{anyhow, bail, Result};
use serde::Serialize;

use kslice_core::compress::{compress, CompressionPlan, Sampler};
use kslice_core::linalg::{operator_norm, trace_norm};
use kslice_core::metrics::{ordering_epsilon, OptBudget};
use kslice_core::rng::{haar_unit_vector, random_povm_element};
use kslice_core::zoo::forgetful_channel;
use kslice_core::{CMatrix, SplitMix64};

#[derive(Debug, Clone, Serialize)]
pub struct CorrelationsReport {
    pub dim_a: usize,
    pub dim_c: usize,
    pub sigma_spec: String,
    pub n: usize,
    pub seed: u64,
    pub mixture_terms: usize,
    pub sampler: String,
    pub env_dim: usize,
    pub tp_defect: f64,
    /// ‖N̂⊗Id(ρ_AC) − σ*⊗ρ_C‖₁, computed exactly.
    pub left_side: f64,
    /// max_x ‖N̂(ρ_A^(x)) − σ*‖₁ over the mixture terms.
    pub per_term_bound: f64,
    /// Measured ordering parameter between the forgetful channel and N̂.
    pub eps_hat: f64,
    /// max over the POVM pool of ‖N̂*(M) − N*(M)‖∞ − ε̂·tr(M)/|B|.
    pub dual_max_excess: f64,
    /// max over the POVM pool of ‖N̂*(M) − N*(M)‖∞ / (ε̂·tr(M)/|B|).
    pub dual_worst_ratio: f64,
    pub povm_pool: usize,
}

#[allow(clippy::too_many_arguments)]
pub fn correlations_demo(
    dim_a: usize,
    dim_c: usize,
    sigma_spec: &str,
    n: usize,
    seed: u64,
    mixture_terms: usize,
    sampler: Sampler,
    budget: &OptBudget,
) -> Result<CorrelationsReport> {
    if dim_a < 2 || dim_c < 2 {
        bail!("correlations demo needs dim_A ≥ 2 and dim_C ≥ 2");
    }
    if mixture_terms < 1 {
        bail!("correlations demo needs at least one mixture term");
    }
    let sigma = crate::spec::parse_sigma_spec(sigma_spec, dim_a)?;
    let dim_b = sigma.rows();
    let forgetful = forgetful_channel(dim_a, &sigma)?;
    let plan = CompressionPlan::new(n, sampler, seed)?;
    let result = compress(&forgetful, &plan)?;
    let nhat = result
        .corrected
        .clone()
        .ok_or_else(|| anyhow!("compression too coarse to correct (defect {})", result.tp_defect))?;

    // Seeded separable state: a mixture of pure product states.
    let mut rng = SplitMix64::new(seed ^ 0x7365_7061_7261);
    let mut weights: Vec<f64> = (0..mixture_terms).map(|_| rng.next_open01()).collect();
    let total: f64 = weights.iter().sum();
    for w in &mut weights {
        *w /= total;
    }
    let terms: Vec<(f64, kslice_core::CVector, kslice_core::CVector)> = weights
        .into_iter()
        .map(|w| {
            (
                w,
                haar_unit_vector(dim_a, &mut rng),
                haar_unit_vector(dim_c, &mut rng),
            )
        })
        .collect();
    let mut rho_ac = CMatrix::zeros(dim_a * dim_c, dim_a * dim_c);
    let mut rho_c = CMatrix::zeros(dim_c, dim_c);
    for (w, psi_a, chi_c) in &terms {
        rho_ac.add_assign(&psi_a.projector().kron(&chi_c.projector()).scale_re(*w));
        rho_c.add_assign(&chi_c.projector().scale_re(*w));
    }

    let target = sigma.kron(&rho_c);
    let left_side = trace_norm(&nhat.apply_extended(&rho_ac)?.sub(&target))?;
    let per_term_bound = terms
        .iter()
        .map(|(_, psi_a, _)| {
            trace_norm(&nhat.apply_pure(psi_a).expect("validated dims").sub(&sigma))
                .expect("Hermitian difference")
        })
        .fold(0.0f64, f64::max);

    let eps_hat = ordering_epsilon(&forgetful, &nhat, budget)?.value;

    // Dual-map spot check on seeded POVM elements 0 ≤ M ≤ 1.
    let povm_pool = 20usize;
    let mut povm_rng = SplitMix64::new(seed ^ 0x706f_766d);
    let mut dual_max_excess = f64::NEG_INFINITY;
    let mut dual_worst_ratio: f64 = 0.0;
    for _ in 0..povm_pool {
        let m = random_povm_element(dim_b, &mut povm_rng);
        let lhs = operator_norm(&nhat.dual_apply(&m)?.sub(&forgetful.dual_apply(&m)?))?;
        let rhs = eps_hat * m.trace().re / dim_b as f64;
        dual_max_excess = dual_max_excess.max(lhs - rhs);
        if rhs > 0.0 {
            dual_worst_ratio = dual_worst_ratio.max(lhs / rhs);
        }
    }

    Ok(CorrelationsReport {
        dim_a,
        dim_c,
        sigma_spec: sigma_spec.to_string(),
        n,
        seed,
        mixture_terms,
        sampler: sampler.name().to_string(),
        env_dim: result.env_dim,
        tp_defect: result.tp_defect,
        left_side,
        per_term_bound,
        eps_hat,
        dual_max_excess,
        dual_worst_ratio,
        povm_pool,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn single_term_left_side_equals_per_term_bound() {
        let budget = OptBudget::custom(2, 20, 60, 3).unwrap();
        let report =
            correlations_demo(4, 2, "maxmixed", 128, 5, 1, Sampler::Haar, &budget).unwrap();
        // ‖(N̂(ρ_A) − σ*) ⊗ ρ_C‖₁ = ‖N̂(ρ_A) − σ*‖₁ for a pure ρ_C.
        assert!((report.left_side - report.per_term_bound).abs() < 1e-10);
    }

    #[test]
    fn exhaustive_mode_reproduces_the_channel() {
        let budget = OptBudget::custom(2, 20, 60, 4).unwrap();
        // σ* = 1/4 has rank 4, so |E| = dim_a · 4 = 16.
        let report =
            correlations_demo(4, 2, "maxmixed", 16, 6, 5, Sampler::BasisExhaustive, &budget)
                .unwrap();
        assert!(report.tp_defect <= 1e-12);
        assert!(report.left_side <= 1e-10);
        assert!(report.per_term_bound <= 1e-10);
    }

    #[test]
    fn convexity_chain_holds() {
        let budget = OptBudget::custom(2, 20, 100, 5).unwrap();
        let report =
            correlations_demo(4, 3, "maxmixed", 256, 7, 6, Sampler::Haar, &budget).unwrap();
        assert!(report.left_side <= report.per_term_bound + 1e-10);
    }
}
