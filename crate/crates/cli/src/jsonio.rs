//! JSON wire formats. Floats go through serde_json's shortest-round-trip
//! rendering, so a serialize/parse cycle reproduces every f64 bit for bit.

use anyhow::{anyhow, Context, Result};
use serde::{Deserialize, Serialize};

use kslice_core::compress::{CompressionPlan, CompressionResult};
use kslice_core::metrics::{MetricReport, OptBudget, Witness};
use kslice_core::{CMatrix, CVector, Channel, C64};

fn entries_to_json(data: &[C64]) -> Vec<[f64; 2]> {
    data.iter().map(|z| [z.re, z.im]).collect()
}

fn entries_from_json(data: &[[f64; 2]]) -> Vec<C64> {
    data.iter().map(|&[re, im]| C64::new(re, im)).collect()
}

/// Channel as `{dim_in, dim_out, kraus: [[[re,im], ...], ...]}` with each
/// operator's entries in row-major order.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ChannelJson {
    pub dim_in: usize,
    pub dim_out: usize,
    pub kraus: Vec<Vec<[f64; 2]>>,
}

impl ChannelJson {
    pub fn from_channel(ch: &Channel) -> Self {
        ChannelJson {
            dim_in: ch.dim_in(),
            dim_out: ch.dim_out(),
            kraus: ch.kraus().iter().map(|k| entries_to_json(k.data())).collect(),
        }
    }

    pub fn to_channel(&self) -> Result<Channel> {
        let ops = self
            .kraus
            .iter()
            .map(|entries| {
                CMatrix::new(self.dim_out, self.dim_in, entries_from_json(entries))
                    .map_err(|e| anyhow!("bad Kraus entries: {e}"))
            })
            .collect::<Result<Vec<_>>>()?;
        Channel::from_kraus(ops).map_err(|e| anyhow!("bad channel: {e}"))
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct PlanJson {
    pub n: usize,
    pub sampler: String,
    pub seed: u64,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub epsilon_target: Option<f64>,
}

impl PlanJson {
    pub fn from_plan(plan: &CompressionPlan) -> Self {
        PlanJson {
            n: plan.n,
            sampler: plan.sampler.name().to_string(),
            seed: plan.seed,
            epsilon_target: plan.epsilon_target,
        }
    }

    pub fn to_plan(&self) -> Result<CompressionPlan> {
        let sampler = crate::spec::parse_sampler(&self.sampler)?;
        let mut plan = CompressionPlan::new(self.n, sampler, self.seed)
            .map_err(|e| anyhow!("bad plan: {e}"))?;
        plan.epsilon_target = self.epsilon_target;
        Ok(plan)
    }
}

/// Compression output: plan echo, witness diagnostics, the sliced Kraus set,
/// the corrected channel when present, and the sampled environment vectors.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct CompressionResultJson {
    pub plan: PlanJson,
    pub env_dim: usize,
    pub tp_defect: f64,
    pub warn_coarse: bool,
    pub witness_s: Vec<[f64; 2]>,
    pub sliced: ChannelJson,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub corrected: Option<ChannelJson>,
    pub phis: Vec<Vec<[f64; 2]>>,
}

impl CompressionResultJson {
    pub fn from_result(result: &CompressionResult) -> Self {
        CompressionResultJson {
            plan: PlanJson::from_plan(&result.plan),
            env_dim: result.env_dim,
            tp_defect: result.tp_defect,
            warn_coarse: result.warn_coarse,
            witness_s: entries_to_json(result.witness_s.data()),
            sliced: ChannelJson::from_channel(&result.sliced),
            corrected: result.corrected.as_ref().map(ChannelJson::from_channel),
            phis: result
                .phis
                .iter()
                .map(|phi| entries_to_json(phi.as_slice()))
                .collect(),
        }
    }

    pub fn to_result(&self) -> Result<CompressionResult> {
        let dim_in = self.sliced.dim_in;
        Ok(CompressionResult {
            sliced: self.sliced.to_channel()?,
            witness_s: CMatrix::new(dim_in, dim_in, entries_from_json(&self.witness_s))
                .map_err(|e| anyhow!("bad witness entries: {e}"))?,
            tp_defect: self.tp_defect,
            corrected: match &self.corrected {
                Some(c) => Some(c.to_channel()?),
                None => None,
            },
            env_dim: self.env_dim,
            phis: self
                .phis
                .iter()
                .map(|p| CVector::from_vec(entries_from_json(p)))
                .collect(),
            plan: self.plan.to_plan()?,
            warn_coarse: self.warn_coarse,
        })
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct BudgetJson {
    pub restarts: usize,
    pub iterations: usize,
    pub initial_step: f64,
    pub sample_pool: usize,
    pub seed: u64,
}

impl BudgetJson {
    pub fn from_budget(b: &OptBudget) -> Self {
        BudgetJson {
            restarts: b.restarts,
            iterations: b.iterations,
            initial_step: b.initial_step,
            sample_pool: b.sample_pool,
            seed: b.seed,
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct WitnessJson {
    pub kind: String,
    pub dim: usize,
    pub entries: Vec<[f64; 2]>,
}

/// Metric report: `{quantity, value, witness, budget, seed}` plus the
/// output-side direction when the metric has one.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct MetricReportJson {
    pub quantity: String,
    pub value: f64,
    pub witness: WitnessJson,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub direction: Option<Vec<[f64; 2]>>,
    pub budget: BudgetJson,
    pub seed: u64,
}

impl MetricReportJson {
    pub fn from_report(r: &MetricReport) -> Self {
        let witness = match &r.witness {
            Witness::Pure(v) => WitnessJson {
                kind: "pure".to_string(),
                dim: v.dim(),
                entries: entries_to_json(v.as_slice()),
            },
            Witness::Mixed(m) => WitnessJson {
                kind: "mixed".to_string(),
                dim: m.rows(),
                entries: entries_to_json(m.data()),
            },
        };
        MetricReportJson {
            quantity: r.quantity.clone(),
            value: r.value,
            witness,
            direction: r.direction.as_ref().map(|d| entries_to_json(d.as_slice())),
            budget: BudgetJson::from_budget(&r.budget),
            seed: r.seed,
        }
    }
}

/// Scenario file consumed by `kslice sweep --config`.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ScenarioConfigJson {
    pub channel: String,
    pub n_grid: Vec<usize>,
    pub samplers: Vec<String>,
    pub seeds: Vec<u64>,
    pub metrics: Vec<String>,
    #[serde(default = "default_budget")]
    pub budget: String,
}

fn default_budget() -> String {
    "quick".to_string()
}

pub fn read_scenario(path: &std::path::Path) -> Result<ScenarioConfigJson> {
    let text = std::fs::read_to_string(path)
        .with_context(|| format!("reading scenario config {}", path.display()))?;
    serde_json::from_str(&text).with_context(|| format!("parsing scenario config {}", path.display()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use kslice_core::zoo::random_channel;

    #[test]
    fn channel_json_round_trip_is_bit_exact() {
        let ch = random_channel(3, 4, 5, 99).unwrap();
        let text = serde_json::to_string(&ChannelJson::from_channel(&ch)).unwrap();
        let back: ChannelJson = serde_json::from_str(&text).unwrap();
        let rebuilt = back.to_channel().unwrap();
        assert_eq!(rebuilt.dim_in(), ch.dim_in());
        assert_eq!(rebuilt.dim_out(), ch.dim_out());
        for (a, b) in ch.kraus().iter().zip(rebuilt.kraus()) {
            for (x, y) in a.data().iter().zip(b.data()) {
                assert_eq!(x.re.to_bits(), y.re.to_bits());
                assert_eq!(x.im.to_bits(), y.im.to_bits());
            }
        }
    }
}
