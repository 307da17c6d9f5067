//! Sweep driver: a grid over (n, sampler, seed) for one reference channel,
//! one compression per grid point, one CSV row per (grid point × metric).
//! Rows come out in deterministic grid order; wall time per row is recorded
//! in the final `ms` column for regression tracking (the only column that
//! may differ between byte-identical reruns).

use std::time::Instant;

use anyhow::{anyhow, bail, Result};

use kslice_core::compress::{compress, CompressionPlan, CompressionResult};
use kslice_core::metrics::{
    max_output_infnorm, one_to_p_distance, ordering_epsilon, ordering_margin, OptBudget,
};
use kslice_core::Channel;

use crate::csvio::write_csv;
use crate::jsonio::ScenarioConfigJson;
use crate::spec::{parse_channel_spec, parse_metric_spec, parse_sampler, MetricSpec};

pub const SWEEP_HEADER: [&str; 7] = ["channel", "n", "sampler", "seed", "metric", "value", "ms"];

#[derive(Debug, Clone)]
pub struct SweepRow {
    pub channel: String,
    pub n: usize,
    pub sampler: String,
    pub seed: u64,
    pub metric: String,
    pub value: f64,
    pub ms: u128,
}

impl SweepRow {
    fn fields(&self) -> Vec<String> {
        vec![
            self.channel.clone(),
            self.n.to_string(),
            self.sampler.clone(),
            self.seed.to_string(),
            self.metric.clone(),
            format!("{}", self.value),
            self.ms.to_string(),
        ]
    }
}

pub fn rows_to_csv(rows: &[SweepRow]) -> String {
    let data: Vec<Vec<String>> = rows.iter().map(SweepRow::fields).collect();
    write_csv(&SWEEP_HEADER, &data)
}

fn budget_for(level: &str, seed: u64) -> Result<OptBudget> {
    match level {
        "quick" => Ok(OptBudget::custom(4, 40, 300, seed)?),
        "full" => Ok(OptBudget::custom(8, 80, 1000, seed)?),
        other => bail!("unknown budget level `{other}` (expected quick or full)"),
    }
}

fn eval_metric(
    metric: &MetricSpec,
    reference: &Channel,
    result: &CompressionResult,
    budget: &OptBudget,
) -> Result<f64> {
    let value = match metric {
        MetricSpec::OneToP(p) => {
            one_to_p_distance(reference, &result.sliced, *p, budget)?.value
        }
        MetricSpec::MaxOutputInfnorm => max_output_infnorm(reference, budget)?.value,
        MetricSpec::OrderingMargin(eps) => {
            ordering_margin(reference, &result.sliced, *eps, budget)?.value
        }
        MetricSpec::OrderingEpsilon => {
            ordering_epsilon(reference, &result.sliced, budget)?.value
        }
        MetricSpec::TpDefect => result.tp_defect,
    };
    Ok(value)
}

pub fn validate_config(cfg: &ScenarioConfigJson) -> Result<()> {
    if cfg.n_grid.is_empty() {
        bail!("config error: empty n grid");
    }
    if cfg.samplers.is_empty() {
        bail!("config error: empty sampler list");
    }
    if cfg.seeds.is_empty() {
        bail!("config error: empty seed list");
    }
    if cfg.metrics.is_empty() {
        bail!("config error: empty metric list");
    }
    Ok(())
}

/// Run the whole grid. Grid points are independent (each draws only from its
/// own seeded substreams), so the loop order is just the output order.
pub fn run_sweep(cfg: &ScenarioConfigJson) -> Result<Vec<SweepRow>> {
    validate_config(cfg)?;
    let reference = parse_channel_spec(&cfg.channel)?;
    let metrics: Vec<MetricSpec> = cfg
        .metrics
        .iter()
        .map(|m| parse_metric_spec(m).map_err(|e| anyhow!(e)))
        .collect::<Result<_>>()?;
    let mut rows = Vec::new();
    for &n in &cfg.n_grid {
        for sampler_name in &cfg.samplers {
            let sampler = parse_sampler(sampler_name)?;
            for &seed in &cfg.seeds {
                let plan = CompressionPlan::new(n, sampler, seed)?;
                let result = compress(&reference, &plan)?;
                let budget = budget_for(&cfg.budget, seed)?;
                for metric in &metrics {
                    let start = Instant::now();
                    let value = eval_metric(metric, &reference, &result, &budget)?;
                    rows.push(SweepRow {
                        channel: cfg.channel.clone(),
                        n,
                        sampler: sampler_name.clone(),
                        seed,
                        metric: metric.label(),
                        value,
                        ms: start.elapsed().as_millis(),
                    });
                }
            }
        }
    }
    Ok(rows)
}

/// Empirical power law value ≈ prefactor · n^exponent for one series,
/// fitted by least squares in log-log coordinates. This is how the
/// unspecified constants in the n^(-1/2) error scaling are located
/// empirically: the API takes n directly and the fit reads the constant
/// off the sweep.
#[derive(Debug, Clone)]
pub struct PowerLawFit {
    pub channel: String,
    pub sampler: String,
    pub metric: String,
    pub exponent: f64,
    pub prefactor: f64,
    /// Number of distinct n values entering the fit.
    pub points: usize,
}

pub const FIT_HEADER: [&str; 6] = ["channel", "sampler", "metric", "exponent", "prefactor", "points"];

/// Fit one power law per (sampler, metric) series, averaging values across
/// seeds at each n. Series with fewer than two usable n values (or with
/// nonpositive means, which have no log) are skipped.
pub fn fit_power_laws(rows: &[SweepRow]) -> Vec<PowerLawFit> {
    use std::collections::BTreeMap;
    let mut series: BTreeMap<(String, String, String), BTreeMap<usize, Vec<f64>>> =
        BTreeMap::new();
    for row in rows {
        series
            .entry((row.channel.clone(), row.sampler.clone(), row.metric.clone()))
            .or_default()
            .entry(row.n)
            .or_default()
            .push(row.value);
    }
    let mut fits = Vec::new();
    for ((channel, sampler, metric), by_n) in series {
        let points: Vec<(f64, f64)> = by_n
            .iter()
            .filter_map(|(&n, values)| {
                let mean = values.iter().sum::<f64>() / values.len() as f64;
                (mean > 0.0).then(|| ((n as f64).ln(), mean.ln()))
            })
            .collect();
        if points.len() < 2 {
            continue;
        }
        let len = points.len() as f64;
        let sx: f64 = points.iter().map(|p| p.0).sum();
        let sy: f64 = points.iter().map(|p| p.1).sum();
        let sxx: f64 = points.iter().map(|p| p.0 * p.0).sum();
        let sxy: f64 = points.iter().map(|p| p.0 * p.1).sum();
        let denom = len * sxx - sx * sx;
        if denom.abs() < 1e-12 {
            continue;
        }
        let exponent = (len * sxy - sx * sy) / denom;
        let intercept = (sy - exponent * sx) / len;
        fits.push(PowerLawFit {
            channel,
            sampler,
            metric,
            exponent,
            prefactor: intercept.exp(),
            points: points.len(),
        });
    }
    fits
}

pub fn fits_to_csv(fits: &[PowerLawFit]) -> String {
    let rows: Vec<Vec<String>> = fits
        .iter()
        .map(|f| {
            vec![
                f.channel.clone(),
                f.sampler.clone(),
                f.metric.clone(),
                format!("{}", f.exponent),
                format!("{}", f.prefactor),
                f.points.to_string(),
            ]
        })
        .collect();
    write_csv(&FIT_HEADER, &rows)
}

/// CSV text with the volatile `ms` column blanked, for determinism checks.
pub fn csv_without_ms(csv: &str) -> String {
    csv.lines()
        .map(|line| match line.rfind(',') {
            Some(idx) => format!("{},", &line[..idx]),
            None => line.to_string(),
        })
        .collect::<Vec<_>>()
        .join("\n")
}

#[cfg(test)]
mod tests {
    use super::*;

    fn tiny_config() -> ScenarioConfigJson {
        ScenarioConfigJson {
            channel: "randomizing:d=2".to_string(),
            n_grid: vec![4, 16],
            samplers: vec!["haar".to_string(), "basis".to_string()],
            seeds: vec![1, 2],
            metrics: vec!["one_to_p:p=1".to_string(), "tp_defect".to_string()],
            budget: "quick".to_string(),
        }
    }

    #[test]
    fn produces_one_row_per_grid_point_and_metric() {
        let rows = run_sweep(&tiny_config()).unwrap();
        assert_eq!(rows.len(), 2 * 2 * 2 * 2);
        let csv = rows_to_csv(&rows);
        assert!(csv.starts_with("channel,n,sampler,seed,metric,value,ms\n"));
    }

    #[test]
    fn empty_grid_is_a_config_error() {
        let mut cfg = tiny_config();
        cfg.n_grid.clear();
        let err = run_sweep(&cfg).unwrap_err();
        assert!(err.to_string().contains("empty n grid"));
    }

    #[test]
    fn rows_are_deterministic_up_to_timing() {
        let a = csv_without_ms(&rows_to_csv(&run_sweep(&tiny_config()).unwrap()));
        let b = csv_without_ms(&rows_to_csv(&run_sweep(&tiny_config()).unwrap()));
        assert_eq!(a, b);
    }

    #[test]
    fn fitted_exponent_tracks_the_scaling_law() {
        let cfg = ScenarioConfigJson {
            channel: "randomizing:d=4".to_string(),
            n_grid: vec![32, 128, 512],
            samplers: vec!["haar".to_string()],
            seeds: vec![1, 2],
            metrics: vec!["one_to_p:p=1".to_string()],
            budget: "quick".to_string(),
        };
        let rows = run_sweep(&cfg).unwrap();
        let fits = fit_power_laws(&rows);
        assert_eq!(fits.len(), 1);
        let fit = &fits[0];
        assert_eq!(fit.points, 3);
        assert!(
            fit.exponent > -0.75 && fit.exponent < -0.25,
            "exponent {}",
            fit.exponent
        );
        assert!(fit.prefactor > 0.0);
        let csv = fits_to_csv(&fits);
        assert!(csv.starts_with("channel,sampler,metric,exponent,prefactor,points\n"));
    }

    #[test]
    fn all_zero_series_yields_no_fit() {
        let cfg = ScenarioConfigJson {
            channel: "randomizing:d=2".to_string(),
            n_grid: vec![4, 16],
            samplers: vec!["basis".to_string()],
            seeds: vec![1],
            metrics: vec!["tp_defect".to_string()],
            budget: "quick".to_string(),
        };
        // Basis slices of a mixed-unitary channel are exactly TP, so every
        // value is zero and there is nothing to fit on log axes.
        let rows = run_sweep(&cfg).unwrap();
        assert!(fit_power_laws(&rows).is_empty());
    }
}
