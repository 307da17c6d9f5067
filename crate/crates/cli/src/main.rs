//! `kslice` command line: compress channels, sweep compression grids,
//! verify the build, run the correlation-destruction demo, plot results.
//! Every run writes its fully resolved configuration as JSON next to the
//! outputs so results are reproducible from the artifacts alone.

use std::fs;
use std::path::{Path, PathBuf};

use anyhow::{anyhow, bail, Context, Result};
use clap::{Args, Parser, Subcommand};
use serde_json::json;

use kslice_cli::correlations::correlations_demo;
use kslice_cli::jsonio::{
    CompressionResultJson, MetricReportJson, ScenarioConfigJson,
};
use kslice_cli::spec::{parse_channel_spec, parse_sampler};
use kslice_cli::sweep::{fit_power_laws, fits_to_csv, rows_to_csv, run_sweep};
use kslice_cli::verify::{verify_suite, Level};
use kslice_cli::{csvio, svg};

use kslice_core::compress::{compress, CompressionPlan};
use kslice_core::metrics::{entropy_rank_bound, OptBudget};

#[derive(Parser)]
#[command(
    name = "kslice",
    about = "Compress quantum channels into few-Kraus-operator maps by random environment slicing, and certify the result",
    version
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct CommonOut {
    /// Output directory (created if missing).
    #[arg(long, default_value = "out")]
    out: PathBuf,
    /// Also print the machine-readable result as JSON on stdout.
    #[arg(long)]
    json: bool,
}

#[derive(Subcommand)]
enum Command {
    /// Compress one channel and write the result (Kraus set, witness,
    /// sampled vectors) as JSON.
    Compress {
        /// Channel spec, e.g. randomizing:d=16 or werner:d=4,lambda=0.75.
        #[arg(long)]
        channel: String,
        /// Number of environment slices.
        #[arg(long)]
        n: usize,
        /// haar, basis, or exhaustive (requires n = |E|).
        #[arg(long, default_value = "haar")]
        sampler: String,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Target epsilon echoed into the report (the construction itself
        /// only consumes n).
        #[arg(long)]
        epsilon_target: Option<f64>,
        /// Also estimate the entropy-difference compression floor.
        #[arg(long)]
        rank_bound: bool,
        #[command(flatten)]
        common: CommonOut,
    },
    /// Run a (n, sampler, seed) grid for one channel and write sweep.csv.
    Sweep {
        /// Scenario config JSON; inline flags are ignored when set.
        #[arg(long)]
        config: Option<PathBuf>,
        #[arg(long)]
        channel: Option<String>,
        /// Comma-separated slice counts, e.g. 256,1024,4096.
        #[arg(long, value_delimiter = ',')]
        n_grid: Vec<usize>,
        /// Comma-separated samplers, e.g. haar,basis.
        #[arg(long, value_delimiter = ',', default_value = "haar")]
        samplers: Vec<String>,
        /// Comma-separated seeds.
        #[arg(long, value_delimiter = ',', default_value = "1")]
        seeds: Vec<u64>,
        /// Comma-separated metrics, e.g. one_to_p:p=1,tp_defect.
        #[arg(long, value_delimiter = ',')]
        metrics: Vec<String>,
        /// Optimizer budget: quick or full.
        #[arg(long, default_value = "quick")]
        budget: String,
        #[command(flatten)]
        common: CommonOut,
    },
    /// Run the verification suite; exits nonzero on any failing check.
    Verify {
        /// quick (reduced scale, ~2 min) or full (stated scales).
        #[arg(long, default_value = "quick")]
        level: String,
        #[command(flatten)]
        common: CommonOut,
    },
    /// Correlation-destruction demo on a seeded separable state.
    Correlations {
        #[arg(long, default_value_t = 8)]
        dim_a: usize,
        #[arg(long, default_value_t = 4)]
        dim_c: usize,
        /// Target state spec: maxmixed, pure:k=K, or random:seed=S.
        #[arg(long, default_value = "maxmixed")]
        sigma: String,
        #[arg(long, default_value_t = 2048)]
        n: usize,
        #[arg(long, default_value_t = 7)]
        seed: u64,
        #[arg(long, default_value_t = 20)]
        terms: usize,
        #[arg(long, default_value = "haar")]
        sampler: String,
        /// Optimizer budget: quick or full.
        #[arg(long, default_value = "quick")]
        budget: String,
        #[command(flatten)]
        common: CommonOut,
    },
    /// Render a log-log SVG line chart from a sweep CSV.
    Plot {
        #[arg(long)]
        csv: PathBuf,
        #[arg(long, default_value = "n")]
        x: String,
        #[arg(long, default_value = "value")]
        y: String,
        /// Comma-separated grouping columns, one polyline per group.
        #[arg(long, value_delimiter = ',', default_value = "sampler")]
        group: Vec<String>,
        /// Output SVG path.
        #[arg(long)]
        out_file: PathBuf,
    },
}

fn ensure_out(dir: &Path) -> Result<()> {
    fs::create_dir_all(dir).with_context(|| format!("creating output dir {}", dir.display()))
}

fn write_text(path: &Path, text: &str) -> Result<()> {
    fs::write(path, text).with_context(|| format!("writing {}", path.display()))
}

fn log_config(dir: &Path, name: &str, config: &serde_json::Value) -> Result<()> {
    write_text(
        &dir.join(format!("{name}.config.json")),
        &serde_json::to_string_pretty(config)?,
    )
}

fn metric_budget(level: &str, seed: u64) -> Result<OptBudget> {
    match level {
        "quick" => Ok(OptBudget::quick(seed)),
        "full" => Ok(OptBudget::with_seed(seed)),
        other => bail!("unknown budget level `{other}` (expected quick or full)"),
    }
}

fn main() -> Result<()> {
    let cli = Cli::parse();
    match cli.command {
        Command::Compress {
            channel,
            n,
            sampler,
            seed,
            epsilon_target,
            rank_bound,
            common,
        } => {
            ensure_out(&common.out)?;
            let reference = parse_channel_spec(&channel)?;
            let mut plan = CompressionPlan::new(n, parse_sampler(&sampler)?, seed)?;
            plan.epsilon_target = epsilon_target;
            let config = json!({
                "command": "compress",
                "channel": channel,
                "n": n,
                "sampler": sampler,
                "seed": seed,
                "epsilon_target": epsilon_target,
                "rank_bound": rank_bound,
            });
            log_config(&common.out, "compress", &config)?;
            let result = compress(&reference, &plan)?;
            let result_json = CompressionResultJson::from_result(&result);
            let path = common.out.join("compression.json");
            write_text(&path, &serde_json::to_string(&result_json)?)?;
            eprintln!(
                "compressed {channel}: |E|={}, n={n}, tp_defect={:.6e}, corrected={}",
                result.env_dim,
                result.tp_defect,
                result.corrected.is_some(),
            );
            if result.warn_coarse {
                eprintln!(
                    "warning: tp_defect {:.3} >= 0.5; the correction exists but the proof's distance bounds do not apply",
                    result.tp_defect
                );
            }
            let mut stdout_json = json!({
                "tp_defect": result.tp_defect,
                "env_dim": result.env_dim,
                "kraus_count": result.sliced.kraus().len(),
                "corrected": result.corrected.is_some(),
                "output": path.display().to_string(),
            });
            if rank_bound {
                let report = entropy_rank_bound(&reference, &OptBudget::quick(seed))?;
                let floor = epsilon_target
                    .map(|eps| ((1.0 - eps) * report.value).exp());
                eprintln!(
                    "entropy rank bound: max |S(rho)-S(N(rho))| >= {:.6}{}",
                    report.value,
                    floor
                        .map(|f| format!(", implied Kraus-rank floor {f:.2}"))
                        .unwrap_or_default()
                );
                let report_path = common.out.join("rank_bound.json");
                write_text(
                    &report_path,
                    &serde_json::to_string(&MetricReportJson::from_report(&report))?,
                )?;
                stdout_json["rank_bound"] = json!(report.value);
            }
            eprintln!("wrote {}", path.display());
            if common.json {
                println!("{stdout_json}");
            }
        }
        Command::Sweep {
            config,
            channel,
            n_grid,
            samplers,
            seeds,
            metrics,
            budget,
            common,
        } => {
            ensure_out(&common.out)?;
            let cfg: ScenarioConfigJson = match config {
                Some(path) => kslice_cli::jsonio::read_scenario(&path)?,
                None => ScenarioConfigJson {
                    channel: channel.ok_or_else(|| anyhow!("--channel or --config required"))?,
                    n_grid,
                    samplers,
                    seeds,
                    metrics,
                    budget,
                },
            };
            log_config(&common.out, "sweep", &serde_json::to_value(&cfg)?)?;
            let rows = run_sweep(&cfg)?;
            let csv = rows_to_csv(&rows);
            let path = common.out.join("sweep.csv");
            write_text(&path, &csv)?;
            eprintln!("wrote {} ({} rows)", path.display(), rows.len());
            let fits = fit_power_laws(&rows);
            if !fits.is_empty() {
                let fit_path = common.out.join("fit.csv");
                write_text(&fit_path, &fits_to_csv(&fits))?;
                for fit in &fits {
                    eprintln!(
                        "fit {} {} {}: value ~ {:.4} * n^{:.3} ({} points)",
                        fit.channel, fit.sampler, fit.metric, fit.prefactor, fit.exponent, fit.points
                    );
                }
                eprintln!("wrote {}", fit_path.display());
            }
            if common.json {
                println!(
                    "{}",
                    json!({
                        "rows": rows.len(),
                        "fits": fits.len(),
                        "output": path.display().to_string(),
                    })
                );
            }
        }
        Command::Verify { level, common } => {
            ensure_out(&common.out)?;
            let level = Level::parse(&level)
                .ok_or_else(|| anyhow!("unknown level `{level}` (expected quick or full)"))?;
            log_config(
                &common.out,
                "verify",
                &json!({ "command": "verify", "level": level.name() }),
            )?;
            let report = verify_suite(level);
            for check in &report.checks {
                eprintln!(
                    "[{}] {:<4} {:<48} value={:.6e} ({})",
                    if check.pass { "PASS" } else { "FAIL" },
                    check.id,
                    check.name,
                    check.value,
                    check.detail
                );
            }
            eprintln!(
                "verify {}: {}/{} checks passed",
                report.level.name(),
                report.passed(),
                report.checks.len()
            );
            write_text(&common.out.join("verify.csv"), &report.to_csv())?;
            write_text(
                &common.out.join("verify_report.json"),
                &serde_json::to_string_pretty(&report.to_json())?,
            )?;
            if common.json {
                println!("{}", report.to_json());
            }
            if !report.all_pass() {
                std::process::exit(1);
            }
        }
        Command::Correlations {
            dim_a,
            dim_c,
            sigma,
            n,
            seed,
            terms,
            sampler,
            budget,
            common,
        } => {
            ensure_out(&common.out)?;
            let config = json!({
                "command": "correlations",
                "dim_a": dim_a,
                "dim_c": dim_c,
                "sigma": sigma,
                "n": n,
                "seed": seed,
                "terms": terms,
                "sampler": sampler,
                "budget": budget,
            });
            log_config(&common.out, "correlations", &config)?;
            let report = correlations_demo(
                dim_a,
                dim_c,
                &sigma,
                n,
                seed,
                terms,
                parse_sampler(&sampler)?,
                &metric_budget(&budget, seed)?,
            )?;
            eprintln!(
                "correlations: left side {:.6e} vs per-term bound {:.6e}; eps_hat {:.4}; dual worst ratio {:.3}",
                report.left_side, report.per_term_bound, report.eps_hat, report.dual_worst_ratio
            );
            let path = common.out.join("correlations.json");
            write_text(&path, &serde_json::to_string_pretty(&report)?)?;
            eprintln!("wrote {}", path.display());
            if common.json {
                println!("{}", serde_json::to_string(&report)?);
            }
        }
        Command::Plot { csv, x, y, group, out_file } => {
            svg::emit_svg(&csv, &x, &y, &group, &out_file)?;
            let config = json!({
                "command": "plot",
                "csv": csv.display().to_string(),
                "x": x,
                "y": y,
                "group": group,
                "out_file": out_file.display().to_string(),
            });
            write_text(
                &out_file.with_extension("config.json"),
                &serde_json::to_string_pretty(&config)?,
            )?;
            let model = csvio::parse_csv(&fs::read_to_string(&csv)?)?;
            eprintln!(
                "wrote {} ({} rows plotted)",
                out_file.display(),
                model.rows.len()
            );
        }
    }
    Ok(())
}
