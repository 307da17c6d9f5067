//! IO formats, fault injection, and end-to-end binary runs.

use std::path::Path;
use std::process::Command;

use kslice_cli::csvio::parse_csv;
use kslice_cli::jsonio::{ChannelJson, CompressionResultJson, ScenarioConfigJson};
use kslice_cli::sweep::{rows_to_csv, run_sweep};
use kslice_cli::verify::check_tp_exactness;

use kslice_core::compress::{compress, CompressionPlan, Sampler};
use kslice_core::zoo::{qc_channel, randomizing_channel};
use kslice_core::Channel;

#[test]
fn broken_kraus_normalization_fails_the_tp_check() {
    // Scale every Kraus operator by 1%, so S = 1.0201·1.
    let ch = qc_channel(4, 4).unwrap();
    let broken: Vec<_> = ch.kraus().iter().map(|k| k.scale_re(1.01)).collect();
    let broken = Channel::from_kraus(broken).unwrap();
    let check = check_tp_exactness(&[("broken qc".to_string(), broken)]);
    assert!(!check.pass);
    assert!((check.value - 0.0201).abs() < 1e-10);
    // The same check on the intact channel passes.
    let check = check_tp_exactness(&[("qc".to_string(), ch)]);
    assert!(check.pass);
}

#[test]
fn compression_result_json_round_trip_is_bit_exact() {
    let ch = randomizing_channel(3).unwrap();
    let plan = CompressionPlan::new(8, Sampler::Haar, 21).unwrap();
    let result = compress(&ch, &plan).unwrap();
    let text = serde_json::to_string(&CompressionResultJson::from_result(&result)).unwrap();
    let parsed: CompressionResultJson = serde_json::from_str(&text).unwrap();
    let back = parsed.to_result().unwrap();
    assert_eq!(back.env_dim, result.env_dim);
    assert_eq!(back.tp_defect.to_bits(), result.tp_defect.to_bits());
    assert_eq!(back.phis.len(), result.phis.len());
    for (a, b) in result.sliced.kraus().iter().zip(back.sliced.kraus()) {
        for (x, y) in a.data().iter().zip(b.data()) {
            assert_eq!(x.re.to_bits(), y.re.to_bits());
            assert_eq!(x.im.to_bits(), y.im.to_bits());
        }
    }
    for (a, b) in result.phis.iter().zip(&back.phis) {
        for (x, y) in a.as_slice().iter().zip(b.as_slice()) {
            assert_eq!(x.re.to_bits(), y.re.to_bits());
            assert_eq!(x.im.to_bits(), y.im.to_bits());
        }
    }
    assert!(back.corrected.is_some());
}

#[test]
fn sweep_errors_shrink_with_n_per_seed() {
    let cfg = ScenarioConfigJson {
        channel: "randomizing:d=4".to_string(),
        n_grid: vec![32, 128],
        samplers: vec!["haar".to_string()],
        seeds: vec![1, 2],
        metrics: vec!["one_to_p:p=1".to_string()],
        budget: "quick".to_string(),
    };
    let rows = run_sweep(&cfg).unwrap();
    for seed in [1u64, 2] {
        let at = |n: usize| {
            rows.iter()
                .find(|r| r.n == n && r.seed == seed)
                .map(|r| r.value)
                .unwrap()
        };
        assert!(at(128) < at(32), "seed {seed}");
    }
}

#[test]
fn sweep_metric_of_reference_channel_is_constant() {
    // The closed form 2λ/(d+2λ−1) gives 2/5 at d=4, λ=1; the metric only
    // involves the reference channel, so every row agrees.
    let cfg = ScenarioConfigJson {
        channel: "werner:d=4,lambda=1".to_string(),
        n_grid: vec![4, 8],
        samplers: vec!["haar".to_string()],
        seeds: vec![3],
        metrics: vec!["max_output_infnorm".to_string()],
        budget: "quick".to_string(),
    };
    let rows = run_sweep(&cfg).unwrap();
    assert_eq!(rows.len(), 2);
    for row in &rows {
        assert!((row.value - 0.4).abs() < 1e-6, "value {}", row.value);
    }
    assert_eq!(rows[0].value.to_bits(), rows[1].value.to_bits());
}

fn kslice(args: &[&str]) -> std::process::Output {
    Command::new(env!("CARGO_BIN_EXE_kslice"))
        .args(args)
        .output()
        .expect("binary runs")
}

#[test]
fn binary_compress_sweep_plot_pipeline() {
    let dir = std::env::temp_dir().join(format!("kslice_cli_io_{}", std::process::id()));
    let out = dir.to_str().unwrap();
    std::fs::create_dir_all(&dir).unwrap();

    let run = kslice(&[
        "compress",
        "--channel",
        "randomizing:d=4",
        "--n",
        "64",
        "--seed",
        "3",
        "--epsilon-target",
        "0.5",
        "--rank-bound",
        "--out",
        out,
        "--json",
    ]);
    assert!(run.status.success(), "{}", String::from_utf8_lossy(&run.stderr));
    let stdout: serde_json::Value =
        serde_json::from_slice(&run.stdout).expect("machine-readable stdout");
    assert_eq!(stdout["env_dim"], serde_json::json!(16));
    let result_text = std::fs::read_to_string(dir.join("compression.json")).unwrap();
    let result: CompressionResultJson = serde_json::from_str(&result_text).unwrap();
    assert_eq!(result.sliced.kraus.len(), 64);
    assert!(Path::new(&dir.join("compress.config.json")).exists());

    let run = kslice(&[
        "sweep",
        "--channel",
        "randomizing:d=2",
        "--n-grid",
        "4,16",
        "--samplers",
        "haar,basis",
        "--seeds",
        "1,2",
        "--metrics",
        "one_to_p:p=1,tp_defect",
        "--out",
        out,
    ]);
    assert!(run.status.success(), "{}", String::from_utf8_lossy(&run.stderr));
    let csv = std::fs::read_to_string(dir.join("sweep.csv")).unwrap();
    let table = parse_csv(&csv).unwrap();
    assert_eq!(table.header, vec!["channel", "n", "sampler", "seed", "metric", "value", "ms"]);
    assert_eq!(table.rows.len(), 2 * 2 * 2 * 2);

    let svg_path = dir.join("chart.svg");
    let run = kslice(&[
        "plot",
        "--csv",
        dir.join("sweep.csv").to_str().unwrap(),
        "--x",
        "n",
        "--y",
        "value",
        "--group",
        "sampler,metric",
        "--out-file",
        svg_path.to_str().unwrap(),
    ]);
    assert!(run.status.success(), "{}", String::from_utf8_lossy(&run.stderr));
    let svg = std::fs::read_to_string(&svg_path).unwrap();
    assert!(svg.starts_with("<svg"));
    // The basis/tp_defect group is identically zero (basis slices of a
    // mixed-unitary channel are exactly TP), so it drops off the log axes
    // and three of the four groups remain.
    assert_eq!(svg.matches("<polyline").count(), 3);
    assert!(svg.contains(">haar,one_to_p(p=1)</text>"));
    assert!(svg.contains(">basis,one_to_p(p=1)</text>"));

    let run = kslice(&[
        "correlations",
        "--dim-a",
        "4",
        "--dim-c",
        "2",
        "--n",
        "64",
        "--terms",
        "3",
        "--out",
        out,
        "--json",
    ]);
    assert!(run.status.success(), "{}", String::from_utf8_lossy(&run.stderr));
    let report: serde_json::Value = serde_json::from_slice(&run.stdout).unwrap();
    assert!(report["left_side"].as_f64().unwrap() <= report["per_term_bound"].as_f64().unwrap() + 1e-10);

    std::fs::remove_dir_all(&dir).ok();
}

#[test]
fn binary_rejects_bad_specs_and_levels() {
    let run = kslice(&["compress", "--channel", "sponge:d=4", "--n", "4"]);
    assert!(!run.status.success());
    let stderr = String::from_utf8_lossy(&run.stderr);
    assert!(stderr.contains("sponge"), "stderr: {stderr}");

    let run = kslice(&["verify", "--level", "medium"]);
    assert!(!run.status.success());

    let run = kslice(&[
        "sweep",
        "--channel",
        "randomizing:d=2",
        "--n-grid",
        "",
        "--metrics",
        "tp_defect",
    ]);
    assert!(!run.status.success());
}

#[test]
fn plot_refuses_empty_csv_without_writing() {
    let dir = std::env::temp_dir().join(format!("kslice_plot_{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let csv_path = dir.join("empty.csv");
    std::fs::write(&csv_path, "n,value\n").unwrap();
    let out_path = dir.join("never.svg");
    let run = kslice(&[
        "plot",
        "--csv",
        csv_path.to_str().unwrap(),
        "--x",
        "n",
        "--y",
        "value",
        "--out-file",
        out_path.to_str().unwrap(),
    ]);
    assert!(!run.status.success());
    assert!(!out_path.exists());
    std::fs::remove_dir_all(&dir).ok();
}

#[test]
fn sweep_csv_quotes_channel_specs_with_commas() {
    let cfg = ScenarioConfigJson {
        channel: "werner:d=3,lambda=0.5".to_string(),
        n_grid: vec![4],
        samplers: vec!["basis".to_string()],
        seeds: vec![1],
        metrics: vec!["tp_defect".to_string()],
        budget: "quick".to_string(),
    };
    let csv = rows_to_csv(&run_sweep(&cfg).unwrap());
    assert!(csv.contains("\"werner:d=3,lambda=0.5\""));
    let table = parse_csv(&csv).unwrap();
    assert_eq!(table.rows[0][0], "werner:d=3,lambda=0.5");
}

#[test]
fn channel_json_matches_documented_shape() {
    let ch = randomizing_channel(2).unwrap();
    let value = serde_json::to_value(ChannelJson::from_channel(&ch)).unwrap();
    assert_eq!(value["dim_in"], 2);
    assert_eq!(value["dim_out"], 2);
    assert_eq!(value["kraus"].as_array().unwrap().len(), 4);
    assert_eq!(value["kraus"][0].as_array().unwrap().len(), 4);
    assert_eq!(value["kraus"][0][0].as_array().unwrap().len(), 2);
}
