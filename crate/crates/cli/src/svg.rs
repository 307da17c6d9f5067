//! Self-contained SVG 1.1 log-log line charts from CSV tables. Output is a
//! pure function of the input bytes: groups are sorted, points are sorted by
//! abscissa, and every coordinate is formatted with fixed precision.

use std::collections::BTreeMap;

use anyhow::{anyhow, bail, Result};

use crate::csvio::CsvTable;

const WIDTH: f64 = 760.0;
const HEIGHT: f64 = 520.0;
const MARGIN_LEFT: f64 = 70.0;
const MARGIN_RIGHT: f64 = 170.0;
const MARGIN_TOP: f64 = 30.0;
const MARGIN_BOTTOM: f64 = 60.0;

const PALETTE: [&str; 8] = [
    "#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b", "#17becf", "#7f7f7f",
];

fn fmt(v: f64) -> String {
    format!("{v:.2}")
}

/// Tick positions at integer powers of ten inside [lo, hi] (log10 values).
fn decade_ticks(lo: f64, hi: f64) -> Vec<f64> {
    let mut ticks = Vec::new();
    let mut t = lo.ceil();
    while t <= hi + 1e-9 {
        ticks.push(t);
        t += 1.0;
    }
    if ticks.is_empty() {
        ticks.push(lo);
        ticks.push(hi);
    }
    ticks
}

fn tick_label(log_value: f64) -> String {
    if log_value == log_value.round() {
        let exp = log_value.round() as i32;
        if (-3..=4).contains(&exp) {
            let v = 10f64.powi(exp);
            if exp >= 0 {
                format!("{}", v as i64)
            } else {
                format!("{v}")
            }
        } else {
            format!("1e{exp}")
        }
    } else {
        format!("{:.3}", 10f64.powf(log_value))
    }
}

fn xml_escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}

/// Render one polyline per group of a CSV table, log-log scaled.
pub fn render_chart(
    table: &CsvTable,
    x_col: &str,
    y_col: &str,
    group_cols: &[String],
) -> Result<String> {
    if table.rows.is_empty() {
        bail!("CSV body is empty, nothing to plot");
    }
    let xi = table
        .column_index(x_col)
        .ok_or_else(|| anyhow!("missing column `{x_col}`"))?;
    let yi = table
        .column_index(y_col)
        .ok_or_else(|| anyhow!("missing column `{y_col}`"))?;
    let group_idx: Vec<usize> = group_cols
        .iter()
        .map(|g| {
            table
                .column_index(g)
                .ok_or_else(|| anyhow!("missing column `{g}`"))
        })
        .collect::<Result<_>>()?;
    let mut groups: BTreeMap<String, Vec<(f64, f64)>> = BTreeMap::new();
    let mut dropped = 0usize;
    for row in &table.rows {
        let key = if group_idx.is_empty() {
            "all".to_string()
        } else {
            group_idx
                .iter()
                .map(|&i| row[i].clone())
                .collect::<Vec<_>>()
                .join(",")
        };
        let x: f64 = row[xi]
            .parse()
            .map_err(|_| anyhow!("non-numeric value `{}` in column `{x_col}`", row[xi]))?;
        let y: f64 = row[yi]
            .parse()
            .map_err(|_| anyhow!("non-numeric value `{}` in column `{y_col}`", row[yi]))?;
        // Nonpositive values have no place on log axes; drop them.
        if x <= 0.0 || y <= 0.0 || !x.is_finite() || !y.is_finite() {
            dropped += 1;
            continue;
        }
        groups.entry(key).or_default().push((x.log10(), y.log10()));
    }
    if groups.is_empty() {
        bail!("no positive data to plot on log-log axes ({dropped} points dropped)");
    }
    for pts in groups.values_mut() {
        pts.sort_by(|a, b| a.partial_cmp(b).unwrap_or(std::cmp::Ordering::Equal));
    }
    let all: Vec<(f64, f64)> = groups.values().flatten().copied().collect();
    let (mut x_lo, mut x_hi) = all
        .iter()
        .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), &(x, _)| {
            (lo.min(x), hi.max(x))
        });
    let (mut y_lo, mut y_hi) = all
        .iter()
        .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), &(_, y)| {
            (lo.min(y), hi.max(y))
        });
    if x_hi - x_lo < 1e-9 {
        x_lo -= 0.5;
        x_hi += 0.5;
    }
    if y_hi - y_lo < 1e-9 {
        y_lo -= 0.5;
        y_hi += 0.5;
    }
    let pad_x = 0.04 * (x_hi - x_lo);
    let pad_y = 0.06 * (y_hi - y_lo);
    x_lo -= pad_x;
    x_hi += pad_x;
    y_lo -= pad_y;
    y_hi += pad_y;
    let plot_w = WIDTH - MARGIN_LEFT - MARGIN_RIGHT;
    let plot_h = HEIGHT - MARGIN_TOP - MARGIN_BOTTOM;
    let to_px = |x: f64| MARGIN_LEFT + (x - x_lo) / (x_hi - x_lo) * plot_w;
    let to_py = |y: f64| MARGIN_TOP + (y_hi - y) / (y_hi - y_lo) * plot_h;

    let mut svg = String::new();
    svg.push_str(&format!(
        "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"{WIDTH}\" height=\"{HEIGHT}\" viewBox=\"0 0 {WIDTH} {HEIGHT}\">\n"
    ));
    svg.push_str("<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n");
    // Frame.
    svg.push_str(&format!(
        "<rect x=\"{}\" y=\"{}\" width=\"{}\" height=\"{}\" fill=\"none\" stroke=\"#444\" stroke-width=\"1\"/>\n",
        fmt(MARGIN_LEFT),
        fmt(MARGIN_TOP),
        fmt(plot_w),
        fmt(plot_h)
    ));
    // Grid and tick labels.
    for t in decade_ticks(x_lo, x_hi) {
        let px = to_px(t);
        svg.push_str(&format!(
            "<line x1=\"{0}\" y1=\"{1}\" x2=\"{0}\" y2=\"{2}\" stroke=\"#ddd\" stroke-width=\"1\"/>\n",
            fmt(px),
            fmt(MARGIN_TOP),
            fmt(MARGIN_TOP + plot_h)
        ));
        svg.push_str(&format!(
            "<text x=\"{}\" y=\"{}\" font-family=\"sans-serif\" font-size=\"12\" text-anchor=\"middle\">{}</text>\n",
            fmt(px),
            fmt(MARGIN_TOP + plot_h + 18.0),
            tick_label(t)
        ));
    }
    for t in decade_ticks(y_lo, y_hi) {
        let py = to_py(t);
        svg.push_str(&format!(
            "<line x1=\"{0}\" y1=\"{2}\" x2=\"{1}\" y2=\"{2}\" stroke=\"#ddd\" stroke-width=\"1\"/>\n",
            fmt(MARGIN_LEFT),
            fmt(MARGIN_LEFT + plot_w),
            fmt(py)
        ));
        svg.push_str(&format!(
            "<text x=\"{}\" y=\"{}\" font-family=\"sans-serif\" font-size=\"12\" text-anchor=\"end\">{}</text>\n",
            fmt(MARGIN_LEFT - 8.0),
            fmt(py + 4.0),
            tick_label(t)
        ));
    }
    // Axis labels.
    svg.push_str(&format!(
        "<text x=\"{}\" y=\"{}\" font-family=\"sans-serif\" font-size=\"14\" text-anchor=\"middle\">{}</text>\n",
        fmt(MARGIN_LEFT + plot_w / 2.0),
        fmt(HEIGHT - 14.0),
        xml_escape(x_col)
    ));
    svg.push_str(&format!(
        "<text x=\"18\" y=\"{}\" font-family=\"sans-serif\" font-size=\"14\" text-anchor=\"middle\" transform=\"rotate(-90 18 {})\">{}</text>\n",
        fmt(MARGIN_TOP + plot_h / 2.0),
        fmt(MARGIN_TOP + plot_h / 2.0),
        xml_escape(y_col)
    ));
    // Polylines and legend.
    for (g, (key, pts)) in groups.iter().enumerate() {
        let color = PALETTE[g % PALETTE.len()];
        let path: Vec<String> = pts
            .iter()
            .map(|&(x, y)| format!("{},{}", fmt(to_px(x)), fmt(to_py(y))))
            .collect();
        svg.push_str(&format!(
            "<polyline fill=\"none\" stroke=\"{color}\" stroke-width=\"1.8\" points=\"{}\"/>\n",
            path.join(" ")
        ));
        for &(x, y) in pts {
            svg.push_str(&format!(
                "<circle cx=\"{}\" cy=\"{}\" r=\"2.6\" fill=\"{color}\"/>\n",
                fmt(to_px(x)),
                fmt(to_py(y))
            ));
        }
        let ly = MARGIN_TOP + 16.0 + 20.0 * g as f64;
        svg.push_str(&format!(
            "<line x1=\"{}\" y1=\"{}\" x2=\"{}\" y2=\"{}\" stroke=\"{color}\" stroke-width=\"1.8\"/>\n",
            fmt(MARGIN_LEFT + plot_w + 12.0),
            fmt(ly),
            fmt(MARGIN_LEFT + plot_w + 36.0),
            fmt(ly)
        ));
        svg.push_str(&format!(
            "<text x=\"{}\" y=\"{}\" font-family=\"sans-serif\" font-size=\"12\">{}</text>\n",
            fmt(MARGIN_LEFT + plot_w + 42.0),
            fmt(ly + 4.0),
            xml_escape(key)
        ));
    }
    svg.push_str("</svg>\n");
    Ok(svg)
}

/// Read a CSV file and write the chart; refuses to write anything when the
/// input is unusable.
pub fn emit_svg(
    csv_path: &std::path::Path,
    x_col: &str,
    y_col: &str,
    group_cols: &[String],
    out_path: &std::path::Path,
) -> Result<()> {
    let text = std::fs::read_to_string(csv_path)
        .map_err(|e| anyhow!("reading {}: {e}", csv_path.display()))?;
    let table = crate::csvio::parse_csv(&text)?;
    let svg = render_chart(&table, x_col, y_col, group_cols)?;
    std::fs::write(out_path, svg).map_err(|e| anyhow!("writing {}: {e}", out_path.display()))?;
    Ok(())
}
