//! Emission of curve CSVs, LOOCV report JSON, run manifests, and static
//! SVG figures.
//!
//! Data files carry full round-trip number precision and no timestamps,
//! so identical inputs produce identical bytes; wall time lives only in
//! the run manifest.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::harness::{CurveRow, CurveSeries, GammaSpec};
use crate::metrics::EvalReport;

/// Exact header of a curve CSV.
pub const CURVE_CSV_HEADER: &str =
    "t,bound,bound_pos,bound_neg,train_err,train_err_pos,train_err_neg,test_err,test_err_pos,test_err_neg";

/// Keep letters, digits, dots and dashes; everything else becomes '_'
/// (so the label "2/3" yields "2_3").
pub fn sanitize_label(label: &str) -> String {
    label
        .chars()
        .map(|c| {
            if c.is_ascii_alphanumeric() || c == '.' || c == '-' {
                c
            } else {
                '_'
            }
        })
        .collect()
}

pub fn curve_csv_string(series: &CurveSeries) -> String {
    let mut out = String::with_capacity(64 * (series.rows.len() + 1));
    out.push_str(CURVE_CSV_HEADER);
    out.push('\n');
    for r in &series.rows {
        let _ = writeln!(
            out,
            "{},{},{},{},{},{},{},{},{},{}",
            r.t,
            r.bound,
            r.bound_pos,
            r.bound_neg,
            r.train_err,
            r.train_err_pos,
            r.train_err_neg,
            r.test_err,
            r.test_err_pos,
            r.test_err_neg
        );
    }
    out
}

/// Write one CSV per gamma into `dir`, named
/// `curves_gamma_<label>.csv`. A series with no rows produces a
/// header-only file; the caller is expected to flag that in its run
/// manifest.
pub fn emit_curves_csv(series: &[CurveSeries], dir: &Path) -> Result<Vec<PathBuf>> {
    if series.is_empty() {
        return Err(Error::InvalidConfig("no curve series to emit".to_string()));
    }
    std::fs::create_dir_all(dir)?;
    let mut paths = Vec::with_capacity(series.len());
    for s in series {
        let path = dir.join(format!("curves_gamma_{}.csv", sanitize_label(&s.gamma.label)));
        std::fs::write(&path, curve_csv_string(s))?;
        paths.push(path);
    }
    Ok(paths)
}

/// Parse a curve CSV emitted by [`curve_csv_string`] back into a series.
pub fn parse_curve_csv(text: &str, gamma: GammaSpec) -> Result<CurveSeries> {
    let mut lines = text.lines();
    match lines.next() {
        Some(header) if header == CURVE_CSV_HEADER => {}
        other => {
            return Err(Error::InvalidConfig(format!(
                "unexpected curve CSV header: {other:?}"
            )))
        }
    }
    let mut rows = Vec::new();
    for (k, line) in lines.enumerate() {
        if line.is_empty() {
            continue;
        }
        let fields: Vec<&str> = line.split(',').collect();
        if fields.len() != 10 {
            return Err(Error::InvalidConfig(format!(
                "curve CSV row {} has {} fields",
                k + 2,
                fields.len()
            )));
        }
        let parse = |s: &str| -> Result<f64> {
            s.parse()
                .map_err(|_| Error::InvalidConfig(format!("bad number \"{s}\" in curve CSV")))
        };
        rows.push(CurveRow {
            t: fields[0]
                .parse()
                .map_err(|_| Error::InvalidConfig(format!("bad round index \"{}\"", fields[0])))?,
            bound: parse(fields[1])?,
            bound_pos: parse(fields[2])?,
            bound_neg: parse(fields[3])?,
            train_err: parse(fields[4])?,
            train_err_pos: parse(fields[5])?,
            train_err_neg: parse(fields[6])?,
            test_err: parse(fields[7])?,
            test_err_pos: parse(fields[8])?,
            test_err_neg: parse(fields[9])?,
        });
    }
    Ok(CurveSeries { gamma, rows })
}

/// Which curve triple a figure plots.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Panel {
    Bounds,
    Train,
    Test,
}

impl Panel {
    pub fn name(self) -> &'static str {
        match self {
            Panel::Bounds => "bounds",
            Panel::Train => "train",
            Panel::Test => "test",
        }
    }

    fn title(self) -> &'static str {
        match self {
            Panel::Bounds => "Training error bound",
            Panel::Train => "Training error",
            Panel::Test => "Test error",
        }
    }

    fn columns(self, r: &CurveRow) -> (f64, f64, f64) {
        match self {
            Panel::Bounds => (r.bound, r.bound_pos, r.bound_neg),
            Panel::Train => (r.train_err, r.train_err_pos, r.train_err_neg),
            Panel::Test => (r.test_err, r.test_err_pos, r.test_err_neg),
        }
    }
}

const PALETTE: [&str; 6] = [
    "#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b",
];

const FIG_WIDTH: f64 = 720.0;
const FIG_HEIGHT: f64 = 480.0;
const MARGIN_LEFT: f64 = 64.0;
const MARGIN_RIGHT: f64 = 180.0;
const MARGIN_TOP: f64 = 32.0;
const MARGIN_BOTTOM: f64 = 52.0;

/// Render one panel as a self-contained SVG document: one line per
/// quantity (overall solid, positive class dashed, negative class
/// dotted) per gamma, a legend naming each gamma, and a y-range of
/// [0, 1.05 * max]. Identical input produces identical bytes.
pub fn figure_svg_string(series: &[CurveSeries], panel: Panel) -> Result<String> {
    if series.is_empty() {
        return Err(Error::InvalidConfig("no series to plot".to_string()));
    }
    let rounds = series[0].rows.len();
    if rounds == 0 {
        return Err(Error::InvalidConfig("series has no rows".to_string()));
    }
    for s in series {
        if s.rows.len() != rounds {
            return Err(Error::InvalidConfig(format!(
                "series round counts differ: {} vs {}",
                rounds,
                s.rows.len()
            )));
        }
    }

    let mut max_value: f64 = 0.0;
    for s in series {
        for r in &s.rows {
            let (a, b, c) = panel.columns(r);
            max_value = max_value.max(a).max(b).max(c);
        }
    }
    let y_max = if max_value > 0.0 { 1.05 * max_value } else { 1.0 };

    let plot_w = FIG_WIDTH - MARGIN_LEFT - MARGIN_RIGHT;
    let plot_h = FIG_HEIGHT - MARGIN_TOP - MARGIN_BOTTOM;
    let x_of = |t: usize| -> f64 {
        if rounds == 1 {
            MARGIN_LEFT + plot_w / 2.0
        } else {
            MARGIN_LEFT + plot_w * (t as f64 - 1.0) / (rounds as f64 - 1.0)
        }
    };
    let y_of = |v: f64| -> f64 { MARGIN_TOP + plot_h * (1.0 - v / y_max) };

    let mut svg = String::new();
    let _ = writeln!(
        svg,
        "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"{FIG_WIDTH}\" height=\"{FIG_HEIGHT}\" viewBox=\"0 0 {FIG_WIDTH} {FIG_HEIGHT}\">"
    );
    let _ = writeln!(
        svg,
        "  <rect width=\"{FIG_WIDTH}\" height=\"{FIG_HEIGHT}\" fill=\"white\"/>"
    );
    let _ = writeln!(
        svg,
        "  <text x=\"{:.2}\" y=\"20\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"14\" font-weight=\"bold\">{}</text>",
        MARGIN_LEFT + plot_w / 2.0,
        panel.title()
    );

    // Axes and ticks.
    let _ = writeln!(
        svg,
        "  <rect x=\"{MARGIN_LEFT}\" y=\"{MARGIN_TOP}\" width=\"{plot_w}\" height=\"{plot_h}\" fill=\"none\" stroke=\"black\" stroke-width=\"1\"/>"
    );
    for k in 0..=4 {
        let v = y_max * k as f64 / 4.0;
        let y = y_of(v);
        let _ = writeln!(
            svg,
            "  <line x1=\"{:.2}\" y1=\"{y:.2}\" x2=\"{MARGIN_LEFT}\" y2=\"{y:.2}\" stroke=\"black\" stroke-width=\"1\"/>",
            MARGIN_LEFT - 5.0
        );
        let _ = writeln!(
            svg,
            "  <text x=\"{:.2}\" y=\"{:.2}\" text-anchor=\"end\" font-family=\"sans-serif\" font-size=\"11\">{v:.3}</text>",
            MARGIN_LEFT - 8.0,
            y + 3.5
        );
    }
    let x_tick_count = 5.min(rounds);
    for k in 0..x_tick_count {
        let t = if x_tick_count == 1 {
            1
        } else {
            1 + k * (rounds - 1) / (x_tick_count - 1)
        };
        let x = x_of(t);
        let y0 = MARGIN_TOP + plot_h;
        let _ = writeln!(
            svg,
            "  <line x1=\"{x:.2}\" y1=\"{y0:.2}\" x2=\"{x:.2}\" y2=\"{:.2}\" stroke=\"black\" stroke-width=\"1\"/>",
            y0 + 5.0
        );
        let _ = writeln!(
            svg,
            "  <text x=\"{x:.2}\" y=\"{:.2}\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"11\">{t}</text>",
            y0 + 18.0
        );
    }
    let _ = writeln!(
        svg,
        "  <text x=\"{:.2}\" y=\"{:.2}\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"12\">round</text>",
        MARGIN_LEFT + plot_w / 2.0,
        MARGIN_TOP + plot_h + 38.0
    );

    // One polyline per (gamma, quantity).
    let styles = [
        ("overall", ""),
        ("positive class", " stroke-dasharray=\"8 4\""),
        ("negative class", " stroke-dasharray=\"2 3\""),
    ];
    for (si, s) in series.iter().enumerate() {
        let color = PALETTE[si % PALETTE.len()];
        for (qi, (_, dash)) in styles.iter().enumerate() {
            let mut points = String::new();
            for r in &s.rows {
                let (a, b, c) = panel.columns(r);
                let v = [a, b, c][qi];
                let _ = write!(points, "{:.2},{:.2} ", x_of(r.t), y_of(v));
            }
            let _ = writeln!(
                svg,
                "  <polyline fill=\"none\" stroke=\"{color}\" stroke-width=\"1.5\"{dash} points=\"{}\"/>",
                points.trim_end()
            );
        }
    }

    // Legend: gammas by color, quantities by stroke style.
    let legend_x = MARGIN_LEFT + plot_w + 16.0;
    let mut legend_y = MARGIN_TOP + 10.0;
    for (si, s) in series.iter().enumerate() {
        let color = PALETTE[si % PALETTE.len()];
        let _ = writeln!(
            svg,
            "  <line x1=\"{legend_x:.2}\" y1=\"{legend_y:.2}\" x2=\"{:.2}\" y2=\"{legend_y:.2}\" stroke=\"{color}\" stroke-width=\"1.5\"/>",
            legend_x + 26.0
        );
        let _ = writeln!(
            svg,
            "  <text x=\"{:.2}\" y=\"{:.2}\" font-family=\"sans-serif\" font-size=\"12\">gamma = {}</text>",
            legend_x + 32.0,
            legend_y + 4.0,
            s.gamma.label
        );
        legend_y += 20.0;
    }
    legend_y += 8.0;
    for (name, dash) in styles {
        let _ = writeln!(
            svg,
            "  <line x1=\"{legend_x:.2}\" y1=\"{legend_y:.2}\" x2=\"{:.2}\" y2=\"{legend_y:.2}\" stroke=\"black\" stroke-width=\"1.5\"{dash}/>",
            legend_x + 26.0
        );
        let _ = writeln!(
            svg,
            "  <text x=\"{:.2}\" y=\"{:.2}\" font-family=\"sans-serif\" font-size=\"12\">{name}</text>",
            legend_x + 32.0,
            legend_y + 4.0
        );
        legend_y += 20.0;
    }

    svg.push_str("</svg>\n");
    Ok(svg)
}

pub fn emit_figure_svg(series: &[CurveSeries], panel: Panel, out: &Path) -> Result<PathBuf> {
    let svg = figure_svg_string(series, panel)?;
    if let Some(parent) = out.parent() {
        std::fs::create_dir_all(parent)?;
    }
    std::fs::write(out, svg)?;
    Ok(out.to_path_buf())
}

/// One gamma's LOOCV outcome as written to disk.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct LoocvReportDoc {
    pub gamma: f64,
    pub gamma_label: String,
    pub t_max: usize,
    pub n: usize,
    pub m: usize,
    pub report: EvalReport,
}

/// Write one JSON report per gamma into `dir`, named
/// `loocv_gamma_<label>.json`.
pub fn emit_loocv_reports(
    results: &[(GammaSpec, EvalReport)],
    t_max: usize,
    n: usize,
    m: usize,
    dir: &Path,
) -> Result<Vec<PathBuf>> {
    std::fs::create_dir_all(dir)?;
    let mut paths = Vec::with_capacity(results.len());
    for (gamma, report) in results {
        let doc = LoocvReportDoc {
            gamma: gamma.value,
            gamma_label: gamma.label.clone(),
            t_max,
            n,
            m,
            report: *report,
        };
        let path = dir.join(format!("loocv_gamma_{}.json", sanitize_label(&gamma.label)));
        std::fs::write(&path, serde_json::to_string_pretty(&doc)?)?;
        paths.push(path);
    }
    Ok(paths)
}

/// Record of one experiment invocation. The wall time is the one field
/// that varies between otherwise identical runs, which is why it lives
/// here and not in any data file.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct RunManifest {
    pub command: String,
    pub config: serde_json::Value,
    pub seeds: Vec<u64>,
    pub library_version: String,
    pub wall_time_ms: u64,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub warnings: Vec<String>,
}

impl RunManifest {
    pub fn new(command: impl Into<String>, config: serde_json::Value) -> Self {
        Self {
            command: command.into(),
            config,
            seeds: Vec::new(),
            library_version: env!("CARGO_PKG_VERSION").to_string(),
            wall_time_ms: 0,
            warnings: Vec::new(),
        }
    }

    pub fn write(&self, dir: &Path) -> Result<PathBuf> {
        std::fs::create_dir_all(dir)?;
        let path = dir.join("run_manifest.json");
        std::fs::write(&path, serde_json::to_string_pretty(self)?)?;
        Ok(path)
    }
}
