//! Trajectory serialization: CSV rows with 9-significant-digit numbers so
//! write/read round-trips exactly, and a fixed-viewport SVG renderer whose
//! byte output is a pure function of its inputs.

use crate::complexity::Trajectory;
use std::fmt::Write as _;
use std::path::{Path, PathBuf};

#[derive(Debug, thiserror::Error)]
pub enum OutputError {
    #[error("cannot write {path}: {source}")]
    Write {
        path: PathBuf,
        source: std::io::Error,
    },
    #[error("cannot read {path}: {source}")]
    Read {
        path: PathBuf,
        source: std::io::Error,
    },
    #[error("{path}:{line}: {detail}")]
    Csv {
        path: PathBuf,
        line: usize,
        detail: String,
    },
    #[error("plot input: {detail}")]
    Plot { detail: String },
}

/// 9 significant digits: enough for an exact f64→text→f64 round trip at the
/// precision the CSV contract promises.
fn fmt_number(x: f64) -> String {
    format!("{x:.8e}")
}

/// The CSV text for a trajectory: `month,log2_complexity[,cognitive_depth]`
/// header plus one row per sample in time order, LF line endings.
pub fn trajectory_csv_string(trajectory: &Trajectory) -> String {
    let mut text = String::new();
    let header = match trajectory.cognitive_depth {
        Some(_) => "month,log2_complexity,cognitive_depth",
        None => "month,log2_complexity",
    };
    text.push_str(header);
    text.push('\n');
    for i in 0..trajectory.len() {
        text.push_str(&fmt_number(trajectory.months[i]));
        text.push(',');
        text.push_str(&fmt_number(trajectory.log2_complexity[i]));
        if let Some(depth) = &trajectory.cognitive_depth {
            text.push(',');
            text.push_str(&fmt_number(depth[i]));
        }
        text.push('\n');
    }
    text
}

/// Writes [`trajectory_csv_string`] to a file.
pub fn write_trajectory_csv(trajectory: &Trajectory, path: &Path) -> Result<(), OutputError> {
    std::fs::write(path, trajectory_csv_string(trajectory)).map_err(|source| OutputError::Write {
        path: path.to_path_buf(),
        source,
    })
}

/// Reads a CSV written by [`write_trajectory_csv`]. The trajectory label is
/// taken from the file stem; the CSV itself does not carry one.
pub fn read_trajectory_csv(path: &Path) -> Result<Trajectory, OutputError> {
    let text = std::fs::read_to_string(path).map_err(|source| OutputError::Read {
        path: path.to_path_buf(),
        source,
    })?;
    let csv_err = |line: usize, detail: String| OutputError::Csv {
        path: path.to_path_buf(),
        line,
        detail,
    };
    let mut lines = text.lines().enumerate();
    let (_, header) = lines
        .next()
        .ok_or_else(|| csv_err(1, "empty file".to_string()))?;
    let with_depth = match header {
        "month,log2_complexity" => false,
        "month,log2_complexity,cognitive_depth" => true,
        other => return Err(csv_err(1, format!("unrecognized header {other:?}"))),
    };
    let mut months = Vec::new();
    let mut values = Vec::new();
    let mut depths = Vec::new();
    for (idx, line) in lines {
        let lineno = idx + 1;
        let fields: Vec<&str> = line.split(',').collect();
        let expected = if with_depth { 3 } else { 2 };
        if fields.len() != expected {
            return Err(csv_err(
                lineno,
                format!("expected {expected} fields, found {}", fields.len()),
            ));
        }
        let parse = |s: &str| {
            s.parse::<f64>()
                .map_err(|e| csv_err(lineno, format!("bad number {s:?}: {e}")))
        };
        months.push(parse(fields[0])?);
        values.push(parse(fields[1])?);
        if with_depth {
            depths.push(parse(fields[2])?);
        }
    }
    let label = path
        .file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_else(|| "trajectory".to_string());
    Ok(Trajectory::new(
        months,
        values,
        with_depth.then_some(depths),
        label,
    ))
}

/// Vertical-axis interpretation for plots.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum YMode {
    /// Raw curve values.
    Log2,
    /// Every value mapped to the month of equal value on the first
    /// trajectory's ascending branch, clamped to [0, that branch's peak].
    EquivalentAge,
}

#[derive(Debug, Clone)]
pub struct PlotOptions {
    pub title: String,
    pub y_mode: YMode,
}

const SVG_WIDTH: f64 = 800.0;
const SVG_HEIGHT: f64 = 600.0;
const MARGIN_LEFT: f64 = 80.0;
const MARGIN_RIGHT: f64 = 24.0;
const MARGIN_TOP: f64 = 48.0;
const MARGIN_BOTTOM: f64 = 56.0;
const PALETTE: [&str; 6] =
    ["#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b"];

fn fmt_coord(x: f64) -> String {
    format!("{x:.2}")
}

fn fmt_tick(x: f64) -> String {
    if x.abs() >= 1000.0 || (x - x.round()).abs() < 1e-9 {
        format!("{:.0}", x.round())
    } else {
        format!("{x:.2}")
    }
}

/// The first trajectory's rising segment, used to re-express values as
/// months in the equivalent-age y-mode.
struct ReferenceBranch {
    months: Vec<f64>,
    values: Vec<f64>,
}

impl ReferenceBranch {
    fn from_trajectory(t: &Trajectory) -> Result<ReferenceBranch, OutputError> {
        let mut peak_idx = 0;
        for (i, v) in t.log2_complexity.iter().enumerate() {
            if *v > t.log2_complexity[peak_idx] {
                peak_idx = i;
            }
        }
        if peak_idx == 0 {
            return Err(OutputError::Plot {
                detail: "reference trajectory has no ascending branch to invert".to_string(),
            });
        }
        Ok(ReferenceBranch {
            months: t.months[..=peak_idx].to_vec(),
            values: t.log2_complexity[..=peak_idx].to_vec(),
        })
    }

    /// Month of equal value on the branch, linearly interpolated between
    /// samples and clamped at both ends.
    fn invert(&self, value: f64) -> f64 {
        let n = self.values.len();
        if value <= self.values[0] {
            return self.months[0];
        }
        if value >= self.values[n - 1] {
            return self.months[n - 1];
        }
        let i = self.values.partition_point(|v| *v < value);
        let (v0, v1) = (self.values[i - 1], self.values[i]);
        let (m0, m1) = (self.months[i - 1], self.months[i]);
        if v1 == v0 {
            return m0;
        }
        m0 + (value - v0) / (v1 - v0) * (m1 - m0)
    }
}

/// Renders trajectories as one 800×600 SVG: one polyline per trajectory, a
/// legend from the scenario labels, month ticks on the x-axis. Identical
/// inputs yield identical bytes.
pub fn emit_plot_svg(
    trajectories: &[Trajectory],
    path: &Path,
    options: &PlotOptions,
) -> Result<(), OutputError> {
    if trajectories.is_empty() {
        return Err(OutputError::Plot {
            detail: "no trajectories to plot".to_string(),
        });
    }
    for (i, t) in trajectories.iter().enumerate() {
        if t.is_empty() {
            return Err(OutputError::Plot {
                detail: format!("trajectory {i} ({}) has no samples", t.scenario_label),
            });
        }
        if t.months != trajectories[0].months {
            return Err(OutputError::Plot {
                detail: format!(
                    "trajectory {i} ({}) is sampled on a different month grid than {}",
                    t.scenario_label, trajectories[0].scenario_label
                ),
            });
        }
    }

    let reference = match options.y_mode {
        YMode::Log2 => None,
        YMode::EquivalentAge => Some(ReferenceBranch::from_trajectory(&trajectories[0])?),
    };
    let y_series: Vec<Vec<f64>> = trajectories
        .iter()
        .map(|t| match &reference {
            None => t.log2_complexity.clone(),
            Some(branch) => t.log2_complexity.iter().map(|v| branch.invert(*v)).collect(),
        })
        .collect();

    let months = &trajectories[0].months;
    let (x_min, x_max) = (months[0], *months.last().unwrap());
    let mut y_min = f64::INFINITY;
    let mut y_max = f64::NEG_INFINITY;
    for series in &y_series {
        for v in series {
            y_min = y_min.min(*v);
            y_max = y_max.max(*v);
        }
    }
    if y_max == y_min {
        y_max = y_min + 1.0;
    }
    let pad = 0.05 * (y_max - y_min);
    let (y_lo, y_hi) = (y_min - pad, y_max + pad);
    let x_span = if x_max > x_min { x_max - x_min } else { 1.0 };

    let plot_w = SVG_WIDTH - MARGIN_LEFT - MARGIN_RIGHT;
    let plot_h = SVG_HEIGHT - MARGIN_TOP - MARGIN_BOTTOM;
    let to_x = |m: f64| MARGIN_LEFT + (m - x_min) / x_span * plot_w;
    let to_y = |v: f64| MARGIN_TOP + (y_hi - v) / (y_hi - y_lo) * plot_h;

    let mut svg = String::new();
    let _ = writeln!(
        svg,
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{SVG_WIDTH:.0}\" height=\"{SVG_HEIGHT:.0}\" viewBox=\"0 0 {SVG_WIDTH:.0} {SVG_HEIGHT:.0}\">"
    );
    let _ = writeln!(
        svg,
        "  <rect x=\"0\" y=\"0\" width=\"{SVG_WIDTH:.0}\" height=\"{SVG_HEIGHT:.0}\" fill=\"white\"/>"
    );
    let _ = writeln!(
        svg,
        "  <text x=\"{:.0}\" y=\"28\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"18\">{}</text>",
        SVG_WIDTH / 2.0,
        xml_escape(&options.title)
    );

    // Axes.
    let _ = writeln!(
        svg,
        "  <line x1=\"{l}\" y1=\"{b}\" x2=\"{r}\" y2=\"{b}\" stroke=\"black\"/>",
        l = fmt_coord(MARGIN_LEFT),
        r = fmt_coord(SVG_WIDTH - MARGIN_RIGHT),
        b = fmt_coord(SVG_HEIGHT - MARGIN_BOTTOM),
    );
    let _ = writeln!(
        svg,
        "  <line x1=\"{l}\" y1=\"{t}\" x2=\"{l}\" y2=\"{b}\" stroke=\"black\"/>",
        l = fmt_coord(MARGIN_LEFT),
        t = fmt_coord(MARGIN_TOP),
        b = fmt_coord(SVG_HEIGHT - MARGIN_BOTTOM),
    );

    // Ticks and grid.
    const TICKS: usize = 5;
    for i in 0..=TICKS {
        let frac = i as f64 / TICKS as f64;
        let mx = x_min + frac * x_span;
        let x = to_x(mx);
        let _ = writeln!(
            svg,
            "  <line x1=\"{x}\" y1=\"{b}\" x2=\"{x}\" y2=\"{b2}\" stroke=\"black\"/>",
            x = fmt_coord(x),
            b = fmt_coord(SVG_HEIGHT - MARGIN_BOTTOM),
            b2 = fmt_coord(SVG_HEIGHT - MARGIN_BOTTOM + 6.0),
        );
        let _ = writeln!(
            svg,
            "  <text x=\"{x}\" y=\"{y}\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"12\">{v}</text>",
            x = fmt_coord(x),
            y = fmt_coord(SVG_HEIGHT - MARGIN_BOTTOM + 20.0),
            v = fmt_tick(mx),
        );
        let vy = y_lo + frac * (y_hi - y_lo);
        let y = to_y(vy);
        let _ = writeln!(
            svg,
            "  <line x1=\"{l}\" y1=\"{y}\" x2=\"{l2}\" y2=\"{y}\" stroke=\"black\"/>",
            l = fmt_coord(MARGIN_LEFT - 6.0),
            l2 = fmt_coord(MARGIN_LEFT),
            y = fmt_coord(y),
        );
        let _ = writeln!(
            svg,
            "  <text x=\"{x}\" y=\"{y}\" text-anchor=\"end\" font-family=\"sans-serif\" font-size=\"12\">{v}</text>",
            x = fmt_coord(MARGIN_LEFT - 10.0),
            y = fmt_coord(y + 4.0),
            v = fmt_tick(vy),
        );
    }

    // Axis titles.
    let _ = writeln!(
        svg,
        "  <text x=\"{x}\" y=\"{y}\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"14\">month</text>",
        x = fmt_coord(MARGIN_LEFT + plot_w / 2.0),
        y = fmt_coord(SVG_HEIGHT - 12.0),
    );
    let y_label = match options.y_mode {
        YMode::Log2 => "log2 complexity",
        YMode::EquivalentAge => "equivalent age (months)",
    };
    let _ = writeln!(
        svg,
        "  <text x=\"18\" y=\"{y}\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"14\" transform=\"rotate(-90 18 {y})\">{label}</text>",
        y = fmt_coord(MARGIN_TOP + plot_h / 2.0),
        label = y_label,
    );

    // Data polylines.
    for (i, series) in y_series.iter().enumerate() {
        let color = PALETTE[i % PALETTE.len()];
        let mut points = String::new();
        for (m, v) in months.iter().zip(series) {
            if !points.is_empty() {
                points.push(' ');
            }
            let _ = write!(points, "{},{}", fmt_coord(to_x(*m)), fmt_coord(to_y(*v)));
        }
        let _ = writeln!(
            svg,
            "  <polyline fill=\"none\" stroke=\"{color}\" stroke-width=\"1.5\" points=\"{points}\"/>"
        );
    }

    // Legend, top-right inside the plot area.
    for (i, t) in trajectories.iter().enumerate() {
        let color = PALETTE[i % PALETTE.len()];
        let y = MARGIN_TOP + 16.0 + 18.0 * i as f64;
        let _ = writeln!(
            svg,
            "  <line x1=\"{x1}\" y1=\"{y}\" x2=\"{x2}\" y2=\"{y}\" stroke=\"{color}\" stroke-width=\"1.5\"/>",
            x1 = fmt_coord(SVG_WIDTH - MARGIN_RIGHT - 150.0),
            x2 = fmt_coord(SVG_WIDTH - MARGIN_RIGHT - 120.0),
            y = fmt_coord(y),
        );
        let _ = writeln!(
            svg,
            "  <text x=\"{x}\" y=\"{ty}\" font-family=\"sans-serif\" font-size=\"12\">{label}</text>",
            x = fmt_coord(SVG_WIDTH - MARGIN_RIGHT - 112.0),
            ty = fmt_coord(y + 4.0),
            label = xml_escape(&t.scenario_label),
        );
    }

    svg.push_str("</svg>\n");
    std::fs::write(path, svg).map_err(|source| OutputError::Write {
        path: path.to_path_buf(),
        source,
    })
}

fn xml_escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}
