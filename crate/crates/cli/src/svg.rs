//! Static SVG charts: the shock-scale band and grouped bars per dimension.
//!
//! Output is plain text built with fixed-precision formatting, so equal
//! inputs give byte-identical files.

use std::fmt::Write as _;

use serde_json::Value;

const WIDTH: f64 = 640.0;
const HEIGHT: f64 = 400.0;
const LEFT: f64 = 70.0;
const RIGHT: f64 = 30.0;
const TOP: f64 = 50.0;
const BOTTOM: f64 = 70.0;
const FONT: &str = "font-family=\"sans-serif\"";

/// Colors per indicator: pre-scenario shade, post-scenario shade.
const PALETTE: [(&str, &str); 3] = [("#9ecae1", "#2171b5"), ("#fdae6b", "#d94801"), ("#a1d99b", "#238b45")];

#[derive(Debug, Clone, PartialEq)]
pub struct BandSeries {
    pub baseline: Option<f64>,
    /// (scale, rate), ascending by scale.
    pub points: Vec<(f64, f64)>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct GroupBars {
    pub dimension: String,
    pub groups: Vec<String>,
    /// Per indicator, the (pre, post) rate of each group.
    pub series: Vec<(String, Vec<(Option<f64>, Option<f64>)>)>,
}

impl GroupBars {
    pub fn is_empty(&self) -> bool {
        self.series
            .iter()
            .all(|(_, v)| v.iter().all(|(a, b)| a.is_none() && b.is_none()))
    }
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}

fn pct(rate: f64) -> String {
    format!("{:.1}%", rate * 100.0)
}

/// Tick step giving four to eight ticks over `span` (in rate units).
fn tick_step(span: f64) -> f64 {
    for step in [0.001, 0.002, 0.005, 0.01, 0.02, 0.05, 0.1, 0.2] {
        if span / step <= 8.0 {
            return step;
        }
    }
    0.25
}

fn header(out: &mut String, title: &str) {
    let _ = writeln!(
        out,
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{WIDTH}\" height=\"{HEIGHT}\" viewBox=\"0 0 {WIDTH} {HEIGHT}\">"
    );
    let _ = writeln!(out, "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>");
    let _ = writeln!(
        out,
        "<text x=\"{:.2}\" y=\"28\" text-anchor=\"middle\" {FONT} font-size=\"16\">{}</text>",
        WIDTH / 2.0,
        escape(title)
    );
}

/// Horizontal grid lines and labels for `lo..=hi`; returns the y mapping.
fn y_axis(out: &mut String, lo: f64, hi: f64) -> impl Fn(f64) -> f64 {
    let plot_h = HEIGHT - TOP - BOTTOM;
    let y = move |v: f64| TOP + plot_h * (1.0 - (v - lo) / (hi - lo));
    let step = tick_step(hi - lo);
    let first = (lo / step).ceil() as i64;
    let last = (hi / step).floor() as i64;
    for k in first..=last {
        let v = k as f64 * step;
        let yy = y(v);
        let _ = writeln!(
            out,
            "<line x1=\"{LEFT:.2}\" y1=\"{yy:.2}\" x2=\"{:.2}\" y2=\"{yy:.2}\" stroke=\"#dddddd\"/>",
            WIDTH - RIGHT
        );
        let _ = writeln!(
            out,
            "<text x=\"{:.2}\" y=\"{:.2}\" text-anchor=\"end\" {FONT} font-size=\"11\">{}</text>",
            LEFT - 6.0,
            yy + 4.0,
            pct(v)
        );
    }
    let _ = writeln!(
        out,
        "<line x1=\"{LEFT:.2}\" y1=\"{TOP:.2}\" x2=\"{LEFT:.2}\" y2=\"{:.2}\" stroke=\"black\"/>",
        HEIGHT - BOTTOM
    );
    let _ = writeln!(
        out,
        "<line x1=\"{LEFT:.2}\" y1=\"{:.2}\" x2=\"{:.2}\" y2=\"{:.2}\" stroke=\"black\"/>",
        HEIGHT - BOTTOM,
        WIDTH - RIGHT,
        HEIGHT - BOTTOM
    );
    y
}

/// Rounds the data range outward to whole ticks, with some headroom.
fn value_range(values: impl Iterator<Item = f64>, floor_at_zero: bool) -> (f64, f64) {
    let (mut lo, mut hi) = values.fold((f64::INFINITY, f64::NEG_INFINITY), |(l, h), v| (l.min(v), h.max(v)));
    if !lo.is_finite() {
        return (0.0, 1.0);
    }
    if floor_at_zero {
        lo = 0.0;
    }
    if hi - lo < 1e-3 {
        hi = lo + 1e-3;
    }
    let pad = (hi - lo) * 0.15;
    let step = tick_step(hi - lo + 2.0 * pad);
    let lo = if floor_at_zero { 0.0 } else { ((lo - pad) / step).floor() * step };
    let hi = ((hi + pad) / step).ceil() * step;
    (lo.max(0.0), hi)
}

/// Line with one labeled marker per shock scale, plus the baseline.
pub fn band_svg(band: &BandSeries) -> String {
    let mut out = String::new();
    header(&mut out, "Relative child poverty rate by shock scale");
    let (lo, hi) = value_range(band.points.iter().map(|p| p.1).chain(band.baseline), false);
    let y = y_axis(&mut out, lo, hi);
    let n = band.points.len().max(1) as f64;
    let plot_w = WIDTH - LEFT - RIGHT;
    let x = |i: usize| LEFT + plot_w * (i as f64 + 0.5) / n;

    if let Some(b) = band.baseline {
        let yy = y(b);
        let _ = writeln!(
            out,
            "<line x1=\"{LEFT:.2}\" y1=\"{yy:.2}\" x2=\"{:.2}\" y2=\"{yy:.2}\" stroke=\"#888888\" stroke-dasharray=\"6 4\"/>",
            WIDTH - RIGHT
        );
        let _ = writeln!(
            out,
            "<text x=\"{:.2}\" y=\"{:.2}\" text-anchor=\"end\" {FONT} font-size=\"11\" fill=\"#555555\">baseline {}</text>",
            WIDTH - RIGHT - 4.0,
            yy - 5.0,
            pct(b)
        );
    }
    if band.points.len() > 1 {
        let path: Vec<String> = band
            .points
            .iter()
            .enumerate()
            .map(|(i, p)| format!("{:.2},{:.2}", x(i), y(p.1)))
            .collect();
        let _ = writeln!(
            out,
            "<polyline points=\"{}\" fill=\"none\" stroke=\"#2171b5\" stroke-width=\"2\"/>",
            path.join(" ")
        );
    }
    for (i, (scale, rate)) in band.points.iter().enumerate() {
        let (xx, yy) = (x(i), y(*rate));
        let _ = writeln!(
            out,
            "<circle class=\"marker\" cx=\"{xx:.2}\" cy=\"{yy:.2}\" r=\"5\" fill=\"#2171b5\"/>"
        );
        let _ = writeln!(
            out,
            "<text class=\"value\" x=\"{xx:.2}\" y=\"{:.2}\" text-anchor=\"middle\" {FONT} font-size=\"12\">{}</text>",
            yy - 10.0,
            pct(*rate)
        );
        let _ = writeln!(
            out,
            "<text x=\"{xx:.2}\" y=\"{:.2}\" text-anchor=\"middle\" {FONT} font-size=\"12\">scale {}</text>",
            HEIGHT - BOTTOM + 20.0,
            scale
        );
    }
    out.push_str("</svg>\n");
    out
}

/// Clusters of bars, one cluster per group, pre and post for each indicator.
pub fn groups_svg(bars: &GroupBars) -> String {
    let mut out = String::new();
    header(&mut out, &format!("Child poverty by {}", bars.dimension.replace('_', " ")));
    let values = bars
        .series
        .iter()
        .flat_map(|(_, v)| v.iter().flat_map(|(a, b)| [*a, *b]))
        .flatten();
    let (lo, hi) = value_range(values, true);
    let y = y_axis(&mut out, lo, hi);
    let plot_w = WIDTH - LEFT - RIGHT;
    let cluster_w = plot_w / bars.groups.len().max(1) as f64;
    let bars_per_cluster = (bars.series.len() * 2).max(1) as f64;
    let bar_w = cluster_w * 0.8 / bars_per_cluster;

    for (g, name) in bars.groups.iter().enumerate() {
        let x0 = LEFT + cluster_w * g as f64 + cluster_w * 0.1;
        for (s, (_, values)) in bars.series.iter().enumerate() {
            let (pre_color, post_color) = PALETTE[s % PALETTE.len()];
            let (pre, post) = values[g];
            for (k, (rate, color)) in [(pre, pre_color), (post, post_color)].into_iter().enumerate() {
                let Some(rate) = rate else { continue };
                let xx = x0 + bar_w * (2 * s + k) as f64;
                let yy = y(rate);
                let _ = writeln!(
                    out,
                    "<rect x=\"{xx:.2}\" y=\"{yy:.2}\" width=\"{:.2}\" height=\"{:.2}\" fill=\"{color}\"><title>{}</title></rect>",
                    bar_w * 0.95,
                    (HEIGHT - BOTTOM) - yy,
                    pct(rate)
                );
            }
        }
        let _ = writeln!(
            out,
            "<text x=\"{:.2}\" y=\"{:.2}\" text-anchor=\"middle\" {FONT} font-size=\"12\">{}</text>",
            LEFT + cluster_w * (g as f64 + 0.5),
            HEIGHT - BOTTOM + 18.0,
            escape(name)
        );
    }
    // legend: one entry per indicator, pre and post swatches
    for (s, (indicator, _)) in bars.series.iter().enumerate() {
        let (pre_color, post_color) = PALETTE[s % PALETTE.len()];
        let lx = LEFT + 190.0 * s as f64;
        let ly = HEIGHT - 24.0;
        let _ = writeln!(
            out,
            "<rect x=\"{lx:.2}\" y=\"{:.2}\" width=\"10\" height=\"10\" fill=\"{pre_color}\"/>",
            ly - 9.0
        );
        let _ = writeln!(
            out,
            "<rect x=\"{:.2}\" y=\"{:.2}\" width=\"10\" height=\"10\" fill=\"{post_color}\"/>",
            lx + 12.0,
            ly - 9.0
        );
        let _ = writeln!(
            out,
            "<text x=\"{:.2}\" y=\"{ly:.2}\" {FONT} font-size=\"11\">{} pre/post</text>",
            lx + 26.0,
            escape(indicator)
        );
    }
    out.push_str("</svg>\n");
    out
}

/// Reads the band report as written by `simulate`.
pub fn band_from_json(v: &Value) -> Result<BandSeries, String> {
    let points = v
        .get("points")
        .and_then(Value::as_array)
        .ok_or("missing `points` array")?;
    let mut out = Vec::with_capacity(points.len());
    for p in points {
        let scale = p.get("scale").and_then(Value::as_f64).ok_or("point without numeric `scale`")?;
        match p.get("relative_child_rate") {
            Some(Value::Null) => continue,
            Some(r) => out.push((scale, r.as_f64().ok_or("non-numeric `relative_child_rate`")?)),
            None => return Err("point without `relative_child_rate`".into()),
        }
    }
    out.sort_by(|a, b| a.0.total_cmp(&b.0));
    let baseline = v.get("baseline_rate").and_then(Value::as_f64);
    Ok(BandSeries { baseline, points: out })
}

/// Reads the grouped report; one chart per dimension, in first-seen order.
pub fn groups_from_json(v: &Value) -> Result<Vec<GroupBars>, String> {
    let rows = v.get("rows").and_then(Value::as_array).ok_or("missing `rows` array")?;
    let mut charts: Vec<GroupBars> = Vec::new();
    for row in rows {
        let field = |k: &str| row.get(k).and_then(Value::as_str).ok_or(format!("row without `{k}`"));
        let (dimension, group, indicator) = (field("dimension")?, field("group")?, field("indicator")?);
        let rate = |k: &str| row.get(k).and_then(|e| e.get("rate")).and_then(Value::as_f64);
        let (pre, post) = (rate("pre"), rate("post"));

        let pos = match charts.iter().position(|c| c.dimension == dimension) {
            Some(i) => i,
            None => {
                charts.push(GroupBars {
                    dimension: dimension.to_owned(),
                    groups: Vec::new(),
                    series: Vec::new(),
                });
                charts.len() - 1
            }
        };
        let chart = &mut charts[pos];
        let g = match chart.groups.iter().position(|x| x == group) {
            Some(i) => i,
            None => {
                chart.groups.push(group.to_owned());
                for (_, vals) in &mut chart.series {
                    vals.push((None, None));
                }
                chart.groups.len() - 1
            }
        };
        let s = match chart.series.iter().position(|(name, _)| name == indicator) {
            Some(i) => i,
            None => {
                let n = chart.groups.len();
                chart.series.push((indicator.to_owned(), vec![(None, None); n]));
                chart.series.len() - 1
            }
        };
        chart.series[s].1[g] = (pre, post);
    }
    Ok(charts)
}
