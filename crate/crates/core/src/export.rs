//! Text output: CSV tables, SVG line plots and JSON.

use std::fmt::Write as _;

use serde::Serialize;

/// Significant digits written for every float.
pub const DIGITS: usize = 17;

/// A float in scientific notation with [`DIGITS`] significant digits.
pub fn fmt_f64(v: f64) -> String {
    format!("{:.*e}", DIGITS - 1, v)
}

/// Comma-separated table with a header row and `\n` line endings.
pub fn csv<I, R>(header: &[&str], rows: I) -> String
where
    I: IntoIterator<Item = R>,
    R: AsRef<[f64]>,
{
    let mut out = header.join(",");
    out.push('\n');
    for row in rows {
        let cells: Vec<String> = row.as_ref().iter().map(|v| fmt_f64(*v)).collect();
        out.push_str(&cells.join(","));
        out.push('\n');
    }
    out
}

/// Parses a table written by [`csv`] back into its header and rows.
pub fn parse_csv(text: &str) -> Option<(Vec<String>, Vec<Vec<f64>>)> {
    let mut lines = text.lines();
    let header = lines.next()?.split(',').map(str::to_string).collect();
    let rows = lines
        .filter(|l| !l.is_empty())
        .map(|l| l.split(',').map(|c| c.parse().ok()).collect::<Option<Vec<f64>>>())
        .collect::<Option<_>>()?;
    Some((header, rows))
}

pub fn to_json<T: Serialize>(value: &T) -> String {
    serde_json::to_string_pretty(value).expect("value serializes")
}

#[derive(Debug, Clone, PartialEq)]
pub struct LinePlot {
    pub x_label: String,
    pub y_label: String,
    pub title: String,
}

const WIDTH: f64 = 640.0;
const HEIGHT: f64 = 400.0;
const MARGIN: f64 = 60.0;

fn nice_ticks(lo: f64, hi: f64) -> Vec<f64> {
    let span = hi - lo;
    if !(span > 0.0) {
        return vec![lo];
    }
    let raw = span / 5.0;
    let mag = 10f64.powf(raw.log10().floor());
    let step = [1.0, 2.0, 5.0, 10.0]
        .iter()
        .map(|m| m * mag)
        .find(|s| span / s <= 6.0)
        .unwrap_or(10.0 * mag);
    let first = (lo / step).ceil() as i64;
    let last = (hi / step).floor() as i64;
    (first..=last).map(|i| i as f64 * step).collect()
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}

impl LinePlot {
    /// SVG document with one polyline. Points are written in data
    /// coordinates and mapped to the canvas by a group transform, so the
    /// series can be read back exactly with [`svg_series`].
    pub fn render(&self, xs: &[f64], ys: &[f64]) -> String {
        let (x_lo, x_hi) = min_max(xs);
        let (y_lo, y_hi) = min_max(ys);
        let y_lo = y_lo.min(0.0);
        let (x_hi, y_hi) = (
            if x_hi > x_lo { x_hi } else { x_lo + 1.0 },
            if y_hi > y_lo { y_hi } else { y_lo + 1.0 },
        );
        let (pw, ph) = (WIDTH - 2.0 * MARGIN, HEIGHT - 2.0 * MARGIN);
        let sx = pw / (x_hi - x_lo);
        let sy = ph / (y_hi - y_lo);
        let to_px = |x: f64| MARGIN + (x - x_lo) * sx;
        let to_py = |y: f64| HEIGHT - MARGIN - (y - y_lo) * sy;

        let mut s = String::new();
        let _ = writeln!(
            s,
            r#"<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" height="{HEIGHT}" viewBox="0 0 {WIDTH} {HEIGHT}">"#
        );
        let _ = writeln!(s, r#"<rect width="100%" height="100%" fill="white"/>"#);
        let _ = writeln!(
            s,
            r#"<text x="{}" y="24" text-anchor="middle" font-size="16">{}</text>"#,
            WIDTH / 2.0,
            escape(&self.title)
        );
        let (bx, by) = (MARGIN, HEIGHT - MARGIN);
        let _ = writeln!(
            s,
            r#"<path d="M{bx} {} L{bx} {by} L{} {by}" stroke="black" fill="none"/>"#,
            MARGIN,
            WIDTH - MARGIN
        );
        for t in nice_ticks(x_lo, x_hi) {
            let px = to_px(t);
            let _ = writeln!(
                s,
                r#"<line x1="{px:.3}" y1="{by}" x2="{px:.3}" y2="{}" stroke="black"/><text x="{px:.3}" y="{}" text-anchor="middle" font-size="12">{}</text>"#,
                by + 5.0,
                by + 20.0,
                tick_label(t)
            );
        }
        for t in nice_ticks(y_lo, y_hi) {
            let py = to_py(t);
            let _ = writeln!(
                s,
                r#"<line x1="{}" y1="{py:.3}" x2="{bx}" y2="{py:.3}" stroke="black"/><text x="{}" y="{:.3}" text-anchor="end" font-size="12">{}</text>"#,
                bx - 5.0,
                bx - 8.0,
                py + 4.0,
                tick_label(t)
            );
        }
        let _ = writeln!(
            s,
            r#"<text x="{}" y="{}" text-anchor="middle" font-size="14">{}</text>"#,
            WIDTH / 2.0,
            HEIGHT - 15.0,
            escape(&self.x_label)
        );
        let _ = writeln!(
            s,
            r#"<text x="18" y="{0}" text-anchor="middle" font-size="14" transform="rotate(-90 18 {0})">{1}</text>"#,
            HEIGHT / 2.0,
            escape(&self.y_label)
        );
        let _ = writeln!(
            s,
            r#"<g transform="matrix({sx} 0 0 {} {} {})">"#,
            -sy,
            MARGIN - x_lo * sx,
            HEIGHT - MARGIN + y_lo * sy
        );
        let pts: Vec<String> = xs
            .iter()
            .zip(ys)
            .map(|(x, y)| format!("{},{}", fmt_f64(*x), fmt_f64(*y)))
            .collect();
        let _ = writeln!(
            s,
            r#"<polyline class="series" fill="none" stroke="steelblue" stroke-width="2" vector-effect="non-scaling-stroke" points="{}"/>"#,
            pts.join(" ")
        );
        s.push_str("</g>\n</svg>\n");
        s
    }
}

fn tick_label(v: f64) -> String {
    let r = (v * 1e6).round() / 1e6;
    format!("{r}")
}

fn min_max(v: &[f64]) -> (f64, f64) {
    let lo = v.iter().copied().fold(f64::INFINITY, f64::min);
    let hi = v.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    if lo.is_finite() && hi.is_finite() {
        (lo, hi)
    } else {
        (0.0, 1.0)
    }
}

/// Reads the data points of the polyline written by [`LinePlot::render`].
pub fn svg_series(svg: &str) -> Option<Vec<(f64, f64)>> {
    let start = svg.find(r#"class="series""#)?;
    let rest = &svg[start..];
    let open = rest.find("points=\"")? + "points=\"".len();
    let close = rest[open..].find('"')? + open;
    rest[open..close]
        .split_whitespace()
        .map(|pair| {
            let (x, y) = pair.split_once(',')?;
            Some((x.parse().ok()?, y.parse().ok()?))
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn csv_round_trip_is_exact() {
        let rows = vec![vec![0.1, -1.0 / 3.0], vec![1e-300, 6.02214076e23]];
        let text = csv(&["a", "b"], &rows);
        assert!(text.starts_with("a,b\n"));
        assert!(!text.contains('\r'));
        let (h, back) = parse_csv(&text).unwrap();
        assert_eq!(h, ["a", "b"]);
        assert_eq!(back, rows);
    }

    #[test]
    fn svg_series_round_trip() {
        let xs: Vec<f64> = (0..11).map(|i| -1.0 + 0.2 * i as f64).collect();
        let ys: Vec<f64> = xs.iter().map(|x| 1.0 / (1.0 + x * x)).collect();
        let plot = LinePlot {
            x_label: "x".into(),
            y_label: "y & z".into(),
            title: "t".into(),
        };
        let svg = plot.render(&xs, &ys);
        assert!(svg.contains("y &amp; z"));
        let pts = svg_series(&svg).unwrap();
        assert_eq!(pts.len(), xs.len());
        for ((x, y), (px, py)) in xs.iter().zip(&ys).zip(&pts) {
            assert_eq!((x, y), (px, py));
        }
    }

    #[test]
    fn ticks_cover_range() {
        let t = nice_ticks(-5.0, 5.0);
        assert!(t.contains(&0.0) && t.len() >= 3);
        assert_eq!(nice_ticks(1.0, 1.0), vec![1.0]);
    }
}
