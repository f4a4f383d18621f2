//! Minimal deterministic SVG line plots.

use std::fmt::Write as _;

const WIDTH: f64 = 640.0;
const PANEL_HEIGHT: f64 = 360.0;
const MARGIN_LEFT: f64 = 64.0;
const MARGIN_RIGHT: f64 = 150.0;
const MARGIN_TOP: f64 = 36.0;
const MARGIN_BOTTOM: f64 = 48.0;
const TICKS: usize = 5;
const COLORS: [&str; 6] = ["#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b"];

/// One curve.
#[derive(Debug, Clone, PartialEq)]
pub struct Series {
    pub label: String,
    pub points: Vec<(f64, f64)>,
}

/// Horizontal reference line drawn dashed in the colour of series `color_of`.
#[derive(Debug, Clone, PartialEq)]
pub struct Level {
    pub label: String,
    pub y: f64,
    pub color_of: usize,
}

/// One set of axes.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct Panel {
    pub title: String,
    pub x_label: String,
    pub y_label: String,
    pub series: Vec<Series>,
    pub levels: Vec<Level>,
    /// Draw point markers as well as lines.
    pub markers: bool,
}

struct Frame {
    x0: f64,
    x1: f64,
    y0: f64,
    y1: f64,
    top: f64,
}

impl Frame {
    fn for_panel(panel: &Panel, top: f64) -> Self {
        let xs = panel.series.iter().flat_map(|s| s.points.iter().map(|p| p.0));
        let (mut x0, mut x1) = xs.fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), x| (lo.min(x), hi.max(x)));
        if !x0.is_finite() {
            (x0, x1) = (0.0, 1.0);
        }
        if x1 <= x0 {
            x1 = x0 + 1.0;
        }
        let ys = panel.series.iter().flat_map(|s| s.points.iter().map(|p| p.1)).chain(panel.levels.iter().map(|l| l.y));
        let y_hi = ys.fold(0.0f64, f64::max);
        let y1 = if y_hi > 0.0 { y_hi * 1.05 } else { 1.0 };
        Self { x0, x1, y0: 0.0, y1, top }
    }

    fn px(&self, x: f64) -> f64 {
        MARGIN_LEFT + (x - self.x0) / (self.x1 - self.x0) * (WIDTH - MARGIN_LEFT - MARGIN_RIGHT)
    }

    fn py(&self, y: f64) -> f64 {
        let h = PANEL_HEIGHT - MARGIN_TOP - MARGIN_BOTTOM;
        self.top + MARGIN_TOP + h - (y - self.y0) / (self.y1 - self.y0) * h
    }
}

fn tick_label(v: f64) -> String {
    let s = format!("{v:.2}");
    let s = s.trim_end_matches('0').trim_end_matches('.');
    if s == "-0" { "0".into() } else { s.into() }
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}

/// Pixel coordinates of a series inside a panel whose top edge is at `top`.
fn pixel_points(panel: &Panel, top: f64, series: &Series) -> Vec<(f64, f64)> {
    let frame = Frame::for_panel(panel, top);
    series.points.iter().map(|&(x, y)| (frame.px(x), frame.py(y))).collect()
}

fn fmt_points(points: &[(f64, f64)]) -> String {
    points.iter().map(|(x, y)| format!("{x:.3},{y:.3}")).collect::<Vec<_>>().join(" ")
}

/// Renders panels stacked vertically into one SVG document.
pub fn render(panels: &[Panel]) -> String {
    let height = PANEL_HEIGHT * panels.len().max(1) as f64;
    let mut s = String::new();
    let _ = writeln!(
        s,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" height="{height}" viewBox="0 0 {WIDTH} {height}" font-family="sans-serif" font-size="12">"#
    );
    let _ = writeln!(s, r#"<rect width="100%" height="100%" fill="white"/>"#);
    for (p, panel) in panels.iter().enumerate() {
        let top = p as f64 * PANEL_HEIGHT;
        let f = Frame::for_panel(panel, top);
        let (left, right) = (f.px(f.x0), f.px(f.x1));
        let (bottom, upper) = (f.py(f.y0), f.py(f.y1));
        let _ = writeln!(s, r#"<text x="{:.1}" y="{:.1}" text-anchor="middle" font-size="14">{}</text>"#, (left + right) / 2.0, top + 22.0, escape(&panel.title));
        let _ = writeln!(s, r#"<path d="M{left:.3},{upper:.3} L{left:.3},{bottom:.3} L{right:.3},{bottom:.3}" stroke="black" fill="none"/>"#);
        for i in 0..=TICKS {
            let xv = f.x0 + (f.x1 - f.x0) * i as f64 / TICKS as f64;
            let yv = f.y0 + (f.y1 - f.y0) * i as f64 / TICKS as f64;
            let (x, y) = (f.px(xv), f.py(yv));
            let _ = writeln!(s, r#"<line x1="{x:.3}" y1="{bottom:.3}" x2="{x:.3}" y2="{:.3}" stroke="black"/><text x="{x:.3}" y="{:.3}" text-anchor="middle">{}</text>"#, bottom + 4.0, bottom + 18.0, tick_label(xv));
            let _ = writeln!(s, r#"<line x1="{:.3}" y1="{y:.3}" x2="{left:.3}" y2="{y:.3}" stroke="black"/><text x="{:.3}" y="{:.3}" text-anchor="end">{}</text>"#, left - 4.0, left - 7.0, y + 4.0, tick_label(yv));
        }
        let _ = writeln!(s, r#"<text x="{:.1}" y="{:.1}" text-anchor="middle">{}</text>"#, (left + right) / 2.0, bottom + 38.0, escape(&panel.x_label));
        let _ = writeln!(s, r#"<text transform="translate({:.1},{:.1}) rotate(-90)" text-anchor="middle">{}</text>"#, 16.0, (upper + bottom) / 2.0, escape(&panel.y_label));

        for level in &panel.levels {
            let y = f.py(level.y);
            let color = COLORS[level.color_of % COLORS.len()];
            let _ = writeln!(s, r#"<line x1="{left:.3}" y1="{y:.3}" x2="{right:.3}" y2="{y:.3}" stroke="{color}" stroke-dasharray="6,4"/>"#);
        }
        for (k, series) in panel.series.iter().enumerate() {
            let color = COLORS[k % COLORS.len()];
            let pts = pixel_points(panel, top, series);
            let _ = writeln!(s, r#"<polyline fill="none" stroke="{color}" stroke-width="1.5" points="{}"/>"#, fmt_points(&pts));
            if panel.markers {
                for (x, y) in &pts {
                    let _ = writeln!(s, r#"<circle cx="{x:.3}" cy="{y:.3}" r="3" fill="{color}"/>"#);
                }
            }
            let ly = top + MARGIN_TOP + 10.0 + 18.0 * k as f64;
            let lx = right + 12.0;
            let _ = writeln!(s, r#"<line x1="{lx:.1}" y1="{ly:.1}" x2="{:.1}" y2="{ly:.1}" stroke="{color}" stroke-width="2"/><text x="{:.1}" y="{:.1}">{}</text>"#, lx + 20.0, lx + 26.0, ly + 4.0, escape(&series.label));
        }
        for (k, level) in panel.levels.iter().enumerate() {
            let ly = top + MARGIN_TOP + 10.0 + 18.0 * (panel.series.len() + k) as f64;
            let lx = right + 12.0;
            let color = COLORS[level.color_of % COLORS.len()];
            let _ = writeln!(s, r#"<line x1="{lx:.1}" y1="{ly:.1}" x2="{:.1}" y2="{ly:.1}" stroke="{color}" stroke-dasharray="6,4"/><text x="{:.1}" y="{:.1}">{}</text>"#, lx + 20.0, lx + 26.0, ly + 4.0, escape(&level.label));
        }
    }
    s.push_str("</svg>\n");
    s
}

/// The `points` attribute of every polyline, in document order.
pub fn polyline_points(svg: &str) -> Vec<Vec<(f64, f64)>> {
    svg.lines()
        .filter(|l| l.starts_with("<polyline"))
        .filter_map(|l| {
            let start = l.find("points=\"")? + 8;
            let end = start + l[start..].find('"')?;
            Some(
                l[start..end]
                    .split_whitespace()
                    .filter_map(|p| {
                        let (x, y) = p.split_once(',')?;
                        Some((x.parse().ok()?, y.parse().ok()?))
                    })
                    .collect(),
            )
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn panel() -> Panel {
        Panel {
            title: "t < 1 & more".into(),
            x_label: "t".into(),
            y_label: "Q".into(),
            series: vec![
                Series { label: "a".into(), points: vec![(0.0, 0.0), (1.0, 2.0), (2.0, 1.0)] },
                Series { label: "b".into(), points: vec![(0.0, 1.0), (2.0, 1.5)] },
            ],
            levels: vec![Level { label: "avg".into(), y: 1.0, color_of: 0 }],
            markers: false,
        }
    }

    #[test]
    fn deterministic_and_escaped() {
        let a = render(&[panel()]);
        assert_eq!(a, render(&[panel()]));
        assert!(a.contains("t &lt; 1 &amp; more"));
        assert!(a.ends_with("</svg>\n"));
    }

    #[test]
    fn polylines_parse_back() {
        let svg = render(&[panel(), panel()]);
        let lines = polyline_points(&svg);
        assert_eq!(lines.len(), 4);
        assert_eq!(lines[0].len(), 3);
        // x = 0 maps to the left margin; y = 0 to the panel bottom.
        assert_eq!(lines[0][0], (MARGIN_LEFT, PANEL_HEIGHT - MARGIN_BOTTOM));
        // Second panel is shifted down by one panel height.
        assert_eq!(lines[2][0].1, lines[0][0].1 + PANEL_HEIGHT);
    }
}
