//! Minimal static line-chart renderer: axes, ticks, polylines, error bars
//! and a legend, written straight to SVG markup.

use std::fmt::Write;

const WIDTH: f64 = 780.0;
const HEIGHT: f64 = 480.0;
const LEFT: f64 = 70.0;
const RIGHT: f64 = 230.0;
const TOP: f64 = 40.0;
const BOTTOM: f64 = 60.0;

const PALETTE: [&str; 9] = [
    "#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#17becf", "#8c564b", "#e377c2", "#000000",
];

/// Palette slot reserved for reference curves.
pub const BLACK: usize = 8;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Style {
    Solid,
    Dashed,
    /// Markers only, with vertical error bars when intervals are present.
    Markers,
}

#[derive(Debug, Clone)]
pub struct Series {
    pub label: String,
    pub points: Vec<(f64, f64)>,
    pub errors: Option<Vec<f64>>,
    pub style: Style,
    /// Index into the palette; series sharing a colour belong together.
    pub color: usize,
}

#[derive(Debug, Clone)]
pub struct Chart {
    pub title: String,
    pub x_label: String,
    pub y_label: String,
    pub series: Vec<Series>,
}

fn nice_step(span: f64) -> f64 {
    let raw = span / 6.0;
    let mag = 10f64.powf(raw.log10().floor());
    let f = raw / mag;
    let nice = if f < 1.5 {
        1.0
    } else if f < 3.5 {
        2.0
    } else if f < 7.5 {
        5.0
    } else {
        10.0
    };
    nice * mag
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}

impl Chart {
    fn bounds(&self) -> (f64, f64, f64, f64) {
        let mut b = (f64::INFINITY, f64::NEG_INFINITY, f64::INFINITY, f64::NEG_INFINITY);
        for s in &self.series {
            for (i, &(x, y)) in s.points.iter().enumerate() {
                let e = s.errors.as_ref().map_or(0.0, |e| e[i]);
                b = (b.0.min(x), b.1.max(x), b.2.min(y - e), b.3.max(y + e));
            }
        }
        if !b.0.is_finite() {
            return (0.0, 1.0, 0.0, 1.0);
        }
        if b.1 <= b.0 {
            b.1 = b.0 + 1.0;
        }
        if b.3 <= b.2 {
            b.3 = b.2 + 1.0;
        }
        b
    }

    pub fn render(&self) -> String {
        let (x0, x1, y_min, y_max) = self.bounds();
        let pad = 0.05 * (y_max - y_min);
        let (y0, y1) = (y_min - pad, y_max + pad);
        let pw = WIDTH - LEFT - RIGHT;
        let ph = HEIGHT - TOP - BOTTOM;
        let sx = |x: f64| LEFT + (x - x0) / (x1 - x0) * pw;
        let sy = |y: f64| TOP + (y1 - y) / (y1 - y0) * ph;

        let mut s = String::new();
        let _ = writeln!(
            s,
            r#"<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" height="{HEIGHT}" viewBox="0 0 {WIDTH} {HEIGHT}" font-family="sans-serif" font-size="12">"#
        );
        let _ = writeln!(s, r#"<rect width="100%" height="100%" fill="white"/>"#);
        let _ = writeln!(
            s,
            r#"<text x="{}" y="22" text-anchor="middle" font-size="14">{}</text>"#,
            LEFT + pw / 2.0,
            escape(&self.title)
        );

        // grid and ticks
        let xs = nice_step(x1 - x0);
        let mut t = (x0 / xs).ceil() * xs;
        while t <= x1 + 1e-9 * xs {
            let px = sx(t);
            let _ = writeln!(
                s,
                r##"<line x1="{px:.2}" y1="{TOP}" x2="{px:.2}" y2="{:.2}" stroke="#e0e0e0"/><text x="{px:.2}" y="{:.2}" text-anchor="middle">{}</text>"##,
                TOP + ph,
                TOP + ph + 18.0,
                trim(t)
            );
            t += xs;
        }
        let ys = nice_step(y1 - y0);
        let mut t = (y0 / ys).ceil() * ys;
        while t <= y1 + 1e-9 * ys {
            let py = sy(t);
            let _ = writeln!(
                s,
                r##"<line x1="{LEFT}" y1="{py:.2}" x2="{:.2}" y2="{py:.2}" stroke="#e0e0e0"/><text x="{:.2}" y="{:.2}" text-anchor="end">{}</text>"##,
                LEFT + pw,
                LEFT - 6.0,
                py + 4.0,
                trim(t)
            );
            t += ys;
        }
        let _ = writeln!(
            s,
            r#"<rect x="{LEFT}" y="{TOP}" width="{pw}" height="{ph}" fill="none" stroke="black"/>"#
        );
        let _ = writeln!(
            s,
            r#"<text x="{:.2}" y="{:.2}" text-anchor="middle">{}</text>"#,
            LEFT + pw / 2.0,
            HEIGHT - 15.0,
            escape(&self.x_label)
        );
        let _ = writeln!(
            s,
            r#"<text x="18" y="{:.2}" text-anchor="middle" transform="rotate(-90 18 {:.2})">{}</text>"#,
            TOP + ph / 2.0,
            TOP + ph / 2.0,
            escape(&self.y_label)
        );

        for (i, series) in self.series.iter().enumerate() {
            let color = PALETTE[series.color % PALETTE.len()];
            match series.style {
                Style::Solid | Style::Dashed => {
                    let pts: Vec<String> = series
                        .points
                        .iter()
                        .map(|&(x, y)| format!("{:.2},{:.2}", sx(x), sy(y)))
                        .collect();
                    let dash = if series.style == Style::Dashed {
                        r#" stroke-dasharray="6 4""#
                    } else {
                        ""
                    };
                    let _ = writeln!(
                        s,
                        r#"<polyline points="{}" fill="none" stroke="{color}" stroke-width="1.6"{dash}/>"#,
                        pts.join(" ")
                    );
                }
                Style::Markers => {
                    for (j, &(x, y)) in series.points.iter().enumerate() {
                        if let Some(e) = series.errors.as_ref().map(|e| e[j]) {
                            let _ = writeln!(
                                s,
                                r#"<line x1="{:.2}" y1="{:.2}" x2="{:.2}" y2="{:.2}" stroke="{color}"/>"#,
                                sx(x),
                                sy(y - e),
                                sx(x),
                                sy(y + e)
                            );
                        }
                        let _ = writeln!(
                            s,
                            r#"<circle cx="{:.2}" cy="{:.2}" r="3" fill="none" stroke="{color}"/>"#,
                            sx(x),
                            sy(y)
                        );
                    }
                }
            }
            // legend entry
            let ly = TOP + 12.0 + 18.0 * i as f64;
            let lx = LEFT + pw + 12.0;
            let swatch = match series.style {
                Style::Markers => format!(
                    r#"<circle cx="{:.2}" cy="{ly:.2}" r="3" fill="none" stroke="{color}"/>"#,
                    lx + 12.0
                ),
                Style::Dashed => format!(
                    r#"<line x1="{lx:.2}" y1="{ly:.2}" x2="{:.2}" y2="{ly:.2}" stroke="{color}" stroke-width="1.6" stroke-dasharray="6 4"/>"#,
                    lx + 24.0
                ),
                Style::Solid => format!(
                    r#"<line x1="{lx:.2}" y1="{ly:.2}" x2="{:.2}" y2="{ly:.2}" stroke="{color}" stroke-width="1.6"/>"#,
                    lx + 24.0
                ),
            };
            let _ = writeln!(
                s,
                r#"{swatch}<text x="{:.2}" y="{:.2}">{}</text>"#,
                lx + 30.0,
                ly + 4.0,
                escape(&series.label)
            );
        }
        s.push_str("</svg>\n");
        s
    }
}

fn trim(v: f64) -> String {
    let r = (v * 1e6).round() / 1e6;
    let r = if r == 0.0 { 0.0 } else { r };
    format!("{r}")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn renders_all_series() {
        let chart = Chart {
            title: "a < b".into(),
            x_label: "SNR (dB)".into(),
            y_label: "rate".into(),
            series: vec![
                Series {
                    label: "exact".into(),
                    points: vec![(0.0, 0.5), (10.0, 2.0), (20.0, 5.0)],
                    errors: None,
                    style: Style::Solid,
                    color: 0,
                },
                Series {
                    label: "sim".into(),
                    points: vec![(0.0, 0.51), (10.0, 2.01)],
                    errors: Some(vec![0.01, 0.02]),
                    style: Style::Markers,
                    color: 1,
                },
            ],
        };
        let svg = chart.render();
        assert!(svg.starts_with("<svg"));
        assert!(svg.trim_end().ends_with("</svg>"));
        assert_eq!(svg.matches("<polyline").count(), 1);
        assert!(svg.contains("a &lt; b"));
        assert_eq!(svg.matches("<circle").count(), 3);
    }

    #[test]
    fn tick_steps_are_round() {
        assert_eq!(nice_step(20.0), 2.0);
        assert_eq!(nice_step(50.0), 10.0);
        assert_eq!(nice_step(6.0), 1.0);
        assert!((nice_step(0.3) - 0.05).abs() < 1e-12);
    }
}
