//! Minimal self-contained SVG charts: axes, polylines, stems, circles, bars.

use std::fmt::Write as _;

const WIDTH: f64 = 900.0;
const HEIGHT: f64 = 480.0;
const MARGIN_LEFT: f64 = 70.0;
const MARGIN_RIGHT: f64 = 20.0;
const MARGIN_TOP: f64 = 40.0;
const MARGIN_BOTTOM: f64 = 55.0;
const TICKS: usize = 5;

#[derive(Debug, Clone)]
pub enum Layer {
    Line {
        points: Vec<(f64, f64)>,
        color: &'static str,
        dashed: bool,
    },
    Stems {
        points: Vec<(f64, f64)>,
        color: &'static str,
    },
    Circles {
        points: Vec<(f64, f64)>,
        color: &'static str,
        radius: f64,
    },
    Bars {
        points: Vec<(f64, f64)>,
        width: f64,
        color: &'static str,
    },
}

impl Layer {
    fn points(&self) -> &[(f64, f64)] {
        match self {
            Layer::Line { points, .. }
            | Layer::Stems { points, .. }
            | Layer::Circles { points, .. }
            | Layer::Bars { points, .. } => points,
        }
    }
}

#[derive(Debug, Clone)]
pub struct Chart {
    pub title: String,
    pub x_label: String,
    pub y_label: String,
    pub layers: Vec<Layer>,
    /// Include zero in the y range (stems and bars start there).
    pub y_from_zero: bool,
    /// Same scale on both axes.
    pub equal_aspect: bool,
    pub x_range: Option<(f64, f64)>,
    pub legend: Vec<(&'static str, String)>,
}

impl Chart {
    pub fn new(
        title: impl Into<String>,
        x_label: impl Into<String>,
        y_label: impl Into<String>,
    ) -> Self {
        Chart {
            title: title.into(),
            x_label: x_label.into(),
            y_label: y_label.into(),
            layers: Vec::new(),
            y_from_zero: true,
            equal_aspect: false,
            x_range: None,
            legend: Vec::new(),
        }
    }

    pub fn layer(mut self, layer: Layer) -> Self {
        self.layers.push(layer);
        self
    }

    fn bounds(&self) -> ((f64, f64), (f64, f64)) {
        let (mut x0, mut x1) = (f64::INFINITY, f64::NEG_INFINITY);
        let (mut y0, mut y1) = (f64::INFINITY, f64::NEG_INFINITY);
        for layer in &self.layers {
            for &(x, y) in layer.points() {
                x0 = x0.min(x);
                x1 = x1.max(x);
                y0 = y0.min(y);
                y1 = y1.max(y);
            }
        }
        if let Some(r) = self.x_range {
            (x0, x1) = r;
        }
        if self.y_from_zero {
            y0 = y0.min(0.0);
            y1 = y1.max(0.0);
        }
        let fix = |lo: f64, hi: f64| {
            if !lo.is_finite() || !hi.is_finite() {
                (0.0, 1.0)
            } else if hi - lo <= f64::EPSILON * hi.abs().max(1.0) {
                (lo - 0.5, hi + 0.5)
            } else {
                (lo, hi)
            }
        };
        let (x0, x1) = fix(x0, x1);
        let (y0, y1) = fix(y0, y1);
        let pad = 0.05 * (y1 - y0);
        let (y0, y1) = (
            if self.y_from_zero && y0 == 0.0 {
                0.0
            } else {
                y0 - pad
            },
            y1 + pad,
        );
        if self.equal_aspect {
            let cx = 0.5 * (x0 + x1);
            let cy = 0.5 * (y0 + y1);
            let plot_w = WIDTH - MARGIN_LEFT - MARGIN_RIGHT;
            let plot_h = HEIGHT - MARGIN_TOP - MARGIN_BOTTOM;
            let per_px = ((x1 - x0) / plot_w).max((y1 - y0) / plot_h);
            let hw = 0.5 * per_px * plot_w;
            let hh = 0.5 * per_px * plot_h;
            return ((cx - hw, cx + hw), (cy - hh, cy + hh));
        }
        ((x0, x1), (y0, y1))
    }

    /// Renders the chart. `version` is embedded as a comment.
    pub fn render(&self, version: &str) -> String {
        let ((x0, x1), (y0, y1)) = self.bounds();
        let plot_w = WIDTH - MARGIN_LEFT - MARGIN_RIGHT;
        let plot_h = HEIGHT - MARGIN_TOP - MARGIN_BOTTOM;
        let sx = |x: f64| MARGIN_LEFT + (x - x0) / (x1 - x0) * plot_w;
        let sy = |y: f64| MARGIN_TOP + (y1 - y) / (y1 - y0) * plot_h;
        let inside = |x: f64| x >= x0 && x <= x1;

        let mut s = String::new();
        let _ = writeln!(s, r#"<?xml version="1.0" encoding="UTF-8"?>"#);
        let _ = writeln!(
            s,
            r#"<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{WIDTH}" height="{HEIGHT}" viewBox="0 0 {WIDTH} {HEIGHT}" font-family="sans-serif" font-size="12">"#
        );
        let _ = writeln!(s, "<!-- prime-spectrum {version} -->");
        let _ = writeln!(
            s,
            r#"<rect x="0" y="0" width="{WIDTH}" height="{HEIGHT}" fill="white"/>"#
        );
        let _ = writeln!(
            s,
            r#"<text x="{:.1}" y="24" text-anchor="middle" font-size="15">{}</text>"#,
            WIDTH / 2.0,
            escape(&self.title)
        );
        // Axes frame and ticks.
        let _ = writeln!(
            s,
            r#"<rect x="{MARGIN_LEFT}" y="{MARGIN_TOP}" width="{plot_w}" height="{plot_h}" fill="none" stroke="black"/>"#
        );
        for i in 0..=TICKS {
            let fx = x0 + (x1 - x0) * i as f64 / TICKS as f64;
            let px = sx(fx);
            let _ = writeln!(
                s,
                r#"<line x1="{px:.2}" y1="{:.2}" x2="{px:.2}" y2="{:.2}" stroke="black"/><text x="{px:.2}" y="{:.2}" text-anchor="middle">{}</text>"#,
                MARGIN_TOP + plot_h,
                MARGIN_TOP + plot_h + 5.0,
                MARGIN_TOP + plot_h + 18.0,
                tick_label(fx)
            );
            let fy = y0 + (y1 - y0) * i as f64 / TICKS as f64;
            let py = sy(fy);
            let _ = writeln!(
                s,
                r#"<line x1="{:.2}" y1="{py:.2}" x2="{MARGIN_LEFT}" y2="{py:.2}" stroke="black"/><text x="{:.2}" y="{:.2}" text-anchor="end">{}</text>"#,
                MARGIN_LEFT - 5.0,
                MARGIN_LEFT - 8.0,
                py + 4.0,
                tick_label(fy)
            );
        }
        let _ = writeln!(
            s,
            r#"<text x="{:.1}" y="{:.1}" text-anchor="middle">{}</text>"#,
            MARGIN_LEFT + plot_w / 2.0,
            HEIGHT - 12.0,
            escape(&self.x_label)
        );
        let _ = writeln!(
            s,
            r#"<text x="16" y="{:.1}" text-anchor="middle" transform="rotate(-90 16 {:.1})">{}</text>"#,
            MARGIN_TOP + plot_h / 2.0,
            MARGIN_TOP + plot_h / 2.0,
            escape(&self.y_label)
        );

        for layer in &self.layers {
            match layer {
                Layer::Line {
                    points,
                    color,
                    dashed,
                } => {
                    let mut path = String::new();
                    for &(x, y) in points.iter().filter(|p| inside(p.0)) {
                        let _ = write!(path, "{:.2},{:.2} ", sx(x), sy(y));
                    }
                    let dash = if *dashed {
                        r#" stroke-dasharray="4 3""#
                    } else {
                        ""
                    };
                    let _ = writeln!(
                        s,
                        r#"<polyline points="{}" fill="none" stroke="{color}" stroke-width="1"{dash}/>"#,
                        path.trim_end()
                    );
                }
                Layer::Stems { points, color } => {
                    let base = sy(0.0f64.clamp(y0, y1));
                    for &(x, y) in points.iter().filter(|p| inside(p.0)) {
                        let _ = writeln!(
                            s,
                            r#"<line x1="{:.2}" y1="{base:.2}" x2="{:.2}" y2="{:.2}" stroke="{color}"/>"#,
                            sx(x),
                            sx(x),
                            sy(y)
                        );
                    }
                }
                Layer::Circles {
                    points,
                    color,
                    radius,
                } => {
                    for &(x, y) in points.iter().filter(|p| inside(p.0)) {
                        let _ = writeln!(
                            s,
                            r#"<circle cx="{:.2}" cy="{:.2}" r="{radius}" fill="none" stroke="{color}"/>"#,
                            sx(x),
                            sy(y)
                        );
                    }
                }
                Layer::Bars {
                    points,
                    width,
                    color,
                } => {
                    let base = sy(0.0f64.clamp(y0, y1));
                    for &(x, y) in points.iter().filter(|p| inside(p.0)) {
                        let left = sx(x);
                        let right = sx((x + width).min(x1));
                        let top = sy(y);
                        let _ = writeln!(
                            s,
                            r#"<rect x="{left:.2}" y="{top:.2}" width="{:.2}" height="{:.2}" fill="{color}" stroke="white" stroke-width="0.3"/>"#,
                            (right - left).max(0.0),
                            (base - top).max(0.0)
                        );
                    }
                }
            }
        }
        for (i, (color, label)) in self.legend.iter().enumerate() {
            let y = MARGIN_TOP + 16.0 + 16.0 * i as f64;
            let x = MARGIN_LEFT + plot_w - 220.0;
            let _ = writeln!(
                s,
                r#"<line x1="{x:.1}" y1="{:.1}" x2="{:.1}" y2="{:.1}" stroke="{color}" stroke-width="2"/><text x="{:.1}" y="{y:.1}">{}</text>"#,
                y - 4.0,
                x + 20.0,
                y - 4.0,
                x + 26.0,
                escape(label)
            );
        }
        s.push_str("</svg>\n");
        s
    }
}

fn tick_label(v: f64) -> String {
    let a = v.abs();
    if a != 0.0 && !(1e-3..1e6).contains(&a) {
        format!("{v:.2e}")
    } else if a >= 100.0 {
        format!("{v:.0}")
    } else {
        format!("{v:.3}")
    }
}

fn escape(text: &str) -> String {
    text.replace('&', "&amp;")
        .replace('<', "&lt;")
        .replace('>', "&gt;")
}
