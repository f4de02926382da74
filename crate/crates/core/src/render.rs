//! SVG drawings of divides and of their link diagrams.
//!
//! Output is plain SVG 1.1 with every coordinate printed to two decimals, so
//! equal inputs give equal bytes. Under-strands are cut into separate paths
//! around each crossing; a diagram with `n` crossings has exactly `n` open
//! strand paths.

use std::fmt::Write;

use thiserror::Error;

use crate::diagram::LinkDiagram;
use crate::divide::{Divide, TangencyKind};
use crate::geometry::{to_f64, Point2};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum RenderError {
    #[error("canvas must be at least 64 px")]
    Canvas,
    #[error("stroke width must be positive")]
    Stroke,
    #[error("under-gap ({gap}) must exceed the stroke width ({stroke})")]
    Gap { gap: f64, stroke: f64 },
}

#[derive(Debug, Clone, PartialEq)]
pub struct RenderConfig {
    canvas: u32,
    stroke: f64,
    under_gap: f64,
    pub labels: bool,
    pub mirror_line: bool,
}

impl RenderConfig {
    /// `canvas` is the width in pixels; the height follows the drawing.
    pub fn new(canvas: u32, stroke: f64, under_gap: f64) -> Result<Self, RenderError> {
        if canvas < 64 {
            return Err(RenderError::Canvas);
        }
        if stroke.is_nan() || stroke <= 0.0 {
            return Err(RenderError::Stroke);
        }
        if under_gap.is_nan() || under_gap <= stroke {
            return Err(RenderError::Gap { gap: under_gap, stroke });
        }
        Ok(RenderConfig { canvas, stroke, under_gap, labels: false, mirror_line: true })
    }

    pub fn with_labels(mut self, labels: bool) -> Self {
        self.labels = labels;
        self
    }

    pub fn with_mirror_line(mut self, mirror_line: bool) -> Self {
        self.mirror_line = mirror_line;
        self
    }

    pub fn canvas(&self) -> u32 {
        self.canvas
    }

    pub fn stroke(&self) -> f64 {
        self.stroke
    }

    pub fn under_gap(&self) -> f64 {
        self.under_gap
    }
}

impl Default for RenderConfig {
    fn default() -> Self {
        RenderConfig { canvas: 480, stroke: 2.0, under_gap: 10.0, labels: false, mirror_line: true }
    }
}

const PALETTE: [&str; 6] = ["#1f4e9c", "#c0392b", "#1e8449", "#7d3c98", "#b9770e", "#117a8b"];
const MARGIN: f64 = 16.0;

/// World rectangle `[x0, x1] × [y0, y1]` mapped onto the canvas, y up.
struct Frame {
    x0: f64,
    y1: f64,
    scale: f64,
    width: f64,
    height: f64,
}

impl Frame {
    fn new(canvas: u32, x0: f64, x1: f64, y0: f64, y1: f64) -> Frame {
        let width = canvas as f64;
        let scale = (width - 2.0 * MARGIN) / (x1 - x0);
        let height = (y1 - y0) * scale + 2.0 * MARGIN;
        Frame { x0, y1, scale, width, height }
    }

    fn map(&self, (x, y): (f64, f64)) -> (f64, f64) {
        (MARGIN + (x - self.x0) * self.scale, MARGIN + (self.y1 - y) * self.scale)
    }

    fn point(&self, p: &Point2) -> (f64, f64) {
        self.map(p.to_f64())
    }

    fn open(&self, out: &mut String) {
        let _ = writeln!(
            out,
            r#"<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{w:.0}" height="{h:.0}" viewBox="0 0 {w:.0} {h:.0}">"#,
            w = self.width,
            h = self.height.ceil(),
        );
        let _ = writeln!(out, r#"<rect width="100%" height="100%" fill="white"/>"#);
    }
}

fn path_data(points: &[(f64, f64)], closed: bool) -> String {
    let mut d = String::new();
    for (k, (x, y)) in points.iter().enumerate() {
        let _ = write!(d, "{}{x:.2} {y:.2}", if k == 0 { "M" } else { " L" });
    }
    if closed {
        d.push_str(" Z");
    }
    d
}

pub fn render_divide_svg(divide: &Divide, config: &RenderConfig) -> String {
    let frame = Frame::new(config.canvas, -1.0, 1.0, -1.0, 1.0);
    let mut out = String::new();
    frame.open(&mut out);
    let (cx, cy) = frame.map((0.0, 0.0));
    let _ = writeln!(
        out,
        r##"<circle class="boundary" cx="{cx:.2}" cy="{cy:.2}" r="{:.2}" fill="none" stroke="#888888" stroke-width="{:.2}"/>"##,
        frame.scale,
        config.stroke / 2.0,
    );
    for (k, b) in divide.branches().iter().enumerate() {
        let pts: Vec<_> = b.vertices.iter().map(|p| frame.point(p)).collect();
        let _ = writeln!(
            out,
            r#"<path class="branch" d="{}" fill="none" stroke="{}" stroke-width="{:.2}" stroke-linejoin="round"/>"#,
            path_data(&pts, b.is_closed()),
            PALETTE[k % PALETTE.len()],
            config.stroke,
        );
        if let Some((p, q)) = b.endpoints() {
            for e in [p, q] {
                let (x, y) = frame.point(e);
                let _ = writeln!(
                    out,
                    r##"<circle class="endpoint" cx="{x:.2}" cy="{y:.2}" r="{:.2}" fill="#444444"/>"##,
                    config.stroke * 1.2
                );
            }
        }
    }
    let r = config.stroke * 2.5;
    for (k, dp) in divide.double_points().iter().enumerate() {
        let (x, y) = frame.point(&dp.position);
        let _ = writeln!(
            out,
            r##"<circle class="marker double-point" cx="{x:.2}" cy="{y:.2}" r="{r:.2}" fill="none" stroke="#000000" stroke-width="1"/>"##
        );
        if config.labels {
            label(&mut out, x + r, y - r, &format!("d{}", k + 1));
        }
    }
    for (k, t) in divide.tangencies().iter().enumerate() {
        let (x, y) = frame.point(divide.tangency_point(t));
        let glyph = match t.kind {
            TangencyKind::XMax => format!("M{:.2} {:.2} L{:.2} {:.2} L{:.2} {:.2} Z", x - r, y - r, x + r, y, x - r, y + r),
            TangencyKind::XMin => format!("M{:.2} {:.2} L{:.2} {:.2} L{:.2} {:.2} Z", x + r, y - r, x - r, y, x + r, y + r),
        };
        let _ = writeln!(out, r##"<path class="marker tangency" d="{glyph}" fill="#000000"/>"##);
        if config.labels {
            label(&mut out, x + r, y - r, &format!("t{}", k + 1));
        }
    }
    out.push_str("</svg>\n");
    out
}

fn label(out: &mut String, x: f64, y: f64, text: &str) {
    let _ = writeln!(out, r#"<text class="label" x="{x:.2}" y="{y:.2}" font-family="sans-serif" font-size="10">{text}</text>"#);
}

pub fn render_diagram_svg(diagram: &LinkDiagram, config: &RenderConfig) -> String {
    let m = to_f64(diagram.mirror_y());
    let frame = Frame::new(config.canvas, -1.0, 1.0, 2.0 * m - 1.0, 1.0);
    let mut out = String::new();
    frame.open(&mut out);
    if config.mirror_line {
        let (x0, y) = frame.map((-1.0, m));
        let (x1, _) = frame.map((1.0, m));
        let _ = writeln!(
            out,
            r##"<line class="mirror" x1="{x0:.2}" y1="{y:.2}" x2="{x1:.2}" y2="{y:.2}" stroke="#aaaaaa" stroke-width="1" stroke-dasharray="6 4"/>"##
        );
    }
    let half_gap = config.under_gap / 2.0;
    for (c, comp) in diagram.components().iter().enumerate() {
        let pts: Vec<(f64, f64)> = comp.route.iter().map(|v| frame.point(&v.position)).collect();
        let n = pts.len();
        let cuts: Vec<usize> =
            (0..n).filter(|&k| comp.route[k].passage.is_some_and(|p| !p.over)).collect();
        let colour = PALETTE[c % PALETTE.len()];
        let mut strands: Vec<(Vec<(f64, f64)>, bool)> = Vec::new();
        if cuts.is_empty() {
            strands.push((pts.clone(), true));
        } else {
            for (i, &start) in cuts.iter().enumerate() {
                let stop = cuts[(i + 1) % cuts.len()];
                let len = (stop + n - start - 1) % n + 1;
                let mut strand = vec![toward(pts[start], pts[(start + 1) % n], half_gap)];
                for k in 1..len {
                    strand.push(pts[(start + k) % n]);
                }
                strand.push(toward(pts[stop], pts[(stop + n - 1) % n], half_gap));
                strands.push((strand, false));
            }
        }
        for (strand, closed) in strands {
            let _ = writeln!(
                out,
                r#"<path class="strand" data-component="{c}" d="{}" fill="none" stroke="{colour}" stroke-width="{:.2}" stroke-linejoin="round" stroke-linecap="round"/>"#,
                path_data(&strand, closed),
                config.stroke,
            );
        }
    }
    if config.labels {
        for x in diagram.crossings() {
            let (px, py) = frame.point(&x.position);
            label(&mut out, px + 4.0, py - 4.0, &format!("{}{}", x.id + 1, if x.sign > 0 { "+" } else { "-" }));
        }
    }
    out.push_str("</svg>\n");
    out
}

/// Point at distance `d` from `from` towards `to`, stopping short of the
/// midpoint so neighbouring gaps never overlap.
fn toward(from: (f64, f64), to: (f64, f64), d: f64) -> (f64, f64) {
    let (dx, dy) = (to.0 - from.0, to.1 - from.1);
    let len = dx.hypot(dy);
    if len == 0.0 {
        return from;
    }
    let s = (d / len).min(0.45);
    (from.0 + s * dx, from.1 + s * dy)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::diagram::build_diagram;
    use crate::generators::canned;

    fn count(svg: &str, needle: &str) -> usize {
        svg.matches(needle).count()
    }

    #[test]
    fn config_checks_gap() {
        assert!(RenderConfig::new(400, 2.0, 6.0).is_ok());
        assert_eq!(RenderConfig::new(400, 2.0, 2.0), Err(RenderError::Gap { gap: 2.0, stroke: 2.0 }));
        assert_eq!(RenderConfig::new(10, 2.0, 6.0), Err(RenderError::Canvas));
    }

    #[test]
    fn divide_markers() {
        let cfg = RenderConfig::default();
        let svg = render_divide_svg(&canned("monotone").unwrap(), &cfg);
        assert_eq!(count(&svg, "<path "), 1);
        assert_eq!(count(&svg, "class=\"marker"), 0);
        let svg = render_divide_svg(&canned("e6").unwrap(), &cfg);
        assert_eq!(count(&svg, "marker double-point"), 3);
        assert_eq!(count(&svg, "marker tangency"), 2);
    }

    #[test]
    fn unknot_is_one_closed_path() {
        let d = build_diagram(&canned("monotone").unwrap()).unwrap();
        let svg = render_diagram_svg(&d, &RenderConfig::default());
        assert_eq!(count(&svg, "class=\"strand\""), 1);
        assert_eq!(count(&svg, " Z\""), 1);
    }

    #[test]
    fn one_open_strand_per_crossing() {
        for name in ["c-arc", "cross", "e6", "e6-alt1"] {
            let d = build_diagram(&canned(name).unwrap()).unwrap();
            let svg = render_diagram_svg(&d, &RenderConfig::default().with_labels(true));
            assert_eq!(count(&svg, "class=\"strand\""), d.crossing_count(), "{name}");
            assert_eq!(count(&svg, " Z\""), 0);
            assert_eq!(count(&svg, "class=\"label\""), d.crossing_count());
        }
    }

    #[test]
    fn output_is_deterministic() {
        let d = build_diagram(&canned("e6").unwrap()).unwrap();
        let cfg = RenderConfig::default();
        assert_eq!(render_diagram_svg(&d, &cfg), render_diagram_svg(&d.clone(), &cfg));
    }
}
