//! SVG rendering of 1- and 2-dimensional families: anchors, satellites,
//! curves, and optionally a synthesized query with its radius disks.
//!
//! Output is scaled into a 1000-unit viewbox with 5% padding. The markup is
//! plain shapes with inline attributes; there is no styling contract.

use crate::constructions::{CurveFamily, SynthesizedQuery};
use crate::geometry::Point;

#[derive(Debug, Clone, PartialEq)]
pub enum SvgError {
    UnsupportedDimension { d: usize },
}

impl std::fmt::Display for SvgError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            SvgError::UnsupportedDimension { d } => {
                write!(f, "svg export supports d <= 2, got d = {d}")
            }
        }
    }
}

impl std::error::Error for SvgError {}

const ANCHOR_COLOR: &str = "#1b2a41";
const SATELLITE_COLOR: &str = "#d1495b";
const CURVE_COLOR: &str = "#b9c6d8";
const QUERY_COLOR: &str = "#2e86ab";

struct Frame {
    scale: f64,
    x_min: f64,
    y_max: f64,
    width: f64,
    height: f64,
}

impl Frame {
    fn fit(xs: &[f64], ys: &[f64]) -> Frame {
        let (x_min, x_max) = bounds(xs);
        let (y_min, y_max) = bounds(ys);
        let w = (x_max - x_min).max(1e-9);
        let h = (y_max - y_min).max(1e-9);
        let scale = 900.0 / w.max(h);
        Frame {
            scale,
            x_min,
            y_max,
            width: w * scale + 100.0,
            height: h * scale + 100.0,
        }
    }

    fn map(&self, x: f64, y: f64) -> (f64, f64) {
        (
            50.0 + (x - self.x_min) * self.scale,
            50.0 + (self.y_max - y) * self.scale,
        )
    }

    fn len(&self, world: f64) -> f64 {
        world * self.scale
    }
}

fn bounds(values: &[f64]) -> (f64, f64) {
    let lo = values.iter().copied().fold(f64::INFINITY, f64::min);
    let hi = values.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    (lo, hi)
}

fn fmt(v: f64) -> String {
    format!("{:.2}", v)
}

fn circle(out: &mut String, frame: &Frame, x: f64, y: f64, px_r: f64, fill: &str) {
    let (cx, cy) = frame.map(x, y);
    out.push_str(&format!(
        "  <circle cx=\"{}\" cy=\"{}\" r=\"{}\" fill=\"{fill}\"/>\n",
        fmt(cx),
        fmt(cy),
        fmt(px_r)
    ));
}

fn ring(out: &mut String, frame: &Frame, x: f64, y: f64, world_r: f64, stroke: &str) {
    let (cx, cy) = frame.map(x, y);
    out.push_str(&format!(
        "  <circle cx=\"{}\" cy=\"{}\" r=\"{}\" fill=\"none\" stroke=\"{stroke}\" stroke-width=\"1.5\" stroke-dasharray=\"6 4\"/>\n",
        fmt(cx),
        fmt(cy),
        fmt(frame.len(world_r))
    ));
}

fn polyline(out: &mut String, frame: &Frame, pts: &[(f64, f64)], stroke: &str, width: f64) {
    let coords: Vec<String> = pts
        .iter()
        .map(|&(x, y)| {
            let (px, py) = frame.map(x, y);
            format!("{},{}", fmt(px), fmt(py))
        })
        .collect();
    out.push_str(&format!(
        "  <polyline points=\"{}\" fill=\"none\" stroke=\"{stroke}\" stroke-width=\"{width}\"/>\n",
        coords.join(" ")
    ));
}

fn segment(out: &mut String, frame: &Frame, a: (f64, f64), b: (f64, f64), stroke: &str, width: f64) {
    let (x1, y1) = frame.map(a.0, a.1);
    let (x2, y2) = frame.map(b.0, b.1);
    out.push_str(&format!(
        "  <line x1=\"{}\" y1=\"{}\" x2=\"{}\" y2=\"{}\" stroke=\"{stroke}\" stroke-width=\"{width}\" stroke-linecap=\"round\"/>\n",
        fmt(x1), fmt(y1), fmt(x2), fmt(y2)
    ));
}

fn text(out: &mut String, frame: &Frame, x: f64, y: f64, dy_px: f64, content: &str) {
    let (px, py) = frame.map(x, y);
    out.push_str(&format!(
        "  <text x=\"{}\" y=\"{}\" font-size=\"14\" font-family=\"sans-serif\" fill=\"{ANCHOR_COLOR}\" text-anchor=\"middle\">{content}</text>\n",
        fmt(px),
        fmt(py + dy_px)
    ));
}

/// Renders a family, plus a query curve and its radius disks when given.
pub fn render_family(
    family: &CurveFamily<f64>,
    query: Option<&SynthesizedQuery<f64>>,
) -> Result<String, SvgError> {
    match family.dim() {
        1 => Ok(render_one_dim(family, query)),
        2 => Ok(render_two_dim(family, query)),
        d => Err(SvgError::UnsupportedDimension { d }),
    }
}

fn render_one_dim(family: &CurveFamily<f64>, query: Option<&SynthesizedQuery<f64>>) -> String {
    let x = |p: &Point<f64>| p.coords[0];
    let mut xs: Vec<f64> = family.anchors().iter().map(x).collect();
    xs.extend(family.groups().iter().flat_map(|g| g.satellites.iter().map(x)));
    if let Some(q) = query {
        for v in q.query.vertices() {
            xs.push(x(v) - q.radius);
            xs.push(x(v) + q.radius);
        }
    }
    let span = {
        let (lo, hi) = bounds(&xs);
        (hi - lo).max(1e-9)
    };
    // Synthetic vertical layout: family on the axis, query row below.
    let row = -0.08 * span;
    let ys = vec![0.03 * span, if query.is_some() { 1.5 * row } else { row / 2.0 }];
    let frame = Frame::fit(&xs, &ys);

    let mut out = svg_open(&frame);
    let (lo, hi) = bounds(&xs);
    segment(&mut out, &frame, (lo, 0.0), (hi, 0.0), "#888888", 1.0);

    for group in family.groups() {
        for s in &group.satellites {
            circle(&mut out, &frame, x(s), 0.0, 3.5, SATELLITE_COLOR);
        }
    }
    for (i, anchor) in family.anchors().iter().enumerate() {
        circle(&mut out, &frame, x(anchor), 0.0, 6.0, ANCHOR_COLOR);
        text(&mut out, &frame, x(anchor), 0.012 * span, -12.0, &format!("p{}", i + 1));
    }

    if let Some(q) = query {
        for v in q.query.vertices() {
            let qx = x(v);
            segment(
                &mut out,
                &frame,
                (qx - q.radius, row),
                (qx + q.radius, row),
                QUERY_COLOR,
                3.0,
            );
            circle(&mut out, &frame, qx, row, 5.0, QUERY_COLOR);
        }
    }
    out.push_str("</svg>\n");
    out
}

fn render_two_dim(family: &CurveFamily<f64>, query: Option<&SynthesizedQuery<f64>>) -> String {
    let r2 = 2.0 * family.params().r.unwrap_or(1.0);
    let p1 = &family.anchors()[0];
    let mut xs = vec![p1.coords[0] - r2, p1.coords[0] + r2];
    let mut ys = vec![p1.coords[1] - r2, p1.coords[1] + r2];
    let mut push = |p: &Point<f64>, pad: f64| {
        xs.push(p.coords[0] - pad);
        xs.push(p.coords[0] + pad);
        ys.push(p.coords[1] - pad);
        ys.push(p.coords[1] + pad);
    };
    for a in family.anchors() {
        push(a, 0.0);
    }
    for g in family.groups() {
        for s in &g.satellites {
            push(s, 0.0);
        }
    }
    if let Some(q) = query {
        for v in q.query.vertices() {
            push(v, q.radius);
        }
    }
    let frame = Frame::fit(&xs, &ys);
    let mut out = svg_open(&frame);

    for curve in family.curves() {
        let pts: Vec<(f64, f64)> = curve
            .vertices()
            .iter()
            .map(|v| (v.coords[0], v.coords[1]))
            .collect();
        polyline(&mut out, &frame, &pts, CURVE_COLOR, 1.0);
    }

    ring(&mut out, &frame, p1.coords[0], p1.coords[1], r2, SATELLITE_COLOR);

    if let Some(q) = query {
        let pts: Vec<(f64, f64)> = q
            .query
            .vertices()
            .iter()
            .map(|v| (v.coords[0], v.coords[1]))
            .collect();
        for &(x, y) in &pts {
            ring(&mut out, &frame, x, y, q.radius, QUERY_COLOR);
        }
        polyline(&mut out, &frame, &pts, QUERY_COLOR, 2.0);
        for &(x, y) in &pts {
            circle(&mut out, &frame, x, y, 5.0, QUERY_COLOR);
        }
    }

    for g in family.groups() {
        for s in &g.satellites {
            circle(&mut out, &frame, s.coords[0], s.coords[1], 3.5, SATELLITE_COLOR);
        }
    }
    for (i, a) in family.anchors().iter().enumerate() {
        circle(&mut out, &frame, a.coords[0], a.coords[1], 6.0, ANCHOR_COLOR);
        text(&mut out, &frame, a.coords[0], a.coords[1], -12.0, &format!("p{}", i + 1));
    }
    out.push_str("</svg>\n");
    out
}

fn svg_open(frame: &Frame) -> String {
    format!(
        "<svg xmlns=\"http://www.w3.org/2000/svg\" viewBox=\"0 0 {} {}\">\n",
        fmt(frame.width),
        fmt(frame.height)
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::constructions::{build_family, synthesize_query, ConstructionParams, IndexTuple};

    #[test]
    fn one_dim_figure_has_anchor_clusters() {
        let family = build_family(&ConstructionParams::one_dim(3, 2)).unwrap();
        let svg = render_family(&family, None).unwrap();
        assert!(svg.starts_with("<svg"));
        // 3 anchors + 6 satellites drawn as circles.
        assert_eq!(svg.matches("<circle").count(), 9);
        assert_eq!(svg.matches("<text").count(), 3);
    }

    #[test]
    fn two_dim_figure_draws_query_disks() {
        let family = build_family(&ConstructionParams::with_defaults(2, 3, 3)).unwrap();
        let tuple = IndexTuple::new(vec![1; 6]);
        let q = synthesize_query(&family, &tuple).unwrap();
        let svg = render_family(&family, Some(&q)).unwrap();
        // One dashed ring for the p_1 circle plus k = 3 radius disks.
        assert_eq!(svg.matches("stroke-dasharray").count(), 4);
        assert!(svg.matches("<polyline").count() >= 19); // 18 curves + query
    }

    #[test]
    fn three_dim_families_are_rejected() {
        let family = build_family(&ConstructionParams::with_defaults(3, 2, 3)).unwrap();
        assert!(matches!(
            render_family(&family, None),
            Err(SvgError::UnsupportedDimension { d: 3 })
        ));
    }
}
