//! Hand-written SVG renderings.
//!
//! Trace: one square per foreground pixel (junction pixels highlighted), each
//! traced path as a polyline through pixel centres. Cover: point `k` of an
//! `N`-point path at `k / N` of a clockwise turn from the top, each segment as
//! an arc outside the circle, overlapping segments on separate lanes.

use std::collections::BTreeSet;
use std::f64::consts::TAU;
use std::fmt::Write as _;

use satcover::trace::{BinaryImage, TracedComponent, VertexKind};
use satcover::{DigitalPath, GridPoint, SaturatedCover};

const PIXEL: f64 = 12.0;
const PALETTE: [&str; 6] = ["#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#17becf"];

fn centre(p: GridPoint) -> (f64, f64) {
    ((p.x as f64 + 0.5) * PIXEL, (p.y as f64 + 0.5) * PIXEL)
}

pub fn render_trace(img: &BinaryImage, traced: &[TracedComponent]) -> String {
    let (w, h) = (img.width() as f64 * PIXEL, img.height() as f64 * PIXEL);
    let junctions: BTreeSet<GridPoint> = traced
        .iter()
        .flat_map(|t| t.graph.vertices.iter().filter(|v| v.kind == VertexKind::Junction))
        .flat_map(|v| v.pixels.iter().copied())
        .collect();
    let mut out = String::new();
    let _ = writeln!(out, r#"<svg xmlns="http://www.w3.org/2000/svg" width="{w}" height="{h}" viewBox="0 0 {w} {h}">"#);
    let _ = writeln!(out, r##"<rect width="{w}" height="{h}" fill="#ffffff"/>"##);
    for &p in img.foreground() {
        let fill = if junctions.contains(&p) { "#f4b183" } else { "#d9d9d9" };
        let _ = writeln!(
            out,
            r#"<rect x="{}" y="{}" width="{PIXEL}" height="{PIXEL}" fill="{fill}"/>"#,
            p.x as f64 * PIXEL,
            p.y as f64 * PIXEL
        );
    }
    for (i, t) in traced.iter().enumerate() {
        let pts = t.path.points();
        let mut coords: Vec<String> = pts.iter().map(|&p| centre(p)).map(|(x, y)| format!("{x},{y}")).collect();
        if t.path.is_closed() && pts.len() > 1 {
            coords.push(coords[0].clone());
        }
        let colour = PALETTE[i % PALETTE.len()];
        let _ = writeln!(
            out,
            r#"<polyline points="{}" fill="none" stroke="{colour}" stroke-width="2" stroke-linejoin="round"/>"#,
            coords.join(" ")
        );
        let (x, y) = centre(pts[0]);
        let _ = writeln!(out, r#"<circle cx="{x}" cy="{y}" r="3" fill="{colour}"/>"#);
    }
    out.push_str("</svg>\n");
    out
}

/// Assigns each segment the first lane whose previous arc ends before it
/// starts, in unwrapped index units.
fn lanes(cover: &SaturatedCover) -> Vec<usize> {
    let mut ends: Vec<usize> = Vec::new();
    cover
        .segments
        .iter()
        .map(|s| {
            let end = s.start + s.len - 1;
            match ends.iter().position(|&e| e < s.start) {
                Some(l) => {
                    ends[l] = end;
                    l
                }
                None => {
                    ends.push(end);
                    ends.len() - 1
                }
            }
        })
        .collect()
}

pub fn render_cover(path: &DigitalPath, cover: &SaturatedCover) -> String {
    const RADIUS: f64 = 120.0;
    const LANE: f64 = 8.0;
    let n = path.len() as f64;
    let lane_of = lanes(cover);
    let depth = lane_of.iter().max().map_or(0, |&l| l + 1) as f64;
    let half = RADIUS + LANE * (depth + 1.0) + 10.0;
    let size = 2.0 * half;
    let at = |k: f64, r: f64| {
        let theta = TAU * k / n - TAU / 4.0;
        (half + r * theta.cos(), half + r * theta.sin())
    };
    let mut out = String::new();
    let _ = writeln!(out, r#"<svg xmlns="http://www.w3.org/2000/svg" width="{size}" height="{size}" viewBox="0 0 {size} {size}">"#);
    let _ = writeln!(out, r##"<rect width="{size}" height="{size}" fill="#ffffff"/>"##);
    let _ = writeln!(out, r##"<circle cx="{half}" cy="{half}" r="{RADIUS}" fill="none" stroke="#999999"/>"##);
    for k in 0..path.len() {
        let (x0, y0) = at(k as f64, RADIUS - 3.0);
        let (x1, y1) = at(k as f64, RADIUS + 3.0);
        let _ = writeln!(out, r##"<line x1="{x0:.2}" y1="{y0:.2}" x2="{x1:.2}" y2="{y1:.2}" stroke="#666666"/>"##);
    }
    for (i, (s, &lane)) in cover.segments.iter().zip(&lane_of).enumerate() {
        let r = RADIUS + LANE * (lane as f64 + 1.0);
        let colour = PALETTE[i % PALETTE.len()];
        let (x0, y0) = at(s.start as f64, r);
        if s.len == 1 {
            let _ = writeln!(out, r#"<circle cx="{x0:.2}" cy="{y0:.2}" r="2.5" fill="{colour}"/>"#);
            continue;
        }
        let last = (s.start + s.len - 1) as f64;
        let (x1, y1) = at(last, r);
        let large = u8::from(2 * (s.len - 1) > path.len());
        let _ = writeln!(
            out,
            r#"<path d="M {x0:.2} {y0:.2} A {r} {r} 0 {large} 1 {x1:.2} {y1:.2}" fill="none" stroke="{colour}" stroke-width="3"><title>{s}</title></path>"#
        );
    }
    out.push_str("</svg>\n");
    out
}
