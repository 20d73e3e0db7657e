//! CSV and SVG emission for traced fans.
//!
//! Both writers are pure functions of their inputs, so identical traces give
//! byte-identical files.

use std::fmt::Write as _;

use crate::geometry::{to_poincare_disc, BasePoint, Geometry, Medium, Shape, Vec3};
use crate::ray::Ray;
use crate::scene::Projection;
use crate::wavefront::Wavefront;

/// 17 significant digits: enough to round-trip any `f64`.
fn num(v: f64) -> String {
    format!("{v:.16e}")
}

fn fiber_columns(geom: Geometry) -> &'static [&'static str] {
    match geom {
        Geometry::Euclidean2 => &["alpha"],
        Geometry::Euclidean3 => &["theta", "phi"],
        Geometry::HyperbolicHalfPlane => &["phi"],
    }
}

fn coord_columns(geom: Geometry) -> &'static [&'static str] {
    match geom.dim() {
        3 => &["x", "y", "z"],
        _ => &["x", "y"],
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CsvOutput {
    pub rays: String,
    pub fronts: String,
}

/// `rays.csv` and `fronts.csv` contents.
pub fn emit_csv(geom: Geometry, rays: &[Ray], fronts: &[Wavefront]) -> CsvOutput {
    let dim = geom.dim();
    let mut out = String::new();
    let mut header = vec!["ray_id", "t"];
    header.extend_from_slice(coord_columns(geom));
    header.extend_from_slice(fiber_columns(geom));
    header.extend_from_slice(&["n_local", "event"]);
    out.push_str(&header.join(","));
    out.push('\n');
    for (id, ray) in rays.iter().enumerate() {
        for s in &ray.samples {
            let _ = write!(out, "{id},{}", num(s.t));
            for c in &s.state.base.as_slice()[..dim] {
                let _ = write!(out, ",{}", num(*c));
            }
            for a in &s.state.fiber[..geom.fiber_dim()] {
                let _ = write!(out, ",{}", num(*a));
            }
            let event = match s.event.map(|i| ray.events[i].is_tir()) {
                None => "-",
                Some(false) => "refract",
                Some(true) => "tir",
            };
            let _ = writeln!(out, ",{},{event}", num(s.n_local));
        }
    }

    let mut fr = String::new();
    let mut header = vec!["front_t", "launch_index"];
    header.extend_from_slice(coord_columns(geom));
    fr.push_str(&header.join(","));
    fr.push('\n');
    let mut order: Vec<&Wavefront> = fronts.iter().collect();
    order.sort_by(|a, b| a.t.total_cmp(&b.t));
    for front in order {
        for p in &front.points {
            let _ = write!(fr, "{},{}", num(front.t), p.launch_index);
            for c in &p.point.as_slice()[..dim] {
                let _ = write!(fr, ",{}", num(*c));
            }
            fr.push('\n');
        }
    }
    CsvOutput {
        rays: out,
        fronts: fr,
    }
}

/// Points per ray polyline in the figure, before events are added back.
const MAX_POLYLINE_POINTS: usize = 600;

struct Canvas {
    projection: Projection,
    precision: usize,
}

impl Canvas {
    fn map(&self, p: &BasePoint) -> [f64; 2] {
        match self.projection {
            Projection::Chart => [p.x, p.y],
            Projection::PoincareDisc => {
                let [u, v] = to_poincare_disc(p).unwrap_or([1.0, 0.0]);
                // keep 9-decimal output inside the closed unit disc
                let r = u.hypot(v);
                let limit = 1.0 - 2e-9;
                if r > limit {
                    [u * limit / r, v * limit / r]
                } else {
                    [u, v]
                }
            }
        }
    }

    fn fmt(&self, v: f64) -> String {
        let s = format!("{v:.*}", self.precision);
        // avoid "-0.000" artefacts
        if s.trim_start_matches('-')
            .chars()
            .all(|c| c == '0' || c == '.')
        {
            s.trim_start_matches('-').to_string()
        } else {
            s
        }
    }

    /// SVG points attribute; the y axis is flipped so the chart's +y is up.
    fn points(&self, pts: &[[f64; 2]]) -> String {
        pts.iter()
            .map(|p| format!("{},{}", self.fmt(p[0]), self.fmt(-p[1])))
            .collect::<Vec<_>>()
            .join(" ")
    }
}

/// Chart-space polygon of a region clipped to an axis-aligned box.
fn region_polygon(shape: &Shape, lo: [f64; 2], hi: [f64; 2]) -> Vec<[f64; 2]> {
    let boxed = vec![
        [lo[0], lo[1]],
        [hi[0], lo[1]],
        [hi[0], hi[1]],
        [lo[0], hi[1]],
    ];
    let (normal, offset) = match shape {
        Shape::HalfSpace { normal, offset } => ([normal.x, normal.y], *offset),
        Shape::Slab { axis, lo: a, hi: b } => {
            let mut e = [0.0; 2];
            if *axis < 2 {
                e[*axis] = 1.0;
            } else {
                return boxed;
            }
            let clipped = clip(&boxed, e, *a);
            return clip(&clipped, [-e[0], -e[1]], -*b);
        }
    };
    clip(&boxed, normal, offset)
}

/// Keeps the part of a convex polygon where `normal · p ≥ offset`.
fn clip(poly: &[[f64; 2]], normal: [f64; 2], offset: f64) -> Vec<[f64; 2]> {
    let side = |p: &[f64; 2]| normal[0] * p[0] + normal[1] * p[1] - offset;
    let mut out = Vec::new();
    for i in 0..poly.len() {
        let (a, b) = (poly[i], poly[(i + 1) % poly.len()]);
        let (sa, sb) = (side(&a), side(&b));
        if sa >= 0.0 {
            out.push(a);
        }
        if (sa >= 0.0) != (sb >= 0.0) {
            let w = sa / (sa - sb);
            out.push([a[0] + w * (b[0] - a[0]), a[1] + w * (b[1] - a[1])]);
        }
    }
    out
}

/// Samples a chart segment until each half of every piece maps to at most
/// `max_gap` in the disc.
fn densify(canvas: &Canvas, a: [f64; 2], b: [f64; 2], max_gap: f64, out: &mut Vec<[f64; 2]>) {
    fn rec(
        canvas: &Canvas,
        a: [f64; 2],
        b: [f64; 2],
        max_gap: f64,
        depth: u32,
        out: &mut Vec<[f64; 2]>,
    ) {
        let m = [(a[0] + b[0]) / 2.0, (a[1] + b[1]) / 2.0];
        let [ma, mm, mb] = [a, m, b].map(|p| canvas.map(&Vec3::new(p[0], p[1], 0.0)));
        let gap = |p: [f64; 2], q: [f64; 2]| (p[0] - q[0]).hypot(p[1] - q[1]);
        if depth >= 24 || (gap(ma, mm) <= max_gap && gap(mm, mb) <= max_gap) {
            out.push(mb);
            return;
        }
        rec(canvas, a, m, max_gap, depth + 1, out);
        rec(canvas, m, b, max_gap, depth + 1, out);
    }
    rec(canvas, a, b, max_gap, 0, out);
}

fn decimate(ray: &Ray) -> Vec<BasePoint> {
    let n = ray.samples.len();
    let stride = n.div_ceil(MAX_POLYLINE_POINTS).max(1);
    ray.samples
        .iter()
        .enumerate()
        .filter(|(i, s)| i % stride == 0 || *i == n - 1 || s.event.is_some())
        .map(|(_, s)| s.state.base)
        .collect()
}

/// Figure with gray regions, ray polylines and front polylines.
pub fn emit_svg(
    medium: &Medium,
    projection: Projection,
    rays: &[Ray],
    fronts: &[Wavefront],
) -> String {
    let canvas = Canvas {
        projection,
        precision: match projection {
            Projection::Chart => 6,
            Projection::PoincareDisc => 9,
        },
    };
    let ray_paths: Vec<Vec<[f64; 2]>> = rays
        .iter()
        .map(|r| decimate(r).iter().map(|p| canvas.map(p)).collect())
        .collect();
    let front_paths: Vec<(bool, Vec<[f64; 2]>)> = fronts
        .iter()
        .map(|f| {
            (
                f.closed,
                f.points.iter().map(|p| canvas.map(&p.point)).collect(),
            )
        })
        .collect();

    // data extent in chart coordinates (used for region clipping as well)
    let mut lo = [f64::INFINITY; 2];
    let mut hi = [f64::NEG_INFINITY; 2];
    let chart_points = rays
        .iter()
        .flat_map(|r| r.samples.iter().map(|s| s.state.base))
        .chain(fronts.iter().flat_map(|f| f.points.iter().map(|p| p.point)));
    for p in chart_points {
        for k in 0..2 {
            lo[k] = lo[k].min(p[k]);
            hi[k] = hi[k].max(p[k]);
        }
    }
    if !lo[0].is_finite() {
        lo = [-1.0, -1.0];
        hi = [1.0, 1.0];
    }
    for k in 0..2 {
        let pad = ((hi[k] - lo[k]) * 0.05).max(0.05);
        lo[k] -= pad;
        hi[k] += pad;
    }

    let (view_lo, view_hi, stroke) = match projection {
        Projection::Chart => (lo, hi, ((hi[0] - lo[0]).max(hi[1] - lo[1])) / 500.0),
        Projection::PoincareDisc => ([-1.05, -1.05], [1.05, 1.05], 2.1 / 500.0),
    };

    let mut svg = String::new();
    let _ = writeln!(
        svg,
        r##"<svg xmlns="http://www.w3.org/2000/svg" viewBox="{} {} {} {}" width="800" height="{}">"##,
        canvas.fmt(view_lo[0]),
        canvas.fmt(-view_hi[1]),
        canvas.fmt(view_hi[0] - view_lo[0]),
        canvas.fmt(view_hi[1] - view_lo[1]),
        (800.0 * (view_hi[1] - view_lo[1]) / (view_hi[0] - view_lo[0])).round() as i64,
    );
    let _ = writeln!(svg, r##"<g id="regions" fill="#c8c8c8" stroke="none">"##);
    for region in &medium.regions {
        let poly = match projection {
            Projection::Chart => region_polygon(&region.shape, lo, hi),
            Projection::PoincareDisc => {
                let chart_poly = region_polygon(&region.shape, [-1e3, 0.0], [1e3, 1e3]);
                let mut mapped = Vec::new();
                for i in 0..chart_poly.len() {
                    let (a, b) = (chart_poly[i], chart_poly[(i + 1) % chart_poly.len()]);
                    densify(&canvas, a, b, 0.01, &mut mapped);
                }
                mapped
            }
        };
        if poly.len() >= 3 {
            let _ = writeln!(svg, r##"<polygon points="{}"/>"##, canvas.points(&poly));
        }
    }
    let _ = writeln!(svg, "</g>");
    if projection == Projection::PoincareDisc {
        let _ = writeln!(
            svg,
            r##"<circle cx="0" cy="0" r="1" fill="none" stroke="#000000" stroke-width="{}"/>"##,
            canvas.fmt(stroke)
        );
    }
    let _ = writeln!(
        svg,
        r##"<g id="rays" fill="none" stroke="#d62728" stroke-width="{}">"##,
        canvas.fmt(stroke)
    );
    for path in ray_paths.iter().filter(|p| p.len() >= 2) {
        let _ = writeln!(svg, r##"<polyline points="{}"/>"##, canvas.points(path));
    }
    let _ = writeln!(svg, "</g>");
    let _ = writeln!(
        svg,
        r##"<g id="fronts" fill="none" stroke="#1f77b4" stroke-width="{}" stroke-dasharray="{} {}">"##,
        canvas.fmt(stroke),
        canvas.fmt(stroke * 4.0),
        canvas.fmt(stroke * 2.0)
    );
    for (closed, path) in front_paths.iter().filter(|(_, p)| p.len() >= 2) {
        let tag = if *closed { "polygon" } else { "polyline" };
        let _ = writeln!(svg, r##"<{tag} points="{}"/>"##, canvas.points(path));
    }
    let _ = writeln!(svg, "</g>");
    svg.push_str("</svg>\n");
    svg
}
