//! Wavefronts as equal-time loci of ray fans.

use std::f64::consts::{PI, TAU};

use rayon::prelude::*;

use crate::contact::{reeb_field, ContactState};
use crate::error::{Error, Result};
use crate::geometry::{g_dot, BasePoint, Geometry, Medium, Vec3};
use crate::ray::{step_rk4, trace_ray, Ray, TraceOptions};

/// Collinearity tolerance of the segment predicates.
const ORIENTATION_TOLERANCE: f64 = 1e-12;

/// Launch directions of a fan.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum FanDirections {
    /// `count` fiber angles over `[from, to]`. A span of exactly `2π` is a full
    /// circle and omits the duplicate endpoint.
    Planar { count: usize, from: f64, to: f64 },
    /// Latitude–longitude grid: polar angles at cell centres, azimuths from 0.
    Spherical {
        polar_count: usize,
        azimuth_count: usize,
    },
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Fan {
    pub source: BasePoint,
    pub directions: FanDirections,
}

impl Fan {
    pub fn planar(source: BasePoint, count: usize, from: f64, to: f64) -> Self {
        Fan {
            source,
            directions: FanDirections::Planar { count, from, to },
        }
    }

    /// A full-circle fan starting at angle 0.
    pub fn circle(source: BasePoint, count: usize) -> Self {
        Fan::planar(source, count, 0.0, TAU)
    }

    pub fn spherical(source: BasePoint, polar_count: usize, azimuth_count: usize) -> Self {
        Fan {
            source,
            directions: FanDirections::Spherical {
                polar_count,
                azimuth_count,
            },
        }
    }

    pub fn len(&self) -> usize {
        match self.directions {
            FanDirections::Planar { count, .. } => count,
            FanDirections::Spherical {
                polar_count,
                azimuth_count,
            } => polar_count * azimuth_count,
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn is_full_circle(&self) -> bool {
        matches!(self.directions, FanDirections::Planar { from, to, .. } if (to - from - TAU).abs() < 1e-12)
    }

    pub fn validate(&self, geom: Geometry) -> Result<()> {
        geom.validate_point(&self.source)?;
        match (geom.dim(), self.directions) {
            (2, FanDirections::Planar { count, from, to }) => {
                if count < 3 {
                    return Err(Error::Domain(format!(
                        "fan needs at least 3 rays, got {count}"
                    )));
                }
                if !(from < to) || to - from > TAU + 1e-12 {
                    return Err(Error::Domain(format!(
                        "fan angles must satisfy from < to <= from + 2π, got [{from}, {to}]"
                    )));
                }
            }
            (
                3,
                FanDirections::Spherical {
                    polar_count,
                    azimuth_count,
                },
            ) => {
                if polar_count == 0 || azimuth_count == 0 || polar_count * azimuth_count < 3 {
                    return Err(Error::Domain("spherical fan needs at least 3 rays".into()));
                }
            }
            (dim, _) => {
                return Err(Error::Domain(format!(
                    "fan kind does not match a {dim}-dimensional chart"
                )))
            }
        }
        Ok(())
    }

    /// Launch states in fan order.
    pub fn launches(&self) -> Vec<ContactState> {
        let (x, y, z) = (self.source.x, self.source.y, self.source.z);
        match self.directions {
            FanDirections::Planar { count, from, to } => {
                let steps = if self.is_full_circle() {
                    count
                } else {
                    count - 1
                };
                let step = (to - from) / steps as f64;
                (0..count)
                    .map(|k| ContactState::planar(x, y, from + k as f64 * step))
                    .collect()
            }
            FanDirections::Spherical {
                polar_count,
                azimuth_count,
            } => (0..polar_count)
                .flat_map(|i| {
                    let polar = (i as f64 + 0.5) * PI / polar_count as f64;
                    (0..azimuth_count).map(move |j| {
                        let azimuth = j as f64 * TAU / azimuth_count as f64;
                        ContactState::spatial(x, y, z, polar, azimuth)
                    })
                })
                .collect(),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct FrontPoint {
    pub launch_index: usize,
    pub point: BasePoint,
    /// Ray velocity (g-unit) at the front time.
    pub direction: Vec3,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Wavefront {
    pub t: f64,
    pub points: Vec<FrontPoint>,
    pub closed: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct FanTrace {
    pub rays: Vec<Ray>,
    pub fronts: Vec<Wavefront>,
}

/// Traces every ray of `fan` and assembles the fronts at `front_times`.
///
/// Rays run on the ambient rayon pool; results are collected in launch order.
pub fn propagate_fan(
    medium: &Medium,
    fan: &Fan,
    opts: &TraceOptions,
    front_times: &[f64],
) -> Result<FanTrace> {
    fan.validate(medium.geometry)?;
    if let Some(&t) = front_times
        .iter()
        .find(|&&t| !(0.0..=opts.t_max).contains(&t))
    {
        return Err(Error::Domain(format!(
            "front time {t} outside [0, {}]",
            opts.t_max
        )));
    }
    let rays = fan
        .launches()
        .par_iter()
        .map(|launch| trace_ray(medium, launch, opts))
        .collect::<Result<Vec<_>>>()?;
    let fronts = front_times
        .iter()
        .map(|&t| assemble_front(medium, fan, &rays, t))
        .collect();
    Ok(FanTrace { rays, fronts })
}

/// Position and velocity of `ray` at flow parameter `t`. Between samples
/// the state is advanced from the earlier sample by an RK4 sub-step in that
/// sample's medium. `None` once the ray has ended.
pub fn ray_state_at(medium: &Medium, ray: &Ray, t: f64) -> Option<(BasePoint, Vec3)> {
    let geom = medium.geometry;
    let samples = &ray.samples;
    let last = samples.last()?;
    if t > last.t + 1e-12 {
        return None;
    }
    let i = samples.partition_point(|s| s.t <= t).max(1);
    let a = &samples[i - 1];
    let state = if t > a.t {
        step_rk4(geom, a.n_local, &a.state, t - a.t).ok()?
    } else {
        a.state
    };
    Some((state.base, reeb_field(geom, a.n_local, &state).base_rate))
}

fn assemble_front(medium: &Medium, fan: &Fan, rays: &[Ray], t: f64) -> Wavefront {
    let points: Vec<FrontPoint> = rays
        .iter()
        .enumerate()
        .filter_map(|(launch_index, ray)| {
            ray_state_at(medium, ray, t).map(|(point, direction)| FrontPoint {
                launch_index,
                point,
                direction,
            })
        })
        .collect();
    let closed = fan.is_full_circle() && points.len() == rays.len();
    Wavefront { t, points, closed }
}

/// Central-difference tangents along the front polyline.
pub fn front_tangents(front: &Wavefront) -> Result<Vec<Vec3>> {
    let pts = &front.points;
    let len = pts.len();
    if len < 3 {
        return Err(Error::TooFewFrontPoints(len));
    }
    (0..len)
        .map(|i| {
            let (prev, next) = if front.closed {
                ((i + len - 1) % len, (i + 1) % len)
            } else {
                (i.saturating_sub(1), (i + 1).min(len - 1))
            };
            let d = pts[next].point - pts[prev].point;
            if d.norm() <= 1e-15 {
                Err(Error::DegenerateFront(i))
            } else {
                Ok(d)
            }
        })
        .collect()
}

/// Per-point `|g(ray, tangent)| / (|ray|_g |tangent|_g)`.
pub fn orthogonality_residual(medium: &Medium, front: &Wavefront) -> Result<Vec<f64>> {
    let geom = medium.geometry;
    let tangents = front_tangents(front)?;
    Ok(front
        .points
        .iter()
        .zip(&tangents)
        .map(|(fp, tan)| {
            let n = medium.index_at(&fp.point);
            let p = &fp.point;
            let num = g_dot(geom, n, p, &fp.direction, tan).abs();
            let den = (g_dot(geom, n, p, &fp.direction, &fp.direction)
                * g_dot(geom, n, p, tan, tan))
            .sqrt();
            num / den
        })
        .collect())
}

fn orient(a: [f64; 2], b: [f64; 2], c: [f64; 2]) -> f64 {
    (b[0] - a[0]) * (c[1] - a[1]) - (b[1] - a[1]) * (c[0] - a[0])
}

fn sign(v: f64) -> i8 {
    if v > ORIENTATION_TOLERANCE {
        1
    } else if v < -ORIENTATION_TOLERANCE {
        -1
    } else {
        0
    }
}

fn on_segment(a: [f64; 2], b: [f64; 2], p: [f64; 2]) -> bool {
    let tol = 1e-12;
    p[0] >= a[0].min(b[0]) - tol
        && p[0] <= a[0].max(b[0]) + tol
        && p[1] >= a[1].min(b[1]) - tol
        && p[1] <= a[1].max(b[1]) + tol
}

/// Intersection points of two segments; touching endpoints and collinear
/// overlaps report their contact points.
fn segment_hits(a: [f64; 2], b: [f64; 2], c: [f64; 2], d: [f64; 2], out: &mut Vec<[f64; 2]>) {
    let (o1, o2) = (sign(orient(a, b, c)), sign(orient(a, b, d)));
    let (o3, o4) = (sign(orient(c, d, a)), sign(orient(c, d, b)));
    if o1 * o2 < 0 && o3 * o4 < 0 {
        let (r, s) = ([b[0] - a[0], b[1] - a[1]], [d[0] - c[0], d[1] - c[1]]);
        let denom = r[0] * s[1] - r[1] * s[0];
        let u = ((c[0] - a[0]) * s[1] - (c[1] - a[1]) * s[0]) / denom;
        out.push([a[0] + u * r[0], a[1] + u * r[1]]);
        return;
    }
    if o1 == 0 && on_segment(a, b, c) {
        out.push(c);
    }
    if o2 == 0 && on_segment(a, b, d) {
        out.push(d);
    }
    if o3 == 0 && on_segment(c, d, a) {
        out.push(a);
    }
    if o4 == 0 && on_segment(c, d, b) {
        out.push(b);
    }
}

/// Number of distinct points where the ray's base polyline meets the front
/// polyline. Shared endpoints and tangential touches count once.
pub fn count_front_intersections(ray: &Ray, front: &Wavefront) -> usize {
    let ray_pts: Vec<[f64; 2]> = ray
        .samples
        .iter()
        .map(|s| [s.state.base.x, s.state.base.y])
        .collect();
    let mut front_pts: Vec<[f64; 2]> = front
        .points
        .iter()
        .map(|p| [p.point.x, p.point.y])
        .collect();
    if front.closed && front_pts.len() > 2 {
        front_pts.push(front_pts[0]);
    }
    let mut hits = Vec::new();
    for r in ray_pts.windows(2) {
        for f in front_pts.windows(2) {
            segment_hits(r[0], r[1], f[0], f[1], &mut hits);
        }
    }
    let mut distinct: Vec<[f64; 2]> = Vec::new();
    for h in hits {
        if !distinct
            .iter()
            .any(|d| (d[0] - h[0]).hypot(d[1] - h[1]) <= 1e-9)
        {
            distinct.push(h);
        }
    }
    distinct.len()
}
