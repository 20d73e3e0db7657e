//! Ray tracing through piecewise-constant media.
//!
//! Inside a region the Reeb field is integrated with fixed-step RK4. When a
//! step ends in a different region the crossing is bracketed by bisection on
//! sub-steps, the interface normal is taken from the boundary that was hit,
//! and the direction is refracted with the vector form of Snell's law in the
//! body metric (or reflected / terminated on total internal reflection).

use serde::{Deserialize, Serialize};

use crate::contact::{fiber_from_direction, reeb_coords, reeb_field, ContactState};
use crate::error::{Error, Result};
use crate::geometry::{g_dot, interface_normal, BasePoint, Geometry, Medium, Vec3};

/// Bracket width, in chart position, at which crossing bisection stops.
pub const CROSSING_TOLERANCE: f64 = 1e-10;

/// Grazing band around `(n₁/n₂) sin θᵢ = 1` classified as TIR.
pub const GRAZING_TOLERANCE: f64 = 1e-12;

pub const DEFAULT_DT: f64 = 1e-3;

const MAX_HALVINGS: usize = 20;

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum TirMode {
    /// End the ray at the interface.
    #[default]
    Terminate,
    /// Continue with the specular direction.
    Reflect,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Outcome {
    Refracted { angle_out: f64 },
    TotalInternalReflection,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct InterfaceEvent {
    pub t: f64,
    pub point: BasePoint,
    pub n_in: f64,
    pub n_out: f64,
    /// Angle from the g-unit normal, in `[0, π/2]`.
    pub angle_in: f64,
    pub outcome: Outcome,
    /// g-unit normal used at the crossing (incident-side metric).
    pub normal: Vec3,
    /// g-unit incident direction (incident-side metric).
    pub direction_in: Vec3,
}

impl InterfaceEvent {
    pub fn is_tir(&self) -> bool {
        self.outcome == Outcome::TotalInternalReflection
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RaySample {
    pub t: f64,
    pub state: ContactState,
    /// Index of the medium the ray is travelling in after this sample.
    pub n_local: f64,
    /// Position in [`Ray::events`] when this sample was recorded at an event.
    pub event: Option<usize>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Ray {
    pub launch: ContactState,
    pub samples: Vec<RaySample>,
    pub events: Vec<InterfaceEvent>,
    pub terminated_by_tir: bool,
}

impl Ray {
    pub fn last(&self) -> &RaySample {
        self.samples
            .last()
            .expect("a ray always holds its launch sample")
    }

    pub fn refractions(&self) -> impl Iterator<Item = &InterfaceEvent> {
        self.events.iter().filter(|e| !e.is_tir())
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TraceOptions {
    pub t_max: f64,
    pub dt: f64,
    pub tir_mode: TirMode,
}

impl TraceOptions {
    pub fn new(t_max: f64) -> Self {
        TraceOptions {
            t_max,
            dt: DEFAULT_DT,
            tir_mode: TirMode::Terminate,
        }
    }

    pub fn dt(mut self, dt: f64) -> Self {
        self.dt = dt;
        self
    }

    pub fn tir_mode(mut self, mode: TirMode) -> Self {
        self.tir_mode = mode;
        self
    }
}

fn add_scaled(q: &[f64; 5], k: &[f64; 5], h: f64) -> [f64; 5] {
    std::array::from_fn(|i| q[i] + h * k[i])
}

/// One classical Runge–Kutta step of the Reeb field with local index `n`.
pub fn step_rk4(geom: Geometry, n: f64, s: &ContactState, dt: f64) -> Result<ContactState> {
    let q = s.coords(geom);
    let k1 = reeb_coords(geom, n, &q);
    let k2 = reeb_coords(geom, n, &add_scaled(&q, &k1, dt / 2.0));
    let k3 = reeb_coords(geom, n, &add_scaled(&q, &k2, dt / 2.0));
    let k4 = reeb_coords(geom, n, &add_scaled(&q, &k3, dt));
    let next: [f64; 5] =
        std::array::from_fn(|i| q[i] + dt / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]));
    let out = ContactState::from_coords(geom, &next).normalized(geom);
    if geom == Geometry::HyperbolicHalfPlane && !(out.base.y > 0.0) {
        return Err(Error::LeftHalfPlane { y: out.base.y });
    }
    Ok(out)
}

/// Result of bracketing an interface crossing inside one step.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Crossing {
    /// Fraction of the step at which the boundary is crossed.
    pub fraction: f64,
    pub before: ContactState,
    pub after: ContactState,
    /// Bracket ends as step fractions.
    pub bracket: (f64, f64),
    pub from: Option<usize>,
    pub to: Option<usize>,
}

/// Brackets the first region change of the RK4 sub-step flow from `s_before`
/// over a step of size `dt`, to within [`CROSSING_TOLERANCE`] in position.
pub fn locate_crossing(medium: &Medium, s_before: &ContactState, dt: f64) -> Result<Crossing> {
    let geom = medium.geometry;
    let from = medium.region_at(&s_before.base);
    let n = medium.index_of(from);
    let end = step_rk4(geom, n, s_before, dt)?;
    let to = medium.region_at(&end.base);
    if to == from {
        return Err(Error::Domain("no region change inside the step".into()));
    }

    let (mut lo, mut hi) = (0.0, 1.0);
    let (mut s_lo, mut s_hi) = (*s_before, end);
    for _ in 0..200 {
        if (s_hi.base - s_lo.base).norm() <= CROSSING_TOLERANCE {
            break;
        }
        let mid = 0.5 * (lo + hi);
        let s_mid = step_rk4(geom, n, s_before, mid * dt)?;
        if medium.region_at(&s_mid.base) == from {
            lo = mid;
            s_lo = s_mid;
        } else {
            hi = mid;
            s_hi = s_mid;
        }
    }
    let entered = medium.region_at(&s_hi.base);
    if entered != to {
        return Err(Error::MultipleBoundaries { dt });
    }
    Ok(Crossing {
        fraction: 0.5 * (lo + hi),
        before: s_lo,
        after: s_hi,
        bracket: (lo, hi),
        from,
        to,
    })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Refraction {
    /// `direction` is g-unit in the transmitted side's metric.
    Refracted {
        direction: Vec3,
        angle_in: f64,
        angle_out: f64,
    },
    TotalInternalReflection {
        angle_in: f64,
    },
}

/// Vector Snell's law in the body metric.
///
/// `d_in` and `normal` must be g-unit for index `n1` at `p`. The direction
/// is split into normal and tangential parts; the tangential g-norm is
/// `sin θᵢ`, and the transmitted direction keeps both orientations with
/// `sin θₜ = (n1/n2) sin θᵢ`.
pub fn refract(
    geom: Geometry,
    p: &BasePoint,
    d_in: &Vec3,
    normal: &Vec3,
    n1: f64,
    n2: f64,
) -> Refraction {
    let cos_in = g_dot(geom, n1, p, d_in, normal);
    let tangential = d_in - normal * cos_in;
    let sin_in = g_dot(geom, n1, p, &tangential, &tangential).max(0.0).sqrt();
    let angle_in = sin_in.atan2(cos_in.abs());
    let sin_out = n1 / n2 * sin_in;
    if sin_out > 1.0 || (sin_out - 1.0).abs() <= GRAZING_TOLERANCE {
        return Refraction::TotalInternalReflection { angle_in };
    }
    let cos_out = (1.0 - sin_out * sin_out).sqrt();

    let unit2 = |v: &Vec3| v / g_dot(geom, n2, p, v, v).sqrt();
    let mut direction = unit2(normal) * (cos_out * cos_in.signum());
    if sin_in > 0.0 {
        direction += unit2(&tangential) * sin_out;
    }
    Refraction::Refracted {
        direction,
        angle_in,
        angle_out: sin_out.atan2(cos_out),
    }
}

/// Specular reflection of a g-unit direction about a g-unit normal.
pub fn reflect(geom: Geometry, n: f64, p: &BasePoint, d_in: &Vec3, normal: &Vec3) -> Vec3 {
    d_in - normal * (2.0 * g_dot(geom, n, p, d_in, normal))
}

/// Critical angle `asin(n2/n1)` of a dense→rare interface, `None` otherwise.
pub fn critical_angle(n1: f64, n2: f64) -> Option<f64> {
    (n1 > n2).then(|| (n2 / n1).asin())
}

/// Traces one ray from `launch` up to flow parameter `opts.t_max`.
///
/// Samples are recorded on the `dt` grid and at every interface event.
pub fn trace_ray(medium: &Medium, launch: &ContactState, opts: &TraceOptions) -> Result<Ray> {
    let geom = medium.geometry;
    if !(opts.t_max > 0.0) || !(opts.dt > 0.0) {
        return Err(Error::Domain(format!(
            "t_max and dt must be positive, got {} and {}",
            opts.t_max, opts.dt
        )));
    }
    let launch = launch.normalized(geom);
    launch.validate(geom)?;

    let mut region = medium.region_at(&launch.base);
    let mut ray = Ray {
        launch,
        samples: vec![RaySample {
            t: 0.0,
            state: launch,
            n_local: medium.index_of(region),
            event: None,
        }],
        events: Vec::new(),
        terminated_by_tir: false,
    };

    let mut s = launch;
    let mut t = 0.0;
    let mut k: u64 = 0;
    let end_tol = opts.dt * 1e-9;
    while t < opts.t_max - end_tol {
        let target = (((k + 1) as f64) * opts.dt).min(opts.t_max);
        let n = medium.index_of(region);
        let mut h = target - t;
        let mut halvings = 0;

        let crossing = loop {
            let next = step_rk4(geom, n, &s, h)?;
            if medium.region_at(&next.base) == region {
                break Ok(next);
            }
            match locate_crossing(medium, &s, h) {
                Ok(c) => break Err(c),
                Err(Error::MultipleBoundaries { .. }) if halvings < MAX_HALVINGS => {
                    halvings += 1;
                    h *= 0.5;
                }
                Err(Error::MultipleBoundaries { .. }) => {
                    return Err(Error::StepRetriesExhausted {
                        t,
                        retries: halvings,
                    })
                }
                Err(e) => return Err(e),
            }
        };

        match crossing {
            Ok(next) => {
                s = next;
                t += h;
                if (target - t).abs() <= end_tol {
                    t = target;
                    k += 1;
                }
                ray.samples.push(RaySample {
                    t,
                    state: s,
                    n_local: n,
                    event: None,
                });
            }
            Err(c) => {
                let t_event = t + c.bracket.1 * h;
                let (event, next_state, next_region) = interface_event(medium, &c, t_event, opts)?;
                let tir = event.is_tir();
                ray.events.push(event);
                let sample = RaySample {
                    t: t_event,
                    state: next_state,
                    n_local: medium.index_of(next_region),
                    event: Some(ray.events.len() - 1),
                };
                match ray.samples.last_mut() {
                    Some(last) if last.t >= t_event => *last = sample,
                    _ => ray.samples.push(sample),
                }
                s = next_state;
                t = t_event;
                region = next_region;
                // an event on a grid time stands in for that grid sample
                if (target - t).abs() <= end_tol {
                    k += 1;
                }
                if tir && opts.tir_mode == TirMode::Terminate {
                    ray.terminated_by_tir = true;
                    break;
                }
            }
        }
    }
    Ok(ray)
}

/// Applies refraction or reflection at a bracketed crossing.
fn interface_event(
    medium: &Medium,
    c: &Crossing,
    t: f64,
    opts: &TraceOptions,
) -> Result<(InterfaceEvent, ContactState, Option<usize>)> {
    let geom = medium.geometry;
    let (n1, n2) = (medium.index_of(c.from), medium.index_of(c.to));
    let p = c.after.base;

    // the boundary hit is the nearer face among the two regions involved
    let owner = [c.from, c.to]
        .into_iter()
        .flatten()
        .min_by(|&a, &b| {
            let da = medium.regions[a].nearest_face(&p).distance;
            let db = medium.regions[b].nearest_face(&p).distance;
            da.total_cmp(&db)
        })
        .ok_or_else(|| Error::Domain("crossing without a region".into()))?;
    let other = if Some(owner) == c.from { n2 } else { n1 };
    let normal = interface_normal(geom, n1, &medium.regions[owner], other, &p)?;
    let d_in = reeb_field(geom, n1, &c.before).base_rate;

    let mut event = InterfaceEvent {
        t,
        point: p,
        n_in: n1,
        n_out: n2,
        angle_in: 0.0,
        outcome: Outcome::TotalInternalReflection,
        normal,
        direction_in: d_in,
    };
    match refract(geom, &p, &d_in, &normal, n1, n2) {
        Refraction::Refracted {
            direction,
            angle_in,
            angle_out,
        } => {
            event.angle_in = angle_in;
            event.outcome = Outcome::Refracted { angle_out };
            let state = ContactState {
                base: c.after.base,
                fiber: fiber_from_direction(geom, &direction),
            };
            Ok((event, state, c.to))
        }
        Refraction::TotalInternalReflection { angle_in } => {
            event.angle_in = angle_in;
            event.point = c.before.base;
            let fiber = match opts.tir_mode {
                TirMode::Reflect => {
                    let r = reflect(geom, n1, &c.before.base, &d_in, &normal);
                    fiber_from_direction(geom, &r)
                }
                TirMode::Terminate => c.before.fiber,
            };
            let state = ContactState {
                base: c.before.base,
                fiber,
            };
            Ok((event, state, c.from))
        }
    }
}
