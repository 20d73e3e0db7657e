//! Contact structure of the unit cotangent bundle for the three charts.
//!
//! A [`ContactState`] is a base point together with fiber angles. The
//! angles are chart-specific:
//!
//! | geometry                | fiber            | ray direction                          |
//! |-------------------------|------------------|----------------------------------------|
//! | `Euclidean2`            | `α`              | `(cos α, sin α)`                       |
//! | `Euclidean3`            | `(θ, φ)`         | `(sin θ cos φ, sin θ sin φ, cos θ)`    |
//! | `HyperbolicHalfPlane`   | `φ`              | `(−cos φ, sin φ)`                      |
//!
//! The Euclidean planar angle is the physical direction of the ray. The
//! contact-element angle `θ` whose normal is the ray is related to it by
//! `α = θ + π/2` (see [`alpha_from_contact_angle`]).
//!
//! The momentum `p` is the `g`-dual of the unit ray velocity, so it always
//! satisfies the co-sphere condition `g⁻¹(p, p) = 1`, and the Liouville form
//! is `λ = p_i dxⁱ`.

use std::f64::consts::{PI, TAU};

use crate::error::{Error, Result};
use crate::geometry::{g_dot, BasePoint, Geometry, Vec3};

/// Default central-difference step for the verifiers.
pub const DEFAULT_FD_STEP: f64 = 1e-5;

/// Largest `|2t/n|` accepted by the hyperbolic closed flow before `e^{2t/n}`
/// gets close to overflowing.
const MAX_EXPONENT: f64 = 700.0;

/// Maps an angle into `[0, 2π)`.
pub fn wrap_two_pi(a: f64) -> f64 {
    let r = a.rem_euclid(TAU);
    if r >= TAU {
        0.0
    } else {
        r
    }
}

/// Maps an angle difference into `(−π, π]`.
pub fn wrap_pi(a: f64) -> f64 {
    let r = wrap_two_pi(a);
    if r > PI {
        r - TAU
    } else {
        r
    }
}

/// Physical direction angle of the ray normal to the contact element at
/// angle `θ`, whose Euclidean direction is `(−sin θ, cos θ)`.
pub fn alpha_from_contact_angle(theta: f64) -> f64 {
    wrap_two_pi(theta + PI / 2.0)
}

pub fn contact_angle_from_alpha(alpha: f64) -> f64 {
    wrap_two_pi(alpha - PI / 2.0)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ContactState {
    pub base: BasePoint,
    /// Fiber angles; planar charts only use the first slot.
    pub fiber: [f64; 2],
}

impl ContactState {
    /// A state of a planar chart (`Euclidean2` or `HyperbolicHalfPlane`).
    pub fn planar(x: f64, y: f64, angle: f64) -> Self {
        ContactState {
            base: Vec3::new(x, y, 0.0),
            fiber: [wrap_two_pi(angle), 0.0],
        }
    }

    pub fn spatial(x: f64, y: f64, z: f64, polar: f64, azimuth: f64) -> Self {
        ContactState {
            base: Vec3::new(x, y, z),
            fiber: [polar, azimuth],
        }
        .normalized(Geometry::Euclidean3)
    }

    pub fn angle(&self) -> f64 {
        self.fiber[0]
    }

    /// Brings the fiber angles into their canonical ranges.
    pub fn normalized(mut self, geom: Geometry) -> Self {
        match geom {
            Geometry::Euclidean3 => {
                let mut polar = wrap_two_pi(self.fiber[0]);
                let mut azimuth = self.fiber[1];
                if polar > PI {
                    polar = TAU - polar;
                    azimuth += PI;
                }
                self.fiber = [polar, wrap_two_pi(azimuth)];
            }
            _ => self.fiber = [wrap_two_pi(self.fiber[0]), 0.0],
        }
        self
    }

    pub fn validate(&self, geom: Geometry) -> Result<()> {
        geom.validate_point(&self.base)?;
        if self.fiber.iter().any(|a| !a.is_finite()) {
            return Err(Error::Domain(format!("non-finite fiber {:?}", self.fiber)));
        }
        Ok(())
    }

    /// State coordinates `(base…, fiber…)`; the first `geom.state_dim()`
    /// entries are meaningful.
    pub fn coords(&self, geom: Geometry) -> [f64; 5] {
        let mut q = [0.0; 5];
        let dim = geom.dim();
        q[..dim].copy_from_slice(&self.base.as_slice()[..dim]);
        q[dim..geom.state_dim()].copy_from_slice(&self.fiber[..geom.fiber_dim()]);
        q
    }

    pub fn from_coords(geom: Geometry, q: &[f64; 5]) -> Self {
        let dim = geom.dim();
        let mut base = Vec3::zeros();
        base.as_mut_slice()[..dim].copy_from_slice(&q[..dim]);
        let mut fiber = [0.0; 2];
        fiber[..geom.fiber_dim()].copy_from_slice(&q[dim..geom.state_dim()]);
        ContactState { base, fiber }
    }

    /// The same contact element travelling the opposite way.
    pub fn reversed(&self, geom: Geometry) -> Self {
        let fiber = match geom {
            Geometry::Euclidean3 => [PI - self.fiber[0], self.fiber[1] + PI],
            _ => [self.fiber[0] + PI, 0.0],
        };
        ContactState {
            base: self.base,
            fiber,
        }
        .normalized(geom)
    }
}

/// Euclidean unit vector of the ray direction encoded by the fiber.
pub fn unit_direction(geom: Geometry, s: &ContactState) -> Vec3 {
    match geom {
        Geometry::Euclidean2 => {
            let (sin, cos) = s.fiber[0].sin_cos();
            Vec3::new(cos, sin, 0.0)
        }
        Geometry::Euclidean3 => {
            let (st, ct) = s.fiber[0].sin_cos();
            let (sp, cp) = s.fiber[1].sin_cos();
            Vec3::new(st * cp, st * sp, ct)
        }
        Geometry::HyperbolicHalfPlane => {
            let (sin, cos) = s.fiber[0].sin_cos();
            Vec3::new(-cos, sin, 0.0)
        }
    }
}

/// Inverse of [`unit_direction`]: fiber angles of a (not necessarily unit)
/// tangent direction.
pub fn fiber_from_direction(geom: Geometry, d: &Vec3) -> [f64; 2] {
    match geom {
        Geometry::Euclidean2 => [wrap_two_pi(d.y.atan2(d.x)), 0.0],
        Geometry::Euclidean3 => {
            let polar = (d.z / d.norm()).clamp(-1.0, 1.0).acos();
            [polar, wrap_two_pi(d.y.atan2(d.x))]
        }
        Geometry::HyperbolicHalfPlane => [wrap_two_pi(d.y.atan2(-d.x)), 0.0],
    }
}

/// A covector at a base point, in chart components.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Covector(pub Vec3);

impl Covector {
    pub fn apply(&self, v: &Vec3) -> f64 {
        self.0.dot(v)
    }
}

/// Tangent vector on the space of contact elements.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StateVelocity {
    pub base_rate: Vec3,
    pub fiber_rate: [f64; 2],
}

impl StateVelocity {
    pub fn coords(&self, geom: Geometry) -> [f64; 5] {
        let mut q = [0.0; 5];
        let dim = geom.dim();
        q[..dim].copy_from_slice(&self.base_rate.as_slice()[..dim]);
        q[dim..geom.state_dim()].copy_from_slice(&self.fiber_rate[..geom.fiber_dim()]);
        q
    }
}

/// Momentum `p` on the unit co-sphere, `g⁻¹(p, p) = 1`.
pub fn momentum_of(geom: Geometry, n: f64, s: &ContactState) -> Covector {
    let c = geom.conformal_factor(n, &s.base);
    Covector(unit_direction(geom, s) * c)
}

/// The Liouville form `λ = p_i dxⁱ` evaluated at `s`.
pub fn liouville_form(geom: Geometry, n: f64, s: &ContactState) -> Covector {
    momentum_of(geom, n, s)
}

/// `λ` as a 1-form on state space (base components, zero fiber components).
fn liouville_coords(geom: Geometry, n: f64, q: &[f64; 5]) -> [f64; 5] {
    let s = ContactState::from_coords(geom, q);
    let p = liouville_form(geom, n, &s).0;
    let mut out = [0.0; 5];
    out[..geom.dim()].copy_from_slice(&p.as_slice()[..geom.dim()]);
    out
}

/// Reeb vector field of `λ` with local index `n`.
pub fn reeb_field(geom: Geometry, n: f64, s: &ContactState) -> StateVelocity {
    let base_rate = unit_direction(geom, s) / geom.conformal_factor(n, &s.base);
    let fiber_rate = match geom {
        Geometry::HyperbolicHalfPlane => [-s.fiber[0].cos() / n, 0.0],
        _ => [0.0, 0.0],
    };
    StateVelocity {
        base_rate,
        fiber_rate,
    }
}

/// Reeb field in state coordinates; used by the integrator.
pub(crate) fn reeb_coords(geom: Geometry, n: f64, q: &[f64; 5]) -> [f64; 5] {
    reeb_field(geom, n, &ContactState::from_coords(geom, q)).coords(geom)
}

/// Time-`t` Reeb flow in a homogeneous medium of index `n`.
///
/// The Euclidean flows are straight lines at coordinate speed `1/n`. On the
/// half plane the flow follows the geodesic semicircle through the state;
/// with `s = sin φ`, `c = cos φ`, `E = e^{2t/n}` and
/// `R = (1 + s) + (1 − s)E`:
///
/// ```text
/// x(t) = x + y c (1 − E) / R
/// y(t) = 2 y e^{t/n} / R
/// φ(t) = atan2(1 + s − (1 − s)E, 2 e^{t/n} c)
/// ```
pub fn closed_flow(geom: Geometry, n: f64, s: &ContactState, t: f64) -> Result<ContactState> {
    if t == 0.0 {
        return Ok(*s);
    }
    match geom {
        Geometry::Euclidean2 | Geometry::Euclidean3 => {
            let v = reeb_field(geom, n, s).base_rate;
            Ok(ContactState {
                base: s.base + v * t,
                fiber: s.fiber,
            }
            .normalized(geom))
        }
        Geometry::HyperbolicHalfPlane => {
            let tau = t / n;
            if (2.0 * tau).abs() > MAX_EXPONENT {
                return Err(Error::FlowOverflow { t, n });
            }
            let (x, y) = (s.base.x, s.base.y);
            let (sin, cos) = s.fiber[0].sin_cos();
            let half = tau.exp();
            let e = half * half;
            let r = (1.0 + sin) + (1.0 - sin) * e;
            let nx = x + y * cos * (1.0 - e) / r;
            let ny = 2.0 * y * half / r;
            let phi = (1.0 + sin - (1.0 - sin) * e).atan2(2.0 * half * cos);
            if !nx.is_finite() || !ny.is_finite() {
                return Err(Error::FlowOverflow { t, n });
            }
            if ny <= 0.0 {
                return Err(Error::LeftHalfPlane { y: ny });
            }
            Ok(ContactState::planar(nx, ny, phi))
        }
    }
}

/// Center and radius of the half-plane geodesic through `(x₀, y₀)` with
/// fiber angle `φ₀`; `None` for vertical geodesics (`cos φ₀ = 0`).
pub fn geodesic_circle(s: &ContactState) -> Option<(f64, f64)> {
    let (sin, cos) = s.fiber[0].sin_cos();
    if cos.abs() < 1e-15 {
        return None;
    }
    let center = (s.base.x * cos - s.base.y * sin) / cos;
    Some((center, s.base.y / cos))
}

/// Central-difference step along coordinate `i`, returning the perturbed
/// points and the exactly representable denominator `q⁺ᵢ − q⁻ᵢ`.
fn perturb(q: &[f64; 5], i: usize, h: f64) -> ([f64; 5], [f64; 5], f64) {
    let (mut plus, mut minus) = (*q, *q);
    plus[i] += h;
    minus[i] -= h;
    let denom = plus[i] - minus[i];
    (plus, minus, denom)
}

/// Residuals of the Reeb conditions at a state.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ReebResidual {
    /// `|λ(ξ) − 1|`.
    pub normalization: f64,
    /// `max_j |(ι_ξ dλ)_j|`.
    pub kernel: f64,
}

/// Checks `λ(ξ) = 1` and `ι_ξ dλ = 0`, with `dλ` assembled by central
/// differences of the Liouville form.
pub fn verify_reeb(geom: Geometry, n: f64, s: &ContactState, h: f64) -> ReebResidual {
    verify_reeb_with(geom, n, s, h, |st| reeb_field(geom, n, st))
}

/// [`verify_reeb`] against an arbitrary candidate field.
pub fn verify_reeb_with<F>(
    geom: Geometry,
    n: f64,
    s: &ContactState,
    h: f64,
    field: F,
) -> ReebResidual
where
    F: Fn(&ContactState) -> StateVelocity,
{
    let dim = geom.state_dim();
    let q = s.coords(geom);
    let xi = field(s).coords(geom);
    let lambda = liouville_coords(geom, n, &q);
    let normalization = (lambda.iter().zip(&xi).map(|(a, b)| a * b).sum::<f64>() - 1.0).abs();

    // partial[i][j] = ∂_i λ_j
    let mut partial = [[0.0; 5]; 5];
    for (i, row) in partial.iter_mut().enumerate().take(dim) {
        let (plus, minus, denom) = perturb(&q, i, h);
        let (lp, lm) = (
            liouville_coords(geom, n, &plus),
            liouville_coords(geom, n, &minus),
        );
        for j in 0..dim {
            row[j] = (lp[j] - lm[j]) / denom;
        }
    }
    let kernel = (0..dim)
        .map(|j| {
            (0..dim)
                .map(|i| xi[i] * (partial[i][j] - partial[j][i]))
                .sum::<f64>()
                .abs()
        })
        .fold(0.0, f64::max);
    ReebResidual {
        normalization,
        kernel,
    }
}

/// Residual of the strictness condition `φ_t* λ = λ`, with the Jacobian of
/// [`closed_flow`] taken by central differences.
pub fn verify_strict_contact(
    geom: Geometry,
    n: f64,
    s: &ContactState,
    t: f64,
    h: f64,
) -> Result<f64> {
    let dim = geom.state_dim();
    let q = s.coords(geom);
    let image = closed_flow(geom, n, s, t)?;
    let lambda_image = liouville_coords(geom, n, &image.coords(geom));
    let lambda = liouville_coords(geom, n, &q);
    let base_dim = geom.dim();

    let mut residual: f64 = 0.0;
    for i in 0..dim {
        let (plus, minus, denom) = perturb(&q, i, h);
        let fp = closed_flow(geom, n, &ContactState::from_coords(geom, &plus), t)?.coords(geom);
        let fm = closed_flow(geom, n, &ContactState::from_coords(geom, &minus), t)?.coords(geom);
        let pulled: f64 = (0..dim)
            .map(|k| {
                let diff = fp[k] - fm[k];
                let diff = if k >= base_dim { wrap_pi(diff) } else { diff };
                lambda_image[k] * diff / denom
            })
            .sum();
        residual = residual.max((pulled - lambda[i]).abs());
    }
    Ok(residual)
}

/// `g⁻¹(p, p)` for the momentum of `s`.
pub fn cosphere_norm(geom: Geometry, n: f64, s: &ContactState) -> f64 {
    let p = momentum_of(geom, n, s).0;
    let c = geom.conformal_factor(n, &s.base);
    p.dot(&p) / (c * c)
}

/// `g(ξ, ξ)` for the base part of the Reeb field.
pub fn reeb_speed_squared(geom: Geometry, n: f64, s: &ContactState) -> f64 {
    let v = reeb_field(geom, n, s).base_rate;
    g_dot(geom, n, &s.base, &v, &v)
}

/// Largest coordinate difference between two states, angles compared modulo
/// `2π`.
pub fn state_distance(geom: Geometry, a: &ContactState, b: &ContactState) -> f64 {
    let (qa, qb) = (a.coords(geom), b.coords(geom));
    (0..geom.state_dim())
        .map(|k| {
            let d = qa[k] - qb[k];
            if k >= geom.dim() {
                wrap_pi(d).abs()
            } else {
                d.abs()
            }
        })
        .fold(0.0, f64::max)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;
    use std::f64::consts::{FRAC_PI_2, LN_2};

    const E2: Geometry = Geometry::Euclidean2;
    const E3: Geometry = Geometry::Euclidean3;
    const H: Geometry = Geometry::HyperbolicHalfPlane;

    #[test]
    fn momentum_examples() {
        let p = momentum_of(E2, 1.0, &ContactState::planar(0.0, 0.0, FRAC_PI_2)).0;
        assert_abs_diff_eq!(p, Vec3::new(0.0, 1.0, 0.0), epsilon = 1e-15);
        let p = momentum_of(H, 1.0, &ContactState::planar(0.0, 2.0, FRAC_PI_2)).0;
        assert_abs_diff_eq!(p, Vec3::new(0.0, 0.5, 0.0), epsilon = 1e-15);
        let p = momentum_of(E3, 1.0, &ContactState::spatial(0.0, 0.0, 0.0, 0.0, 0.0)).0;
        assert_abs_diff_eq!(p, Vec3::new(0.0, 0.0, 1.0), epsilon = 1e-15);
    }

    #[test]
    fn liouville_matches_printed_charts() {
        // contact angle θ = 0 at n = 1: λ = −sin θ dx + √(cos²θ + n² − 1) dy
        for theta in [0.0, 0.4, -1.1, 1.5] {
            let n: f64 = 1.0;
            let s = ContactState::planar(0.2, 0.3, alpha_from_contact_angle(theta));
            let l = liouville_form(E2, n, &s).0;
            let printed = Vec3::new(
                -theta.sin(),
                (theta.cos().powi(2) + n * n - 1.0).sqrt(),
                0.0,
            );
            assert_abs_diff_eq!(l, printed, epsilon = 1e-15);
        }
        let l = liouville_form(H, 1.0, &ContactState::planar(0.0, 1.0, 0.0)).0;
        assert_abs_diff_eq!(l, Vec3::new(-1.0, 0.0, 0.0), epsilon = 1e-15);
        let l = liouville_form(
            E3,
            2.0,
            &ContactState::spatial(0.0, 0.0, 0.0, FRAC_PI_2, 0.0),
        )
        .0;
        assert_abs_diff_eq!(l, Vec3::new(2.0, 0.0, 0.0), epsilon = 1e-15);
    }

    #[test]
    fn reeb_examples() {
        let v = reeb_field(H, 1.0, &ContactState::planar(0.0, 1.0, 0.0));
        assert_abs_diff_eq!(v.base_rate, Vec3::new(-1.0, 0.0, 0.0), epsilon = 1e-15);
        assert_abs_diff_eq!(v.fiber_rate[0], -1.0);

        let v = reeb_field(E2, 2.0, &ContactState::planar(0.0, 0.0, FRAC_PI_2));
        assert_abs_diff_eq!(v.base_rate, Vec3::new(0.0, 0.5, 0.0), epsilon = 1e-15);
        assert_eq!(v.fiber_rate, [0.0, 0.0]);

        let v = reeb_field(E3, 1.0, &ContactState::spatial(0.0, 0.0, 0.0, 0.0, 0.0));
        assert_abs_diff_eq!(v.base_rate, Vec3::new(0.0, 0.0, 1.0), epsilon = 1e-15);
    }

    #[test]
    fn reeb_matches_printed_field_in_vacuum() {
        // ξ = (−sin θ ∂x + √(cos²θ + n² − 1) ∂y)/n² on the printed chart, n = 1
        for theta in [-1.2, -0.3, 0.0, 0.9, 1.4] {
            let s = ContactState::planar(0.0, 0.0, alpha_from_contact_angle(theta));
            let v = reeb_field(E2, 1.0, &s).base_rate;
            assert_abs_diff_eq!(
                v,
                Vec3::new(-theta.sin(), theta.cos(), 0.0),
                epsilon = 1e-15
            );
        }
        // hyperbolic: ξ = (−y cos φ ∂x + y sin φ ∂y − cos φ ∂φ)/n
        let (n, y, phi) = (1.33, 0.7, 2.2);
        let v = reeb_field(H, n, &ContactState::planar(0.1, y, phi));
        assert_abs_diff_eq!(
            v.base_rate,
            Vec3::new(-y * phi.cos() / n, y * phi.sin() / n, 0.0),
            epsilon = 1e-15
        );
        assert_abs_diff_eq!(v.fiber_rate[0], -phi.cos() / n, epsilon = 1e-15);
    }

    #[test]
    fn closed_flow_examples() {
        let s = ContactState::planar(0.0, 0.0, alpha_from_contact_angle(FRAC_PI_2));
        let out = closed_flow(E2, 1.0, &s, 2.0).unwrap();
        assert_abs_diff_eq!(out.base, Vec3::new(-2.0, 0.0, 0.0), epsilon = 1e-15);
        assert_abs_diff_eq!(
            contact_angle_from_alpha(out.angle()),
            FRAC_PI_2,
            epsilon = 1e-15
        );

        let out = closed_flow(H, 1.0, &ContactState::planar(0.0, 1.0, FRAC_PI_2), LN_2).unwrap();
        assert_abs_diff_eq!(out.base, Vec3::new(0.0, 2.0, 0.0), epsilon = 1e-14);
        assert_abs_diff_eq!(out.angle(), FRAC_PI_2, epsilon = 1e-14);

        for geom in Geometry::ALL {
            let s = ContactState {
                base: Vec3::new(0.3, 1.2, 0.0),
                fiber: [0.8, 0.0],
            };
            assert_eq!(closed_flow(geom, 1.33, &s, 0.0).unwrap(), s);
        }
    }

    #[test]
    fn printed_euclidean_flow_agrees_in_vacuum() {
        // x − t sin θ, y + t cos θ
        let (x, y, theta, t) = (0.4, -1.0, 2.1, 1.7);
        let s = ContactState::planar(x, y, alpha_from_contact_angle(theta));
        let out = closed_flow(E2, 1.0, &s, t).unwrap();
        assert_abs_diff_eq!(out.base.x, x - t * theta.sin(), epsilon = 1e-14);
        assert_abs_diff_eq!(out.base.y, y + t * theta.cos(), epsilon = 1e-14);
    }

    #[test]
    fn printed_hyperbolic_flow_agrees_modulo_branch() {
        // the printed φ uses arctan, which is only defined modulo π
        let (x, y, phi, n, t): (f64, f64, f64, f64, f64) = (0.3, 1.4, 0.6, 1.33, 0.9);
        let (s, c, e) = (phi.sin(), phi.cos(), (2.0 * t / n).exp());
        let d = (s - 1.0) * e - s - 1.0;
        let px = ((x * s + y * c - x) * e - x * s - y * c - x) / d;
        let py = -2.0 * y * (t / n).exp() / d;
        let pphi = (-((-s + 1.0) * e - s - 1.0) / (2.0 * (t / n).exp() * c)).atan();
        let out = closed_flow(H, n, &ContactState::planar(x, y, phi), t).unwrap();
        assert_abs_diff_eq!(out.base.x, px, epsilon = 1e-14);
        assert_abs_diff_eq!(out.base.y, py, epsilon = 1e-14);
        assert_abs_diff_eq!(wrap_pi(2.0 * (out.angle() - pphi)), 0.0, epsilon = 1e-13);
    }

    #[test]
    fn hyperbolic_flow_overflow_is_reported() {
        let s = ContactState::planar(0.0, 1.0, 0.3);
        assert!(matches!(
            closed_flow(H, 1.0, &s, 400.0),
            Err(Error::FlowOverflow { .. })
        ));
    }

    #[test]
    fn flow_derivative_converges_to_field() {
        let s = ContactState::planar(0.2, 0.9, 2.5);
        for (geom, n) in [(H, 1.33), (E2, 2.0)] {
            let xi = reeb_field(geom, n, &s).coords(geom);
            let err = |h: f64| {
                let a = closed_flow(geom, n, &s, h).unwrap().coords(geom);
                let b = closed_flow(geom, n, &s, -h).unwrap().coords(geom);
                (0..geom.state_dim())
                    .map(|k| {
                        let d = if k >= geom.dim() {
                            wrap_pi(a[k] - b[k])
                        } else {
                            a[k] - b[k]
                        };
                        (d / (2.0 * h) - xi[k]).abs()
                    })
                    .fold(0.0, f64::max)
            };
            let (e1, e2) = (err(1e-3), err(1e-4));
            if geom == H {
                // second order: a tenfold smaller step gains about two digits
                assert!(e2 < e1 / 50.0, "{e1} {e2}");
            }
            assert!(e2 < 1e-8);
        }
    }

    #[test]
    fn semicircle_center_and_radius() {
        let s = ContactState::planar(0.5, 1.0, 0.7);
        let (c, r) = geodesic_circle(&s).unwrap();
        for t in [-1.5, -0.2, 0.4, 2.0] {
            let p = closed_flow(H, 1.0, &s, t).unwrap().base;
            assert_abs_diff_eq!((p.x - c).powi(2) + p.y * p.y, r * r, epsilon = 1e-12);
        }
        assert!(geodesic_circle(&ContactState::planar(0.0, 1.0, FRAC_PI_2)).is_none());
    }

    #[test]
    fn verifiers_on_fixed_states() {
        let cases = [
            (E2, 1.0, ContactState::planar(0.3, -0.2, 1.0)),
            (H, 1.33, ContactState::planar(0.3, 0.8, 4.0)),
            (E3, 2.0, ContactState::spatial(1.0, 2.0, 3.0, 1.0, 5.0)),
        ];
        for (geom, n, s) in cases {
            let r = verify_reeb(geom, n, &s, DEFAULT_FD_STEP);
            assert!(
                r.normalization <= 1e-9 && r.kernel <= 1e-6,
                "{geom:?} {r:?}"
            );
            let strict = verify_strict_contact(geom, n, &s, 1.7, DEFAULT_FD_STEP).unwrap();
            assert!(strict <= 1e-6, "{geom:?} {strict}");
            let identity = verify_strict_contact(geom, n, &s, 0.0, DEFAULT_FD_STEP).unwrap();
            assert!(identity <= 1e-12, "{geom:?} {identity}");
        }
    }

    #[test]
    fn perturbed_field_fails_kernel_check() {
        let s = ContactState::planar(0.0, 0.0, 0.3);
        let r = verify_reeb_with(E2, 1.0, &s, DEFAULT_FD_STEP, |st| {
            let mut v = reeb_field(E2, 1.0, st);
            v.fiber_rate[0] += 1e-3;
            v
        });
        assert!(r.normalization <= 1e-9);
        assert!(r.kernel > 1e-4);
    }

    #[test]
    fn direction_round_trip() {
        for geom in Geometry::ALL {
            let s = ContactState {
                base: Vec3::new(0.0, 1.0, 0.0),
                fiber: [1.1, 2.0],
            }
            .normalized(geom);
            let d = unit_direction(geom, &s);
            let back = ContactState {
                base: s.base,
                fiber: fiber_from_direction(geom, &(d * 3.0)),
            };
            assert!(state_distance(geom, &s, &back) < 1e-14);
            let r = s.reversed(geom);
            assert_abs_diff_eq!(unit_direction(geom, &r), -d, epsilon = 1e-15);
        }
    }

    #[test]
    fn spatial_normalization_reflects_polar_angle() {
        let s = ContactState::spatial(0.0, 0.0, 0.0, -0.5, 0.0);
        assert_abs_diff_eq!(s.fiber[0], 0.5, epsilon = 1e-15);
        assert_abs_diff_eq!(s.fiber[1], PI, epsilon = 1e-15);
    }
}
