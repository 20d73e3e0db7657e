//! Seeded invariant battery over random contact states.

use std::f64::consts::{PI, TAU};
use std::fmt;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::contact::{
    closed_flow, cosphere_norm, geodesic_circle, reeb_field, reeb_speed_squared, state_distance,
    verify_reeb_with, verify_strict_contact, ContactState, StateVelocity, DEFAULT_FD_STEP,
};
use crate::geometry::Geometry;

/// Refractive indices exercised by [`run_checks`].
pub const CHECK_INDICES: [f64; 3] = [1.0, 1.33, 2.0];

pub const REEB_NORMALIZATION_TOL: f64 = 1e-9;
pub const REEB_KERNEL_TOL: f64 = 1e-6;
pub const COSPHERE_TOL: f64 = 1e-12;
pub const G_SPEED_TOL: f64 = 1e-10;
pub const COORDINATE_SPEED_TOL: f64 = 1e-12;
pub const STRICT_CONTACT_TOL: f64 = 1e-6;
pub const GROUP_LAW_TOL: f64 = 1e-9;
pub const SEMICIRCLE_TOL: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq)]
pub struct CheckRecord {
    pub name: &'static str,
    pub geometry: Geometry,
    pub n: f64,
    pub samples: usize,
    pub max_residual: f64,
    pub tolerance: f64,
    pub pass: bool,
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct VerificationReport {
    pub records: Vec<CheckRecord>,
}

impl VerificationReport {
    pub fn all_pass(&self) -> bool {
        self.records.iter().all(|r| r.pass)
    }

    pub fn failures(&self) -> impl Iterator<Item = &CheckRecord> {
        self.records.iter().filter(|r| !r.pass)
    }

    pub fn find(&self, name: &str, geometry: Geometry, n: f64) -> Option<&CheckRecord> {
        self.records
            .iter()
            .find(|r| r.name == name && r.geometry == geometry && r.n == n)
    }

    fn push(
        &mut self,
        name: &'static str,
        geometry: Geometry,
        n: f64,
        residuals: &[f64],
        tolerance: f64,
    ) {
        let max_residual = residuals.iter().copied().fold(0.0, f64::max);
        let finite = residuals.iter().all(|r| r.is_finite());
        self.records.push(CheckRecord {
            name,
            geometry,
            n,
            samples: residuals.len(),
            max_residual,
            tolerance,
            pass: finite && max_residual <= tolerance,
        });
    }
}

impl fmt::Display for CheckRecord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{} {:<20} {:<22} n={:<4} samples={:<5} max={:.3e} tol={:.0e}",
            if self.pass { "PASS" } else { "FAIL" },
            self.name,
            self.geometry.name(),
            self.n,
            self.samples,
            self.max_residual,
            self.tolerance
        )
    }
}

impl fmt::Display for VerificationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for r in &self.records {
            writeln!(f, "{r}")?;
        }
        let failed = self.failures().count();
        write!(f, "{} checks, {} failed", self.records.len(), failed)
    }
}

/// A random state in the sampling box used by the battery.
pub fn random_state<R: Rng>(geom: Geometry, rng: &mut R) -> ContactState {
    match geom {
        Geometry::Euclidean2 => ContactState::planar(
            rng.gen_range(-5.0..5.0),
            rng.gen_range(-5.0..5.0),
            rng.gen_range(0.0..TAU),
        ),
        Geometry::Euclidean3 => ContactState::spatial(
            rng.gen_range(-5.0..5.0),
            rng.gen_range(-5.0..5.0),
            rng.gen_range(-5.0..5.0),
            rng.gen_range(0.05..PI - 0.05),
            rng.gen_range(0.0..TAU),
        ),
        Geometry::HyperbolicHalfPlane => ContactState::planar(
            rng.gen_range(-3.0..3.0),
            rng.gen_range(0.5..3.0),
            rng.gen_range(0.0..TAU),
        ),
    }
}

/// Runs every check over `samples` seeded states for each geometry and
/// index in [`CHECK_INDICES`].
pub fn run_checks(seed: u64, samples: usize) -> VerificationReport {
    run_checks_with_bias(seed, samples, 0.0)
}

/// [`run_checks`] with `fiber_bias` added to every fiber rate of the Reeb
/// field under test. A nonzero bias keeps `λ(ξ) = 1` but breaks
/// `ι_ξ dλ = 0`.
pub fn run_checks_with_bias(seed: u64, samples: usize, fiber_bias: f64) -> VerificationReport {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut report = VerificationReport::default();
    for geom in Geometry::ALL {
        for n in CHECK_INDICES {
            let field = |s: &ContactState| {
                let v = reeb_field(geom, n, s);
                let mut fiber_rate = v.fiber_rate;
                for r in fiber_rate.iter_mut().take(geom.fiber_dim()) {
                    *r += fiber_bias;
                }
                StateVelocity {
                    base_rate: v.base_rate,
                    fiber_rate,
                }
            };
            let mut normalization = Vec::with_capacity(samples);
            let mut kernel = Vec::with_capacity(samples);
            let mut cosphere = Vec::with_capacity(samples);
            let mut speed = Vec::with_capacity(samples);
            let mut coord_speed = Vec::new();
            let mut strict = Vec::with_capacity(samples);
            let mut group = Vec::with_capacity(samples);
            let mut semicircle = Vec::new();
            for _ in 0..samples {
                let s = random_state(geom, &mut rng);
                let t1: f64 = rng.gen_range(-2.0..2.0);
                let t2: f64 = rng.gen_range(-2.0..2.0);

                let r = verify_reeb_with(geom, n, &s, DEFAULT_FD_STEP, field);
                normalization.push(r.normalization);
                kernel.push(r.kernel);
                cosphere.push((cosphere_norm(geom, n, &s) - 1.0).abs());
                speed.push((reeb_speed_squared(geom, n, &s) - 1.0).abs());
                if geom != Geometry::HyperbolicHalfPlane {
                    coord_speed.push((field(&s).base_rate.norm() - 1.0 / n).abs());
                }
                strict.push(
                    verify_strict_contact(geom, n, &s, t1, DEFAULT_FD_STEP)
                        .unwrap_or(f64::INFINITY),
                );
                group.push(group_law_residual(geom, n, &s, t1, t2));
                if geom == Geometry::HyperbolicHalfPlane {
                    semicircle.push(semicircle_residual(n, &s, t1));
                }
            }
            report.push(
                "reeb-normalization",
                geom,
                n,
                &normalization,
                REEB_NORMALIZATION_TOL,
            );
            report.push("reeb-kernel", geom, n, &kernel, REEB_KERNEL_TOL);
            report.push("cosphere", geom, n, &cosphere, COSPHERE_TOL);
            report.push("g-unit-speed", geom, n, &speed, G_SPEED_TOL);
            if !coord_speed.is_empty() {
                report.push(
                    "coordinate-speed",
                    geom,
                    n,
                    &coord_speed,
                    COORDINATE_SPEED_TOL,
                );
            }
            report.push("strict-contact", geom, n, &strict, STRICT_CONTACT_TOL);
            report.push("group-law", geom, n, &group, GROUP_LAW_TOL);
            if !semicircle.is_empty() {
                report.push("semicircle", geom, n, &semicircle, SEMICIRCLE_TOL);
            }
        }
    }
    report
}

/// `φ_{t₁+t₂}` against `φ_{t₂} ∘ φ_{t₁}`, relative to the size of the image.
fn group_law_residual(geom: Geometry, n: f64, s: &ContactState, t1: f64, t2: f64) -> f64 {
    let direct = closed_flow(geom, n, s, t1 + t2);
    let composed = closed_flow(geom, n, s, t1).and_then(|m| closed_flow(geom, n, &m, t2));
    match (direct, composed) {
        (Ok(a), Ok(b)) => state_distance(geom, &a, &b) / a.base.norm().max(1.0),
        _ => f64::INFINITY,
    }
}

/// Relative distance of `φ_t(s)` from the geodesic semicircle through `s`.
/// States with `|cos φ| < 0.1` lie on near-vertical geodesics whose circles
/// are too large to test in absolute terms, so they score zero.
fn semicircle_residual(n: f64, s: &ContactState, t: f64) -> f64 {
    if s.fiber[0].cos().abs() < 0.1 {
        return 0.0;
    }
    let Some((center, radius)) = geodesic_circle(s) else {
        return 0.0;
    };
    match closed_flow(Geometry::HyperbolicHalfPlane, n, s, t) {
        Ok(m) => ((m.base.x - center).hypot(m.base.y) - radius.abs()).abs() / radius.abs(),
        Err(_) => f64::INFINITY,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_battery_passes() {
        let report = run_checks(0, 50);
        assert!(report.all_pass(), "{report}");
        assert_eq!(report.records.len(), 3 * (7 + 7 + 7));
    }

    #[test]
    fn deterministic_for_a_seed() {
        assert_eq!(run_checks(7, 20), run_checks(7, 20));
        assert_ne!(run_checks(7, 20), run_checks(8, 20));
    }

    #[test]
    fn fiber_bias_fails_only_the_kernel() {
        let report = run_checks_with_bias(0, 20, 1e-3);
        assert!(report.failures().all(|r| r.name == "reeb-kernel"));
        for geom in Geometry::ALL {
            assert!(!report.find("reeb-kernel", geom, 1.0).unwrap().pass);
            assert!(report.find("reeb-normalization", geom, 1.0).unwrap().pass);
        }
    }
}
