//! Chart geometries, body metrics and piecewise-constant media.
//!
//! Every geometry is conformally flat in its chart: the body metric is
//! `c(p)² · δ` with `c = n` for the Euclidean kinds and `c = n / y` on the
//! upper half plane. Base points and tangent vectors are stored as
//! [`Vec3`]; two-dimensional charts leave the `z` component at zero.

use nalgebra::{DMatrix, Vector3};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub type Vec3 = Vector3<f64>;

/// Chart coordinates of a point of the body manifold.
pub type BasePoint = Vec3;

/// Distance below which a point counts as lying on a region boundary.
pub const BOUNDARY_TOLERANCE: f64 = 1e-8;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Geometry {
    Euclidean2,
    Euclidean3,
    HyperbolicHalfPlane,
}

impl Geometry {
    pub const ALL: [Geometry; 3] = [
        Geometry::Euclidean2,
        Geometry::Euclidean3,
        Geometry::HyperbolicHalfPlane,
    ];

    pub fn dim(self) -> usize {
        match self {
            Geometry::Euclidean3 => 3,
            _ => 2,
        }
    }

    /// Number of fiber angles of a contact state.
    pub fn fiber_dim(self) -> usize {
        self.dim() - 1
    }

    /// Dimension of the space of contact elements (`2·dim − 1`).
    pub fn state_dim(self) -> usize {
        self.dim() + self.fiber_dim()
    }

    pub fn name(self) -> &'static str {
        match self {
            Geometry::Euclidean2 => "euclidean2",
            Geometry::Euclidean3 => "euclidean3",
            Geometry::HyperbolicHalfPlane => "hyperbolic-half-plane",
        }
    }

    /// Conformal factor `c` of the body metric `g = c² δ` at `p`.
    pub fn conformal_factor(self, n: f64, p: &BasePoint) -> f64 {
        match self {
            Geometry::HyperbolicHalfPlane => n / p.y,
            _ => n,
        }
    }

    /// Checks the [`BasePoint`] invariants for this chart.
    pub fn validate_point(self, p: &BasePoint) -> Result<()> {
        let dim = self.dim();
        if p.iter().take(dim).any(|c| !c.is_finite()) {
            return Err(Error::Domain(format!("non-finite coordinates {p:?}")));
        }
        if dim == 2 && p.z != 0.0 {
            return Err(Error::Domain(format!("planar chart point has z = {}", p.z)));
        }
        if self == Geometry::HyperbolicHalfPlane && p.y <= 0.0 {
            return Err(Error::Domain(format!(
                "half-plane point requires y > 0, got y = {}",
                p.y
            )));
        }
        Ok(())
    }
}

fn check_index(n: f64) -> Result<()> {
    if n > 0.0 && n.is_finite() {
        Ok(())
    } else {
        Err(Error::Domain(format!(
            "refractive index must be > 0, got {n}"
        )))
    }
}

/// Body metric `g` at `p` as a `dim × dim` matrix.
pub fn body_metric_at(geom: Geometry, n: f64, p: &BasePoint) -> Result<DMatrix<f64>> {
    check_index(n)?;
    geom.validate_point(p)?;
    let c = geom.conformal_factor(n, p);
    Ok(DMatrix::identity(geom.dim(), geom.dim()) * (c * c))
}

/// `g(v, w)` at `p`.
pub fn g_inner(geom: Geometry, n: f64, p: &BasePoint, v: &[f64], w: &[f64]) -> Result<f64> {
    let dim = geom.dim();
    for len in [v.len(), w.len()] {
        if len != dim {
            return Err(Error::DimensionMismatch {
                expected: dim,
                got: len,
            });
        }
    }
    let c = geom.conformal_factor(n, p);
    let dot: f64 = v.iter().zip(w).map(|(a, b)| a * b).sum();
    Ok(c * c * dot)
}

/// [`g_inner`] on [`Vec3`] tangents, without dimension checks.
#[inline]
pub fn g_dot(geom: Geometry, n: f64, p: &BasePoint, v: &Vec3, w: &Vec3) -> f64 {
    let c = geom.conformal_factor(n, p);
    c * c * v.dot(w)
}

#[inline]
pub fn g_norm(geom: Geometry, n: f64, p: &BasePoint, v: &Vec3) -> f64 {
    g_dot(geom, n, p, v, v).sqrt()
}

/// Cayley transform `w = (z − i)/(z + i)` from the upper half plane to the
/// Poincaré disc, with `z = x + iy`.
pub fn to_poincare_disc(p: &BasePoint) -> Result<[f64; 2]> {
    if !(p.y >= 0.0) || !p.x.is_finite() || !p.y.is_finite() {
        return Err(Error::Domain(format!(
            "Cayley transform needs y >= 0, got ({}, {})",
            p.x, p.y
        )));
    }
    let z = Complex64::new(p.x, p.y);
    let i = Complex64::i();
    let w = (z - i) / (z + i);
    Ok([w.re, w.im])
}

#[derive(Debug, Clone, PartialEq)]
pub enum Shape {
    /// The closed half-space `{p : normal · p ≥ offset}`.
    HalfSpace { normal: Vec3, offset: f64 },
    /// The closed slab `{p : lo ≤ p[axis] ≤ hi}`.
    Slab { axis: usize, lo: f64, hi: f64 },
}

#[derive(Debug, Clone, PartialEq)]
pub struct Region {
    pub shape: Shape,
    pub index: f64,
}

/// Nearest boundary face of a region: its distance from the query point and
/// the unit outward normal.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Face {
    pub distance: f64,
    pub outward: Vec3,
    /// The normal stored with the shape (half-space normal, `+axis` for slabs).
    pub stored: Vec3,
}

impl Region {
    pub fn half_space(normal: Vec3, offset: f64, index: f64) -> Self {
        Region {
            shape: Shape::HalfSpace { normal, offset },
            index,
        }
    }

    pub fn slab(axis: usize, lo: f64, hi: f64, index: f64) -> Self {
        Region {
            shape: Shape::Slab { axis, lo, hi },
            index,
        }
    }

    pub fn validate(&self, geom: Geometry) -> Result<()> {
        check_index(self.index)?;
        match &self.shape {
            Shape::HalfSpace { normal, offset } => {
                if normal.iter().skip(geom.dim()).any(|&c| c != 0.0) {
                    return Err(Error::DimensionMismatch {
                        expected: geom.dim(),
                        got: 3,
                    });
                }
                if !(normal.norm() > 0.0) || !offset.is_finite() {
                    return Err(Error::Domain("half-space normal must be nonzero".into()));
                }
            }
            Shape::Slab { axis, lo, hi } => {
                if *axis >= geom.dim() {
                    return Err(Error::Domain(format!(
                        "slab axis {axis} out of range for {}",
                        geom.name()
                    )));
                }
                if !(lo < hi) || !lo.is_finite() || !hi.is_finite() {
                    return Err(Error::Domain(format!("slab bounds {lo} < {hi} violated")));
                }
            }
        }
        Ok(())
    }

    pub fn contains(&self, p: &BasePoint) -> bool {
        match &self.shape {
            Shape::HalfSpace { normal, offset } => normal.dot(p) >= *offset,
            Shape::Slab { axis, lo, hi } => {
                let c = p[*axis];
                *lo <= c && c <= *hi
            }
        }
    }

    pub fn nearest_face(&self, p: &BasePoint) -> Face {
        match &self.shape {
            Shape::HalfSpace { normal, offset } => {
                let len = normal.norm();
                let unit = normal / len;
                Face {
                    distance: (unit.dot(p) - offset / len).abs(),
                    outward: -unit,
                    stored: unit,
                }
            }
            Shape::Slab { axis, lo, hi } => {
                let mut e = Vec3::zeros();
                e[*axis] = 1.0;
                let (d_lo, d_hi) = ((p[*axis] - lo).abs(), (p[*axis] - hi).abs());
                if d_lo <= d_hi {
                    Face {
                        distance: d_lo,
                        outward: -e,
                        stored: e,
                    }
                } else {
                    Face {
                        distance: d_hi,
                        outward: e,
                        stored: e,
                    }
                }
            }
        }
    }
}

/// g-unit normal of `region`'s boundary at `p`.
///
/// `n_at_p` selects the metric used for normalization and `n_other` is the
/// index on the far side of the boundary. The normal points from the
/// higher-index side to the lower one, or along the stored shape normal when
/// both indices agree.
pub fn interface_normal(
    geom: Geometry,
    n_at_p: f64,
    region: &Region,
    n_other: f64,
    p: &BasePoint,
) -> Result<Vec3> {
    check_index(n_at_p)?;
    geom.validate_point(p)?;
    let face = region.nearest_face(p);
    if face.distance > BOUNDARY_TOLERANCE {
        return Err(Error::NotOnBoundary {
            distance: face.distance,
        });
    }
    let dir = if region.index > n_other {
        face.outward
    } else if region.index < n_other {
        -face.outward
    } else {
        face.stored
    };
    Ok(dir / geom.conformal_factor(n_at_p, p))
}

/// A piecewise-constant refractive layout over one chart.
///
/// Regions are tested in declaration order and the first match wins; points
/// outside every region see `default_n`.
#[derive(Debug, Clone, PartialEq)]
pub struct Medium {
    pub geometry: Geometry,
    pub default_n: f64,
    pub regions: Vec<Region>,
}

impl Medium {
    pub fn homogeneous(geometry: Geometry, n: f64) -> Self {
        Medium {
            geometry,
            default_n: n,
            regions: Vec::new(),
        }
    }

    pub fn with_region(mut self, region: Region) -> Self {
        self.regions.push(region);
        self
    }

    pub fn validate(&self) -> Result<()> {
        check_index(self.default_n)?;
        self.regions
            .iter()
            .try_for_each(|r| r.validate(self.geometry))
    }

    /// Index of the first region containing `p`, `None` for the background.
    pub fn region_at(&self, p: &BasePoint) -> Option<usize> {
        self.regions.iter().position(|r| r.contains(p))
    }

    pub fn index_of(&self, region: Option<usize>) -> f64 {
        region.map_or(self.default_n, |i| self.regions[i].index)
    }

    pub fn index_at(&self, p: &BasePoint) -> f64 {
        self.index_of(self.region_at(p))
    }

    pub fn is_homogeneous(&self) -> bool {
        self.regions.is_empty()
    }
}
