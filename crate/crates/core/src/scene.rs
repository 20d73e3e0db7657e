//! Scene documents.
//!
//! A scene is a versioned JSON document describing the medium, the source
//! fan and the time grid. See `docs/scene-schema.md` for the schema.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::{Geometry, Medium, Region, Vec3};
use crate::ray::{TirMode, TraceOptions, DEFAULT_DT};
use crate::wavefront::Fan;

pub const SCENE_VERSION: u32 = 1;

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Projection {
    #[default]
    Chart,
    PoincareDisc,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", deny_unknown_fields)]
pub enum ShapeSpec {
    HalfSpace { normal: Vec<f64>, offset: f64 },
    Slab { axis: usize, lo: f64, hi: f64 },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RegionSpec {
    pub shape: ShapeSpec,
    pub index: f64,
}

/// Fan description: `count`/`angle_from`/`angle_to` in planar charts,
/// `polar_count`/`azimuth_count` in three dimensions.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FanSpec {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub count: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub angle_from: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub angle_to: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub polar_count: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub azimuth_count: Option<usize>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SourceSpec {
    pub position: Vec<f64>,
    pub fan: FanSpec,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TimeSpec {
    pub t_max: f64,
    #[serde(default = "default_dt")]
    pub dt: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub front_times: Option<Vec<f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub front_every: Option<f64>,
}

fn default_dt() -> f64 {
    DEFAULT_DT
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SceneFile {
    pub version: u32,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub description: Option<String>,
    pub geometry: Geometry,
    pub default_n: f64,
    #[serde(default)]
    pub regions: Vec<RegionSpec>,
    pub source: SourceSpec,
    pub time: TimeSpec,
    #[serde(default)]
    pub tir_mode: TirMode,
    #[serde(default)]
    pub projection: Projection,
}

fn finite(path: &str, v: f64) -> Result<()> {
    if v.is_finite() {
        Ok(())
    } else {
        Err(Error::schema(path, "must be finite"))
    }
}

fn vec3(path: &str, v: &[f64], dim: usize) -> Result<Vec3> {
    if v.len() != dim {
        return Err(Error::schema(
            path,
            format!("expected {dim} components, got {}", v.len()),
        ));
    }
    for (i, &c) in v.iter().enumerate() {
        finite(&format!("{path}[{i}]"), c)?;
    }
    let mut out = Vec3::zeros();
    out.as_mut_slice()[..dim].copy_from_slice(v);
    Ok(out)
}

impl SceneFile {
    /// Checks every invariant not expressed by the serde types.
    pub fn validate(&self) -> Result<()> {
        if self.version != SCENE_VERSION {
            return Err(Error::schema(
                "version",
                format!(
                    "unsupported version {}, expected {SCENE_VERSION}",
                    self.version
                ),
            ));
        }
        let geom = self.geometry;
        if !(self.default_n > 0.0) || !self.default_n.is_finite() {
            return Err(Error::schema("default_n", "must be a finite index > 0"));
        }
        for (i, r) in self.regions.iter().enumerate() {
            self.region(i, r)?;
        }
        self.fan()?;
        let t = &self.time;
        if !(t.t_max > 0.0) || !t.t_max.is_finite() {
            return Err(Error::schema("time.t_max", "must be finite and > 0"));
        }
        if !(t.dt > 0.0) || !t.dt.is_finite() {
            return Err(Error::schema("time.dt", "must be finite and > 0"));
        }
        if t.front_times.is_some() && t.front_every.is_some() {
            return Err(Error::schema(
                "time",
                "give either front_times or front_every, not both",
            ));
        }
        if let Some(times) = &t.front_times {
            for (i, &ft) in times.iter().enumerate() {
                if !(0.0..=t.t_max).contains(&ft) {
                    return Err(Error::schema(
                        format!("time.front_times[{i}]"),
                        format!("must lie in [0, {}]", t.t_max),
                    ));
                }
            }
        }
        if let Some(every) = t.front_every {
            if !(every > 0.0) || !every.is_finite() {
                return Err(Error::schema("time.front_every", "must be finite and > 0"));
            }
        }
        if self.projection == Projection::PoincareDisc && geom != Geometry::HyperbolicHalfPlane {
            return Err(Error::schema(
                "projection",
                "poincare-disc requires the hyperbolic-half-plane geometry",
            ));
        }
        Ok(())
    }

    fn region(&self, i: usize, r: &RegionSpec) -> Result<Region> {
        let dim = self.geometry.dim();
        let path = format!("regions[{i}]");
        if !(r.index > 0.0) || !r.index.is_finite() {
            return Err(Error::schema(
                format!("{path}.index"),
                "must be a finite index > 0",
            ));
        }
        let region = match &r.shape {
            ShapeSpec::HalfSpace { normal, offset } => {
                let normal = vec3(&format!("{path}.shape.half_space.normal"), normal, dim)?;
                finite(&format!("{path}.shape.half_space.offset"), *offset)?;
                if normal.norm() == 0.0 {
                    return Err(Error::schema(
                        format!("{path}.shape.half_space.normal"),
                        "must be nonzero",
                    ));
                }
                Region::half_space(normal, *offset, r.index)
            }
            ShapeSpec::Slab { axis, lo, hi } => {
                if *axis >= dim {
                    return Err(Error::schema(
                        format!("{path}.shape.slab.axis"),
                        format!("must be < {dim}"),
                    ));
                }
                finite(&format!("{path}.shape.slab.lo"), *lo)?;
                finite(&format!("{path}.shape.slab.hi"), *hi)?;
                if !(lo < hi) {
                    return Err(Error::schema(
                        format!("{path}.shape.slab"),
                        "lo must be < hi",
                    ));
                }
                Region::slab(*axis, *lo, *hi, r.index)
            }
        };
        Ok(region)
    }

    pub fn medium(&self) -> Result<Medium> {
        Ok(Medium {
            geometry: self.geometry,
            default_n: self.default_n,
            regions: self
                .regions
                .iter()
                .enumerate()
                .map(|(i, r)| self.region(i, r))
                .collect::<Result<_>>()?,
        })
    }

    pub fn fan(&self) -> Result<Fan> {
        let geom = self.geometry;
        let source = vec3("source.position", &self.source.position, geom.dim())?;
        if geom == Geometry::HyperbolicHalfPlane && source.y <= 0.0 {
            return Err(Error::schema(
                "source.position",
                "hyperbolic source needs y > 0",
            ));
        }
        let f = &self.source.fan;
        let fan = if geom.dim() == 2 {
            if f.polar_count.is_some() || f.azimuth_count.is_some() {
                return Err(Error::schema(
                    "source.fan",
                    "polar_count/azimuth_count are only valid in euclidean3",
                ));
            }
            let count = f
                .count
                .ok_or_else(|| Error::schema("source.fan.count", "missing field"))?;
            if count < 3 {
                return Err(Error::schema(
                    "source.fan.count",
                    format!("at least 3 rays required, got {count}"),
                ));
            }
            let from = f.angle_from.unwrap_or(0.0);
            let to = f.angle_to.unwrap_or(from + std::f64::consts::TAU);
            finite("source.fan.angle_from", from)?;
            finite("source.fan.angle_to", to)?;
            if !(from < to) || to - from > std::f64::consts::TAU + 1e-12 {
                return Err(Error::schema(
                    "source.fan.angle_to",
                    "angles must satisfy angle_from < angle_to <= angle_from + 2π",
                ));
            }
            Fan::planar(source, count, from, to)
        } else {
            if f.count.is_some() || f.angle_from.is_some() || f.angle_to.is_some() {
                return Err(Error::schema(
                    "source.fan",
                    "euclidean3 fans use polar_count and azimuth_count",
                ));
            }
            let polar = f
                .polar_count
                .ok_or_else(|| Error::schema("source.fan.polar_count", "missing field"))?;
            let azimuth = f
                .azimuth_count
                .ok_or_else(|| Error::schema("source.fan.azimuth_count", "missing field"))?;
            if polar == 0 || azimuth == 0 || polar * azimuth < 3 {
                return Err(Error::schema(
                    "source.fan.count",
                    format!("at least 3 rays required, got {}", polar * azimuth),
                ));
            }
            Fan::spherical(source, polar, azimuth)
        };
        Ok(fan)
    }

    pub fn trace_options(&self) -> TraceOptions {
        TraceOptions {
            t_max: self.time.t_max,
            dt: self.time.dt,
            tir_mode: self.tir_mode,
        }
    }

    /// Explicit front times, or the multiples of `front_every` up to `t_max`.
    pub fn front_times(&self) -> Vec<f64> {
        let t = &self.time;
        match (&t.front_times, t.front_every) {
            (Some(times), _) => times.clone(),
            (None, Some(every)) => (1..)
                .map(|k| k as f64 * every)
                .take_while(|&ft| ft <= t.t_max * (1.0 + 1e-12))
                .map(|ft| ft.min(t.t_max))
                .collect(),
            (None, None) => Vec::new(),
        }
    }
}

/// Parses and validates a scene document.
pub fn parse_scene(text: &[u8]) -> Result<SceneFile> {
    let text = std::str::from_utf8(text).map_err(|e| Error::SceneSyntax {
        line: 0,
        column: 0,
        message: format!("invalid UTF-8: {e}"),
    })?;
    let mut de = serde_json::Deserializer::from_str(text);
    let scene: SceneFile = serde_path_to_error::deserialize(&mut de).map_err(|e| {
        let path = e.path().to_string();
        let inner = e.into_inner();
        match inner.classify() {
            serde_json::error::Category::Data => Error::SceneSchema {
                path,
                message: inner.to_string(),
            },
            _ => Error::SceneSyntax {
                line: inner.line(),
                column: inner.column(),
                message: inner.to_string(),
            },
        }
    })?;
    de.end().map_err(|e| Error::SceneSyntax {
        line: e.line(),
        column: e.column(),
        message: e.to_string(),
    })?;
    scene.validate()?;
    Ok(scene)
}

/// Serializes a scene document as pretty-printed JSON.
pub fn emit_scene(scene: &SceneFile) -> String {
    let mut s = serde_json::to_string_pretty(scene).expect("scene documents always serialize");
    s.push('\n');
    s
}

#[cfg(test)]
mod tests {
    use super::*;

    const MINIMAL: &str = r#"{
        "version": 1,
        "geometry": "euclidean2",
        "default_n": 1.0,
        "source": { "position": [0, 0], "fan": { "count": 8 } },
        "time": { "t_max": 2.0 }
    }"#;

    const SNELL: &str = r#"{
        "version": 1,
        "geometry": "euclidean2",
        "default_n": 1.0,
        "regions": [ { "shape": { "slab": { "axis": 1, "lo": 1.0, "hi": 2.0 } }, "index": 1.33 } ],
        "source": { "position": [0, 0], "fan": { "count": 37, "angle_from": 0, "angle_to": 3.141592653589793 } },
        "time": { "t_max": 4.0, "dt": 0.001, "front_every": 0.5 }
    }"#;

    #[test]
    fn minimal_scene() {
        let s = parse_scene(MINIMAL.as_bytes()).unwrap();
        assert!(s.regions.is_empty());
        assert_eq!(s.time.dt, DEFAULT_DT);
        assert_eq!(s.tir_mode, TirMode::Terminate);
        assert_eq!(s.projection, Projection::Chart);
        assert_eq!(s.fan().unwrap().len(), 8);
        assert!(s.fan().unwrap().is_full_circle());
    }

    #[test]
    fn snell_scene() {
        let s = parse_scene(SNELL.as_bytes()).unwrap();
        assert_eq!(s.regions.len(), 1);
        let m = s.medium().unwrap();
        assert_eq!(m.regions[0].index, 1.33);
        assert_eq!(
            s.front_times(),
            vec![0.5, 1.0, 1.5, 2.0, 2.5, 3.0, 3.5, 4.0]
        );
    }

    #[test]
    fn fan_count_two_is_schema_error() {
        let text = MINIMAL.replace("\"count\": 8", "\"count\": 2");
        match parse_scene(text.as_bytes()) {
            Err(Error::SceneSchema { path, .. }) => assert_eq!(path, "source.fan.count"),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn unknown_key_names_path() {
        let text = MINIMAL.replace("\"count\": 8", "\"count\": 8, \"colour\": 1");
        match parse_scene(text.as_bytes()) {
            Err(Error::SceneSchema { path, message }) => {
                assert_eq!(path, "source.fan.colour");
                assert!(message.contains("colour"), "{message}");
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn syntax_error_has_position() {
        let text = MINIMAL.replace("\"default_n\": 1.0,", "\"default_n\": 1.0");
        match parse_scene(text.as_bytes()) {
            Err(Error::SceneSyntax { line, column, .. }) => {
                assert_eq!(line, 5);
                assert!(column > 0);
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn hyperbolic_source_below_axis() {
        let text = MINIMAL
            .replace("euclidean2", "hyperbolic-half-plane")
            .replace("[0, 0]", "[0, -1]");
        match parse_scene(text.as_bytes()) {
            Err(Error::SceneSchema { path, .. }) => assert_eq!(path, "source.position"),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn round_trip() {
        for text in [MINIMAL, SNELL] {
            let a = parse_scene(text.as_bytes()).unwrap();
            let b = parse_scene(emit_scene(&a).as_bytes()).unwrap();
            assert_eq!(a, b);
        }
    }

    #[test]
    fn disc_projection_needs_hyperbolic_chart() {
        let text = MINIMAL.replace(
            "\"default_n\"",
            "\"projection\": \"poincare-disc\", \"default_n\"",
        );
        assert!(matches!(
            parse_scene(text.as_bytes()),
            Err(Error::SceneSchema { .. })
        ));
    }
}
