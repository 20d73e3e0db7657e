//! Refraction and total internal reflection at a water surface.
//!
//! Sweeps the incidence angle across the critical angle, then traces
//! `scenes/inner_total.json` and writes its outputs.
//!
//! ```text
//! cargo run --example critical_angle -- [out-dir]
//! ```

use std::path::PathBuf;

use contact_optics::cli::{render, trace_scene, write_files, Format};
use contact_optics::contact::ContactState;
use contact_optics::geometry::{Geometry, Medium, Region, Vec3};
use contact_optics::ray::{critical_angle, trace_ray, Outcome, TirMode, TraceOptions};
use contact_optics::scene::parse_scene;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let theta_c = critical_angle(1.33, 1.0).expect("dense to rare");
    println!(
        "critical angle water -> air: {:.2} deg",
        theta_c.to_degrees()
    );

    let water_below = Medium::homogeneous(Geometry::Euclidean2, 1.0)
        .with_region(Region::half_space(Vec3::new(0.0, -1.0, 0.0), -1.0, 1.33));
    for deg in [30.0, 45.0, 48.25, 48.7, 48.8, 49.25, 60.0] {
        let alpha = (90.0f64 - deg).to_radians();
        for mode in [TirMode::Terminate, TirMode::Reflect] {
            let ray = trace_ray(
                &water_below,
                &ContactState::planar(0.0, 0.0, alpha),
                &TraceOptions::new(4.0).tir_mode(mode),
            )?;
            let e = &ray.events[0];
            let what = match e.outcome {
                Outcome::Refracted { angle_out } => {
                    format!("refracted at {:.2} deg", angle_out.to_degrees())
                }
                Outcome::TotalInternalReflection => "total internal reflection".to_string(),
            };
            println!(
                "incidence {deg:>5.2} deg  {mode:?}: {what}; ray ends at ({:+.3}, {:+.3})",
                ray.last().state.base.x,
                ray.last().state.base.y
            );
        }
    }

    let scene = parse_scene(include_bytes!("scenes/inner_total.json"))?;
    let trace = trace_scene(&scene)?;
    let stopped = trace.rays.iter().filter(|r| r.terminated_by_tir).count();
    println!(
        "inner_total: {} of {} rays stop at the surface",
        stopped,
        trace.rays.len()
    );
    let out = std::env::args_os()
        .nth(1)
        .map(PathBuf::from)
        .unwrap_or_else(|| PathBuf::from("target/examples-out/critical_angle"));
    write_files(&out, &render(&scene, &trace, &[Format::Csv, Format::Svg])?)?;
    println!("wrote {}", out.display());
    Ok(())
}
