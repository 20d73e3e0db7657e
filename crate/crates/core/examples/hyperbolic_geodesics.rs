//! Light rays of a homogeneous hyperbolic medium are semicircles.
//!
//! Traces a fan in the half plane, measures how far each track strays from
//! its geodesic semicircle and draws the fan in the Poincare disc.
//!
//! ```text
//! cargo run --example hyperbolic_geodesics -- [out-dir]
//! ```

use std::path::PathBuf;

use contact_optics::cli::write_files;
use contact_optics::contact::geodesic_circle;
use contact_optics::geometry::{Geometry, Medium, Vec3};
use contact_optics::output::emit_svg;
use contact_optics::ray::TraceOptions;
use contact_optics::scene::Projection;
use contact_optics::wavefront::{propagate_fan, Fan};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let medium = Medium::homogeneous(Geometry::HyperbolicHalfPlane, 1.0);
    let fan = Fan::circle(Vec3::new(0.0, 1.0, 0.0), 24);
    let trace = propagate_fan(
        &medium,
        &fan,
        &TraceOptions::new(4.0),
        &[1.0, 2.0, 3.0, 4.0],
    )?;

    for ray in &trace.rays {
        match geodesic_circle(&ray.launch) {
            Some((center, radius)) => {
                let worst = ray
                    .samples
                    .iter()
                    .map(|s| {
                        ((s.state.base.x - center).powi(2) + s.state.base.y.powi(2)
                            - radius * radius)
                            .abs()
                    })
                    .fold(0.0, f64::max);
                println!(
                    "phi = {:6.2} deg  center {:+8.4}  radius {:8.4}  max |(x-c)^2 + y^2 - r^2| = {:.1e}",
                    ray.launch.angle().to_degrees(),
                    center,
                    radius.abs(),
                    worst
                );
            }
            None => println!(
                "phi = {:6.2} deg  vertical geodesic x = {:+.4}",
                ray.launch.angle().to_degrees(),
                ray.launch.base.x
            ),
        }
    }

    let out = std::env::args_os()
        .nth(1)
        .map(PathBuf::from)
        .unwrap_or_else(|| PathBuf::from("target/examples-out/hyperbolic_geodesics"));
    let svg = emit_svg(
        &medium,
        Projection::PoincareDisc,
        &trace.rays,
        &trace.fronts,
    );
    write_files(&out, &[("figure.svg", svg)])?;
    println!("wrote {}", out.display());
    Ok(())
}
