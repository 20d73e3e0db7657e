//! A point source in air shining through a layer of water.
//!
//! Traces `scenes/snell_law.json`, prints every refraction of the ray that
//! meets the layer at 30 degrees and writes `rays.csv`, `fronts.csv` and
//! `figure.svg`.
//!
//! ```text
//! cargo run --example snell_layer -- [out-dir]
//! ```

use std::path::PathBuf;

use contact_optics::cli::{render, trace_scene, write_files, Format};
use contact_optics::ray::Outcome;
use contact_optics::scene::parse_scene;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let scene = parse_scene(include_bytes!("scenes/snell_law.json"))?;
    let trace = trace_scene(&scene)?;

    let target = 60f64.to_radians();
    let ray = trace
        .rays
        .iter()
        .min_by(|a, b| {
            (a.launch.angle() - target)
                .abs()
                .total_cmp(&(b.launch.angle() - target).abs())
        })
        .expect("fan is not empty");
    println!(
        "ray launched at {:.2} deg:",
        ray.launch.angle().to_degrees()
    );
    for e in &ray.events {
        if let Outcome::Refracted { angle_out } = e.outcome {
            println!(
                "  t = {:.4}  y = {:.3}  n {:.2} -> {:.2}  incidence {:.2} deg, transmitted {:.2} deg",
                e.t,
                e.point.y,
                e.n_in,
                e.n_out,
                e.angle_in.to_degrees(),
                angle_out.to_degrees()
            );
        }
    }

    let out = std::env::args_os()
        .nth(1)
        .map(PathBuf::from)
        .unwrap_or_else(|| PathBuf::from("target/examples-out/snell_layer"));
    write_files(&out, &render(&scene, &trace, &[Format::Csv, Format::Svg])?)?;
    println!("wrote {}", out.display());
    Ok(())
}
