//! Spherical wavefronts of a point source in three dimensions.
//!
//! Traces `scenes/sphere_3d.json` and prints the spread of front radii.
//!
//! ```text
//! cargo run --example wavefronts_3d -- [out-dir]
//! ```

use std::path::PathBuf;

use contact_optics::cli::{render, trace_scene, write_files, Format};
use contact_optics::scene::parse_scene;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let scene = parse_scene(include_bytes!("scenes/sphere_3d.json"))?;
    let trace = trace_scene(&scene)?;
    for front in &trace.fronts {
        let radii: Vec<f64> = front.points.iter().map(|p| p.point.norm()).collect();
        let lo = radii.iter().copied().fold(f64::INFINITY, f64::min);
        let hi = radii.iter().copied().fold(0.0, f64::max);
        println!(
            "t = {}: {} points, radius in [{lo:.12}, {hi:.12}], expected {}",
            front.t,
            radii.len(),
            front.t / scene.default_n
        );
    }
    let out = std::env::args_os()
        .nth(1)
        .map(PathBuf::from)
        .unwrap_or_else(|| PathBuf::from("target/examples-out/wavefronts_3d"));
    write_files(&out, &render(&scene, &trace, &[Format::Csv, Format::Svg])?)?;
    println!("wrote {}", out.display());
    Ok(())
}
