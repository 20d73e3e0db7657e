//! Refraction in the hyperbolic half plane.
//!
//! Traces the three hyperbolic scenes, reports refractions, total internal
//! reflections and rays that cross one wavefront more than once, and writes
//! each scene's outputs into its own directory.
//!
//! ```text
//! cargo run --example hyperbolic_interfaces -- [out-dir]
//! ```

use std::path::PathBuf;

use contact_optics::cli::{render, trace_scene, write_files, Format};
use contact_optics::scene::parse_scene;
use contact_optics::wavefront::count_front_intersections;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let out = std::env::args_os()
        .nth(1)
        .map(PathBuf::from)
        .unwrap_or_else(|| PathBuf::from("target/examples-out/hyperbolic_interfaces"));
    let scenes: [(&str, &[u8]); 3] = [
        ("hyp_ref_hor", include_bytes!("scenes/hyp_ref_hor.json")),
        ("hyp_ref_vert", include_bytes!("scenes/hyp_ref_vert.json")),
        ("hyp_tot_ref", include_bytes!("scenes/hyp_tot_ref.json")),
    ];
    for (name, text) in scenes {
        let scene = parse_scene(text)?;
        let trace = trace_scene(&scene)?;
        let events: Vec<_> = trace.rays.iter().flat_map(|r| &r.events).collect();
        let tir = events.iter().filter(|e| e.is_tir()).count();
        let mut multi = Vec::new();
        for (i, ray) in trace.rays.iter().enumerate() {
            let most = trace
                .fronts
                .iter()
                .map(|f| count_front_intersections(ray, f))
                .max()
                .unwrap_or(0);
            if most >= 2 {
                multi.push(i);
            }
        }
        println!(
            "{name}: {} rays, {} refractions, {tir} total internal reflections, rays crossing a front twice: {multi:?}",
            trace.rays.len(),
            events.len() - tir,
        );
        write_files(
            &out.join(name),
            &render(&scene, &trace, &[Format::Csv, Format::Svg])?,
        )?;
    }
    println!("wrote {}", out.display());
    Ok(())
}
