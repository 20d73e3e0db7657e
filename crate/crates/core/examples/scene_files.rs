//! Parsing, validating and re-emitting scene documents.
//!
//! Summarizes every shipped scene, checks that it survives a round trip and
//! shows the errors reported for a few broken documents.
//!
//! ```text
//! cargo run --example scene_files
//! ```

use contact_optics::scene::{emit_scene, parse_scene};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let shipped: [(&str, &[u8]); 6] = [
        ("snell_law", include_bytes!("scenes/snell_law.json")),
        ("inner_total", include_bytes!("scenes/inner_total.json")),
        ("hyp_ref_hor", include_bytes!("scenes/hyp_ref_hor.json")),
        ("hyp_ref_vert", include_bytes!("scenes/hyp_ref_vert.json")),
        ("hyp_tot_ref", include_bytes!("scenes/hyp_tot_ref.json")),
        ("sphere_3d", include_bytes!("scenes/sphere_3d.json")),
    ];
    for (name, text) in shipped {
        let scene = parse_scene(text)?;
        let again = parse_scene(emit_scene(&scene).as_bytes())?;
        println!(
            "{name:<13} {:<22} default n {:<5} regions {}  rays {:<4} fronts {:<3} round trip {}",
            scene.geometry.name(),
            scene.default_n,
            scene.regions.len(),
            scene.fan()?.len(),
            scene.front_times().len(),
            if again == scene { "ok" } else { "CHANGED" },
        );
    }

    let broken = [
        r#"{"version": 1, "geometry": "euclidean2", "default_n": 1.0,
            "source": {"position": [0, 0], "fan": {"count": 2}}, "time": {"t_max": 1}}"#,
        r#"{"version": 1, "geometry": "euclidean2", "default_n": 1.0,
            "source": {"position": [0, 0], "fan": {"count": 8, "colour": "red"}}, "time": {"t_max": 1}}"#,
        r#"{"version": 1, "geometry": "hyperbolic-half-plane", "default_n": 1.0,
            "source": {"position": [0, -1], "fan": {"count": 8}}, "time": {"t_max": 1}}"#,
        "{\"version\": 1,\n \"geometry\": }",
    ];
    for text in broken {
        match parse_scene(text.as_bytes()) {
            Ok(_) => println!("unexpectedly accepted"),
            Err(e) => println!("rejected: {e}"),
        }
    }
    Ok(())
}
