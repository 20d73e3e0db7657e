use std::path::{Path, PathBuf};
use std::process::Command;

use contact_optics::checks::{run_checks, run_checks_with_bias};
use contact_optics::cli::{render, trace_scene, Format};
use contact_optics::scene::{parse_scene, SceneFile};
use contact_optics::wavefront::propagate_fan;

fn scene_path(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR"))
        .join("examples/scenes")
        .join(format!("{name}.json"))
}

fn scene(name: &str) -> SceneFile {
    parse_scene(&std::fs::read(scene_path(name)).unwrap()).unwrap()
}

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_contact-optics"))
}

/// Every `x,y` pair inside `points="…"` attributes.
fn svg_points(svg: &str) -> Vec<[f64; 2]> {
    svg.split("points=\"")
        .skip(1)
        .flat_map(|rest| rest.split('"').next().unwrap().split_whitespace())
        .map(|pair| {
            let (x, y) = pair.split_once(',').unwrap();
            [x.parse().unwrap(), y.parse().unwrap()]
        })
        .collect()
}

#[test]
fn shipped_scenes_parse() {
    for name in [
        "snell_law",
        "inner_total",
        "hyp_ref_hor",
        "hyp_ref_vert",
        "hyp_tot_ref",
        "sphere_3d",
    ] {
        let s = scene(name);
        assert!(s.description.is_some(), "{name}");
        s.fan().unwrap();
        s.medium().unwrap();
    }
    let snell = scene("snell_law");
    assert_eq!(snell.regions.len(), 1);
    assert_eq!(snell.regions[0].index, 1.33);
    assert_eq!(snell.default_n, 1.0);
}

#[test]
fn snell_figure_layers() {
    let sc = scene("snell_law");
    let trace = trace_scene(&sc).unwrap();
    let files = render(&sc, &trace, &[Format::Svg]).unwrap();
    assert_eq!(files.len(), 1);
    let svg = &files[0].1;
    let section = |id: &str| {
        svg.split(&format!("<g id=\"{id}\""))
            .nth(1)
            .unwrap()
            .split("</g>")
            .next()
            .unwrap()
            .to_string()
    };
    assert_eq!(section("regions").matches("<polygon").count(), 1);
    assert!(svg.contains("fill=\"#c8c8c8\""));
    assert_eq!(section("rays").matches("<polyline").count(), 37);
    assert_eq!(
        section("fronts").matches("<polyline").count(),
        sc.front_times().len()
    );
}

#[test]
fn empty_front_times_give_rays_only() {
    let mut sc = scene("snell_law");
    sc.time.front_every = None;
    sc.time.front_times = Some(Vec::new());
    let trace = trace_scene(&sc).unwrap();
    let svg = &render(&sc, &trace, &[Format::Svg]).unwrap()[0].1;
    let fronts = svg
        .split("<g id=\"fronts\"")
        .nth(1)
        .unwrap()
        .split("</g>")
        .next()
        .unwrap();
    assert!(!fronts.contains("<poly"));
    assert_eq!(svg.matches("<polyline").count(), 37);
}

#[test]
fn disc_figures_stay_in_the_unit_disc() {
    for name in ["hyp_ref_hor", "hyp_ref_vert", "hyp_tot_ref"] {
        let sc = scene(name);
        let trace = trace_scene(&sc).unwrap();
        let svg = &render(&sc, &trace, &[Format::Svg]).unwrap()[0].1;
        assert!(svg.contains("<circle cx=\"0\" cy=\"0\" r=\"1\""));
        let pts = svg_points(svg);
        assert!(pts.len() > 1000);
        for [x, y] in pts {
            assert!(x * x + y * y <= 1.0 + 1e-9, "{name}: ({x}, {y})");
        }
    }
}

#[test]
fn csv_rows_are_ordered() {
    let sc = scene("inner_total");
    let trace = trace_scene(&sc).unwrap();
    let files = render(&sc, &trace, &[Format::Csv]).unwrap();
    let (rays, fronts) = (&files[0].1, &files[1].1);
    assert_eq!(files[0].0, "rays.csv");
    assert_eq!(
        rays.lines().next().unwrap(),
        "ray_id,t,x,y,alpha,n_local,event"
    );
    let mut prev: Option<(usize, f64)> = None;
    let mut last_event = std::collections::BTreeMap::new();
    for line in rays.lines().skip(1) {
        let cols: Vec<&str> = line.split(',').collect();
        assert_eq!(cols.len(), 7);
        let key = (
            cols[0].parse::<usize>().unwrap(),
            cols[1].parse::<f64>().unwrap(),
        );
        if let Some(p) = prev {
            assert!(p.0 < key.0 || (p.0 == key.0 && p.1 < key.1), "{line}");
        }
        prev = Some(key);
        assert!(["-", "refract", "tir"].contains(&cols[6]));
        last_event.insert(key.0, cols[6].to_string());
    }
    for (id, ray) in trace.rays.iter().enumerate() {
        if ray.terminated_by_tir {
            assert_eq!(last_event[&id], "tir");
        }
    }

    assert_eq!(fronts.lines().next().unwrap(), "front_t,launch_index,x,y");
    let keys: Vec<(f64, usize)> = fronts
        .lines()
        .skip(1)
        .map(|l| {
            let c: Vec<&str> = l.split(',').collect();
            (c[0].parse().unwrap(), c[1].parse().unwrap())
        })
        .collect();
    assert!(keys
        .windows(2)
        .all(|w| w[0].0 < w[1].0 || (w[0].0 == w[1].0 && w[0].1 < w[1].1)));
}

#[test]
fn denser_fans_reach_the_reflection_band() {
    // the shipped 36-ray fan avoids |cos phi| in [0.358, 0.476]; 72 rays do not
    let mut sc = scene("hyp_tot_ref");
    let tir = |sc: &SceneFile| {
        let out = propagate_fan(
            &sc.medium().unwrap(),
            &sc.fan().unwrap(),
            &sc.trace_options(),
            &[],
        )
        .unwrap();
        out.rays.iter().filter(|r| r.terminated_by_tir).count()
    };
    assert_eq!(tir(&sc), 0);
    sc.source.fan.count = Some(72);
    assert!(tir(&sc) > 0);
}

#[test]
fn check_battery_passes_and_is_deterministic() {
    let a = run_checks(0, 1000);
    assert!(a.all_pass(), "{a}");
    assert_eq!(a, run_checks(0, 1000));
    let biased = run_checks_with_bias(0, 100, 1e-4);
    assert!(biased.failures().any(|r| r.name == "reeb-kernel"));
}

#[test]
fn cli_version_and_check() {
    let out = bin().arg("version").output().unwrap();
    assert!(out.status.success());
    assert!(String::from_utf8_lossy(&out.stdout).starts_with("contact-optics "));

    let out = bin()
        .args(["check", "--seed", "3", "--samples", "50"])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0));
    assert!(String::from_utf8_lossy(&out.stdout).contains(", 0 failed"));
}

#[test]
fn cli_exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    let write = |name: &str, text: &str| {
        let p = dir.path().join(name);
        std::fs::write(&p, text).unwrap();
        p
    };
    let trace = |scene: &Path, extra: &[&str]| {
        bin()
            .arg("trace")
            .arg("--scene")
            .arg(scene)
            .arg("--out")
            .arg(dir.path().join("out"))
            .args(extra)
            .status()
            .unwrap()
            .code()
    };

    let syntax = write("syntax.json", "{\"version\": 1,");
    assert_eq!(trace(&syntax, &[]), Some(1));
    assert_eq!(trace(&dir.path().join("missing.json"), &[]), Some(1));
    // the disc projection needs the hyperbolic chart
    assert_eq!(
        trace(&scene_path("snell_law"), &["--projection", "poincare-disc"]),
        Some(1)
    );

    // a gross step pushes the hyperbolic state below the boundary
    let gross = write(
        "gross.json",
        r#"{"version": 1, "geometry": "hyperbolic-half-plane", "default_n": 1.0,
            "source": {"position": [0.0, 1.0], "fan": {"count": 3, "angle_from": 0.5, "angle_to": 0.6}},
            "time": {"t_max": 3.0, "dt": 3.0}}"#,
    );
    assert_eq!(trace(&gross, &[]), Some(2));

    assert_eq!(
        trace(
            &scene_path("inner_total"),
            &["--format", "csv", "--tir-mode", "reflect", "--threads", "2"]
        ),
        Some(0)
    );
    let rays = std::fs::read_to_string(dir.path().join("out/rays.csv")).unwrap();
    assert!(rays.contains(",tir\n"));
    assert!(!dir.path().join("out/figure.svg").exists());
    // reflected rays continue past their TIR event
    let tir_lines = rays.lines().filter(|l| l.ends_with(",tir")).count();
    let last_lines: Vec<&str> = rays.lines().collect();
    assert!(tir_lines > 0 && !last_lines.last().unwrap().ends_with(",tir"));
}

#[test]
fn shipped_scene_samples_strictly_increase() {
    for name in [
        "snell_law",
        "inner_total",
        "hyp_ref_hor",
        "hyp_ref_vert",
        "hyp_tot_ref",
        "sphere_3d",
    ] {
        let trace = trace_scene(&scene(name)).unwrap();
        for ray in &trace.rays {
            assert!(ray.samples.windows(2).all(|w| w[0].t < w[1].t), "{name}");
            assert_eq!(
                ray.samples.iter().filter(|s| s.event.is_some()).count(),
                ray.events.len(),
                "{name}"
            );
        }
    }
}
