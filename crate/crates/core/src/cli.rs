//! Command-line front end: `trace`, `check` and `version`.
//!
//! Exit codes: 0 success, 1 scene error, 2 numeric or output failure,
//! 3 check-suite failure.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use crate::checks::run_checks;
use crate::error::{Error, Result};
use crate::output::{emit_csv, emit_svg};
use crate::ray::TirMode;
use crate::scene::{parse_scene, Projection, SceneFile, SCENE_VERSION};
use crate::wavefront::{propagate_fan, FanTrace};

pub const EXIT_SCENE: u8 = 1;
pub const EXIT_NUMERIC: u8 = 2;
pub const EXIT_CHECKS: u8 = 3;

#[derive(Debug, Parser)]
#[command(
    name = "contact-optics",
    about = "Ray and wavefront tracing by Reeb flow"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Trace a scene file and write rays, fronts and a figure.
    Trace {
        #[arg(long)]
        scene: PathBuf,
        #[arg(long)]
        out: PathBuf,
        #[arg(long, value_enum, value_delimiter = ',', default_value = "csv,svg")]
        format: Vec<Format>,
        /// Worker threads; defaults to one per core.
        #[arg(long, value_parser = clap::value_parser!(u16).range(1..))]
        threads: Option<u16>,
        #[arg(long, value_enum)]
        tir_mode: Option<TirModeArg>,
        #[arg(long, value_enum)]
        projection: Option<ProjectionArg>,
    },
    /// Run the seeded invariant battery.
    Check {
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 1000, value_parser = clap::value_parser!(u64).range(1..))]
        samples: u64,
    },
    /// Print version information.
    Version,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Svg,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum TirModeArg {
    Terminate,
    Reflect,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ProjectionArg {
    Chart,
    PoincareDisc,
}

impl From<TirModeArg> for TirMode {
    fn from(m: TirModeArg) -> Self {
        match m {
            TirModeArg::Terminate => TirMode::Terminate,
            TirModeArg::Reflect => TirMode::Reflect,
        }
    }
}

impl From<ProjectionArg> for Projection {
    fn from(p: ProjectionArg) -> Self {
        match p {
            ProjectionArg::Chart => Projection::Chart,
            ProjectionArg::PoincareDisc => Projection::PoincareDisc,
        }
    }
}

/// Traces the scene's fan and assembles its requested fronts.
pub fn trace_scene(scene: &SceneFile) -> Result<FanTrace> {
    let medium = scene.medium()?;
    let fan = scene.fan()?;
    propagate_fan(&medium, &fan, &scene.trace_options(), &scene.front_times())
}

/// Output files for a traced scene as `(file name, contents)` pairs.
pub fn render(
    scene: &SceneFile,
    trace: &FanTrace,
    formats: &[Format],
) -> Result<Vec<(&'static str, String)>> {
    let mut files = Vec::new();
    if formats.contains(&Format::Csv) {
        let csv = emit_csv(scene.geometry, &trace.rays, &trace.fronts);
        files.push(("rays.csv", csv.rays));
        files.push(("fronts.csv", csv.fronts));
    }
    if formats.contains(&Format::Svg) {
        let medium = scene.medium()?;
        files.push((
            "figure.svg",
            emit_svg(&medium, scene.projection, &trace.rays, &trace.fronts),
        ));
    }
    Ok(files)
}

/// Writes rendered files into `dir`, creating it if needed.
pub fn write_files(dir: &Path, files: &[(&str, String)]) -> std::io::Result<()> {
    fs::create_dir_all(dir)?;
    for (name, contents) in files {
        fs::write(dir.join(name), contents)?;
    }
    Ok(())
}

fn exit_for(err: &Error) -> ExitCode {
    ExitCode::from(if err.is_scene_error() {
        EXIT_SCENE
    } else {
        EXIT_NUMERIC
    })
}

fn load_scene(path: &Path) -> std::result::Result<SceneFile, ExitCode> {
    let bytes = fs::read(path).map_err(|e| {
        eprintln!("error: cannot read {}: {e}", path.display());
        ExitCode::from(EXIT_SCENE)
    })?;
    parse_scene(&bytes).map_err(|e| {
        eprintln!("error: {}: {e}", path.display());
        exit_for(&e)
    })
}

fn trace_command(
    scene_path: &Path,
    out: &Path,
    formats: &[Format],
    threads: Option<u16>,
    tir_mode: Option<TirModeArg>,
    projection: Option<ProjectionArg>,
) -> ExitCode {
    let mut scene = match load_scene(scene_path) {
        Ok(s) => s,
        Err(code) => return code,
    };
    if let Some(m) = tir_mode {
        scene.tir_mode = m.into();
    }
    if let Some(p) = projection {
        scene.projection = p.into();
    }
    if let Err(e) = scene.validate() {
        eprintln!("error: {e}");
        return exit_for(&e);
    }

    let mut builder = rayon::ThreadPoolBuilder::new();
    if let Some(n) = threads {
        builder = builder.num_threads(n.into());
    }
    let pool = match builder.build() {
        Ok(p) => p,
        Err(e) => {
            eprintln!("error: cannot start worker pool: {e}");
            return ExitCode::from(EXIT_NUMERIC);
        }
    };
    let files = pool
        .install(|| trace_scene(&scene))
        .and_then(|trace| render(&scene, &trace, formats));
    let files = match files {
        Ok(f) => f,
        Err(e) => {
            eprintln!("error: {e}");
            return exit_for(&e);
        }
    };
    if let Err(e) = write_files(out, &files) {
        eprintln!("error: cannot write to {}: {e}", out.display());
        return ExitCode::from(EXIT_NUMERIC);
    }
    ExitCode::SUCCESS
}

pub fn run(cli: Cli) -> ExitCode {
    match cli.command {
        Command::Trace {
            scene,
            out,
            format,
            threads,
            tir_mode,
            projection,
        } => trace_command(&scene, &out, &format, threads, tir_mode, projection),
        Command::Check { seed, samples } => {
            let report = run_checks(seed, samples as usize);
            println!("{report}");
            if report.all_pass() {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(EXIT_CHECKS)
            }
        }
        Command::Version => {
            println!(
                "contact-optics {} (scene schema version {SCENE_VERSION})",
                env!("CARGO_PKG_VERSION")
            );
            ExitCode::SUCCESS
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_trace_flags() {
        let cli = Cli::try_parse_from([
            "contact-optics",
            "trace",
            "--scene",
            "s.json",
            "--out",
            "o",
            "--format",
            "svg",
            "--threads",
            "8",
            "--tir-mode",
            "reflect",
            "--projection",
            "poincare-disc",
        ])
        .unwrap();
        match cli.command {
            Command::Trace {
                format,
                threads,
                tir_mode,
                projection,
                ..
            } => {
                assert_eq!(format, vec![Format::Svg]);
                assert_eq!(threads, Some(8));
                assert_eq!(tir_mode, Some(TirModeArg::Reflect));
                assert_eq!(projection, Some(ProjectionArg::PoincareDisc));
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn default_formats_and_check_defaults() {
        let cli =
            Cli::try_parse_from(["contact-optics", "trace", "--scene", "s", "--out", "o"]).unwrap();
        assert!(
            matches!(cli.command, Command::Trace { ref format, .. } if format == &[Format::Csv, Format::Svg])
        );
        let cli = Cli::try_parse_from(["contact-optics", "check"]).unwrap();
        assert!(matches!(
            cli.command,
            Command::Check {
                seed: 0,
                samples: 1000
            }
        ));
    }

    #[test]
    fn rejects_zero_threads_and_samples() {
        assert!(Cli::try_parse_from([
            "contact-optics",
            "trace",
            "--scene",
            "s",
            "--out",
            "o",
            "--threads",
            "0"
        ])
        .is_err());
        assert!(Cli::try_parse_from(["contact-optics", "check", "--samples", "0"]).is_err());
    }
}
