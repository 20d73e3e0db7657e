//! Geometric optics as Reeb flow on the unit cosphere bundle.
//!
//! A medium is a conformal metric `n²·δ` (or `(n/y)²·δ` in the hyperbolic
//! half plane) made of constant-index regions. Light rays are the Reeb
//! orbits of the Liouville form. Interfaces refract by Snell's law or
//! reflect totally, and wavefronts are the time slices of a ray fan.
//!
//! - [`contact`]: states, the Reeb field, the closed-form flow and residual
//!   checks on the contact structure.
//! - [`geometry`]: the three charts, media, regions and the Cayley map.
//! - [`ray`]: RK4 tracing across interfaces with Snell refraction and total
//!   internal reflection.
//! - [`wavefront`]: fans, fronts and Malus-Dupin orthogonality.
//! - [`scene`], [`output`], [`cli`]: scene files, CSV and SVG emission and
//!   the `contact-optics` binary.
//! - [`checks`]: the seeded invariant battery.
//!
//! Runnable examples live in `examples/`:
//!
//! ```text
//! cargo run --example reeb_flow
//! cargo run --example snell_layer
//! cargo run --example critical_angle
//! cargo run --example hyperbolic_geodesics
//! cargo run --example hyperbolic_interfaces
//! cargo run --example wavefronts_3d
//! cargo run --example verification
//! cargo run --example scene_files
//! ```

pub mod checks;
pub mod cli;
pub mod contact;
pub mod error;
pub mod geometry;
pub mod output;
pub mod ray;
pub mod scene;
pub mod wavefront;

pub use error::{Error, Result};
