//! Reeb flow of the Liouville form in the three charts.
//!
//! Integrates a few launches with RK4, compares them with the closed-form
//! flow and prints the Reeb residuals at the launch state.
//!
//! ```text
//! cargo run --example reeb_flow
//! ```

use contact_optics::contact::{closed_flow, verify_reeb, ContactState, DEFAULT_FD_STEP};
use contact_optics::geometry::Geometry;
use contact_optics::ray::step_rk4;

fn main() -> contact_optics::Result<()> {
    let launches = [
        (
            Geometry::Euclidean2,
            1.0,
            ContactState::planar(0.0, 0.0, 0.7),
        ),
        (
            Geometry::Euclidean2,
            1.33,
            ContactState::planar(1.0, -2.0, 2.0),
        ),
        (
            Geometry::Euclidean3,
            2.0,
            ContactState::spatial(0.0, 0.0, 0.0, 1.1, 0.4),
        ),
        (
            Geometry::HyperbolicHalfPlane,
            1.0,
            ContactState::planar(0.0, 1.0, 0.3),
        ),
        (
            Geometry::HyperbolicHalfPlane,
            1.33,
            ContactState::planar(-1.0, 0.5, 2.5),
        ),
    ];
    let (t_end, dt) = (5.0, 1e-3);
    for (geom, n, launch) in launches {
        let mut s = launch;
        let steps = (t_end / dt) as usize;
        for _ in 0..steps {
            s = step_rk4(geom, n, &s, dt)?;
        }
        let exact = closed_flow(geom, n, &launch, t_end)?;
        let r = verify_reeb(geom, n, &launch, DEFAULT_FD_STEP);
        println!(
            "{:<22} n={:<4} base(t={t_end}) = ({:+.6}, {:+.6}, {:+.6})  |rk4 - exact| = {:.2e}  r1 = {:.1e}  r2 = {:.1e}",
            geom.name(),
            n,
            exact.base.x,
            exact.base.y,
            exact.base.z,
            (s.base - exact.base).norm(),
            r.normalization,
            r.kernel,
        );
    }
    Ok(())
}
