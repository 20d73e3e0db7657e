//! The seeded invariant battery behind `contact-optics check`.
//!
//! ```text
//! cargo run --example verification -- [seed] [samples]
//! ```

use contact_optics::checks::run_checks;

fn main() {
    let mut args = std::env::args().skip(1);
    let seed = args.next().and_then(|s| s.parse().ok()).unwrap_or(0);
    let samples = args.next().and_then(|s| s.parse().ok()).unwrap_or(1000);
    let report = run_checks(seed, samples);
    println!("{report}");
    if !report.all_pass() {
        std::process::exit(3);
    }
}
