use std::process::ExitCode;

use clap::Parser;
use contact_optics::cli::{run, Cli};

fn main() -> ExitCode {
    run(Cli::parse())
}
