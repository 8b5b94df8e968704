//! A complete figure: exact, main term and simulation over c for the
//! Exponential pair, written as CSV and SVG into the given directory.
//!
//! `cargo run --example figure_job -- /tmp/out`

use std::path::PathBuf;

use fpt::job::{self, Command, JobConfig, Sweep, SweepVar};
use fpt::{Method, SweepGrid};

fn main() -> fpt::Result<()> {
    let dir = PathBuf::from(std::env::args().nth(1).unwrap_or_else(|| ".".into()));
    let mut j = JobConfig::new(Command::Sweep, "exp:1".parse()?, "exp:1".parse()?);
    j.u = 10.0;
    j.horizon = 100.0;
    j.sweep = Some(Sweep {
        var: SweepVar::C,
        grid: SweepGrid::new(0.05, 2.0, 0.05)?,
    });
    j.methods = vec![Method::Main, Method::Exact, Method::Sim];
    j.csv = Some(dir.join("exp_pair.csv"));
    j.svg = Some(dir.join("exp_pair.svg"));
    let out = job::run(&j)?;
    print!("{}", out.text);
    Ok(())
}
