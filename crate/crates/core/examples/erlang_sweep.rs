//! Erlang gaps and jumps: main and corrected approximations against
//! simulation over c, with the Monte Carlo nodes run in parallel.

use fpt::job::{self, Command, JobConfig, Sweep, SweepVar};
use fpt::{Method, SweepGrid};

fn main() -> fpt::Result<()> {
    let mut j = JobConfig::new(Command::Sweep, "erlang:1.2,2".parse()?, "erlang:1,2".parse()?);
    j.u = 40.0;
    j.horizon = 1000.0;
    j.sweep = Some(Sweep {
        var: SweepVar::C,
        grid: SweepGrid::new(0.6, 2.0, 0.1)?.refine(1.0, 1.4, 4)?,
    });
    j.methods = vec![Method::Main, Method::Corrected, Method::Sim];
    j.trials = 1000;
    let r = job::evaluate_sweep(&j)?;
    print!("{}", r.to_csv());
    print!("{}", job::summary(&r));
    Ok(())
}
