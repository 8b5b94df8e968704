use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use fpt::job::{self, Command, JobConfig, Sweep, SweepVar};
use fpt::report::Method;
use fpt::{DistributionSpec, Error, SweepGrid};

/// Crossing probabilities of compound renewal processes.
#[derive(Parser)]
#[command(name = "fpt", version)]
struct Cli {
    #[command(subcommand)]
    command: Cmd,
}

#[derive(Args)]
struct Laws {
    /// Law of the renewal gaps, e.g. exp:1, erlang:1.2,2, mix2exp:1,2,0.6667
    #[arg(long = "t")]
    t_law: DistributionSpec,
    /// Law of the jumps, e.g. exp:1, pareto:4,0.35
    #[arg(long = "y")]
    y_law: DistributionSpec,
}

#[derive(Args)]
struct Point {
    #[arg(long, default_value_t = 10.0)]
    u: f64,
    #[arg(long, default_value_t = 0.0)]
    v: f64,
    /// Horizon t; `inf` is accepted
    #[arg(long, default_value = "inf")]
    horizon: f64,
}

#[derive(Args)]
struct SimOpts {
    #[arg(long, default_value_t = 1000)]
    trials: u64,
    /// Master seed; defaults to $FPT_SEED, then 20170101
    #[arg(long)]
    seed: Option<u64>,
    /// Simulation horizon used when --horizon is inf
    #[arg(long)]
    inf_cap: Option<f64>,
}

#[derive(Subcommand)]
enum Cmd {
    /// Print M, D^2, c* and the correction coefficients
    Constants {
        #[command(flatten)]
        laws: Laws,
    },
    /// Main term and corrected approximation at one point
    Approx {
        #[command(flatten)]
        laws: Laws,
        #[command(flatten)]
        point: Point,
        #[arg(long)]
        c: f64,
    },
    /// Exact probability for an Exponential pair
    Exact {
        #[command(flatten)]
        laws: Laws,
        #[command(flatten)]
        point: Point,
        #[arg(long)]
        c: f64,
    },
    /// Monte Carlo estimate at one point
    Simulate {
        #[command(flatten)]
        laws: Laws,
        #[command(flatten)]
        point: Point,
        #[arg(long)]
        c: f64,
        #[command(flatten)]
        sim: SimOpts,
    },
    /// Evaluate methods over a range of c or t and write CSV/SVG
    Sweep {
        #[command(flatten)]
        laws: Laws,
        #[command(flatten)]
        point: Point,
        /// Swept variable, c or t
        #[arg(long)]
        var: SweepVar,
        #[arg(long)]
        min: f64,
        #[arg(long)]
        max: f64,
        #[arg(long)]
        step: f64,
        /// Fixed c when sweeping t
        #[arg(long)]
        c: Option<f64>,
        /// Denser nodes, lo:hi:factor (repeatable)
        #[arg(long, value_parser = parse_refinement)]
        refine: Vec<(f64, f64, u32)>,
        /// Comma-separated subset of main,corrected,exact,sim
        #[arg(long, default_value = "main")]
        methods: String,
        #[command(flatten)]
        sim: SimOpts,
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long)]
        svg: Option<PathBuf>,
    },
}

fn parse_refinement(s: &str) -> Result<(f64, f64, u32), String> {
    let parts: Vec<&str> = s.split(':').collect();
    if let [lo, hi, k] = parts[..] {
        let bad = |e: &dyn std::fmt::Display| format!("bad refinement `{s}`: {e}");
        Ok((
            lo.parse().map_err(|e| bad(&e))?,
            hi.parse().map_err(|e| bad(&e))?,
            k.parse().map_err(|e| bad(&e))?,
        ))
    } else {
        Err(format!("refinement `{s}` must be lo:hi:factor"))
    }
}

fn config(cmd: Cmd) -> Result<JobConfig, Error> {
    let env_seed = std::env::var(job::SEED_ENV).ok();
    let base = |command, laws: Laws, point: Point| {
        let mut j = JobConfig::new(command, laws.t_law, laws.y_law);
        j.u = point.u;
        j.v = point.v;
        j.horizon = point.horizon;
        j
    };
    let with_sim = |mut j: JobConfig, sim: SimOpts| -> Result<JobConfig, Error> {
        j.trials = sim.trials;
        j.seed = job::resolve_seed(sim.seed, env_seed.as_deref())?;
        j.inf_cap = sim.inf_cap;
        Ok(j)
    };
    Ok(match cmd {
        Cmd::Constants { laws } => JobConfig::new(Command::Constants, laws.t_law, laws.y_law),
        Cmd::Approx { laws, point, c } => JobConfig { c: Some(c), ..base(Command::Approx, laws, point) },
        Cmd::Exact { laws, point, c } => JobConfig { c: Some(c), ..base(Command::Exact, laws, point) },
        Cmd::Simulate { laws, point, c, sim } => {
            with_sim(JobConfig { c: Some(c), ..base(Command::Simulate, laws, point) }, sim)?
        }
        Cmd::Sweep { laws, point, var, min, max, step, c, refine, methods, sim, out, svg } => {
            let mut grid = SweepGrid::new(min, max, step)?;
            for (lo, hi, k) in refine {
                grid = grid.refine(lo, hi, k)?;
            }
            let j = JobConfig {
                c,
                sweep: Some(Sweep { var, grid }),
                methods: Method::parse_list(&methods)?,
                csv: out,
                svg,
                ..base(Command::Sweep, laws, point)
            };
            with_sim(j, sim)?
        }
    })
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let outcome = config(cli.command).and_then(|j| job::run(&j));
    match outcome {
        Ok(o) => {
            for w in &o.warnings {
                eprintln!("warning: {w}");
            }
            print!("{}", o.text);
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::FAILURE
        }
    }
}
