//! Jobs behind the command-line front end: validated configuration, sweep
//! evaluation and output files.

use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use rayon::prelude::*;

use crate::approx::{corrected, CrossingQuery};
use crate::distributions::DistributionSpec;
use crate::error::{Error, Result};
use crate::exact::{exact_conditional, ExpExpModel};
use crate::moments::{model_constants, ModelConstants};
use crate::plot::render_svg;
use crate::report::{format_sig, Method, Row, SweepResult};
use crate::rng::substream_seed;
use crate::sim::{simulate_conditional, SweepGrid};

/// Master seed when neither `--seed` nor `FPT_SEED` is given.
pub const DEFAULT_SEED: u64 = 20_170_101;
/// Environment variable overriding [`DEFAULT_SEED`].
pub const SEED_ENV: &str = "FPT_SEED";

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Command {
    Constants,
    Approx,
    Exact,
    Simulate,
    Sweep,
}

/// The swept quantity.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SweepVar {
    C,
    T,
}

impl SweepVar {
    pub fn name(self) -> &'static str {
        match self {
            SweepVar::C => "c",
            SweepVar::T => "t",
        }
    }
}

impl FromStr for SweepVar {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "c" => Ok(SweepVar::C),
            "t" => Ok(SweepVar::T),
            _ => Err(Error::Parse {
                token: s.into(),
                reason: "sweep variable must be c or t".into(),
            }),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Sweep {
    pub var: SweepVar,
    pub grid: SweepGrid,
}

#[derive(Debug, Clone, PartialEq)]
pub struct JobConfig {
    pub command: Command,
    pub t_law: DistributionSpec,
    pub y_law: DistributionSpec,
    pub u: f64,
    /// Fixed rate; required unless `c` is swept.
    pub c: Option<f64>,
    pub v: f64,
    /// May be infinite for the analytic methods.
    pub horizon: f64,
    pub sweep: Option<Sweep>,
    pub methods: Vec<Method>,
    pub trials: u64,
    pub seed: u64,
    /// Horizon used by the simulator when `horizon` is infinite.
    pub inf_cap: Option<f64>,
    pub csv: Option<PathBuf>,
    pub svg: Option<PathBuf>,
}

impl JobConfig {
    /// A configuration with `u = 10`, `v = 0`, `t = ∞`, 1000 trials, the
    /// default seed and the main approximation as the only method.
    pub fn new(command: Command, t_law: DistributionSpec, y_law: DistributionSpec) -> Self {
        JobConfig {
            command,
            t_law,
            y_law,
            u: 10.0,
            c: None,
            v: 0.0,
            horizon: f64::INFINITY,
            sweep: None,
            methods: vec![Method::Main],
            trials: 1000,
            seed: DEFAULT_SEED,
            inf_cap: None,
            csv: None,
            svg: None,
        }
    }

    fn uses(&self, m: Method) -> bool {
        match self.command {
            Command::Approx => matches!(m, Method::Main | Method::Corrected),
            Command::Exact => m == Method::Exact,
            Command::Simulate => m == Method::Sim,
            Command::Sweep => self.methods.contains(&m),
            Command::Constants => false,
        }
    }

    pub fn validate(&self) -> Result<()> {
        self.t_law.validate()?;
        self.y_law.validate()?;
        if self.command == Command::Constants {
            return Ok(());
        }
        let job = |msg: &str| Err(Error::Job(msg.to_string()));
        match (&self.sweep, self.command) {
            (None, Command::Sweep) => return job("sweep needs --var, --min, --max and --step"),
            (Some(_), c) if c != Command::Sweep => return job("only the sweep command takes a range"),
            _ => {}
        }
        if self.command == Command::Sweep && self.methods.is_empty() {
            return job("at least one method is required");
        }
        let swept = self.sweep.as_ref().map(|s| s.var);
        if swept != Some(SweepVar::C) && self.c.is_none() {
            return job("--c is required");
        }
        if swept == Some(SweepVar::C) && self.c.is_some() {
            return job("c is both fixed and swept");
        }
        if let Some(s) = &self.sweep {
            s.grid.validate()?;
            match s.var {
                SweepVar::C if !(s.grid.min > 0.0) => return job("c range must be positive"),
                SweepVar::T if !(s.grid.min >= self.v) => return job("t range must start at or after v"),
                _ => {}
            }
        }
        if self.uses(Method::Exact) && !(self.t_law.is_exponential() && self.y_law.is_exponential()) {
            return Err(Error::Domain("exact requires exponential pair".into()));
        }
        if self.uses(Method::Sim) {
            if self.trials == 0 {
                return job("--trials must be at least 1");
            }
            if swept != Some(SweepVar::T) && self.horizon.is_infinite() {
                match self.inf_cap {
                    Some(cap) if cap > self.v && cap.is_finite() => {}
                    Some(cap) => return Err(Error::InvalidHorizon(format!("invalid --inf-cap {cap}"))),
                    None => {
                        return Err(Error::InvalidHorizon(
                            "simulation with an infinite horizon needs --inf-cap".into(),
                        ))
                    }
                }
            }
        }
        let q = self.base_query(self.c.unwrap_or(1.0), self.sweep_t_or(self.horizon));
        q.validate()
    }

    fn sweep_t_or(&self, t: f64) -> f64 {
        match &self.sweep {
            Some(Sweep { var: SweepVar::T, grid }) => grid.max,
            _ => t,
        }
    }

    fn base_query(&self, c: f64, t: f64) -> CrossingQuery {
        CrossingQuery {
            u: self.u,
            c,
            v: self.v,
            t,
        }
    }

    fn sim_horizon(&self, t: f64) -> f64 {
        if t.is_infinite() {
            self.inf_cap.unwrap_or(t)
        } else {
            t
        }
    }

    fn warnings(&self) -> Vec<String> {
        let mut w = Vec::new();
        if self.uses(Method::Main) || self.uses(Method::Corrected) || self.command == Command::Constants {
            for d in [&self.t_law, &self.y_law] {
                if let Some(msg) = d.approximation_warning() {
                    w.push(msg);
                }
            }
        }
        if let (Some(Sweep { var: SweepVar::C, grid }), Ok(k)) =
            (&self.sweep, model_constants(&self.t_law, &self.y_law))
        {
            if !grid.contains(k.c_star) {
                w.push(format!(
                    "critical rate c* = {} lies outside the swept range [{}, {}]",
                    format_sig(k.c_star),
                    format_sig(grid.min),
                    format_sig(grid.max)
                ));
            }
        }
        w
    }
}

/// `--seed` if given, else `FPT_SEED`, else [`DEFAULT_SEED`].
pub fn resolve_seed(cli: Option<u64>, env: Option<&str>) -> Result<u64> {
    if let Some(s) = cli {
        return Ok(s);
    }
    match env {
        Some(s) => s.trim().parse().map_err(|_| Error::Parse {
            token: s.to_string(),
            reason: format!("{SEED_ENV} must be an unsigned integer"),
        }),
        None => Ok(DEFAULT_SEED),
    }
}

/// What a job produced: the text for standard output, warnings for standard
/// error and, for sweeps, the table.
#[derive(Debug, Clone, PartialEq)]
pub struct Outcome {
    pub text: String,
    pub warnings: Vec<String>,
    pub result: Option<SweepResult>,
}

/// Runs a job, writing the CSV and SVG files it names.
pub fn run(job: &JobConfig) -> Result<Outcome> {
    job.validate()?;
    let warnings = job.warnings();
    let mut text = String::new();
    let _ = writeln!(text, "T = {}\nY = {}", job.t_law, job.y_law);
    let mut result = None;
    match job.command {
        Command::Constants => {
            let k = model_constants(&job.t_law, &job.y_law)?;
            let _ = writeln!(text, "{k}");
        }
        Command::Approx => {
            let k = model_constants(&job.t_law, &job.y_law)?;
            let q = job.base_query(job.c.unwrap_or_default(), job.horizon);
            let r = corrected(&q, &k);
            let _ = writeln!(text, "{k}");
            let _ = writeln!(text, "{}", point_line(&q));
            let _ = writeln!(text, "I^M       = {}", format_sig(r.main));
            let _ = writeln!(text, "I^F       = {}", format_sig(r.correction_f));
            let _ = writeln!(text, "I^S       = {}", format_sig(r.correction_s));
            let _ = writeln!(text, "corrected = {}", format_sig(r.corrected));
        }
        Command::Exact => {
            let m = exp_model(job)?;
            let q = job.base_query(job.c.unwrap_or_default(), job.horizon);
            let p = exact_conditional(&m, &q)?;
            let _ = writeln!(text, "{}", point_line(&q));
            let _ = writeln!(text, "exact = {}", format_sig(p));
        }
        Command::Simulate => {
            let q = job.base_query(job.c.unwrap_or_default(), job.sim_horizon(job.horizon));
            let seed = substream_seed(job.seed, 0);
            let e = simulate_conditional(&job.t_law, &job.y_law, &q, job.trials, seed)?;
            let _ = writeln!(text, "{}", point_line(&q));
            let _ = writeln!(
                text,
                "sim = {} ({} of {}), 95% CI [{}, {}], master seed {}, stream seed {}",
                format_sig(e.estimate),
                e.successes,
                e.trials,
                format_sig(e.ci_low),
                format_sig(e.ci_high),
                job.seed,
                e.seed
            );
        }
        Command::Sweep => {
            let r = evaluate_sweep(job)?;
            for (key, value) in &r.metadata {
                let _ = writeln!(text, "{key} = {value}");
            }
            text.push_str(&summary(&r));
            write_outputs(&r, job.csv.as_deref(), job.svg.as_deref(), &title(job))?;
            result = Some(r);
        }
    }
    Ok(Outcome {
        text,
        warnings,
        result,
    })
}

fn point_line(q: &CrossingQuery) -> String {
    format!(
        "u = {}, c = {}, v = {}, t = {}",
        format_sig(q.u),
        format_sig(q.c),
        format_sig(q.v),
        format_sig(q.t)
    )
}

fn exp_model(job: &JobConfig) -> Result<ExpExpModel> {
    match (job.t_law, job.y_law) {
        (DistributionSpec::Exponential { rate: l }, DistributionSpec::Exponential { rate: m }) => {
            ExpExpModel::new(l, m)
        }
        _ => Err(Error::Domain("exact requires exponential pair".into())),
    }
}

fn title(job: &JobConfig) -> String {
    let mut t = format!("T = {}, Y = {}, u = {}, v = {}", job.t_law, job.y_law, format_sig(job.u), format_sig(job.v));
    if let Some(c) = job.c {
        let _ = write!(t, ", c = {}", format_sig(c));
    }
    if !matches!(job.sweep, Some(Sweep { var: SweepVar::T, .. })) {
        let _ = write!(t, ", t = {}", format_sig(job.horizon));
    }
    t
}

/// Evaluates every requested method on every grid node of a sweep job.
/// Node `i` of the sorted grid simulates with `substream_seed(seed, i)`.
pub fn evaluate_sweep(job: &JobConfig) -> Result<SweepResult> {
    job.validate()?;
    let sweep = job
        .sweep
        .as_ref()
        .ok_or_else(|| Error::Job("not a sweep job".into()))?;
    let needs_k = job.uses(Method::Main) || job.uses(Method::Corrected);
    let k: Option<ModelConstants> = if needs_k {
        Some(model_constants(&job.t_law, &job.y_law)?)
    } else {
        model_constants(&job.t_law, &job.y_law).ok()
    };
    let model = if job.uses(Method::Exact) { Some(exp_model(job)?) } else { None };
    let nodes = sweep.grid.nodes();
    let rows = nodes
        .par_iter()
        .enumerate()
        .map(|(i, &x)| {
            let q = match sweep.var {
                SweepVar::C => job.base_query(x, job.horizon),
                SweepVar::T => job.base_query(job.c.unwrap_or_default(), x),
            };
            q.validate()?;
            let approx = k.filter(|_| needs_k).map(|k| corrected(&q, &k));
            let mut values = Vec::with_capacity(job.methods.len());
            let mut ci = None;
            for &m in &job.methods {
                values.push(match m {
                    Method::Main => approx.map_or(f64::NAN, |a| a.main),
                    Method::Corrected => approx.map_or(f64::NAN, |a| a.corrected),
                    Method::Exact => exact_conditional(model.as_ref().expect("checked"), &q)?,
                    Method::Sim => {
                        let qs = q.with_t(job.sim_horizon(q.t));
                        let e = simulate_conditional(
                            &job.t_law,
                            &job.y_law,
                            &qs,
                            job.trials,
                            substream_seed(job.seed, i as u64),
                        )?;
                        ci = Some((e.ci_low, e.ci_high));
                        e.estimate
                    }
                });
            }
            Ok(Row { x, values, ci })
        })
        .collect::<Result<Vec<Row>>>()?;

    let mut metadata = vec![
        ("variable".to_string(), sweep.var.name().to_string()),
        ("T".into(), job.t_law.to_string()),
        ("Y".into(), job.y_law.to_string()),
        ("u".into(), format_sig(job.u)),
        ("v".into(), format_sig(job.v)),
    ];
    match sweep.var {
        SweepVar::C => metadata.push(("t".into(), format_sig(job.horizon))),
        SweepVar::T => metadata.push(("c".into(), format_sig(job.c.unwrap_or_default()))),
    }
    metadata.push((
        "range".into(),
        format!(
            "{}..{} step {}",
            format_sig(sweep.grid.min),
            format_sig(sweep.grid.max),
            format_sig(sweep.grid.step)
        ),
    ));
    metadata.push((
        "methods".into(),
        job.methods.iter().map(|m| m.name()).collect::<Vec<_>>().join(","),
    ));
    if job.uses(Method::Sim) {
        metadata.push(("trials".into(), job.trials.to_string()));
        metadata.push(("seed".into(), job.seed.to_string()));
        if sweep.var == SweepVar::C && job.horizon.is_infinite() {
            metadata.push(("sim_horizon_cap".into(), format_sig(job.sim_horizon(job.horizon))));
        }
    }
    if let Some(k) = k {
        metadata.push(("M".into(), format_sig(k.m)));
        metadata.push(("D2".into(), format_sig(k.d2)));
        metadata.push(("c_star".into(), format_sig(k.c_star)));
        metadata.push(("K_F*c".into(), format_sig(k.kf_coeff)));
        metadata.push(("K_S*c".into(), format_sig(k.ks_coeff)));
    }
    metadata.push(("version".into(), env!("CARGO_PKG_VERSION").into()));
    Ok(SweepResult {
        variable: sweep.var.name().into(),
        methods: job.methods.clone(),
        rows,
        metadata,
    })
}

/// Summary lines: largest gaps of the approximations to the exact values,
/// as recomputable from the CSV, and the simulation's interval coverage.
pub fn summary(r: &SweepResult) -> String {
    let mut s = String::new();
    for m in [Method::Main, Method::Corrected] {
        if let Some(d) = r.max_abs_diff_csv(m, Method::Exact) {
            let _ = writeln!(s, "max |{} - exact| = {}", m.name(), format_sig(d));
        }
    }
    if let (Some(ex), Some(_)) = (r.column(Method::Exact), r.column(Method::Sim)) {
        let covered = r
            .rows
            .iter()
            .zip(&ex)
            .filter(|(row, e)| row.ci.is_some_and(|(lo, hi)| lo <= **e && **e <= hi))
            .count();
        let _ = writeln!(s, "sim 95% CI covers exact at {covered} of {} nodes", r.rows.len());
    }
    s
}

/// Writes the CSV and SVG files; if either write fails, whatever was
/// created is removed again.
pub fn write_outputs(r: &SweepResult, csv: Option<&Path>, svg: Option<&Path>, title: &str) -> Result<()> {
    let mut written: Vec<&Path> = Vec::new();
    let outputs = [
        csv.map(|p| (p, r.to_csv())),
        svg.map(|p| (p, render_svg(r, title))),
    ];
    for (path, body) in outputs.into_iter().flatten() {
        if let Err(e) = fs::write(path, body) {
            written.push(path);
            for p in &written {
                let _ = fs::remove_file(p);
            }
            return Err(Error::Io(format!("{}: {e}", path.display())));
        }
        written.push(path);
    }
    Ok(())
}
