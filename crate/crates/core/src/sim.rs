//! Monte Carlo estimate of `P{v < Υ ≤ t | T₁ = v}`.
//!
//! A trajectory starts with the first renewal at time `v` carrying the jump
//! `Y₁`; later renewals are spaced by draws of `T`. Per renewal the stream
//! is consumed as: gap (from the second renewal on), then jump. Crossing is
//! strict, `S_k - c s_k > u`, and a crossing at `s = v` itself is not
//! counted by [`simulate_conditional`].

use rayon::prelude::*;

use crate::approx::CrossingQuery;
use crate::distributions::DistributionSpec;
use crate::error::{Error, Result};
use crate::rng::{substream_seed, RngState};

/// Two-sided 95% normal quantile.
pub const Z95: f64 = 1.959_963_984_540_054;

/// Where a simulated trajectory first crossed the level.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Crossing {
    /// At the first renewal, `Y₁ > u + cv`.
    Immediate,
    /// At a later renewal epoch.
    At(f64),
    /// Not by the horizon.
    None,
}

/// One trajectory up to `horizon`.
pub fn trajectory(
    t_law: &DistributionSpec,
    y_law: &DistributionSpec,
    u: f64,
    c: f64,
    v: f64,
    horizon: f64,
    rng: &mut RngState,
) -> Crossing {
    let mut s = v;
    let mut total = y_law.sample(rng);
    if total - c * s > u {
        return Crossing::Immediate;
    }
    loop {
        s += t_law.sample(rng);
        if s > horizon {
            return Crossing::None;
        }
        total += y_law.sample(rng);
        if total - c * s > u {
            return Crossing::At(s);
        }
    }
}

/// Crossing fraction over a bundle of trajectories with its Wilson 95%
/// interval.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SimEstimate {
    pub estimate: f64,
    pub trials: u64,
    pub successes: u64,
    pub ci_low: f64,
    pub ci_high: f64,
    pub seed: u32,
}

impl SimEstimate {
    pub fn from_counts(successes: u64, trials: u64, seed: u32) -> Self {
        let (ci_low, ci_high) = wilson_interval(successes, trials);
        SimEstimate {
            estimate: successes as f64 / trials as f64,
            trials,
            successes,
            ci_low,
            ci_high,
            seed,
        }
    }

    pub fn covers(&self, p: f64) -> bool {
        self.ci_low <= p && p <= self.ci_high
    }
}

/// Wilson score interval at 95%.
pub fn wilson_interval(successes: u64, trials: u64) -> (f64, f64) {
    let n = trials as f64;
    let p = successes as f64 / n;
    let z2 = Z95 * Z95;
    let denom = 1.0 + z2 / n;
    let centre = (p + z2 / (2.0 * n)) / denom;
    let half = Z95 * (p * (1.0 - p) / n + z2 / (4.0 * n * n)).sqrt() / denom;
    let lo = if successes == 0 { 0.0 } else { (centre - half).max(0.0) };
    let hi = if successes == trials { 1.0 } else { (centre + half).min(1.0) };
    (lo.min(p), hi.max(p))
}

fn check_bundle(q: &CrossingQuery, n_trials: u64) -> Result<()> {
    q.validate()?;
    if !q.t.is_finite() {
        return Err(Error::InvalidHorizon(
            "simulation needs a finite horizon; supply a cap".into(),
        ));
    }
    if n_trials == 0 {
        return Err(Error::Domain("at least one trajectory is required".into()));
    }
    Ok(())
}

/// Estimate `P{v < Υ ≤ t | T₁ = v}` from `n_trials` trajectories drawn from
/// the stream seeded with `seed`.
pub fn simulate_conditional(
    t_law: &DistributionSpec,
    y_law: &DistributionSpec,
    q: &CrossingQuery,
    n_trials: u64,
    seed: u32,
) -> Result<SimEstimate> {
    check_bundle(q, n_trials)?;
    let mut rng = RngState::new(seed);
    let mut hits = 0;
    for _ in 0..n_trials {
        if let Crossing::At(_) = trajectory(t_law, y_law, q.u, q.c, q.v, q.t, &mut rng) {
            hits += 1;
        }
    }
    Ok(SimEstimate::from_counts(hits, n_trials, seed))
}

/// Crossing epochs of `n_trials` trajectories, `Immediate` mapped to `v`.
/// Thresholding one such record at several `t` (or comparing levels) uses
/// common random numbers.
pub fn crossing_times(
    t_law: &DistributionSpec,
    y_law: &DistributionSpec,
    q: &CrossingQuery,
    n_trials: u64,
    seed: u32,
) -> Result<Vec<Option<f64>>> {
    check_bundle(q, n_trials)?;
    let mut rng = RngState::new(seed);
    Ok((0..n_trials)
        .map(|_| match trajectory(t_law, y_law, q.u, q.c, q.v, q.t, &mut rng) {
            Crossing::Immediate => Some(q.v),
            Crossing::At(s) => Some(s),
            Crossing::None => None,
        })
        .collect())
}

/// Extra nodes in `[lo, hi]` at `factor` times the base density.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Refinement {
    pub lo: f64,
    pub hi: f64,
    pub factor: u32,
}

/// Lattice `min, min + Δ, ...` up to `max`, optionally denser on some
/// intervals.
#[derive(Debug, Clone, PartialEq)]
pub struct SweepGrid {
    pub min: f64,
    pub max: f64,
    pub step: f64,
    pub refinements: Vec<Refinement>,
}

impl SweepGrid {
    pub fn new(min: f64, max: f64, step: f64) -> Result<Self> {
        let g = SweepGrid {
            min,
            max,
            step,
            refinements: Vec::new(),
        };
        g.validate()?;
        Ok(g)
    }

    pub fn refine(mut self, lo: f64, hi: f64, factor: u32) -> Result<Self> {
        if !(lo < hi) || factor == 0 {
            return Err(Error::Domain(format!(
                "refinement needs lo < hi and factor >= 1, got [{lo}, {hi}] x{factor}"
            )));
        }
        self.refinements.push(Refinement { lo, hi, factor });
        Ok(self)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.step > 0.0) || !self.step.is_finite() {
            return Err(Error::Domain(format!("step must be positive, got {}", self.step)));
        }
        if !(self.min <= self.max) || !self.min.is_finite() || !self.max.is_finite() {
            return Err(Error::Domain(format!(
                "range [{}, {}] is empty",
                self.min, self.max
            )));
        }
        Ok(())
    }

    /// Sorted, strictly increasing nodes.
    pub fn nodes(&self) -> Vec<f64> {
        let n = ((self.max - self.min) / self.step + 1e-9).floor() as usize;
        let mut xs: Vec<f64> = (0..=n).map(|i| self.min + i as f64 * self.step).collect();
        for r in &self.refinements {
            let h = self.step / r.factor as f64;
            let m = ((r.hi - r.lo) / h + 1e-9).floor() as usize;
            xs.extend(
                (0..=m)
                    .map(|i| r.lo + i as f64 * h)
                    .filter(|x| *x >= self.min && *x <= self.max + 1e-12),
            );
        }
        xs.sort_by(f64::total_cmp);
        xs.dedup_by(|a, b| (*a - *b).abs() <= 1e-9 * self.step);
        xs
    }

    /// Whether `x` lies in the covered range.
    pub fn contains(&self, x: f64) -> bool {
        self.min <= x && x <= self.max
    }
}

/// Simulated estimate at every node of `grid` (a lattice in `c`). Node `i`
/// of the sorted node list uses the substream `substream_seed(master, i)`,
/// so the result does not depend on evaluation order or thread count.
#[allow(clippy::too_many_arguments)]
pub fn sweep_c(
    t_law: &DistributionSpec,
    y_law: &DistributionSpec,
    u: f64,
    v: f64,
    t: f64,
    grid: &SweepGrid,
    n_trials: u64,
    master_seed: u64,
) -> Result<Vec<(f64, SimEstimate)>> {
    grid.validate()?;
    grid.nodes()
        .into_par_iter()
        .enumerate()
        .map(|(i, c)| {
            let q = CrossingQuery::new(u, c, v, t)?;
            let est = simulate_conditional(t_law, y_law, &q, n_trials, substream_seed(master_seed, i as u64))?;
            Ok((c, est))
        })
        .collect()
}
