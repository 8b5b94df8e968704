//! Exact results when both `T` and `Y` are Exponential.
//!
//! With `T ~ Exp(λ)`, `Y ~ Exp(μ)` and `a = u + cv`,
//!
//! ```text
//! P{v < Υ ≤ t | T₁ = v} = λμa ∫₀^{t-v} I₁(w)/(w/2) e^{-μa - (μc+λ)y} dy,
//! w = 2 √(λμc (y + a/c) y).
//! ```
//!
//! For `t = 1000` the Bessel argument runs past 2000, so the integrand is
//! built in log space, and for large `w` the growth `e^w` is cancelled
//! against `e^{-(μc+λ)y}` analytically.

use std::cell::{Cell, RefCell};

use crate::approx::CrossingQuery;
use crate::error::{Error, Result};
use crate::quad;
use crate::specfun::{log_bessel_i1_ratio, log_bessel_i1_scaled, BESSEL_SWITCH};

/// Default absolute tolerance of [`exact_conditional`].
pub const EXACT_TOL: f64 = 1e-11;

/// Rates of the Exponential `T` (`lambda`) and `Y` (`mu`).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ExpExpModel {
    pub lambda: f64,
    pub mu: f64,
}

impl ExpExpModel {
    pub fn new(lambda: f64, mu: f64) -> Result<Self> {
        if !(lambda > 0.0 && lambda.is_finite() && mu > 0.0 && mu.is_finite()) {
            return Err(Error::Domain(format!(
                "exponential rates must be positive, got lambda={lambda}, mu={mu}"
            )));
        }
        Ok(ExpExpModel { lambda, mu })
    }
}

struct Integrand {
    ln_pref: f64,
    /// `4λμc`
    w2: f64,
    /// `a / c`
    q0: f64,
    /// `μc + λ`
    decay: f64,
    /// `2√(λμc)`
    grow: f64,
    /// `(√(μc) - √λ)²`
    net: f64,
}

impl Integrand {
    fn new(m: &ExpExpModel, q: &CrossingQuery) -> Self {
        let (lam, mu, c) = (m.lambda, m.mu, q.c);
        let a = q.level();
        Integrand {
            ln_pref: (lam * mu * a).ln() - mu * a,
            w2: 4.0 * lam * mu * c,
            q0: a / c,
            decay: mu * c + lam,
            grow: 2.0 * (lam * mu * c).sqrt(),
            net: ((mu * c).sqrt() - lam.sqrt()).powi(2),
        }
    }

    fn eval(&self, y: f64) -> f64 {
        if y <= 0.0 {
            return self.ln_pref.exp();
        }
        let root = (y * (y + self.q0)).sqrt();
        let w = (self.w2 * y * (y + self.q0)).sqrt();
        let ln = if w <= BESSEL_SWITCH {
            self.ln_pref + log_bessel_i1_ratio(w).unwrap_or(0.0) - self.decay * y
        } else {
            // w - (μc+λ)y = 2√(λμc)(root - y) - (√(μc)-√λ)² y, with root - y
            // rewritten to avoid cancellation
            let excess = self.grow * (y * self.q0 / (root + y)) - self.net * y;
            self.ln_pref + excess + log_bessel_i1_scaled(w).unwrap_or(0.0) - (0.5 * w).ln()
        };
        ln.exp()
    }
}

/// `P{v < Υ ≤ t | T₁ = v}` for the Exponential pair, to absolute tolerance
/// [`EXACT_TOL`]. `t = ∞` is handled by mapping the tail of the integral to
/// a finite interval.
pub fn exact_conditional(m: &ExpExpModel, q: &CrossingQuery) -> Result<f64> {
    exact_conditional_tol(m, q, EXACT_TOL)
}

/// [`exact_conditional`] with an explicit absolute tolerance.
pub fn exact_conditional_tol(m: &ExpExpModel, q: &CrossingQuery, tol: f64) -> Result<f64> {
    q.validate()?;
    let f = Integrand::new(m, q);
    let a = q.level();
    let h = (0.25 / f.decay).min(1.0 / (m.lambda * m.mu * a));
    let span = q.t - q.v;
    if span == 0.0 {
        return Ok(0.0);
    }
    if span.is_finite() {
        let breaks = quad::geometric_breaks(0.0, span, h);
        let mut p = quad::integrate_panels(|y| f.eval(y), &breaks, tol)?;
        // tiny probabilities get a relative tolerance instead
        if p < 1e3 * tol {
            p = quad::integrate_panels(|y| f.eval(y), &breaks, (1e-9 * p).max(1e-300))?;
        }
        return Ok(p.min(1.0));
    }
    let y0 = 1e4f64.max(200.0 * a);
    let breaks = quad::geometric_breaks(0.0, y0, h);
    let head = quad::integrate_panels(|y| f.eval(y), &breaks, 0.5 * tol)?;
    // y = y0 / (1 - s)², s in [0, 1); the endpoint s = 1 is nudged inwards,
    // where the integrand is either zero or at its finite limit
    let tail = quad::adaptive_simpson(
        |s: f64| {
            let s = s.min(1.0 - 1e-7);
            let one = 1.0 - s;
            let y = y0 / (one * one);
            f.eval(y) * 2.0 * y0 / (one * one * one)
        },
        0.0,
        1.0,
        0.5 * tol,
    )?;
    Ok((head + tail).min(1.0))
}

/// Series form of the same probability: over `z ∈ [v, t]`,
/// `(u+cv)/(u+cz) Σ_n P{N(u+cz) = n} f_T^{*(n-1)}(z-v)`, with the count of
/// claims Poisson and the renewal density Erlang.
///
/// Terms are added until the remaining tail, bounded geometrically, is
/// below `1e-12` over the whole interval; if that needs more than `nmax`
/// terms the result is [`Error::TruncationInsufficient`].
pub fn series_oracle(m: &ExpExpModel, q: &CrossingQuery, nmax: usize) -> Result<f64> {
    series_impl(m, q, nmax, true)
}

/// The series with exactly `nmax` terms and no tail check.
pub fn series_oracle_truncated(m: &ExpExpModel, q: &CrossingQuery, nmax: usize) -> Result<f64> {
    series_impl(m, q, nmax, false)
}

fn series_impl(m: &ExpExpModel, q: &CrossingQuery, nmax: usize, checked: bool) -> Result<f64> {
    q.validate()?;
    if q.t.is_infinite() {
        return Err(Error::InvalidHorizon("the series oracle needs a finite horizon".into()));
    }
    if nmax == 0 {
        return Err(Error::Domain("nmax must be at least 1".into()));
    }
    let span = q.t - q.v;
    if span == 0.0 {
        return Ok(0.0);
    }
    let (lam, mu) = (m.lambda, m.mu);
    let a = q.level();
    let tail_budget = 1e-12 / span;
    let worst = Cell::new(0.0f64);
    let integrand = |y: f64| {
        let s = a + q.c * y;
        let ms = mu * s;
        let ly = lam * y;
        // n = 1: Poisson(1; μs) times the Exponential density at y
        let mut ln_term = ms.ln() - ms + lam.ln() - ly;
        let mut sum = ln_term.exp();
        if y > 0.0 {
            let step_ln = (ms * ly).ln();
            let mut n = 1usize;
            loop {
                let nf = n as f64;
                let ratio = ms * ly / ((nf + 1.0) * nf);
                if checked && ratio < 1.0 {
                    let bound = ln_term.exp() * ratio / (1.0 - ratio);
                    if bound * a / s < tail_budget {
                        break;
                    }
                }
                if n >= nmax {
                    if checked {
                        let bound = if ratio < 1.0 {
                            ln_term.exp() * ratio / (1.0 - ratio)
                        } else {
                            f64::INFINITY
                        };
                        worst.set(worst.get().max(bound * a / s));
                    }
                    break;
                }
                ln_term += step_ln - ((nf + 1.0) * nf).ln();
                sum += ln_term.exp();
                n += 1;
            }
        }
        a / s * sum
    };
    let h = (0.25 / (mu * q.c + lam)).min(1.0 / (lam * mu * a));
    let breaks = quad::geometric_breaks(0.0, span, h);
    let total = quad::integrate_panels(integrand, &breaks, 1e-12)?;
    if checked && worst.get() > 0.0 {
        return Err(Error::TruncationInsufficient {
            nmax,
            tail: worst.get() * span,
        });
    }
    Ok(total)
}

/// Unconditional `P{Υ ≤ t}` when `T₁` is Exponential with the same rate as
/// `T`: the immediate-crossing term plus `λ ∫₀ᵗ P{v < Υ ≤ t | T₁ = v} e^{-λv} dv`.
pub fn unconditional_exp_t1(m: &ExpExpModel, u: f64, c: f64, t: f64) -> Result<f64> {
    if !(t > 0.0) || !t.is_finite() {
        return Err(Error::InvalidHorizon(format!("t must be positive and finite, got {t}")));
    }
    CrossingQuery::new(u, c, 0.0, t)?;
    let (lam, mu) = (m.lambda, m.mu);
    let k = lam + c * mu;
    let first = lam * (-mu * u).exp() / k * -(-k * t).exp_m1();
    let err = RefCell::new(None);
    let inner = |v: f64| {
        if err.borrow().is_some() {
            return 0.0;
        }
        match CrossingQuery::new(u, c, v, t).and_then(|q| exact_conditional_tol(m, &q, 1e-12)) {
            Ok(p) => p * (-lam * v).exp(),
            Err(e) => {
                *err.borrow_mut() = Some(e);
                0.0
            }
        }
    };
    let breaks = quad::geometric_breaks(0.0, t, 0.25 / lam);
    let second = quad::integrate_panels(inner, &breaks, 1e-9)?;
    if let Some(e) = err.into_inner() {
        return Err(e);
    }
    Ok(first + lam * second)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn unit() -> ExpExpModel {
        ExpExpModel::new(1.0, 1.0).unwrap()
    }

    #[test]
    fn empty_horizon() {
        let q = CrossingQuery::new(10.0, 1.0, 3.0, 3.0).unwrap();
        assert_eq!(exact_conditional(&unit(), &q).unwrap(), 0.0);
        assert_eq!(series_oracle(&unit(), &q, 200).unwrap(), 0.0);
    }

    #[test]
    fn reference_value() {
        // agrees with the series representation computed independently
        let q = CrossingQuery::new(10.0, 1.0, 0.0, 100.0).unwrap();
        let p = exact_conditional(&unit(), &q).unwrap();
        assert!((p - 0.490_24).abs() < 1e-5, "{p}");
        let s = series_oracle(&unit(), &q, 2000).unwrap();
        assert!((p - s).abs() < 1e-8, "{p} vs {s}");
    }

    #[test]
    fn single_claim_term_is_a_lower_bound() {
        let q = CrossingQuery::new(10.0, 1.0, 0.0, 100.0).unwrap();
        let one = series_oracle_truncated(&unit(), &q, 1).unwrap();
        let many = series_oracle(&unit(), &q, 200).unwrap();
        assert!(one > 0.0 && one <= many);
        assert!(matches!(
            series_oracle(&unit(), &q, 1),
            Err(Error::TruncationInsufficient { .. })
        ));
    }

    #[test]
    fn large_level_underflows_gracefully() {
        let q = CrossingQuery::new(200.0, 1.5, 0.0, 1000.0).unwrap();
        let p = exact_conditional(&unit(), &q).unwrap();
        // the e^{-μu} prefactor is largely undone by the Bessel growth; the
        // reference comes from 30-digit quadrature of the same integral
        assert!(((p - 1.114_383_157_840_178e-29) / p).abs() < 1e-7, "{p:e}");
    }

    #[test]
    fn large_bessel_arguments() {
        for c in [0.5, 1.0, 2.0] {
            let q = CrossingQuery::new(50.0, c, 0.0, 1000.0).unwrap();
            let p = exact_conditional(&unit(), &q).unwrap();
            assert!(p.is_finite() && (0.0..=1.0).contains(&p));
        }
    }

    #[test]
    fn infinite_horizon_extends_finite() {
        for c in [0.7, 1.0, 1.3] {
            let q = CrossingQuery::new(10.0, c, 0.0, f64::INFINITY).unwrap();
            let inf = exact_conditional(&unit(), &q).unwrap();
            let fin = exact_conditional(&unit(), &q.with_t(1e5)).unwrap();
            assert!(inf >= fin - 1e-10 && inf <= 1.0);
            if c != 1.0 {
                assert!((inf - fin).abs() < 1e-9, "c={c}: {inf} vs {fin}");
            }
        }
    }

    #[test]
    fn unconditional_limits() {
        let m = unit();
        let p = unconditional_exp_t1(&m, 10.0, 1.0, 1e-9).unwrap();
        assert!(p.abs() < 1e-12);
        let p = unconditional_exp_t1(&m, 10.0, 1.0, 100.0).unwrap();
        let first = (-10f64).exp() / 2.0 * (1.0 - (-200f64).exp());
        assert!(p > first && p < 1.0);
        assert!(unconditional_exp_t1(&m, 10.0, 1.0, f64::INFINITY).is_err());
    }
}
