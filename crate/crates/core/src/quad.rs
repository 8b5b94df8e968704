//! Adaptive Simpson quadrature with Richardson correction.
//!
//! Long integration ranges are first cut into panels (see
//! [`geometric_breaks`]) so that features near the left end are not missed
//! by the initial five-point sample; each panel is then refined on its own
//! share of the tolerance.

use crate::error::{Error, Result};

/// Maximum bisection depth per panel.
pub const MAX_DEPTH: u32 = 60;

/// Hard cap on integrand evaluations for a single call.
const MAX_EVALS: usize = 20_000_000;

struct Budget {
    evals: usize,
}

/// Integrate `f` over `[a, b]` to absolute tolerance `abs_tol`.
///
/// The tolerance is floored at the rounding level of the local estimate, so a
/// request below machine precision is met as well as the arithmetic allows.
/// Fails with [`Error::QuadratureTolerance`] when the depth or evaluation
/// limit is reached first.
pub fn adaptive_simpson<F>(f: F, a: f64, b: f64, abs_tol: f64) -> Result<f64>
where
    F: Fn(f64) -> f64,
{
    integrate_panels(f, &[a, b], abs_tol)
}

/// Integrate over consecutive panels `breaks[0..=n]`, sharing `abs_tol`
/// evenly between them.
pub fn integrate_panels<F>(f: F, breaks: &[f64], abs_tol: f64) -> Result<f64>
where
    F: Fn(f64) -> f64,
{
    if breaks.len() < 2 {
        return Ok(0.0);
    }
    let panels = (breaks.len() - 1) as f64;
    let mut budget = Budget { evals: 0 };
    let mut total = 0.0;
    for w in breaks.windows(2) {
        let (a, b) = (w[0], w[1]);
        if a == b {
            continue;
        }
        total += panel(&f, a, b, abs_tol / panels, &mut budget)?;
    }
    Ok(total)
}

fn panel<F>(f: &F, a: f64, b: f64, tol: f64, budget: &mut Budget) -> Result<f64>
where
    F: Fn(f64) -> f64,
{
    let fa = f(a);
    let fb = f(b);
    let m = 0.5 * (a + b);
    let fm = f(m);
    budget.evals += 3;
    let whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
    refine(f, a, fa, m, fm, b, fb, whole, tol, 0, budget)
        .ok_or(Error::QuadratureTolerance { a, b, tol })
}

#[allow(clippy::too_many_arguments)]
fn refine<F>(
    f: &F,
    a: f64,
    fa: f64,
    m: f64,
    fm: f64,
    b: f64,
    fb: f64,
    whole: f64,
    tol: f64,
    depth: u32,
    budget: &mut Budget,
) -> Option<f64>
where
    F: Fn(f64) -> f64,
{
    let lm = 0.5 * (a + m);
    let rm = 0.5 * (m + b);
    let flm = f(lm);
    let frm = f(rm);
    budget.evals += 2;
    let left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
    let right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
    let delta = left + right - whole;
    let floor = 64.0 * f64::EPSILON * (left.abs() + right.abs());
    if !delta.is_finite() {
        return None;
    }
    if delta.abs() <= 15.0 * tol.max(floor) {
        return Some(left + right + delta / 15.0);
    }
    if depth >= MAX_DEPTH || budget.evals > MAX_EVALS || lm <= a || rm >= b {
        return None;
    }
    let l = refine(f, a, fa, lm, flm, m, fm, left, 0.5 * tol, depth + 1, budget)?;
    let r = refine(f, m, fm, rm, frm, b, fb, right, 0.5 * tol, depth + 1, budget)?;
    Some(l + r)
}

/// Breakpoints `a, a+h, a+2h, a+4h, ...` ending exactly at `b`.
///
/// Useful for integrands whose mass sits on a scale of `h` near `a` but
/// whose range extends far beyond it.
pub fn geometric_breaks(a: f64, b: f64, h: f64) -> Vec<f64> {
    let mut out = vec![a];
    if !(b > a) {
        return out;
    }
    let mut x = a + h.max((b - a) * 1e-12);
    while x < b {
        out.push(x);
        x = a + 2.0 * (x - a);
    }
    out.push(b);
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn polynomials_are_exact() {
        let v = adaptive_simpson(|x| x * x * x - 2.0 * x, 0.0, 3.0, 1e-12).unwrap();
        assert!((v - (81.0 / 4.0 - 9.0)).abs() < 1e-12);
    }

    #[test]
    fn smooth_integrand() {
        let v = adaptive_simpson(f64::sin, 0.0, std::f64::consts::PI, 1e-12).unwrap();
        assert!((v - 2.0).abs() < 1e-11);
    }

    #[test]
    fn empty_interval_is_zero() {
        assert_eq!(adaptive_simpson(|x| x.exp(), 2.0, 2.0, 1e-10).unwrap(), 0.0);
    }

    #[test]
    fn panels_catch_narrow_mass() {
        // mass of exp(-x) sits in [0, 10] of a [0, 1e5] range
        let breaks = geometric_breaks(0.0, 1e5, 0.25);
        let v = integrate_panels(|x| (-x).exp(), &breaks, 1e-12).unwrap();
        assert!((v - 1.0).abs() < 1e-11);
        assert_eq!(*breaks.last().unwrap(), 1e5);
        assert!(breaks.windows(2).all(|w| w[1] > w[0]));
    }

    #[test]
    fn non_finite_integrand_fails() {
        let r = adaptive_simpson(|x| 1.0 / x, 0.0, 1.0, 1e-8);
        assert!(matches!(r, Err(Error::QuadratureTolerance { .. })));
    }
}
