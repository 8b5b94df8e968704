//! Special functions: the standard normal cdf (plain and in log space) and
//! the modified Bessel function of the first kind of order one.
//!
//! The normal cdf is built on the complementary error function. Far in the
//! lower tail, where `Φ(z)` underflows, the logarithm is taken from the
//! continued fraction of the Mills ratio instead.
//!
//! `I₁` uses its power series up to [`BESSEL_SWITCH`] and the Hankel
//! large-argument expansion above it. The log variants never form `e^z`, so
//! they stay finite for any argument the integrands of this crate produce.

use std::f64::consts::{FRAC_1_SQRT_2, PI};

use crate::error::{domain, Error, Result};

/// Argument at which `I₁` switches from the power series to the asymptotic
/// expansion.
pub const BESSEL_SWITCH: f64 = 30.0;

/// Below this `z`, `ln Φ(z)` comes from the Mills-ratio continued fraction.
const LOG_CDF_CF_SWITCH: f64 = -20.0;

/// ln √(2π)
const LN_SQRT_2PI: f64 = 0.918_938_533_204_672_8;

/// Standard normal cumulative distribution function.
pub fn std_normal_cdf(z: f64) -> f64 {
    0.5 * libm::erfc(-z * FRAC_1_SQRT_2)
}

/// Natural logarithm of the standard normal cdf, accurate deep into the
/// lower tail (tested down to `z = -200`).
pub fn log_std_normal_cdf(z: f64) -> f64 {
    if z.is_nan() {
        return f64::NAN;
    }
    if z > 0.0 {
        (-std_normal_cdf(-z)).ln_1p()
    } else if z >= LOG_CDF_CF_SWITCH {
        std_normal_cdf(z).ln()
    } else if z == f64::NEG_INFINITY {
        f64::NEG_INFINITY
    } else {
        let x = -z;
        -0.5 * x * x - LN_SQRT_2PI + mills_ratio(x).ln()
    }
}

/// Mills ratio `(1 - Φ(x)) / φ(x)` for large positive `x`, from its
/// continued fraction `1/(x + 1/(x + 2/(x + 3/(x + ...))))`.
fn mills_ratio(x: f64) -> f64 {
    // 80 levels is far past convergence for x >= 20.
    let mut f = x;
    for k in (1..=80).rev() {
        f = x + k as f64 / f;
    }
    1.0 / f
}

/// Modified Bessel function of the first kind of order one.
///
/// Fails with [`Error::Overflow`] once `I₁(z)` exceeds the `f64` range
/// (around `z = 713`); use [`log_bessel_i1`] there.
pub fn bessel_i1(z: f64) -> Result<f64> {
    if !(z >= 0.0) {
        return Err(domain(format!("bessel_i1 requires z >= 0, got {z}")));
    }
    if z <= BESSEL_SWITCH {
        return Ok(i1_series(z));
    }
    let v = (z - 0.5 * (2.0 * PI * z).ln() + i1_asymptotic_sum(z).ln()).exp();
    if v.is_finite() {
        Ok(v)
    } else {
        Err(Error::Overflow(format!(
            "I1({z}) exceeds f64 range; use log_bessel_i1"
        )))
    }
}

/// `ln I₁(z)` for `z > 0`.
pub fn log_bessel_i1(z: f64) -> Result<f64> {
    if !(z > 0.0) {
        return Err(domain(format!("log_bessel_i1 requires z > 0, got {z}")));
    }
    if z <= BESSEL_SWITCH {
        Ok(i1_series(z).ln())
    } else {
        Ok(i1_log_asymptotic(z))
    }
}

/// `ln(I₁(z) / (z/2))`, which is smooth on `z >= 0` and vanishes at zero.
///
/// This is the form the exact Exponential formula needs: its integrand
/// carries `I₁(w)` divided by `w/2`, and the quotient has a removable
/// singularity at `w = 0`.
pub fn log_bessel_i1_ratio(z: f64) -> Result<f64> {
    if !(z >= 0.0) {
        return Err(domain(format!("log_bessel_i1_ratio requires z >= 0, got {z}")));
    }
    if z <= BESSEL_SWITCH {
        // sum_k (z/2)^{2k} / (k! (k+1)!) = 1 + rest
        let q = 0.25 * z * z;
        let mut term = 1.0;
        let mut rest = 0.0;
        let mut k = 0.0;
        loop {
            term *= q / ((k + 1.0) * (k + 2.0));
            rest += term;
            k += 1.0;
            if term <= 1e-17 * (1.0 + rest) {
                break;
            }
        }
        Ok(rest.ln_1p())
    } else {
        Ok(i1_log_asymptotic(z) - (0.5 * z).ln())
    }
}

/// `ln(I₁(z) e^{-z})` for `z > 0`.
///
/// Pairing this with an exponent computed separately lets callers cancel the
/// `e^z` growth analytically instead of subtracting two huge numbers.
pub fn log_bessel_i1_scaled(z: f64) -> Result<f64> {
    if !(z > 0.0) {
        return Err(domain(format!("log_bessel_i1_scaled requires z > 0, got {z}")));
    }
    if z <= BESSEL_SWITCH {
        Ok(i1_series(z).ln() - z)
    } else {
        Ok(-0.5 * (2.0 * PI * z).ln() + i1_asymptotic_sum(z).ln())
    }
}

fn i1_series(z: f64) -> f64 {
    let half = 0.5 * z;
    let q = half * half;
    let mut term = half;
    let mut sum = half;
    let mut k = 0.0;
    while term > 1e-17 * sum {
        term *= q / ((k + 1.0) * (k + 2.0));
        sum += term;
        k += 1.0;
    }
    sum
}

fn i1_log_asymptotic(z: f64) -> f64 {
    z + (i1_asymptotic_sum(z).ln() - 0.5 * (2.0 * PI * z).ln())
}

/// `1 - 3/(8z) - 15/(128z²) - ...`, summed until the terms stop shrinking
/// or fall below double precision.
fn i1_asymptotic_sum(z: f64) -> f64 {
    let mut term = 1.0_f64;
    let mut sum = 1.0;
    for k in 1..200 {
        let odd = (2 * k - 1) as f64;
        let next = -term * (4.0 - odd * odd) / (8.0 * k as f64 * z);
        if next.abs() >= term.abs() {
            break;
        }
        term = next;
        sum += term;
        if term.abs() < 1e-17 * sum.abs() {
            break;
        }
    }
    sum
}

/// `ln n!` by direct summation.
pub fn ln_factorial(n: u32) -> f64 {
    (2..=n).map(|k| (k as f64).ln()).sum()
}
