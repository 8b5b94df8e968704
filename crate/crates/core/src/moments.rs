//! Model constants `M`, `D²`, `c*` and the coefficients of the correction
//! factors `K_F`, `K_S`.
//!
//! Two routes are offered. [`model_constants_generic`] builds everything
//! from the first three moments of `T` and `Y`. [`model_constants_lemma`]
//! evaluates pair-specific closed forms; it exists to cross-check the
//! generic path, which is the one to trust when the two disagree.

use std::fmt;

use crate::distributions::{DistributionSpec, MomentSet};
use crate::error::{Error, Result};

/// Constants entering the approximations. `K_F = kf_coeff / c` and
/// `K_S = ks_coeff / c`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ModelConstants {
    pub m: f64,
    pub d2: f64,
    pub c_star: f64,
    pub kf_coeff: f64,
    pub ks_coeff: f64,
}

impl ModelConstants {
    fn new(m: f64, d2: f64, kf_coeff: f64, ks_coeff: f64) -> Result<Self> {
        if !(d2 > 0.0) || !d2.is_finite() {
            return Err(Error::Domain(format!("D^2 must be positive, got {d2}")));
        }
        if !(m > 0.0) || !m.is_finite() {
            return Err(Error::Domain(format!("M must be positive, got {m}")));
        }
        Ok(ModelConstants {
            m,
            d2,
            c_star: 1.0 / m,
            kf_coeff,
            ks_coeff,
        })
    }

    /// `K_F` at rate `c`.
    pub fn kf(&self, c: f64) -> f64 {
        self.kf_coeff / c
    }

    /// `K_S` at rate `c`.
    pub fn ks(&self, c: f64) -> f64 {
        self.ks_coeff / c
    }

    /// The same constants with both correction coefficients zeroed, which
    /// turns the corrected expansion into the main term.
    pub fn without_corrections(self) -> Self {
        ModelConstants {
            kf_coeff: 0.0,
            ks_coeff: 0.0,
            ..self
        }
    }
}

impl fmt::Display for ModelConstants {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "M      = {:.6}", self.m)?;
        writeln!(f, "D^2    = {:.6}", self.d2)?;
        writeln!(f, "c*     = {:.6}", self.c_star)?;
        writeln!(f, "K_F*c  = {:.6}", self.kf_coeff)?;
        write!(f, "K_S*c  = {:.6}", self.ks_coeff)
    }
}

/// Constants from the moments of `T` and `Y`.
pub fn model_constants_generic(t: &MomentSet, y: &MomentSet) -> Result<ModelConstants> {
    let (et, dt, ct) = (t.mean, t.variance, t.central3);
    let (ey, dy, cy) = (y.mean, y.variance, y.central3);
    let m = et / ey;
    let d2 = (et * et * dy + ey * ey * dt) / (ey * ey * ey);
    if !(d2 > 0.0) {
        return Err(Error::Domain(format!("D^2 must be positive, got {d2}")));
    }
    let kf = ct / (2.0 * d2 * dt) * (et * et * dy / (d2 * ey.powi(3)) - 1.0)
        - et * cy / (2.0 * d2 * ey * dy) * (dt / (d2 * ey) - 1.0)
        + et / (2.0 * d2);
    let ks = ct / (6.0 * d2 * d2 * ey) - et.powi(3) * cy / (6.0 * d2 * d2 * ey.powi(4))
        + et * dy / (2.0 * d2 * ey * ey);
    ModelConstants::new(m, d2, kf, ks)
}

/// Constants for a pair of specs through their moments.
pub fn model_constants(t: &DistributionSpec, y: &DistributionSpec) -> Result<ModelConstants> {
    model_constants_generic(&t.moments()?, &y.moments()?)
}

/// Closed-form constants for the supported `(T, Y)` pairs:
/// Exponential–Exponential, Erlang–Erlang (an Exponential on either side is
/// Erlang of shape one), Mixture–Pareto, Erlang–Pareto and Pareto–Pareto.
pub fn model_constants_lemma(t: &DistributionSpec, y: &DistributionSpec) -> Result<ModelConstants> {
    use DistributionSpec::*;
    t.validate()?;
    y.validate()?;
    match (*t, *y) {
        (Exponential { rate: lam }, Exponential { rate: mu }) => {
            let k = lam / (4.0 * mu);
            ModelConstants::new(mu / lam, 2.0 * mu / (lam * lam), k, k)
        }
        (Exponential { .. } | Erlang { .. }, Exponential { .. } | Erlang { .. }) => {
            let (lam, k) = erlang_params(t);
            let (mu, m) = erlang_params(y);
            erlang_erlang(lam, k, mu, m)
        }
        (Mix2Exp { rate1, rate2, p }, Pareto { shape, scale }) => {
            pareto_moments_ok(shape)?;
            mixture_pareto(rate1, rate2, p, shape, scale)
        }
        (Exponential { .. } | Erlang { .. }, Pareto { shape, scale }) => {
            pareto_moments_ok(shape)?;
            let (lam, k) = erlang_params(t);
            erlang_pareto(lam, k, shape, scale)
        }
        (Pareto { shape: d, scale: g }, Pareto { shape: a, scale: b }) => {
            pareto_moments_ok(a)?;
            pareto_moments_ok(d)?;
            pareto_pareto(d, g, a, b)
        }
        _ => Err(Error::UnsupportedPair(format!("T = {t}, Y = {y}"))),
    }
}

fn erlang_params(d: &DistributionSpec) -> (f64, f64) {
    match *d {
        DistributionSpec::Exponential { rate } => (rate, 1.0),
        DistributionSpec::Erlang { rate, shape } => (rate, shape as f64),
        _ => unreachable!("caller matched an Erlang-like spec"),
    }
}

fn pareto_moments_ok(a: f64) -> Result<()> {
    if a > 3.0 {
        Ok(())
    } else {
        Err(Error::MomentUndefined(format!(
            "Pareto third central moment needs shape > 3, got {a}"
        )))
    }
}

fn erlang_erlang(lam: f64, k: f64, mu: f64, m: f64) -> Result<ModelConstants> {
    let em = mu * k / (lam * m);
    let d2 = mu * k * (k + m) / (m * m * lam * lam);
    let kf = lam * m * ((2.0 + m) * k - 2.0 * m) / (2.0 * mu * k * (k + m));
    let ks = lam * m * (k + 2.0 * m) / (6.0 * mu * k * (k + m));
    ModelConstants::new(em, d2, kf, ks)
}

fn erlang_pareto(lam: f64, k: f64, a: f64, b: f64) -> Result<ModelConstants> {
    let em = k * (a - 1.0) * b / lam;
    let d2 = k * (a - 1.0) * b / (lam * lam) * (1.0 + k * a / (a - 2.0));
    let w = -2.0 + a + a * k;
    let den = (a - 1.0) * (a - 3.0) * b * k * w * w;
    let kf = (a - 2.0)
        * lam
        * (a * a * (-2.0 + k + 3.0 * k * k) - a * (-10.0 + 5.0 * k + k * k) + 6.0 * (k - 2.0))
        / (2.0 * den);
    let ks = lam
        * (a.powi(3) * (2.0 + 3.0 * k + k * k) - a * a * (14.0 + 15.0 * k + 7.0 * k * k)
            + 2.0 * a * (16.0 + 9.0 * k + 2.0 * k * k)
            - 24.0)
        / (6.0 * den);
    ModelConstants::new(em, d2, kf, ks)
}

// T Pareto(d, g), Y Pareto(a, b).
fn pareto_pareto(d: f64, g: f64, a: f64, b: f64) -> Result<ModelConstants> {
    let em = (a - 1.0) * b / ((d - 1.0) * g);
    let d2 = (a / (a - 2.0) + d / (d - 2.0)) * (a - 1.0) * b / ((d - 1.0).powi(2) * g * g);
    let w = a * d - a - d;
    let den = 4.0 * b * (a - 3.0) * (a - 1.0) * (d - 3.0) * w * w;
    let pf = a * a * (9.0 - 10.0 * d + d * d) + a * (-3.0 + 15.0 * d + 2.0 * d * d)
        - 3.0 * d * (5.0 + d);
    let ps = a.powi(3) * (d - 1.0).powi(2) - 4.0 * d * (1.0 + d)
        + a * a * (-7.0 + 11.0 * d - 6.0 * d * d)
        + a * (4.0 - 7.0 * d + 9.0 * d * d);
    let kf = g * (a - 2.0) * (d - 2.0) * (d - 1.0) * pf / den;
    let ks = g * (d - 2.0) * (d - 1.0) * ps / den;
    ModelConstants::new(em, d2, kf, ks)
}

// T mixture of Exponential(l1), Exponential(l2) with weights p, q; Y Pareto(a, b).
fn mixture_pareto(l1: f64, l2: f64, p: f64, a: f64, b: f64) -> Result<ModelConstants> {
    let q = 1.0 - p;
    let et = p / l1 + q / l2;
    let em = (a - 1.0) * b * et;
    let d2 = (a - 1.0)
        * b
        * (a / (a - 2.0) * et * et
            + (l2 * l2 * p + l1 * l1 * q + (l1 - l2).powi(2) * p * q) / (l1 * l1 * l2 * l2));
    let w = 4.0 * l1 * l2 * p * q
        + 2.0 * l1 * l1 * q * (a - (1.0 + p))
        + 2.0 * l2 * l2 * p * (a - (1.0 + q));
    let (a2, a3, p2) = (a * a, a * a * a, p * p);
    let (l13, l23) = (l1.powi(3), l2.powi(3));
    let pf = -q * l13 * (-4.0 * a2 * p + a2 + 7.0 * a * p2 + 6.0 * a * p + 2.0 * a - 9.0 * p2 - 6.0 * p - 3.0)
        + p * q * l1 * l1 * l2 * (-4.0 * a2 + 21.0 * a * p - a - 27.0 * p + 3.0)
        - p * q * l1 * l2 * l2 * (4.0 * a2 + 21.0 * a * p - 20.0 * a - 27.0 * p + 24.0)
        - p * l23
            * (4.0 * a2 * p - 3.0 * a2 + 7.0 * a * p2 - 20.0 * a * p + 15.0 * a - 9.0 * p2 + 24.0 * p
                - 18.0);
    let ps = -q * l13
        * (-a3 + a2 * p2 + 6.0 * a2 - 3.0 * a * p2 - 4.0 * a * p - 9.0 * a + 4.0 * p2 + 4.0 * p + 4.0)
        + p * q * l1 * l1 * l2 * (3.0 * a2 * p - a2 - 9.0 * a * p - a + 12.0 * p)
        - p * q * l1 * l2 * l2 * (3.0 * a2 * p - 2.0 * a2 - 9.0 * a * p + 10.0 * a + 12.0 * p - 12.0)
        - p * l23
            * (-a3 + a2 * p2 - 2.0 * a2 * p + 7.0 * a2 - 3.0 * a * p2 + 10.0 * a * p - 16.0 * a
                + 4.0 * p2
                - 12.0 * p
                + 12.0);
    let den = (a - 3.0) * (a - 1.0) * b * w * w;
    let kf = -(a - 2.0) * l1 * l2 * pf / den;
    let ks = l1 * l2 * ps / den;
    ModelConstants::new(em, d2, kf, ks)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn spec(s: &str) -> DistributionSpec {
        s.parse().unwrap()
    }

    fn rel(a: f64, b: f64) -> f64 {
        if b == 0.0 {
            a.abs()
        } else {
            ((a - b) / b).abs()
        }
    }

    fn assert_agree(t: &str, y: &str) {
        let g = model_constants(&spec(t), &spec(y)).unwrap();
        let l = model_constants_lemma(&spec(t), &spec(y)).unwrap();
        for (x, z) in [
            (g.m, l.m),
            (g.d2, l.d2),
            (g.kf_coeff, l.kf_coeff),
            (g.ks_coeff, l.ks_coeff),
        ] {
            assert!(rel(z, x) < 1e-10, "{t} / {y}: {g:?} vs {l:?}");
        }
    }

    #[test]
    fn exponential_pair() {
        let k = model_constants(&spec("exp:1"), &spec("exp:1")).unwrap();
        assert!(rel(k.m, 1.0) < 1e-15);
        assert!(rel(k.d2, 2.0) < 1e-15);
        assert!(rel(k.kf_coeff, 0.25) < 1e-15);
        assert!(rel(k.ks_coeff, 0.25) < 1e-15);
        let k = model_constants(&spec("exp:2"), &spec("exp:3")).unwrap();
        assert!(rel(k.m, 1.5) < 1e-15);
        assert!(rel(k.d2, 1.5) < 1e-15);
        assert!(rel(k.kf_coeff, 2.0 / 12.0) < 1e-14);
    }

    #[test]
    fn erlang_pair_caption() {
        let k = model_constants(&spec("erlang:1.2,2"), &spec("erlang:1,2")).unwrap();
        assert!(rel(k.c_star, 1.2) < 1e-14);
        assert!(rel(k.d2, 1.388_888_888_888_889) < 1e-14);
        assert!(rel(k.kf_coeff, 0.6) < 1e-14);
        assert!(rel(k.ks_coeff, 0.3) < 1e-14);
    }

    #[test]
    fn lemmas_match_generic() {
        assert_agree("exp:1.3", "exp:0.7");
        assert_agree("erlang:1.2,2", "erlang:1,2");
        assert_agree("erlang:0.8,3", "exp:1.5");
        assert_agree("exp:0.8", "erlang:1.5,4");
        assert_agree("erlang:1,1", "erlang:1,1");
        assert_agree("mix2exp:1,2,0.6667", "pareto:4,0.35");
        assert_agree("mix2exp:0.3,5,0.1", "pareto:7.5,2");
        assert_agree("erlang:6,4", "pareto:4,0.4");
        assert_agree("exp:2", "pareto:3.5,1.1");
        assert_agree("pareto:4,0.4", "pareto:4,0.4");
        assert_agree("pareto:5.5,0.2", "pareto:3.2,3");
    }

    #[test]
    fn unsupported_pairs() {
        let r = model_constants_lemma(&spec("mix2exp:1,2,0.5"), &spec("exp:1"));
        assert!(matches!(r, Err(Error::UnsupportedPair(_))));
        let r = model_constants_lemma(&spec("exp:1"), &spec("mix2exp:1,2,0.5"));
        assert!(matches!(r, Err(Error::UnsupportedPair(_))));
        let r = model_constants_lemma(&spec("erlang:1,2"), &spec("pareto:3,1"));
        assert!(matches!(r, Err(Error::MomentUndefined(_))));
    }

    #[test]
    fn coefficients_do_not_depend_on_c() {
        let k = model_constants(&spec("erlang:6,4"), &spec("pareto:4,0.4")).unwrap();
        for c in [0.5, 1.0, 2.0] {
            assert!((k.kf(c) * c - k.kf_coeff).abs() < 1e-12);
            assert!((k.ks(c) * c - k.ks_coeff).abs() < 1e-12);
        }
        assert_eq!(k.c_star * k.m, 1.0);
    }
}
