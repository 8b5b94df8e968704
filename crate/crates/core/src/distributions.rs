//! Parametric laws for inter-renewal times and jump sizes.
//!
//! Four families are supported: Exponential, a mixture of two Exponentials,
//! Erlang and Pareto (Lomax form, supported on `x > 0`). Each provides a
//! density, cdf, quantile, the first three central moments and
//! inverse-transform sampling from the crate's LCG stream.

use std::fmt;
use std::str::FromStr;

use crate::error::{domain, Error, Result};
use crate::rng::RngState;
use crate::specfun::ln_factorial;

/// A parametric law for `T` or `Y`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum DistributionSpec {
    /// `λ e^{-λx}`
    Exponential { rate: f64 },
    /// `p λ₁ e^{-λ₁x} + q λ₂ e^{-λ₂x}` with `λ₁ < λ₂` and `q = 1 - p`.
    Mix2Exp { rate1: f64, rate2: f64, p: f64 },
    /// Sum of `shape` independent Exponential(`rate`) variables.
    Erlang { rate: f64, shape: u32 },
    /// `a b / (x b + 1)^{a+1}`
    Pareto { shape: f64, scale: f64 },
}

/// Mean, variance and third central moment of a law, with finiteness flags
/// for the third and fourth raw moments.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MomentSet {
    pub mean: f64,
    pub variance: f64,
    pub central3: f64,
    pub third_finite: bool,
    pub fourth_finite: bool,
}

fn positive(name: &str, v: f64) -> Result<()> {
    if v.is_finite() && v > 0.0 {
        Ok(())
    } else {
        Err(domain(format!("{name} must be finite and > 0, got {v}")))
    }
}

impl DistributionSpec {
    pub fn exponential(rate: f64) -> Result<Self> {
        positive("rate", rate)?;
        Ok(DistributionSpec::Exponential { rate })
    }

    pub fn mix2exp(rate1: f64, rate2: f64, p: f64) -> Result<Self> {
        positive("rate1", rate1)?;
        positive("rate2", rate2)?;
        if rate1 >= rate2 {
            return Err(domain(format!(
                "mixture rates must satisfy rate1 < rate2, got {rate1} and {rate2}"
            )));
        }
        if !(0.0..=1.0).contains(&p) {
            return Err(domain(format!("mixture weight p must lie in [0, 1], got {p}")));
        }
        Ok(DistributionSpec::Mix2Exp { rate1, rate2, p })
    }

    pub fn erlang(rate: f64, shape: u32) -> Result<Self> {
        positive("rate", rate)?;
        if shape == 0 {
            return Err(domain("Erlang shape must be a positive integer"));
        }
        Ok(DistributionSpec::Erlang { rate, shape })
    }

    pub fn pareto(shape: f64, scale: f64) -> Result<Self> {
        positive("shape", shape)?;
        positive("scale", scale)?;
        Ok(DistributionSpec::Pareto { shape, scale })
    }

    /// Re-checks the parameter constraints, e.g. after building a variant
    /// literally.
    pub fn validate(&self) -> Result<()> {
        match *self {
            DistributionSpec::Exponential { rate } => Self::exponential(rate).map(|_| ()),
            DistributionSpec::Mix2Exp { rate1, rate2, p } => {
                Self::mix2exp(rate1, rate2, p).map(|_| ())
            }
            DistributionSpec::Erlang { rate, shape } => Self::erlang(rate, shape).map(|_| ()),
            DistributionSpec::Pareto { shape, scale } => Self::pareto(shape, scale).map(|_| ()),
        }
    }

    pub fn is_exponential(&self) -> bool {
        matches!(self, DistributionSpec::Exponential { .. })
    }

    pub fn pdf(&self, x: f64) -> f64 {
        if !(x > 0.0) {
            return 0.0;
        }
        match *self {
            DistributionSpec::Exponential { rate } => rate * (-rate * x).exp(),
            DistributionSpec::Mix2Exp { rate1, rate2, p } => {
                p * rate1 * (-rate1 * x).exp() + (1.0 - p) * rate2 * (-rate2 * x).exp()
            }
            DistributionSpec::Erlang { rate, shape } => {
                let k = shape as f64;
                (k * rate.ln() + (k - 1.0) * x.ln() - rate * x - ln_factorial(shape - 1)).exp()
            }
            DistributionSpec::Pareto { shape, scale } => {
                shape * scale * (-(shape + 1.0) * (x * scale).ln_1p()).exp()
            }
        }
    }

    pub fn cdf(&self, x: f64) -> f64 {
        if !(x > 0.0) {
            return 0.0;
        }
        match *self {
            DistributionSpec::Exponential { rate } => -(-rate * x).exp_m1(),
            DistributionSpec::Mix2Exp { .. } | DistributionSpec::Pareto { .. } => {
                1.0 - self.survival(x)
            }
            DistributionSpec::Erlang { rate, shape } => {
                let lx = rate * x;
                if lx < shape as f64 {
                    poisson_upper_tail(lx, shape)
                } else {
                    1.0 - poisson_lower_sum(lx, shape)
                }
            }
        }
    }

    /// `1 - cdf(x)`, computed without cancellation where the family allows.
    pub fn survival(&self, x: f64) -> f64 {
        if !(x > 0.0) {
            return 1.0;
        }
        match *self {
            DistributionSpec::Exponential { rate } => (-rate * x).exp(),
            DistributionSpec::Mix2Exp { rate1, rate2, p } => {
                p * (-rate1 * x).exp() + (1.0 - p) * (-rate2 * x).exp()
            }
            DistributionSpec::Erlang { rate, shape } => {
                let lx = rate * x;
                if lx < shape as f64 {
                    1.0 - poisson_upper_tail(lx, shape)
                } else {
                    poisson_lower_sum(lx, shape)
                }
            }
            DistributionSpec::Pareto { shape, scale } => (-shape * (x * scale).ln_1p()).exp(),
        }
    }

    /// Inverse cdf on the open unit interval.
    pub fn quantile(&self, u: f64) -> Result<f64> {
        if !(u > 0.0 && u < 1.0) {
            return Err(domain(format!("quantile level must lie in (0, 1), got {u}")));
        }
        Ok(self.quantile_unchecked(u))
    }

    fn quantile_unchecked(&self, u: f64) -> f64 {
        // -ln(1-u) without cancellation for small u
        let neg_log_surv = -(-u).ln_1p();
        match *self {
            DistributionSpec::Exponential { rate } => neg_log_surv / rate,
            DistributionSpec::Pareto { shape, scale } => (neg_log_surv / shape).exp_m1() / scale,
            DistributionSpec::Mix2Exp { rate1, rate2, p } => {
                if rate2 == 2.0 * rate1 {
                    // q w^2 + p w = 1 - u with w = e^{-rate1 x}, rationalised root
                    let q = 1.0 - p;
                    let s = 1.0 - u;
                    let ln_w = std::f64::consts::LN_2 - neg_log_surv
                        - (p + (p * p + 4.0 * q * s).sqrt()).ln();
                    (-ln_w / rate1).max(0.0)
                } else {
                    self.bisect_quantile(u, neg_log_surv / rate1)
                }
            }
            DistributionSpec::Erlang { rate, shape } => {
                let mut hi = (shape as f64 + neg_log_surv) / rate;
                while self.cdf(hi) < u {
                    hi *= 2.0;
                }
                self.bisect_quantile(u, hi)
            }
        }
    }

    fn bisect_quantile(&self, u: f64, hi: f64) -> f64 {
        let mut lo = 0.0;
        let mut hi = hi;
        for _ in 0..200 {
            let mid = 0.5 * (lo + hi);
            if self.cdf(mid) < u {
                lo = mid;
            } else {
                hi = mid;
            }
            if hi - lo <= 1e-12 * hi.max(1e-300) {
                break;
            }
        }
        0.5 * (lo + hi)
    }

    pub fn mean(&self) -> Result<f64> {
        Ok(match *self {
            DistributionSpec::Exponential { rate } => 1.0 / rate,
            DistributionSpec::Mix2Exp { rate1, rate2, p } => p / rate1 + (1.0 - p) / rate2,
            DistributionSpec::Erlang { rate, shape } => shape as f64 / rate,
            DistributionSpec::Pareto { shape: a, scale: b } => {
                if a <= 1.0 {
                    return Err(Error::MomentUndefined(format!(
                        "Pareto mean needs shape > 1, got {a}"
                    )));
                }
                1.0 / ((a - 1.0) * b)
            }
        })
    }

    pub fn variance(&self) -> Result<f64> {
        Ok(match *self {
            DistributionSpec::Exponential { rate } => 1.0 / (rate * rate),
            DistributionSpec::Mix2Exp { rate1: l1, rate2: l2, p } => {
                let q = 1.0 - p;
                (q * l1 * l1 + p * l2 * l2 + p * q * (l1 - l2).powi(2)) / (l1 * l1 * l2 * l2)
            }
            DistributionSpec::Erlang { rate, shape } => shape as f64 / (rate * rate),
            DistributionSpec::Pareto { shape: a, scale: b } => {
                if a <= 2.0 {
                    return Err(Error::MomentUndefined(format!(
                        "Pareto variance needs shape > 2, got {a}"
                    )));
                }
                a / ((a - 1.0).powi(2) * (a - 2.0) * b * b)
            }
        })
    }

    /// Third central moment `E(X - EX)^3`.
    pub fn central3(&self) -> Result<f64> {
        Ok(match *self {
            DistributionSpec::Exponential { rate } => 2.0 / rate.powi(3),
            DistributionSpec::Mix2Exp { rate1: l1, rate2: l2, p } => {
                let q = 1.0 - p;
                -6.0 * p * q * q / (l1 * l1 * l2) - 6.0 * p * p * q / (l1 * l2 * l2)
                    + 2.0 * p * (3.0 * q + p * p) / l1.powi(3)
                    + 2.0 * q * (3.0 * p + q * q) / l2.powi(3)
            }
            DistributionSpec::Erlang { rate, shape } => 2.0 * shape as f64 / rate.powi(3),
            DistributionSpec::Pareto { shape: a, scale: b } => {
                if a <= 3.0 {
                    return Err(Error::MomentUndefined(format!(
                        "Pareto third central moment needs shape > 3, got {a}"
                    )));
                }
                2.0 * a * (a + 1.0) / ((a - 1.0).powi(3) * (a - 2.0) * (a - 3.0) * b.powi(3))
            }
        })
    }

    /// Mean, variance and third central moment; all three must be finite.
    pub fn moments(&self) -> Result<MomentSet> {
        let (third_finite, fourth_finite) = match *self {
            DistributionSpec::Pareto { shape, .. } => (shape > 3.0, shape > 4.0),
            _ => (true, true),
        };
        Ok(MomentSet {
            mean: self.mean()?,
            variance: self.variance()?,
            central3: self.central3()?,
            third_finite,
            fourth_finite,
        })
    }

    /// Draws one variate by inverse transform. Erlang consumes exactly
    /// `shape` uniforms, every other family exactly one.
    pub fn sample(&self, rng: &mut RngState) -> f64 {
        match *self {
            DistributionSpec::Erlang { rate, shape } => (0..shape)
                .map(|_| -(-rng.next_uniform()).ln_1p() / rate)
                .sum(),
            _ => self.quantile_unchecked(rng.next_uniform()),
        }
    }

    /// Uniforms consumed by one call to [`sample`](Self::sample).
    pub fn uniforms_per_draw(&self) -> u32 {
        match *self {
            DistributionSpec::Erlang { shape, .. } => shape,
            _ => 1,
        }
    }

    /// Warning for laws whose fourth moment is infinite: the corrected
    /// approximation's error order is then not guaranteed.
    pub fn approximation_warning(&self) -> Option<String> {
        match *self {
            DistributionSpec::Pareto { shape, .. } if shape <= 4.0 => Some(format!(
                "Pareto shape {shape} <= 4: fourth moment is infinite, the error order \
                 of the corrected approximation is not guaranteed"
            )),
            _ => None,
        }
    }
}

/// `e^{-m} sum_{j<k} m^j / j!`
fn poisson_lower_sum(m: f64, k: u32) -> f64 {
    let lm = m.ln();
    (0..k)
        .map(|j| (-m + j as f64 * lm - ln_factorial(j)).exp())
        .sum()
}

/// `e^{-m} sum_{j>=k} m^j / j!`, for `m < k` where the terms fall off fast.
fn poisson_upper_tail(m: f64, k: u32) -> f64 {
    let mut term = (-m + k as f64 * m.ln() - ln_factorial(k)).exp();
    let mut sum = term;
    let mut j = k as f64;
    while term > 1e-18 * sum {
        j += 1.0;
        term *= m / j;
        sum += term;
    }
    sum
}

impl fmt::Display for DistributionSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            DistributionSpec::Exponential { rate } => write!(f, "exp:{rate}"),
            DistributionSpec::Mix2Exp { rate1, rate2, p } => {
                write!(f, "mix2exp:{rate1},{rate2},{p}")
            }
            DistributionSpec::Erlang { rate, shape } => write!(f, "erlang:{rate},{shape}"),
            DistributionSpec::Pareto { shape, scale } => write!(f, "pareto:{shape},{scale}"),
        }
    }
}

fn parse_real(token: &str) -> Result<f64> {
    let t = token.trim();
    t.parse::<f64>()
        .ok()
        .filter(|v| v.is_finite())
        .ok_or_else(|| Error::Parse {
            token: t.to_string(),
            reason: "expected a finite decimal number".into(),
        })
}

/// Parses `exp:<rate>`, `erlang:<rate>,<k>`, `pareto:<a>,<b>` or
/// `mix2exp:<l1>,<l2>,<p>`.
impl FromStr for DistributionSpec {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let (family, args) = s.split_once(':').ok_or_else(|| Error::Parse {
            token: s.to_string(),
            reason: "expected <family>:<parameters>".into(),
        })?;
        let parts: Vec<&str> = args.split(',').collect();
        let arity = |n: usize| -> Result<()> {
            if parts.len() == n {
                Ok(())
            } else {
                Err(Error::Parse {
                    token: args.to_string(),
                    reason: format!("{family} takes {n} parameter(s), got {}", parts.len()),
                })
            }
        };
        match family.trim().to_ascii_lowercase().as_str() {
            "exp" => {
                arity(1)?;
                Self::exponential(parse_real(parts[0])?)
            }
            "erlang" => {
                arity(2)?;
                let k = parts[1].trim();
                let shape = k.parse::<u32>().map_err(|_| Error::Parse {
                    token: k.to_string(),
                    reason: "Erlang shape must be a positive integer".into(),
                })?;
                Self::erlang(parse_real(parts[0])?, shape)
            }
            "pareto" => {
                arity(2)?;
                Self::pareto(parse_real(parts[0])?, parse_real(parts[1])?)
            }
            "mix2exp" => {
                arity(3)?;
                Self::mix2exp(
                    parse_real(parts[0])?,
                    parse_real(parts[1])?,
                    parse_real(parts[2])?,
                )
            }
            other => Err(Error::Parse {
                token: other.to_string(),
                reason: "unknown family (expected exp, erlang, pareto or mix2exp)".into(),
            }),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const TINY: f64 = 1e-300;

    fn mix() -> DistributionSpec {
        DistributionSpec::mix2exp(1.0, 2.0, 2.0 / 3.0).unwrap()
    }

    #[test]
    fn densities_at_origin() {
        assert!((DistributionSpec::exponential(1.0).unwrap().pdf(TINY) - 1.0).abs() < 1e-15);
        assert!((DistributionSpec::pareto(4.0, 0.4).unwrap().pdf(TINY) - 1.6).abs() < 1e-15);
        assert!((mix().pdf(TINY) - 4.0 / 3.0).abs() < 1e-15);
        assert_eq!(mix().pdf(0.0), 0.0);
        assert_eq!(mix().pdf(-1.0), 0.0);
    }

    #[test]
    fn cdf_values() {
        let p = DistributionSpec::pareto(3.0, 2.0).unwrap();
        assert_eq!(p.cdf(0.0), 0.0);
        let e = DistributionSpec::exponential(1.0).unwrap();
        assert!((e.cdf(std::f64::consts::LN_2) - 0.5).abs() < 1e-15);
        let expected = 1.0 - (2.0 / 3.0 * (-1f64).exp() + 1.0 / 3.0 * (-2f64).exp());
        assert!((mix().cdf(1.0) - expected).abs() < 1e-15);
        assert!((expected - 0.709_635).abs() < 1e-6);
    }

    #[test]
    fn erlang_cdf_branches_agree() {
        let d = DistributionSpec::erlang(1.5, 4).unwrap();
        // continuity across the switch at rate*x = shape
        let x = 4.0 / 1.5;
        let below = d.cdf(x * (1.0 - 1e-12));
        let above = d.cdf(x);
        assert!((below - above).abs() < 1e-11);
        // k = 1 reduces to the exponential
        let e = DistributionSpec::erlang(1.5, 1).unwrap();
        for x in [0.01, 0.3, 1.0, 5.0] {
            assert!((e.cdf(x) + (-1.5 * x).exp_m1()).abs() < 1e-15);
        }
    }

    #[test]
    fn quantile_examples() {
        let p = DistributionSpec::pareto(1.0, 1.0).unwrap();
        assert!((p.quantile(0.5).unwrap() - 1.0).abs() < 1e-15);
        let p = DistributionSpec::pareto(4.0, 0.35).unwrap();
        let expected = (2f64.powf(0.25) - 1.0) / 0.35;
        assert!((p.quantile(0.5).unwrap() - expected).abs() < 1e-14);
        assert!((expected - 0.540_60).abs() < 1e-5);
        let q = mix().quantile(mix().cdf(1.0)).unwrap();
        assert!((q - 1.0).abs() < 1e-12);
    }

    #[test]
    fn quantile_domain() {
        let e = DistributionSpec::exponential(1.0).unwrap();
        for u in [0.0, 1.0, -0.1, 1.5, f64::NAN] {
            assert!(matches!(e.quantile(u), Err(Error::Domain(_))));
        }
    }

    #[test]
    fn mixture_closed_form_matches_bisection() {
        let d = mix();
        for i in 1..100 {
            let u = i as f64 / 100.0;
            let closed = d.quantile(u).unwrap();
            let bis = d.bisect_quantile(u, -(-u).ln_1p());
            assert!((closed - bis).abs() < 1e-10, "u={u}");
        }
        // degenerate weights
        for p in [0.0, 1.0] {
            let d = DistributionSpec::mix2exp(1.0, 2.0, p).unwrap();
            let x = d.quantile(0.3).unwrap();
            assert!((d.cdf(x) - 0.3).abs() < 1e-14);
        }
    }

    #[test]
    fn moments_examples() {
        let m = DistributionSpec::exponential(2.0).unwrap().moments().unwrap();
        assert_eq!((m.mean, m.variance, m.central3), (0.5, 0.25, 0.25));
        let m = DistributionSpec::pareto(4.0, 0.4).unwrap().moments().unwrap();
        assert!((m.mean - 1.0 / 1.2).abs() < 1e-14);
        assert!((m.variance - 4.0 / 2.88).abs() < 1e-13);
        assert!((m.central3 - 40.0 / 3.456).abs() < 1e-12);
        assert!(m.third_finite && !m.fourth_finite);
        let m = mix().moments().unwrap();
        assert!((m.mean - 5.0 / 6.0).abs() < 1e-15);
        // E X^2 = 2p/l1^2 + 2q/l2^2 = 3/2, so variance = 3/2 - 25/36 = 29/36
        assert!((m.variance - 29.0 / 36.0).abs() < 1e-15);
    }

    #[test]
    fn pareto_moment_availability() {
        let d = DistributionSpec::pareto(3.0, 1.0).unwrap();
        assert!(d.variance().is_ok());
        assert!(matches!(d.central3(), Err(Error::MomentUndefined(_))));
        assert!(matches!(d.moments(), Err(Error::MomentUndefined(_))));
        let d = DistributionSpec::pareto(2.0, 1.0).unwrap();
        assert!(matches!(d.variance(), Err(Error::MomentUndefined(_))));
        let d = DistributionSpec::pareto(1.0, 1.0).unwrap();
        assert!(matches!(d.mean(), Err(Error::MomentUndefined(_))));
    }

    #[test]
    fn sample_examples() {
        // a state whose next uniform is exactly 1/2: x' = 2^31
        let a = crate::rng::MULTIPLIER as u32;
        let mut inv = a;
        for _ in 0..5 {
            inv = inv.wrapping_mul(2u32.wrapping_sub(a.wrapping_mul(inv)));
        }
        let pred = (1u32 << 31)
            .wrapping_sub(crate::rng::INCREMENT as u32)
            .wrapping_mul(inv);
        let e = DistributionSpec::exponential(1.0).unwrap();
        let mut s = RngState(pred);
        assert!((e.sample(&mut s) - std::f64::consts::LN_2).abs() < 1e-15);
        let p = DistributionSpec::pareto(4.0, 0.35).unwrap();
        let mut s = RngState(pred);
        assert!((p.sample(&mut s) - p.quantile(0.5).unwrap()).abs() < 1e-15);
    }

    #[test]
    fn erlang_one_is_exponential_draw_for_draw() {
        let e = DistributionSpec::exponential(1.7).unwrap();
        let k1 = DistributionSpec::erlang(1.7, 1).unwrap();
        let mut a = RngState(99);
        let mut b = RngState(99);
        for _ in 0..1000 {
            assert_eq!(e.sample(&mut a).to_bits(), k1.sample(&mut b).to_bits());
        }
    }

    #[test]
    fn parse_specs() {
        assert_eq!(
            "exp:1.0".parse::<DistributionSpec>().unwrap(),
            DistributionSpec::Exponential { rate: 1.0 }
        );
        assert_eq!(
            "pareto:4.0,0.35".parse::<DistributionSpec>().unwrap(),
            DistributionSpec::Pareto { shape: 4.0, scale: 0.35 }
        );
        assert_eq!(
            "mix2exp:1,2,0.6667".parse::<DistributionSpec>().unwrap(),
            DistributionSpec::Mix2Exp { rate1: 1.0, rate2: 2.0, p: 0.6667 }
        );
        assert_eq!(
            " erlang:1.2, 2 ".parse::<DistributionSpec>().unwrap(),
            DistributionSpec::Erlang { rate: 1.2, shape: 2 }
        );
    }

    #[test]
    fn parse_errors() {
        let bad = |s: &str| s.parse::<DistributionSpec>().unwrap_err();
        assert!(matches!(bad("gamma:1"), Error::Parse { .. }));
        assert!(matches!(bad("exp"), Error::Parse { .. }));
        assert!(matches!(bad("exp:1,2"), Error::Parse { .. }));
        assert!(matches!(bad("exp:1,5x"), Error::Parse { .. }));
        assert!(matches!(bad("erlang:1,2.5"), Error::Parse { .. }));
        assert!(matches!(bad("exp:abc"), Error::Parse { token, .. } if token == "abc"));
        assert!(matches!(bad("exp:-1"), Error::Domain(_)));
        assert!(matches!(bad("mix2exp:2,1,0.5"), Error::Domain(_)));
        assert!(matches!(bad("mix2exp:1,2,1.5"), Error::Domain(_)));
        assert!(matches!(bad("erlang:1,0"), Error::Domain(_)));
    }

    #[test]
    fn display_round_trips() {
        for s in ["exp:1.5", "erlang:6,4", "pareto:4,0.4", "mix2exp:1,2,0.25"] {
            let d: DistributionSpec = s.parse().unwrap();
            assert_eq!(d.to_string(), s);
        }
    }

    #[test]
    fn warnings_for_heavy_tails() {
        assert!(DistributionSpec::pareto(4.0, 0.4)
            .unwrap()
            .approximation_warning()
            .is_some());
        assert!(DistributionSpec::pareto(4.5, 0.4)
            .unwrap()
            .approximation_warning()
            .is_none());
        assert!(mix().approximation_warning().is_none());
    }
}
