//! Inverse-Gaussian approximations of `P{v < Υ ≤ t | T₁ = v}`.
//!
//! All three terms are differences `[g](X) - [g](1)` of elementary
//! endpoint functions, with `a = u + cv`, `r = 1 - cM`, `X = c(t-v)/a + 1`.
//! Products of the form `exp(2ar/(c²D²)) Φ(-·)` are formed in log space, so
//! nothing overflows for `c` far below `c*`.

use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::moments::ModelConstants;
use crate::quad;
use crate::specfun::{log_std_normal_cdf, std_normal_cdf};

/// Evaluation point `(u, c, v, t)`; `t` may be `f64::INFINITY`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CrossingQuery {
    pub u: f64,
    pub c: f64,
    pub v: f64,
    pub t: f64,
}

impl CrossingQuery {
    /// Validated query: `u > 0`, `c > 0`, `0 ≤ v ≤ t`. `t = v` is allowed and
    /// gives an empty horizon.
    pub fn new(u: f64, c: f64, v: f64, t: f64) -> Result<Self> {
        let q = CrossingQuery { u, c, v, t };
        q.validate()?;
        Ok(q)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.u > 0.0) || !self.u.is_finite() {
            return Err(Error::Domain(format!("u must be positive, got {}", self.u)));
        }
        if !(self.c > 0.0) || !self.c.is_finite() {
            return Err(Error::Domain(format!("c must be positive, got {}", self.c)));
        }
        if !(self.v >= 0.0) || !self.v.is_finite() {
            return Err(Error::Domain(format!("v must be >= 0, got {}", self.v)));
        }
        if !(self.t >= self.v) {
            return Err(Error::InvalidHorizon(format!(
                "horizon t = {} precedes v = {}",
                self.t, self.v
            )));
        }
        Ok(())
    }

    /// `u + cv`, the level seen at the first renewal.
    pub fn level(&self) -> f64 {
        self.u + self.c * self.v
    }

    pub fn with_c(self, c: f64) -> Self {
        CrossingQuery { c, ..self }
    }

    pub fn with_t(self, t: f64) -> Self {
        CrossingQuery { t, ..self }
    }
}

/// The main term, the two correction integrals and their combination.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ApproxResult {
    pub main: f64,
    pub correction_f: f64,
    pub correction_s: f64,
    pub corrected: f64,
}

/// Shared quantities of the three closed forms.
struct Brackets {
    a: f64,
    cd: f64,
    r: f64,
    /// `a / (c²D²)`
    k: f64,
    /// `2ar/(c²D²)`
    e: f64,
    x_hi: f64,
}

#[derive(Clone, Copy)]
struct Endpoint {
    a: f64,
    b: f64,
    /// `G(x) / √x`
    g_half: f64,
    /// `G(x) / x^{3/2}`
    g_three_half: f64,
}

impl Brackets {
    fn new(q: &CrossingQuery, k: &ModelConstants) -> Self {
        let a = q.level();
        let c = q.c;
        let cd = c * k.d2.sqrt();
        let r = 1.0 - c * k.m;
        let kk = a / (cd * cd);
        let x_hi = if q.t.is_infinite() {
            f64::INFINITY
        } else {
            c * (q.t - q.v) / a + 1.0
        };
        Brackets {
            a,
            cd,
            r,
            k: kk,
            e: 2.0 * kk * r,
            x_hi,
        }
    }

    fn empty(&self) -> bool {
        self.x_hi == 1.0
    }

    fn at(&self, x: f64) -> Endpoint {
        if x.is_infinite() {
            let (a, b) = if self.r > 0.0 {
                (1.0, 0.0)
            } else if self.r < 0.0 {
                (0.0, self.e.exp())
            } else {
                (0.5, 0.5)
            };
            return Endpoint {
                a,
                b,
                g_half: 0.0,
                g_three_half: 0.0,
            };
        }
        let s = self.a.sqrt() / (self.cd * x.sqrt());
        let a = std_normal_cdf(s * (x * self.r - 1.0));
        let b = (self.e + log_std_normal_cdf(-s * (x * self.r + 1.0))).exp();
        let g = (-0.5 * self.k / x * (x * self.r - 1.0).powi(2)).exp();
        Endpoint {
            a,
            b,
            g_half: g / x.sqrt(),
            g_three_half: g / (x * x.sqrt()),
        }
    }

    fn ends(&self) -> (Endpoint, Endpoint) {
        (self.at(self.x_hi), self.at(1.0))
    }

    fn main(&self) -> f64 {
        if self.empty() {
            return 0.0;
        }
        let (hi, lo) = self.ends();
        (hi.a + hi.b) - (lo.a + lo.b)
    }

    fn f(&self) -> f64 {
        if self.empty() {
            return 0.0;
        }
        let (hi, lo) = self.ends();
        let ab = (hi.a + hi.b) - (lo.a + lo.b);
        let db = hi.b - lo.b;
        let coef = 2.0 * self.cd / (2.0 * PI * self.a).sqrt();
        -ab / self.k + 2.0 * self.r * db - coef * (hi.g_half - lo.g_half)
    }

    fn s(&self) -> f64 {
        if self.empty() {
            return 0.0;
        }
        let (hi, lo) = self.ends();
        let ab = (hi.a + hi.b) - (lo.a + lo.b);
        let db = hi.b - lo.b;
        let kr = self.k * self.r;
        let coef = 2f64.sqrt() * self.cd / (PI.sqrt() * self.a.sqrt());
        let g = |p: &Endpoint| coef * (3.0 * (1.0 - kr) * p.g_half + self.k * p.g_three_half);
        -3.0 * ab / self.k + 2.0 * self.r * (3.0 - 4.0 * kr) * db - (g(&hi) - g(&lo))
    }
}

/// Main term `I^M`.
pub fn i_m_closed(q: &CrossingQuery, k: &ModelConstants) -> f64 {
    Brackets::new(q, k).main()
}

/// First correction integral `I^F`.
pub fn i_f_closed(q: &CrossingQuery, k: &ModelConstants) -> f64 {
    Brackets::new(q, k).f()
}

/// Second correction integral `I^S`.
pub fn i_s_closed(q: &CrossingQuery, k: &ModelConstants) -> f64 {
    Brackets::new(q, k).s()
}

/// `I^M + K_F I^F + K_S I^S` together with its parts. Not clamped; the
/// corrected value can be slightly negative.
pub fn corrected(q: &CrossingQuery, k: &ModelConstants) -> ApproxResult {
    let b = Brackets::new(q, k);
    let main = b.main();
    let correction_f = b.f();
    let correction_s = b.s();
    let corrected = main + k.kf(q.c) * correction_f + k.ks(q.c) * correction_s;
    ApproxResult {
        main,
        correction_f,
        correction_s,
        corrected,
    }
}

/// Which defining integral [`integral_oracle`] evaluates.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum IntegralKind {
    M,
    F,
    S,
}

/// Adaptive quadrature of the defining integral of `I^M`, `I^F` or `I^S`
/// over `[0, c(t-v)/(u+cv)]`. Intended for testing the closed forms.
pub fn integral_oracle(
    kind: IntegralKind,
    q: &CrossingQuery,
    k: &ModelConstants,
    tol: f64,
) -> Result<f64> {
    q.validate()?;
    if q.t.is_infinite() {
        return Err(Error::InvalidHorizon(
            "the integral oracle needs a finite horizon".into(),
        ));
    }
    let a = q.level();
    let c = q.c;
    let cm = c * k.m;
    let s2 = c * c * k.d2 / a;
    let upper = c * (q.t - q.v) / a;
    if upper == 0.0 {
        return Ok(0.0);
    }
    let density = move |x: f64| {
        let var = s2 * (1.0 + x);
        let z = x - cm * (1.0 + x);
        (-0.5 * z * z / var).exp() / (2.0 * PI * var).sqrt()
    };
    let integrand = move |x: f64| {
        let w = 1.0 + x;
        let z = x - cm * w;
        match kind {
            IntegralKind::M => density(x) / w,
            IntegralKind::F => z / (w * w) * density(x),
            IntegralKind::S => z * z * z / (w * w * w) * density(x) / s2,
        }
    };
    // panels no wider than the density's spread near x = 0
    let h = 0.5 * s2.sqrt() / (1.0 - cm).abs().max(1.0);
    let n = ((upper / h).ceil() as usize).clamp(1, 20_000);
    let breaks: Vec<f64> = (0..=n).map(|i| upper * i as f64 / n as f64).collect();
    quad::integrate_panels(integrand, &breaks, tol)
}
