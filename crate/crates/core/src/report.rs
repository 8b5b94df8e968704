//! Tabulated sweep results and their CSV form.

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};

/// How a column of a sweep was computed.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Method {
    Main,
    Corrected,
    Exact,
    Sim,
}

impl Method {
    pub const ALL: [Method; 4] = [Method::Main, Method::Corrected, Method::Exact, Method::Sim];

    pub fn name(self) -> &'static str {
        match self {
            Method::Main => "main",
            Method::Corrected => "corrected",
            Method::Exact => "exact",
            Method::Sim => "sim",
        }
    }

    /// Comma-separated list, e.g. `main,exact,sim`. Duplicates are an error.
    pub fn parse_list(s: &str) -> Result<Vec<Method>> {
        let mut out = Vec::new();
        for tok in s.split(',').map(str::trim) {
            let m: Method = tok.parse()?;
            if out.contains(&m) {
                return Err(Error::Parse {
                    token: tok.to_string(),
                    reason: "method listed twice".into(),
                });
            }
            out.push(m);
        }
        Ok(out)
    }
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Method {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Method::ALL
            .into_iter()
            .find(|m| m.name() == s)
            .ok_or_else(|| Error::Parse {
                token: s.to_string(),
                reason: "expected one of main, corrected, exact, sim".into(),
            })
    }
}

/// One grid value with an entry per method, in the order of
/// [`SweepResult::methods`].
#[derive(Debug, Clone, PartialEq)]
pub struct Row {
    pub x: f64,
    pub values: Vec<f64>,
    /// Confidence bounds of the simulated entry, if any.
    pub ci: Option<(f64, f64)>,
}

/// Rows of a sweep plus the inputs that produced them.
#[derive(Debug, Clone, PartialEq)]
pub struct SweepResult {
    pub variable: String,
    pub methods: Vec<Method>,
    pub rows: Vec<Row>,
    pub metadata: Vec<(String, String)>,
}

impl SweepResult {
    pub fn column(&self, m: Method) -> Option<Vec<f64>> {
        let i = self.methods.iter().position(|&x| x == m)?;
        Some(self.rows.iter().map(|r| r.values[i]).collect())
    }

    pub fn xs(&self) -> Vec<f64> {
        self.rows.iter().map(|r| r.x).collect()
    }

    fn has_ci(&self) -> bool {
        self.methods.contains(&Method::Sim)
    }

    /// CSV text: header `x,<methods>[,sim_ci_low,sim_ci_high]`, one row per
    /// grid value, numbers to 12 significant digits, LF line endings.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("x");
        for m in &self.methods {
            out.push(',');
            out.push_str(m.name());
        }
        if self.has_ci() {
            out.push_str(",sim_ci_low,sim_ci_high");
        }
        out.push('\n');
        for r in &self.rows {
            out.push_str(&format_sig(r.x));
            for v in &r.values {
                out.push(',');
                out.push_str(&format_sig(*v));
            }
            if self.has_ci() {
                let (lo, hi) = r.ci.unwrap_or((f64::NAN, f64::NAN));
                out.push(',');
                out.push_str(&format_sig(lo));
                out.push(',');
                out.push_str(&format_sig(hi));
            }
            out.push('\n');
        }
        out
    }

    /// `max |a - b|` over rows, computed from the values as they appear in
    /// the CSV so the figure can be recomputed from the file alone.
    pub fn max_abs_diff_csv(&self, a: Method, b: Method) -> Option<f64> {
        let (ca, cb) = (self.column(a)?, self.column(b)?);
        let round = |v: f64| format_sig(v).parse::<f64>().unwrap_or(f64::NAN);
        ca.iter()
            .zip(&cb)
            .map(|(x, y)| (round(*x) - round(*y)).abs())
            .reduce(f64::max)
    }
}

/// A parsed CSV table: header fields and numeric rows.
#[derive(Debug, Clone, PartialEq)]
pub struct CsvTable {
    pub header: Vec<String>,
    pub rows: Vec<Vec<f64>>,
}

impl CsvTable {
    pub fn column(&self, name: &str) -> Option<Vec<f64>> {
        let i = self.header.iter().position(|h| h == name)?;
        Some(self.rows.iter().map(|r| r[i]).collect())
    }
}

/// Reads back the CSV written by [`SweepResult::to_csv`].
pub fn parse_csv(text: &str) -> Result<CsvTable> {
    let mut lines = text.lines();
    let header: Vec<String> = lines
        .next()
        .ok_or_else(|| Error::Parse {
            token: String::new(),
            reason: "empty CSV".into(),
        })?
        .split(',')
        .map(String::from)
        .collect();
    let rows = lines
        .filter(|l| !l.is_empty())
        .map(|l| {
            let row = l
                .split(',')
                .map(|f| {
                    f.parse::<f64>().map_err(|e| Error::Parse {
                        token: f.to_string(),
                        reason: e.to_string(),
                    })
                })
                .collect::<Result<Vec<f64>>>()?;
            if row.len() != header.len() {
                return Err(Error::Parse {
                    token: l.to_string(),
                    reason: format!("expected {} fields", header.len()),
                });
            }
            Ok(row)
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(CsvTable { header, rows })
}

/// `%.12g`-style formatting: 12 significant digits, trailing zeros dropped,
/// exponent form outside `[1e-5, 1e12)`.
pub fn format_sig(v: f64) -> String {
    if v == 0.0 {
        return "0".into();
    }
    if !v.is_finite() {
        return if v.is_nan() {
            "nan".into()
        } else if v > 0.0 {
            "inf".into()
        } else {
            "-inf".into()
        };
    }
    let sci = format!("{v:.11e}");
    let (mant, exp) = sci.split_once('e').expect("exponent present");
    let exp: i32 = exp.parse().expect("integer exponent");
    if (-5..12).contains(&exp) {
        let decimals = (11 - exp).max(0) as usize;
        trim_zeros(&format!("{v:.decimals$}"))
    } else {
        let sign = if exp < 0 { '-' } else { '+' };
        format!("{}e{}{:02}", trim_zeros(mant), sign, exp.abs())
    }
}

fn trim_zeros(s: &str) -> String {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.').to_string()
    } else {
        s.to_string()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn significant_digits() {
        assert_eq!(format_sig(0.0), "0");
        assert_eq!(format_sig(1.0), "1");
        assert_eq!(format_sig(0.05), "0.05");
        assert_eq!(format_sig(-2.5), "-2.5");
        assert_eq!(format_sig(1.0 / 3.0), "0.333333333333");
        assert_eq!(format_sig(2.0 / 3.0 * 1e-7), "6.66666666667e-08");
        assert_eq!(format_sig(123_456_789_012_345.0), "1.23456789012e+14");
        assert_eq!(format_sig(1000.0), "1000");
        assert_eq!(format_sig(0.1 + 0.2), "0.3");
    }

    #[test]
    fn methods_parse() {
        assert_eq!(
            Method::parse_list("main,exact,sim").unwrap(),
            vec![Method::Main, Method::Exact, Method::Sim]
        );
        assert!(Method::parse_list("main,main").is_err());
        assert!(Method::parse_list("mean").is_err());
    }

    #[test]
    fn csv_round_trip() {
        let r = SweepResult {
            variable: "c".into(),
            methods: vec![Method::Main, Method::Sim],
            rows: vec![
                Row { x: 0.5, values: vec![0.25, 0.3], ci: Some((0.2, 0.4)) },
                Row { x: 1.0, values: vec![1.0 / 3.0, 0.5], ci: Some((0.45, 0.55)) },
            ],
            metadata: vec![],
        };
        let csv = r.to_csv();
        assert!(csv.starts_with("x,main,sim,sim_ci_low,sim_ci_high\n"));
        assert!(!csv.contains('\r'));
        let t = parse_csv(&csv).unwrap();
        assert_eq!(t.rows.len(), 2);
        assert_eq!(t.column("sim_ci_high").unwrap(), vec![0.4, 0.55]);
        assert_eq!(r.max_abs_diff_csv(Method::Main, Method::Sim).unwrap(), 0.5 - 0.333333333333);
    }
}
