//! JSON and CSV exchange formats.
//!
//! Kernels and densities: `{"domain": "cyclic"|"line", "n"|"halfwidth": int, "values": [...]}`.
//! A line density may give `"offset"` (site of `values[0]`) instead of `"halfwidth"`.
//! Certificates: `{"type", "values", "pairing"?, "tol", "seed"?}`.

use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::cones::{Certificate, ScanRow};
use crate::error::{Error, Result};
use crate::group::{Density, Domain, LatticePotential, Support};
use crate::plane2d::ScanResult;

/// Rounds to 15 significant digits so that printed output is reproducible across platforms.
pub fn sig15(x: f64) -> f64 {
    if !x.is_finite() || x == 0.0 {
        return x;
    }
    format!("{x:.14e}").parse().unwrap_or(x)
}

/// Text form of `sig15(x)`; exponent notation outside `[1e-5, 1e15)`.
pub fn fmt15(x: f64) -> String {
    let r = sig15(x);
    let a = r.abs();
    if a != 0.0 && a.is_finite() && !(1e-5..1e15).contains(&a) {
        format!("{r:e}")
    } else {
        format!("{r}")
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct KernelJson {
    pub domain: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub n: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub halfwidth: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub offset: Option<i64>,
    pub values: Vec<f64>,
}

impl KernelJson {
    pub fn parse(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::Invalid(format!("kernel JSON: {e}")))
    }

    pub fn from_potential(p: &LatticePotential<f64>) -> Self {
        let (domain, n, halfwidth) = match p.domain() {
            Domain::Cyclic { n } => ("cyclic", Some(n), None),
            Domain::Line { halfwidth } => ("line", None, Some(halfwidth)),
        };
        Self {
            domain: domain.into(),
            n,
            halfwidth,
            offset: None,
            values: p.values().iter().copied().map(sig15).collect(),
        }
    }

    pub fn from_density(d: &Density<f64>) -> Self {
        let (domain, n, offset) = match d.support() {
            Support::Cyclic { n } => ("cyclic", Some(n), None),
            Support::Line { offset } => ("line", None, Some(offset)),
        };
        Self {
            domain: domain.into(),
            n,
            halfwidth: None,
            offset,
            values: d.weights().iter().copied().map(sig15).collect(),
        }
    }

    pub fn to_potential(&self) -> Result<LatticePotential<f64>> {
        match self.domain.as_str() {
            "cyclic" => {
                if let Some(n) = self.n {
                    if n != self.values.len() {
                        return Err(Error::Invalid(format!(
                            "n = {n} but {} values",
                            self.values.len()
                        )));
                    }
                }
                LatticePotential::cyclic(self.values.clone())
            }
            "line" => {
                if let Some(r) = self.halfwidth {
                    if 2 * r + 1 != self.values.len() {
                        return Err(Error::Invalid(format!(
                            "halfwidth = {r} needs {} values, got {}",
                            2 * r + 1,
                            self.values.len()
                        )));
                    }
                }
                LatticePotential::line(self.values.clone())
            }
            other => Err(Error::Invalid(format!("unknown domain {other:?}"))),
        }
    }

    pub fn to_density(&self) -> Result<Density<f64>> {
        match self.domain.as_str() {
            "cyclic" => {
                if self.n.is_some_and(|n| n != self.values.len()) {
                    return Err(Error::Invalid("n does not match the value count".into()));
                }
                Density::cyclic(self.values.clone())
            }
            "line" => {
                let offset = match (self.halfwidth, self.offset) {
                    (Some(_), Some(_)) => {
                        return Err(Error::Invalid("give halfwidth or offset, not both".into()))
                    }
                    (Some(r), None) => {
                        if 2 * r + 1 != self.values.len() {
                            return Err(Error::Invalid("halfwidth does not match the value count".into()));
                        }
                        -(r as i64)
                    }
                    (None, o) => o.unwrap_or(0),
                };
                Density::line_at(offset, self.values.clone())
            }
            other => Err(Error::Invalid(format!("unknown domain {other:?}"))),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CertificateJson {
    #[serde(rename = "type")]
    pub kind: String,
    pub values: Vec<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub pairing: Option<f64>,
    pub tol: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
}

impl CertificateJson {
    pub fn from_certificate(c: &Certificate<f64>, seed: Option<u64>) -> Self {
        match c {
            Certificate::Decomposition(d) => Self {
                kind: "decomposition".into(),
                values: d.positive_part.values().iter().copied().map(sig15).collect(),
                pairing: None,
                tol: d.tol,
                seed,
            },
            Certificate::Separating(s) => Self {
                kind: "separating".into(),
                values: s.measure.values().iter().copied().map(sig15).collect(),
                pairing: Some(sig15(s.pairing)),
                tol: s.tol,
                seed,
            },
        }
    }
}

pub fn threshold_csv(rows: &[ScanRow]) -> String {
    let mut out = String::from("a,feasible,certificate_norm\n");
    for r in rows {
        let _ = writeln!(out, "{},{},{}", fmt15(r.a), r.feasible, fmt15(r.certificate_norm));
    }
    out
}

pub fn samples_csv(header: &str, rows: &[(f64, f64)]) -> String {
    let mut out = format!("x,{header}\n");
    for (x, y) in rows {
        let _ = writeln!(out, "{},{}", fmt15(*x), fmt15(*y));
    }
    out
}

/// Columns `eps,S,slope,residual`; slope and residual repeat on every row and are empty when undefined.
pub fn epsilon_scan_csv(scan: &ScanResult) -> String {
    let opt = |v: Option<f64>| v.map(fmt15).unwrap_or_default();
    let mut out = String::from("eps,S,slope,residual\n");
    for p in &scan.points {
        let _ = writeln!(
            out,
            "{},{},{},{}",
            fmt15(p.eps),
            fmt15(p.s),
            opt(scan.slope),
            opt(scan.residual)
        );
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn kernel_round_trip() {
        let j = KernelJson::parse(r#"{"domain":"cyclic","n":5,"values":[1,-1,1,1,-1]}"#).unwrap();
        let p = j.to_potential().unwrap();
        assert_eq!(KernelJson::from_potential(&p), j);
        let l = KernelJson::parse(r#"{"domain":"line","halfwidth":2,"values":[1,-1,1,-1,1]}"#).unwrap();
        assert_eq!(l.to_potential().unwrap().value(-1), -1.0);
    }

    #[test]
    fn kernel_errors() {
        assert!(KernelJson::parse("{").is_err());
        let bad = KernelJson::parse(r#"{"domain":"torus","values":[1]}"#).unwrap();
        assert!(bad.to_potential().is_err());
        let mismatch = KernelJson::parse(r#"{"domain":"line","halfwidth":1,"values":[1]}"#).unwrap();
        assert!(mismatch.to_potential().is_err());
        let n = KernelJson::parse(r#"{"domain":"cyclic","n":4,"values":[1,0,0]}"#).unwrap();
        assert!(n.to_potential().is_err());
    }

    #[test]
    fn density_offsets() {
        let j = KernelJson::parse(r#"{"domain":"line","offset":3,"values":[1,2]}"#).unwrap();
        let d = j.to_density().unwrap();
        assert_eq!(d.weight(4), 2.0);
        let c = KernelJson::parse(r#"{"domain":"line","halfwidth":1,"values":[1,2,1]}"#).unwrap();
        assert_eq!(c.to_density().unwrap().offset(), -1);
    }

    #[test]
    fn fifteen_digits() {
        assert_eq!(sig15(0.1 + 0.2), 0.3);
        assert_eq!(fmt15(2.0 - 5f64.sqrt()), "-0.23606797749979");
        assert_eq!(fmt15(-3.33066907387547e-16), "-3.33066907387547e-16");
        assert_eq!(fmt15(1.0), "1");
    }
}
