//! Identity checks with structured reports, and randomized suites built on them.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;
use std::time::Instant;

use serde::{Deserialize, Serialize};

use crate::error::{domain, Error, Result};
use crate::numeric::{Complex, Real};

mod checks;
mod suite;

pub use checks::*;
pub use suite::*;

/// How a residual is compared against the tolerance.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Criterion {
    Abs,
    Rel,
    #[default]
    Either,
}

impl Criterion {
    pub fn name(self) -> &'static str {
        match self {
            Criterion::Abs => "abs",
            Criterion::Rel => "rel",
            Criterion::Either => "either",
        }
    }
}

impl FromStr for Criterion {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "abs" => Ok(Criterion::Abs),
            "rel" => Ok(Criterion::Rel),
            "either" => Ok(Criterion::Either),
            other => domain(format!("unknown criterion {other:?}")),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Tolerance {
    pub value: f64,
    pub criterion: Criterion,
}

impl Tolerance {
    pub fn abs(value: f64) -> Self {
        Tolerance { value, criterion: Criterion::Abs }
    }

    pub fn rel(value: f64) -> Self {
        Tolerance { value, criterion: Criterion::Rel }
    }

    pub fn either(value: f64) -> Self {
        Tolerance { value, criterion: Criterion::Either }
    }

    pub fn accepts(&self, abs_residual: f64, rel_residual: f64) -> bool {
        let (a, r) = (abs_residual <= self.value, rel_residual <= self.value);
        match self.criterion {
            Criterion::Abs => a,
            Criterion::Rel => r,
            Criterion::Either => a || r,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct VerificationReport {
    pub identity_id: String,
    pub params: BTreeMap<String, String>,
    pub lhs: [f64; 2],
    pub rhs: [f64; 2],
    pub abs_residual: f64,
    pub rel_residual: f64,
    pub tolerance: f64,
    pub pass: u8,
    pub terms_used: u64,
    pub elapsed_ms: u64,
}

impl VerificationReport {
    pub fn passed(&self) -> bool {
        self.pass == 1
    }

    /// The report with `elapsed_ms` zeroed, for comparing runs.
    pub fn timeless(&self) -> Self {
        VerificationReport { elapsed_ms: 0, ..self.clone() }
    }
}

impl fmt::Display for VerificationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let crit = self.params.get("criterion").map(String::as_str).unwrap_or("either");
        write!(
            f,
            "{} {}: abs {:.3e} rel {:.3e} ({} tol {:.1e}) {} ms",
            if self.passed() { "PASS" } else { "FAIL" },
            self.identity_id,
            self.abs_residual,
            self.rel_residual,
            crit,
            self.tolerance,
            self.elapsed_ms
        )
    }
}

/// Collects the parameters of one check while it runs.
pub(crate) struct ReportBuilder {
    id: String,
    params: BTreeMap<String, String>,
    start: Instant,
    terms: u64,
}

impl ReportBuilder {
    pub(crate) fn new(id: &str) -> Self {
        ReportBuilder { id: id.to_string(), params: BTreeMap::new(), start: Instant::now(), terms: 0 }
    }

    pub(crate) fn param(&mut self, key: &str, value: impl fmt::Display) -> &mut Self {
        self.params.insert(key.to_string(), value.to_string());
        self
    }

    pub(crate) fn terms(&mut self, n: usize) -> &mut Self {
        self.terms += n as u64;
        self
    }

    /// The residual is formed in `R` before rounding to f64.
    pub(crate) fn finish<R: Real>(mut self, lhs: Complex<R>, rhs: Complex<R>, tol: Tolerance) -> VerificationReport {
        let abs_residual = (lhs - rhs).abs().to_f64();
        let (l, r) = (lhs.to_f64(), rhs.to_f64());
        let scale = l.abs().max(r.abs()).max(1.0);
        let rel_residual = abs_residual / scale;
        let pass = abs_residual.is_finite() && tol.accepts(abs_residual, rel_residual);
        self.params.insert("criterion".into(), tol.criterion.name().into());
        self.params.insert("precision".into(), R::NAME.into());
        VerificationReport {
            identity_id: self.id,
            params: self.params,
            lhs: [l.re, l.im],
            rhs: [r.re, r.im],
            abs_residual,
            rel_residual,
            tolerance: tol.value,
            pass: pass as u8,
            terms_used: self.terms,
            elapsed_ms: self.start.elapsed().as_millis() as u64,
        }
    }
}
