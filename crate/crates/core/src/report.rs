//! Verdicts for single inequality instances.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use serde::Serialize;

use crate::error::Error;

pub const DEFAULT_TOL: f64 = 1e-9;

/// Comparison tolerance, scaled by `max(1, |bound|)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(transparent)]
pub struct Tolerance(pub f64);

impl Default for Tolerance {
    fn default() -> Self {
        Self(DEFAULT_TOL)
    }
}

impl Tolerance {
    pub fn slack(&self, bound: f64) -> f64 {
        self.0 * bound.abs().max(1.0)
    }

    /// `lhs <= rhs` up to tolerance.
    pub fn at_most(&self, lhs: f64, rhs: f64) -> bool {
        lhs <= rhs + self.slack(rhs)
    }

    /// `lhs >= rhs` up to tolerance.
    pub fn at_least(&self, lhs: f64, rhs: f64) -> bool {
        lhs >= rhs - self.slack(rhs)
    }
}

/// Every inequality this crate knows how to check.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Law {
    EldanGross,
    TalagrandLogvar,
    VarianceDecay,
    VarianceDrop,
    LocalBobkov,
    BobkovGotze,
    Hypercontractivity,
    LogSobolev,
    Appendix,
    NumericalFact,
    ProfileQuadratic,
    ProfileLog,
    GaussTalagrand,
    GaussEldanGross,
    GaussPoincare,
    ProofChain,
}

impl Law {
    pub const ALL: [Law; 16] = [
        Law::EldanGross,
        Law::TalagrandLogvar,
        Law::VarianceDecay,
        Law::VarianceDrop,
        Law::LocalBobkov,
        Law::BobkovGotze,
        Law::Hypercontractivity,
        Law::LogSobolev,
        Law::Appendix,
        Law::NumericalFact,
        Law::ProfileQuadratic,
        Law::ProfileLog,
        Law::GaussTalagrand,
        Law::GaussEldanGross,
        Law::GaussPoincare,
        Law::ProofChain,
    ];

    pub fn as_str(&self) -> &'static str {
        match self {
            Law::EldanGross => "eldan-gross",
            Law::TalagrandLogvar => "talagrand-logvar",
            Law::VarianceDecay => "variance-decay",
            Law::VarianceDrop => "variance-drop",
            Law::LocalBobkov => "local-bobkov",
            Law::BobkovGotze => "bobkov-gotze",
            Law::Hypercontractivity => "hypercontractivity",
            Law::LogSobolev => "log-sobolev",
            Law::Appendix => "appendix",
            Law::NumericalFact => "numerical-fact",
            Law::ProfileQuadratic => "profile-quadratic",
            Law::ProfileLog => "profile-log",
            Law::GaussTalagrand => "gauss-talagrand",
            Law::GaussEldanGross => "gauss-eldan-gross",
            Law::GaussPoincare => "gauss-poincare",
            Law::ProofChain => "proof-chain",
        }
    }
}

impl fmt::Display for Law {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Law {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self, Error> {
        Law::ALL
            .into_iter()
            .find(|l| l.as_str() == s)
            .ok_or_else(|| Error::UnknownLaw(s.to_string()))
    }
}

/// Which side the bound sits on.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Direction {
    /// `lhs <= constant * rhs_unit`.
    AtMost,
    /// `lhs >= constant * rhs_unit`.
    AtLeast,
}

/// One checked inequality instance.
///
/// `rhs_unit` is the right-hand side with its constant set to 1; `ratio` is
/// `lhs / rhs_unit` and is absent when `rhs_unit` vanishes.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct InequalityReport {
    pub law: Law,
    pub n: usize,
    pub p: Option<f64>,
    pub lhs: f64,
    pub rhs_unit: f64,
    pub ratio: Option<f64>,
    pub constant: f64,
    pub direction: Direction,
    pub pass: bool,
    /// `constant * rhs_unit - lhs` for upper bounds, `lhs - constant * rhs_unit` for lower ones.
    pub slack: f64,
    pub witness_hex: Option<String>,
    pub tol: f64,
    #[serde(skip_serializing_if = "BTreeMap::is_empty")]
    pub params: BTreeMap<String, f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
}

fn ratio(lhs: f64, rhs_unit: f64) -> Option<f64> {
    (rhs_unit != 0.0).then(|| lhs / rhs_unit)
}

impl InequalityReport {
    /// `lhs <= rhs`.
    pub fn at_most(law: Law, n: usize, lhs: f64, rhs: f64, tol: Tolerance) -> Self {
        Self {
            law,
            n,
            p: None,
            lhs,
            rhs_unit: rhs,
            ratio: ratio(lhs, rhs),
            constant: 1.0,
            direction: Direction::AtMost,
            pass: tol.at_most(lhs, rhs),
            slack: rhs - lhs,
            witness_hex: None,
            tol: tol.0,
            params: BTreeMap::new(),
            note: None,
        }
    }

    /// `lhs >= constant * rhs_unit`.
    pub fn at_least(
        law: Law,
        n: usize,
        lhs: f64,
        rhs_unit: f64,
        constant: f64,
        tol: Tolerance,
    ) -> Self {
        let bound = constant * rhs_unit;
        Self {
            law,
            n,
            p: None,
            lhs,
            rhs_unit,
            ratio: ratio(lhs, rhs_unit),
            constant,
            direction: Direction::AtLeast,
            pass: tol.at_least(lhs, bound),
            slack: lhs - bound,
            witness_hex: None,
            tol: tol.0,
            params: BTreeMap::new(),
            note: None,
        }
    }

    pub fn with_p(mut self, p: f64) -> Self {
        self.p = Some(p);
        self
    }

    pub fn with_witness(mut self, witness: impl fmt::Display) -> Self {
        self.witness_hex = Some(witness.to_string());
        self
    }

    pub fn with_param(mut self, key: &str, value: f64) -> Self {
        self.params.insert(key.to_string(), value);
        self
    }

    pub fn with_note(mut self, note: impl Into<String>) -> Self {
        self.note = Some(note.into());
        self
    }

    /// Marks the report failed when an auxiliary check does not hold.
    pub fn require(mut self, key: &str, ok: bool, value: f64) -> Self {
        self.params.insert(key.to_string(), value);
        self.pass &= ok;
        self
    }
}

/// The failing report with the most negative slack, if any.
pub fn worst_violation(reports: &[InequalityReport]) -> Option<&InequalityReport> {
    reports
        .iter()
        .filter(|r| !r.pass)
        .min_by(|a, b| a.slack.total_cmp(&b.slack))
}
