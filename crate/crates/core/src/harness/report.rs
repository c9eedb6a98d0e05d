use std::collections::BTreeMap;
use std::io::Write;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::stability_polynomials::{fmt17, RegionGrid};

/// One measured claim: `pass` records the outcome, `expected` the outcome
/// the underlying theory predicts.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Verdict {
    pub name: String,
    pub pass: bool,
    pub measured: f64,
    pub bound: f64,
    pub tolerance: f64,
    #[serde(default = "yes")]
    pub expected: bool,
}

fn yes() -> bool {
    true
}

// JSON has no infinities or NaN; keep reports parseable.
fn finite(x: f64) -> f64 {
    if x.is_nan() {
        f64::MAX
    } else {
        x.clamp(-f64::MAX, f64::MAX)
    }
}

impl Verdict {
    /// `measured <= bound + tolerance`.
    pub fn at_most(name: &str, measured: f64, bound: f64, tolerance: f64) -> Self {
        Self::raw(name, measured <= bound + tolerance, measured, bound, tolerance)
    }

    /// `measured >= bound - tolerance`.
    pub fn at_least(name: &str, measured: f64, bound: f64, tolerance: f64) -> Self {
        Self::raw(name, measured >= bound - tolerance, measured, bound, tolerance)
    }

    /// `|measured - target| <= tolerance`.
    pub fn close(name: &str, measured: f64, target: f64, tolerance: f64) -> Self {
        Self::raw(name, (measured - target).abs() <= tolerance, measured, target, tolerance)
    }

    /// Boolean outcome reported as 1/0 against a bound of 1.
    pub fn flag(name: &str, value: bool) -> Self {
        Self::raw(name, value, if value { 1.0 } else { 0.0 }, 1.0, 0.0)
    }

    fn raw(name: &str, pass: bool, measured: f64, bound: f64, tolerance: f64) -> Self {
        Self {
            name: name.to_string(),
            pass: pass && !measured.is_nan(),
            measured: finite(measured),
            bound: finite(bound),
            tolerance: finite(tolerance),
            expected: true,
        }
    }

    /// Marks a verdict the theory predicts to fail.
    pub fn expect_fail(mut self) -> Self {
        self.expected = false;
        self
    }

    pub fn agrees(&self) -> bool {
        self.pass == self.expected
    }
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct Series {
    pub n: Vec<f64>,
    pub norm: Vec<f64>,
}

impl Series {
    pub fn from_norms(norms: &[f64]) -> Self {
        Self {
            n: (0..norms.len()).map(|k| k as f64).collect(),
            norm: norms.iter().map(|&v| finite(v)).collect(),
        }
    }
}

/// Result of [`super::run_scenario`].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScenarioReport {
    pub scenario: String,
    pub params: BTreeMap<String, f64>,
    pub verdicts: Vec<Verdict>,
    pub series: Series,
    /// Informational values that are reported but not judged.
    #[serde(default)]
    pub statistics: BTreeMap<String, f64>,
    #[serde(skip)]
    pub grids: Vec<(String, RegionGrid<f64>)>,
}

impl ScenarioReport {
    pub(crate) fn new(scenario: &str, params: BTreeMap<String, f64>) -> Self {
        Self {
            scenario: scenario.to_string(),
            params,
            verdicts: Vec::new(),
            series: Series::default(),
            statistics: BTreeMap::new(),
            grids: Vec::new(),
        }
    }

    pub(crate) fn push(&mut self, v: Verdict) {
        self.verdicts.push(v);
    }

    pub(crate) fn stat(&mut self, key: &str, value: f64) {
        self.statistics.insert(key.to_string(), finite(value));
    }

    /// Every verdict passed.
    pub fn pass(&self) -> bool {
        self.verdicts.iter().all(|v| v.pass)
    }

    /// Every verdict matched its expected outcome.
    pub fn agrees(&self) -> bool {
        self.verdicts.iter().all(Verdict::agrees)
    }

    pub fn verdict(&self, name: &str) -> Option<&Verdict> {
        self.verdicts.iter().find(|v| v.name == name)
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }

    /// Parses a report and checks the structural invariants of the schema.
    pub fn from_json(text: &str) -> Result<Self> {
        let r: Self = serde_json::from_str(text)?;
        r.validate()?;
        Ok(r)
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |m: &str| Err(Error::Serialization(format!("invalid report: {m}")));
        if self.scenario.is_empty() {
            return bad("empty scenario name");
        }
        if self.series.n.len() != self.series.norm.len() {
            return bad("series n and norm lengths differ");
        }
        if self.verdicts.iter().any(|v| v.name.is_empty()) {
            return bad("unnamed verdict");
        }
        Ok(())
    }

    /// Series as CSV `n,norm`.
    pub fn write_series_csv<W: Write>(&self, out: W) -> Result<()> {
        let mut w = csv::Writer::from_writer(out);
        w.write_record(["n", "norm"])?;
        for (n, v) in self.series.n.iter().zip(&self.series.norm) {
            w.write_record([format!("{n}"), fmt17(*v)])?;
        }
        w.flush()?;
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn verdict_constructors() {
        assert!(Verdict::at_most("a", 1.0, 1.0, 0.0).pass);
        assert!(!Verdict::at_most("a", 1.1, 1.0, 0.05).pass);
        assert!(Verdict::at_least("b", 0.95, 1.0, 0.05).pass);
        assert!(Verdict::close("c", 2.0, 2.0 + 1e-9, 1e-8).pass);
        let f = Verdict::flag("d", false).expect_fail();
        assert!(!f.pass && f.agrees());
        let nan = Verdict::at_most("e", f64::NAN, 1.0, 0.0);
        assert!(!nan.pass && nan.measured.is_finite());
    }

    #[test]
    fn json_round_trip() {
        let mut r = ScenarioReport::new("demo", [("N".to_string(), 8.0)].into_iter().collect());
        r.push(Verdict::at_most("x", 0.5, 1.0, 0.0));
        r.stat("inf", f64::INFINITY);
        r.series = Series::from_norms(&[1.0, 0.5]);
        let text = r.to_json().unwrap();
        let back = ScenarioReport::from_json(&text).unwrap();
        assert_eq!(back, r);
        assert!(ScenarioReport::from_json("{\"scenario\": \"\"}").is_err());
    }
}
