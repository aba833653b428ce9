use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;
use std::time::Duration;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A battery of checks, named after the statement it re-establishes.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Part {
    /// Inverse round trips.
    I,
    /// Superdiagonal of the UDL decomposition.
    II,
    /// Diagonal of the UDL decomposition and the block determinants.
    III,
    /// Triangular Jacobian and its determinant.
    IV,
    /// Testable consequences of the coefficient-ring statement.
    VConsequences,
    /// Closed forms and reduction identities.
    Identities,
    /// Integration-domain bounds.
    Bounds,
}

impl Part {
    pub const ALL: [Part; 7] = [
        Part::I,
        Part::II,
        Part::III,
        Part::IV,
        Part::VConsequences,
        Part::Identities,
        Part::Bounds,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Part::I => "i",
            Part::II => "ii",
            Part::III => "iii",
            Part::IV => "iv",
            Part::VConsequences => "v-consequences",
            Part::Identities => "identities",
            Part::Bounds => "bounds",
        }
    }

    /// Parses a comma-separated list; `all` selects every part.
    pub fn parse_list(text: &str) -> Result<Vec<Part>> {
        let mut out = Vec::new();
        for tok in text.split(',').map(str::trim).filter(|t| !t.is_empty()) {
            if tok == "all" {
                out.extend(Part::ALL);
            } else {
                out.push(tok.parse()?);
            }
        }
        if out.is_empty() {
            return Err(Error::InvalidParameter("empty list of parts".into()));
        }
        out.sort();
        out.dedup();
        Ok(out)
    }
}

impl fmt::Display for Part {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Part {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        Part::ALL
            .into_iter()
            .find(|p| p.name() == s)
            .or((s == "v").then_some(Part::VConsequences))
            .ok_or_else(|| Error::InvalidParameter(format!("unknown part `{s}`")))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum CheckStatus {
    Pass,
    Fail,
    Skipped,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CheckRecord {
    pub name: String,
    pub part: Part,
    pub status: CheckStatus,
    /// Set on every failure; on a skip it says why.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<String>,
}

impl CheckRecord {
    pub fn pass(name: &str, part: Part) -> Self {
        Self {
            name: name.into(),
            part,
            status: CheckStatus::Pass,
            witness: None,
        }
    }

    pub fn fail(name: &str, part: Part, witness: String) -> Self {
        Self {
            name: name.into(),
            part,
            status: CheckStatus::Fail,
            witness: Some(witness),
        }
    }

    pub fn skipped(name: &str, part: Part, reason: &str) -> Self {
        Self {
            name: name.into(),
            part,
            status: CheckStatus::Skipped,
            witness: Some(reason.into()),
        }
    }

    /// Pass on an empty failure list, fail with the failures joined otherwise.
    pub fn from_failures(name: &str, part: Part, failures: Result<Vec<String>>) -> Self {
        match failures {
            Ok(v) if v.is_empty() => Self::pass(name, part),
            Ok(v) => Self::fail(name, part, v.join("; ")),
            Err(e) => Self::fail(name, part, e.to_string()),
        }
    }
}

/// All checks run on one Weyl element.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CheckReport {
    pub perm: String,
    pub records: Vec<CheckRecord>,
    /// Wall time; left out of the serialized form so reports are reproducible.
    #[serde(skip)]
    pub elapsed: Duration,
}

impl CheckReport {
    pub fn passed(&self) -> bool {
        self.records.iter().all(|r| r.status != CheckStatus::Fail)
    }

    pub fn failures(&self) -> impl Iterator<Item = &CheckRecord> + '_ {
        self.records.iter().filter(|r| r.status == CheckStatus::Fail)
    }

    pub fn get(&self, name: &str) -> Option<&CheckRecord> {
        self.records.iter().find(|r| r.name == name)
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Tally {
    pub pass: usize,
    pub fail: usize,
    pub skipped: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FirstFailure {
    pub perm: String,
    pub witness: String,
}

/// Aggregate of a sweep, with per-element reports sorted by one-line notation.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SweepReport {
    pub r: usize,
    pub mode: String,
    pub parts: Vec<Part>,
    pub elements: usize,
    pub passed: usize,
    pub failed: usize,
    pub checks: BTreeMap<String, Tally>,
    pub first_failures: BTreeMap<String, FirstFailure>,
    pub reports: Vec<CheckReport>,
    #[serde(skip)]
    pub elapsed: Duration,
}

impl SweepReport {
    pub fn all_passed(&self) -> bool {
        self.failed == 0
    }

    pub(crate) fn aggregate(
        r: usize,
        mode: String,
        parts: Vec<Part>,
        reports: Vec<CheckReport>,
        elapsed: Duration,
    ) -> Self {
        let mut checks: BTreeMap<String, Tally> = BTreeMap::new();
        let mut first_failures = BTreeMap::new();
        for rep in &reports {
            for rec in &rep.records {
                let t = checks.entry(rec.name.clone()).or_default();
                match rec.status {
                    CheckStatus::Pass => t.pass += 1,
                    CheckStatus::Skipped => t.skipped += 1,
                    CheckStatus::Fail => {
                        t.fail += 1;
                        first_failures.entry(rec.name.clone()).or_insert_with(|| FirstFailure {
                            perm: rep.perm.clone(),
                            witness: rec.witness.clone().unwrap_or_default(),
                        });
                    }
                }
            }
        }
        let passed = reports.iter().filter(|r| r.passed()).count();
        Self {
            r,
            mode,
            parts,
            elements: reports.len(),
            passed,
            failed: reports.len() - passed,
            checks,
            first_failures,
            reports,
            elapsed,
        }
    }

    /// A plain-text table of per-check tallies, ending with `k/N pass`.
    pub fn summary(&self) -> String {
        let width = self.checks.keys().map(String::len).max().unwrap_or(5).max(5);
        let mut out = format!("{:width$}  {:>6} {:>6} {:>7}\n", "check", "pass", "fail", "skipped");
        for (name, t) in &self.checks {
            out.push_str(&format!(
                "{name:width$}  {:>6} {:>6} {:>7}\n",
                t.pass, t.fail, t.skipped
            ));
        }
        for (name, f) in &self.first_failures {
            out.push_str(&format!("first failure of {name} at {}: {}\n", f.perm, f.witness));
        }
        out.push_str(&format!("{}/{} pass\n", self.passed, self.elements));
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn part_lists() {
        assert_eq!(
            Part::parse_list("iv,ii, iii").unwrap(),
            vec![Part::II, Part::III, Part::IV]
        );
        assert_eq!(Part::parse_list("all").unwrap().len(), 7);
        assert_eq!(Part::parse_list("v").unwrap(), vec![Part::VConsequences]);
        assert!(Part::parse_list("vi").is_err());
        assert!(Part::parse_list("").is_err());
    }

    #[test]
    fn failures_carry_witnesses() {
        let r = CheckRecord::from_failures("x", Part::II, Ok(vec!["a".into(), "b".into()]));
        assert_eq!(r.status, CheckStatus::Fail);
        assert_eq!(r.witness.as_deref(), Some("a; b"));
        let r = CheckRecord::from_failures("x", Part::II, Err(Error::Pole));
        assert!(r.witness.unwrap().contains("pole"));
        assert_eq!(
            CheckRecord::from_failures("x", Part::II, Ok(vec![])).status,
            CheckStatus::Pass
        );
    }
}
