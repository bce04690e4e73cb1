//! Check records shared by the exact and numeric verification suites.

use serde::{Deserialize, Serialize};

use crate::scalar::{self, Scalar};
use crate::tensoralg::Multivector;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
}

/// Exact residuals are carried as rational strings, numeric ones as floats.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Residual {
    Exact(String),
    Float(f64),
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CheckRecord {
    pub id: String,
    pub anchor: String,
    pub status: Status,
    pub residual: Residual,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub witness: Option<String>,
}

impl CheckRecord {
    pub fn exact(id: impl Into<String>, anchor: impl Into<String>, residual: &Scalar, witness: Option<String>) -> Self {
        let pass = num_traits::Zero::is_zero(residual);
        CheckRecord {
            id: id.into(),
            anchor: anchor.into(),
            status: if pass { Status::Pass } else { Status::Fail },
            residual: Residual::Exact(scalar::render(residual)),
            witness: if pass { None } else { witness },
        }
    }

    /// Exact check that `diff` vanishes; the witness is its leading term.
    pub fn exact_zero(id: impl Into<String>, anchor: impl Into<String>, diff: &Multivector) -> Self {
        let witness = diff
            .terms()
            .next()
            .map(|(idx, c)| format!("coefficient {} at {:?}", scalar::render(c), idx));
        Self::exact(id, anchor, &diff.max_abs(), witness)
    }

    pub fn boolean(id: impl Into<String>, anchor: impl Into<String>, ok: bool, witness: Option<String>) -> Self {
        CheckRecord {
            id: id.into(),
            anchor: anchor.into(),
            status: if ok { Status::Pass } else { Status::Fail },
            residual: Residual::Exact(if ok { "0" } else { "1" }.into()),
            witness: if ok { None } else { witness },
        }
    }

    /// Passes when `residual <= tol`; NaN always fails.
    pub fn numeric(id: impl Into<String>, anchor: impl Into<String>, residual: f64, tol: f64, witness: Option<String>) -> Self {
        let pass = residual <= tol;
        CheckRecord {
            id: id.into(),
            anchor: anchor.into(),
            status: if pass { Status::Pass } else { Status::Fail },
            residual: Residual::Float(residual),
            witness: if pass { None } else { witness },
        }
    }

    pub fn passed(&self) -> bool {
        self.status == Status::Pass
    }
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct Report {
    pub checks: Vec<CheckRecord>,
}

impl Report {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn push(&mut self, rec: CheckRecord) {
        self.checks.push(rec);
    }

    pub fn extend(&mut self, other: Report) {
        self.checks.extend(other.checks);
    }

    /// Prefixes every id, used when one suite embeds another.
    pub fn prefixed(mut self, prefix: &str) -> Self {
        for c in &mut self.checks {
            c.id = format!("{prefix}{}", c.id);
        }
        self
    }

    pub fn all_pass(&self) -> bool {
        self.checks.iter().all(CheckRecord::passed)
    }

    pub fn failures(&self) -> impl Iterator<Item = &CheckRecord> {
        self.checks.iter().filter(|c| !c.passed())
    }

    pub fn get(&self, id: &str) -> Option<&CheckRecord> {
        self.checks.iter().find(|c| c.id == id)
    }

    /// Collapses repeated ids to one record: the first failure, else the largest float residual.
    pub fn worst_per_id(reports: impl IntoIterator<Item = Report>) -> Report {
        let mut out: Vec<CheckRecord> = Vec::new();
        for rec in reports.into_iter().flat_map(|r| r.checks) {
            match out.iter_mut().find(|c| c.id == rec.id) {
                None => out.push(rec),
                Some(cur) => {
                    let worse = match (&cur.residual, &rec.residual) {
                        _ if cur.passed() != rec.passed() => !rec.passed(),
                        (Residual::Float(a), Residual::Float(b)) => b > a,
                        _ => false,
                    };
                    if worse {
                        *cur = rec;
                    }
                }
            }
        }
        Report { checks: out }
    }

    /// Stable order by id; ties keep insertion order.
    pub fn sorted(mut self) -> Self {
        self.checks.sort_by(|a, b| a.id.cmp(&b.id));
        self
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::int;

    #[test]
    fn exact_record_status() {
        assert!(CheckRecord::exact("a", "x", &int(0), Some("w".into())).passed());
        let bad = CheckRecord::exact("a", "x", &int(3), Some("w".into()));
        assert!(!bad.passed());
        assert_eq!(bad.witness.as_deref(), Some("w"));
    }

    #[test]
    fn numeric_nan_fails() {
        assert!(!CheckRecord::numeric("n", "x", f64::NAN, 1.0, None).passed());
        assert!(CheckRecord::numeric("n", "x", 1e-12, 1e-9, None).passed());
    }

    #[test]
    fn worst_per_id_keeps_failures_and_maxima() {
        let mut a = Report::new();
        a.push(CheckRecord::numeric("x", "", 1e-12, 1e-9, None));
        a.push(CheckRecord::numeric("y", "", 1.0, 1e-9, Some("first".into())));
        let mut b = Report::new();
        b.push(CheckRecord::numeric("x", "", 1e-10, 1e-9, None));
        b.push(CheckRecord::numeric("y", "", 2.0, 1e-9, Some("second".into())));
        let w = Report::worst_per_id([a, b]);
        assert_eq!(w.checks.len(), 2);
        assert_eq!(w.get("x").unwrap().residual, Residual::Float(1e-10));
        assert_eq!(w.get("y").unwrap().witness.as_deref(), Some("second"));
    }

    #[test]
    fn sorting_is_by_id() {
        let mut r = Report::new();
        r.push(CheckRecord::boolean("b", "", true, None));
        r.push(CheckRecord::boolean("a", "", false, None));
        let r = r.sorted();
        assert_eq!(r.checks[0].id, "a");
        assert!(!r.all_pass());
    }
}
