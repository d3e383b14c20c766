//! Verification reports: one entry per named relation.

use serde::Serialize;

use crate::cyclotomic::CycScalar;
use crate::error::Result;
use crate::linalg::Matrix;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
}

/// First entry at which the two sides of a relation differ.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Mismatch {
    pub row: usize,
    pub col: usize,
    pub lhs: CycScalar,
    pub rhs: CycScalar,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CheckResult {
    pub relation: String,
    pub status: Status,
    pub first_mismatch: Option<Mismatch>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub detail: Option<String>,
}

impl CheckResult {
    pub fn passed(&self) -> bool {
        self.status == Status::Pass
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Report {
    pub suite: String,
    pub p: u32,
    pub checks: Vec<CheckResult>,
}

impl Report {
    pub fn new(suite: impl Into<String>, p: u32) -> Self {
        Report { suite: suite.into(), p, checks: Vec::new() }
    }

    pub fn passed(&self) -> bool {
        self.checks.iter().all(CheckResult::passed)
    }

    pub fn failures(&self) -> impl Iterator<Item = &CheckResult> {
        self.checks.iter().filter(|c| !c.passed())
    }

    pub fn get(&self, relation: &str) -> Option<&CheckResult> {
        self.checks.iter().find(|c| c.relation == relation)
    }

    /// Appends the checks of `other`.
    pub fn absorb(&mut self, other: Report) {
        self.checks.extend(other.checks);
    }

    fn push(&mut self, relation: &str, ok: bool, first_mismatch: Option<Mismatch>, detail: Option<String>) {
        self.checks.push(CheckResult {
            relation: relation.to_string(),
            status: if ok { Status::Pass } else { Status::Fail },
            first_mismatch,
            detail,
        });
    }

    /// Records a boolean outcome.
    pub fn assert(&mut self, relation: &str, ok: bool, detail: impl Into<String>) {
        let detail = detail.into();
        self.push(relation, ok, None, (!detail.is_empty()).then_some(detail));
    }

    /// Records a computed outcome; an error counts as a failure.
    pub fn assert_result(&mut self, relation: &str, outcome: Result<(bool, String)>) {
        match outcome {
            Ok((ok, detail)) => self.assert(relation, ok, detail),
            Err(e) => self.push(relation, false, None, Some(format!("error: {e}"))),
        }
    }

    /// Records exact equality of two matrices.
    pub fn matrix_eq(&mut self, relation: &str, lhs: &Matrix, rhs: &Matrix) {
        let mismatch = lhs.first_difference(rhs).map(|(row, col)| {
            let pick = |m: &Matrix| {
                if row < m.rows() && col < m.cols() {
                    m.get(row, col).clone()
                } else {
                    CycScalar::zero(m.ring())
                }
            };
            Mismatch { row, col, lhs: pick(lhs), rhs: pick(rhs) }
        });
        let detail = (lhs.rows() != rhs.rows() || lhs.cols() != rhs.cols()).then(|| {
            format!("shape {}x{} vs {}x{}", lhs.rows(), lhs.cols(), rhs.rows(), rhs.cols())
        });
        self.push(relation, mismatch.is_none(), mismatch, detail);
    }

    /// Records equality of matrices computed fallibly.
    pub fn matrix_eq_result(&mut self, relation: &str, sides: Result<(Matrix, Matrix)>) {
        match sides {
            Ok((lhs, rhs)) => self.matrix_eq(relation, &lhs, &rhs),
            Err(e) => self.push(relation, false, None, Some(format!("error: {e}"))),
        }
    }

    /// Records exact equality of two vectors; mismatches report column 0.
    pub fn vector_eq(&mut self, relation: &str, lhs: &[CycScalar], rhs: &[CycScalar]) {
        let mismatch = lhs
            .iter()
            .zip(rhs)
            .position(|(a, b)| a != b)
            .map(|row| Mismatch { row, col: 0, lhs: lhs[row].clone(), rhs: rhs[row].clone() });
        let len_ok = lhs.len() == rhs.len();
        let detail = (!len_ok).then(|| format!("length {} vs {}", lhs.len(), rhs.len()));
        self.push(relation, mismatch.is_none() && len_ok, mismatch, detail);
    }

    /// Records exact equality of two scalars.
    pub fn scalar_eq(&mut self, relation: &str, lhs: &CycScalar, rhs: &CycScalar) {
        let mismatch = (lhs != rhs).then(|| Mismatch { row: 0, col: 0, lhs: lhs.clone(), rhs: rhs.clone() });
        self.push(relation, mismatch.is_none(), mismatch, None);
    }

    /// One line per check, prefixed by PASS or FAIL.
    pub fn summary_lines(&self) -> Vec<String> {
        self.checks
            .iter()
            .map(|c| {
                let tag = if c.passed() { "PASS" } else { "FAIL" };
                let mut line = format!("[{tag}] {} p={}: {}", self.suite, self.p, c.relation);
                if let Some(m) = &c.first_mismatch {
                    line.push_str(&format!(" (first mismatch at ({}, {}): {} vs {})", m.row, m.col, m.lhs, m.rhs));
                }
                if let Some(d) = &c.detail {
                    line.push_str(&format!(" [{d}]"));
                }
                line
            })
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cyclotomic::CycRing;

    #[test]
    fn mismatch_is_located() {
        let ring = CycRing::new(3).unwrap();
        let a = Matrix::identity(&ring, 3);
        let mut b = a.clone();
        b.set(2, 1, CycScalar::from_int(&ring, 5));
        let mut r = Report::new("demo", 3);
        r.matrix_eq("A = B", &a, &b);
        r.matrix_eq("A = A", &a, &a);
        assert!(!r.passed());
        let m = r.checks[0].first_mismatch.as_ref().unwrap();
        assert_eq!((m.row, m.col), (2, 1));
        assert!(r.checks[1].passed());
        let json = serde_json::to_value(&r.checks[0]).unwrap();
        assert_eq!(json["status"], "fail");
        assert_eq!(json["first_mismatch"]["row"], 2);
    }
}
