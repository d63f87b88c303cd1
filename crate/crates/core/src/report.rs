//! Machine-readable outcomes of identity checks.

use std::borrow::Cow;
use std::time::Instant;

use rayon::prelude::*;
use serde::{Serialize, Serializer};

use crate::exactlin::{format_rational, Vector};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Outcome {
    Pass,
    Fail,
    Error,
}

fn ser_vector<S: Serializer>(v: &Vector, s: S) -> Result<S::Ok, S::Error> {
    s.collect_seq(v.iter().map(format_rational))
}

/// One failed instance of an identity: the identity label, the 1-based basis
/// tuple it was evaluated on, and both sides as evaluated.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Violation {
    pub identity: String,
    pub tuple: Vec<usize>,
    #[serde(serialize_with = "ser_vector")]
    pub lhs: Vector,
    #[serde(serialize_with = "ser_vector")]
    pub rhs: Vector,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Report {
    pub subject: String,
    pub outcome: Outcome,
    pub violations: Vec<Violation>,
    pub tuples_checked: usize,
    /// Wall time in milliseconds.
    pub elapsed_ms: u64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub notes: Vec<String>,
}

/// A single side-by-side comparison produced by an evaluator.
pub struct Comparison {
    pub identity: Cow<'static, str>,
    pub lhs: Vector,
    pub rhs: Vector,
}

impl Comparison {
    pub fn new(identity: impl Into<Cow<'static, str>>, lhs: Vector, rhs: Vector) -> Self {
        Comparison {
            identity: identity.into(),
            lhs,
            rhs,
        }
    }
}

impl Report {
    pub fn new(subject: impl Into<String>) -> Self {
        Report {
            subject: subject.into(),
            outcome: Outcome::Pass,
            violations: Vec::new(),
            tuples_checked: 0,
            elapsed_ms: 0,
            error: None,
            notes: Vec::new(),
        }
    }

    pub fn error(subject: impl Into<String>, message: impl Into<String>) -> Self {
        let mut r = Report::new(subject);
        r.outcome = Outcome::Error;
        r.error = Some(message.into());
        r
    }

    pub fn passed(&self) -> bool {
        self.outcome == Outcome::Pass
    }

    pub fn push(&mut self, v: Violation) {
        self.violations.push(v);
        if self.outcome == Outcome::Pass {
            self.outcome = Outcome::Fail;
        }
    }

    pub fn note(&mut self, note: impl Into<String>) {
        self.notes.push(note.into());
    }

    /// Folds `other` into `self`, keeping violations in order.
    pub fn absorb(&mut self, other: Report) {
        self.tuples_checked += other.tuples_checked;
        self.elapsed_ms += other.elapsed_ms;
        for v in other.violations {
            self.push(v);
        }
        if other.outcome == Outcome::Error {
            self.outcome = Outcome::Error;
            self.error = other.error;
        }
        self.notes.extend(other.notes);
    }

    /// Evaluates `eval` on every tuple in parallel and records each comparison
    /// whose sides differ. Tuples are 0-based here and stored 1-based; the
    /// violation list follows the order of `tuples`.
    pub fn check_tuples<F>(subject: impl Into<String>, tuples: Vec<Vec<usize>>, eval: F) -> Report
    where
        F: Fn(&[usize]) -> Vec<Comparison> + Sync,
    {
        let start = Instant::now();
        let found: Vec<Vec<Violation>> = tuples
            .par_iter()
            .map(|t| {
                eval(t)
                    .into_iter()
                    .filter(|c| c.lhs != c.rhs)
                    .map(|c| Violation {
                        identity: c.identity.into_owned(),
                        tuple: t.iter().map(|i| i + 1).collect(),
                        lhs: c.lhs,
                        rhs: c.rhs,
                    })
                    .collect()
            })
            .collect();
        let mut report = Report::new(subject);
        report.tuples_checked = tuples.len();
        for v in found.into_iter().flatten() {
            report.push(v);
        }
        report.elapsed_ms = start.elapsed().as_millis() as u64;
        report
    }

    /// One-line human summary.
    pub fn summary(&self) -> String {
        match self.outcome {
            Outcome::Pass => format!(
                "{}: pass ({} tuples, {} ms)",
                self.subject, self.tuples_checked, self.elapsed_ms
            ),
            Outcome::Fail => format!(
                "{}: FAIL, {} violation(s) over {} tuples",
                self.subject,
                self.violations.len(),
                self.tuples_checked
            ),
            Outcome::Error => format!(
                "{}: error: {}",
                self.subject,
                self.error.as_deref().unwrap_or("unknown")
            ),
        }
    }
}

/// Strictly increasing `k`-subsets of `0..n`, in lexicographic order.
pub fn increasing(n: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur = Vec::with_capacity(k);
    fn rec(n: usize, k: usize, start: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            cur.push(i);
            rec(n, k, i + 1, cur, out);
            cur.pop();
        }
    }
    rec(n, k, 0, &mut cur, &mut out);
    out
}

/// Concatenations `a ++ b` for every `a` in `left` and `b` in `right`.
pub fn product(left: &[Vec<usize>], right: &[Vec<usize>]) -> Vec<Vec<usize>> {
    let mut out = Vec::with_capacity(left.len() * right.len());
    for a in left {
        for b in right {
            let mut t = a.clone();
            t.extend_from_slice(b);
            out.push(t);
        }
    }
    out
}

/// All length-`k` words over `0..n`.
pub fn all_words(n: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = vec![Vec::new()];
    for _ in 0..k {
        out = product(&out, &(0..n).map(|i| vec![i]).collect::<Vec<_>>());
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactlin::rat;

    #[test]
    fn tuple_generators() {
        assert_eq!(increasing(4, 2).len(), 6);
        assert_eq!(increasing(5, 3).len(), 10);
        assert_eq!(increasing(3, 3), vec![vec![0, 1, 2]]);
        assert!(increasing(2, 3).is_empty());
        assert_eq!(product(&increasing(4, 2), &increasing(4, 3)).len(), 24);
        assert_eq!(all_words(3, 2).len(), 9);
    }

    #[test]
    fn report_records_only_mismatches_in_order() {
        let tuples = vec![vec![0], vec![1], vec![2]];
        let r = Report::check_tuples("parity", tuples, |t| {
            vec![Comparison::new("even", vec![rat((t[0] % 2) as i64)], vec![rat(0)])]
        });
        assert_eq!(r.outcome, Outcome::Fail);
        assert_eq!(r.tuples_checked, 3);
        assert_eq!(r.violations.len(), 1);
        assert_eq!(r.violations[0].tuple, vec![2]);
        let json = serde_json::to_value(&r).unwrap();
        assert_eq!(json["outcome"], "fail");
        assert_eq!(json["violations"][0]["lhs"][0], "1");
    }

    #[test]
    fn absorb_keeps_failure() {
        let mut a = Report::new("a");
        let mut b = Report::new("b");
        b.push(Violation {
            identity: "x".into(),
            tuple: vec![1],
            lhs: vec![rat(1)],
            rhs: vec![rat(0)],
        });
        a.absorb(b);
        assert!(!a.passed());
        assert_eq!(a.violations.len(), 1);
    }
}
