//! Structured pass/fail records with failure witnesses.

use std::fmt;
use std::time::{Duration, Instant};

use crate::exactla::Vector;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Verdict {
    Pass,
    Fail,
    /// Passed on a finite window of a locally-finite structure.
    WindowVerified,
    /// A precondition did not hold, so the check was not run.
    Refused,
}

impl Verdict {
    pub fn as_str(&self) -> &'static str {
        match self {
            Verdict::Pass => "pass",
            Verdict::Fail => "fail",
            Verdict::WindowVerified => "window-verified",
            Verdict::Refused => "refused",
        }
    }

    pub fn parse(s: &str) -> Option<Verdict> {
        Some(match s {
            "pass" => Verdict::Pass,
            "fail" => Verdict::Fail,
            "window-verified" => Verdict::WindowVerified,
            "refused" => Verdict::Refused,
            _ => return None,
        })
    }
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// The first violating basis tuple and the two sides that disagree there.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Witness {
    pub tuple: Vec<usize>,
    pub expected: Vector,
    pub actual: Vector,
}

impl Witness {
    pub fn new(tuple: Vec<usize>, expected: Vector, actual: Vector) -> Self {
        Witness {
            tuple,
            expected,
            actual,
        }
    }

    /// `actual - expected`, when the two sides have the same shape.
    pub fn discrepancy(&self) -> Option<Vector> {
        self.actual.sub(&self.expected).ok()
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Provenance {
    pub input_hash: Option<String>,
    pub seed: Option<u64>,
    pub window: Option<usize>,
    pub max_subset: Option<usize>,
}

#[derive(Clone, Debug)]
pub struct CheckReport {
    pub check: String,
    pub verdict: Verdict,
    pub message: String,
    pub witness: Option<Witness>,
    pub elapsed: Duration,
    pub provenance: Provenance,
    pub notes: Vec<String>,
    pub children: Vec<CheckReport>,
}

impl CheckReport {
    fn with(check: &str, verdict: Verdict, message: String, witness: Option<Witness>) -> Self {
        CheckReport {
            check: check.to_string(),
            verdict,
            message,
            witness,
            elapsed: Duration::ZERO,
            provenance: Provenance::default(),
            notes: Vec::new(),
            children: Vec::new(),
        }
    }

    pub fn pass(check: &str) -> Self {
        Self::with(check, Verdict::Pass, String::new(), None)
    }

    /// A failure always carries a witness.
    pub fn fail(check: &str, message: impl Into<String>, witness: Witness) -> Self {
        Self::with(check, Verdict::Fail, message.into(), Some(witness))
    }

    pub fn refused(check: &str, message: impl Into<String>, witness: Option<Witness>) -> Self {
        Self::with(check, Verdict::Refused, message.into(), witness)
    }

    /// Combines sub-reports: the aggregate passes iff every child passes (or
    /// is window-verified). The first failing child's witness is lifted.
    pub fn aggregate(check: &str, children: Vec<CheckReport>) -> Self {
        let bad = children.iter().find(|c| !c.passed());
        let mut out = match bad {
            None => Self::pass(check),
            Some(c) => {
                let mut r = Self::with(
                    check,
                    if c.verdict == Verdict::Refused {
                        Verdict::Refused
                    } else {
                        Verdict::Fail
                    },
                    format!("{}: {}", c.check, c.message),
                    c.witness.clone(),
                );
                if r.verdict == Verdict::Fail && r.witness.is_none() {
                    r.verdict = Verdict::Refused;
                }
                r
            }
        };
        out.elapsed = children.iter().map(|c| c.elapsed).sum();
        out.children = children;
        out
    }

    pub fn passed(&self) -> bool {
        matches!(self.verdict, Verdict::Pass | Verdict::WindowVerified)
    }

    pub fn with_note(mut self, note: impl Into<String>) -> Self {
        self.notes.push(note.into());
        self
    }

    pub fn with_message(mut self, message: impl Into<String>) -> Self {
        self.message = message.into();
        self
    }

    /// Marks a passing report as holding on a window only.
    pub fn window_verified(mut self, window: usize) -> Self {
        if self.verdict == Verdict::Pass {
            self.verdict = Verdict::WindowVerified;
        }
        self.provenance.window = Some(window);
        self.notes.push(format!("window-verified, w = {window}"));
        for c in &mut self.children {
            *c = c.clone().window_verified(window);
        }
        self
    }

    /// Runs `f` and records its wall time on the returned report.
    pub fn timed(f: impl FnOnce() -> CheckReport) -> CheckReport {
        let start = Instant::now();
        let mut r = f();
        r.elapsed = start.elapsed();
        r
    }

    /// Depth-first search for a report with the given check name.
    pub fn find(&self, check: &str) -> Option<&CheckReport> {
        if self.check == check {
            return Some(self);
        }
        self.children.iter().find_map(|c| c.find(check))
    }
}

impl fmt::Display for CheckReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: {}", self.check, self.verdict)?;
        if !self.message.is_empty() {
            write!(f, " ({})", self.message)?;
        }
        if let Some(w) = &self.witness {
            write!(
                f,
                " at {:?}: expected {} got {}",
                w.tuple, w.expected, w.actual
            )?;
        }
        Ok(())
    }
}
