use std::collections::BTreeMap;
use std::fmt;

use crate::rational::abs_max;
use crate::superdomain::SuperFunction;
use crate::Q;

/// Outcome of one named check; `pass` iff no residual component is nonzero.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CheckReport {
    pub name: String,
    pub pass: bool,
    pub violations: usize,
    pub worst: Option<String>,
    pub notes: Vec<String>,
}

impl CheckReport {
    pub fn passed(name: &str) -> Self {
        CheckReport {
            name: name.to_string(),
            pass: true,
            violations: 0,
            worst: None,
            notes: Vec::new(),
        }
    }

    pub fn failed(name: &str, message: String) -> Self {
        CheckReport {
            name: name.to_string(),
            pass: false,
            violations: 1,
            worst: Some(message),
            notes: Vec::new(),
        }
    }

    /// Report over residual components keyed by a printable index; the worst
    /// component is the one with the largest coefficient, first in key order on ties.
    pub fn from_residuals<K: Ord>(
        name: &str,
        residuals: &BTreeMap<K, SuperFunction>,
        label: impl Fn(&K) -> String,
    ) -> Self {
        let mut worst: Option<(&K, Q)> = None;
        let mut count = 0;
        for (k, v) in residuals {
            if v.is_zero() {
                continue;
            }
            count += 1;
            let size = abs_max(v.terms().map(|(_, c)| c));
            if worst.as_ref().is_none_or(|(_, w)| size > *w) {
                worst = Some((k, size));
            }
        }
        CheckReport {
            name: name.to_string(),
            pass: count == 0,
            violations: count,
            worst: worst.map(|(k, _)| format!("{} = {}", label(k), residuals[k])),
            notes: Vec::new(),
        }
    }

    pub fn with_note(mut self, note: impl Into<String>) -> Self {
        self.notes.push(note.into());
        self
    }

    /// Combines sub-checks into one report named `name`.
    pub fn all(name: &str, parts: &[CheckReport]) -> Self {
        let failing: Vec<&CheckReport> = parts.iter().filter(|p| !p.pass).collect();
        CheckReport {
            name: name.to_string(),
            pass: failing.is_empty(),
            violations: failing.iter().map(|p| p.violations).sum(),
            worst: failing
                .first()
                .map(|p| format!("{}: {}", p.name, p.worst.clone().unwrap_or_default())),
            notes: parts
                .iter()
                .map(|p| format!("{} {}", p.name, if p.pass { "pass" } else { "fail" }))
                .collect(),
        }
    }
}

impl fmt::Display for CheckReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: {}", self.name, if self.pass { "pass" } else { "FAIL" })?;
        if !self.pass {
            write!(f, " ({} nonzero", self.violations)?;
            if let Some(w) = &self.worst {
                write!(f, "; worst {w}")?;
            }
            write!(f, ")")?;
        }
        Ok(())
    }
}

/// `E3` for an even frame index, `S5` for the odd index `n + 5`.
pub fn frame_label(n: usize, a: usize) -> String {
    if a < n {
        format!("E{a}")
    } else {
        format!("S{}", a - n)
    }
}

pub fn labels(n: usize, idx: &[usize]) -> String {
    idx.iter().map(|&a| frame_label(n, a)).collect::<Vec<_>>().join(",")
}
