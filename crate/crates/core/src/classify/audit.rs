use std::fmt;

use serde::{Deserialize, Serialize};

use crate::constructors::{block_bound, block_precondition, realize_block_decomposition};
use crate::patterns::Combination;

use super::record::Status;
use super::store::Store;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Violation {
    pub combination: Combination,
    pub status: String,
    pub reason: String,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct AuditReport {
    pub degrees: Vec<usize>,
    pub records: usize,
    /// Records with both counts above the block bound, rebuilt by block decomposition.
    pub block_checked: usize,
    pub violations: Vec<Violation>,
}

impl AuditReport {
    pub fn passed(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Checks that only one-sided pairs are non-realizable or open, and that
/// every pair with `min(pos,neg)` above the block bound is realized and is
/// rebuilt by block decomposition alone.
pub fn audit_conjecture(store: &Store) -> AuditReport {
    let mut report = AuditReport {
        degrees: store.degrees(),
        ..AuditReport::default()
    };
    for r in store.records() {
        report.records += 1;
        let c = r.key();
        let mut violate = |reason: String| {
            report.violations.push(Violation {
                combination: c,
                status: r.status.label().to_string(),
                reason,
            })
        };
        if !matches!(r.status, Status::Realizable { .. }) && c.pair.min() != 0 {
            violate(format!("{} with both counts positive", r.status.label()));
        }
        if block_precondition(r.degree, c.pair) {
            report.block_checked += 1;
            if !matches!(r.status, Status::Realizable { .. }) {
                violate(format!(
                    "min(pos,neg) = {} exceeds {} but not realized",
                    c.pair.min(),
                    block_bound(r.degree)
                ));
            } else if let Err(e) = realize_block_decomposition(c.pattern, c.pair) {
                violate(format!("block decomposition failed: {e}"));
            }
        }
    }
    report
}

impl fmt::Display for AuditReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let verdict = if self.passed() { "PASS" } else { "FAIL" };
        let degrees: Vec<String> = self.degrees.iter().map(|d| d.to_string()).collect();
        writeln!(
            f,
            "audit {verdict}: {} records over degrees [{}], {} rebuilt by block decomposition",
            self.records,
            degrees.join(","),
            self.block_checked
        )?;
        for v in &self.violations {
            writeln!(f, "  {} [{}]: {}", v.combination, v.status, v.reason)?;
        }
        Ok(())
    }
}
