use serde::{Deserialize, Serialize};

use crate::certificates::Certificate;
use crate::constructors::Witness;
use crate::patterns::{Combination, RootPair, SignPattern};

pub const TOOL_VERSION: &str = env!("CARGO_PKG_VERSION");

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Status {
    Realizable { witness: Box<Witness> },
    NonRealizable { certificate: Certificate },
    Unknown,
}

impl Status {
    pub fn label(&self) -> &'static str {
        match self {
            Status::Realizable { .. } => "realizable",
            Status::NonRealizable { .. } => "non_realizable",
            Status::Unknown => "unknown",
        }
    }

    /// Ordering used for monotonicity: unknown < decided.
    pub fn is_decided(&self) -> bool {
        !matches!(self, Status::Unknown)
    }
}

/// Outcome for one orbit, keyed by its canonical representative.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClassificationRecord {
    pub degree: usize,
    pub pattern: SignPattern,
    pub pos: u32,
    pub neg: u32,
    pub status: Status,
    pub strategy: String,
    pub wall_ms: u64,
    pub seed: u64,
    pub tool_version: String,
}

impl ClassificationRecord {
    pub fn key(&self) -> Combination {
        Combination::new(self.pattern, RootPair::new(self.pos, self.neg))
    }

    pub fn pair(&self) -> RootPair {
        RootPair::new(self.pos, self.neg)
    }

    /// Re-checks the embedded witness or certificate against the key.
    pub fn verify(&self) -> Result<(), String> {
        if self.pattern.degree() != self.degree {
            return Err(format!(
                "degree {} does not match pattern {}",
                self.degree, self.pattern
            ));
        }
        self.pattern
            .check_admissible(self.pair())
            .map_err(|e| e.to_string())?;
        match &self.status {
            Status::Realizable { witness } => {
                if witness.combination() != self.key() {
                    return Err(format!(
                        "witness realizes {}, record is for {}",
                        witness.combination(),
                        self.key()
                    ));
                }
                witness.reverify().map_err(|e| e.to_string())
            }
            Status::NonRealizable { certificate } => {
                if certificate.recheck(self.pattern, self.pair()) {
                    Ok(())
                } else {
                    Err(format!("certificate {} does not re-fire", certificate.kind))
                }
            }
            Status::Unknown => Ok(()),
        }
    }

    /// Same record with the timing field cleared, for determinism comparisons.
    pub fn without_timing(&self) -> ClassificationRecord {
        ClassificationRecord {
            wall_ms: 0,
            ..self.clone()
        }
    }
}
