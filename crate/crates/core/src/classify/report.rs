use std::collections::BTreeMap;
use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::patterns::combination_counts;

use super::record::Status;
use super::store::Store;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ReportFormat {
    Text,
    Json,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct DegreeTable {
    pub degree: usize,
    pub raw_combinations: u128,
    pub monic_combinations: u128,
    pub orbits: usize,
    pub stored: usize,
    pub realizable: usize,
    pub non_realizable: usize,
    pub unknown: usize,
    /// Realizations by constructor, certificates by kind.
    pub methods: BTreeMap<String, usize>,
    pub wall_ms: u64,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Report {
    pub degrees: Vec<DegreeTable>,
}

impl Report {
    pub fn from_store(store: &Store) -> Report {
        let mut tables: BTreeMap<usize, DegreeTable> = BTreeMap::new();
        for r in store.records() {
            let t = tables.entry(r.degree).or_insert_with(|| {
                let counts = combination_counts(r.degree).ok();
                DegreeTable {
                    degree: r.degree,
                    raw_combinations: counts.map_or(0, |c| c.raw),
                    monic_combinations: counts.map_or(0, |c| c.monic),
                    orbits: counts.map_or(0, |c| c.orbits),
                    ..DegreeTable::default()
                }
            });
            t.stored += 1;
            t.wall_ms += r.wall_ms;
            let method = match &r.status {
                Status::Realizable { witness } => {
                    t.realizable += 1;
                    witness.method().name().to_string()
                }
                Status::NonRealizable { certificate } => {
                    t.non_realizable += 1;
                    certificate.kind.name().to_string()
                }
                Status::Unknown => {
                    t.unknown += 1;
                    "unknown".to_string()
                }
            };
            *t.methods.entry(method).or_default() += 1;
        }
        Report {
            degrees: tables.into_values().collect(),
        }
    }

    pub fn render(&self, format: ReportFormat) -> String {
        match format {
            ReportFormat::Json => {
                serde_json::to_string_pretty(self).expect("report serializes") + "\n"
            }
            ReportFormat::Text => self.to_text(),
        }
    }

    fn to_text(&self) -> String {
        let mut out = String::new();
        if self.degrees.is_empty() {
            out.push_str("empty store\n");
        }
        for t in &self.degrees {
            let _ = writeln!(
                out,
                "degree {}: {} raw combinations / {} monic / {} orbits",
                t.degree, t.raw_combinations, t.monic_combinations, t.orbits
            );
            let _ = writeln!(
                out,
                "  stored {}  realizable {}  non_realizable {}  unknown {}  wall {} ms",
                t.stored, t.realizable, t.non_realizable, t.unknown, t.wall_ms
            );
            for (m, n) in &t.methods {
                let _ = writeln!(out, "    {m:<28} {n}");
            }
        }
        out
    }
}

pub fn export_report(store: &Store, format: ReportFormat) -> String {
    Report::from_store(store).render(format)
}
