//! Degree-wide classification with a resumable store.
//!
//! Every orbit is one work unit. Workers run on a rayon pool and send their
//! records over a channel to the calling thread, which is the only writer of
//! the store. Records depend only on the orbit and the configuration, so the
//! final store does not depend on the number of workers.

mod audit;
mod paper;
mod record;
mod report;
mod store;

use std::sync::mpsc;
use std::time::Instant;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::certificates::check_all;
use crate::constructors::{Realizer, RealizerConfig};
use crate::error::ClassifyError;
use crate::patterns::{enumerate_orbits, OrbitKey};

pub use audit::{audit_conjecture, AuditReport, Violation};
pub use paper::{
    ensure_complete, verify_against_paper, Erratum, ErratumKind, ErratumOutcome, PaperReport,
    PaperTable, ResolvedBeyond, ERRATA,
};
pub use record::{ClassificationRecord, Status, TOOL_VERSION};
pub use report::{export_report, DegreeTable, Report, ReportFormat};
pub use store::{Store, StoreLock, STORE_FORMAT, STORE_VERSION};

pub const MAX_CLASSIFY_DEGREE: usize = 10;
/// Degrees from here on need [`ClassifyConfig::long_run`].
pub const LONG_RUN_DEGREE: usize = 9;
/// Records between store flushes.
pub const FLUSH_EVERY: usize = 64;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClassifyConfig {
    pub jobs: usize,
    pub realizer: RealizerConfig,
    pub long_run: bool,
}

impl Default for ClassifyConfig {
    fn default() -> Self {
        ClassifyConfig {
            jobs: 1,
            realizer: RealizerConfig::default(),
            long_run: false,
        }
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct DegreeSummary {
    pub degree: usize,
    pub orbits: usize,
    /// Orbits already present in the store before the run.
    pub skipped: usize,
    pub processed: usize,
    pub realizable: usize,
    pub non_realizable: usize,
    pub unknown: usize,
    pub wall_ms: u64,
}

/// Certificates first, then the constructor pipeline.
pub fn classify_pair(orbit: &OrbitKey, realizer: &Realizer) -> ClassificationRecord {
    let start = Instant::now();
    let (sp, pair) = (orbit.pattern, orbit.pair);
    let (status, strategy) = match check_all(sp, pair) {
        Ok(Some(certificate)) => {
            let name = certificate.kind.name().to_string();
            (Status::NonRealizable { certificate }, name)
        }
        _ => match realizer.realize(sp, pair) {
            Ok(Some(witness)) => {
                let name = witness.method().name().to_string();
                (
                    Status::Realizable {
                        witness: Box::new(witness),
                    },
                    name,
                )
            }
            _ => (Status::Unknown, "exhausted".to_string()),
        },
    };
    ClassificationRecord {
        degree: sp.degree(),
        pattern: sp,
        pos: pair.pos,
        neg: pair.neg,
        status,
        strategy,
        wall_ms: start.elapsed().as_millis() as u64,
        seed: realizer.config().seed,
        tool_version: TOOL_VERSION.to_string(),
    }
}

fn check_degree(d: usize, config: &ClassifyConfig) -> Result<(), ClassifyError> {
    if !(1..=MAX_CLASSIFY_DEGREE).contains(&d) {
        return Err(crate::error::PatternError::DegreeOutOfRange(d, 1, MAX_CLASSIFY_DEGREE).into());
    }
    if d >= LONG_RUN_DEGREE && !config.long_run {
        return Err(ClassifyError::LongRunRequired(d));
    }
    Ok(())
}

/// Classifies every orbit of degree `d` not yet in `store`, flushing as it goes.
pub fn classify_degree(
    d: usize,
    config: &ClassifyConfig,
    store: &mut Store,
) -> Result<DegreeSummary, ClassifyError> {
    check_degree(d, config)?;
    let start = Instant::now();
    let orbits = enumerate_orbits(d)?;
    let todo: Vec<OrbitKey> = orbits
        .iter()
        .copied()
        .filter(|k| !store.contains(&k.combination()))
        .collect();
    let mut summary = DegreeSummary {
        degree: d,
        orbits: orbits.len(),
        skipped: orbits.len() - todo.len(),
        ..Default::default()
    };

    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(config.jobs.max(1))
        .build()
        .expect("thread pool");
    let realizer = Realizer::new(config.realizer);
    let (tx, rx) = mpsc::channel::<ClassificationRecord>();

    std::thread::scope(|scope| -> Result<(), ClassifyError> {
        let (todo, realizer, pool) = (&todo, &realizer, &pool);
        scope.spawn(move || {
            pool.install(|| {
                todo.par_iter().for_each_with(tx, |tx, key| {
                    let _ = tx.send(classify_pair(key, realizer));
                })
            })
        });
        for record in rx {
            match record.status {
                Status::Realizable { .. } => summary.realizable += 1,
                Status::NonRealizable { .. } => summary.non_realizable += 1,
                Status::Unknown => summary.unknown += 1,
            }
            summary.processed += 1;
            store.insert(record);
            if summary.processed.is_multiple_of(FLUSH_EVERY) {
                store.flush()?;
            }
        }
        store.flush()?;
        Ok(())
    })?;
    summary.wall_ms = start.elapsed().as_millis() as u64;
    Ok(summary)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::patterns::{canonical_orbit_rep, RootPair, SignPattern};

    fn key(s: &str, pos: u32, neg: u32) -> OrbitKey {
        canonical_orbit_rep(SignPattern::parse(s).unwrap(), RootPair::new(pos, neg))
    }

    #[test]
    fn classify_pair_examples() {
        let realizer = Realizer::new(RealizerConfig::default());
        let r = classify_pair(&key("(1,-,-,-,-,+)", 0, 3), &realizer);
        assert_eq!(r.status.label(), "non_realizable");
        r.verify().unwrap();
        let r = classify_pair(&key("(1,-,-,-,+,+)", 2, 1), &realizer);
        assert_eq!(r.status.label(), "realizable");
        r.verify().unwrap();
    }

    #[test]
    fn degree_bounds() {
        let mut store = Store::in_memory();
        let config = ClassifyConfig::default();
        assert!(matches!(
            classify_degree(0, &config, &mut store),
            Err(ClassifyError::Pattern(_))
        ));
        assert!(matches!(
            classify_degree(11, &config, &mut store),
            Err(ClassifyError::Pattern(_))
        ));
        assert!(matches!(
            classify_degree(9, &config, &mut store),
            Err(ClassifyError::LongRunRequired(9))
        ));
    }

    #[test]
    fn small_degrees_are_exhaustive_and_resume_is_idempotent() {
        let mut store = Store::in_memory();
        let config = ClassifyConfig {
            jobs: 2,
            ..ClassifyConfig::default()
        };
        for d in 1..=5 {
            let s = classify_degree(d, &config, &mut store).unwrap();
            assert_eq!(s.processed, s.orbits);
            assert_eq!(s.unknown, 0);
        }
        let before = store.fingerprint();
        let s = classify_degree(5, &config, &mut store).unwrap();
        assert_eq!((s.processed, s.skipped), (0, s.orbits));
        assert_eq!(store.fingerprint(), before);
        for r in store.records() {
            r.verify().unwrap();
        }
    }

    #[test]
    fn store_round_trip_on_disk() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("d4.jsonl");
        let mut store = Store::create(&path);
        classify_degree(4, &ClassifyConfig::default(), &mut store).unwrap();
        let loaded = Store::load(&path).unwrap();
        assert_eq!(loaded.fingerprint(), store.fingerprint());
        let text = std::fs::read_to_string(&path).unwrap();
        assert!(text.starts_with(r#"{"format":"descartes-classification","version":1}"#));
    }

    #[test]
    fn tampered_store_is_rejected() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("d3.jsonl");
        let mut store = Store::create(&path);
        classify_degree(3, &ClassifyConfig::default(), &mut store).unwrap();
        let text = std::fs::read_to_string(&path).unwrap();
        // Claim a different pair for the first stored witness.
        let tampered = text.replacen(r#""pos":0,"neg":1"#, r#""pos":0,"neg":3"#, 1);
        assert_ne!(tampered, text);
        std::fs::write(&path, tampered).unwrap();
        assert!(matches!(
            Store::load(&path),
            Err(crate::error::StoreError::Corrupt { .. })
        ));
        std::fs::write(&path, &text[..text.len() / 2]).unwrap();
        assert!(Store::load(&path).is_err());
    }

    #[test]
    fn lock_is_exclusive() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("s.jsonl");
        let lock = StoreLock::acquire(&path).unwrap();
        assert!(matches!(
            StoreLock::acquire(&path),
            Err(crate::error::StoreError::Locked(_))
        ));
        drop(lock);
        StoreLock::acquire(&path).unwrap();
    }

    #[test]
    fn audit_flags_two_sided_non_realizable() {
        let mut store = Store::in_memory();
        classify_degree(5, &ClassifyConfig::default(), &mut store).unwrap();
        assert!(audit_conjecture(&store).passed());
        let k = key("(1,-,-,-,+,+)", 2, 1);
        let mut fake = store.get(&k.combination()).unwrap().clone();
        let cert = check_all(
            SignPattern::parse("(1,-,-,-,-,+)").unwrap(),
            RootPair::new(0, 3),
        )
        .unwrap()
        .unwrap();
        fake.status = Status::NonRealizable { certificate: cert };
        let mut tampered = Store::in_memory();
        tampered.insert(fake);
        let report = audit_conjecture(&tampered);
        assert!(!report.passed());
        assert_eq!(report.violations[0].combination, k.combination());
    }

    #[test]
    fn report_renderings_agree() {
        let mut store = Store::in_memory();
        assert_eq!(export_report(&store, ReportFormat::Text), "empty store\n");
        classify_degree(4, &ClassifyConfig::default(), &mut store).unwrap();
        let json: Report =
            serde_json::from_str(&export_report(&store, ReportFormat::Json)).unwrap();
        let text = export_report(&store, ReportFormat::Text);
        let t = &json.degrees[0];
        assert!(text.contains(&format!(
            "degree 4: {} raw combinations / {} monic / {} orbits",
            t.raw_combinations, t.monic_combinations, t.orbits
        )));
        assert!(text.contains(&format!("non_realizable {}", t.non_realizable)));
    }
}
