//! Published reference tables and the comparison against a store.
//!
//! The tables are copied as printed, including their known mistakes. Each
//! mistake has an [`Erratum`] entry, but an erratum is only applied when the
//! store holds the evidence for it (a certificate for the corrected entry and,
//! for a misprint, a witness for the printed one). Without that evidence the
//! printed entry is compared as is and the mismatch is reported.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::constructors::Witness;
use crate::error::ClassifyError;
use crate::patterns::{canonical_orbit_rep, enumerate_orbits, Combination, RootPair, SignPattern};

use super::record::Status;
use super::store::Store;

/// Printed list of non-realizable combinations, one (pattern, pairs) group per item.
type Listing = &'static [(&'static str, &'static [(u32, u32)])];

const NON_REALIZABLE_4: Listing = &[];

const NON_REALIZABLE_5: Listing = &[("(1,-,-,-,+,+)", &[(0, 3)])];

const NON_REALIZABLE_6: Listing = &[
    ("(1,-,-,-,-,-,+)", &[(0, 2), (0, 4)]),
    ("(1,+,+,+,-,+,+)", &[(2, 0)]),
    ("(1,+,-,-,-,-,+)", &[(0, 4)]),
];

const NON_REALIZABLE_7: Listing = &[
    ("(1,+,-,-,-,-,-,+)", &[(0, 5)]),
    ("(1,+,-,-,-,-,+,+)", &[(0, 5)]),
    ("(1,+,-,+,-,-,-,-)", &[(3, 0)]),
    ("(1,+,+,-,-,-,-,+)", &[(0, 5)]),
    ("(1,-,-,-,-,-,-,+)", &[(0, 3), (0, 3)]),
];

const NON_REALIZABLE_8: Listing = &[
    ("(1,+,-,-,-,-,-,+,+)", &[(0, 6)]),
    ("(1,-,-,-,-,-,-,+,+)", &[(0, 6)]),
    ("(1,+,+,+,-,-,-,-,+)", &[(0, 6)]),
    ("(1,+,+,-,-,-,-,-,+)", &[(0, 6)]),
    ("(1,+,+,+,-,+,+,+,+)", &[(2, 0)]),
    ("(1,+,+,+,+,+,-,+,+)", &[(2, 0)]),
    ("(1,+,+,+,-,+,-,+,+)", &[(2, 0), (4, 0)]),
    ("(1,-,-,-,+,-,-,-,+)", &[(0, 2), (0, 4)]),
    ("(1,-,-,-,-,-,-,-,+)", &[(0, 2), (0, 4), (0, 6)]),
];

const UNKNOWN_8: Listing = &[
    ("(1,+,-,+,-,-,-,+,+)", &[(4, 0)]),
    ("(1,+,-,+,-,+,-,-,+)", &[(4, 0)]),
    ("(1,+,+,-,-,-,-,+,+)", &[(0, 6)]),
    ("(1,+,+,-,-,+,-,+,+)", &[(4, 0)]),
    ("(1,+,+,+,-,+,-,-,+)", &[(4, 0)]),
    ("(1,+,-,+,-,-,-,-,+)", &[(4, 0), (0, 4)]),
];

fn expand(listing: Listing) -> Vec<Combination> {
    listing
        .iter()
        .flat_map(|(pattern, pairs)| {
            let sp = SignPattern::parse(pattern).expect("reference pattern parses");
            pairs
                .iter()
                .map(move |&(pos, neg)| Combination::new(sp, RootPair::new(pos, neg)))
        })
        .collect()
}

fn canonical(c: Combination) -> Combination {
    canonical_orbit_rep(c.pattern, c.pair).combination()
}

/// Reference lists for one degree, entries as printed (duplicates kept).
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PaperTable {
    pub degree: usize,
    pub non_realizable: Vec<Combination>,
    pub unknown: Vec<Combination>,
}

impl PaperTable {
    /// Degrees 1 to 8. Below 4 the reference states that everything is realizable.
    pub fn for_degree(d: usize) -> Option<PaperTable> {
        let (nr, unknown): (Listing, Listing) = match d {
            1..=4 => (NON_REALIZABLE_4, &[]),
            5 => (NON_REALIZABLE_5, &[]),
            6 => (NON_REALIZABLE_6, &[]),
            7 => (NON_REALIZABLE_7, &[]),
            8 => (NON_REALIZABLE_8, UNKNOWN_8),
            _ => return None,
        };
        Some(PaperTable {
            degree: d,
            non_realizable: expand(nr),
            unknown: expand(unknown),
        })
    }

    pub fn non_realizable_orbits(&self) -> BTreeSet<Combination> {
        self.non_realizable.iter().copied().map(canonical).collect()
    }

    pub fn unknown_orbits(&self) -> BTreeSet<Combination> {
        self.unknown.iter().copied().map(canonical).collect()
    }

    /// Groups of printed entries that fall into one orbit.
    pub fn equivalent_entries(&self) -> Vec<Vec<Combination>> {
        let mut out = Vec::new();
        for list in [&self.non_realizable, &self.unknown] {
            let mut by_orbit: BTreeMap<Combination, Vec<Combination>> = BTreeMap::new();
            for &c in list {
                by_orbit.entry(canonical(c)).or_default().push(c);
            }
            out.extend(by_orbit.into_values().filter(|v| v.len() > 1));
        }
        out
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ErratumKind {
    /// A non-realizable combination missing from the printed list.
    Omission,
    /// A printed entry that is realizable; the intended entry differs.
    Misprint,
    /// A pair printed twice where a different pair was meant.
    Duplicate,
}

/// A known mistake in the reference tables.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Erratum {
    pub degree: usize,
    pub kind: ErratumKind,
    pub printed: Option<(&'static str, (u32, u32))>,
    pub corrected: (&'static str, (u32, u32)),
    pub note: &'static str,
}

impl Erratum {
    pub fn printed(&self) -> Option<Combination> {
        self.printed.map(|(p, (pos, neg))| {
            Combination::new(
                SignPattern::parse(p).expect("erratum pattern"),
                RootPair::new(pos, neg),
            )
        })
    }

    pub fn corrected(&self) -> Combination {
        let (p, (pos, neg)) = self.corrected;
        Combination::new(
            SignPattern::parse(p).expect("erratum pattern"),
            RootPair::new(pos, neg),
        )
    }
}

pub const ERRATA: &[Erratum] = &[
    Erratum {
        degree: 4,
        kind: ErratumKind::Omission,
        printed: None,
        corrected: ("(1,+,-,+,+)", (2, 0)),
        note: "single interior minus at an even power: a positive root pair forces a negative root",
    },
    Erratum {
        degree: 5,
        kind: ErratumKind::Misprint,
        printed: Some(("(1,-,-,-,+,+)", (0, 3))),
        corrected: ("(1,-,-,-,-,+)", (0, 3)),
        note:
            "the printed entry is realizable; its own example polynomial has three negative roots",
    },
    Erratum {
        degree: 7,
        kind: ErratumKind::Duplicate,
        printed: Some(("(1,-,-,-,-,-,-,+)", (0, 3))),
        corrected: ("(1,-,-,-,-,-,-,+)", (0, 5)),
        note: "pair listed twice; the second copy is (0,5)",
    },
];

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ErratumOutcome {
    pub kind: ErratumKind,
    pub printed: Option<Combination>,
    pub corrected: Combination,
    pub accepted: bool,
    pub note: String,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ResolvedBeyond {
    pub combination: Combination,
    pub witness: Witness,
}

/// Three-way comparison of a complete degree against the reference tables.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct PaperReport {
    pub degree: usize,
    /// Reference non-realizable orbits (after accepted errata) that we certify.
    pub matched: Vec<Combination>,
    /// Reference non-realizable orbits we do not certify.
    pub missing: Vec<Combination>,
    /// Orbits we certify that the reference does not list.
    pub extra: Vec<Combination>,
    pub errata: Vec<ErratumOutcome>,
    /// Printed entries that fall into a single orbit.
    pub equivalent_entries: Vec<Vec<Combination>>,
    /// Reference unknowns that we realize.
    pub resolved_beyond_paper: Vec<ResolvedBeyond>,
    /// Reference unknowns that we certify; no proof for these is known, so this is a failure.
    pub certified_unknowns: Vec<Combination>,
    /// Our unknowns that the reference also leaves open.
    pub expected_unknowns: Vec<Combination>,
    /// Our unknowns outside the reference list.
    pub unexpected_unknowns: Vec<Combination>,
}

impl PaperReport {
    pub fn passed(&self) -> bool {
        self.missing.is_empty()
            && self.extra.is_empty()
            && self.certified_unknowns.is_empty()
            && self.unexpected_unknowns.is_empty()
    }
}

/// Fails with [`ClassifyError::Incomplete`] unless every orbit of `d` is stored.
pub fn ensure_complete(store: &Store, d: usize) -> Result<(), ClassifyError> {
    let orbits = enumerate_orbits(d)?;
    let missing = orbits
        .iter()
        .filter(|k| !store.contains(&k.combination()))
        .count();
    if missing > 0 {
        return Err(ClassifyError::Incomplete {
            degree: d,
            missing,
            total: orbits.len(),
        });
    }
    Ok(())
}

pub fn verify_against_paper(store: &Store, d: usize) -> Result<PaperReport, ClassifyError> {
    let table = PaperTable::for_degree(d).ok_or(ClassifyError::NoReferenceTable(d))?;
    ensure_complete(store, d)?;

    let status = |c: Combination| store.get(&canonical(c)).map(|r| &r.status);
    let certified = |c: Combination| matches!(status(c), Some(Status::NonRealizable { .. }));
    let realized = |c: Combination| matches!(status(c), Some(Status::Realizable { .. }));

    let mut expected = table.non_realizable_orbits();
    let mut errata = Vec::new();
    for e in ERRATA.iter().filter(|e| e.degree == d) {
        let corrected = e.corrected();
        let accepted = match e.kind {
            ErratumKind::Omission | ErratumKind::Duplicate => certified(corrected),
            ErratumKind::Misprint => certified(corrected) && e.printed().is_some_and(realized),
        };
        if accepted {
            if e.kind == ErratumKind::Misprint {
                if let Some(p) = e.printed() {
                    expected.remove(&canonical(p));
                }
            }
            expected.insert(canonical(corrected));
        }
        errata.push(ErratumOutcome {
            kind: e.kind,
            printed: e.printed(),
            corrected,
            accepted,
            note: e.note.to_string(),
        });
    }

    let ours: BTreeSet<Combination> = store
        .records_of_degree(d)
        .filter(|r| matches!(r.status, Status::NonRealizable { .. }))
        .map(|r| r.key())
        .collect();
    let our_unknowns: BTreeSet<Combination> = store
        .records_of_degree(d)
        .filter(|r| r.status == Status::Unknown)
        .map(|r| r.key())
        .collect();
    let paper_unknowns = table.unknown_orbits();

    let mut resolved_beyond_paper = Vec::new();
    let mut certified_unknowns = Vec::new();
    for &u in &paper_unknowns {
        match status(u) {
            Some(Status::Realizable { witness }) => resolved_beyond_paper.push(ResolvedBeyond {
                combination: u,
                witness: (**witness).clone(),
            }),
            Some(Status::NonRealizable { .. }) => certified_unknowns.push(u),
            _ => {}
        }
    }

    Ok(PaperReport {
        degree: d,
        matched: expected.intersection(&ours).copied().collect(),
        missing: expected.difference(&ours).copied().collect(),
        extra: ours
            .difference(&expected)
            .filter(|c| !paper_unknowns.contains(c))
            .copied()
            .collect(),
        errata,
        equivalent_entries: table.equivalent_entries(),
        resolved_beyond_paper,
        certified_unknowns,
        expected_unknowns: our_unknowns
            .intersection(&paper_unknowns)
            .copied()
            .collect(),
        unexpected_unknowns: our_unknowns.difference(&paper_unknowns).copied().collect(),
    })
}

impl fmt::Display for PaperReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let verdict = if self.passed() { "MATCH" } else { "MISMATCH" };
        writeln!(f, "degree {}: {verdict}", self.degree)?;
        let list =
            |f: &mut fmt::Formatter<'_>, label: &str, items: &[Combination]| -> fmt::Result {
                for c in items {
                    writeln!(f, "  {label:<22} {c}")?;
                }
                Ok(())
            };
        list(f, "matched", &self.matched)?;
        list(f, "MISSING", &self.missing)?;
        list(f, "EXTRA", &self.extra)?;
        for e in &self.errata {
            let state = if e.accepted {
                "accepted"
            } else {
                "not supported by store"
            };
            match e.printed {
                Some(p) => writeln!(
                    f,
                    "  erratum ({state}) printed {p}, corrected {}: {}",
                    e.corrected, e.note
                )?,
                None => writeln!(f, "  erratum ({state}) omitted {}: {}", e.corrected, e.note)?,
            }
        }
        for group in &self.equivalent_entries {
            let shown: Vec<String> = group.iter().map(|c| c.to_string()).collect();
            writeln!(f, "  same orbit in table:  {}", shown.join("; "))?;
        }
        for r in &self.resolved_beyond_paper {
            writeln!(
                f,
                "  RESOLVED-BEYOND-PAPER  {} by {}",
                r.combination,
                r.witness.method()
            )?;
        }
        list(f, "CERTIFIED-UNKNOWN", &self.certified_unknowns)?;
        list(f, "unknown (expected)", &self.expected_unknowns)?;
        list(f, "UNKNOWN (unexpected)", &self.unexpected_unknowns)
    }
}
