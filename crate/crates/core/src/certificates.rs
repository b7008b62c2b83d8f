//! Sound non-realizability tests.
//!
//! Each test inspects a single combination in a fixed normal form. [`check_all`]
//! runs every test on every member of the orbit and reports which group
//! element carried the query into the form that fired.
//!
//! Throughout, "even power" and "odd power" refer to the degree of the
//! monomial a sign belongs to, not to its index in the pattern.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::PatternError;
use crate::exactpoly::{rational_serde, Rational};
use crate::patterns::{orbit_members, Combination, GroupElement, RootPair, Sign, SignPattern};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CertificateKind {
    EvenPattern,
    ThreeBlockKappa,
    OddDegreeJens2,
    OddCoefficientComparison,
}

impl CertificateKind {
    pub const ALL: [CertificateKind; 4] = [
        CertificateKind::EvenPattern,
        CertificateKind::ThreeBlockKappa,
        CertificateKind::OddDegreeJens2,
        CertificateKind::OddCoefficientComparison,
    ];

    pub fn name(self) -> &'static str {
        match self {
            CertificateKind::EvenPattern => "even_pattern",
            CertificateKind::ThreeBlockKappa => "three_block_kappa",
            CertificateKind::OddDegreeJens2 => "odd_degree_jens2",
            CertificateKind::OddCoefficientComparison => "odd_coefficient_comparison",
        }
    }

    fn test(self) -> fn(SignPattern, RootPair) -> Option<Certificate> {
        match self {
            CertificateKind::EvenPattern => cert_even_pattern,
            CertificateKind::ThreeBlockKappa => cert_three_block_kappa,
            CertificateKind::OddDegreeJens2 => cert_jens2,
            CertificateKind::OddCoefficientComparison => cert_odd_comparison,
        }
    }
}

impl fmt::Display for CertificateKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ComparisonDirection {
    /// `P(-x) > P(x)` for every `x > 0`.
    NegativeAxisDominates,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case")]
pub enum CertificateParams {
    /// `l` minus signs among the interior even-power entries.
    Even {
        l: u32,
    },
    Kappa {
        m: u32,
        n: u32,
        p: u32,
        #[serde(with = "rational_serde")]
        kappa: Rational,
    },
    Jens2,
    Comparison {
        direction: ComparisonDirection,
    },
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Certificate {
    pub kind: CertificateKind,
    pub parameters: CertificateParams,
    /// Maps the queried combination onto `normal_form`.
    pub transported_by: GroupElement,
    /// The orbit member on which the named test fired.
    pub normal_form: Combination,
}

impl Certificate {
    fn fired(
        kind: CertificateKind,
        parameters: CertificateParams,
        sp: SignPattern,
        pair: RootPair,
    ) -> Self {
        Certificate {
            kind,
            parameters,
            transported_by: GroupElement::Identity,
            normal_form: Combination::new(sp, pair),
        }
    }

    /// Re-derives the certificate for `(sp, pair)` from scratch and compares.
    pub fn recheck(&self, sp: SignPattern, pair: RootPair) -> bool {
        let target = Combination::new(sp, pair).act(self.transported_by);
        if target != self.normal_form {
            return false;
        }
        match (self.kind.test())(target.pattern, target.pair) {
            Some(again) => again.kind == self.kind && again.parameters == self.parameters,
            None => false,
        }
    }

    pub fn summary(&self) -> String {
        let params = match &self.parameters {
            CertificateParams::Even { l } => format!("l={l}"),
            CertificateParams::Kappa { m, n, p, kappa } => {
                format!("m={m} n={n} p={p} kappa={kappa}")
            }
            CertificateParams::Jens2 => String::new(),
            CertificateParams::Comparison { .. } => "P(-x) > P(x) on x > 0".to_string(),
        };
        let via = match self.transported_by {
            GroupElement::Identity => String::new(),
            g => format!(" via {g} to {}", self.normal_form),
        };
        if params.is_empty() {
            format!("{}{}", self.kind, via)
        } else {
            format!("{} ({}){}", self.kind, params, via)
        }
    }
}

fn powers(sp: SignPattern) -> impl Iterator<Item = (usize, Sign)> {
    (0..=sp.degree()).map(move |k| (k, sp.sign_of_power(k)))
}

/// Even degree, constant and all odd-power entries `+`, `l >= 1` minus signs
/// among the interior even powers: the pairs `(2,0), ..., (2l,0)` are excluded.
pub fn cert_even_pattern(sp: SignPattern, pair: RootPair) -> Option<Certificate> {
    let d = sp.degree();
    if !d.is_multiple_of(2) || sp.constant_sign().is_minus() || !sp.is_admissible(pair) {
        return None;
    }
    if powers(sp).any(|(k, s)| k % 2 == 1 && s.is_minus()) {
        return None;
    }
    let l = powers(sp)
        .filter(|&(k, s)| k % 2 == 0 && k > 0 && k < d && s.is_minus())
        .count() as u32;
    let fires =
        l >= 1 && pair.neg == 0 && pair.pos.is_multiple_of(2) && (1..=l).contains(&(pair.pos / 2));
    fires.then(|| {
        Certificate::fired(
            CertificateKind::EvenPattern,
            CertificateParams::Even { l },
            sp,
            pair,
        )
    })
}

/// Block lengths `(m, n, p)` if the pattern is `m` pluses, `n` minuses, `p` pluses.
pub fn three_blocks(sp: SignPattern) -> Option<(u32, u32, u32)> {
    let entries = sp.entries();
    let mut runs: Vec<(Sign, u32)> = Vec::new();
    for s in entries {
        match runs.last_mut() {
            Some((t, len)) if *t == s => *len += 1,
            _ => runs.push((s, 1)),
        }
    }
    match runs.as_slice() {
        [(Sign::Plus, m), (Sign::Minus, n), (Sign::Plus, p)] => Some((*m, *n, *p)),
        _ => None,
    }
}

/// `((d-m-1)/m) ((d-p-1)/p)`.
pub fn kappa(d: u32, m: u32, p: u32) -> Rational {
    let part = |k: u32| Rational::new((d as i64 - k as i64 - 1).into(), (k as i64).into());
    part(m) * part(p)
}

/// Pattern `m` pluses, `n` minuses, `p` pluses with pair `(0, d-2)` and `kappa >= 4`.
pub fn cert_three_block_kappa(sp: SignPattern, pair: RootPair) -> Option<Certificate> {
    let d = sp.degree() as u32;
    let (m, n, p) = three_blocks(sp)?;
    if d < 2 || pair != RootPair::new(0, d - 2) || !sp.is_admissible(pair) {
        return None;
    }
    let kappa = kappa(d, m, p);
    if kappa < Rational::from_integer(4.into()) {
        return None;
    }
    Some(Certificate::fired(
        CertificateKind::ThreeBlockKappa,
        CertificateParams::Kappa { m, n, p, kappa },
        sp,
        pair,
    ))
}

/// Odd degree, constant `+`, every interior even-power entry `-`, at most one
/// sign change among the odd-power entries: of the pairs `(0, s)` only `(0, 1)`
/// is realizable.
pub fn cert_jens2(sp: SignPattern, pair: RootPair) -> Option<Certificate> {
    let d = sp.degree();
    if d.is_multiple_of(2) || sp.constant_sign().is_minus() || !sp.is_admissible(pair) {
        return None;
    }
    if pair.pos != 0 || pair.neg < 3 {
        return None;
    }
    if powers(sp).any(|(k, s)| k % 2 == 0 && k > 0 && s == Sign::Plus) {
        return None;
    }
    let odd: Vec<Sign> = (1..=d)
        .rev()
        .step_by(2)
        .map(|k| sp.sign_of_power(k))
        .collect();
    let changes = odd.windows(2).filter(|w| w[0] != w[1]).count();
    (changes <= 1).then(|| {
        Certificate::fired(
            CertificateKind::OddDegreeJens2,
            CertificateParams::Jens2,
            sp,
            pair,
        )
    })
}

/// Leading and constant `+`, every odd-power entry `-`: then `P(-x) > P(x)` on
/// `x > 0`, so a negative root forces at least two positive roots.
pub fn cert_odd_comparison(sp: SignPattern, pair: RootPair) -> Option<Certificate> {
    if sp.constant_sign().is_minus() || !sp.is_admissible(pair) {
        return None;
    }
    if powers(sp).any(|(k, s)| k % 2 == 1 && s == Sign::Plus) {
        return None;
    }
    if pair.neg == 0 || pair.pos > 1 {
        return None;
    }
    Some(Certificate::fired(
        CertificateKind::OddCoefficientComparison,
        CertificateParams::Comparison {
            direction: ComparisonDirection::NegativeAxisDominates,
        },
        sp,
        pair,
    ))
}

/// First certificate found on any orbit member. Members are visited in the
/// order identity, flip, reverse, flip-reverse; tests in [`CertificateKind::ALL`] order.
pub fn check_all(sp: SignPattern, pair: RootPair) -> Result<Option<Certificate>, PatternError> {
    sp.check_admissible(pair)?;
    for (member, g) in orbit_members(sp, pair) {
        for kind in CertificateKind::ALL {
            if let Some(mut cert) = (kind.test())(member.pattern, member.pair) {
                cert.transported_by = g;
                return Ok(Some(cert));
            }
        }
    }
    Ok(None)
}
