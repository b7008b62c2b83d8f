//! Sign patterns, Descartes pairs, admissible pairs and the Z2 x Z2 action.
//!
//! A pattern is stored as a bit mask over its entries, entry 0 being the
//! leading sign (always `+`) and entry `d` the sign of the constant term.
//! The action is generated by
//!
//! * `flip`: `P(x) -> (-1)^d P(-x)`, multiplying entry `j` by `(-1)^j` and
//!   swapping the pair to `(neg, pos)`;
//! * `reverse`: `P(x) -> x^d P(1/x)` renormalized to a positive leading
//!   coefficient, reading the entries backwards and keeping the pair.
//!
//! Orbit representatives are the minimum under "pattern lexicographic with
//! `+ < -`, then pair lexicographic".

use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::PatternError;
use crate::exactpoly::{Poly, Rational};

/// Largest degree a [`SignPattern`] can hold.
pub const MAX_PATTERN_DEGREE: usize = 31;

/// Largest degree accepted by [`enumerate_orbits`].
pub const MAX_ENUMERATION_DEGREE: usize = 16;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Sign {
    Plus,
    Minus,
}

impl Sign {
    pub fn from_is_minus(minus: bool) -> Sign {
        if minus {
            Sign::Minus
        } else {
            Sign::Plus
        }
    }

    pub fn is_minus(self) -> bool {
        self == Sign::Minus
    }

    pub fn as_char(self) -> char {
        match self {
            Sign::Plus => '+',
            Sign::Minus => '-',
        }
    }
}

impl std::ops::Neg for Sign {
    type Output = Sign;
    fn neg(self) -> Sign {
        Sign::from_is_minus(!self.is_minus())
    }
}

impl std::ops::Mul for Sign {
    type Output = Sign;
    fn mul(self, rhs: Sign) -> Sign {
        Sign::from_is_minus(self.is_minus() != rhs.is_minus())
    }
}

/// Monic-normalized sign pattern `(1, s_1, ..., s_d)`.
#[derive(Clone, Copy, PartialEq, Eq, Hash)]
pub struct SignPattern {
    degree: u8,
    /// Bit `i` set means entry `i` is `-`. Bit 0 is always clear.
    minus: u32,
}

impl SignPattern {
    pub fn from_signs(signs: &[Sign]) -> Result<Self, PatternError> {
        let text: String = signs.iter().map(|s| s.as_char()).collect();
        if signs.len() < 2 {
            return Err(PatternError::Parse(
                text,
                "a pattern needs at least two entries",
            ));
        }
        if signs.len() > MAX_PATTERN_DEGREE + 1 {
            return Err(PatternError::Parse(text, "pattern is too long"));
        }
        if signs[0].is_minus() {
            return Err(PatternError::Parse(text, "leading entry must be '+'"));
        }
        let minus = signs
            .iter()
            .enumerate()
            .filter(|(_, s)| s.is_minus())
            .fold(0u32, |m, (i, _)| m | (1 << i));
        Ok(SignPattern {
            degree: (signs.len() - 1) as u8,
            minus,
        })
    }

    /// Builds a pattern from a mask over entries `1..=d` (bit `i` is entry `i`).
    pub fn from_minus_mask(degree: usize, mask: u32) -> Self {
        assert!((1..=MAX_PATTERN_DEGREE).contains(&degree));
        assert_eq!(mask & 1, 0, "leading entry must be '+'");
        assert!(degree == 31 || mask >> (degree + 1) == 0);
        SignPattern {
            degree: degree as u8,
            minus: mask,
        }
    }

    /// Normalizes an arbitrary sign sequence (possibly starting with `-`).
    pub fn normalized(signs: &[Sign]) -> Result<Self, PatternError> {
        match signs.first() {
            Some(Sign::Minus) => {
                let flipped: Vec<Sign> = signs.iter().map(|&s| -s).collect();
                SignPattern::from_signs(&flipped)
            }
            _ => SignPattern::from_signs(signs),
        }
    }

    pub fn degree(&self) -> usize {
        self.degree as usize
    }

    pub fn len(&self) -> usize {
        self.degree() + 1
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn minus_mask(&self) -> u32 {
        self.minus
    }

    /// Entry `i`, counted from the leading term.
    pub fn entry(&self, i: usize) -> Sign {
        assert!(i <= self.degree());
        Sign::from_is_minus(self.minus >> i & 1 == 1)
    }

    pub fn entries(&self) -> Vec<Sign> {
        (0..self.len()).map(|i| self.entry(i)).collect()
    }

    /// Sign of the coefficient of `x^k`.
    pub fn sign_of_power(&self, k: usize) -> Sign {
        self.entry(self.degree() - k)
    }

    pub fn constant_sign(&self) -> Sign {
        self.entry(self.degree())
    }

    pub fn last_entry(&self) -> Sign {
        self.constant_sign()
    }

    /// `(p, n)`: sign changes and sign preservations between adjacent entries.
    pub fn descartes_pair(&self) -> RootPair {
        let changes = (self.minus ^ (self.minus >> 1)) & ((1u32 << self.degree) - 1);
        let p = changes.count_ones();
        RootPair::new(p, self.degree as u32 - p)
    }

    /// All pairs satisfying `pos <= p, pos = p mod 2, neg <= n, neg = n mod 2`,
    /// ascending.
    pub fn admissible_pairs(&self) -> Vec<RootPair> {
        let RootPair { pos: p, neg: n } = self.descartes_pair();
        let mut out = Vec::with_capacity(((p / 2 + 1) * (n / 2 + 1)) as usize);
        for pos in (p % 2..=p).step_by(2) {
            for neg in (n % 2..=n).step_by(2) {
                out.push(RootPair::new(pos, neg));
            }
        }
        out
    }

    pub fn check_admissible(&self, pair: RootPair) -> Result<(), PatternError> {
        let RootPair { pos: p, neg: n } = self.descartes_pair();
        let reason = if pair.pos > p {
            Some(format!("pos {} exceeds the {} sign changes", pair.pos, p))
        } else if pair.pos % 2 != p % 2 {
            Some(format!(
                "pos {} has the wrong parity (sign changes: {})",
                pair.pos, p
            ))
        } else if pair.neg > n {
            Some(format!(
                "neg {} exceeds the {} sign preservations",
                pair.neg, n
            ))
        } else if pair.neg % 2 != n % 2 {
            Some(format!(
                "neg {} has the wrong parity (sign preservations: {})",
                pair.neg, n
            ))
        } else {
            None
        };
        match reason {
            None => Ok(()),
            Some(reason) => Err(PatternError::Inadmissible {
                pattern: self.to_string(),
                pos: pair.pos,
                neg: pair.neg,
                reason,
            }),
        }
    }

    pub fn is_admissible(&self, pair: RootPair) -> bool {
        self.check_admissible(pair).is_ok()
    }

    /// Image under `P(x) -> (-1)^d P(-x)`.
    pub fn flipped(&self) -> SignPattern {
        // Entries at odd indices change sign.
        let odd: u32 = (0..self.len())
            .filter(|i| i % 2 == 1)
            .fold(0, |m, i| m | 1 << i);
        SignPattern {
            degree: self.degree,
            minus: self.minus ^ odd,
        }
    }

    /// Image under `P(x) -> x^d P(1/x)`, renormalized.
    pub fn reversed(&self) -> SignPattern {
        let mut signs = self.entries();
        signs.reverse();
        SignPattern::normalized(&signs).expect("same length")
    }

    /// Entries `from..=to` as a monic pattern, negated if entry `from` is `-`.
    pub fn window(&self, from: usize, to: usize) -> SignPattern {
        SignPattern::normalized(&self.entries()[from..=to]).expect("window of length >= 2")
    }

    pub fn parse(text: &str) -> Result<Self, PatternError> {
        let mut body = text.trim();
        if let Some(stripped) = body.strip_prefix('(').and_then(|b| b.strip_suffix(')')) {
            body = stripped;
        }
        let tokens: Vec<&str> = if body.contains(',') {
            body.split(',').map(str::trim).collect()
        } else {
            body.char_indices()
                .map(|(i, c)| &body[i..i + c.len_utf8()])
                .filter(|t| !t.trim().is_empty())
                .collect()
        };
        let mut signs = Vec::with_capacity(tokens.len());
        for (i, tok) in tokens.iter().enumerate() {
            let sign = match *tok {
                "+" => Sign::Plus,
                "-" | "\u{2212}" => Sign::Minus,
                "1" if i == 0 => Sign::Plus,
                _ => {
                    return Err(PatternError::Parse(
                        text.to_string(),
                        "entries must be '+' or '-'",
                    ))
                }
            };
            signs.push(sign);
        }
        SignPattern::from_signs(&signs).map_err(|e| match e {
            PatternError::Parse(_, why) => PatternError::Parse(text.to_string(), why),
            other => other,
        })
    }

    /// Tuple notation `(1,-,-,-,+,+)`.
    pub fn tuple_notation(&self) -> String {
        let body: Vec<String> = (1..self.len())
            .map(|i| self.entry(i).as_char().to_string())
            .collect();
        format!("(1,{})", body.join(","))
    }

    /// All `2^d` monic patterns of degree `d`, in increasing order.
    pub fn all_of_degree(d: usize) -> impl Iterator<Item = SignPattern> {
        assert!((1..=MAX_ENUMERATION_DEGREE).contains(&d));
        let mut v: Vec<SignPattern> = (0u32..1 << d)
            .map(|m| SignPattern::from_minus_mask(d, m << 1))
            .collect();
        v.sort();
        v.into_iter()
    }
}

impl Ord for SignPattern {
    fn cmp(&self, other: &Self) -> Ordering {
        self.degree.cmp(&other.degree).then_with(|| {
            let diff = self.minus ^ other.minus;
            if diff == 0 {
                Ordering::Equal
            } else {
                // First differing entry decides; '+' (clear bit) sorts first.
                let i = diff.trailing_zeros();
                if self.minus >> i & 1 == 0 {
                    Ordering::Less
                } else {
                    Ordering::Greater
                }
            }
        })
    }
}

impl PartialOrd for SignPattern {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for SignPattern {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.len() {
            write!(f, "{}", self.entry(i).as_char())?;
        }
        Ok(())
    }
}

impl fmt::Debug for SignPattern {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "SignPattern({self})")
    }
}

impl FromStr for SignPattern {
    type Err = PatternError;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        SignPattern::parse(s)
    }
}

impl Serialize for SignPattern {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for SignPattern {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let text = String::deserialize(d)?;
        SignPattern::parse(&text).map_err(serde::de::Error::custom)
    }
}

/// Numbers of positive and negative roots, counted with multiplicity.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct RootPair {
    pub pos: u32,
    pub neg: u32,
}

impl RootPair {
    pub const fn new(pos: u32, neg: u32) -> Self {
        RootPair { pos, neg }
    }

    pub fn swapped(self) -> RootPair {
        RootPair::new(self.neg, self.pos)
    }

    pub fn min(self) -> u32 {
        self.pos.min(self.neg)
    }

    pub fn real_roots(self) -> u32 {
        self.pos + self.neg
    }

    /// Componentwise difference, `None` if it would go negative.
    pub fn checked_sub(self, other: RootPair) -> Option<RootPair> {
        Some(RootPair::new(
            self.pos.checked_sub(other.pos)?,
            self.neg.checked_sub(other.neg)?,
        ))
    }
}

impl std::ops::Add for RootPair {
    type Output = RootPair;
    fn add(self, rhs: RootPair) -> RootPair {
        RootPair::new(self.pos + rhs.pos, self.neg + rhs.neg)
    }
}

impl fmt::Display for RootPair {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{})", self.pos, self.neg)
    }
}

/// A sign pattern together with a candidate root pair.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Combination {
    pub pattern: SignPattern,
    pub pair: RootPair,
}

impl Combination {
    pub fn new(pattern: SignPattern, pair: RootPair) -> Self {
        Combination { pattern, pair }
    }

    pub fn degree(&self) -> usize {
        self.pattern.degree()
    }

    pub fn complex_pairs(&self) -> u32 {
        (self.pattern.degree() as u32 - self.pair.real_roots()) / 2
    }

    pub fn act(&self, g: GroupElement) -> Combination {
        let (pattern, pair) = act(self.pattern, self.pair, g);
        Combination::new(pattern, pair)
    }
}

impl fmt::Display for Combination {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} with {}", self.pattern.tuple_notation(), self.pair)
    }
}

/// Element of the Klein four-group acting on patterns, pairs and polynomials.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum GroupElement {
    Identity,
    Flip,
    Reverse,
    FlipReverse,
}

impl GroupElement {
    pub const ALL: [GroupElement; 4] = [
        GroupElement::Identity,
        GroupElement::Flip,
        GroupElement::Reverse,
        GroupElement::FlipReverse,
    ];

    fn bits(self) -> (bool, bool) {
        match self {
            GroupElement::Identity => (false, false),
            GroupElement::Flip => (true, false),
            GroupElement::Reverse => (false, true),
            GroupElement::FlipReverse => (true, true),
        }
    }

    fn from_bits(flip: bool, reverse: bool) -> GroupElement {
        match (flip, reverse) {
            (false, false) => GroupElement::Identity,
            (true, false) => GroupElement::Flip,
            (false, true) => GroupElement::Reverse,
            (true, true) => GroupElement::FlipReverse,
        }
    }

    /// The group is abelian and every element is its own inverse.
    pub fn compose(self, other: GroupElement) -> GroupElement {
        let (f1, r1) = self.bits();
        let (f2, r2) = other.bits();
        GroupElement::from_bits(f1 != f2, r1 != r2)
    }

    pub fn inverse(self) -> GroupElement {
        self
    }

    pub fn name(self) -> &'static str {
        match self {
            GroupElement::Identity => "identity",
            GroupElement::Flip => "flip",
            GroupElement::Reverse => "reverse",
            GroupElement::FlipReverse => "flip_reverse",
        }
    }
}

impl fmt::Display for GroupElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

pub fn descartes_pair(sp: SignPattern) -> RootPair {
    sp.descartes_pair()
}

pub fn admissible_pairs(sp: SignPattern) -> Vec<RootPair> {
    sp.admissible_pairs()
}

pub fn act(sp: SignPattern, pair: RootPair, g: GroupElement) -> (SignPattern, RootPair) {
    let (flip, reverse) = g.bits();
    let mut out = (sp, pair);
    if reverse {
        out = (out.0.reversed(), out.1);
    }
    if flip {
        out = (out.0.flipped(), out.1.swapped());
    }
    out
}

/// Polynomial counterpart of [`act`]. `flip` preserves the leading
/// coefficient; `reverse` divides by the old constant term so the image is monic.
pub fn act_on_poly(p: &Poly, g: GroupElement) -> Poly {
    let (flip, reverse) = g.bits();
    let mut out = p.clone();
    if reverse {
        let r = out.reversed();
        let lc: Rational = r.leading().cloned().expect("nonzero polynomial");
        out = r.scale(&lc.recip());
    }
    if flip {
        let q = out.compose_neg();
        out = if out.deg() % 2 == 1 { -&q } else { q };
    }
    out
}

/// Canonical representative of an orbit together with the group element that
/// maps the queried combination onto it.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct OrbitKey {
    pub pattern: SignPattern,
    pub pair: RootPair,
    pub group: GroupElement,
}

impl OrbitKey {
    pub fn combination(&self) -> Combination {
        Combination::new(self.pattern, self.pair)
    }
}

pub fn canonical_orbit_rep(sp: SignPattern, pair: RootPair) -> OrbitKey {
    let mut best = OrbitKey {
        pattern: sp,
        pair,
        group: GroupElement::Identity,
    };
    for g in GroupElement::ALL {
        let (p, q) = act(sp, pair, g);
        if (p, q) < (best.pattern, best.pair) {
            best = OrbitKey {
                pattern: p,
                pair: q,
                group: g,
            };
        }
    }
    best
}

/// Distinct members of the orbit, each with the element mapping the input onto it.
pub fn orbit_members(sp: SignPattern, pair: RootPair) -> Vec<(Combination, GroupElement)> {
    let mut out: Vec<(Combination, GroupElement)> = Vec::with_capacity(4);
    for g in GroupElement::ALL {
        let c = Combination::new(sp, pair).act(g);
        if !out.iter().any(|(m, _)| *m == c) {
            out.push((c, g));
        }
    }
    out
}

fn binomial(n: u64, k: u64) -> u128 {
    (0..k).fold(1u128, |acc, i| acc * (n - i) as u128 / (i + 1) as u128)
}

/// Monic combinations of degree `d`: `sum_p C(d,p) (floor(p/2)+1)(floor((d-p)/2)+1)`.
pub fn count_monic_combinations(d: usize) -> u128 {
    let d = d as u64;
    (0..=d)
        .map(|p| binomial(d, p) * (p / 2 + 1) as u128 * ((d - p) / 2 + 1) as u128)
        .sum()
}

/// Pattern/pair combinations counted over both leading signs, matching the
/// totals quoted for degrees 7 and 8 (1472 and 3648).
pub fn count_combinations(d: usize) -> u128 {
    2 * count_monic_combinations(d)
}

/// Canonical representatives of all orbits of degree `d`, ascending.
pub fn enumerate_orbits(d: usize) -> Result<Vec<OrbitKey>, PatternError> {
    if !(1..=MAX_ENUMERATION_DEGREE).contains(&d) {
        return Err(PatternError::DegreeOutOfRange(d, 1, MAX_ENUMERATION_DEGREE));
    }
    let mut out = Vec::new();
    for sp in SignPattern::all_of_degree(d) {
        for pair in sp.admissible_pairs() {
            let key = canonical_orbit_rep(sp, pair);
            if key.pattern == sp && key.pair == pair {
                out.push(key);
            }
        }
    }
    out.sort();
    Ok(out)
}

/// Orbit counts for a degree: raw (both leading signs), monic and orbits.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CombinationCounts {
    pub degree: usize,
    pub raw: u128,
    pub monic: u128,
    pub orbits: usize,
}

pub fn combination_counts(d: usize) -> Result<CombinationCounts, PatternError> {
    let orbits = enumerate_orbits(d)?.len();
    Ok(CombinationCounts {
        degree: d,
        raw: count_combinations(d),
        monic: count_monic_combinations(d),
        orbits,
    })
}
