//! Multiplicity-aware real root counting on the two half-axes.
//!
//! Roots are counted per squarefree factor with an exact Sturm chain, then
//! weighted by the factor's multiplicity. Chains are kept over Z with
//! positive content removal, which leaves every sign evaluation unchanged.

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use super::poly::{IntPoly, Poly};
use super::rational::Rational;
use crate::error::PolyError;
use crate::patterns::{Sign, SignPattern};

/// Numbers of positive roots, negative roots and complex-conjugate pairs,
/// all counted with multiplicity.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct RootCount {
    pub pos: u32,
    pub neg: u32,
    pub complex_pairs: u32,
}

impl RootCount {
    pub fn new(pos: u32, neg: u32, complex_pairs: u32) -> Self {
        RootCount {
            pos,
            neg,
            complex_pairs,
        }
    }

    pub fn degree(&self) -> u32 {
        self.pos + self.neg + 2 * self.complex_pairs
    }
}

impl std::ops::Add for RootCount {
    type Output = RootCount;
    fn add(self, rhs: RootCount) -> RootCount {
        RootCount::new(
            self.pos + rhs.pos,
            self.neg + rhs.neg,
            self.complex_pairs + rhs.complex_pairs,
        )
    }
}

/// Endpoint of an open interval on the extended real line.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Bound {
    NegInfinity,
    Finite(Rational),
    PosInfinity,
}

impl Bound {
    fn rank(&self) -> (i8, Option<&Rational>) {
        match self {
            Bound::NegInfinity => (-1, None),
            Bound::Finite(r) => (0, Some(r)),
            Bound::PosInfinity => (1, None),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Interval {
    pub lo: Bound,
    pub hi: Bound,
}

impl Interval {
    pub fn new(lo: Bound, hi: Bound) -> Self {
        Interval { lo, hi }
    }

    pub fn positive_axis() -> Self {
        Interval::new(Bound::Finite(Rational::zero()), Bound::PosInfinity)
    }

    pub fn negative_axis() -> Self {
        Interval::new(Bound::NegInfinity, Bound::Finite(Rational::zero()))
    }

    pub fn real_line() -> Self {
        Interval::new(Bound::NegInfinity, Bound::PosInfinity)
    }

    fn is_nonempty(&self) -> bool {
        let (a, ra) = self.lo.rank();
        let (b, rb) = self.hi.rank();
        match (ra, rb) {
            (Some(x), Some(y)) => x < y,
            _ => a < b,
        }
    }
}

/// Yun's algorithm: returns monic squarefree, pairwise coprime factors with
/// their multiplicities, ascending by multiplicity. Their product times the
/// leading coefficient of `p` equals `p`.
pub fn squarefree_decomposition(p: &Poly) -> Result<Vec<(Poly, u32)>, PolyError> {
    if p.is_zero() {
        return Err(PolyError::ZeroPolynomial);
    }
    let f = p.monic();
    if f.deg() == 0 {
        return Ok(Vec::new());
    }
    let df = f.derivative();
    let a0 = f.gcd(&df);
    let mut b = f.div_rem(&a0).0;
    let c = df.div_rem(&a0).0;
    let mut d = &c - &b.derivative();
    let mut out = Vec::new();
    let mut multiplicity = 1u32;
    while b.deg() > 0 {
        let a = b.gcd(&d);
        let next_b = b.div_rem(&a).0;
        let next_c = d.div_rem(&a).0;
        if a.deg() > 0 {
            out.push((a, multiplicity));
        }
        d = &next_c - &next_b.derivative();
        b = next_b;
        multiplicity += 1;
    }
    Ok(out)
}

/// Sturm chain of a squarefree polynomial, stored as primitive integer polynomials.
#[derive(Clone, Debug)]
pub struct SturmChain {
    chain: Vec<IntPoly>,
}

impl SturmChain {
    pub fn new(p: &Poly) -> Result<Self, PolyError> {
        if p.is_zero() {
            return Err(PolyError::ZeroPolynomial);
        }
        let mut chain = vec![IntPoly::from_poly(p)];
        let d = p.derivative();
        if !d.is_zero() {
            chain.push(IntPoly::from_poly(&d));
        }
        while chain.len() >= 2 {
            let n = chain.len();
            let (r, multiplier_negative) = chain[n - 2].pseudo_rem(&chain[n - 1]);
            if r.is_zero() {
                break;
            }
            // -rem up to a positive factor.
            let next = if multiplier_negative {
                r
            } else {
                IntPoly(r.0.into_iter().map(|c| -c).collect())
            };
            chain.push(next.primitive());
        }
        Ok(SturmChain { chain })
    }

    fn sign_at(poly: &IntPoly, at: &Bound) -> i8 {
        let lead_sign = |p: &IntPoly| {
            if p.0.last().is_some_and(|c| c.is_negative()) {
                -1
            } else {
                1
            }
        };
        match at {
            Bound::PosInfinity => lead_sign(poly),
            Bound::NegInfinity => {
                let s = lead_sign(poly);
                if poly.degree() % 2 == 1 {
                    -s
                } else {
                    s
                }
            }
            Bound::Finite(x) => sign_of_int(&eval_scaled(poly, x)),
        }
    }

    pub fn variations_at(&self, at: &Bound) -> usize {
        let mut last = 0i8;
        let mut count = 0;
        for p in &self.chain {
            let s = Self::sign_at(p, at);
            if s != 0 {
                if last != 0 && s != last {
                    count += 1;
                }
                last = s;
            }
        }
        count
    }

    /// Distinct real roots in the open interval.
    pub fn count(&self, interval: &Interval) -> Result<usize, PolyError> {
        if !interval.is_nonempty() {
            return Err(PolyError::EmptyInterval);
        }
        for end in [&interval.lo, &interval.hi] {
            if let Bound::Finite(x) = end {
                if eval_scaled(&self.chain[0], x).is_zero() {
                    return Err(PolyError::EndpointIsRoot(x.to_string()));
                }
            }
        }
        let lo = self.variations_at(&interval.lo);
        let hi = self.variations_at(&interval.hi);
        Ok(lo.saturating_sub(hi))
    }
}

fn sign_of_int(v: &BigInt) -> i8 {
    if v.is_zero() {
        0
    } else if v.is_negative() {
        -1
    } else {
        1
    }
}

/// `den^deg * p(num/den)`, which has the sign of `p(x)` since `den > 0`.
fn eval_scaled(p: &IntPoly, x: &Rational) -> BigInt {
    let (n, d) = (x.numer(), x.denom());
    let mut acc = BigInt::zero();
    let mut dpow = BigInt::one();
    let mut npow = BigInt::one();
    let deg = p.degree();
    let mut dpows = Vec::with_capacity(deg + 1);
    for _ in 0..=deg {
        dpows.push(dpow.clone());
        dpow *= d;
    }
    for (k, c) in p.0.iter().enumerate() {
        if !c.is_zero() {
            acc += c * &npow * &dpows[deg - k];
        }
        npow *= n;
    }
    acc
}

/// Number of distinct real roots of a squarefree polynomial in an open interval.
pub fn sturm_count(p: &Poly, interval: &Interval) -> Result<usize, PolyError> {
    SturmChain::new(p)?.count(interval)
}

/// Rejects polynomials with a vanishing coefficient.
pub fn ensure_full_support(p: &Poly) -> Result<(), PolyError> {
    if p.is_zero() {
        return Err(PolyError::ZeroPolynomial);
    }
    match p.coeffs().iter().position(Zero::is_zero) {
        Some(k) => Err(PolyError::ZeroCoefficient(k)),
        None => Ok(()),
    }
}

/// Positive and negative roots with multiplicity, plus complex-conjugate
/// pairs, for a polynomial with all coefficients non-vanishing.
pub fn count_roots(p: &Poly) -> Result<RootCount, PolyError> {
    ensure_full_support(p)?;
    count_half_axis_roots(p)
}

/// Same count for any polynomial that does not vanish at 0; interior
/// coefficients may be zero.
pub fn count_half_axis_roots(p: &Poly) -> Result<RootCount, PolyError> {
    if p.is_zero() {
        return Err(PolyError::ZeroPolynomial);
    }
    if p.constant_term().is_zero() {
        return Err(PolyError::EndpointIsRoot("0".into()));
    }
    let mut pos = 0u32;
    let mut neg = 0u32;
    for (factor, mult) in squarefree_decomposition(p)? {
        let chain = SturmChain::new(&factor)?;
        let at_zero = chain.variations_at(&Bound::Finite(Rational::zero()));
        let at_neg = chain.variations_at(&Bound::NegInfinity);
        let at_pos = chain.variations_at(&Bound::PosInfinity);
        pos += mult * at_zero.saturating_sub(at_pos) as u32;
        neg += mult * at_neg.saturating_sub(at_zero) as u32;
    }
    let degree = p.deg() as u32;
    Ok(RootCount::new(pos, neg, (degree - pos - neg) / 2))
}

/// Coefficient signs from the leading term down to the constant term.
pub fn sign_pattern_of(p: &Poly) -> Result<SignPattern, PolyError> {
    ensure_full_support(p)?;
    if p.leading().is_some_and(|c| c.is_negative()) {
        return Err(PolyError::NegativeLeading);
    }
    let signs: Vec<Sign> = p
        .coeffs()
        .iter()
        .rev()
        .map(|c| {
            if c.is_negative() {
                Sign::Minus
            } else {
                Sign::Plus
            }
        })
        .collect();
    Ok(SignPattern::from_signs(&signs).expect("leading sign checked above"))
}

/// Sign pattern after normalizing the leading coefficient to be positive.
pub fn normalized_sign_pattern(p: &Poly) -> Result<SignPattern, PolyError> {
    if p.leading().is_some_and(|c| c.is_negative()) {
        sign_pattern_of(&-p)
    } else {
        sign_pattern_of(p)
    }
}
