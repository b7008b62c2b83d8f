//! Concatenation of realizing polynomials.
//!
//! Both gluings produce the pattern `w1` followed by the non-leading entries of
//! `w2`, multiplied by the sign of the last entry of `w1`, and the sum of the
//! two pairs. The product places the roots of `w2` near zero; the middle
//! gluing sends the roots of `w1` towards infinity instead.

use std::sync::OnceLock;

use num_traits::{One, Signed, Zero};

use crate::error::{ConstructError, PolyError};
use crate::exactpoly::{frac, pow2, Poly, Rational};
use crate::patterns::{RootPair, Sign, SignPattern};

use super::witness::{Method, Step, Witness};

/// Halvings tried before a gluing gives up.
pub const MAX_HALVINGS: u32 = 200;

/// Pattern of either concatenation of `p1` and `p2`.
pub fn juxtapose(p1: SignPattern, p2: SignPattern) -> Result<SignPattern, ConstructError> {
    let tau = p1.last_entry();
    let mut signs = p1.entries();
    signs.extend(p2.entries().into_iter().skip(1).map(|s| s * tau));
    Ok(SignPattern::from_signs(&signs)?)
}

/// `w1(x) * eps^d2 w2(x/eps)` for the first `eps` in `1, 1/2, 1/4, ...` whose
/// sign pattern is the juxtaposition; the root pair is re-verified.
pub fn concat_product(w1: &Witness, w2: &Witness) -> Result<Witness, ConstructError> {
    let pattern = juxtapose(w1.pattern(), w2.pattern())?;
    let pair = w1.pair() + w2.pair();
    let mut trace = w1.trace().to_vec();
    trace.extend_from_slice(w2.trace());
    for k in 0..=MAX_HALVINGS {
        let eps = pow2(-(k as i32));
        let candidate = w1.polynomial() * &w2.polynomial().scale_tail(&eps)?;
        if crate::exactpoly::sign_pattern_of(&candidate).ok() != Some(pattern) {
            continue;
        }
        let mut t = trace.clone();
        t.push(Step::ScaleTailProduct { eps });
        return Witness::new(candidate, pattern, pair, Method::ConcatProduct, t);
    }
    Err(ConstructError::ScheduleExhausted(MAX_HALVINGS))
}

/// Middle gluing of `high` (its constant term becomes the junction) and
/// `low` (its leading term becomes the junction), returned monic:
///
/// `(1/b_n) sum_{k<n} b_k x^k + x^n + (x^n / a_0) sum_{k>=1} a_k (eps x)^k`
///
/// where `a` are the coefficients of `high` and `b` those of `low`, `n = deg low`.
pub fn middle_glue_poly(high: &Poly, low: &Poly, eps: &Rational) -> Result<Poly, PolyError> {
    if !eps.is_positive() {
        return Err(PolyError::NonPositiveParameter);
    }
    if high.is_zero() || low.is_zero() {
        return Err(PolyError::ZeroPolynomial);
    }
    let a0 = high.constant_term();
    if a0.is_zero() {
        return Err(PolyError::ZeroCoefficient(0));
    }
    let n = low.deg();
    let bn = low.leading().cloned().expect("nonzero");
    let mut coeffs: Vec<Rational> = low.coeffs()[..n].iter().map(|b| b / &bn).collect();
    coeffs.push(Rational::one());
    let mut power = Rational::one();
    for a in &high.coeffs()[1..] {
        power = &power * eps;
        coeffs.push(a * &power / &a0);
    }
    Ok(Poly::new(coeffs).monic())
}

/// Middle gluing with the halving schedule; both the pattern and the summed
/// pair are verified at every step.
pub fn concat_middle(w1: &Witness, w2: &Witness) -> Result<Witness, ConstructError> {
    let pattern = juxtapose(w1.pattern(), w2.pattern())?;
    let pair = w1.pair() + w2.pair();
    let mut trace = w1.trace().to_vec();
    trace.extend_from_slice(w2.trace());
    for k in 0..=MAX_HALVINGS {
        let eps = pow2(-(k as i32));
        let candidate = middle_glue_poly(w1.polynomial(), w2.polynomial(), &eps)?;
        if crate::exactpoly::sign_pattern_of(&candidate).ok() != Some(pattern) {
            continue;
        }
        let mut t = trace.clone();
        t.push(Step::MiddleGlue { eps });
        if let Ok(w) = Witness::new(candidate, pattern, pair, Method::ConcatMiddle, t) {
            return Ok(w);
        }
    }
    Err(ConstructError::ScheduleExhausted(MAX_HALVINGS))
}

/// Small factors appended by the suffix search.
#[derive(Clone, Debug)]
pub struct CatalogFactor {
    pub name: &'static str,
    pub witness: Witness,
}

impl CatalogFactor {
    /// Entries after the leading one, for a prefix ending in `+`.
    pub fn tail(&self) -> Vec<Sign> {
        self.witness
            .pattern()
            .entries()
            .into_iter()
            .skip(1)
            .collect()
    }

    pub fn degree(&self) -> usize {
        self.witness.degree()
    }

    pub fn pair(&self) -> RootPair {
        self.witness.pair()
    }

    pub fn complex_pairs(&self) -> u32 {
        self.witness.combination().complex_pairs()
    }
}

/// Cubic end factors use this coefficient for their two middle terms.
pub fn cubic_epsilon() -> Rational {
    frac(1, 8)
}

fn catalog_entry(name: &'static str, coeffs: Vec<Rational>, pair: RootPair) -> CatalogFactor {
    let p = Poly::new(coeffs);
    let pattern = crate::exactpoly::sign_pattern_of(&p).expect("catalog factors have full support");
    let witness =
        Witness::new(p, pattern, pair, Method::Catalog, vec![]).expect("catalog factor verifies");
    CatalogFactor { name, witness }
}

/// `x-1`, `x+1`, `x^2+2x+2`, `x^2-2x+2`, `x^3+e x^2-e x-1`, `x^3-e x^2+e x-1`.
pub fn factor_catalog() -> &'static [CatalogFactor] {
    static CATALOG: OnceLock<Vec<CatalogFactor>> = OnceLock::new();
    CATALOG.get_or_init(|| {
        let i = |n: i64| Rational::from_integer(n.into());
        let e = cubic_epsilon();
        vec![
            catalog_entry("x-1", vec![i(-1), i(1)], RootPair::new(1, 0)),
            catalog_entry("x+1", vec![i(1), i(1)], RootPair::new(0, 1)),
            catalog_entry("x^2+2x+2", vec![i(2), i(2), i(1)], RootPair::new(0, 0)),
            catalog_entry("x^2-2x+2", vec![i(2), i(-2), i(1)], RootPair::new(0, 0)),
            catalog_entry(
                "x^3+ex^2-ex-1",
                vec![i(-1), -e.clone(), e.clone(), i(1)],
                RootPair::new(1, 0),
            ),
            catalog_entry(
                "x^3-ex^2+ex-1",
                vec![i(-1), e.clone(), -e, i(1)],
                RootPair::new(1, 0),
            ),
        ]
    })
}
