use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::ConstructError;
use crate::exactpoly::{
    count_roots, rational_serde, rational_vec_serde, sign_pattern_of, Poly, Rational, RootCount,
};
use crate::patterns::{act_on_poly, Combination, GroupElement, RootPair, SignPattern};

use super::concat::middle_glue_poly;
use super::lopsided::lopsided_poly;

/// Constructor that produced a witness.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Method {
    Base,
    Positive,
    Catalog,
    ConcatProduct,
    ConcatMiddle,
    Deletion,
    BlockDecomposition,
    SuffixSearch,
    Glue,
    RandomSearch,
    Fixture,
}

impl Method {
    pub fn name(self) -> &'static str {
        match self {
            Method::Base => "base",
            Method::Positive => "positive",
            Method::Catalog => "catalog",
            Method::ConcatProduct => "concat_product",
            Method::ConcatMiddle => "concat_middle",
            Method::Deletion => "deletion",
            Method::BlockDecomposition => "block_decomposition",
            Method::SuffixSearch => "suffix_search",
            Method::Glue => "glue",
            Method::RandomSearch => "random_search",
            Method::Fixture => "fixture",
        }
    }
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// One instruction of a derivation trace. Traces run on a stack of
/// polynomials and must leave exactly the witness polynomial behind.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "op", rename_all = "snake_case")]
pub enum Step {
    /// Push a polynomial given by its ascending coefficients.
    Literal {
        #[serde(with = "rational_vec_serde")]
        coefficients: Vec<Rational>,
    },
    /// Push `prod (x - r) * prod (x^2 + b x + c)`.
    FromRoots {
        #[serde(with = "rational_vec_serde")]
        roots: Vec<Rational>,
        #[serde(with = "quadratic_serde")]
        quadratics: Vec<(Rational, Rational)>,
    },
    /// Push the lopsided polynomial with magnitudes `t^(d^2 - k^2)`.
    Lopsided { pattern: SignPattern, t: u32 },
    /// Multiply the listed coefficients (by power of x) of the top by `delta`.
    Delete {
        powers: Vec<usize>,
        #[serde(with = "rational_serde")]
        delta: Rational,
    },
    /// Multiply the constant term of the top by `2^doublings`.
    RaiseConstant { doublings: u32 },
    /// Pop `b`, pop `a`, push `a(x) * eps^deg(b) b(x/eps)`.
    ScaleTailProduct {
        #[serde(with = "rational_serde")]
        eps: Rational,
    },
    /// Pop `low`, pop `high`, push their middle concatenation at `eps`.
    MiddleGlue {
        #[serde(with = "rational_serde")]
        eps: Rational,
    },
    /// Apply a group element to the top.
    Transport { group: GroupElement },
    /// Divide the top by its leading coefficient.
    Monic,
    /// Negate the top.
    Negate,
}

mod quadratic_serde {
    use crate::exactpoly::{format_rational, parse_rational, Rational};
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(v: &[(Rational, Rational)], s: S) -> Result<S::Ok, S::Error> {
        s.collect_seq(
            v.iter()
                .map(|(b, c)| [format_rational(b), format_rational(c)]),
        )
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(
        d: D,
    ) -> Result<Vec<(Rational, Rational)>, D::Error> {
        let raw = Vec::<[String; 2]>::deserialize(d)?;
        raw.iter()
            .map(|[b, c]| {
                let b = parse_rational(b).map_err(serde::de::Error::custom)?;
                let c = parse_rational(c).map_err(serde::de::Error::custom)?;
                Ok((b, c))
            })
            .collect()
    }
}

pub fn from_roots(roots: &[Rational], quadratics: &[(Rational, Rational)]) -> Poly {
    let mut p = Poly::one();
    for r in roots {
        p = &p * &Poly::linear_root(r);
    }
    for (b, c) in quadratics {
        p = &p * &Poly::new(vec![c.clone(), b.clone(), Rational::from_integer(1.into())]);
    }
    p
}

fn apply_delete(p: &Poly, powers: &[usize], delta: &Rational) -> Poly {
    let mut coeffs = p.coeffs().to_vec();
    for &k in powers {
        if k < coeffs.len() {
            coeffs[k] = &coeffs[k] * delta;
        }
    }
    Poly::new(coeffs)
}

fn raise_constant(p: &Poly, doublings: u32) -> Poly {
    let mut coeffs = p.coeffs().to_vec();
    if let Some(c) = coeffs.first_mut() {
        *c = &*c * crate::exactpoly::pow2(doublings as i32);
    }
    Poly::new(coeffs)
}

/// Runs a trace and returns the single polynomial it leaves on the stack.
pub fn replay(trace: &[Step]) -> Result<Poly, ConstructError> {
    let bad = |why: &str| ConstructError::Verification(format!("trace replay: {why}"));
    let mut stack: Vec<Poly> = Vec::new();
    for step in trace {
        match step {
            Step::Literal { coefficients } => stack.push(Poly::new(coefficients.clone())),
            Step::FromRoots { roots, quadratics } => stack.push(from_roots(roots, quadratics)),
            Step::Lopsided { pattern, t } => stack.push(lopsided_poly(*pattern, *t)),
            Step::Delete { powers, delta } => {
                let top = stack.pop().ok_or_else(|| bad("delete on empty stack"))?;
                stack.push(apply_delete(&top, powers, delta));
            }
            Step::RaiseConstant { doublings } => {
                let top = stack.pop().ok_or_else(|| bad("raise on empty stack"))?;
                stack.push(raise_constant(&top, *doublings));
            }
            Step::ScaleTailProduct { eps } => {
                let b = stack
                    .pop()
                    .ok_or_else(|| bad("product needs two operands"))?;
                let a = stack
                    .pop()
                    .ok_or_else(|| bad("product needs two operands"))?;
                stack.push(&a * &b.scale_tail(eps)?);
            }
            Step::MiddleGlue { eps } => {
                let low = stack.pop().ok_or_else(|| bad("glue needs two operands"))?;
                let high = stack.pop().ok_or_else(|| bad("glue needs two operands"))?;
                stack.push(middle_glue_poly(&high, &low, eps)?);
            }
            Step::Transport { group } => {
                let top = stack.pop().ok_or_else(|| bad("transport on empty stack"))?;
                if top.is_zero() || top.constant_term() == Rational::from_integer(0.into()) {
                    return Err(bad("transport needs a nonzero constant term"));
                }
                stack.push(act_on_poly(&top, *group));
            }
            Step::Monic => {
                let top = stack.pop().ok_or_else(|| bad("monic on empty stack"))?;
                if top.is_zero() {
                    return Err(bad("monic of zero"));
                }
                stack.push(top.monic());
            }
            Step::Negate => {
                let top = stack.pop().ok_or_else(|| bad("negate on empty stack"))?;
                stack.push(-&top);
            }
        }
    }
    match stack.len() {
        1 => Ok(stack.pop().expect("one element")),
        n => Err(bad(&format!("trace leaves {n} polynomials"))),
    }
}

/// A polynomial whose sign pattern and root pair have been checked exactly.
///
/// The fields are private so the invariant holds for every value in existence.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Witness {
    polynomial: Poly,
    pattern: SignPattern,
    pair: RootPair,
    method: Method,
    trace: Vec<Step>,
    seed: Option<u64>,
}

/// Unverified witness as read from JSON.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct WitnessClaim {
    #[serde(with = "rational_vec_serde")]
    pub coefficients: Vec<Rational>,
    pub pattern: SignPattern,
    pub pos: u32,
    pub neg: u32,
    #[serde(default = "default_method")]
    pub method: Method,
    #[serde(default)]
    pub trace: Vec<Step>,
    #[serde(default)]
    pub seed: Option<u64>,
}

fn default_method() -> Method {
    Method::Fixture
}

impl Witness {
    /// Checks the invariant and wraps the polynomial. An empty trace is
    /// replaced by a single literal step.
    pub fn new(
        polynomial: Poly,
        pattern: SignPattern,
        pair: RootPair,
        method: Method,
        trace: Vec<Step>,
    ) -> Result<Witness, ConstructError> {
        verify(&polynomial, pattern, pair)?;
        let trace = if trace.is_empty() {
            vec![Step::Literal {
                coefficients: polynomial.coeffs().to_vec(),
            }]
        } else {
            trace
        };
        Ok(Witness {
            polynomial,
            pattern,
            pair,
            method,
            trace,
            seed: None,
        })
    }

    pub fn with_seed(mut self, seed: u64) -> Witness {
        self.seed = Some(seed);
        self
    }

    pub fn with_method(mut self, method: Method) -> Witness {
        self.method = method;
        self
    }

    pub fn polynomial(&self) -> &Poly {
        &self.polynomial
    }

    pub fn pattern(&self) -> SignPattern {
        self.pattern
    }

    pub fn pair(&self) -> RootPair {
        self.pair
    }

    pub fn combination(&self) -> Combination {
        Combination::new(self.pattern, self.pair)
    }

    pub fn method(&self) -> Method {
        self.method
    }

    pub fn trace(&self) -> &[Step] {
        &self.trace
    }

    pub fn seed(&self) -> Option<u64> {
        self.seed
    }

    pub fn degree(&self) -> usize {
        self.pattern.degree()
    }

    /// Re-runs the exact checks and the trace.
    pub fn reverify(&self) -> Result<(), ConstructError> {
        verify(&self.polynomial, self.pattern, self.pair)?;
        let replayed = replay(&self.trace)?;
        if replayed != self.polynomial {
            return Err(ConstructError::Verification(
                "trace does not reproduce the polynomial".into(),
            ));
        }
        Ok(())
    }

    /// Image under a group element; the trace gains a transport step.
    pub fn transported(&self, g: GroupElement) -> Result<Witness, ConstructError> {
        if g == GroupElement::Identity {
            return Ok(self.clone());
        }
        let target = self.combination().act(g);
        let mut trace = self.trace.clone();
        trace.push(Step::Transport { group: g });
        let mut w = Witness::new(
            act_on_poly(&self.polynomial, g),
            target.pattern,
            target.pair,
            self.method,
            trace,
        )?;
        w.seed = self.seed;
        Ok(w)
    }

    pub fn to_claim(&self) -> WitnessClaim {
        WitnessClaim {
            coefficients: self.polynomial.coeffs().to_vec(),
            pattern: self.pattern,
            pos: self.pair.pos,
            neg: self.pair.neg,
            method: self.method,
            trace: self.trace.clone(),
            seed: self.seed,
        }
    }

    /// Verifies a claim, including the trace when one is present.
    pub fn from_claim(claim: WitnessClaim) -> Result<Witness, ConstructError> {
        let polynomial = Poly::new(claim.coefficients);
        let pair = RootPair::new(claim.pos, claim.neg);
        let w = Witness::new(polynomial, claim.pattern, pair, claim.method, claim.trace)?;
        let w = Witness {
            seed: claim.seed,
            ..w
        };
        w.reverify()?;
        Ok(w)
    }
}

/// The exact witness check: pattern first, then roots on both half-axes.
pub fn verify(p: &Poly, pattern: SignPattern, pair: RootPair) -> Result<(), ConstructError> {
    if p.deg() != pattern.degree() {
        return Err(ConstructError::Verification(format!(
            "degree {} does not match pattern {pattern}",
            p.deg()
        )));
    }
    let actual = sign_pattern_of(p)?;
    if actual != pattern {
        return Err(ConstructError::Verification(format!(
            "sign pattern is {actual}, claimed {pattern}"
        )));
    }
    let roots = count_roots(p)?;
    let d = pattern.degree() as u32;
    if pair.pos + pair.neg > d {
        return Err(ConstructError::Verification(format!(
            "pair {pair} exceeds degree {d}"
        )));
    }
    let expected = RootCount::new(pair.pos, pair.neg, (d - pair.pos - pair.neg) / 2);
    if roots != expected {
        return Err(ConstructError::Verification(format!(
            "root count is ({},{}) with {} complex pairs, claimed {pair}",
            roots.pos, roots.neg, roots.complex_pairs
        )));
    }
    Ok(())
}

impl Serialize for Witness {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        self.to_claim().serialize(s)
    }
}

impl<'de> Deserialize<'de> for Witness {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let claim = WitnessClaim::deserialize(d)?;
        Witness::from_claim(claim).map_err(serde::de::Error::custom)
    }
}
