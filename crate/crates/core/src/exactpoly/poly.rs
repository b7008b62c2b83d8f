use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use super::rational::{common_denominator, format_rational, parse_rational, Rational};
use crate::error::PolyError;

/// Dense univariate polynomial over Q.
///
/// Coefficients are stored in ascending degree order with trailing zeros
/// trimmed, so the last stored coefficient is the leading one. The zero
/// polynomial has no coefficients.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct Poly {
    coeffs: Vec<Rational>,
}

impl Poly {
    pub fn new(mut coeffs: Vec<Rational>) -> Self {
        while coeffs.last().is_some_and(Zero::is_zero) {
            coeffs.pop();
        }
        Poly { coeffs }
    }

    /// Integer coefficients, ascending degree.
    pub fn from_ints(coeffs: &[i64]) -> Self {
        Poly::new(coeffs.iter().map(|&c| super::rational::int(c)).collect())
    }

    pub fn zero() -> Self {
        Poly { coeffs: Vec::new() }
    }

    pub fn one() -> Self {
        Poly::constant(Rational::one())
    }

    pub fn constant(c: Rational) -> Self {
        Poly::new(vec![c])
    }

    /// `x - r`
    pub fn linear_root(r: &Rational) -> Self {
        Poly::new(vec![-r.clone(), Rational::one()])
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree, or `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    /// Degree with the zero polynomial mapped to 0.
    pub fn deg(&self) -> usize {
        self.degree().unwrap_or(0)
    }

    pub fn coeffs(&self) -> &[Rational] {
        &self.coeffs
    }

    pub fn into_coeffs(self) -> Vec<Rational> {
        self.coeffs
    }

    /// Coefficient of `x^k`, zero past the degree.
    pub fn coeff(&self, k: usize) -> Rational {
        self.coeffs.get(k).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn leading(&self) -> Option<&Rational> {
        self.coeffs.last()
    }

    pub fn constant_term(&self) -> Rational {
        self.coeff(0)
    }

    pub fn eval(&self, x: &Rational) -> Rational {
        self.coeffs
            .iter()
            .rev()
            .fold(Rational::zero(), |acc, c| acc * x + c)
    }

    pub fn derivative(&self) -> Poly {
        Poly::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(k, c)| c * Rational::from_integer(BigInt::from(k)))
                .collect(),
        )
    }

    pub fn scale(&self, c: &Rational) -> Poly {
        Poly::new(self.coeffs.iter().map(|a| a * c).collect())
    }

    /// Divides by the leading coefficient. The zero polynomial is returned unchanged.
    pub fn monic(&self) -> Poly {
        match self.leading() {
            Some(lc) if !lc.is_one() => self.scale(&lc.recip()),
            _ => self.clone(),
        }
    }

    /// `p(-x)`
    pub fn compose_neg(&self) -> Poly {
        Poly::new(
            self.coeffs
                .iter()
                .enumerate()
                .map(|(k, c)| if k % 2 == 1 { -c } else { c.clone() })
                .collect(),
        )
    }

    /// `x^d p(1/x)` for `d = deg p`.
    pub fn reversed(&self) -> Poly {
        Poly::new(self.coeffs.iter().rev().cloned().collect())
    }

    /// `eps^d p(x/eps)`: the coefficient of `x^k` becomes `b_k eps^(d-k)`, so
    /// every root is multiplied by `eps` and the leading coefficient is kept.
    pub fn scale_tail(&self, eps: &Rational) -> Result<Poly, PolyError> {
        if !eps.is_positive() {
            return Err(PolyError::NonPositiveParameter);
        }
        let d = self.deg();
        let mut power = Rational::one();
        let mut out = vec![Rational::zero(); self.coeffs.len()];
        for k in (0..=d).rev() {
            if k < self.coeffs.len() {
                out[k] = &self.coeffs[k] * &power;
            }
            power *= eps;
        }
        Ok(Poly::new(out))
    }

    /// Euclidean division over Q. Panics on a zero divisor.
    pub fn div_rem(&self, divisor: &Poly) -> (Poly, Poly) {
        let dd = divisor.degree().expect("division by the zero polynomial");
        let lc_inv = divisor.coeffs[dd].recip();
        let mut rem = self.coeffs.clone();
        if rem.len() <= dd {
            return (Poly::zero(), self.clone());
        }
        let mut quot = vec![Rational::zero(); rem.len() - dd];
        for i in (0..quot.len()).rev() {
            let q = &rem[i + dd] * &lc_inv;
            if !q.is_zero() {
                for (j, b) in divisor.coeffs.iter().enumerate() {
                    rem[i + j] -= &q * b;
                }
            }
            quot[i] = q;
        }
        rem.truncate(dd);
        (Poly::new(quot), Poly::new(rem))
    }

    /// Monic greatest common divisor; `gcd(0, 0) = 0`.
    pub fn gcd(&self, other: &Poly) -> Poly {
        let a = IntPoly::from_poly(self);
        let b = IntPoly::from_poly(other);
        a.gcd(&b).to_poly().monic()
    }

    /// Serializes the coefficients as `"n/d"` strings, ascending degree.
    pub fn to_strings(&self) -> Vec<String> {
        self.coeffs.iter().map(format_rational).collect()
    }

    pub fn from_strings<S: AsRef<str>>(items: &[S]) -> Result<Poly, PolyError> {
        items
            .iter()
            .map(|s| parse_rational(s.as_ref()))
            .collect::<Result<Vec<_>, _>>()
            .map(Poly::new)
    }

    /// Product of linear and quadratic factors.
    pub fn product<'a>(factors: impl IntoIterator<Item = &'a Poly>) -> Poly {
        factors.into_iter().fold(Poly::one(), |acc, f| &acc * f)
    }
}

impl serde::Serialize for Poly {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_seq(self.coeffs.iter().map(format_rational))
    }
}

impl<'de> serde::Deserialize<'de> for Poly {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let items = Vec::<String>::deserialize(d)?;
        Poly::from_strings(&items).map_err(serde::de::Error::custom)
    }
}

impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (k, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let negative = c.is_negative();
            let magnitude = c.abs();
            if first {
                if negative {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {} ", if negative { '-' } else { '+' })?;
            }
            first = false;
            let show_coeff = k == 0 || !magnitude.is_one();
            if show_coeff {
                if magnitude.is_integer() {
                    write!(f, "{}", magnitude.numer())?;
                } else {
                    write!(f, "({})", magnitude)?;
                }
            }
            match k {
                0 => {}
                1 => write!(f, "x")?,
                _ => write!(f, "x^{k}")?,
            }
        }
        Ok(())
    }
}

impl Add for &Poly {
    type Output = Poly;
    fn add(self, rhs: &Poly) -> Poly {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        Poly::new((0..n).map(|k| self.coeff(k) + rhs.coeff(k)).collect())
    }
}

impl Sub for &Poly {
    type Output = Poly;
    fn sub(self, rhs: &Poly) -> Poly {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        Poly::new((0..n).map(|k| self.coeff(k) - rhs.coeff(k)).collect())
    }
}

impl Mul for &Poly {
    type Output = Poly;
    fn mul(self, rhs: &Poly) -> Poly {
        if self.is_zero() || rhs.is_zero() {
            return Poly::zero();
        }
        let mut out = vec![Rational::zero(); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in rhs.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        Poly::new(out)
    }
}

impl Neg for &Poly {
    type Output = Poly;
    fn neg(self) -> Poly {
        Poly::new(self.coeffs.iter().map(|c| -c).collect())
    }
}

macro_rules! forward_owned {
    ($tr:ident, $method:ident) => {
        impl $tr for Poly {
            type Output = Poly;
            fn $method(self, rhs: Poly) -> Poly {
                (&self).$method(&rhs)
            }
        }
    };
}
forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

/// Integer polynomial used inside gcd and Sturm computations, where
/// content removal keeps coefficient growth in check.
#[derive(Clone, Debug, PartialEq, Eq)]
pub(crate) struct IntPoly(pub(crate) Vec<BigInt>);

impl IntPoly {
    /// Positive rational multiple of `p` with coprime integer coefficients.
    pub(crate) fn from_poly(p: &Poly) -> IntPoly {
        let den = common_denominator(p.coeffs());
        let ints = p
            .coeffs()
            .iter()
            .map(|c| (c * Rational::from_integer(den.clone())).to_integer())
            .collect();
        IntPoly(ints).primitive()
    }

    pub(crate) fn to_poly(&self) -> Poly {
        Poly::new(self.0.iter().cloned().map(Rational::from_integer).collect())
    }

    pub(crate) fn is_zero(&self) -> bool {
        self.0.is_empty()
    }

    pub(crate) fn degree(&self) -> usize {
        self.0.len().saturating_sub(1)
    }

    fn trim(mut self) -> IntPoly {
        while self.0.last().is_some_and(Zero::is_zero) {
            self.0.pop();
        }
        self
    }

    /// Divides by the positive gcd of the coefficients.
    pub(crate) fn primitive(self) -> IntPoly {
        let s = self.trim();
        let g = s.0.iter().fold(BigInt::zero(), |g, c| g.gcd(c));
        if g.is_zero() || g.is_one() {
            return s;
        }
        IntPoly(s.0.into_iter().map(|c| c / &g).collect())
    }

    /// Pseudo-remainder `lc(b)^k * a mod b`, together with whether the
    /// multiplier `lc(b)^k` is negative.
    pub(crate) fn pseudo_rem(&self, b: &IntPoly) -> (IntPoly, bool) {
        let db = b.degree();
        let lc = b.0.last().expect("nonzero divisor").clone();
        let mut r = self.0.clone();
        let mut steps = 0u32;
        while r.len() > db && !r.is_empty() {
            let top = r.len() - 1;
            let lead = r[top].clone();
            for c in r.iter_mut() {
                *c *= &lc;
            }
            let shift = top - db;
            for (j, bj) in b.0.iter().enumerate() {
                r[shift + j] -= &lead * bj;
            }
            steps += 1;
            while r.last().is_some_and(Zero::is_zero) {
                r.pop();
            }
        }
        let multiplier_negative = lc.is_negative() && steps % 2 == 1;
        (IntPoly(r).trim(), multiplier_negative)
    }

    pub(crate) fn gcd(&self, other: &IntPoly) -> IntPoly {
        let (mut a, mut b) = (self.clone().primitive(), other.clone().primitive());
        if a.degree() < b.degree() {
            std::mem::swap(&mut a, &mut b);
        }
        while !b.is_zero() {
            let (r, _) = a.pseudo_rem(&b);
            a = b;
            b = r.primitive();
        }
        a
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactpoly::rational::{frac, int};

    #[test]
    fn difference_of_squares() {
        let p = &Poly::from_ints(&[-1, 1]) * &Poly::from_ints(&[1, 1]);
        assert_eq!(p, Poly::from_ints(&[-1, 0, 1]));
    }

    #[test]
    fn derivative_of_cube() {
        assert_eq!(
            Poly::from_ints(&[0, 0, 0, 1]).derivative(),
            Poly::from_ints(&[0, 0, 3])
        );
        assert!(Poly::from_ints(&[5]).derivative().is_zero());
    }

    #[test]
    fn double_root_times_linear_factor() {
        // (x^2 - 2x + 1)(x + 1) = x^3 - x^2 - x + 1
        let p = &Poly::from_ints(&[1, -2, 1]) * &Poly::from_ints(&[1, 1]);
        assert_eq!(p, Poly::from_ints(&[1, -1, -1, 1]));
    }

    #[test]
    fn scale_tail_examples() {
        let p = Poly::from_ints(&[1, 1]);
        assert_eq!(
            p.scale_tail(&frac(1, 2)).unwrap(),
            Poly::new(vec![frac(1, 2), int(1)])
        );
        let q = Poly::from_ints(&[2, 2, 1]);
        assert_eq!(
            q.scale_tail(&frac(1, 10)).unwrap(),
            Poly::new(vec![frac(2, 100), frac(2, 10), int(1)])
        );
        assert_eq!(q.scale_tail(&int(1)).unwrap(), q);
        assert_eq!(q.scale_tail(&int(0)), Err(PolyError::NonPositiveParameter));
        assert_eq!(q.scale_tail(&int(-1)), Err(PolyError::NonPositiveParameter));
    }

    #[test]
    fn division_and_gcd() {
        let a = &Poly::from_ints(&[-1, 1]) * &Poly::from_ints(&[2, 1]);
        let b = &Poly::from_ints(&[-1, 1]) * &Poly::from_ints(&[1, 0, 1]);
        assert_eq!(a.gcd(&b), Poly::from_ints(&[-1, 1]));
        let (q, r) = b.div_rem(&Poly::from_ints(&[-1, 1]));
        assert!(r.is_zero());
        assert_eq!(q, Poly::from_ints(&[1, 0, 1]));
        let (q, r) = Poly::from_ints(&[1, 0, 1]).div_rem(&Poly::from_ints(&[0, 2]));
        assert_eq!(q, Poly::new(vec![int(0), frac(1, 2)]));
        assert_eq!(r, Poly::from_ints(&[1]));
    }

    #[test]
    fn transforms() {
        let p = Poly::from_ints(&[3, 2, 1]);
        assert_eq!(p.compose_neg(), Poly::from_ints(&[3, -2, 1]));
        assert_eq!(p.reversed(), Poly::from_ints(&[1, 2, 3]));
        assert_eq!(p.eval(&int(2)), int(11));
    }

    #[test]
    fn display_is_readable() {
        let p = Poly::new(vec![frac(1, 2), int(-1), int(0), int(1)]);
        assert_eq!(p.to_string(), "x^3 - x + (1/2)");
        assert_eq!(Poly::zero().to_string(), "0");
    }

    #[test]
    fn string_round_trip() {
        let p = Poly::new(vec![frac(-3, 7), int(0), int(1)]);
        assert_eq!(Poly::from_strings(&p.to_strings()).unwrap(), p);
    }
}
