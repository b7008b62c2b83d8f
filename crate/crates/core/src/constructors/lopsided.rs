//! Lopsided polynomials and realization by coefficient deletion.
//!
//! With `|a_k| = t^(d^2-k^2)` and `x_k = t^(2k)` one gets
//! `|a_j| x_k^j = t^(d^2+k^2-(j-k)^2)`, so the `k`-th monomial beats the sum of
//! the other `d` ones as soon as `t > d`. Such a polynomial is real-rooted for
//! every choice of signs. Shrinking a subset of its coefficients by a small
//! `delta` yields the root pair of the pattern with those entries removed.

use num_traits::{Signed, Zero};

use crate::error::ConstructError;
use crate::exactpoly::{pow2, Poly, Rational};
use crate::patterns::{RootPair, SignPattern};

use super::concat::MAX_HALVINGS;
use super::witness::{Method, Step, Witness};

/// Coefficient of `x^k` is `sign_k * t^(d^2-k^2)`.
pub fn lopsided_poly(sp: SignPattern, t: u32) -> Poly {
    let d = sp.degree() as u32;
    let t = num_bigint::BigInt::from(t);
    let coeffs = (0..=d)
        .map(|k| {
            let mag = Rational::from_integer(num_traits::pow(t.clone(), (d * d - k * k) as usize));
            if sp.sign_of_power(k as usize).is_minus() {
                -mag
            } else {
                mag
            }
        })
        .collect();
    Poly::new(coeffs)
}

/// Whether the `k`-th monomial strictly dominates the others at `x > 0`.
pub fn is_lopsided_at(p: &Poly, k: usize, x: &Rational) -> bool {
    let mut power = Rational::from_integer(1.into());
    let mut main = Rational::zero();
    let mut rest = Rational::zero();
    for (j, c) in p.coeffs().iter().enumerate() {
        let term = c.abs() * &power;
        if j == k {
            main = term;
        } else {
            rest += term;
        }
        power = &power * x;
    }
    main > rest
}

/// Lopsided polynomial with the given signs, checked at `x_k = t^(2k)`.
pub fn lopsided_witness(sp: SignPattern) -> Poly {
    let d = sp.degree();
    for t in [d as u32 + 1, 2 * (d as u32 + 1)] {
        let p = lopsided_poly(sp, t);
        let tq = Rational::from_integer(t.into());
        let ok = (0..=d).all(|k| is_lopsided_at(&p, k, &num_traits::pow(tq.clone(), 2 * k)));
        if ok {
            return p;
        }
    }
    unreachable!("t^(d^2-k^2) is lopsided for t > d")
}

/// Root pair read off the entries at `kept` powers: sign changes for `x`,
/// and for `-x`.
pub fn subpattern_pair(sp: SignPattern, kept: &[usize]) -> RootPair {
    let changes = |flip: bool| {
        kept.windows(2)
            .filter(|w| {
                let s = |k: usize| sp.sign_of_power(k).is_minus() != (flip && k % 2 == 1);
                s(w[0]) != s(w[1])
            })
            .count() as u32
    };
    RootPair::new(changes(false), changes(true))
}

/// Interior powers to shrink, by increasing size of the deletion set.
fn deletion_sets(d: usize) -> Vec<Vec<usize>> {
    let interior = d.saturating_sub(1);
    let mut sets: Vec<Vec<usize>> = (0u32..1 << interior)
        .map(|mask| (1..d).filter(|k| mask >> (k - 1) & 1 == 1).collect())
        .collect();
    sets.sort_by(|a: &Vec<usize>, b: &Vec<usize>| a.len().cmp(&b.len()).then_with(|| a.cmp(b)));
    sets
}

/// Shrinks a deletion set of the lopsided polynomial until the pair matches.
pub fn realize_by_deletion(sp: SignPattern, pair: RootPair) -> Result<Witness, ConstructError> {
    sp.check_admissible(pair)?;
    let d = sp.degree();
    let base = lopsided_witness(sp);
    let t = d as u32 + 1;
    let mut matched = false;
    for deleted in deletion_sets(d) {
        let kept: Vec<usize> = (0..=d).filter(|k| !deleted.contains(k)).collect();
        if subpattern_pair(sp, &kept) != pair {
            continue;
        }
        matched = true;
        for h in 0..=MAX_HALVINGS {
            let delta = pow2(-(h as i32));
            let mut coeffs = base.coeffs().to_vec();
            for &k in &deleted {
                coeffs[k] = &coeffs[k] * &delta;
            }
            let p = Poly::new(coeffs);
            let mut trace = vec![Step::Lopsided { pattern: sp, t }];
            if !deleted.is_empty() {
                trace.push(Step::Delete {
                    powers: deleted.clone(),
                    delta,
                });
            }
            if let Ok(w) = Witness::new(p, sp, pair, Method::Deletion, trace) {
                return Ok(w);
            }
            if deleted.is_empty() {
                break;
            }
        }
    }
    if matched {
        Err(ConstructError::ScheduleExhausted(MAX_HALVINGS))
    } else {
        Err(ConstructError::Exhausted(format!(
            "no deletion of {sp} has pair {pair}"
        )))
    }
}
