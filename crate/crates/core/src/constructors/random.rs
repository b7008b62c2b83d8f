//! Randomized root placement.
//!
//! Real roots are parameterized by their log-modulus and each complex pair by
//! log-modulus and argument, `x^2 - 2 rho cos(phi) x + rho^2`. Candidates are
//! scored in floating point by the smallest normalized coefficient margin
//! `sigma_k c_k / M_k`, where `M_k` is the same coefficient of the polynomial
//! with all roots replaced by `-|root|`. Random restarts are refined with a
//! (1+1) evolution strategy. A positive score is rounded to dyadic rationals,
//! expanded exactly and verified; the pair holds by construction.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::exactpoly::{dyadic_from_f64, Rational};
use crate::patterns::{Combination, RootPair, SignPattern};

use super::witness::{from_roots, Method, Step, Witness};

/// Default number of objective evaluations per combination.
pub const DEFAULT_RANDOM_BUDGET: u64 = 50_000;

const LOG_RANGE: f64 = 5.0;
const STALL_LIMIT: u32 = 400;
const MIN_STEP: f64 = 1e-7;

/// Injective code of a combination, used as the ChaCha stream id.
pub fn combination_stream(c: Combination) -> u64 {
    let d = c.pattern.degree() as u64;
    let mask = c.pattern.minus_mask() as u64;
    (d << 58) ^ (mask << 16) ^ ((c.pair.pos as u64) << 8) ^ c.pair.neg as u64
}

/// Random generator for one combination under a global seed.
pub fn combination_rng(seed: u64, c: Combination) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(combination_stream(c));
    rng
}

#[derive(Clone, Debug)]
struct Shape {
    pos: usize,
    neg: usize,
    quads: usize,
    /// Sign of the coefficient of `x^k` (`+1` or `-1`).
    signs: Vec<f64>,
}

impl Shape {
    fn dims(&self) -> usize {
        self.pos + self.neg + 2 * self.quads
    }

    fn random_point(&self, rng: &mut ChaCha8Rng) -> Vec<f64> {
        let mut theta = Vec::with_capacity(self.dims());
        for _ in 0..self.pos + self.neg {
            theta.push(rng.random_range(-LOG_RANGE..LOG_RANGE));
        }
        for _ in 0..self.quads {
            theta.push(rng.random_range(-LOG_RANGE..LOG_RANGE));
            theta.push(rng.random_range(0.05..std::f64::consts::PI - 0.05));
        }
        theta
    }

    fn clamp(&self, theta: &mut [f64]) {
        let real = self.pos + self.neg;
        for (i, v) in theta.iter_mut().enumerate() {
            let is_angle = i >= real && (i - real) % 2 == 1;
            if is_angle {
                *v = v.clamp(1e-6, std::f64::consts::PI - 1e-6);
            } else {
                *v = v.clamp(-3.0 * LOG_RANGE, 3.0 * LOG_RANGE);
            }
        }
    }

    /// Roots and quadratic factors `(b, c)` of `x^2 + b x + c`.
    fn factors(&self, theta: &[f64]) -> (Vec<f64>, Vec<(f64, f64)>) {
        let mut roots = Vec::with_capacity(self.pos + self.neg);
        for (i, &u) in theta[..self.pos + self.neg].iter().enumerate() {
            let r = u.exp();
            roots.push(if i < self.pos { r } else { -r });
        }
        let quads = theta[self.pos + self.neg..]
            .chunks(2)
            .map(|q| {
                let rho = q[0].exp();
                (-2.0 * rho * q[1].cos(), rho * rho)
            })
            .collect();
        (roots, quads)
    }

    fn score(&self, theta: &[f64]) -> f64 {
        let (roots, quads) = self.factors(theta);
        let d = self.signs.len() - 1;
        let mut c = vec![0.0; d + 1];
        let mut m = vec![0.0; d + 1];
        c[0] = 1.0;
        m[0] = 1.0;
        let mut deg = 0;
        for r in roots {
            for k in (0..=deg + 1).rev() {
                let lower = if k > 0 { c[k - 1] } else { 0.0 };
                let lower_m = if k > 0 { m[k - 1] } else { 0.0 };
                c[k] = lower - r * c[k];
                m[k] = lower_m + r.abs() * m[k];
            }
            deg += 1;
        }
        for (b, q) in quads {
            for k in (0..=deg + 2).rev() {
                let c1 = if k >= 1 { c[k - 1] } else { 0.0 };
                let c2 = if k >= 2 { c[k - 2] } else { 0.0 };
                let m1 = if k >= 1 { m[k - 1] } else { 0.0 };
                let m2 = if k >= 2 { m[k - 2] } else { 0.0 };
                c[k] = c2 + b * c1 + q * c[k];
                m[k] = m2 + b.abs() * m1 + q * m[k];
            }
            deg += 2;
        }
        // Coefficients are stored ascending after the loop above.
        let mut worst = f64::INFINITY;
        for k in 0..=d {
            let margin = self.signs[k] * c[k] / m[k];
            if !margin.is_finite() {
                return f64::NEG_INFINITY;
            }
            worst = worst.min(margin);
        }
        worst
    }
}

fn exact_candidate(
    sp: SignPattern,
    pair: RootPair,
    shape: &Shape,
    theta: &[f64],
    seed: u64,
) -> Option<Witness> {
    let (roots, quads) = shape.factors(theta);
    for bits in [20u32, 32, 48] {
        let exact_roots: Vec<Rational> = roots.iter().map(|&r| dyadic_from_f64(r, bits)).collect();
        if exact_roots.iter().enumerate().any(|(i, r)| {
            use num_traits::Signed;
            (i < shape.pos) != r.is_positive() || num_traits::Zero::is_zero(r)
        }) {
            continue;
        }
        let mut exact_quads = Vec::with_capacity(quads.len());
        for &(b, c) in &quads {
            let b = dyadic_from_f64(b, bits);
            let c = dyadic_from_f64(c, bits);
            let disc_ok = &b * &b < &c * Rational::from_integer(4.into());
            if !disc_ok {
                break;
            }
            exact_quads.push((b, c));
        }
        if exact_quads.len() != quads.len() {
            continue;
        }
        let p = from_roots(&exact_roots, &exact_quads);
        if crate::exactpoly::sign_pattern_of(&p).ok() != Some(sp) {
            continue;
        }
        let trace = vec![Step::FromRoots {
            roots: exact_roots,
            quadratics: exact_quads,
        }];
        if let Ok(w) = Witness::new(p, sp, pair, Method::RandomSearch, trace) {
            return Some(w.with_seed(seed));
        }
    }
    None
}

/// Searches for roots whose product has pattern `sp`; `budget` counts
/// objective evaluations. Deterministic in `(sp, pair, budget, seed)`.
pub fn random_root_placement(
    sp: SignPattern,
    pair: RootPair,
    budget: u64,
    seed: u64,
) -> Option<Witness> {
    if !sp.is_admissible(pair) || budget == 0 {
        return None;
    }
    let d = sp.degree();
    let shape = Shape {
        pos: pair.pos as usize,
        neg: pair.neg as usize,
        quads: (d - pair.real_roots() as usize) / 2,
        signs: (0..=d)
            .map(|k| {
                if sp.sign_of_power(k).is_minus() {
                    -1.0
                } else {
                    1.0
                }
            })
            .collect(),
    };
    let mut rng = combination_rng(seed, Combination::new(sp, pair));
    let mut used = 0u64;
    while used < budget {
        let mut theta = shape.random_point(&mut rng);
        let mut fit = shape.score(&theta);
        used += 1;
        let mut step = 1.0;
        let mut stall = 0;
        let mut last_tried = f64::NEG_INFINITY;
        loop {
            if fit > 0.0 && fit > last_tried {
                last_tried = fit;
                if let Some(w) = exact_candidate(sp, pair, &shape, &theta, seed) {
                    return Some(w);
                }
            }
            if used >= budget || stall > STALL_LIMIT || step < MIN_STEP {
                break;
            }
            let mut child: Vec<f64> = theta
                .iter()
                .map(|v| v + step * rng.sample::<f64, _>(StandardNormal))
                .collect();
            shape.clamp(&mut child);
            let child_fit = shape.score(&child);
            used += 1;
            if child_fit >= fit {
                if child_fit > fit {
                    stall = 0;
                } else {
                    stall += 1;
                }
                theta = child;
                fit = child_fit;
                step *= 1.5;
            } else {
                stall += 1;
                step *= 0.9;
            }
        }
    }
    None
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sp(s: &str) -> SignPattern {
        SignPattern::parse(s).unwrap()
    }

    #[test]
    fn finds_easy_combinations_deterministically() {
        let a = random_root_placement(sp("+---++"), RootPair::new(2, 1), 20_000, 7).unwrap();
        let b = random_root_placement(sp("+---++"), RootPair::new(2, 1), 20_000, 7).unwrap();
        assert_eq!(a, b);
        a.reverify().unwrap();
    }

    #[test]
    fn impossible_combinations_exhaust_the_budget() {
        // Certified non-realizable.
        assert!(random_root_placement(sp("+----+"), RootPair::new(0, 3), 5_000, 1).is_none());
        assert!(random_root_placement(sp("+++"), RootPair::new(2, 0), 10, 1).is_none());
    }

    #[test]
    fn streams_are_injective_on_small_degrees() {
        let mut seen = std::collections::HashSet::new();
        for d in 1..=8 {
            for p in SignPattern::all_of_degree(d) {
                for pair in p.admissible_pairs() {
                    assert!(seen.insert(combination_stream(Combination::new(p, pair))));
                }
            }
        }
    }
}
