//! Degrees up to three by table lookup, and root-free polynomials.

use std::collections::HashMap;
use std::sync::OnceLock;

use crate::error::ConstructError;
use crate::exactpoly::{count_roots, frac, int, pow2, Poly, Rational, RootCount};
use crate::patterns::{Combination, RootPair, SignPattern};

use super::witness::{from_roots, Method, Step, Witness};

/// Degree bound of [`realize_base`].
pub const BASE_MAX_DEGREE: usize = 3;

fn root_grid() -> Vec<Rational> {
    vec![
        int(1),
        int(2),
        int(3),
        frac(1, 2),
        int(4),
        frac(1, 3),
        frac(1, 4),
        int(5),
        int(8),
        frac(1, 8),
        int(16),
        frac(1, 16),
    ]
}

/// `(b, c)` with `c > b^2/4`, ordered by index cost.
fn quadratic_grid() -> Vec<(Rational, Rational)> {
    let bs = [
        int(2),
        int(-2),
        int(1),
        int(-1),
        int(4),
        int(-4),
        frac(1, 2),
        frac(-1, 2),
        int(8),
        int(-8),
    ];
    let ss = [int(1), frac(1, 4), int(4), frac(1, 16)];
    let mut items: Vec<(usize, usize)> = (0..bs.len())
        .flat_map(|i| (0..ss.len()).map(move |j| (i, j)))
        .collect();
    items.sort_by_key(|&(i, j)| (i + j, i));
    items
        .into_iter()
        .map(|(i, j)| {
            let b = bs[i].clone();
            let c = &b * &b / int(4) + &ss[j];
            (b, c)
        })
        .collect()
}

/// Nondecreasing index tuples of length `k` over `0..n`.
fn multisets(n: usize, k: usize) -> Vec<Vec<usize>> {
    fn go(n: usize, k: usize, start: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            cur.push(i);
            go(n, k, i, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    go(n, k, 0, &mut Vec::new(), &mut out);
    out
}

fn place_roots(c: Combination) -> Option<Witness> {
    let grid = root_grid();
    let quads = quadratic_grid();
    let q = c.complex_pairs() as usize;
    let pos_sets = multisets(grid.len(), c.pair.pos as usize);
    let neg_sets = multisets(grid.len(), c.pair.neg as usize);
    let quad_sets = multisets(quads.len(), q);
    let mut candidates = Vec::new();
    for ps in &pos_sets {
        for ns in &neg_sets {
            for qs in &quad_sets {
                let cost: usize = ps.iter().chain(ns).chain(qs).sum();
                candidates.push((cost, ps, ns, qs));
            }
        }
    }
    candidates.sort();
    for (_, ps, ns, qs) in candidates {
        let roots: Vec<Rational> = ps
            .iter()
            .map(|&i| grid[i].clone())
            .chain(ns.iter().map(|&i| -grid[i].clone()))
            .collect();
        let quadratics: Vec<(Rational, Rational)> = qs.iter().map(|&i| quads[i].clone()).collect();
        let p = from_roots(&roots, &quadratics);
        if crate::exactpoly::sign_pattern_of(&p).ok() == Some(c.pattern) {
            let trace = vec![Step::FromRoots { roots, quadratics }];
            if let Ok(w) = Witness::new(p, c.pattern, c.pair, Method::Base, trace) {
                return Some(w);
            }
        }
    }
    None
}

fn base_table() -> &'static HashMap<Combination, Witness> {
    static TABLE: OnceLock<HashMap<Combination, Witness>> = OnceLock::new();
    TABLE.get_or_init(|| {
        let mut table = HashMap::new();
        for d in 1..=BASE_MAX_DEGREE {
            for sp in SignPattern::all_of_degree(d) {
                for pair in sp.admissible_pairs() {
                    let c = Combination::new(sp, pair);
                    if let Some(w) = place_roots(c) {
                        table.insert(c, w);
                    }
                }
            }
        }
        table
    })
}

/// Witness for any admissible combination of degree at most three.
pub fn realize_base(sp: SignPattern, pair: RootPair) -> Result<Witness, ConstructError> {
    if sp.degree() > BASE_MAX_DEGREE {
        return Err(ConstructError::Precondition(format!(
            "base table covers degree <= {BASE_MAX_DEGREE}, got {}",
            sp.degree()
        )));
    }
    sp.check_admissible(pair)?;
    base_table()
        .get(&Combination::new(sp, pair))
        .cloned()
        .ok_or_else(|| {
            ConstructError::Exhausted(format!("no table entry for {}", Combination::new(sp, pair)))
        })
}

/// Maximum number of constant-term doublings in [`realize_positive`].
pub const MAX_DOUBLINGS: u32 = 200;

/// Root-free witness: coefficients `+-1`, constant term doubled until the
/// graph clears the axis. Needs even degree and a `+` constant entry.
pub fn realize_positive(sp: SignPattern) -> Result<Witness, ConstructError> {
    let d = sp.degree();
    if d % 2 == 1 {
        return Err(ConstructError::Precondition(
            "odd degree polynomials always have a real root".into(),
        ));
    }
    if sp.constant_sign().is_minus() {
        return Err(ConstructError::Precondition(
            "a polynomial without real roots needs a positive constant term".into(),
        ));
    }
    let coefficients: Vec<Rational> = (0..=d)
        .map(|k| {
            if sp.sign_of_power(k).is_minus() {
                int(-1)
            } else {
                int(1)
            }
        })
        .collect();
    let start = Poly::new(coefficients.clone());
    let target = RootCount::new(0, 0, d as u32 / 2);
    for doublings in 0..=MAX_DOUBLINGS {
        let mut c = start.coeffs().to_vec();
        c[0] = &c[0] * pow2(doublings as i32);
        let p = Poly::new(c);
        if count_roots(&p)? == target {
            let mut trace = vec![Step::Literal {
                coefficients: coefficients.clone(),
            }];
            if doublings > 0 {
                trace.push(Step::RaiseConstant { doublings });
            }
            return Witness::new(p, sp, RootPair::new(0, 0), Method::Positive, trace);
        }
    }
    Err(ConstructError::ScheduleExhausted(MAX_DOUBLINGS))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sp(s: &str) -> SignPattern {
        SignPattern::parse(s).unwrap()
    }

    #[test]
    fn table_examples() {
        let w = realize_base(sp("++"), RootPair::new(0, 1)).unwrap();
        assert_eq!(w.polynomial(), &Poly::from_ints(&[1, 1]));
        let w = realize_base(sp("+++"), RootPair::new(0, 0)).unwrap();
        assert_eq!(w.polynomial(), &Poly::from_ints(&[2, 2, 1]));
        let w = realize_base(sp("+--"), RootPair::new(1, 1)).unwrap();
        assert_eq!(
            w.polynomial(),
            &(&Poly::from_ints(&[1, 1]) * &Poly::from_ints(&[-2, 1]))
        );
    }

    #[test]
    fn table_covers_every_admissible_combination() {
        for d in 1..=3 {
            for p in SignPattern::all_of_degree(d) {
                for pair in p.admissible_pairs() {
                    let w = realize_base(p, pair).unwrap();
                    w.reverify().unwrap();
                }
            }
        }
        assert!(realize_base(sp("+++"), RootPair::new(1, 0)).is_err());
        assert!(realize_base(sp("+++++"), RootPair::new(0, 0)).is_err());
    }

    #[test]
    fn positive_examples() {
        let w = realize_positive(sp("+++")).unwrap();
        assert_eq!(w.polynomial(), &Poly::from_ints(&[1, 1, 1]));
        let w = realize_positive(sp("+-+")).unwrap();
        assert_eq!(w.polynomial(), &Poly::from_ints(&[1, -1, 1]));
        assert!(realize_positive(sp("++-")).is_err());
        for p in SignPattern::all_of_degree(8).filter(|p| !p.constant_sign().is_minus()) {
            realize_positive(p).unwrap();
        }
    }
}
