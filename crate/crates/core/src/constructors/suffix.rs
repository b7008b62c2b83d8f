//! Depth-first peeling of trailing entries by catalog factors.
//!
//! A factor `f` can be peeled from the end of the pattern when the last
//! `deg f` entries equal the non-leading entries of `f` times the sign `tau` of
//! the entry just before them. The residual pair must stay admissible for the
//! remaining prefix. Once the prefix has degree at most three it is taken from
//! the base table, and the witness is rebuilt by repeated products.

use crate::error::ConstructError;
use crate::patterns::{RootPair, Sign, SignPattern};

use super::base::{realize_base, BASE_MAX_DEGREE};
use super::concat::{concat_product, factor_catalog, CatalogFactor};
use super::witness::{Method, Witness};

/// Default node budget of the search.
pub const DEFAULT_DFS_NODES: u64 = 1_000_000;

struct Search<'a> {
    entries: Vec<Sign>,
    catalog: &'a [CatalogFactor],
    nodes: u64,
    budget: u64,
}

impl Search<'_> {
    /// Factor indices peeled from the end, last peeled first.
    fn dfs(&mut self, degree: usize, pair: RootPair, peeled: &mut Vec<usize>) -> Option<Witness> {
        self.nodes += 1;
        if self.nodes > self.budget {
            return None;
        }
        let prefix =
            SignPattern::from_signs(&self.entries[..=degree]).expect("prefix of a pattern");
        if !prefix.is_admissible(pair) {
            return None;
        }
        if degree <= BASE_MAX_DEGREE {
            if let Some(w) = self.rebuild(prefix, pair, peeled) {
                return Some(w);
            }
        }
        for (i, f) in self.catalog.iter().enumerate() {
            let k = f.degree();
            if k >= degree {
                continue;
            }
            let tau = self.entries[degree - k];
            let fits = f
                .tail()
                .iter()
                .zip(&self.entries[degree - k + 1..=degree])
                .all(|(&s, &e)| s * tau == e);
            let Some(rest) = pair.checked_sub(f.pair()) else {
                continue;
            };
            if !fits {
                continue;
            }
            peeled.push(i);
            if let Some(w) = self.dfs(degree - k, rest, peeled) {
                return Some(w);
            }
            peeled.pop();
            if self.nodes > self.budget {
                return None;
            }
        }
        None
    }

    fn rebuild(&self, prefix: SignPattern, pair: RootPair, peeled: &[usize]) -> Option<Witness> {
        let mut w = realize_base(prefix, pair).ok()?;
        for &i in peeled.iter().rev() {
            w = concat_product(&w, &self.catalog[i].witness).ok()?;
        }
        Some(w.with_method(Method::SuffixSearch))
    }
}

/// Searches peelings of `sp` whose factors account for `pair`.
pub fn suffix_factor_search(
    sp: SignPattern,
    pair: RootPair,
    budget: u64,
) -> Result<Witness, ConstructError> {
    sp.check_admissible(pair)?;
    let mut search = Search {
        entries: sp.entries(),
        catalog: factor_catalog(),
        nodes: 0,
        budget,
    };
    match search.dfs(sp.degree(), pair, &mut Vec::new()) {
        Some(w) => Ok(w),
        None if search.nodes > budget => Err(ConstructError::Exhausted(format!(
            "node budget {budget} spent"
        ))),
        None => Err(ConstructError::Exhausted(format!(
            "no peeling of {sp} yields {pair}"
        ))),
    }
}
