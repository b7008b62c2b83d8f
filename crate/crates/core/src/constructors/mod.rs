//! Witness builders and the realization pipeline.
//!
//! Every constructor returns a [`Witness`], whose invariant (sign pattern and
//! root pair checked exactly) is enforced when it is created. The
//! [`Realizer`] runs the constructors cheapest first on every member of the
//! orbit of a combination and transports the first witness back.

mod base;
mod blocks;
mod concat;
mod lopsided;
mod random;
mod suffix;
mod witness;

use std::fmt;

use dashmap::DashMap;
use serde::{Deserialize, Serialize};

use crate::certificates::check_all;
use crate::error::{ConstructError, PatternError};
use crate::patterns::{canonical_orbit_rep, orbit_members, Combination, RootPair, SignPattern};

pub use base::{realize_base, realize_positive, BASE_MAX_DEGREE, MAX_DOUBLINGS};
pub use blocks::{
    block_bound, block_precondition, compositions, realize_block_decomposition, split_blocks,
};
pub use concat::{
    concat_middle, concat_product, cubic_epsilon, factor_catalog, juxtapose, middle_glue_poly,
    CatalogFactor, MAX_HALVINGS,
};
pub use lopsided::{
    is_lopsided_at, lopsided_poly, lopsided_witness, realize_by_deletion, subpattern_pair,
};
pub use random::{
    combination_rng, combination_stream, random_root_placement, DEFAULT_RANDOM_BUDGET,
};
pub use suffix::{suffix_factor_search, DEFAULT_DFS_NODES};
pub use witness::{from_roots, replay, verify, Method, Step, Witness, WitnessClaim};

/// Pipeline stages in the order they are tried.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Strategy {
    Base,
    Positive,
    Deletion,
    BlockDecomposition,
    SuffixSearch,
    Glue,
    RandomSearch,
}

impl Strategy {
    pub const PIPELINE: [Strategy; 7] = [
        Strategy::Base,
        Strategy::Positive,
        Strategy::Deletion,
        Strategy::BlockDecomposition,
        Strategy::SuffixSearch,
        Strategy::Glue,
        Strategy::RandomSearch,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Strategy::Base => "base",
            Strategy::Positive => "positive",
            Strategy::Deletion => "deletion",
            Strategy::BlockDecomposition => "block_decomposition",
            Strategy::SuffixSearch => "suffix_search",
            Strategy::Glue => "glue",
            Strategy::RandomSearch => "random_search",
        }
    }

    fn method(self) -> Method {
        match self {
            Strategy::Base => Method::Base,
            Strategy::Positive => Method::Positive,
            Strategy::Deletion => Method::Deletion,
            Strategy::BlockDecomposition => Method::BlockDecomposition,
            Strategy::SuffixSearch => Method::SuffixSearch,
            Strategy::Glue => Method::Glue,
            Strategy::RandomSearch => Method::RandomSearch,
        }
    }
}

impl fmt::Display for Strategy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RealizerConfig {
    pub seed: u64,
    /// Objective evaluations of the random search for a queried combination.
    pub random_budget: u64,
    /// Objective evaluations for sub-combinations solved while gluing.
    pub sub_random_budget: u64,
    /// Node cap of the suffix search.
    pub dfs_budget: u64,
}

impl Default for RealizerConfig {
    fn default() -> Self {
        RealizerConfig {
            seed: 0,
            random_budget: DEFAULT_RANDOM_BUDGET,
            sub_random_budget: 5_000,
            dfs_budget: DEFAULT_DFS_NODES,
        }
    }
}

/// Runs the constructor pipeline. Sub-combinations met while gluing are
/// cached per orbit; every cached value is a pure function of the orbit and
/// the configuration, so sharing a realizer between threads does not change
/// any result.
pub struct Realizer {
    config: RealizerConfig,
    cache: DashMap<Combination, Option<Witness>>,
}

impl Realizer {
    pub fn new(config: RealizerConfig) -> Self {
        Realizer {
            config,
            cache: DashMap::new(),
        }
    }

    pub fn config(&self) -> &RealizerConfig {
        &self.config
    }

    /// Full pipeline on `(sp, pair)`; `None` once every stage is exhausted.
    pub fn realize(
        &self,
        sp: SignPattern,
        pair: RootPair,
    ) -> Result<Option<Witness>, PatternError> {
        sp.check_admissible(pair)?;
        Ok(self.pipeline(Combination::new(sp, pair), self.config.random_budget))
    }

    /// A single stage on every orbit member.
    pub fn try_strategy(
        &self,
        strategy: Strategy,
        sp: SignPattern,
        pair: RootPair,
    ) -> Option<Witness> {
        self.stage(
            strategy,
            Combination::new(sp, pair),
            self.config.random_budget,
        )
    }

    fn pipeline(&self, c: Combination, random_budget: u64) -> Option<Witness> {
        Strategy::PIPELINE
            .iter()
            .find_map(|&s| self.stage(s, c, random_budget))
    }

    fn stage(&self, strategy: Strategy, c: Combination, random_budget: u64) -> Option<Witness> {
        for (member, g) in orbit_members(c.pattern, c.pair) {
            if let Some(w) = self.attempt(strategy, member, random_budget) {
                let w = w.with_method(strategy.method());
                return w.transported(g).ok();
            }
        }
        None
    }

    fn attempt(&self, strategy: Strategy, c: Combination, random_budget: u64) -> Option<Witness> {
        let (sp, pair) = (c.pattern, c.pair);
        match strategy {
            Strategy::Base => (sp.degree() <= BASE_MAX_DEGREE)
                .then(|| realize_base(sp, pair).ok())
                .flatten(),
            Strategy::Positive => (pair == RootPair::new(0, 0))
                .then(|| realize_positive(sp).ok())
                .flatten(),
            Strategy::Deletion => realize_by_deletion(sp, pair).ok(),
            Strategy::BlockDecomposition => block_precondition(sp.degree(), pair)
                .then(|| realize_block_decomposition(sp, pair).ok())
                .flatten(),
            Strategy::SuffixSearch => suffix_factor_search(sp, pair, self.config.dfs_budget).ok(),
            Strategy::Glue => self.glue(c),
            Strategy::RandomSearch => {
                random_root_placement(sp, pair, random_budget, self.config.seed)
            }
        }
    }

    /// Solves a lower-degree combination, memoized per orbit.
    fn solve_sub(&self, c: Combination) -> Option<Witness> {
        let key = canonical_orbit_rep(c.pattern, c.pair);
        let rep = key.combination();
        let cached = self.cache.get(&rep).map(|e| e.value().clone());
        let value = match cached {
            Some(v) => v,
            None => {
                let v = match check_all(rep.pattern, rep.pair) {
                    Ok(None) => self.pipeline(rep, self.config.sub_random_budget),
                    _ => None,
                };
                self.cache.insert(rep, v.clone());
                v
            }
        };
        value.and_then(|w| w.transported(key.group).ok())
    }

    /// Splits the pattern at every position, solves both sides and glues
    /// them, first with the middle concatenation then with the product.
    fn glue(&self, c: Combination) -> Option<Witness> {
        let d = c.pattern.degree();
        let entries = c.pattern.entries();
        for j in 1..d {
            let high = SignPattern::from_signs(&entries[..=j]).expect("prefix");
            let tau = entries[j];
            let middle_low = c.pattern.window(j, d);
            let mut product_low = vec![crate::patterns::Sign::Plus];
            product_low.extend(entries[j + 1..].iter().map(|&s| s * tau));
            let product_low = SignPattern::from_signs(&product_low).expect("suffix");
            for (low, middle) in [(middle_low, true), (product_low, false)] {
                for high_pair in high.admissible_pairs() {
                    let Some(low_pair) = c.pair.checked_sub(high_pair) else {
                        continue;
                    };
                    if !low.is_admissible(low_pair) {
                        continue;
                    }
                    let Some(w_high) = self.solve_sub(Combination::new(high, high_pair)) else {
                        continue;
                    };
                    let Some(w_low) = self.solve_sub(Combination::new(low, low_pair)) else {
                        continue;
                    };
                    let glued = if middle {
                        concat_middle(&w_high, &w_low)
                    } else {
                        concat_product(&w_high, &w_low)
                    };
                    if let Ok(w) = glued {
                        debug_assert_eq!(w.combination(), c);
                        return Some(w);
                    }
                }
            }
        }
        None
    }
}

/// Convenience wrapper around a one-off [`Realizer`].
pub fn realize(
    sp: SignPattern,
    pair: RootPair,
    config: RealizerConfig,
) -> Result<Option<Witness>, ConstructError> {
    Ok(Realizer::new(config).realize(sp, pair)?)
}
