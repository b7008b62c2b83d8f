//! Realization by splitting the pattern into overlapping blocks of degree at
//! most three, realizing each block from the base table and gluing the blocks
//! with the middle concatenation.
//!
//! When `min(pos, neg) > floor((d-4)/3)` a distribution of the target pair over
//! the standard split into degree-3 blocks always exists; other splits are
//! tried afterwards.

use crate::error::ConstructError;
use crate::patterns::{RootPair, SignPattern};

use super::base::{realize_base, BASE_MAX_DEGREE};
use super::concat::concat_middle;
use super::witness::{Method, Witness};

/// `floor((d-4)/3)`, negative for `d <= 3`.
pub fn block_bound(d: usize) -> i64 {
    (d as i64 - 4).div_euclid(3)
}

pub fn block_precondition(d: usize, pair: RootPair) -> bool {
    pair.min() as i64 > block_bound(d)
}

/// Compositions of `d` into parts of size 1..=3: fewest parts first, then
/// lexicographically descending, so `3, 3, ..., r` leads.
pub fn compositions(d: usize) -> Vec<Vec<usize>> {
    fn go(left: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if left == 0 {
            out.push(cur.clone());
            return;
        }
        for part in (1..=BASE_MAX_DEGREE.min(left)).rev() {
            cur.push(part);
            go(left - part, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    go(d, &mut Vec::new(), &mut out);
    out.sort_by(|a, b| a.len().cmp(&b.len()).then_with(|| b.cmp(a)));
    out
}

/// Block patterns for a composition; consecutive blocks share one entry.
pub fn split_blocks(sp: SignPattern, parts: &[usize]) -> Vec<SignPattern> {
    let mut start = 0;
    parts
        .iter()
        .map(|&len| {
            let block = sp.window(start, start + len);
            start += len;
            block
        })
        .collect()
}

/// Assignments of admissible block pairs summing to `target`, in search order.
fn assignments(blocks: &[SignPattern], target: RootPair, limit: usize) -> Vec<Vec<RootPair>> {
    fn go(
        blocks: &[SignPattern],
        left: RootPair,
        cur: &mut Vec<RootPair>,
        out: &mut Vec<Vec<RootPair>>,
        limit: usize,
    ) {
        if out.len() >= limit {
            return;
        }
        let Some((first, rest)) = blocks.split_first() else {
            if left == RootPair::new(0, 0) {
                out.push(cur.clone());
            }
            return;
        };
        for pair in first.admissible_pairs() {
            let Some(next) = left.checked_sub(pair) else {
                continue;
            };
            let cap: u32 = rest.iter().map(|b| b.degree() as u32).sum();
            if next.real_roots() > cap {
                continue;
            }
            cur.push(pair);
            go(rest, next, cur, out, limit);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    go(blocks, target, &mut Vec::new(), &mut out, limit);
    out
}

/// Witness from base-table blocks glued left to right.
pub fn realize_block_decomposition(
    sp: SignPattern,
    pair: RootPair,
) -> Result<Witness, ConstructError> {
    sp.check_admissible(pair)?;
    let d = sp.degree();
    if !block_precondition(d, pair) {
        return Err(ConstructError::Precondition(format!(
            "min(pos, neg) = {} does not exceed floor((d-4)/3) = {}",
            pair.min(),
            block_bound(d)
        )));
    }
    if d <= BASE_MAX_DEGREE {
        return realize_base(sp, pair).map(|w| w.with_method(Method::BlockDecomposition));
    }
    for parts in compositions(d) {
        let blocks = split_blocks(sp, &parts);
        'assignment: for pairs in assignments(&blocks, pair, 64) {
            let mut acc: Option<Witness> = None;
            for (block, block_pair) in blocks.iter().zip(&pairs) {
                let Ok(w) = realize_base(*block, *block_pair) else {
                    continue 'assignment;
                };
                acc = Some(match acc {
                    None => w,
                    Some(prev) => match concat_middle(&prev, &w) {
                        Ok(glued) => glued,
                        Err(_) => continue 'assignment,
                    },
                });
            }
            if let Some(w) = acc {
                return Ok(w.with_method(Method::BlockDecomposition));
            }
        }
    }
    Err(ConstructError::Exhausted(format!(
        "no block split of {sp} realizes {pair}"
    )))
}
