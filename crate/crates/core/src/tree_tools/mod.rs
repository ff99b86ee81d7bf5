//! Generic rooted-tree machinery.
//!
//! Trees are given by a parent array over a preorder numbering: node `0`
//! is the root and every subtree occupies a contiguous id range.

mod level_ancestor;
mod marked_pred;

pub use level_ancestor::LevelAncestorIndex;
pub use marked_pred::{Direction, MarkedPredIndex};

use crate::error::{invalid, Result};
use crate::probe;

/// Predecessor of `x` in a small sorted list, as `(1-based rank, value)`.
///
/// This stands in for a constant-time predecessor structure on sets of
/// polylogarithmic size; each call is charged as a single probe.
#[inline]
pub fn small_set_predecessor(set: &[u32], x: u64) -> Option<(u64, u64)> {
    probe::hit(1);
    let r = set.partition_point(|&v| v as u64 <= x);
    (r > 0).then(|| (r as u64, set[r - 1] as u64))
}

/// Successor of `x` (smallest element `>= x`) in a small sorted list, as
/// `(1-based rank, value)`.
#[inline]
pub fn small_set_successor(set: &[u32], x: u64) -> Option<(u64, u64)> {
    probe::hit(1);
    let r = set.partition_point(|&v| (v as u64) < x);
    (r < set.len()).then(|| (r as u64 + 1, set[r] as u64))
}

/// Checks that `parent` describes a preorder-numbered tree rooted at `0`.
pub fn check_parent_array(parent: &[u32]) -> Result<()> {
    if parent.is_empty() {
        return invalid("empty tree");
    }
    let mut path = vec![0u32];
    for (v, &p) in parent.iter().enumerate().skip(1) {
        while path.last().is_some_and(|&top| top != p) {
            path.pop();
        }
        if path.is_empty() {
            return invalid(format!("node {v} breaks preorder numbering"));
        }
        path.push(v as u32);
    }
    Ok(())
}

/// Random preorder tree with `n` nodes; each node hangs below a random
/// node of the current rightmost path.
#[cfg(test)]
pub(crate) fn random_preorder_tree(rng: &mut impl rand::Rng, n: usize) -> Vec<u32> {
    let mut parent = vec![0u32; n];
    let mut path = vec![0u32];
    for (v, slot) in parent.iter_mut().enumerate().skip(1) {
        let keep = if rng.gen_bool(0.6) { path.len() } else { rng.gen_range(1..=path.len()) };
        path.truncate(keep);
        *slot = *path.last().unwrap();
        path.push(v as u32);
    }
    parent
}

/// Tree depth (edge count from the root) of every node.
pub fn tree_depths(parent: &[u32]) -> Vec<u32> {
    let mut d = vec![0u32; parent.len()];
    for v in 1..parent.len() {
        d[v] = d[parent[v] as usize] + 1;
    }
    d
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::nested_pred::naive_predecessor;
    use proptest::prelude::*;

    #[test]
    fn parent_array_validation() {
        assert!(check_parent_array(&[0, 0, 1, 0, 3]).is_ok());
        assert!(check_parent_array(&[0, 0, 1, 1, 2]).is_err());
        assert!(check_parent_array(&[0, 1]).is_err());
        assert!(check_parent_array(&[]).is_err());
    }

    #[test]
    fn small_set_examples() {
        assert_eq!(small_set_predecessor(&[2, 5, 9], 6), Some((2, 5)));
        assert_eq!(small_set_predecessor(&[2, 5, 9], 1), None);
        assert_eq!(small_set_successor(&[2, 5, 9], 6), Some((3, 9)));
        assert_eq!(small_set_successor(&[2, 5, 9], 10), None);
    }

    proptest! {
        #[test]
        fn small_set_matches_naive(mut s in proptest::collection::vec(0u32..200, 0..40), x in 0u64..220) {
            s.sort_unstable();
            s.dedup();
            let wide: Vec<u64> = s.iter().map(|&v| v as u64).collect();
            prop_assert_eq!(small_set_predecessor(&s, x), naive_predecessor(&wide, x));
        }
    }
}
