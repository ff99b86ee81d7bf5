use crate::suffix_tree::{NodeId, SuffixTree, NONE};
use serde::{Deserialize, Serialize};

/// Smallest string depth counted as long for documents of nominal length
/// `ell`, that is `ceil(3 * ell / 4)`.
pub fn long_threshold(ell: usize) -> u32 {
    (3 * ell).div_ceil(4) as u32
}

/// Per-node annotations of a generalised suffix tree for one nominal
/// document length.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DecoratedTree {
    ell: usize,
    threshold: u32,
    level: Vec<u8>,
    distinct: Vec<bool>,
    active: Vec<bool>,
    min_active: Vec<u32>,
}

/// `floor(log2(count))` for a positive leaf count.
pub fn level_of_count(count: u32) -> u8 {
    (31 - count.max(1).leading_zeros()) as u8
}

/// Computes levels, the distinct-document flags, activity, and for every
/// leaf the smallest string depth at which its root path is active.
pub fn decorate(t: &SuffixTree, ell: usize) -> DecoratedTree {
    let n = t.num_nodes();
    let threshold = long_threshold(ell);
    let level: Vec<u8> = (0..n as NodeId).map(|v| level_of_count(t.leaf_count(v))).collect();

    // Two leaves of one document meet at the lowest common ancestor of
    // some pair that is consecutive among that document's leaves.
    let mut repeated = vec![false; n];
    let mut last = vec![NONE; t.docs().len()];
    let mut stack: Vec<NodeId> = Vec::new();
    for v in 0..n as NodeId {
        while let Some(&top) = stack.last() {
            if v != 0 && top == t.parent(v) {
                break;
            }
            stack.pop();
        }
        stack.push(v);
        if t.is_leaf(v) {
            let doc = t.leaf_origin(v).0;
            let prev = last[doc];
            if prev != NONE {
                let k = stack.partition_point(|&a| a <= prev);
                repeated[stack[k - 1] as usize] = true;
            }
            last[doc] = v;
        }
    }
    for v in (1..n).rev() {
        if repeated[v] {
            repeated[t.parent(v as NodeId) as usize] = true;
        }
    }
    let distinct: Vec<bool> = repeated.iter().map(|&r| !r).collect();
    let active: Vec<bool> =
        (0..n).map(|v| distinct[v] && t.string_depth(v as NodeId) >= threshold).collect();

    let mut top = vec![NONE; n];
    let mut min_active = vec![u32::MAX; n];
    for v in 1..n {
        if !active[v] {
            continue;
        }
        let p = t.parent(v as NodeId);
        top[v] = if active[p as usize] { top[p as usize] } else { v as NodeId };
        if t.is_leaf(v as NodeId) {
            let tp = t.parent(top[v]);
            min_active[v] = threshold.max(t.string_depth(tp) + 1);
        }
    }
    DecoratedTree { ell, threshold, level, distinct, active, min_active }
}

impl DecoratedTree {
    /// Nominal document length.
    pub fn ell(&self) -> usize {
        self.ell
    }

    /// Smallest long string depth.
    pub fn threshold(&self) -> u32 {
        self.threshold
    }

    /// Level of node `v`.
    #[inline]
    pub fn level(&self, v: NodeId) -> u8 {
        self.level[v as usize]
    }

    /// True if no two leaves below `v` come from the same document.
    pub fn is_distinct(&self, v: NodeId) -> bool {
        self.distinct[v as usize]
    }

    /// True if `v` is active.
    #[inline]
    pub fn is_active(&self, v: NodeId) -> bool {
        self.active[v as usize]
    }

    /// For a leaf, the smallest active string depth on its root path, or
    /// `u32::MAX` when the leaf itself is not active.
    #[inline]
    pub fn min_active_depth(&self, leaf: NodeId) -> u32 {
        self.min_active[leaf as usize]
    }

    pub(crate) fn into_min_active(self) -> Vec<u32> {
        self.min_active
    }
}
