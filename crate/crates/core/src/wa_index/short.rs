use crate::probe;
use crate::space::SpaceUsage;
use crate::suffix_tree::{Locus, NodeId, SuffixTree};
use serde::{Deserialize, Serialize};

use super::blocks::edge_locus;

/// Loci of substrings of length at most `max_len`: for every text
/// position, the shallowest node at string depth at least `max_len` on
/// the root path of its leaf (the leaf itself when it is shallower).
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ShortIndex {
    max_len: u32,
    below: Vec<NodeId>,
}

impl ShortIndex {
    pub fn build(st: &SuffixTree, max_len: u32) -> ShortIndex {
        let n = st.num_nodes();
        let mut entry = vec![0 as NodeId; n];
        for v in 1..n as NodeId {
            let p = st.parent(v);
            entry[v as usize] = if p != 0 && st.string_depth(p) >= max_len { entry[p as usize] } else { v };
        }
        let positions = st.docs().total_len();
        let below = (0..positions).map(|g| entry[st.leaf_at_position(g) as usize]).collect();
        ShortIndex { max_len, below }
    }

    /// Locus of `w[i..i+l-1]` for `l <= max_len`.
    pub fn locate(&self, st: &SuffixTree, i: usize, l: u32) -> Locus {
        debug_assert!(l <= self.max_len);
        probe::hit(1);
        let mut y = self.below[i - 1];
        loop {
            probe::hit(2);
            let p = st.parent(y);
            if st.string_depth(p) < l {
                break;
            }
            y = p;
        }
        edge_locus(st, y, l)
    }
}

impl SpaceUsage for ShortIndex {
    fn words(&self) -> u64 {
        1 + self.below.words()
    }
}
