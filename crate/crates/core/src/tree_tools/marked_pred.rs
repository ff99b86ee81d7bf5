use super::{check_parent_array, small_set_predecessor, small_set_successor};
use crate::error::{invalid, Result};
use crate::probe;
use crate::space::SpaceUsage;
use serde::{Deserialize, Serialize};

const NO_MACRO: u32 = u32::MAX;
const MACRO_FLAG: u32 = 1 << 31;

/// Which marked ancestor a query asks for.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Direction {
    /// Deepest marked ancestor with weight `<= x`.
    Pred,
    /// Shallowest marked ancestor with weight `>= x`.
    Succ,
}

/// Weighted predecessor and successor among the marked ancestors of a node
/// (the node itself included).
///
/// The tree is cut into micro trees of at most `min(log2 n, 64)` nodes,
/// with the cut nodes acting as macro nodes. A macro node stores the sorted
/// weights of all its marked ancestors. A micro tree stores the sorted
/// weights of its own nodes, and every node in it keeps a bitmask over that
/// list flagging its marked ancestors inside the micro tree.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MarkedPredIndex {
    slot: Vec<u32>,
    mask: Vec<u64>,
    macro_off: Vec<u32>,
    macro_w: Vec<u32>,
    macro_node: Vec<u32>,
    micro_off: Vec<u32>,
    micro_w: Vec<u32>,
    micro_node: Vec<u32>,
    micro_up: Vec<u32>,
}

/// Largest number of marked ancestors a node may have for a tree of `n`
/// nodes.
pub fn mark_density_limit(n: usize) -> usize {
    8 * (usize::BITS - n.leading_zeros()) as usize + 8
}

impl MarkedPredIndex {
    /// Builds the index. Weights must strictly increase from parent to
    /// child; every root path may hold at most [`mark_density_limit`]
    /// marked nodes.
    pub fn build(parent: &[u32], weight: &[u32], marked: &[bool]) -> Result<MarkedPredIndex> {
        check_parent_array(parent)?;
        let n = parent.len();
        if weight.len() != n || marked.len() != n {
            return invalid("weight and mark arrays must match the tree size");
        }
        let mut on_path = vec![0u32; n];
        on_path[0] = marked[0] as u32;
        for v in 1..n {
            let p = parent[v] as usize;
            if weight[v] <= weight[p] {
                return invalid(format!("weight of node {v} does not exceed its parent's"));
            }
            on_path[v] = on_path[p] + marked[v] as u32;
        }
        let limit = mark_density_limit(n);
        if let Some(v) = on_path.iter().position(|&c| c as usize > limit) {
            return invalid(format!("node {v} has more than {limit} marked ancestors"));
        }

        let b = ((usize::BITS - 1 - n.leading_zeros()) as usize).clamp(1, 64);
        let mut open = vec![1u32; n];
        let mut child_sum = vec![0u32; n];
        let mut is_macro = vec![false; n];
        for v in (0..n).rev() {
            open[v] = 1 + child_sum[v];
            if open[v] as usize > b {
                is_macro[v] = true;
                open[v] = 0;
            }
            if v > 0 {
                child_sum[parent[v] as usize] += open[v];
            }
        }

        let mut slot = vec![0u32; n];
        let mut macro_off = vec![0u32];
        let mut macro_w = Vec::new();
        let mut macro_node = Vec::new();
        let mut path: Vec<u32> = Vec::new();
        for v in 0..n {
            while let Some(&top) = path.last() {
                if v != 0 && top == parent[v] {
                    break;
                }
                path.pop();
            }
            path.push(v as u32);
            if is_macro[v] {
                slot[v] = MACRO_FLAG | (macro_off.len() as u32 - 1);
                for &a in &path {
                    if marked[a as usize] {
                        macro_w.push(weight[a as usize]);
                        macro_node.push(a);
                    }
                }
                macro_off.push(macro_w.len() as u32);
            }
        }

        let mut micro_root = vec![u32::MAX; n];
        let mut members: Vec<Vec<u32>> = Vec::new();
        let mut micro_up = Vec::new();
        for v in 0..n {
            if is_macro[v] {
                continue;
            }
            let p = parent[v] as usize;
            if v == 0 || is_macro[p] {
                micro_root[v] = members.len() as u32;
                members.push(vec![v as u32]);
                micro_up.push(if v == 0 { NO_MACRO } else { slot[p] & !MACRO_FLAG });
            } else {
                micro_root[v] = micro_root[p];
                members[micro_root[v] as usize].push(v as u32);
            }
            slot[v] = micro_root[v];
        }

        let mut mask = vec![0u64; n];
        let mut micro_off = vec![0u32];
        let mut micro_w = Vec::new();
        let mut micro_node = Vec::new();
        let mut pos = vec![0u32; n];
        for mem in &members {
            let mut order = mem.clone();
            order.sort_by_key(|&v| weight[v as usize]);
            for (i, &v) in order.iter().enumerate() {
                pos[v as usize] = i as u32;
                micro_w.push(weight[v as usize]);
                micro_node.push(v);
            }
            micro_off.push(micro_w.len() as u32);
            for &v in mem {
                let own = if marked[v as usize] { 1u64 << pos[v as usize] } else { 0 };
                let up = if v != 0
                    && micro_root[v as usize] == micro_root[parent[v as usize] as usize]
                    && !is_macro[parent[v as usize] as usize]
                {
                    mask[parent[v as usize] as usize]
                } else {
                    0
                };
                mask[v as usize] = own | up;
            }
        }

        Ok(MarkedPredIndex { slot, mask, macro_off, macro_w, macro_node, micro_off, micro_w, micro_node, micro_up })
    }

    fn macro_query(&self, m: usize, x: u64, dir: Direction) -> Option<u32> {
        probe::hit(1);
        let lo = self.macro_off[m] as usize;
        let list = &self.macro_w[lo..self.macro_off[m + 1] as usize];
        let hit = match dir {
            Direction::Pred => small_set_predecessor(list, x),
            Direction::Succ => small_set_successor(list, x),
        };
        hit.map(|(r, _)| {
            probe::hit(1);
            self.macro_node[lo + r as usize - 1]
        })
    }

    fn micro_query(&self, u: usize, v: usize, x: u64, dir: Direction) -> Option<u32> {
        probe::hit(2);
        let lo = self.micro_off[u] as usize;
        let list = &self.micro_w[lo..self.micro_off[u + 1] as usize];
        let bits = self.mask[v];
        let chosen = match dir {
            Direction::Pred => {
                let r = small_set_predecessor(list, x).map_or(0, |(r, _)| r);
                let keep = if r >= 64 { u64::MAX } else { (1u64 << r) - 1 };
                let m = bits & keep;
                (m != 0).then(|| 63 - m.leading_zeros())
            }
            Direction::Succ => {
                let r = small_set_successor(list, x).map_or(list.len() as u64 + 1, |(r, _)| r);
                let m = if r > 64 { 0 } else { bits & (u64::MAX << (r - 1)) };
                (m != 0).then(|| m.trailing_zeros())
            }
        };
        chosen.map(|i| {
            probe::hit(1);
            self.micro_node[lo + i as usize]
        })
    }

    /// Marked ancestor of `v` (inclusive) answering a predecessor or
    /// successor query for weight `x`.
    pub fn query(&self, v: u32, x: u64, dir: Direction) -> Option<u32> {
        probe::hit(1);
        let s = self.slot[v as usize];
        if s & MACRO_FLAG != 0 {
            return self.macro_query((s & !MACRO_FLAG) as usize, x, dir);
        }
        probe::hit(1);
        let up = self.micro_up[s as usize];
        match dir {
            Direction::Pred => self
                .micro_query(s as usize, v as usize, x, dir)
                .or_else(|| (up != NO_MACRO).then(|| self.macro_query(up as usize, x, dir)).flatten()),
            Direction::Succ => (up != NO_MACRO)
                .then(|| self.macro_query(up as usize, x, dir))
                .flatten()
                .or_else(|| self.micro_query(s as usize, v as usize, x, dir)),
        }
    }

    /// Deepest marked ancestor of `v` with weight `<= x`.
    pub fn pred(&self, v: u32, x: u64) -> Option<u32> {
        self.query(v, x, Direction::Pred)
    }

    /// Shallowest marked ancestor of `v` with weight `>= x`.
    pub fn succ(&self, v: u32, x: u64) -> Option<u32> {
        self.query(v, x, Direction::Succ)
    }

    /// Number of macro nodes.
    pub fn num_macro(&self) -> usize {
        self.macro_off.len() - 1
    }

    /// Number of micro trees.
    pub fn num_micro(&self) -> usize {
        self.micro_up.len()
    }
}

impl SpaceUsage for MarkedPredIndex {
    fn words(&self) -> u64 {
        self.slot.words()
            + self.mask.words()
            + self.macro_off.words()
            + self.macro_w.words()
            + self.macro_node.words()
            + self.micro_off.words()
            + self.micro_w.words()
            + self.micro_node.words()
            + self.micro_up.words()
    }
}
