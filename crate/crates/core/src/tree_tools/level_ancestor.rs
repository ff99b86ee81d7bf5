use super::{check_parent_array, tree_depths};
use crate::error::{invalid, Result};
use crate::probe;
use crate::space::SpaceUsage;
use serde::{Deserialize, Serialize};

/// Level ancestor queries by ladders and jump pointers.
///
/// The tree is split into longest paths; each path of `k` nodes is stored
/// as a ladder extended by up to `k` ancestors above its head. Every leaf
/// keeps pointers to its ancestors at distances `1, 2, 4, …`. A query
/// moves to a leaf below the node, takes the largest jump that does not
/// overshoot, and finishes inside the ladder of the node it lands on.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LevelAncestorIndex {
    depth: Vec<u32>,
    leaf_below: Vec<u32>,
    ladder_pos: Vec<u32>,
    ladders: Vec<u32>,
    jump_off: Vec<u32>,
    jumps: Vec<u32>,
}

impl LevelAncestorIndex {
    /// Builds the index for a preorder parent array.
    pub fn build(parent: &[u32]) -> Result<LevelAncestorIndex> {
        check_parent_array(parent)?;
        let n = parent.len();
        let depth = tree_depths(parent);
        let mut height = vec![0u32; n];
        let mut long_child = vec![u32::MAX; n];
        let mut leaf_below: Vec<u32> = (0..n as u32).collect();
        for v in (1..n).rev() {
            let p = parent[v] as usize;
            if long_child[p] == u32::MAX || height[v] + 1 > height[p] {
                height[p] = height[v] + 1;
                long_child[p] = v as u32;
                leaf_below[p] = leaf_below[v];
            }
        }
        let mut ladder_pos = vec![0u32; n];
        let mut ladders = Vec::with_capacity(2 * n);
        for head in 0..n {
            if head != 0 && long_child[parent[head] as usize] == head as u32 {
                continue;
            }
            let mut path = Vec::new();
            let mut v = head as u32;
            loop {
                path.push(v);
                if long_child[v as usize] == u32::MAX {
                    break;
                }
                v = long_child[v as usize];
            }
            let mut up = Vec::new();
            let mut a = head as u32;
            while up.len() < path.len() && a != 0 {
                a = parent[a as usize];
                up.push(a);
            }
            up.reverse();
            ladders.extend_from_slice(&up);
            for &x in &path {
                ladder_pos[x as usize] = ladders.len() as u32;
                ladders.push(x);
            }
        }
        let mut jump_off = vec![0u32; n + 1];
        let mut jumps = Vec::new();
        let mut stack: Vec<u32> = Vec::new();
        for v in 0..n {
            while let Some(&top) = stack.last() {
                if v != 0 && top == parent[v] {
                    break;
                }
                stack.pop();
            }
            stack.push(v as u32);
            if long_child[v] == u32::MAX {
                let d = depth[v] as usize;
                let mut step = 1usize;
                while step <= d {
                    jumps.push(stack[d - step]);
                    step *= 2;
                }
            }
            jump_off[v + 1] = jumps.len() as u32;
        }
        Ok(LevelAncestorIndex { depth, leaf_below, ladder_pos, ladders, jump_off, jumps })
    }

    /// Tree depth of `v`.
    #[inline]
    pub fn depth(&self, v: u32) -> u32 {
        self.depth[v as usize]
    }

    /// Number of nodes.
    pub fn len(&self) -> usize {
        self.depth.len()
    }

    /// True for an empty index.
    pub fn is_empty(&self) -> bool {
        self.depth.is_empty()
    }

    /// Ancestor of `v` at tree depth `d`, validating `d`.
    pub fn level_ancestor(&self, v: u32, d: u32) -> Result<u32> {
        if v as usize >= self.depth.len() || d > self.depth[v as usize] {
            return invalid(format!("depth {d} exceeds the depth of node {v}"));
        }
        Ok(self.query(v, d))
    }

    /// Ancestor of `v` at tree depth `d <= depth(v)`.
    #[inline]
    pub fn query(&self, v: u32, d: u32) -> u32 {
        probe::hit(1);
        if self.depth[v as usize] == d {
            return v;
        }
        probe::hit(2);
        let u = self.leaf_below[v as usize];
        let dist = self.depth[u as usize] - d;
        let i = 31 - dist.leading_zeros();
        probe::hit(2);
        let x = self.jumps[self.jump_off[u as usize] as usize + i as usize];
        let rest = self.depth[x as usize] - d;
        probe::hit(2);
        self.ladders[(self.ladder_pos[x as usize] - rest) as usize]
    }
}

impl SpaceUsage for LevelAncestorIndex {
    fn words(&self) -> u64 {
        self.depth.words()
            + self.leaf_below.words()
            + self.ladder_pos.words()
            + self.ladders.words()
            + self.jump_off.words()
            + self.jumps.words()
    }
}
