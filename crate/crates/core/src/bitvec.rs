//! Sparse bit vector with rank and select built from the positions of its
//! one bits.
//!
//! The universe `[1, N]` is cut into top buckets of `W^t` bits. Each
//! non-empty bucket is the root of a packed decomposition tree: a node
//! covering `W^h` bits keeps a 64-bit occupancy mask `B` of its children
//! and a prefix-count array `C` over its non-empty children, and the
//! leaves are single 64-bit words. Empty buckets and empty children are
//! never materialised, so the structure uses `O(tM + N/W^t)` words.
//! `select` answers come from an explicit array of the one positions.
//! A universe of at most `W` bits is a single leaf word held inline.

use crate::error::{invalid, Result};
use crate::probe;
use crate::space::SpaceUsage;
use serde::{Deserialize, Serialize};

/// Bits per machine word.
pub const W: u64 = 64;

/// Default recursion depth.
pub const DEFAULT_T: u32 = 2;

const NONE: u32 = u32::MAX;

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
struct Level {
    occupancy: Vec<u64>,
    first_child: Vec<u32>,
    prefix: Vec<u32>,
}

/// Rank/select over a sparse bit vector of length `N`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PackedRankSelect {
    n: u64,
    t: u32,
    word: u64,
    top_rank: Vec<u32>,
    top_node: Vec<u32>,
    levels: Vec<Level>,
    leaves: Vec<u64>,
    ones: Vec<u32>,
}

fn pow_w(h: u32) -> u64 {
    W.pow(h)
}

/// Mask of bits `0..=b` for `b < 64`.
#[inline]
fn low_bits(b: u64) -> u64 {
    u64::MAX >> (63 - b)
}

impl PackedRankSelect {
    /// Builds the structure from strictly increasing positions in `[1, n]`.
    pub fn build(one_indices: &[u64], n: u64, t: u32) -> Result<PackedRankSelect> {
        if !(1..=10).contains(&t) {
            return invalid(format!("rank/select depth t={t} outside 1..=10"));
        }
        if n > u32::MAX as u64 {
            return invalid("rank/select universe exceeds 2^32 - 1");
        }
        for w in one_indices.windows(2) {
            if w[0] >= w[1] {
                return invalid(format!("indices not strictly increasing at {}", w[1]));
            }
        }
        if let Some(&x) = one_indices.iter().find(|&&x| x == 0 || x > n) {
            return invalid(format!("index {x} outside [1, {n}]"));
        }
        if n <= W {
            let word = one_indices.iter().fold(0u64, |w, &x| w | 1u64 << (x - 1));
            return Ok(PackedRankSelect {
                n,
                t,
                word,
                top_rank: Vec::new(),
                top_node: Vec::new(),
                levels: Vec::new(),
                leaves: Vec::new(),
                ones: Vec::new(),
            });
        }
        let bucket = pow_w(t);
        let buckets = n.div_ceil(bucket).max(1) as usize;
        let mut top_rank = vec![0u32; buckets];
        let mut top_node = vec![NONE; buckets];
        let mut levels = vec![Level::default(); t as usize - 1];
        let mut leaves = Vec::new();
        let pos: Vec<u64> = one_indices.iter().map(|&x| x - 1).collect();

        let mut ranges: Vec<(usize, usize)> = Vec::new();
        let mut i = 0usize;
        let mut seen = 0u32;
        for b in 0..buckets {
            top_rank[b] = seen;
            let lo = i;
            while i < pos.len() && pos[i] / bucket == b as u64 {
                i += 1;
            }
            if i > lo {
                top_node[b] = ranges.len() as u32;
                ranges.push((lo, i));
                seen += (i - lo) as u32;
            }
        }
        for h in (2..=t).rev() {
            let child_span = pow_w(h - 1);
            let lvl = &mut levels[(t - h) as usize];
            let mut next = Vec::new();
            for &(lo, hi) in &ranges {
                let mut mask = 0u64;
                lvl.first_child.push(next.len() as u32);
                lvl.prefix.push(0);
                let mut j = lo;
                while j < hi {
                    let c = (pos[j] / child_span) % W;
                    let start = j;
                    while j < hi && (pos[j] / child_span) % W == c {
                        j += 1;
                    }
                    mask |= 1u64 << c;
                    next.push((start, j));
                    lvl.prefix.push((j - lo) as u32);
                }
                lvl.occupancy.push(mask);
            }
            ranges = next;
        }
        for &(lo, hi) in &ranges {
            let mut word = 0u64;
            for &p in &pos[lo..hi] {
                word |= 1u64 << (p % W);
            }
            leaves.push(word);
        }
        Ok(PackedRankSelect {
            n,
            t,
            word: 0,
            top_rank,
            top_node,
            levels,
            leaves,
            ones: one_indices.iter().map(|&x| x as u32).collect(),
        })
    }

    /// Universe size `N`.
    pub fn len(&self) -> u64 {
        self.n
    }

    /// True when the universe is empty.
    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    /// Number of one bits `M`.
    pub fn ones(&self) -> u64 {
        if self.n <= W {
            self.word.count_ones() as u64
        } else {
            self.ones.len() as u64
        }
    }

    /// Recursion depth `t`.
    pub fn depth(&self) -> u32 {
        self.t
    }

    /// Number of internal decomposition nodes.
    pub fn internal_nodes(&self) -> usize {
        self.levels.iter().map(|l| l.occupancy.len()).sum()
    }

    /// Number of ones at positions `<= i`, for `i` in `[0, N]`.
    pub fn rank(&self, i: u64) -> Result<u64> {
        if i > self.n {
            return invalid(format!("rank position {i} exceeds N={}", self.n));
        }
        Ok(self.rank_unchecked(i))
    }

    /// [`rank`](Self::rank) without the bounds check.
    #[inline]
    pub fn rank_unchecked(&self, i: u64) -> u64 {
        if i == 0 {
            return 0;
        }
        let x = i - 1;
        if self.n <= W {
            probe::hit(1);
            return (self.word & low_bits(x)).count_ones() as u64;
        }
        let b = (x / pow_w(self.t)) as usize;
        probe::hit(1);
        let mut r = self.top_rank[b] as u64;
        let mut node = self.top_node[b];
        if node == NONE {
            return r;
        }
        for (d, lvl) in self.levels.iter().enumerate() {
            let h = self.t - d as u32;
            let c = (x / pow_w(h - 1)) % W;
            probe::hit(2);
            let mask = lvl.occupancy[node as usize];
            let below = (mask & ((1u64 << c) - 1)).count_ones() as usize;
            let base = lvl.first_child[node as usize] as usize;
            r += lvl.prefix[base + node as usize + below] as u64;
            if mask >> c & 1 == 0 {
                return r;
            }
            node = (base + below) as u32;
        }
        probe::hit(1);
        let word = self.leaves[node as usize];
        r + (word & low_bits(x % W)).count_ones() as u64
    }

    /// Position of the `k`-th one, for `k` in `[1, M]`.
    pub fn select(&self, k: u64) -> Result<u64> {
        if k == 0 || k > self.ones() {
            return invalid(format!("select rank {k} outside [1, {}]", self.ones()));
        }
        Ok(self.select_unchecked(k))
    }

    /// [`select`](Self::select) without the bounds check.
    #[inline]
    pub fn select_unchecked(&self, k: u64) -> u64 {
        probe::hit(1);
        if self.n <= W {
            let mut w = self.word;
            for _ in 1..k {
                w &= w - 1;
            }
            return w.trailing_zeros() as u64 + 1;
        }
        self.ones[k as usize - 1] as u64
    }

    /// Largest one position `<= x` together with its rank.
    #[inline]
    pub fn predecessor(&self, x: u64) -> Option<(u64, u64)> {
        let r = self.rank_unchecked(x.min(self.n));
        if r == 0 {
            None
        } else {
            Some((r, self.select_unchecked(r)))
        }
    }
}

impl SpaceUsage for PackedRankSelect {
    fn words(&self) -> u64 {
        let lv: u64 = self
            .levels
            .iter()
            .map(|l| l.occupancy.words() + l.first_child.words() + l.prefix.words())
            .sum();
        3 + self.top_rank.words() + self.top_node.words() + lv + self.leaves.words() + self.ones.words()
    }
}
