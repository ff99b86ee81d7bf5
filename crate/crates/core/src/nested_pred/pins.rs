use super::{Flavor, Pred, SetCollection};
use crate::bitvec::PackedRankSelect;
use crate::error::{invalid, Result};
use crate::probe;
use crate::space::SpaceUsage;
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
enum GroupTables {
    /// One dense table of length `n + 1` per group, mapping a universe
    /// position to the rank of its predecessor in the group's last set.
    Dense(Vec<u32>),
    /// The largest set over the universe, plus one bit vector per other
    /// group marking which ranks of the largest set the group-last keeps.
    Packed {
        largest: Option<PackedRankSelect>,
        groups: Vec<PackedRankSelect>,
    },
}

/// Predecessor structure over a nested collection `S_1 ⊆ … ⊆ S_k`.
///
/// Sets are grouped by `⌊log₂|S_i|⌋`. A query first finds the predecessor
/// in the last set of the queried set's group, then maps that rank into
/// the queried set through a per-set table of length at most `2|S_i|`.
///
/// The per-set arrays share one buffer laid out as set offsets (`k + 1`),
/// table offsets (`k + 1`), the concatenated sets and the concatenated
/// tables. Nested sets have nondecreasing sizes, so the groups appear in
/// increasing size class and the slot of class `c` is the number of
/// occupied classes below `c`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PinsIndex {
    lo: u64,
    n: u64,
    k: u32,
    elems_at: u32,
    classes: u64,
    data: Vec<u32>,
    tables: GroupTables,
}

fn size_class(len: usize) -> usize {
    (usize::BITS - 1 - len.leading_zeros()) as usize
}

impl PinsIndex {
    /// Baseline construction over `[1, N]`.
    pub fn build(c: &SetCollection) -> Result<PinsIndex> {
        Self::from_collection(c, Flavor::Baseline)
    }

    /// Compact construction over `[1, N]` with parameter `t1`.
    pub fn build_compact(c: &SetCollection, t1: u32) -> Result<PinsIndex> {
        Self::from_collection(c, Flavor::Compact { t: t1 })
    }

    fn from_collection(c: &SetCollection, flavor: Flavor) -> Result<PinsIndex> {
        let mut sets = Vec::with_capacity(c.sets.len());
        for s in &c.sets {
            if s.iter().any(|&x| x > u32::MAX as u64) {
                return invalid("set element exceeds 32 bits");
            }
            sets.push(s.iter().map(|&x| x as u32).collect::<Vec<u32>>());
        }
        let refs: Vec<&[u32]> = sets.iter().map(|s| s.as_slice()).collect();
        Self::build_range(1, c.universe, &refs, flavor)
    }

    /// Builds over the universe `[lo, hi]` from borrowed sets.
    pub fn build_range(lo: u64, hi: u64, sets: &[&[u32]], flavor: Flavor) -> Result<PinsIndex> {
        if lo == 0 || hi < lo.saturating_sub(1) {
            return invalid(format!("bad universe [{lo}, {hi}]"));
        }
        let n = hi + 1 - lo;
        for (i, s) in sets.iter().enumerate() {
            for w in s.windows(2) {
                if w[0] >= w[1] {
                    return invalid(format!("set {} not strictly increasing at {}", i + 1, w[1]));
                }
            }
            if let Some(&x) = s.iter().find(|&&x| (x as u64) < lo || x as u64 > hi) {
                return invalid(format!("set {} element {x} outside [{lo}, {hi}]", i + 1));
            }
        }
        for i in 1..sets.len() {
            let (a, b) = (sets[i - 1], sets[i]);
            let mut j = 0usize;
            for &x in a {
                while j < b.len() && b[j] < x {
                    j += 1;
                }
                if j == b.len() || b[j] != x {
                    return invalid(format!("nesting violated: set {} element {x} missing from set {}", i, i + 1));
                }
            }
        }

        let k = sets.len();
        let mut classes = 0u64;
        let mut group_last: Vec<u32> = Vec::new();
        for (i, s) in sets.iter().enumerate() {
            if s.is_empty() {
                continue;
            }
            let c = size_class(s.len());
            if classes >> c & 1 == 0 {
                classes |= 1u64 << c;
                group_last.push(i as u32);
            } else {
                *group_last.last_mut().unwrap() = i as u32;
            }
        }
        let slot = |len: usize| (classes & ((1u64 << size_class(len)) - 1)).count_ones() as usize;

        let elem_total: usize = sets.iter().map(|s| s.len()).sum();
        let table_total: usize = sets
            .iter()
            .filter(|s| !s.is_empty())
            .map(|s| sets[group_last[slot(s.len())] as usize].len())
            .sum();
        let elems_at = 2 * (k + 1);
        let mut data = Vec::with_capacity(elems_at + elem_total + table_total);
        let mut acc = 0u32;
        data.push(0);
        for s in sets {
            acc += s.len() as u32;
            data.push(acc);
        }
        let mut acc = 0u32;
        data.push(0);
        for s in sets {
            if !s.is_empty() {
                acc += sets[group_last[slot(s.len())] as usize].len() as u32;
            }
            data.push(acc);
        }
        for s in sets {
            data.extend_from_slice(s);
        }
        for s in sets {
            if !s.is_empty() {
                let g = sets[group_last[slot(s.len())] as usize];
                let mut r = 0u32;
                for &y in g {
                    while (r as usize) < s.len() && s[r as usize] <= y {
                        r += 1;
                    }
                    data.push(r);
                }
            }
        }

        let tables = match flavor {
            Flavor::Baseline => {
                let mut dense = Vec::with_capacity(group_last.len() * (n as usize + 1));
                for &gl in &group_last {
                    let g = sets[gl as usize];
                    let mut r = 0u32;
                    dense.push(0);
                    for y in lo..=hi {
                        while (r as usize) < g.len() && g[r as usize] as u64 <= y {
                            r += 1;
                        }
                        dense.push(r);
                    }
                }
                GroupTables::Dense(dense)
            }
            Flavor::Compact { t } => {
                let t0 = t + 1;
                match group_last.last() {
                    None => GroupTables::Packed { largest: None, groups: Vec::new() },
                    Some(&last) => {
                        let big = sets[last as usize];
                        let pos: Vec<u64> = big.iter().map(|&x| x as u64 - lo + 1).collect();
                        let largest = PackedRankSelect::build(&pos, n, t0)?;
                        let mut groups = Vec::new();
                        for &gl in &group_last[..group_last.len() - 1] {
                            let g = sets[gl as usize];
                            let mut ranks = Vec::with_capacity(g.len());
                            let mut j = 0usize;
                            for &x in g {
                                while big[j] < x {
                                    j += 1;
                                }
                                ranks.push(j as u64 + 1);
                            }
                            groups.push(PackedRankSelect::build(&ranks, big.len() as u64, t0)?);
                        }
                        GroupTables::Packed { largest: Some(largest), groups }
                    }
                }
            }
        };

        Ok(PinsIndex { lo, n, k: k as u32, elems_at: elems_at as u32, classes, data, tables })
    }

    #[inline]
    fn set_off(&self, i: usize) -> u32 {
        self.data[i]
    }

    #[inline]
    fn table_off(&self, i: usize) -> u32 {
        self.data[self.k as usize + 1 + i]
    }

    #[inline]
    fn elem(&self, at: usize) -> u32 {
        self.data[self.elems_at as usize + at]
    }

    #[inline]
    fn table_at(&self, at: usize) -> u32 {
        let tables_at = self.elems_at as usize + self.set_off(self.k as usize) as usize;
        self.data[tables_at + at]
    }

    /// Number of sets `k`.
    pub fn num_sets(&self) -> usize {
        self.k as usize
    }

    /// Universe `[lo, hi]`.
    pub fn universe(&self) -> (u64, u64) {
        (self.lo, self.lo + self.n - 1)
    }

    /// Number of elements of set `i` (0-based).
    pub fn set_len(&self, i: usize) -> u64 {
        (self.set_off(i + 1) - self.set_off(i)) as u64
    }

    /// Largest element of set `i` (0-based), if the set is non-empty.
    #[inline]
    pub fn set_max(&self, i: usize) -> Option<u64> {
        probe::hit(1);
        let (a, b) = (self.set_off(i), self.set_off(i + 1));
        (b > a).then(|| self.elem(b as usize - 1) as u64)
    }

    /// Elements of set `i` (0-based).
    pub fn set(&self, i: usize) -> &[u32] {
        let at = self.elems_at as usize;
        &self.data[at + self.set_off(i) as usize..at + self.set_off(i + 1) as usize]
    }

    /// Predecessor of `x` in set `i` (1-based), validating the arguments.
    pub fn predecessor(&self, i: usize, x: u64) -> crate::Result<Option<Pred>> {
        if i == 0 || i > self.num_sets() {
            return invalid(format!("set index {i} outside [1, {}]", self.num_sets()));
        }
        if x < self.lo || x > self.lo + self.n - 1 {
            return invalid(format!("query {x} outside the universe"));
        }
        Ok(self.pred(i - 1, x))
    }

    /// Predecessor of `x` in set `i` (0-based). Values outside the universe
    /// are clamped.
    #[inline]
    pub fn pred(&self, i: usize, x: u64) -> Option<Pred> {
        if x < self.lo {
            return None;
        }
        let y = (x - self.lo + 1).min(self.n);
        probe::hit(1);
        let (a, b) = (self.set_off(i), self.set_off(i + 1));
        if a == b {
            return None;
        }
        let g = (self.classes & ((1u64 << size_class((b - a) as usize)) - 1)).count_ones() as usize;
        probe::hit(1);
        let rg = match &self.tables {
            GroupTables::Dense(d) => {
                probe::hit(1);
                d[g * (self.n as usize + 1) + y as usize] as u64
            }
            GroupTables::Packed { largest, groups } => {
                let rk = largest.as_ref().map_or(0, |l| l.rank_unchecked(y));
                if g + 1 == self.classes.count_ones() as usize || rk == 0 {
                    rk
                } else {
                    groups[g].rank_unchecked(rk)
                }
            }
        };
        if rg == 0 {
            return None;
        }
        probe::hit(2);
        let q = self.table_at(self.table_off(i) as usize + rg as usize - 1);
        if q == 0 {
            return None;
        }
        Some((q as u64, self.elem(a as usize + q as usize - 1) as u64))
    }
}

impl SpaceUsage for PinsIndex {
    fn words(&self) -> u64 {
        let t = match &self.tables {
            GroupTables::Dense(d) => d.words(),
            GroupTables::Packed { largest, groups } => {
                largest.words() + 3 + groups.iter().map(|g| g.words()).sum::<u64>()
            }
        };
        4 + self.data.words() + t
    }
}
