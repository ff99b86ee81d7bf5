use super::{Flavor, PinsIndex, Pred, SetCollection};
use crate::error::{invalid, Result};
use crate::probe;
use crate::space::SpaceUsage;
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
struct Handle {
    pins: u32,
    local: u32,
    below: u32,
}

/// Predecessor structure over a shrinking nested collection.
///
/// The padded universe `[0, P)` is halved recursively. At a node covering
/// `[L, H]` with midpoint `M`, every set whose lower bound lies in the left
/// half donates its elements from `(M, H]` to one nested-set instance
/// attached to that node, and the recursion continues with the left half
/// for those sets and the right half for the others. Each set keeps a
/// guide word whose bit `d` says it donated elements at depth `d`; the
/// top byte of the same word holds the depth at which its recursion ends.
/// `meta` holds the lower bounds (`k`) followed by the handle offsets
/// (`k + 1`).
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PisnsIndex {
    n: u64,
    log_p: u32,
    meta: Vec<u32>,
    guide: Vec<u64>,
    handles: Vec<Handle>,
    pins: Vec<PinsIndex>,
}

const TERMINAL_SHIFT: u32 = 56;
const GUIDE_MASK: u64 = (1u64 << TERMINAL_SHIFT) - 1;

struct Builder<'a> {
    sets: &'a [&'a [u32]],
    lower0: Vec<u64>,
    ends: Vec<u32>,
    guide: Vec<u64>,
    terminal: Vec<u8>,
    handles: Vec<Vec<Handle>>,
    pins: Vec<PinsIndex>,
    flavor: Flavor,
}

impl<'a> Builder<'a> {
    /// Last index in `[a, b)` whose lower bound is `<= mid`, searching from
    /// both ends at once; `None` when there is no such index.
    fn boundary(&self, a: usize, b: usize, mid: u64) -> Option<usize> {
        let ok = |i: usize| self.lower0[i] <= mid;
        if !ok(a) {
            return None;
        }
        if ok(b - 1) {
            return Some(b - 1);
        }
        let (mut lo, mut hi) = (a, b - 1);
        let mut step = 1usize;
        loop {
            let l = a + step;
            if l >= hi {
                break;
            }
            if !ok(l) {
                hi = l;
                break;
            }
            lo = l;
            let r = (b - 1).saturating_sub(step);
            if r <= lo {
                break;
            }
            if ok(r) {
                lo = r;
                break;
            }
            hi = r;
            step *= 2;
        }
        while hi - lo > 1 {
            let m = lo + (hi - lo) / 2;
            if ok(m) {
                lo = m;
            } else {
                hi = m;
            }
        }
        Some(lo)
    }

    fn attach(&mut self, lo0: u64, hi0: u64, depth: u32, members: &[(usize, u32, u32)]) -> Result<()> {
        let parts: Vec<&[u32]> = members
            .iter()
            .map(|&(i, s, e)| &self.sets[i][s as usize..e as usize])
            .collect();
        let pins = match self.flavor {
            Flavor::Baseline => PinsIndex::build_range(lo0 + 1, hi0 + 1, &parts, Flavor::Baseline)?,
            Flavor::Compact { t } => PinsIndex::build_range(lo0 + 1, hi0 + 1, &parts, Flavor::Compact { t: t + 1 })?,
        };
        let id = self.pins.len() as u32;
        self.pins.push(pins);
        for (local, &(i, s, e)) in members.iter().enumerate() {
            if e > s {
                self.guide[i] |= 1u64 << depth;
                self.handles[i].push(Handle { pins: id, local: local as u32, below: s });
            }
        }
        Ok(())
    }

    fn recurse(&mut self, lo0: u64, hi0: u64, depth: u32, a: usize, b: usize) -> Result<()> {
        if a >= b {
            return Ok(());
        }
        if lo0 == hi0 || b - a == 1 {
            let members: Vec<(usize, u32, u32)> = (a..b).map(|i| (i, 0, self.ends[i])).collect();
            for i in a..b {
                self.terminal[i] = depth as u8;
            }
            if members.iter().any(|&(_, s, e)| e > s) {
                self.attach(lo0, hi0, depth, &members)?;
            }
            return Ok(());
        }
        let mid = lo0 + (hi0 - lo0) / 2;
        let kp = self.boundary(a, b, mid);
        if let Some(kp) = kp {
            let mut members = Vec::new();
            let mut i = kp as isize;
            while i >= a as isize {
                let iu = i as usize;
                let set = self.sets[iu];
                let end = self.ends[iu];
                let mut s = end;
                while s > 0 && set[s as usize - 1] as u64 - 1 > mid {
                    s -= 1;
                }
                if s == end {
                    break;
                }
                members.push((iu, s, end));
                self.ends[iu] = s;
                i -= 1;
            }
            if !members.is_empty() {
                members.reverse();
                self.attach(mid + 1, hi0, depth, &members)?;
            }
            self.recurse(lo0, mid, depth + 1, a, kp + 1)?;
            self.recurse(mid + 1, hi0, depth + 1, kp + 1, b)
        } else {
            self.recurse(mid + 1, hi0, depth + 1, a, b)
        }
    }
}

impl PisnsIndex {
    /// Builds the structure; `compact` selects packed tables with depth `t2`.
    pub fn build(c: &SetCollection, compact: bool, t2: u32) -> Result<PisnsIndex> {
        let mut owned = Vec::with_capacity(c.sets.len());
        for s in &c.sets {
            if s.iter().any(|&x| x > u32::MAX as u64) {
                return invalid("set element exceeds 32 bits");
            }
            owned.push(s.iter().map(|&x| x as u32).collect::<Vec<u32>>());
        }
        let refs: Vec<&[u32]> = owned.iter().map(|s| s.as_slice()).collect();
        let flavor = if compact { Flavor::Compact { t: t2 } } else { Flavor::Baseline };
        Self::build_sets(c.universe, &refs, &c.lower, flavor)
    }

    /// Builds from borrowed sets over `[1, n]` with lower bounds `lower`.
    pub fn build_sets(n: u64, sets: &[&[u32]], lower: &[u64], flavor: Flavor) -> Result<PisnsIndex> {
        if sets.len() != lower.len() {
            return invalid("one lower bound per set is required");
        }
        if n == 0 || n > u32::MAX as u64 {
            return invalid(format!("universe size {n} unsupported"));
        }
        for (i, s) in sets.iter().enumerate() {
            if s.is_empty() {
                return invalid(format!("set {} is empty", i + 1));
            }
            if lower[i] == 0 || (i > 0 && lower[i] < lower[i - 1]) {
                return invalid(format!("lower bound of set {} is zero or decreasing", i + 1));
            }
            for w in s.windows(2) {
                if w[0] >= w[1] {
                    return invalid(format!("set {} not strictly increasing at {}", i + 1, w[1]));
                }
            }
            if (s[0] as u64) < lower[i] || *s.last().unwrap() as u64 > n {
                return invalid(format!("set {} leaves [{}, {n}]", i + 1, lower[i]));
            }
        }
        for i in 1..sets.len() {
            let next = sets[i];
            for &x in sets[i - 1].iter().filter(|&&x| x as u64 >= lower[i]) {
                if next.binary_search(&x).is_err() {
                    return invalid(format!("nesting violated: set {} element {x} missing from set {}", i, i + 1));
                }
            }
        }
        let log_p = 64 - (n - 1).leading_zeros().min(63);
        let log_p = if n == 1 { 0 } else { log_p };
        let k = sets.len();
        let mut b = Builder {
            sets,
            lower0: lower.iter().map(|&m| m - 1).collect(),
            ends: sets.iter().map(|s| s.len() as u32).collect(),
            guide: vec![0; k],
            terminal: vec![0; k],
            handles: vec![Vec::new(); k],
            pins: Vec::new(),
            flavor,
        };
        b.recurse(0, (1u64 << log_p) - 1, 0, 0, k)?;
        let mut meta = Vec::with_capacity(2 * k + 1);
        meta.extend(lower.iter().map(|&m| m as u32));
        meta.push(0u32);
        let mut handles = Vec::with_capacity(b.handles.iter().map(|h| h.len()).sum());
        for h in &b.handles {
            handles.extend_from_slice(h);
            meta.push(handles.len() as u32);
        }
        let guide = b.guide.iter().zip(&b.terminal).map(|(&g, &t)| g | (t as u64) << TERMINAL_SHIFT).collect();
        let mut pins = b.pins;
        pins.shrink_to_fit();
        Ok(PisnsIndex { n, log_p, meta, guide, handles, pins })
    }

    /// Number of sets.
    pub fn num_sets(&self) -> usize {
        self.guide.len()
    }

    /// Guide word of set `i` (0-based): bit `d` is set iff the set has
    /// elements stored at recursion depth `d`.
    pub fn guide(&self, i: usize) -> u64 {
        self.guide[i] & GUIDE_MASK
    }

    /// Number of nested-set subproblems.
    pub fn num_subproblems(&self) -> usize {
        self.pins.len()
    }

    /// Total number of elements stored across all subproblems.
    pub fn stored_elements(&self) -> u64 {
        self.pins
            .iter()
            .map(|p| (0..p.num_sets()).map(|i| p.set_len(i)).sum::<u64>())
            .sum()
    }

    /// Universe and depth of every subproblem, for layout checks.
    pub fn subproblem_ranges(&self) -> Vec<(u64, u64)> {
        self.pins.iter().map(|p| p.universe()).collect()
    }

    /// Predecessor of `x` in set `i` (1-based), validating the set index.
    pub fn predecessor(&self, i: usize, x: u64) -> Result<Option<Pred>> {
        if i == 0 || i > self.num_sets() {
            return invalid(format!("set index {i} outside [1, {}]", self.num_sets()));
        }
        Ok(self.pred(i - 1, x))
    }

    #[inline]
    fn handle(&self, i: usize, d: u32) -> Handle {
        probe::hit(1);
        let below = self.guide[i] & ((1u64 << d) - 1);
        self.handles[self.meta[self.guide.len() + i] as usize + below.count_ones() as usize]
    }

    /// Predecessor of `x` in set `i` (0-based).
    #[inline]
    pub fn pred(&self, i: usize, x: u64) -> Option<Pred> {
        probe::hit(2);
        let m = self.meta[i] as u64;
        if x < m {
            return None;
        }
        let x = x.min(self.n);
        let word = self.guide[i];
        let term = (word >> TERMINAL_SHIFT) as u32;
        let diff = (x - 1) ^ (m - 1);
        let d = if diff == 0 {
            term
        } else {
            (self.log_p - 1 - (63 - diff.leading_zeros())).min(term)
        };
        probe::hit(1);
        let g = word & GUIDE_MASK;
        if g >> d & 1 == 1 {
            let h = self.handle(i, d);
            if let Some((r, v)) = self.pins[h.pins as usize].pred(h.local as usize, x) {
                return Some((r + h.below as u64, v));
            }
        }
        let deeper = g & !((2u64 << d).wrapping_sub(1));
        if deeper == 0 {
            return None;
        }
        let h = self.handle(i, deeper.trailing_zeros());
        let p = &self.pins[h.pins as usize];
        let v = p.set_max(h.local as usize)?;
        Some((h.below as u64 + p.set_len(h.local as usize), v))
    }
}

impl SpaceUsage for PisnsIndex {
    fn words(&self) -> u64 {
        2 + self.meta.words() + self.guide.words() + self.handles.words() + 3 + self.pins.iter().map(|p| p.words()).sum::<u64>()
    }
}
