use super::decorate::DecoratedTree;
use crate::error::{invariant, Error, Result};
use crate::nested_pred::{Flavor, PisnsIndex};
use crate::suffix_tree::{NodeId, SuffixTree, NONE};
use serde::{Deserialize, Serialize};

/// A maximal path of active nodes sharing one level.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LevelPath {
    /// Common level of the nodes.
    pub level: u8,
    /// Explicit nodes from the topmost to the bottommost.
    pub nodes: Vec<NodeId>,
    /// Smallest string depth of a node (implicit or explicit) on the path.
    pub top_depth: u32,
    /// String depth of the bottom node.
    pub bottom_depth: u32,
    /// Chain or cycle holding the path, once assembled.
    pub chain: u32,
    /// 1-based position inside that chain or cycle.
    pub position: u32,
}

impl LevelPath {
    /// Bottom explicit node.
    pub fn bottom(&self) -> NodeId {
        *self.nodes.last().unwrap()
    }

    /// Topmost explicit node.
    pub fn top(&self) -> NodeId {
        self.nodes[0]
    }
}

/// Splits all active nodes into level paths. Returns the paths and the
/// path id of every node (`NONE` for nodes on no path).
pub fn decompose_all(t: &SuffixTree, d: &DecoratedTree) -> (Vec<LevelPath>, Vec<u32>) {
    let n = t.num_nodes();
    let mut path_of = vec![NONE; n];
    let mut paths: Vec<LevelPath> = Vec::new();
    for v in 1..n as NodeId {
        if !d.is_active(v) {
            continue;
        }
        let p = t.parent(v);
        let id = if d.is_active(p) && d.level(p) == d.level(v) {
            let id = path_of[p as usize];
            paths[id as usize].nodes.push(v);
            id
        } else {
            paths.push(LevelPath {
                level: d.level(v),
                nodes: vec![v],
                top_depth: d.threshold().max(t.string_depth(p) + 1),
                bottom_depth: 0,
                chain: NONE,
                position: 0,
            });
            paths.len() as u32 - 1
        };
        path_of[v as usize] = id;
    }
    for p in &mut paths {
        p.bottom_depth = t.string_depth(p.bottom());
    }
    (paths, path_of)
}

/// Level paths of level `k` only.
pub fn decompose_paths(t: &SuffixTree, d: &DecoratedTree, k: u8) -> Vec<LevelPath> {
    decompose_all(t, d).0.into_iter().filter(|p| p.level == k).collect()
}

/// Whether a group of paths closes into a cycle.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum ChainKind {
    /// Open sequence of paths.
    Chain,
    /// Closed sequence of at least two paths.
    Cycle,
}

/// A chain or cycle of level paths, linked by suffix links.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ChainOrCycle {
    /// Chain or cycle.
    pub kind: ChainKind,
    /// Shared level.
    pub level: u8,
    /// Path ids in order.
    pub paths: Vec<u32>,
}

/// Target of the points-to relation for every path.
pub fn points_to(t: &SuffixTree, d: &DecoratedTree, paths: &[LevelPath], path_of: &[u32]) -> Vec<u32> {
    paths
        .iter()
        .map(|p| {
            let x = t.link(p.bottom());
            if x != NONE && d.is_active(x) && d.level(x) == p.level {
                path_of[x as usize]
            } else {
                NONE
            }
        })
        .collect()
}

/// Groups paths into chains and cycles. Fails when the points-to relation
/// has a self-loop, a path pointing to two paths, or a path pointed to by
/// two paths.
pub fn assemble_chains_cycles(
    t: &SuffixTree,
    d: &DecoratedTree,
    paths: &[LevelPath],
    path_of: &[u32],
) -> Result<Vec<ChainOrCycle>> {
    let next = points_to(t, d, paths, path_of);
    let mut indeg = vec![0u32; paths.len()];
    for (i, p) in paths.iter().enumerate() {
        if next[i] == i as u32 {
            return invariant(format!("path {i} points to itself"));
        }
        for &u in &p.nodes {
            let x = t.link(u);
            if x != NONE && d.is_active(x) && d.level(x) == p.level && path_of[x as usize] != next[i] {
                return invariant(format!("path {i} points to two paths"));
            }
        }
        if next[i] != NONE {
            indeg[next[i] as usize] += 1;
            if indeg[next[i] as usize] > 1 {
                return invariant(format!("path {} is pointed to by two paths", next[i]));
            }
        }
    }
    let mut seen = vec![false; paths.len()];
    let mut out = Vec::new();
    for s in 0..paths.len() {
        if indeg[s] != 0 {
            continue;
        }
        let mut members = Vec::new();
        let mut c = s as u32;
        while c != NONE {
            seen[c as usize] = true;
            members.push(c);
            c = next[c as usize];
        }
        out.push(ChainOrCycle { kind: ChainKind::Chain, level: paths[s].level, paths: members });
    }
    for s in 0..paths.len() {
        if seen[s] {
            continue;
        }
        let mut members = Vec::new();
        let mut c = s as u32;
        while !seen[c as usize] {
            seen[c as usize] = true;
            members.push(c);
            c = next[c as usize];
            if c == NONE {
                return invariant("a path without predecessor was left unassigned");
            }
        }
        let anchor = (0..members.len()).min_by_key(|&j| paths[members[j] as usize].bottom()).unwrap();
        members.rotate_left(anchor);
        out.push(ChainOrCycle { kind: ChainKind::Cycle, level: paths[s].level, paths: members });
    }
    Ok(out)
}

/// Range, set and cost data of one chain or cycle.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ChainSets {
    /// Lower end `j + top_depth` of every range.
    pub lower: Vec<u64>,
    /// Common upper end `z + bottom_depth` of the last path.
    pub upper: u64,
    /// `S_j`: string depths of explicit nodes, shifted by `j`.
    pub sets: Vec<Vec<u64>>,
    /// Cost of every path.
    pub costs: Vec<i64>,
}

impl ChainSets {
    /// Size of the first extended range.
    pub fn first_range_len(&self) -> u64 {
        self.upper + 1 - self.lower[0]
    }
}

/// Computes the ranges, sets and costs of a chain or cycle, checking the
/// monotonicity of consecutive ranges and the nesting of consecutive sets.
pub fn chain_sets(t: &SuffixTree, paths: &[LevelPath], c: &ChainOrCycle) -> Result<ChainSets> {
    let z = c.paths.len();
    let p = |j: usize| &paths[c.paths[j] as usize];
    let mut lower = Vec::with_capacity(z);
    let mut sets = Vec::with_capacity(z);
    for j in 0..z {
        let pos = j as u64 + 1;
        lower.push(pos + p(j).top_depth as u64);
        sets.push(p(j).nodes.iter().map(|&v| pos + t.string_depth(v) as u64).collect::<Vec<u64>>());
    }
    for j in 0..z.saturating_sub(1) {
        let (a, b) = (p(j), p(j + 1));
        let (pa, pb) = (j as u64 + 1, j as u64 + 2);
        if pa + a.top_depth as u64 > pb + b.top_depth as u64 {
            return invariant(format!("range starts decrease between chain positions {pa} and {pb}"));
        }
        if pa + a.bottom_depth as u64 > pb + b.bottom_depth as u64 {
            return invariant(format!("range ends decrease between chain positions {pa} and {pb}"));
        }
        let (lo, hi) = (pb + b.top_depth as u64, pb + b.bottom_depth as u64);
        for &x in sets[j].iter().filter(|&&x| x >= lo && x <= hi) {
            if sets[j + 1].binary_search(&x).is_err() {
                return invariant(format!("set nesting fails at chain position {pa} for {x}"));
            }
        }
    }
    let upper = z as u64 + p(z - 1).bottom_depth as u64;
    let mut costs = Vec::with_capacity(z);
    for j in 0..z {
        let r = p(j).bottom_depth as i64;
        let cost = if j > 0 {
            r - p(j - 1).bottom_depth as i64 + 1
        } else {
            match c.kind {
                ChainKind::Cycle => r - p(z - 1).bottom_depth as i64 + 1,
                ChainKind::Chain => r - p(0).top_depth as i64 + 1,
            }
        };
        costs.push(cost);
    }
    Ok(ChainSets { lower, upper, sets, costs })
}

/// Shrinking nested predecessor structure of a chain or cycle, with values
/// shifted so that the first range starts at `1`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ChainIndex {
    /// Amount subtracted from every shifted depth.
    pub shift: u64,
    /// The predecessor structure.
    pub pisns: PisnsIndex,
}

/// Builds the predecessor structure over the extended ranges.
pub fn build_chain_pisns(s: &ChainSets, flavor: Flavor) -> Result<ChainIndex> {
    let shift = s.lower[0] - 1;
    let owned: Vec<Vec<u32>> = s.sets.iter().map(|v| v.iter().map(|&x| (x - shift) as u32).collect()).collect();
    let refs: Vec<&[u32]> = owned.iter().map(|v| v.as_slice()).collect();
    let lower: Vec<u64> = s.lower.iter().map(|&m| m - shift).collect();
    let pisns = PisnsIndex::build_sets(s.upper - shift, &refs, &lower, flavor)
        .map_err(|e| Error::Invariant(format!("chain structure rejected: {e}")))?;
    Ok(ChainIndex { shift, pisns })
}
