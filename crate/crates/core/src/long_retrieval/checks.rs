use super::decorate::DecoratedTree;
use super::paths::{ChainKind, ChainOrCycle, ChainSets, LevelPath};
use crate::suffix_tree::{NodeId, SuffixTree, NONE};
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;

/// Sum of path costs at one level against its bound `3 n / 2^k`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LevelCost {
    /// Level `k`.
    pub level: u8,
    /// Sum of costs of all level-`k` paths.
    pub sum: i64,
    /// The bound.
    pub bound: f64,
    /// Whether `sum <= bound`.
    pub pass: bool,
}

/// Outcome of the structural checks run while building an instance.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct InvariantReport {
    /// Human-readable description of every failed check.
    pub violations: Vec<String>,
    /// Number of individual facts checked.
    pub checked: u64,
    /// Number of level paths.
    pub paths: usize,
    /// Number of chains.
    pub chains: usize,
    /// Number of cycles.
    pub cycles: usize,
    /// Number of periodic families.
    pub families: usize,
    /// Cost sums per level.
    pub costs: Vec<LevelCost>,
}

impl InvariantReport {
    /// True when no check failed.
    pub fn is_clean(&self) -> bool {
        self.violations.is_empty()
    }

    fn expect(&mut self, ok: bool, msg: impl FnOnce() -> String) {
        self.checked += 1;
        if !ok {
            self.violations.push(msg());
        }
    }

    /// Merges another report into this one.
    pub fn absorb(&mut self, other: InvariantReport) {
        self.violations.extend(other.violations);
        self.checked += other.checked;
        self.paths += other.paths;
        self.chains += other.chains;
        self.cycles += other.cycles;
        self.families += other.families;
        self.costs.extend(other.costs);
    }
}

/// Suffix-link facts about activity and levels. Only nodes whose string
/// depth is at least `exact + 1` are examined, since shallower parts of a
/// truncated tree are not exact.
pub fn check_link_lemmas(t: &SuffixTree, d: &DecoratedTree, exact: u32, rep: &mut InvariantReport) {
    let n = t.num_nodes();
    let mut run_top = vec![0u32; n];
    for v in 1..n as NodeId {
        let p = t.parent(v);
        run_top[v as usize] = if d.level(p) == d.level(v) { run_top[p as usize] } else { v };
    }
    let mut groups: Vec<(u32, u32, NodeId)> = Vec::new();
    for v in 1..n as NodeId {
        let x = t.link(v);
        if x == NONE || t.string_depth(v) < exact + 1 {
            continue;
        }
        rep.expect(d.is_active(v) || !d.is_active(x), || format!("inactive node {v} links to active node {x}"));
        rep.expect(d.level(x) >= d.level(v), || format!("link of node {v} has a smaller level"));
        if d.level(x) == d.level(v) {
            groups.push((run_top[x as usize], t.string_depth(v), v));
        }
    }
    groups.sort_unstable();
    for w in groups.windows(2) {
        let ((ga, _, a), (gb, _, b)) = (w[0], w[1]);
        if ga == gb {
            let nested = a < b && b < t.subtree_end(a);
            rep.expect(nested, || {
                format!("nodes {a} and {b} share a level and link into one run without being nested")
            });
        }
    }
}

/// Checks that active explicit nodes are covered exactly once by paths and
/// that no path node is an ancestor of another path's node.
pub fn check_partition(t: &SuffixTree, d: &DecoratedTree, paths: &[LevelPath], path_of: &[u32], rep: &mut InvariantReport) {
    let active = (0..t.num_nodes() as NodeId).filter(|&v| d.is_active(v)).count();
    let covered: usize = paths.iter().map(|p| p.nodes.len()).sum();
    rep.expect(active == covered, || format!("{active} active nodes but {covered} path nodes"));
    for (i, p) in paths.iter().enumerate() {
        for w in p.nodes.windows(2) {
            rep.expect(t.parent(w[1]) == w[0], || format!("path {i} is not contiguous"));
        }
        let top = p.top();
        let par = t.parent(top);
        let closed = !d.is_active(par) || d.level(par) != p.level;
        rep.expect(closed, || format!("path {i} is not maximal at its top"));
        let b = p.bottom();
        let open_below = t.children(b).iter().any(|&c| d.level(c) == p.level);
        rep.expect(!open_below, || format!("path {i} is not maximal at its bottom"));
        rep.expect(path_of[top as usize] == i as u32, || format!("path {i} top has the wrong path id"));
    }
}

/// Telescoping identities of chains and cycles.
pub fn check_telescope(c: &ChainOrCycle, s: &ChainSets, rep: &mut InvariantReport) {
    let total: i64 = s.costs.iter().sum();
    let u1 = s.first_range_len() as i64;
    match c.kind {
        ChainKind::Chain => rep.expect(u1 == total, || format!("chain range {u1} differs from cost sum {total}")),
        ChainKind::Cycle => rep.expect(u1 <= 2 * total, || format!("cycle range {u1} exceeds twice the cost sum {total}")),
    }
}

/// Per-level cost sums against `3 n / 2^k`.
pub fn check_cost_bound(
    chains: &[ChainOrCycle],
    sets: &[ChainSets],
    n_instance: u64,
    rep: &mut InvariantReport,
) -> Vec<LevelCost> {
    let mut sums: BTreeMap<u8, i64> = BTreeMap::new();
    for (c, s) in chains.iter().zip(sets) {
        *sums.entry(c.level).or_default() += s.costs.iter().sum::<i64>();
    }
    let out: Vec<LevelCost> = sums
        .into_iter()
        .map(|(level, sum)| {
            let bound = 3.0 * n_instance as f64 / (1u64 << level) as f64;
            LevelCost { level, sum, bound, pass: sum as f64 <= bound }
        })
        .collect();
    for c in &out {
        rep.expect(c.pass, || format!("level {} cost {} exceeds {}", c.level, c.sum, c.bound));
    }
    out
}

/// Checks that no explicit node appears in two families.
pub fn check_family_disjointness(nodes: &[Vec<NodeId>], n: usize, rep: &mut InvariantReport) {
    let mut owner = vec![NONE; n];
    for (f, list) in nodes.iter().enumerate() {
        for &v in list {
            let prev = owner[v as usize];
            rep.expect(prev == NONE || prev == f as u32, || format!("node {v} belongs to families {prev} and {f}"));
            owner[v as usize] = f as u32;
        }
    }
}
