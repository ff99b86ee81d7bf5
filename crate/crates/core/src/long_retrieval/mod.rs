//! Long substring retrieval over a generalised suffix tree.
//!
//! Documents have length at most a nominal `ell`; a query asks for the
//! locus of a substring of length at least `ceil(3 ell / 4)`. Loci whose
//! subtree holds at most one leaf per document are found on level paths
//! grouped into chains and cycles; the remaining loci spell strings with a
//! short period and are found through one family per Lyndon word.

mod checks;
mod decorate;
mod paths;
mod periodic;


pub use checks::{check_cost_bound, InvariantReport, LevelCost};
pub use decorate::{decorate, level_of_count, long_threshold, DecoratedTree};
pub use paths::{
    assemble_chains_cycles, build_chain_pisns, chain_sets, decompose_all, decompose_paths, points_to, ChainIndex,
    ChainKind, ChainOrCycle, ChainSets, LevelPath,
};
pub use periodic::{build_periodic_family, detect_period, DocPeriod, FamilyMember, PeriodicFamily, RotationPath};

use crate::error::{invalid, invariant, Result};
use crate::nested_pred::Flavor;
use crate::probe;
use crate::space::SpaceUsage;
use crate::strcore::Interval;
use crate::suffix_tree::{DocumentSet, Locus, NodeId, SuffixTree, TreeOptions, NONE};
use crate::tree_tools::{LevelAncestorIndex, MarkedPredIndex};
use serde::{Deserialize, Serialize};
use std::collections::HashMap;

/// Construction options of a long-retrieval instance.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct LongOptions {
    /// Use packed nested-set tables.
    pub compact: bool,
    /// Keep the concatenated text in the tree (needed for naive walks).
    pub keep_text: bool,
    /// Leave out suffixes too short to matter for long queries.
    pub truncate: bool,
    /// Run the structural checks and return a report.
    pub check: bool,
}

impl Default for LongOptions {
    fn default() -> Self {
        LongOptions { compact: false, keep_text: false, truncate: true, check: false }
    }
}

impl LongOptions {
    fn flavor(&self, t: u32) -> Flavor {
        if self.compact {
            Flavor::Compact { t }
        } else {
            Flavor::Baseline
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
struct PathHandle {
    chain: u32,
    position: u32,
    top_td: u32,
}

/// Preprocessed generalised suffix tree answering long substring queries.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LongInstance {
    ell: usize,
    threshold: u32,
    tree: SuffixTree,
    la: LevelAncestorIndex,
    marks: MarkedPredIndex,
    min_active: Vec<u32>,
    path_of: Vec<u32>,
    paths: Vec<PathHandle>,
    chains: Vec<ChainIndex>,
    doc_period: Vec<DocPeriod>,
    families: Vec<PeriodicFamily>,
}

/// Shortest suffix worth inserting for nominal length `ell`: every node
/// reachable by a long query or by the periodic fragments stays exact.
pub fn truncation_length(ell: usize) -> usize {
    let th = long_threshold(ell) as usize;
    th.saturating_sub((ell - th).max(2))
}

/// Builds an instance over `docs` (intervals of `master`).
pub fn build_long_instance(master: &[u8], docs: DocumentSet, opts: LongOptions) -> Result<LongInstance> {
    build_long_instance_checked(master, docs, opts).map(|(i, _)| i)
}

/// Builds an instance and, when `opts.check` is set, runs the structural
/// checks.
pub fn build_long_instance_checked(
    master: &[u8],
    docs: DocumentSet,
    opts: LongOptions,
) -> Result<(LongInstance, InvariantReport)> {
    let ell = docs.nominal();
    if docs.is_empty() || ell == 0 {
        return invalid("an instance needs documents and a positive nominal length");
    }
    for d in 0..docs.len() {
        let iv = docs.doc(d);
        if docs.doc_len(d) > ell || iv.end > master.len() {
            return invalid(format!("document {d} is longer than {ell} or outside the text"));
        }
    }
    let min_len = if opts.truncate { truncation_length(ell) } else { 0 };
    let mut tree = SuffixTree::build(master, docs, TreeOptions { min_suffix_len: min_len, keep_text: opts.keep_text });
    let dec = decorate(&tree, ell);
    let threshold = dec.threshold();
    let mut rep = InvariantReport::default();

    let (mut lpaths, path_of) = decompose_all(&tree, &dec);
    let groups = assemble_chains_cycles(&tree, &dec, &lpaths, &path_of)?;
    let mut chains = Vec::with_capacity(groups.len());
    let mut all_sets = Vec::new();
    for (c, g) in groups.iter().enumerate() {
        let s = chain_sets(&tree, &lpaths, g)?;
        chains.push(build_chain_pisns(&s, opts.flavor(2))?);
        for (j, &p) in g.paths.iter().enumerate() {
            lpaths[p as usize].chain = c as u32;
            lpaths[p as usize].position = j as u32 + 1;
        }
        if opts.check {
            checks::check_telescope(g, &s, &mut rep);
            all_sets.push(s);
        }
    }

    let la = LevelAncestorIndex::build(tree.parents())?;
    let paths: Vec<PathHandle> = lpaths
        .iter()
        .map(|p| PathHandle { chain: p.chain, position: p.position, top_td: la.depth(p.top()) })
        .collect();
    let n = tree.num_nodes();
    let marked: Vec<bool> =
        (0..n as NodeId).map(|v| v != 0 && dec.level(tree.parent(v)) > dec.level(v)).collect();
    let marks = MarkedPredIndex::build(tree.parents(), tree.string_depths(), &marked)?;

    let ndocs = tree.docs().len();
    let mut doc_period = vec![DocPeriod::NOT_PERIODIC; ndocs];
    let mut by_word: HashMap<&[u8], usize> = HashMap::new();
    let mut members: Vec<(Interval, Vec<FamilyMember>)> = Vec::new();
    for (d, slot) in doc_period.iter_mut().enumerate() {
        let iv = tree.docs().doc(d);
        let text = &master[iv.start - 1..iv.end];
        if let Some((p, run, anchor)) = detect_period(text, ell, threshold as usize) {
            let word = &text[anchor - 1..anchor - 1 + p];
            let f = *by_word.entry(word).or_insert_with(|| {
                let at = iv.start + anchor - 1;
                members.push((Interval::new(at, at + p - 1), Vec::new()));
                members.len() - 1
            });
            *slot = DocPeriod {
                period: p as u32,
                run_start: run.start as u32,
                run_end: run.end as u32,
                anchor: anchor as u32,
                family: f as u32,
            };
            members[f].1.push(FamilyMember { doc: d, period: *slot });
        }
    }
    let mut families = Vec::with_capacity(members.len());
    let mut family_nodes = Vec::with_capacity(members.len());
    for (word, list) in &members {
        let (fam, nodes) = build_periodic_family(&tree, &la, master, *word, list, threshold, opts.flavor(1))?;
        families.push(fam);
        family_nodes.push(nodes);
    }

    if opts.check {
        checks::check_link_lemmas(&tree, &dec, min_len as u32, &mut rep);
        checks::check_partition(&tree, &dec, &lpaths, &path_of, &mut rep);
        let n_instance = tree.docs().total_len() as u64;
        rep.costs = check_cost_bound(&groups, &all_sets, n_instance, &mut rep);
        checks::check_family_disjointness(&family_nodes, n, &mut rep);
        rep.paths = lpaths.len();
        rep.cycles = groups.iter().filter(|g| g.kind == ChainKind::Cycle).count();
        rep.chains = groups.len() - rep.cycles;
        rep.families = families.len();
    }

    tree.drop_links();
    let inst = LongInstance {
        ell,
        threshold,
        tree,
        la,
        marks,
        min_active: dec.into_min_active(),
        path_of,
        paths,
        chains,
        doc_period,
        families,
    };
    Ok((inst, rep))
}

impl LongInstance {
    /// Nominal document length.
    pub fn ell(&self) -> usize {
        self.ell
    }

    /// Shortest query length served.
    pub fn threshold(&self) -> u32 {
        self.threshold
    }

    /// The underlying generalised suffix tree.
    pub fn tree(&self) -> &SuffixTree {
        &self.tree
    }

    /// Level ancestor index over the tree.
    pub fn level_ancestor(&self) -> &LevelAncestorIndex {
        &self.la
    }

    /// Number of chains and cycles.
    pub fn num_chains(&self) -> usize {
        self.chains.len()
    }

    /// Number of level paths.
    pub fn num_paths(&self) -> usize {
        self.paths.len()
    }

    /// Periodic families.
    pub fn families(&self) -> &[PeriodicFamily] {
        &self.families
    }

    /// Periodic descriptor of document `d`.
    pub fn doc_period(&self, d: usize) -> DocPeriod {
        self.doc_period[d]
    }

    /// Drops the tree text after dependent structures are built.
    pub fn drop_text(&mut self) {
        self.tree.drop_text();
    }

    /// Releases tree arrays that queries do not read.
    pub fn slim(&mut self) {
        self.tree.slim();
    }

    /// Locus of `w_doc[i..j]` (0-based document, 1-based inclusive
    /// coordinates); the length must reach the threshold.
    pub fn query_long(&self, doc: usize, i: usize, j: usize) -> Result<Locus> {
        let docs = self.tree.docs();
        if doc >= docs.len() || i == 0 || i > j || j > docs.doc_len(doc) {
            return invalid(format!("bad substring ({doc}, {i}, {j})"));
        }
        let l = j - i + 1;
        if l < self.threshold as usize {
            return invalid(format!("length {l} is below the long threshold {}", self.threshold));
        }
        self.locate(doc, i, l as u32)
    }

    /// Locus for a validated query of length `l` starting at `i`.
    pub fn locate(&self, doc: usize, i: usize, l: u32) -> Result<Locus> {
        probe::hit(1);
        let leaf = self.tree.leaf_of(doc, i)?;
        probe::hit(1);
        if l >= self.min_active[leaf as usize] {
            Ok(self.locate_active(leaf, l))
        } else {
            self.locate_periodic(leaf, doc, i, l)
        }
    }

    fn finish(&self, child: NodeId, l: u32) -> Locus {
        probe::hit(1);
        if self.tree.string_depth(child) == l {
            Locus::Explicit(child)
        } else {
            probe::hit(1);
            Locus::Implicit { parent: self.tree.parent(child), child, depth: l }
        }
    }

    fn locate_active(&self, leaf: NodeId, l: u32) -> Locus {
        let u = self.marks.succ(leaf, l as u64).expect("leaves are marked");
        probe::hit(2);
        let pu = self.tree.parent(u);
        let entry = if self.tree.string_depth(pu) >= l { pu } else { u };
        probe::hit(2);
        let h = self.paths[self.path_of[entry as usize] as usize];
        probe::hit(1);
        let c = &self.chains[h.chain as usize];
        let x = h.position as u64 + l as u64 - c.shift;
        match c.pisns.pred(h.position as usize - 1, x) {
            Some((rank, v)) => {
                let td = h.top_td + rank as u32 - 1;
                let node = self.la.query(leaf, td);
                if v == x {
                    Locus::Explicit(node)
                } else {
                    let child = self.la.query(leaf, td + 1);
                    Locus::Implicit { parent: node, child, depth: l }
                }
            }
            None => self.finish(self.la.query(leaf, h.top_td), l),
        }
    }

    fn locate_periodic(&self, leaf: NodeId, doc: usize, i: usize, l: u32) -> Result<Locus> {
        probe::hit(1);
        let dp = self.doc_period[doc];
        let (i, j) = (i as u32, i as u32 + l - 1);
        if dp.family == NONE || i < dp.run_start || j > dp.run_end {
            return invariant(format!("inactive long locus outside a periodic run (document {doc}, {i}..{j})"));
        }
        probe::hit(1);
        let fam = &self.families[dp.family as usize];
        let rot = (i + dp.period - dp.anchor % dp.period) % dp.period + 1;
        let td = fam.node_below_td(rot, l);
        Ok(self.finish(self.la.query(leaf, td), l))
    }
}

impl SpaceUsage for ChainIndex {
    fn words(&self) -> u64 {
        1 + self.pisns.words()
    }
}

impl LongInstance {
    /// Words per component.
    pub fn breakdown(&self) -> Vec<(&'static str, u64)> {
        vec![
            ("tree", self.tree.words()),
            ("level_ancestor", self.la.words()),
            ("marks", self.marks.words()),
            ("node_tables", self.min_active.words() + self.path_of.words() + self.paths.words()),
            ("chains", self.chains.iter().map(|c| c.words()).sum::<u64>()),
            ("families", self.doc_period.words() + self.families.iter().map(|f| f.words()).sum::<u64>()),
        ]
    }
}

impl SpaceUsage for LongInstance {
    fn words(&self) -> u64 {
        4 + 6 + self.tree.words()
            + self.la.words()
            + self.marks.words()
            + self.min_active.words()
            + self.path_of.words()
            + self.paths.words()
            + self.chains.iter().map(|c| c.words()).sum::<u64>()
            + self.doc_period.words()
            + self.families.iter().map(|f| f.words()).sum::<u64>()
    }
}
