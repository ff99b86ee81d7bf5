//! Substring locus index over the suffix tree of a whole text.
//!
//! The text is cut into blocks of length `2^k`; for every `k` and every
//! multiplier `alpha` the runs of `alpha` consecutive blocks form the
//! documents of one long-retrieval instance. A query of length `l` goes to
//! the instance with `(alpha - 2) 2^k <= l < (alpha - 1) 2^k`, and the
//! instance answer is mapped back into the suffix tree of the text.
//! Queries shorter than six symbols walk down from the root.
//!
//! In compact mode every document is shortened to its longest suffix that
//! reaches a deep explicit node of the text's suffix tree, and a marked
//! ancestor search over that tree resolves the queries whose locus lies
//! on an edge crossing the whole long range.

mod blocks;
mod persist;
mod short;


pub use blocks::{
    block_documents, choose_instance, instance_ell, instance_keys, instance_slot, shorten_document, BlockInstance,
    InstanceStats, ALPHA_MAX, ALPHA_MIN, MIN_LONG_QUERY,
};
pub use persist::{FORMAT_VERSION, MAGIC};

use crate::error::{invalid, invariant, Error, Result};
use crate::long_retrieval::{long_threshold, InvariantReport};
use crate::probe;
use crate::space::SpaceUsage;
use crate::suffix_tree::{build_suffix_tree, Locus, NodeId, SuffixTree};
use crate::tree_tools::{LevelAncestorIndex, MarkedPredIndex};
use blocks::{edge_locus, BuildContext};
use serde::{Deserialize, Serialize};
use short::ShortIndex;
use std::collections::BTreeMap;
use std::str::FromStr;

/// Storage mode of an index.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Mode {
    /// Every block document indexed with dense nested-set tables.
    Standard,
    /// Shortened documents with packed tables and marked-node resolution.
    Compact,
}

impl FromStr for Mode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Mode> {
        match s {
            "standard" => Ok(Mode::Standard),
            "compact" => Ok(Mode::Compact),
            _ => invalid(format!("unknown mode '{s}', expected standard or compact")),
        }
    }
}

impl std::fmt::Display for Mode {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Mode::Standard => "standard",
            Mode::Compact => "compact",
        })
    }
}

/// Build options.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BuildOptions {
    /// Storage mode.
    pub mode: Mode,
    /// Run the structural checks on every instance.
    pub check: bool,
    /// Restrict the build to these `(k, alpha)` instances; `None` builds
    /// all of them.
    pub only: Option<Vec<(u32, u32)>>,
}

impl BuildOptions {
    /// All instances in the given mode, without checks.
    pub fn new(mode: Mode) -> BuildOptions {
        BuildOptions { mode, check: false, only: None }
    }
}

/// Constant-time substring locus index.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct WaIndex {
    mode: Mode,
    n: usize,
    tree: SuffixTree,
    short: ShortIndex,
    marks: Option<MarkedPredIndex>,
    instances: Vec<Option<BlockInstance>>,
}

/// Word counts and per-instance counts of an index.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct IndexStats {
    /// Text length.
    pub n: usize,
    /// Storage mode.
    pub mode: Mode,
    /// Words per component.
    pub words: BTreeMap<String, u64>,
    /// Sum of all components.
    pub total_words: u64,
    /// Per-instance counts.
    pub instances: Vec<InstanceStats>,
}

/// Marks of the text's suffix tree: for every threshold, the shallowest
/// node at string depth at least that threshold on each root path.
fn threshold_marks(st: &SuffixTree, thresholds: &[u32]) -> Vec<bool> {
    let n = st.num_nodes();
    let mut marked = vec![false; n];
    for v in 1..n as NodeId {
        let (dp, dv) = (st.string_depth(st.parent(v)), st.string_depth(v));
        marked[v as usize] = thresholds.iter().any(|&t| dp < t && t <= dv);
    }
    marked
}

impl WaIndex {
    /// Builds the index of `text` in the given mode.
    pub fn build(text: &[u8], mode: Mode) -> Result<WaIndex> {
        Self::build_with(text, &BuildOptions::new(mode)).map(|(i, _)| i)
    }

    /// Builds the index and returns the merged report of the structural
    /// checks when `opts.check` is set.
    pub fn build_with(text: &[u8], opts: &BuildOptions) -> Result<(WaIndex, InvariantReport)> {
        let mut idx = Self::skeleton(text, opts.mode)?;
        let builder = InstanceBuilder::new(&idx, opts.check)?;
        let mut report = InvariantReport::default();
        for (k, a) in instance_keys(text.len()) {
            if opts.only.as_ref().is_some_and(|o| !o.contains(&(k, a))) {
                continue;
            }
            let (inst, rep) = builder.build(&idx, text, k, a)?;
            report.absorb(rep);
            idx.set_instance(inst);
        }
        probe::reset();
        Ok((idx, report))
    }

    /// The suffix tree, marks and short-query table of `text`, without
    /// any long-retrieval instance.
    pub fn skeleton(text: &[u8], mode: Mode) -> Result<WaIndex> {
        if text.is_empty() {
            return invalid("the text must not be empty");
        }
        let n = text.len();
        let tree = build_suffix_tree(text);
        let keys = instance_keys(n);
        let marks = if mode == Mode::Compact {
            let mut ths: Vec<u32> = keys.iter().map(|&(k, a)| long_threshold(instance_ell(k, a))).collect();
            ths.sort_unstable();
            ths.dedup();
            let marked = threshold_marks(&tree, &ths);
            Some(MarkedPredIndex::build(tree.parents(), tree.string_depths(), &marked)?)
        } else {
            None
        };
        let slots = keys.last().map_or(0, |&(k, a)| instance_slot(k, a) + 1);
        let short = ShortIndex::build(&tree, MIN_LONG_QUERY as u32 - 1);
        Ok(WaIndex { mode, n, tree, short, marks, instances: (0..slots).map(|_| None).collect() })
    }

    /// Installs an instance, replacing any instance with the same key.
    pub fn set_instance(&mut self, inst: BlockInstance) {
        let s = instance_slot(inst.k, inst.alpha);
        self.instances[s] = Some(inst);
    }

    /// Removes and returns instance `(k, alpha)`.
    pub fn take_instance(&mut self, k: u32, alpha: u32) -> Option<BlockInstance> {
        self.instances.get_mut(instance_slot(k, alpha)).and_then(|x| x.take())
    }

    /// Text length.
    pub fn len(&self) -> usize {
        self.n
    }

    /// True for an empty text (never the case for a built index).
    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    /// Storage mode.
    pub fn mode(&self) -> Mode {
        self.mode
    }

    /// The suffix tree of `w$`.
    pub fn tree(&self) -> &SuffixTree {
        &self.tree
    }

    /// Built instances.
    pub fn instances(&self) -> impl Iterator<Item = &BlockInstance> {
        self.instances.iter().flatten()
    }

    /// Locus of `w[i..j]` (1-based, inclusive) in the suffix tree of `w$`.
    pub fn substring_locus(&self, i: usize, j: usize) -> Result<Locus> {
        if i == 0 || i > j || j > self.n {
            return invalid(format!("bad substring [{i}, {j}] of a text of length {}", self.n));
        }
        let l = j - i + 1;
        if l < MIN_LONG_QUERY {
            return Ok(self.short.locate(&self.tree, i, l as u32));
        }
        let l32 = l as u32;
        if let Some(m) = &self.marks {
            probe::hit(1);
            let leaf = self.tree.leaf_at_position(i - 1);
            if let Some(u) = m.succ(leaf, l as u64) {
                probe::hit(1);
                if self.tree.string_depth(self.tree.parent(u)) < l32 {
                    return Ok(edge_locus(&self.tree, u, l32));
                }
            }
        }
        let (k, a) = choose_instance(l)?;
        probe::hit(1);
        let inst = match self.instances.get(instance_slot(k, a)) {
            Some(Some(x)) => x,
            _ => return invalid(format!("instance ({k}, {a}) was not built")),
        };
        match inst.locate(&self.tree, i, l32)? {
            Some(loc) => Ok(loc),
            None => invariant(format!("query [{i}, {j}] reached a removed part of instance ({k}, {a})")),
        }
    }

    /// Word counts per component.
    pub fn stats(&self) -> IndexStats {
        let mut words = BTreeMap::new();
        words.insert("suffix_tree".to_string(), self.tree.words());
        words.insert("short_index".to_string(), self.short.words());
        words.insert("marks".to_string(), self.marks.words());
        let mut per = Vec::new();
        let mut inst_words = 0;
        for inst in self.instances() {
            let s = inst.stats();
            inst_words += s.words;
            per.push(s);
        }
        words.insert("instances".to_string(), inst_words);
        let total_words = words.values().sum::<u64>() + 2 + self.instances.len() as u64;
        IndexStats { n: self.n, mode: self.mode, words, total_words, instances: per }
    }
}

/// Builds the instances of an index one at a time.
pub struct InstanceBuilder {
    la: LevelAncestorIndex,
    check: bool,
}

impl InstanceBuilder {
    /// Prepares to build instances for `idx`; `check` runs the structural
    /// checks on each one.
    pub fn new(idx: &WaIndex, check: bool) -> Result<InstanceBuilder> {
        Ok(InstanceBuilder { la: LevelAncestorIndex::build(idx.tree.parents())?, check })
    }

    /// Builds instance `(k, alpha)` of `idx`, whose text is `text`.
    pub fn build(&self, idx: &WaIndex, text: &[u8], k: u32, alpha: u32) -> Result<(BlockInstance, InvariantReport)> {
        if text.len() != idx.n {
            return invalid("text does not belong to the index");
        }
        if instance_slot(k, alpha) >= idx.instances.len() || !instance_keys(idx.n).contains(&(k, alpha)) {
            return invalid(format!("instance ({k}, {alpha}) is not used for length {}", idx.n));
        }
        let ctx = BuildContext {
            text,
            st: &idx.tree,
            st_la: &self.la,
            marks: idx.marks.as_ref(),
            compact: idx.mode == Mode::Compact,
            check: self.check,
        };
        BlockInstance::build(&ctx, k, alpha)
    }
}

impl SpaceUsage for WaIndex {
    fn words(&self) -> u64 {
        self.stats().total_words
    }
}
