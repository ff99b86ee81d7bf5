//! Suffix trees and generalised suffix trees over an integer alphabet.
//!
//! Construction goes through the suffix array and LCP array of the
//! concatenated documents, each followed by its own separator. The tree is
//! lifted from the LCP array with a stack, then renumbered in preorder so
//! every subtree is a contiguous id range and children appear in
//! lexicographic order.

mod sais;

pub use sais::{lcp_array, suffix_array};

use crate::error::{invalid, invariant, Error, Result};
use crate::space::SpaceUsage;
use crate::strcore::{separator, Interval, Symbol};
use serde::{Deserialize, Serialize};

/// Node identifier inside one tree.
pub type NodeId = u32;

/// Marker for an absent node.
pub const NONE: NodeId = u32::MAX;

/// Position of a string in a suffix tree.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Locus {
    /// The string ends exactly at this node.
    Explicit(NodeId),
    /// The string ends inside the edge from `parent` to `child`.
    Implicit { parent: NodeId, child: NodeId, depth: u32 },
}

impl Locus {
    /// True for an explicit node.
    pub fn is_explicit(&self) -> bool {
        matches!(self, Locus::Explicit(_))
    }

    /// The explicit node at or directly below the locus.
    pub fn node_below(&self) -> NodeId {
        match *self {
            Locus::Explicit(v) => v,
            Locus::Implicit { child, .. } => child,
        }
    }
}

/// A list of documents given as intervals of a master text. Document `d`
/// is followed by the separator `separator(d)` in the concatenation.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct DocumentSet {
    docs: Vec<Interval>,
    base: Vec<u32>,
    nominal: usize,
}

impl DocumentSet {
    /// Documents as 1-based inclusive intervals of the master text.
    pub fn new(docs: Vec<Interval>, nominal: usize) -> DocumentSet {
        let mut base = Vec::with_capacity(docs.len() + 1);
        let mut acc = 0u32;
        for d in &docs {
            base.push(acc);
            acc += d.len() as u32 + 1;
        }
        base.push(acc);
        DocumentSet { docs, base, nominal }
    }

    /// Number of documents `β`.
    pub fn len(&self) -> usize {
        self.docs.len()
    }

    /// True when there are no documents.
    pub fn is_empty(&self) -> bool {
        self.docs.is_empty()
    }

    /// Nominal document length `ℓ`.
    pub fn nominal(&self) -> usize {
        self.nominal
    }

    /// Master-text interval of document `d` (0-based).
    pub fn doc(&self, d: usize) -> Interval {
        self.docs[d]
    }

    /// Length of document `d` without its separator.
    pub fn doc_len(&self, d: usize) -> usize {
        self.docs[d].len()
    }

    /// Offset of document `d` in the concatenation.
    pub fn base(&self, d: usize) -> usize {
        self.base[d] as usize
    }

    /// Length of the concatenation including separators.
    pub fn total_len(&self) -> usize {
        *self.base.last().unwrap() as usize
    }

    /// Document containing concatenation position `pos`.
    pub fn doc_of(&self, pos: usize) -> usize {
        self.base.partition_point(|&b| b as usize <= pos) - 1
    }

    /// The concatenation `w_1 $_1 w_2 $_2 …` as symbols.
    pub fn concat(&self, master: &[u8]) -> Vec<Symbol> {
        let mut out = Vec::with_capacity(self.total_len());
        for (d, iv) in self.docs.iter().enumerate() {
            out.extend(master[iv.start - 1..iv.end].iter().map(|&b| b as Symbol));
            out.push(separator(d));
        }
        out
    }
}

/// Construction options.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct TreeOptions {
    /// Only suffixes whose length without separator is at least this are
    /// inserted. Nodes at string depth `>=` this value are exact.
    pub min_suffix_len: usize,
    /// Keep the concatenated text for symbol access.
    pub keep_text: bool,
}

impl Default for TreeOptions {
    fn default() -> Self {
        TreeOptions { min_suffix_len: 0, keep_text: true }
    }
}

/// A compacted trie of document suffixes, stored as flat arrays indexed by
/// preorder node id. Node `0` is the root.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SuffixTree {
    docs: DocumentSet,
    text: Vec<Symbol>,
    min_len: u32,
    parent: Vec<NodeId>,
    depth: Vec<u32>,
    child_off: Vec<u32>,
    children: Vec<NodeId>,
    link: Vec<NodeId>,
    sa_lo: Vec<u32>,
    sa_hi: Vec<u32>,
    sa: Vec<u32>,
    rank_leaf: Vec<NodeId>,
    pos_leaf: Vec<NodeId>,
}

/// Builds `ST(w$)`.
pub fn build_suffix_tree(w: &[u8]) -> SuffixTree {
    let docs = DocumentSet::new(vec![Interval::new(1, w.len().max(1))], w.len());
    if w.is_empty() {
        let docs = DocumentSet::new(Vec::new(), 0);
        return SuffixTree::build(&[], docs, TreeOptions::default());
    }
    SuffixTree::build(w, docs, TreeOptions::default())
}

/// Builds the generalised suffix tree of the documents.
pub fn build_gst(master: &[u8], docs: DocumentSet) -> Result<SuffixTree> {
    if docs.is_empty() {
        return invalid("generalised suffix tree needs at least one document");
    }
    Ok(SuffixTree::build(master, docs, TreeOptions::default()))
}

struct SparseMin {
    rows: Vec<Vec<u32>>,
}

impl SparseMin {
    fn new(a: &[u32]) -> SparseMin {
        let mut rows = vec![(0..a.len() as u32).collect::<Vec<u32>>()];
        let mut w = 1;
        while 2 * w <= a.len() {
            let prev = rows.last().unwrap();
            let row: Vec<u32> = (0..a.len() + 1 - 2 * w)
                .map(|i| {
                    let (x, y) = (prev[i], prev[i + w]);
                    if a[y as usize] < a[x as usize] { y } else { x }
                })
                .collect();
            rows.push(row);
            w *= 2;
        }
        SparseMin { rows }
    }

    /// Index of a minimum of `a[l..=r]`.
    fn argmin(&self, a: &[u32], l: usize, r: usize) -> usize {
        let k = (usize::BITS - 1 - (r - l + 1).leading_zeros()) as usize;
        let (x, y) = (self.rows[k][l], self.rows[k][r + 1 - (1 << k)]);
        if a[y as usize] < a[x as usize] { y as usize } else { x as usize }
    }
}

impl SuffixTree {
    /// Builds the tree of the documents' suffixes under `opts`.
    pub fn build(master: &[u8], docs: DocumentSet, opts: TreeOptions) -> SuffixTree {
        let text = docs.concat(master);
        Self::build_text(text, docs, opts)
    }

    fn build_text(text: Vec<Symbol>, docs: DocumentSet, opts: TreeOptions) -> SuffixTree {
        let total = text.len();
        let mut suffix_len = vec![0u32; total];
        for d in 0..docs.len() {
            let b = docs.base(d);
            let l = docs.doc_len(d);
            for o in 0..=l {
                suffix_len[b + o] = (l - o) as u32;
            }
        }
        let min_len = opts.min_suffix_len as u32;
        let full_sa = suffix_array(&text);
        let full_lcp = lcp_array(&text, &full_sa);
        let mut sa = Vec::new();
        let mut lcp = Vec::new();
        let mut run = u32::MAX;
        for (r, &p) in full_sa.iter().enumerate() {
            if r > 0 {
                run = run.min(full_lcp[r]);
            }
            if suffix_len[p as usize] >= min_len {
                lcp.push(if sa.is_empty() { 0 } else { run });
                sa.push(p);
                run = u32::MAX;
            }
        }
        drop(full_sa);
        drop(full_lcp);
        let leaf_depth = |p: u32| suffix_len[p as usize] + 1;

        let m = sa.len();
        let cap = 2 * m + 1;
        let mut t_parent: Vec<u32> = Vec::with_capacity(cap);
        let mut t_depth: Vec<u32> = Vec::with_capacity(cap);
        let mut t_lo: Vec<u32> = Vec::with_capacity(cap);
        let mut t_hi: Vec<u32> = Vec::with_capacity(cap);
        let mut t_rank: Vec<u32> = Vec::with_capacity(cap);
        let mut sep_node = vec![0u32; m];
        let new_node = |parent: &mut Vec<u32>, depth: &mut Vec<u32>, lo: &mut Vec<u32>, hi: &mut Vec<u32>, rk: &mut Vec<u32>, d: u32, l: u32, r: u32| {
            parent.push(NONE);
            depth.push(d);
            lo.push(l);
            hi.push(l);
            rk.push(r);
            (depth.len() - 1) as u32
        };
        let root = new_node(&mut t_parent, &mut t_depth, &mut t_lo, &mut t_hi, &mut t_rank, 0, 0, NONE);
        let mut stack = vec![root];
        for r in 0..m {
            let l = lcp[r];
            while t_depth[*stack.last().unwrap() as usize] > l {
                let x = stack.pop().unwrap();
                t_hi[x as usize] = r as u32 - 1;
                let top = *stack.last().unwrap();
                if t_depth[top as usize] >= l {
                    t_parent[x as usize] = top;
                } else {
                    let lo = t_lo[x as usize];
                    let v = new_node(&mut t_parent, &mut t_depth, &mut t_lo, &mut t_hi, &mut t_rank, l, lo, NONE);
                    t_parent[x as usize] = v;
                    stack.push(v);
                }
            }
            sep_node[r] = *stack.last().unwrap();
            let top = *stack.last().unwrap();
            let leaf = new_node(&mut t_parent, &mut t_depth, &mut t_lo, &mut t_hi, &mut t_rank, leaf_depth(sa[r]), r as u32, r as u32);
            t_parent[leaf as usize] = top;
            stack.push(leaf);
        }
        while let Some(x) = stack.pop() {
            t_hi[x as usize] = m.saturating_sub(1) as u32;
            if let Some(&top) = stack.last() {
                t_parent[x as usize] = top;
            }
        }
        let count = t_depth.len();

        // Preorder: ascending leftmost rank, shallower first on ties.
        let mut order: Vec<u32> = (0..count as u32).collect();
        order.sort_unstable_by_key(|&v| (t_lo[v as usize], t_depth[v as usize]));
        let mut new_id = vec![0u32; count];
        for (i, &v) in order.iter().enumerate() {
            new_id[v as usize] = i as u32;
        }
        let mut parent = vec![NONE; count];
        let mut depth = vec![0u32; count];
        let mut sa_lo = vec![0u32; count];
        let mut sa_hi = vec![0u32; count];
        let mut rank_leaf = vec![NONE; m];
        for (i, &v) in order.iter().enumerate() {
            let v = v as usize;
            parent[i] = if t_parent[v] == NONE { NONE } else { new_id[t_parent[v] as usize] };
            depth[i] = t_depth[v];
            sa_lo[i] = t_lo[v];
            sa_hi[i] = t_hi[v];
            if t_rank[v] != NONE {
                rank_leaf[t_rank[v] as usize] = i as u32;
            }
        }
        for s in sep_node.iter_mut() {
            *s = new_id[*s as usize];
        }
        drop((t_parent, t_depth, t_lo, t_hi, t_rank, new_id, order));

        let mut child_off = vec![0u32; count + 1];
        for &p in parent.iter().skip(1) {
            child_off[p as usize + 1] += 1;
        }
        for i in 0..count {
            child_off[i + 1] += child_off[i];
        }
        let mut fill = child_off.clone();
        let mut children = vec![0u32; count.saturating_sub(1)];
        for (v, &p) in parent.iter().enumerate().skip(1) {
            children[fill[p as usize] as usize] = v as u32;
            fill[p as usize] += 1;
        }

        let mut pos_leaf = vec![NONE; total];
        for (r, &p) in sa.iter().enumerate() {
            pos_leaf[p as usize] = rank_leaf[r];
        }
        let mut rank_of_pos = vec![NONE; total];
        for (r, &p) in sa.iter().enumerate() {
            rank_of_pos[p as usize] = r as u32;
        }
        let mut link = vec![NONE; count];
        let rmq = SparseMin::new(&lcp);
        for v in 0..count {
            let d = depth[v];
            if v == 0 {
                continue;
            }
            let lo = sa_lo[v] as usize;
            if sa_lo[v] == sa_hi[v] && child_off[v] == child_off[v + 1] {
                let p = sa[lo] as usize;
                link[v] = if d == 1 { 0 } else { pos_leaf[p + 1] };
                continue;
            }
            if d == 1 {
                link[v] = 0;
                continue;
            }
            if d < min_len + 1 {
                continue;
            }
            let a = rank_of_pos[sa[lo] as usize + 1];
            let b = rank_of_pos[sa[sa_hi[v] as usize] as usize + 1];
            debug_assert!(a != NONE && b != NONE);
            let (a, b) = (a.min(b) as usize, a.max(b) as usize);
            let q = rmq.argmin(&lcp, a + 1, b);
            link[v] = sep_node[q];
        }

        SuffixTree {
            docs,
            text: if opts.keep_text { text } else { Vec::new() },
            min_len,
            parent,
            depth,
            child_off,
            children,
            link,
            sa_lo,
            sa_hi,
            sa,
            rank_leaf,
            pos_leaf,
        }
    }

    /// The root node.
    pub fn root(&self) -> NodeId {
        0
    }

    /// Number of nodes.
    pub fn num_nodes(&self) -> usize {
        self.depth.len()
    }

    /// Number of leaves.
    pub fn num_leaves(&self) -> usize {
        self.sa.len()
    }

    /// The document set.
    pub fn docs(&self) -> &DocumentSet {
        &self.docs
    }

    /// Minimum inserted suffix length.
    pub fn min_suffix_len(&self) -> usize {
        self.min_len as usize
    }

    /// Parent of `v`, `NONE` for the root.
    #[inline]
    pub fn parent(&self, v: NodeId) -> NodeId {
        self.parent[v as usize]
    }

    /// String depth of `v`.
    #[inline]
    pub fn string_depth(&self, v: NodeId) -> u32 {
        self.depth[v as usize]
    }

    /// Parent array.
    pub fn parents(&self) -> &[NodeId] {
        &self.parent
    }

    /// String depth array.
    pub fn string_depths(&self) -> &[u32] {
        &self.depth
    }

    /// Children of `v` in lexicographic order.
    #[inline]
    pub fn children(&self, v: NodeId) -> &[NodeId] {
        &self.children[self.child_off[v as usize] as usize..self.child_off[v as usize + 1] as usize]
    }

    /// True when `v` is a leaf.
    #[inline]
    pub fn is_leaf(&self, v: NodeId) -> bool {
        self.child_off[v as usize] == self.child_off[v as usize + 1] && v != 0
    }

    /// Suffix link of `v`; `NONE` when undefined in a truncated tree.
    #[inline]
    pub fn link(&self, v: NodeId) -> NodeId {
        self.link[v as usize]
    }

    /// Number of leaves below `v`.
    #[inline]
    pub fn leaf_count(&self, v: NodeId) -> u32 {
        if self.sa.is_empty() {
            0
        } else {
            self.sa_hi[v as usize] - self.sa_lo[v as usize] + 1
        }
    }

    /// Leaf rank interval `[lo, hi]` of `v`.
    #[inline]
    pub fn rank_range(&self, v: NodeId) -> (u32, u32) {
        (self.sa_lo[v as usize], self.sa_hi[v as usize])
    }

    /// One past the largest node id in the subtree of `v`.
    pub fn subtree_end(&self, v: NodeId) -> NodeId {
        let hi = self.sa_hi[v as usize] as usize;
        self.rank_leaf[hi] + 1
    }

    /// Leaf at lexicographic rank `r`.
    #[inline]
    pub fn leaf_at_rank(&self, r: u32) -> NodeId {
        self.rank_leaf[r as usize]
    }

    /// Concatenation position of the suffix at rank `r`.
    #[inline]
    pub fn suffix_at_rank(&self, r: u32) -> u32 {
        self.sa[r as usize]
    }

    /// Concatenation position of the suffix spelled by leaf `v`.
    #[inline]
    pub fn leaf_position(&self, v: NodeId) -> u32 {
        self.sa[self.sa_lo[v as usize] as usize]
    }

    /// A concatenation position whose suffix passes through `v`.
    #[inline]
    pub fn witness(&self, v: NodeId) -> u32 {
        self.sa[self.sa_lo[v as usize] as usize]
    }

    /// Leaf for concatenation position `pos`, `NONE` when not inserted.
    #[inline]
    pub fn leaf_at_position(&self, pos: usize) -> NodeId {
        self.pos_leaf[pos]
    }

    /// Leaf of the suffix `w_doc[offset..]`; `doc` is 0-based and `offset`
    /// is 1-based.
    pub fn leaf_of(&self, doc: usize, offset: usize) -> Result<NodeId> {
        if doc >= self.docs.len() || offset == 0 || offset > self.docs.doc_len(doc) + 1 {
            return invalid(format!("no suffix at document {doc} offset {offset}"));
        }
        let v = self.pos_leaf[self.docs.base(doc) + offset - 1];
        if v == NONE {
            return invalid(format!("suffix at document {doc} offset {offset} was not inserted"));
        }
        Ok(v)
    }

    /// Document (0-based) and 1-based offset of leaf `v`.
    pub fn leaf_origin(&self, v: NodeId) -> (usize, usize) {
        let p = self.leaf_position(v) as usize;
        let d = self.docs.doc_of(p);
        (d, p - self.docs.base(d) + 1)
    }

    /// True when the concatenated text was kept.
    pub fn has_text(&self) -> bool {
        !self.text.is_empty()
    }

    /// The concatenated text, empty when not kept.
    pub fn text(&self) -> &[Symbol] {
        &self.text
    }

    /// Child of `v` whose edge starts with `c`. Requires the text.
    pub fn child_by_symbol(&self, v: NodeId, c: Symbol) -> Option<NodeId> {
        let d = self.depth[v as usize];
        let kids = self.children(v);
        let i = kids.partition_point(|&u| self.text[(self.witness(u) + d) as usize] < c);
        (i < kids.len() && self.text[(self.witness(kids[i]) + d) as usize] == c).then(|| kids[i])
    }

    /// Locus of `pattern` found by walking from the root, or `None`.
    pub fn find_locus(&self, pattern: &[Symbol]) -> Option<Locus> {
        let mut v = 0u32;
        let l = pattern.len() as u32;
        if l == 0 {
            return Some(Locus::Explicit(0));
        }
        loop {
            let d = self.depth[v as usize];
            let u = self.child_by_symbol(v, pattern[d as usize])?;
            let du = self.depth[u as usize];
            let w = self.witness(u);
            let stop = du.min(l);
            for k in d + 1..stop {
                if self.text[(w + k) as usize] != pattern[k as usize] {
                    return None;
                }
            }
            if du == l {
                return Some(Locus::Explicit(u));
            }
            if du > l {
                return Some(Locus::Implicit { parent: v, child: u, depth: l });
            }
            v = u;
        }
    }

    /// Locus of `w_doc[i..j]` (0-based `doc`, 1-based inclusive `i..j`)
    /// found by a symbol-by-symbol walk from the root.
    pub fn naive_locus(&self, doc: usize, i: usize, j: usize) -> Result<Locus> {
        if !self.has_text() {
            return invalid("naive locus needs the tree text");
        }
        if doc >= self.docs.len() || i == 0 || i > j || j > self.docs.doc_len(doc) {
            return invalid(format!("bad substring ({doc}, {i}, {j})"));
        }
        let b = self.docs.base(doc);
        let pat = &self.text[b + i - 1..b + j];
        match self.find_locus(pat) {
            Some(l) => Ok(l),
            None => invariant("substring of an indexed document is missing from the tree"),
        }
    }

    /// String depth of a locus.
    pub fn locus_depth(&self, l: &Locus) -> u32 {
        match *l {
            Locus::Explicit(v) => self.depth[v as usize],
            Locus::Implicit { depth, .. } => depth,
        }
    }

    /// Drops arrays only needed during construction of dependent indexes.
    pub fn drop_text(&mut self) {
        self.text = Vec::new();
    }

    /// Releases the suffix links.
    pub fn drop_links(&mut self) {
        self.link = Vec::new();
    }

    /// Keeps only what parent, depth and leaf lookups need. Children,
    /// ranks, links and text are released.
    pub fn slim(&mut self) {
        self.text = Vec::new();
        self.link = Vec::new();
        self.child_off = Vec::new();
        self.children = Vec::new();
        self.sa_lo = Vec::new();
        self.sa_hi = Vec::new();
        self.sa = Vec::new();
        self.rank_leaf = Vec::new();
    }

    /// Checks structural invariants; used by tests and the verify command.
    pub fn check(&self) -> Result<()> {
        let n = self.num_nodes();
        for v in 1..n as u32 {
            let p = self.parent(v);
            if self.depth[v as usize] <= self.depth[p as usize] {
                return invariant(format!("node {v} not deeper than its parent"));
            }
            if !self.is_leaf(v) && self.children(v).len() < 2 {
                return invariant(format!("internal node {v} has fewer than two children"));
            }
            if !self.is_leaf(v) {
                let s: u32 = self.children(v).iter().map(|&c| self.leaf_count(c)).sum();
                if s != self.leaf_count(v) {
                    return invariant(format!("leaf count mismatch at {v}"));
                }
            }
            let l = self.link(v);
            if l != NONE && !self.link.is_empty() && self.depth[l as usize] + 1 != self.depth[v as usize] {
                return invariant(format!("suffix link of {v} has wrong depth"));
            }
        }
        Ok(())
    }
}

impl SpaceUsage for SuffixTree {
    fn words(&self) -> u64 {
        self.text.words()
            + self.parent.words()
            + self.depth.words()
            + self.child_off.words()
            + self.children.words()
            + self.link.words()
            + self.sa_lo.words()
            + self.sa_hi.words()
            + self.sa.words()
            + self.rank_leaf.words()
            + self.pos_leaf.words()
            + self.docs.base.words()
            + 2 * self.docs.docs.len() as u64
    }
}

impl From<std::num::TryFromIntError> for Error {
    fn from(e: std::num::TryFromIntError) -> Self {
        Error::InvalidArgument(e.to_string())
    }
}

#[cfg(test)]
mod tests;
