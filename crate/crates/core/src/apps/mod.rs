//! Applications of substring locus queries: substring search with
//! occurrence reporting, perfect substring hashing and pattern matching
//! across documents.

#[cfg(test)]
mod tests;

use crate::error::{invalid, Result};
use crate::strcore::Interval;
use crate::suffix_tree::{build_gst, DocumentSet, Locus, NodeId, SuffixTree};
use crate::tree_tools::LevelAncestorIndex;
use crate::wa_index::WaIndex;
use serde::{Deserialize, Serialize};

/// Canonical identifier of a locus: the explicit node itself, or for a
/// point inside an edge the node at the lower end of that edge.
pub fn locus_id(l: &Locus) -> NodeId {
    l.node_below()
}

/// Starting positions (1-based, increasing) of all occurrences of the
/// string whose locus is `l` in the text of `st`.
pub fn occurrences(st: &SuffixTree, l: &Locus) -> Vec<usize> {
    let (lo, hi) = st.rank_range(l.node_below());
    let mut out: Vec<usize> = (lo..=hi).map(|r| st.suffix_at_rank(r) as usize + 1).collect();
    out.sort_unstable();
    out
}

/// Result of a substring search.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SearchResult {
    /// Locus of the substring.
    pub locus: Locus,
    /// Starting positions of its occurrences, empty unless requested.
    pub occurrences: Vec<usize>,
}

/// Locus of `w[i..j]` and, when `report` is set, every starting position
/// of that substring in `w`.
pub fn substring_search(idx: &WaIndex, i: usize, j: usize, report: bool) -> Result<SearchResult> {
    let locus = idx.substring_locus(i, j)?;
    let occurrences = if report { occurrences(idx.tree(), &locus) } else { Vec::new() };
    Ok(SearchResult { locus, occurrences })
}

/// Perfect hash of a substring: the canonical id of its locus and its
/// length. Two substrings of the same text hash equal exactly when they
/// are equal strings.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct SubstringHash {
    /// Canonical locus id.
    pub locus: NodeId,
    /// Substring length.
    pub len: u32,
}

impl SubstringHash {
    /// Bits used for the length field when packing hashes of a text of
    /// length `n`.
    pub fn length_bits(n: usize) -> u32 {
        usize::BITS - n.leading_zeros()
    }

    /// The hash as one integer of `bits(num_nodes) + bits(n)` bits.
    pub fn packed(&self, n: usize) -> u64 {
        ((self.locus as u64) << Self::length_bits(n)) | self.len as u64
    }

    /// Inverse of [`SubstringHash::packed`].
    pub fn unpack(x: u64, n: usize) -> SubstringHash {
        let b = Self::length_bits(n);
        SubstringHash { locus: (x >> b) as NodeId, len: (x & ((1u64 << b) - 1)) as u32 }
    }
}

/// Hash of `w[i..j]`.
pub fn substring_hash(idx: &WaIndex, i: usize, j: usize) -> Result<SubstringHash> {
    let l = idx.substring_locus(i, j)?;
    Ok(SubstringHash { locus: locus_id(&l), len: (j - i + 1) as u32 })
}

/// Occurrence index over a collection of documents: their generalised
/// suffix tree and, per document, the sorted leaf ranks of its suffixes.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DocOccurrenceIndex {
    tree: SuffixTree,
    la: LevelAncestorIndex,
    ranks: Vec<Vec<u32>>,
}

impl DocOccurrenceIndex {
    /// Builds the index of `docs`; every document must be non-empty.
    pub fn build<D: AsRef<[u8]>>(docs: &[D]) -> Result<DocOccurrenceIndex> {
        if docs.is_empty() || docs.iter().any(|d| d.as_ref().is_empty()) {
            return invalid("documents must be non-empty and at least one must be given");
        }
        let mut master = Vec::new();
        let mut ivs = Vec::with_capacity(docs.len());
        for d in docs {
            let d = d.as_ref();
            ivs.push(Interval::new(master.len() + 1, master.len() + d.len()));
            master.extend_from_slice(d);
        }
        let nominal = docs.iter().map(|d| d.as_ref().len()).max().unwrap_or(0);
        let tree = build_gst(&master, DocumentSet::new(ivs, nominal))?;
        let la = LevelAncestorIndex::build(tree.parents())?;
        let mut ranks = vec![Vec::new(); docs.len()];
        for r in 0..tree.num_leaves() as u32 {
            let (d, off) = tree.leaf_origin(tree.leaf_at_rank(r));
            if off <= tree.docs().doc_len(d) {
                ranks[d].push(r);
            }
        }
        Ok(DocOccurrenceIndex { tree, la, ranks })
    }

    /// Number of documents.
    pub fn num_docs(&self) -> usize {
        self.ranks.len()
    }

    /// The generalised suffix tree.
    pub fn tree(&self) -> &SuffixTree {
        &self.tree
    }

    /// Locus of `w_doc[i..j]` (0-based `doc`, 1-based inclusive `i..j`):
    /// the shallowest ancestor of the suffix leaf whose string depth
    /// reaches the length, found by binary search over tree depths.
    pub fn locus(&self, doc: usize, i: usize, j: usize) -> Result<Locus> {
        if doc >= self.num_docs() || i == 0 || i > j || j > self.tree.docs().doc_len(doc) {
            return invalid(format!("bad substring ({doc}, {i}, {j})"));
        }
        let l = (j - i + 1) as u32;
        let leaf = self.tree.leaf_of(doc, i)?;
        let (mut lo, mut hi) = (0u32, self.la.depth(leaf));
        while lo < hi {
            let mid = (lo + hi) / 2;
            if self.tree.string_depth(self.la.query(leaf, mid)) >= l {
                hi = mid;
            } else {
                lo = mid + 1;
            }
        }
        let y = self.la.query(leaf, lo);
        Ok(if self.tree.string_depth(y) == l {
            Locus::Explicit(y)
        } else {
            Locus::Implicit { parent: self.tree.parent(y), child: y, depth: l }
        })
    }

    /// Starting offsets (1-based, increasing) in document `target` of the
    /// occurrences of `w_doc[i..j]`.
    pub fn cross_doc_search(&self, doc: usize, i: usize, j: usize, target: usize) -> Result<Vec<usize>> {
        if target >= self.num_docs() {
            return invalid(format!("no document {target}"));
        }
        let l = self.locus(doc, i, j)?;
        let (lo, hi) = self.tree.rank_range(l.node_below());
        let rk = &self.ranks[target];
        let a = rk.partition_point(|&r| r < lo);
        let b = rk.partition_point(|&r| r <= hi);
        let mut out: Vec<usize> = rk[a..b].iter().map(|&r| self.tree.leaf_origin(self.tree.leaf_at_rank(r)).1).collect();
        out.sort_unstable();
        Ok(out)
    }
}
