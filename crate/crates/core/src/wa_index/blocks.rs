use crate::error::{invalid, Result};
use crate::long_retrieval::{build_long_instance_checked, truncation_length, InvariantReport, LongInstance, LongOptions};
use crate::space::SpaceUsage;
use crate::strcore::Interval;
use crate::suffix_tree::{DocumentSet, Locus, NodeId, SuffixTree, NONE};
use crate::tree_tools::{LevelAncestorIndex, MarkedPredIndex};
use serde::{Deserialize, Serialize};
use std::collections::HashMap;

/// Smallest query length served by an instance.
pub const MIN_LONG_QUERY: usize = 6;

/// Smallest block multiplier.
pub const ALPHA_MIN: u32 = 8;
/// Largest block multiplier reachable from [`choose_instance`].
pub const ALPHA_MAX: u32 = 13;

const ALPHAS: usize = (ALPHA_MAX - ALPHA_MIN + 1) as usize;

/// Block exponent `k` and multiplier `alpha` of the instance serving
/// queries of length `l`: `(alpha - 2) 2^k <= l < (alpha - 1) 2^k`.
pub fn choose_instance(l: usize) -> Result<(u32, u32)> {
    if l < MIN_LONG_QUERY {
        return invalid(format!("length {l} is below {MIN_LONG_QUERY}"));
    }
    let k = (l / MIN_LONG_QUERY).ilog2();
    let alpha = (l >> k) as u32 + 2;
    Ok((k, alpha))
}

/// Slot of instance `(k, alpha)` in the registry.
#[inline]
pub fn instance_slot(k: u32, alpha: u32) -> usize {
    k as usize * ALPHAS + (alpha - ALPHA_MIN) as usize
}

/// All instance keys needed for a text of length `n`.
pub fn instance_keys(n: usize) -> Vec<(u32, u32)> {
    let mut out = Vec::new();
    let mut k = 0u32;
    while (MIN_LONG_QUERY << k) <= n {
        for alpha in ALPHA_MIN..=ALPHA_MAX {
            if ((alpha as usize - 2) << k) <= n {
                out.push((k, alpha));
            }
        }
        k += 1;
    }
    out
}

/// Nominal length `alpha 2^k` and long threshold of an instance.
pub fn instance_ell(k: u32, alpha: u32) -> usize {
    (alpha as usize) << k
}

/// Block documents `w'_d = b_d .. b_{d+alpha-1}` of a text of length `n`,
/// the last one cut at the end of the text.
pub fn block_documents(n: usize, k: u32, alpha: u32) -> Vec<Interval> {
    let b = 1usize << k;
    let blocks = n.div_ceil(b);
    let count = if blocks >= alpha as usize { blocks + 1 - alpha as usize } else { 1 };
    (0..count)
        .map(|d| {
            let s = d * b + 1;
            Interval::new(s, (s + (alpha as usize) * b - 1).min(n))
        })
        .collect()
}

/// Longest suffix of `doc` whose locus in the suffix tree of the text has
/// an explicit ancestor at string depth in `[threshold, |suffix|]`. Marks
/// must include, for `threshold`, the shallowest node at string depth at
/// least `threshold` on every root path. Returns the 1-based start
/// offset, or `None` when no suffix of length at least `threshold`
/// qualifies.
pub fn shorten_document(st: &SuffixTree, marks: &MarkedPredIndex, doc: Interval, threshold: u32) -> Option<usize> {
    let len = doc.len();
    let th = threshold as usize;
    if len < th {
        return None;
    }
    (1..=len + 1 - th).find(|&o| {
        let g = doc.start + o - 1;
        let leaf = st.leaf_at_position(g - 1);
        marks
            .succ(leaf, threshold as u64)
            .is_some_and(|y| st.string_depth(y) as usize <= doc.end + 1 - g)
    })
}

/// One long-retrieval instance over block documents, with its document
/// table and the map from its tree to the suffix tree of the text.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BlockInstance {
    /// Block exponent.
    pub k: u32,
    /// Block multiplier.
    pub alpha: u32,
    doc_local: Vec<u32>,
    doc_shift: Vec<u32>,
    long: Option<LongInstance>,
    entry: Vec<NodeId>,
}

/// Counts describing one built instance.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct InstanceStats {
    /// Block exponent.
    pub k: u32,
    /// Block multiplier.
    pub alpha: u32,
    /// Nominal document length.
    pub ell: usize,
    /// Block documents before shortening.
    pub block_docs: usize,
    /// Distinct documents indexed.
    pub indexed_docs: usize,
    /// Total length of indexed documents.
    pub indexed_len: usize,
    /// Explicit nodes of the instance tree.
    pub nodes: usize,
    /// Words used.
    pub words: u64,
}

/// Inputs shared by all instances of one text.
pub(crate) struct BuildContext<'a> {
    pub text: &'a [u8],
    pub st: &'a SuffixTree,
    pub st_la: &'a LevelAncestorIndex,
    pub marks: Option<&'a MarkedPredIndex>,
    pub compact: bool,
    pub check: bool,
}

impl BlockInstance {
    pub(crate) fn build(ctx: &BuildContext, k: u32, alpha: u32) -> Result<(BlockInstance, InvariantReport)> {
        let n = ctx.text.len();
        let ell = instance_ell(k, alpha);
        let blocks = block_documents(n, k, alpha);
        let threshold = crate::long_retrieval::long_threshold(ell);
        let mut doc_local = vec![NONE; blocks.len()];
        let mut doc_shift = vec![0u32; blocks.len()];
        let mut seen: HashMap<&[u8], u32> = HashMap::new();
        let mut local: Vec<Interval> = Vec::new();
        for (d, iv) in blocks.iter().enumerate() {
            let start = match ctx.marks {
                Some(m) if ctx.compact => match shorten_document(ctx.st, m, *iv, threshold) {
                    Some(o) => o,
                    None => continue,
                },
                _ => 1,
            };
            let kept = Interval::new(iv.start + start - 1, iv.end);
            let id = *seen.entry(&ctx.text[kept.start - 1..kept.end]).or_insert_with(|| {
                local.push(kept);
                local.len() as u32 - 1
            });
            doc_local[d] = id;
            doc_shift[d] = start as u32 - 1;
        }
        let mut rep = InvariantReport::default();
        if local.is_empty() {
            let inst = BlockInstance { k, alpha, doc_local, doc_shift, long: None, entry: Vec::new() };
            return Ok((inst, rep));
        }
        let opts = LongOptions { compact: ctx.compact, keep_text: false, truncate: true, check: ctx.check };
        let (mut long, r) = build_long_instance_checked(ctx.text, DocumentSet::new(local.clone(), ell), opts)?;
        rep.absorb(r);
        let entry = entry_map(ctx, &long, &local, ell);
        long.slim();
        Ok((BlockInstance { k, alpha, doc_local, doc_shift, long: Some(long), entry }, rep))
    }

    /// Nominal document length.
    pub fn ell(&self) -> usize {
        instance_ell(self.k, self.alpha)
    }

    /// The long-retrieval instance, absent when every document was removed.
    pub fn long(&self) -> Option<&LongInstance> {
        self.long.as_ref()
    }

    /// Locus in the suffix tree of the text of the query `w[i..i+l-1]`,
    /// or `None` when the document holding it was shortened past `i`.
    pub(crate) fn locate(&self, st: &SuffixTree, i: usize, l: u32) -> Result<Option<Locus>> {
        crate::probe::hit(2);
        let d = ((i - 1) >> self.k).min(self.doc_local.len() - 1);
        let o = i - (d << self.k);
        let (id, shift) = (self.doc_local[d], self.doc_shift[d] as usize);
        let long = match &self.long {
            Some(x) if id != NONE && o > shift => x,
            _ => return Ok(None),
        };
        let gst = long.locate(id as usize, o - shift, l)?;
        crate::probe::hit(1);
        let y = self.entry[gst.node_below() as usize];
        Ok(Some(edge_locus(st, y, l)))
    }

    /// Counts for statistics.
    pub fn stats(&self) -> InstanceStats {
        let (indexed_docs, indexed_len, nodes) = match &self.long {
            Some(l) => {
                let d = l.tree().docs();
                (d.len(), d.total_len() - d.len(), l.tree().num_nodes())
            }
            None => (0, 0, 0),
        };
        InstanceStats {
            k: self.k,
            alpha: self.alpha,
            ell: self.ell(),
            block_docs: self.doc_local.len(),
            indexed_docs,
            indexed_len,
            nodes,
            words: self.words(),
        }
    }
}

/// Locus at string depth `l` on the edge entering `y`, or `y` itself.
#[inline]
pub(crate) fn edge_locus(st: &SuffixTree, y: NodeId, l: u32) -> Locus {
    crate::probe::hit(1);
    if st.string_depth(y) == l {
        Locus::Explicit(y)
    } else {
        crate::probe::hit(1);
        Locus::Implicit { parent: st.parent(y), child: y, depth: l }
    }
}

/// For every instance node at string depth at least the threshold, the
/// shallowest node of the text's suffix tree on the same root path whose
/// string depth is at least `max(m, depth(parent) + 1)`, where `m` is the
/// truncation length.
fn entry_map(ctx: &BuildContext, long: &LongInstance, local: &[Interval], ell: usize) -> Vec<NodeId> {
    let t = long.tree();
    let th = long.threshold();
    let m = truncation_length(ell) as u32;
    let (st, la) = (ctx.st, ctx.st_la);
    (0..t.num_nodes() as NodeId)
        .map(|v| {
            if t.string_depth(v) < th {
                return NONE;
            }
            let leaf = t.leaf_at_rank(t.rank_range(v).0);
            let (doc, off) = t.leaf_origin(leaf);
            let g = local[doc].start + off - 1;
            let lam = st.leaf_at_position(g - 1);
            let lb = m.max(t.string_depth(t.parent(v)) + 1);
            let (mut lo, mut hi) = (0u32, la.depth(lam));
            while lo < hi {
                let mid = (lo + hi) / 2;
                if st.string_depth(la.query(lam, mid)) >= lb {
                    hi = mid;
                } else {
                    lo = mid + 1;
                }
            }
            la.query(lam, lo)
        })
        .collect()
}

impl SpaceUsage for BlockInstance {
    fn words(&self) -> u64 {
        2 + self.doc_local.words() + self.doc_shift.words() + self.long.words() + self.entry.words()
    }
}
