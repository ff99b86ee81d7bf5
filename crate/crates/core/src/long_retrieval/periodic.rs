use crate::error::{invalid, Error, Result};
use crate::nested_pred::{Flavor, PinsIndex};
use crate::probe;
use crate::space::SpaceUsage;
use crate::strcore::{compute_period, is_primitive, least_rotation, maximal_run, Interval};
use crate::suffix_tree::{NodeId, SuffixTree, NONE};
use crate::tree_tools::LevelAncestorIndex;
use serde::{Deserialize, Serialize};

/// Periodic structure of one document, when its middle part is periodic.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct DocPeriod {
    /// Smallest period of the middle part.
    pub period: u32,
    /// First position (1-based, document-local) of the maximal run.
    pub run_start: u32,
    /// Last position of the maximal run.
    pub run_end: u32,
    /// Position inside the run where the Lyndon rotation starts.
    pub anchor: u32,
    /// Family holding the Lyndon word, `NONE` when not periodic.
    pub family: u32,
}

impl DocPeriod {
    /// Descriptor of a document without a periodic middle part.
    pub const NOT_PERIODIC: DocPeriod =
        DocPeriod { period: 0, run_start: 0, run_end: 0, anchor: 0, family: NONE };
}

/// Detects a periodic middle part `doc[q+1..th]`, where `th` is the long
/// threshold and `q = ell - th`, with period at most `q`. Returns the
/// period, the maximal run around the middle part, and the start of the
/// Lyndon rotation inside the run.
pub fn detect_period(doc: &[u8], ell: usize, threshold: usize) -> Option<(usize, Interval, usize)> {
    let q = ell.saturating_sub(threshold);
    if q == 0 || doc.len() < threshold {
        return None;
    }
    let p = compute_period(&doc[q..threshold]).ok()?;
    if p > q {
        return None;
    }
    let run = maximal_run(doc, Interval::new(q + 1, threshold), p).ok()?;
    let k = least_rotation(&doc[run.start - 1..run.start - 1 + p]);
    Some((p, run, run.start + k))
}

/// Prefix length, entry point and deepest explicit node of one rotation
/// path.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct RotationPath {
    /// String depth where the first fragment begins (exclusive).
    pub prefix: u32,
    /// Tree depth of the first node at string depth above `prefix`.
    pub entry_td: u32,
    /// String depth of the deepest explicit node on the path.
    pub deep_depth: u32,
    /// Tree depth of that node.
    pub deep_td: u32,
}

/// Index over the substrings of `r^∞` for one Lyndon word `r`.
///
/// Rotation `i` starts with `r[i..]`. Its path is cut after a prefix whose
/// length lies in `[th - |r|, th - 1]` and below that into fragments of
/// `|r|` symbols. Fragment sets hold offsets `1..=|r|` of explicit nodes;
/// following a suffix link maps a fragment set into the next rotation's
/// set, so all sets form one nested sequence.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PeriodicFamily {
    /// The Lyndon word as an interval of the master text.
    pub word: Interval,
    period: u32,
    first_rotation: u32,
    fragments: u32,
    rotations: Vec<RotationPath>,
    min_td: Vec<u32>,
    pins: Option<PinsIndex>,
}

/// One document of a family with its periodic descriptor.
#[derive(Debug, Clone, Copy)]
pub struct FamilyMember {
    /// 0-based document index.
    pub doc: usize,
    /// The document's periodic descriptor.
    pub period: DocPeriod,
}

fn prefix_length(threshold: u32, p: u32, i: u32) -> u32 {
    let lo = threshold - p;
    lo + ((p - i + 1) as i64 - lo as i64).rem_euclid(p as i64) as u32
}

/// Builds the family for the Lyndon word `master[word]` from its member
/// documents. Also returns the explicit nodes stored in fragment sets.
pub fn build_periodic_family(
    t: &SuffixTree,
    la: &LevelAncestorIndex,
    master: &[u8],
    word: Interval,
    members: &[FamilyMember],
    threshold: u32,
    flavor: Flavor,
) -> Result<(PeriodicFamily, Vec<NodeId>)> {
    let r = &master[word.start - 1..word.end];
    if r.is_empty() || !is_primitive(r)? || least_rotation(r) != 0 {
        return invalid("family word must be a primitive Lyndon word");
    }
    let p = r.len() as u32;
    if p >= threshold || members.is_empty() {
        return invalid("family word too long or family empty");
    }
    let mut rotations = Vec::with_capacity(p as usize);
    let mut per_rotation: Vec<Vec<NodeId>> = Vec::with_capacity(p as usize);
    let mut fragments = 0u32;
    for i in 1..=p {
        let prefix = prefix_length(threshold, p, i);
        let (mut best_len, mut best) = (0u32, (0usize, 0u32));
        for m in members {
            let d = m.period;
            let pos = d.run_start + (d.anchor + i - 1 - d.run_start) % p;
            let len = d.run_end + 1 - pos;
            if len > best_len {
                best_len = len;
                best = (m.doc, pos);
            }
        }
        if best_len <= prefix {
            // No document reaches the fragments of this rotation, so no
            // long query ever starts in it.
            rotations.push(RotationPath { prefix, entry_td: 0, deep_depth: 0, deep_td: 0 });
            per_rotation.push(Vec::new());
            continue;
        }
        let leaf = t.leaf_of(best.0, best.1 as usize)?;
        let (mut lo, mut hi) = (0u32, la.depth(leaf));
        while lo < hi {
            let mid = (lo + hi).div_ceil(2);
            if t.string_depth(la.query(leaf, mid)) <= best_len {
                lo = mid;
            } else {
                hi = mid - 1;
            }
        }
        let deep = la.query(leaf, lo);
        let mut nodes = Vec::new();
        let mut v = deep;
        while t.string_depth(v) > prefix {
            nodes.push(v);
            v = t.parent(v);
        }
        nodes.reverse();
        if let Some(&last) = nodes.last() {
            fragments = fragments.max((t.string_depth(last) - prefix).div_ceil(p));
        }
        rotations.push(RotationPath {
            prefix,
            entry_td: la.depth(v) + 1,
            deep_depth: t.string_depth(deep),
            deep_td: la.depth(deep),
        });
        per_rotation.push(nodes);
    }
    let first_rotation = ((1 - threshold as i64).rem_euclid(p as i64) + 1) as u32;
    let slots = (p * fragments) as usize;
    let mut sets: Vec<Vec<u32>> = vec![Vec::new(); slots];
    let mut min_td = vec![NONE; slots];
    let mut stored = Vec::new();
    for (k, nodes) in per_rotation.iter().enumerate() {
        let i = k as u32 + 1;
        let prefix = rotations[k].prefix;
        for &v in nodes {
            let rel = t.string_depth(v) - prefix;
            let f = rel.div_ceil(p);
            let d = rel - p * (f - 1);
            let idx = set_slot(p, fragments, first_rotation, i, f);
            sets[idx].push(d);
            min_td[idx] = min_td[idx].min(la.depth(v));
            stored.push(v);
        }
    }
    let pins = if slots == 0 {
        None
    } else {
        let refs: Vec<&[u32]> = sets.iter().map(|s| s.as_slice()).collect();
        Some(
            PinsIndex::build_range(1, p as u64, &refs, flavor)
                .map_err(|e| Error::Invariant(format!("family sets rejected: {e}")))?,
        )
    };
    Ok((PeriodicFamily { word, period: p, first_rotation, fragments, rotations, min_td, pins }, stored))
}

#[inline]
fn set_slot(p: u32, fragments: u32, first: u32, i: u32, f: u32) -> usize {
    ((fragments - f) * p + (i + p - first) % p) as usize
}

impl PeriodicFamily {
    /// Length of the Lyndon word.
    pub fn period(&self) -> u32 {
        self.period
    }

    /// Number of fragments per rotation.
    pub fn fragments(&self) -> u32 {
        self.fragments
    }

    /// Rotation path records, indexed by rotation minus one.
    pub fn rotations(&self) -> &[RotationPath] {
        &self.rotations
    }

    /// Tree depth of the shallowest node at string depth `>= l` on the
    /// path of rotation `i` (1-based), for `l` at least the threshold.
    pub fn node_below_td(&self, i: u32, l: u32) -> u32 {
        probe::hit(2);
        let rot = self.rotations[i as usize - 1];
        let x = l - 1;
        if x >= rot.deep_depth {
            return rot.deep_td + 1;
        }
        if x <= rot.prefix {
            return rot.entry_td;
        }
        let p = self.period;
        let f = (x - rot.prefix).div_ceil(p);
        let d = x - rot.prefix - p * (f - 1);
        let pins = self.pins.as_ref().expect("fragments exist below the deepest node");
        let idx = set_slot(p, self.fragments, self.first_rotation, i, f);
        if let Some((rank, _)) = pins.pred(idx, d as u64) {
            probe::hit(1);
            return self.min_td[idx] + rank as u32;
        }
        if f > 1 {
            let idx = set_slot(p, self.fragments, self.first_rotation, i, f - 1);
            if let Some((rank, _)) = pins.pred(idx, p as u64) {
                probe::hit(1);
                return self.min_td[idx] + rank as u32;
            }
        }
        rot.entry_td
    }
}

impl SpaceUsage for PeriodicFamily {
    fn words(&self) -> u64 {
        4 + self.rotations.len() as u64 * 2 + self.min_td.words() + self.pins.words()
    }
}
