//! Predecessor search in collections of nested sets.
//!
//! [`PinsIndex`] handles fully nested collections `S_1 ⊆ S_2 ⊆ … ⊆ S_k`.
//! [`PisnsIndex`] handles shrinking nested collections, where set `S_i`
//! lives above a lower bound `m_i` and only its part above `m_{i+1}` has
//! to reappear in `S_{i+1}`. Both come in a baseline flavour with dense
//! tables and a compact flavour built on [`PackedRankSelect`].
//!
//! [`PackedRankSelect`]: crate::bitvec::PackedRankSelect

mod pins;
mod pisns;

pub use pins::PinsIndex;
pub use pisns::PisnsIndex;

use serde::{Deserialize, Serialize};

/// A predecessor answer: 1-based rank within the queried set and the value.
pub type Pred = (u64, u64);

/// Storage flavour for nested-set structures.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Flavor {
    /// Dense per-group tables over the whole universe.
    Baseline,
    /// Packed rank/select tables with the given depth parameter.
    Compact { t: u32 },
}

/// Largest element `<= x` of a sorted set with its 1-based rank.
pub fn naive_predecessor(set: &[u64], x: u64) -> Option<Pred> {
    let r = set.partition_point(|&v| v <= x);
    if r == 0 {
        None
    } else {
        Some((r as u64, set[r - 1]))
    }
}

/// Input for the nested-set builders.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct SetCollection {
    /// Universe bound `N`: every element lies in `[1, N]`.
    pub universe: u64,
    /// The sets, each strictly increasing.
    pub sets: Vec<Vec<u64>>,
    /// Lower bounds `m_i`; only used by the shrinking variant.
    pub lower: Vec<u64>,
}

impl SetCollection {
    /// A nested collection over `[1, universe]`.
    pub fn nested(universe: u64, sets: Vec<Vec<u64>>) -> SetCollection {
        SetCollection { universe, sets, lower: Vec::new() }
    }

    /// A shrinking nested collection over `[1, universe]`.
    pub fn shrinking(universe: u64, sets: Vec<Vec<u64>>, lower: Vec<u64>) -> SetCollection {
        SetCollection { universe, sets, lower }
    }
}
