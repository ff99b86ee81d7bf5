//! Constant-time substring locus queries over suffix trees.
//!
//! Given a text `w`, [`WaIndex`] answers, for any pair `(i, j)`, the
//! position of `w[i..j]` in the suffix tree of `w$`: either an explicit
//! node or a point inside an edge. The index combines a block
//! decomposition of the text into overlapping documents, generalised
//! suffix trees over those documents, predecessor structures over nested
//! sets attached to level paths, and dedicated structures for periodic
//! substrings.

pub mod apps;
pub mod bitvec;
pub mod cli;
pub mod error;
pub mod long_retrieval;
pub mod nested_pred;
pub mod probe;
pub mod space;
pub mod strcore;
pub mod suffix_tree;
pub mod tree_tools;
pub mod wa_index;

pub use error::{Error, Result};
