use super::{BlockInstance, Mode, WaIndex};
use crate::error::{Error, Result};
use crate::suffix_tree::SuffixTree;
use crate::tree_tools::MarkedPredIndex;
use serde::{Deserialize, Serialize};
use std::io::{Read, Write};
use std::path::Path;

use super::short::ShortIndex;

/// File signature of a serialized index.
pub const MAGIC: &[u8; 5] = b"STWA1";

/// Container version written by this library.
pub const FORMAT_VERSION: u32 = 1;

const SECTIONS: [&[u8; 8]; 5] = [b"meta\0\0\0\0", b"tree\0\0\0\0", b"short\0\0\0", b"marks\0\0\0", b"insts\0\0\0"];

#[derive(Serialize, Deserialize)]
struct Meta {
    mode: Mode,
    n: u64,
}

fn encode<T: Serialize>(x: &T) -> Result<Vec<u8>> {
    bincode::serialize(x).map_err(|e| Error::Format(e.to_string()))
}

fn decode<'a, T: Deserialize<'a>>(b: &'a [u8], name: &str) -> Result<T> {
    bincode::deserialize(b).map_err(|e| Error::Format(format!("section {name}: {e}")))
}

fn format_err<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::Format(msg.into()))
}

impl WaIndex {
    /// Serializes the index: the signature, a version, a section table of
    /// `(name, offset, length)` entries and the little-endian section
    /// payloads.
    pub fn to_bytes(&self) -> Result<Vec<u8>> {
        let payloads = [
            encode(&Meta { mode: self.mode, n: self.n as u64 })?,
            encode(&self.tree)?,
            encode(&self.short)?,
            encode(&self.marks)?,
            encode(&self.instances)?,
        ];
        let header = MAGIC.len() + 4 + 4 + SECTIONS.len() * 24;
        let mut out = Vec::with_capacity(header + payloads.iter().map(|p| p.len()).sum::<usize>());
        out.extend_from_slice(MAGIC);
        out.extend_from_slice(&FORMAT_VERSION.to_le_bytes());
        out.extend_from_slice(&(SECTIONS.len() as u32).to_le_bytes());
        let mut off = header as u64;
        for (name, p) in SECTIONS.iter().zip(&payloads) {
            out.extend_from_slice(*name);
            out.extend_from_slice(&off.to_le_bytes());
            out.extend_from_slice(&(p.len() as u64).to_le_bytes());
            off += p.len() as u64;
        }
        for p in &payloads {
            out.extend_from_slice(p);
        }
        Ok(out)
    }

    /// Reads an index written by [`WaIndex::to_bytes`].
    pub fn from_bytes(b: &[u8]) -> Result<WaIndex> {
        if b.len() < MAGIC.len() + 8 || &b[..MAGIC.len()] != MAGIC {
            return format_err("missing STWA1 signature");
        }
        let word = |at: usize| u32::from_le_bytes(b[at..at + 4].try_into().unwrap());
        let version = word(MAGIC.len());
        if version != FORMAT_VERSION {
            return format_err(format!("unsupported version {version}"));
        }
        let count = word(MAGIC.len() + 4) as usize;
        let table = MAGIC.len() + 8;
        if count != SECTIONS.len() || b.len() < table + count * 24 {
            return format_err("truncated or unexpected section table");
        }
        let mut parts: Vec<&[u8]> = Vec::with_capacity(count);
        for (s, name) in SECTIONS.iter().enumerate() {
            let e = table + s * 24;
            if &b[e..e + 8] != *name {
                return format_err(format!("section {s} has an unexpected name"));
            }
            let off = u64::from_le_bytes(b[e + 8..e + 16].try_into().unwrap()) as usize;
            let len = u64::from_le_bytes(b[e + 16..e + 24].try_into().unwrap()) as usize;
            match off.checked_add(len) {
                Some(end) if end <= b.len() => parts.push(&b[off..end]),
                _ => return format_err(format!("section {s} lies outside the file")),
            }
        }
        let meta: Meta = decode(parts[0], "meta")?;
        let tree: SuffixTree = decode(parts[1], "tree")?;
        let short: ShortIndex = decode(parts[2], "short")?;
        let marks: Option<MarkedPredIndex> = decode(parts[3], "marks")?;
        let instances: Vec<Option<BlockInstance>> = decode(parts[4], "insts")?;
        if tree.docs().len() != 1 || tree.docs().doc_len(0) != meta.n as usize {
            return format_err("text length does not match the tree");
        }
        Ok(WaIndex { mode: meta.mode, n: meta.n as usize, tree, short, marks, instances })
    }

    /// Writes the index to `path`.
    pub fn save(&self, path: &Path) -> Result<()> {
        let bytes = self.to_bytes()?;
        let mut f = std::fs::File::create(path)?;
        f.write_all(&bytes)?;
        Ok(())
    }

    /// Loads an index from `path`.
    pub fn load(path: &Path) -> Result<WaIndex> {
        let mut bytes = Vec::new();
        std::fs::File::open(path)?.read_to_end(&mut bytes)?;
        Self::from_bytes(&bytes)
    }
}
