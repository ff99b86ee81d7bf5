//! String combinatorics over an integer alphabet.
//!
//! Symbols `0..=255` are text bytes. Symbols from [`SEPARATOR_BASE`] upwards
//! are document separators, each used at most once per index build.

use crate::error::{invalid, Result};
use serde::{Deserialize, Serialize};

/// One letter of the integer alphabet.
pub type Symbol = u32;

/// First symbol value used for separators.
pub const SEPARATOR_BASE: Symbol = 256;

/// Returns the separator symbol for document `i` (0-based).
#[inline]
pub fn separator(i: usize) -> Symbol {
    SEPARATOR_BASE + i as Symbol
}

/// Returns true when `s` is a separator rather than a text byte.
#[inline]
pub fn is_separator(s: Symbol) -> bool {
    s >= SEPARATOR_BASE
}

/// Converts raw bytes to symbols.
pub fn symbols_of(bytes: &[u8]) -> Vec<Symbol> {
    bytes.iter().map(|&b| b as Symbol).collect()
}

/// A 1-based inclusive interval `[start, end]` of string positions.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Interval {
    pub start: usize,
    pub end: usize,
}

impl Interval {
    pub fn new(start: usize, end: usize) -> Interval {
        Interval { start, end }
    }

    pub fn len(&self) -> usize {
        self.end + 1 - self.start
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn contains(&self, other: &Interval) -> bool {
        self.start <= other.start && other.end <= self.end
    }
}

/// Knuth-Morris-Pratt failure function: `f[i]` is the length of the longest
/// proper border of `s[..=i]`.
pub fn failure_function<T: Eq>(s: &[T]) -> Vec<usize> {
    let mut f = vec![0usize; s.len()];
    let mut k = 0usize;
    for i in 1..s.len() {
        while k > 0 && s[i] != s[k] {
            k = f[k - 1];
        }
        if s[i] == s[k] {
            k += 1;
        }
        f[i] = k;
    }
    f
}

/// Smallest period of `s`.
pub fn compute_period<T: Eq>(s: &[T]) -> Result<usize> {
    if s.is_empty() {
        return invalid("period of an empty string");
    }
    let f = failure_function(s);
    Ok(s.len() - f[s.len() - 1])
}

/// Returns true when `s` is not a proper power of a shorter string.
pub fn is_primitive<T: Eq>(s: &[T]) -> Result<bool> {
    let p = compute_period(s)?;
    Ok(p == s.len() || !s.len().is_multiple_of(p))
}

/// 1-based index `i` such that `s[i..] s[..i-1]` is the lexicographically
/// least rotation of `s` (Booth's algorithm).
pub fn lyndon_rotation<T: Ord + Eq>(s: &[T]) -> Result<usize> {
    if !is_primitive(s)? {
        return invalid("lyndon rotation of a non-primitive string is not unique");
    }
    Ok(least_rotation(s) + 1)
}

/// 0-based start of the least rotation of `s` (Booth's algorithm).
pub fn least_rotation<T: Ord>(s: &[T]) -> usize {
    let n = s.len();
    if n == 0 {
        return 0;
    }
    let at = |i: usize| &s[i % n];
    let mut f: Vec<isize> = vec![-1; 2 * n];
    let mut k = 0usize;
    for j in 1..2 * n {
        let sj = at(j);
        let mut i = f[j - k - 1];
        while i != -1 && sj != at(k + i as usize + 1) {
            if sj < at(k + i as usize + 1) {
                k = j - i as usize - 1;
            }
            i = f[i as usize];
        }
        if i == -1 && sj != at(k) {
            if sj < at(k) {
                k = j;
            }
            f[j - k] = -1;
        } else {
            f[j - k] = i + 1;
        }
    }
    k % n
}

/// Extends `seed` to the maximal interval of `w` on which `p` is a period.
pub fn maximal_run<T: Eq>(w: &[T], seed: Interval, p: usize) -> Result<Interval> {
    if p == 0 || seed.start == 0 || seed.start > seed.end || seed.end > w.len() {
        return invalid("maximal_run: bad seed interval or period");
    }
    let (s, e) = (seed.start - 1, seed.end - 1);
    if (s..=e).any(|i| i + p <= e && w[i] != w[i + p]) {
        return invalid("maximal_run: p is not a period of the seed");
    }
    let (mut lo, mut hi) = (s, e);
    loop {
        let mut grew = false;
        while hi + 1 < w.len() && (hi + 1 < lo + p || w[hi + 1] == w[hi + 1 - p]) {
            hi += 1;
            grew = true;
        }
        while lo > 0 && (lo - 1 + p > hi || w[lo - 1] == w[lo - 1 + p]) {
            lo -= 1;
            grew = true;
        }
        if !grew {
            break;
        }
    }
    Ok(Interval::new(lo + 1, hi + 1))
}
