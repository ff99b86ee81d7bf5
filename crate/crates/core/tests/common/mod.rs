#![allow(dead_code)]

use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

/// Input families used across the integration suites.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Family {
    Random(u8),
    Unary,
    Square,
    Fibonacci,
    UnaryThenB,
    Rotations,
}

pub const ALL: [Family; 9] = [
    Family::Random(1),
    Family::Random(2),
    Family::Random(4),
    Family::Random(26),
    Family::Unary,
    Family::Square,
    Family::Fibonacci,
    Family::UnaryThenB,
    Family::Rotations,
];

impl Family {
    pub fn name(&self) -> String {
        match self {
            Family::Random(s) => format!("random{s}"),
            Family::Unary => "a^n".into(),
            Family::Square => "(ab)^n/2".into(),
            Family::Fibonacci => "fibonacci".into(),
            Family::UnaryThenB => "a^n-1b".into(),
            Family::Rotations => "rotations".into(),
        }
    }

    pub fn text(&self, n: usize, seed: u64) -> Vec<u8> {
        match *self {
            Family::Random(s) => {
                let mut rng = StdRng::seed_from_u64(seed ^ (s as u64) << 32 ^ n as u64);
                (0..n).map(|_| b'a' + rng.gen_range(0..s)).collect()
            }
            Family::Unary => vec![b'a'; n],
            Family::Square => b"ab".iter().copied().cycle().take(n).collect(),
            Family::Fibonacci => fibonacci(n),
            Family::UnaryThenB => {
                let mut t = vec![b'a'; n.saturating_sub(1)];
                t.push(b'b');
                t.truncate(n);
                t
            }
            Family::Rotations => rotations_text(n),
        }
    }
}

/// Prefix of length `n` of the Fibonacci word.
pub fn fibonacci(n: usize) -> Vec<u8> {
    let (mut a, mut b) = (b"a".to_vec(), b"ab".to_vec());
    while b.len() < n {
        let next = [b.clone(), a].concat();
        a = b;
        b = next;
    }
    b.truncate(n);
    b
}

/// Document `i` (1-based) of the rotation family with period `ell`:
/// `(a^(ell-i) b a^(i-1))^4`.
pub fn rotation_doc(ell: usize, i: usize) -> Vec<u8> {
    let mut r = vec![b'a'; ell - i];
    r.push(b'b');
    r.extend(std::iter::repeat_n(b'a', i - 1));
    r.repeat(4)
}

/// Concatenation of the rotation family documents `1..=ell`, repeated
/// and cut to length `n`, with `ell = max(8, sqrt(n / 4))`.
pub fn rotations_text(n: usize) -> Vec<u8> {
    let ell = ((n / 4) as f64).sqrt() as usize;
    let ell = ell.max(8);
    let block: Vec<u8> = (1..=ell).flat_map(|i| rotation_doc(ell, i)).collect();
    block.iter().copied().cycle().take(n).collect()
}

/// Occurrences (1-based starts) of `pat` in `hay` by scanning.
pub fn scan(hay: &[u8], pat: &[u8]) -> Vec<usize> {
    if pat.len() > hay.len() {
        return Vec::new();
    }
    (0..=hay.len() - pat.len()).filter(|&p| &hay[p..p + pat.len()] == pat).map(|p| p + 1).collect()
}
