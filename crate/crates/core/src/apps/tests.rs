use super::*;
use crate::wa_index::Mode;
use proptest::prelude::*;
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

fn naive_occurrences(hay: &[u8], pat: &[u8]) -> Vec<usize> {
    (0..hay.len().saturating_sub(pat.len()) + 1)
        .filter(|&p| p + pat.len() <= hay.len() && &hay[p..p + pat.len()] == pat)
        .map(|p| p + 1)
        .collect()
}

#[test]
fn abracadabra_search() {
    let idx = WaIndex::build(b"abracadabra", Mode::Standard).unwrap();
    assert_eq!(substring_search(&idx, 1, 4, true).unwrap().occurrences, vec![1, 8]);
    assert_eq!(substring_search(&idx, 1, 11, true).unwrap().occurrences, vec![1]);
    assert_eq!(substring_search(&idx, 1, 1, true).unwrap().occurrences, vec![1, 4, 6, 8, 11]);
    assert!(substring_search(&idx, 1, 4, false).unwrap().occurrences.is_empty());
    assert!(substring_search(&idx, 3, 12, true).is_err());
}

#[test]
fn search_matches_scan() {
    let mut rng = StdRng::seed_from_u64(17);
    for &(n, sigma) in &[(2048usize, 2u8), (700, 4), (300, 1)] {
        let text: Vec<u8> = (0..n).map(|_| b'a' + rng.gen_range(0..sigma)).collect();
        let idx = WaIndex::build(&text, Mode::Compact).unwrap();
        for _ in 0..400 {
            let i = rng.gen_range(1..=n);
            let j = rng.gen_range(i..=(i + 40).min(n));
            let got = substring_search(&idx, i, j, true).unwrap().occurrences;
            assert_eq!(got, naive_occurrences(&text, &text[i - 1..j]), "({i}, {j})");
        }
    }
}

#[test]
fn hash_examples() {
    let idx = WaIndex::build(b"abracadabra", Mode::Standard).unwrap();
    let h = |i, j| substring_hash(&idx, i, j).unwrap();
    assert_eq!(h(1, 4), h(8, 11));
    assert_ne!(h(1, 4), h(1, 5));
    assert_ne!(h(1, 3), h(2, 4));
    assert_eq!(h(5, 7).len, 3);
}

#[test]
fn hash_iff_equality_exhaustive() {
    let mut rng = StdRng::seed_from_u64(23);
    for n in [1usize, 7, 40, 90] {
        let text: Vec<u8> = (0..n).map(|_| b'a' + rng.gen_range(0..2)).collect();
        for mode in [Mode::Standard, Mode::Compact] {
            let idx = WaIndex::build(&text, mode).unwrap();
            let mut all = Vec::new();
            for i in 1..=n {
                for j in i..=n {
                    all.push((i, j, substring_hash(&idx, i, j).unwrap()));
                }
            }
            for &(i, j, h) in &all {
                for &(a, b, g) in &all {
                    assert_eq!(h == g, text[i - 1..j] == text[a - 1..b], "({i},{j}) ({a},{b})");
                }
            }
        }
    }
}

#[test]
fn packed_hash_round_trip() {
    let idx = WaIndex::build(b"mississippi", Mode::Standard).unwrap();
    let n = idx.len();
    let bound = (idx.tree().num_nodes() as u64) << SubstringHash::length_bits(n);
    for i in 1..=n {
        for j in i..=n {
            let h = substring_hash(&idx, i, j).unwrap();
            let p = h.packed(n);
            assert!(p < bound);
            assert_eq!(SubstringHash::unpack(p, n), h);
        }
    }
}

#[test]
fn cross_document_example() {
    let d = DocOccurrenceIndex::build(&["abab", "bab"]).unwrap();
    assert_eq!(d.cross_doc_search(0, 3, 4, 1).unwrap(), vec![2]);
    assert_eq!(d.cross_doc_search(0, 1, 2, 0).unwrap(), vec![1, 3]);
    assert_eq!(d.cross_doc_search(0, 1, 4, 1).unwrap(), Vec::<usize>::new());
    assert_eq!(d.cross_doc_search(1, 1, 3, 0).unwrap(), vec![2]);
    assert!(d.cross_doc_search(0, 4, 5, 1).is_err());
    assert!(d.cross_doc_search(0, 1, 1, 2).is_err());
    assert!(DocOccurrenceIndex::build(&["a", ""]).is_err());
}

#[test]
fn cross_document_loci_match_walk() {
    let d = DocOccurrenceIndex::build(&["mississippi", "sip", "ississ"]).unwrap();
    for doc in 0..3 {
        let len = d.tree().docs().doc_len(doc);
        for i in 1..=len {
            for j in i..=len {
                assert_eq!(d.locus(doc, i, j).unwrap(), d.tree().naive_locus(doc, i, j).unwrap());
            }
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(40))]
    #[test]
    fn cross_document_matches_scan(
        docs in prop::collection::vec(prop::collection::vec(0u8..3, 1..60), 1..6),
        picks in prop::collection::vec((any::<u16>(), any::<u16>(), any::<u16>(), any::<u16>()), 20),
    ) {
        let docs: Vec<Vec<u8>> = docs.into_iter().map(|d| d.into_iter().map(|c| b'a' + c).collect()).collect();
        let idx = DocOccurrenceIndex::build(&docs).unwrap();
        for (a, b, c, t) in picks {
            let k = a as usize % docs.len();
            let i = 1 + b as usize % docs[k].len();
            let j = i + c as usize % (docs[k].len() - i + 1);
            let t = t as usize % docs.len();
            let got = idx.cross_doc_search(k, i, j, t).unwrap();
            prop_assert_eq!(got, naive_occurrences(&docs[t], &docs[k][i - 1..j]));
        }
    }
}
