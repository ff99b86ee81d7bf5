use super::*;
use proptest::prelude::*;
use std::collections::BTreeSet;

/// Strings spelled by the explicit nodes of the compacted trie of all
/// suffixes, computed from scratch: the root, every full suffix, and every
/// string followed by two distinct symbols.
fn oracle_nodes(text: &[Symbol], starts: &[usize]) -> BTreeSet<Vec<Symbol>> {
    let mut nodes = BTreeSet::new();
    nodes.insert(Vec::new());
    let suffixes: Vec<&[Symbol]> = starts
        .iter()
        .map(|&p| {
            let end = (p..text.len()).find(|&q| text[q] >= 256).unwrap();
            &text[p..=end]
        })
        .collect();
    for s in &suffixes {
        nodes.insert(s.to_vec());
    }
    for a in &suffixes {
        for b in &suffixes {
            let h = a.iter().zip(b.iter()).take_while(|(x, y)| x == y).count();
            if h < a.len() && h < b.len() {
                nodes.insert(a[..h].to_vec());
            }
        }
    }
    nodes
}

fn node_string(t: &SuffixTree, v: NodeId) -> Vec<Symbol> {
    let w = t.witness(v) as usize;
    t.text()[w..w + t.string_depth(v) as usize].to_vec()
}

fn check_against_oracle(t: &SuffixTree) {
    let starts: Vec<usize> = (0..t.text().len()).collect();
    let want = oracle_nodes(t.text(), &starts);
    let got: BTreeSet<Vec<Symbol>> = (0..t.num_nodes() as u32).map(|v| node_string(t, v)).collect();
    assert_eq!(got.len(), t.num_nodes(), "duplicate node strings");
    assert_eq!(got, want);
    for v in 1..t.num_nodes() as u32 {
        let s = node_string(t, v);
        let p = node_string(t, t.parent(v));
        assert!(s.starts_with(&p));
        let l = t.link(v);
        if l != NONE {
            assert_eq!(node_string(t, l), s[1..].to_vec());
        }
    }
    t.check().unwrap();
}

#[test]
fn abracadabra_shape() {
    let t = build_suffix_tree(b"abracadabra");
    assert_eq!(t.num_leaves(), 12);
    let internal = (0..t.num_nodes() as u32).filter(|&v| !t.is_leaf(v)).count();
    assert_eq!(internal, 5);
    check_against_oracle(&t);
}

#[test]
fn single_letter() {
    let t = build_suffix_tree(b"a");
    assert_eq!(t.num_nodes(), 3);
    assert_eq!(t.num_leaves(), 2);
}

#[test]
fn gst_two_docs() {
    let docs = DocumentSet::new(vec![Interval::new(1, 2), Interval::new(2, 2)], 2);
    let t = build_gst(b"ab", docs).unwrap();
    assert_eq!(t.num_leaves(), 5);
    let leaves: BTreeSet<Vec<Symbol>> = (0..t.num_nodes() as u32)
        .filter(|&v| t.is_leaf(v))
        .map(|v| node_string(&t, v))
        .collect();
    let sym = |s: &str| -> Vec<Symbol> {
        s.chars().map(|c| match c { '1' => 256, '2' => 257, c => c as Symbol }).collect()
    };
    let want: BTreeSet<Vec<Symbol>> = ["ab1", "b1", "1", "b2", "2"].iter().map(|s| sym(s)).collect();
    assert_eq!(leaves, want);
    check_against_oracle(&t);
}

#[test]
fn leaf_of_round_trips() {
    let t = build_suffix_tree(b"abracadabra");
    let v = t.leaf_of(0, 1).unwrap();
    assert_eq!(t.string_depth(v), 12);
    for off in 1..=12 {
        let v = t.leaf_of(0, off).unwrap();
        assert_eq!(t.leaf_origin(v), (0, off));
    }
    assert!(t.leaf_of(0, 13).is_err());
    assert!(t.leaf_of(1, 1).is_err());
    let docs = DocumentSet::new(vec![Interval::new(1, 4), Interval::new(2, 4)], 4);
    let g = build_gst(b"abab", docs).unwrap();
    let v = g.leaf_of(1, 1).unwrap();
    assert_eq!(node_string(&g, v), vec![98, 97, 98, 257]);
}

#[test]
fn naive_locus_examples() {
    let t = build_suffix_tree(b"abracadabra");
    let abra = t.naive_locus(0, 1, 4).unwrap();
    assert!(matches!(abra, Locus::Explicit(v) if node_string(&t, v) == b"abra".map(|c| c as Symbol).to_vec()));
    match t.naive_locus(0, 1, 2).unwrap() {
        Locus::Implicit { parent, child, depth } => {
            assert_eq!(depth, 2);
            assert_eq!(node_string(&t, parent), vec![97]);
            assert_eq!(t.string_depth(child), 4);
        }
        l => panic!("{l:?}"),
    }
    match t.naive_locus(0, 5, 7).unwrap() {
        Locus::Implicit { child, depth, .. } => {
            assert_eq!(depth, 3);
            assert!(t.is_leaf(child));
            assert_eq!(t.leaf_origin(child), (0, 5));
        }
        l => panic!("{l:?}"),
    }
}

#[test]
fn fig3_family_builds() {
    let l = 8usize;
    let mut master = Vec::new();
    let mut docs = Vec::new();
    for i in 1..=l {
        let unit: Vec<u8> = std::iter::repeat_n(b'a', l - i)
            .chain(std::iter::once(b'b'))
            .chain(std::iter::repeat_n(b'a', i - 1))
            .collect();
        let start = master.len() + 1;
        for _ in 0..4 {
            master.extend_from_slice(&unit);
        }
        docs.push(Interval::new(start, master.len()));
    }
    let t = build_gst(&master, DocumentSet::new(docs, 4 * l)).unwrap();
    assert_eq!(t.num_leaves(), l * (4 * l + 1));
    check_against_oracle(&t);
}

#[test]
fn truncated_tree_is_exact_below_threshold() {
    let w = b"abaababaabaababaababaabaababaabab";
    let docs = DocumentSet::new(vec![Interval::new(1, 20), Interval::new(10, 32)], 20);
    let full = SuffixTree::build(w, docs.clone(), TreeOptions::default());
    let cut = SuffixTree::build(w, docs, TreeOptions { min_suffix_len: 6, keep_text: true });
    let deep = |t: &SuffixTree| -> BTreeSet<Vec<Symbol>> {
        (0..t.num_nodes() as u32)
            .filter(|&v| t.string_depth(v) >= 6 && !(t.is_leaf(v) && t.string_depth(v) < 7))
            .map(|v| node_string(t, v))
            .collect()
    };
    assert_eq!(deep(&full), deep(&cut));
    cut.check().unwrap();
}

proptest! {
    #[test]
    fn random_strings_match_oracle(w in proptest::collection::vec(b'a'..b'd', 1..120)) {
        check_against_oracle(&build_suffix_tree(&w));
    }

    #[test]
    fn random_docs_match_oracle(w in proptest::collection::vec(b'a'..b'c', 4..100), cuts in proptest::collection::vec((0usize..100, 1usize..30), 1..5)) {
        let docs: Vec<Interval> = cuts.iter().map(|&(s, l)| {
            let s = s % w.len();
            Interval::new(s + 1, (s + l).min(w.len()))
        }).collect();
        let t = build_gst(&w, DocumentSet::new(docs, 30)).unwrap();
        check_against_oracle(&t);
    }

    #[test]
    fn suffix_link_moves_leaf_depths(w in proptest::collection::vec(b'a'..b'c', 1..80)) {
        // For consecutive suffix leaves v and u = link(v), every ancestor
        // string depth x > 0 of v gives an ancestor of u at depth x - 1.
        let t = build_suffix_tree(&w);
        let anc = |mut v: NodeId| { let mut s = BTreeSet::new(); while v != NONE { s.insert(t.string_depth(v)); v = t.parent(v); } s };
        for off in 1..w.len() {
            let v = t.leaf_of(0, off).unwrap();
            let u = t.link(v);
            prop_assert_eq!(u, t.leaf_of(0, off + 1).unwrap());
            let du = anc(u);
            for x in anc(v) {
                if x > 0 {
                    prop_assert!(du.contains(&(x - 1)));
                }
            }
        }
    }
}
