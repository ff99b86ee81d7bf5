//! Suffix array by induced sorting, and the LCP array by Kasai's method.

const EMPTY: u32 = u32::MAX;

fn bucket_bounds(s: &[u32], k: usize, ends: bool) -> Vec<u32> {
    let mut cnt = vec![0u32; k];
    for &c in s {
        cnt[c as usize] += 1;
    }
    let mut sum = 0u32;
    for c in cnt.iter_mut() {
        sum += *c;
        *c = if ends { sum } else { sum - *c };
    }
    cnt
}

fn induce(s: &[u32], k: usize, types: &[bool], sa: &mut [u32]) {
    let n = s.len();
    let mut starts = bucket_bounds(s, k, false);
    for i in 0..n {
        let j = sa[i];
        if j != EMPTY && j > 0 && !types[j as usize - 1] {
            let c = s[j as usize - 1] as usize;
            sa[starts[c] as usize] = j - 1;
            starts[c] += 1;
        }
    }
    let mut ends = bucket_bounds(s, k, true);
    for i in (0..n).rev() {
        let j = sa[i];
        if j != EMPTY && j > 0 && types[j as usize - 1] {
            let c = s[j as usize - 1] as usize;
            ends[c] -= 1;
            sa[ends[c] as usize] = j - 1;
        }
    }
}

/// Suffix array of `s`, whose last symbol must be a unique minimum `0`.
fn sais(s: &[u32], k: usize) -> Vec<u32> {
    let n = s.len();
    if n == 1 {
        return vec![0];
    }
    let mut types = vec![false; n];
    types[n - 1] = true;
    for i in (0..n - 1).rev() {
        types[i] = s[i] < s[i + 1] || (s[i] == s[i + 1] && types[i + 1]);
    }
    let is_lms = |i: usize| i > 0 && types[i] && !types[i - 1];

    let mut sa = vec![EMPTY; n];
    let mut ends = bucket_bounds(s, k, true);
    for i in (1..n).rev() {
        if is_lms(i) {
            let c = s[i] as usize;
            ends[c] -= 1;
            sa[ends[c] as usize] = i as u32;
        }
    }
    induce(s, k, &types, &mut sa);

    let sorted_lms: Vec<u32> = sa.iter().copied().filter(|&p| is_lms(p as usize)).collect();
    let m = sorted_lms.len();
    let mut name_of = vec![EMPTY; n];
    let mut name = 0u32;
    let mut prev: Option<usize> = None;
    for &p in &sorted_lms {
        let p = p as usize;
        let differ = match prev {
            None => true,
            Some(q) => {
                let mut d = 0usize;
                loop {
                    if s[p + d] != s[q + d] || types[p + d] != types[q + d] {
                        break true;
                    }
                    if d > 0 && (is_lms(p + d) || is_lms(q + d)) {
                        break false;
                    }
                    d += 1;
                }
            }
        };
        if differ {
            name += 1;
            prev = Some(p);
        }
        name_of[p] = name - 1;
    }
    let lms_text: Vec<u32> = (1..n).filter(|&i| is_lms(i)).map(|i| i as u32).collect();
    let reduced: Vec<u32> = lms_text.iter().map(|&p| name_of[p as usize]).collect();
    drop(name_of);
    let reduced_sa = if (name as usize) < m {
        sais(&reduced, name as usize)
    } else {
        let mut r = vec![0u32; m];
        for (i, &c) in reduced.iter().enumerate() {
            r[c as usize] = i as u32;
        }
        r
    };

    sa.fill(EMPTY);
    let mut ends = bucket_bounds(s, k, true);
    for i in (0..m).rev() {
        let p = lms_text[reduced_sa[i] as usize];
        let c = s[p as usize] as usize;
        ends[c] -= 1;
        sa[ends[c] as usize] = p;
    }
    induce(s, k, &types, &mut sa);
    sa
}

/// Suffix array of an arbitrary integer string.
pub fn suffix_array(text: &[u32]) -> Vec<u32> {
    if text.is_empty() {
        return Vec::new();
    }
    let mut s: Vec<u32> = Vec::with_capacity(text.len() + 1);
    let max = text.iter().copied().max().unwrap_or(0);
    s.extend(text.iter().map(|&c| c + 1));
    s.push(0);
    let sa = sais(&s, max as usize + 2);
    sa[1..].to_vec()
}

/// `lcp[r]` is the longest common prefix of the suffixes at ranks `r - 1`
/// and `r`; `lcp[0] = 0`.
pub fn lcp_array(text: &[u32], sa: &[u32]) -> Vec<u32> {
    let n = text.len();
    let mut rank = vec![0u32; n];
    for (r, &p) in sa.iter().enumerate() {
        rank[p as usize] = r as u32;
    }
    let mut lcp = vec![0u32; n];
    let mut h = 0usize;
    for i in 0..n {
        let r = rank[i] as usize;
        if r > 0 {
            let j = sa[r - 1] as usize;
            while i + h < n && j + h < n && text[i + h] == text[j + h] {
                h += 1;
            }
            lcp[r] = h as u32;
            h = h.saturating_sub(1);
        } else {
            h = 0;
        }
    }
    lcp
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn naive_sa(t: &[u32]) -> Vec<u32> {
        let mut v: Vec<u32> = (0..t.len() as u32).collect();
        v.sort_by(|&a, &b| t[a as usize..].cmp(&t[b as usize..]));
        v
    }

    #[test]
    fn banana() {
        let t: Vec<u32> = b"banana".iter().map(|&c| c as u32).collect();
        assert_eq!(suffix_array(&t), vec![5, 3, 1, 0, 4, 2]);
        assert_eq!(lcp_array(&t, &suffix_array(&t)), vec![0, 1, 3, 0, 0, 2]);
    }

    proptest! {
        #[test]
        fn matches_naive(t in proptest::collection::vec(0u32..4, 1..200)) {
            let sa = suffix_array(&t);
            prop_assert_eq!(&sa, &naive_sa(&t));
            let lcp = lcp_array(&t, &sa);
            for r in 1..t.len() {
                let (a, b) = (sa[r - 1] as usize, sa[r] as usize);
                let h = t[a..].iter().zip(&t[b..]).take_while(|(x, y)| x == y).count();
                prop_assert_eq!(lcp[r] as usize, h);
            }
        }

        #[test]
        fn large_alphabet(t in proptest::collection::vec(0u32..1000, 1..100)) {
            prop_assert_eq!(suffix_array(&t), naive_sa(&t));
        }
    }
}
