//! Suffix array by prefix doubling, and Kasai's LCP array.

/// Sorted suffix start positions of `text` (symbols are arbitrary `u32`).
pub fn suffix_array(text: &[u32]) -> Vec<usize> {
    let n = text.len();
    if n == 0 {
        return Vec::new();
    }
    // Initial ranks: dense relabeling of the symbols.
    let mut symbols: Vec<u32> = text.to_vec();
    symbols.sort_unstable();
    symbols.dedup();
    let mut rank: Vec<usize> = text
        .iter()
        .map(|s| symbols.binary_search(s).unwrap())
        .collect();
    let mut sa: Vec<usize> = (0..n).collect();
    let mut tmp = vec![0usize; n];
    let mut buckets = vec![0usize; n.max(symbols.len()) + 1];
    let mut sorted = vec![0usize; n];
    let mut classes = symbols.len();

    // Counting sort by initial rank.
    sort_by_key(&mut sa, &mut sorted, &mut buckets, classes, |i| rank[i]);

    let mut k = 1;
    while classes < n {
        // Order by (rank[i], rank[i + k]) with rank past the end = lowest.
        // Second key: positions i >= n - k come first, then by rank[i + k].
        let mut second = Vec::with_capacity(n);
        second.extend(n - k.min(n)..n);
        for &p in &sa {
            if p >= k {
                second.push(p - k);
            }
        }
        tmp.copy_from_slice(&second);
        sort_by_key(&mut tmp, &mut sorted, &mut buckets, classes, |i| rank[i]);
        sa.copy_from_slice(&tmp);

        let mut next = vec![0usize; n];
        let key = |i: usize| (rank[i], if i + k < n { rank[i + k] + 1 } else { 0 });
        let mut c = 0;
        for j in 1..n {
            if key(sa[j]) != key(sa[j - 1]) {
                c += 1;
            }
            next[sa[j]] = c;
        }
        classes = c + 1;
        rank = next;
        k *= 2;
    }
    sa
}

fn sort_by_key(
    items: &mut [usize],
    scratch: &mut [usize],
    buckets: &mut [usize],
    classes: usize,
    key: impl Fn(usize) -> usize,
) {
    buckets[..=classes].iter_mut().for_each(|b| *b = 0);
    for &i in items.iter() {
        buckets[key(i) + 1] += 1;
    }
    for c in 1..=classes {
        buckets[c] += buckets[c - 1];
    }
    for &i in items.iter() {
        let slot = &mut buckets[key(i)];
        scratch[*slot] = i;
        *slot += 1;
    }
    items.copy_from_slice(&scratch[..items.len()]);
}

/// `lcp[j]` = common prefix length of suffixes `sa[j - 1]` and `sa[j]`
/// (`lcp[0] = 0`).
pub fn lcp_array(text: &[u32], sa: &[usize]) -> Vec<usize> {
    let n = text.len();
    let mut rank = vec![0usize; n];
    for (j, &p) in sa.iter().enumerate() {
        rank[p] = j;
    }
    let mut lcp = vec![0usize; n];
    let mut h = 0usize;
    for i in 0..n {
        if rank[i] == 0 {
            h = 0;
            continue;
        }
        let j = sa[rank[i] - 1];
        while i + h < n && j + h < n && text[i + h] == text[j + h] {
            h += 1;
        }
        lcp[rank[i]] = h;
        h = h.saturating_sub(1);
    }
    lcp
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn naive_sa(text: &[u32]) -> Vec<usize> {
        let mut sa: Vec<usize> = (0..text.len()).collect();
        sa.sort_by(|&a, &b| text[a..].cmp(&text[b..]));
        sa
    }

    #[test]
    fn banana() {
        let text: Vec<u32> = "banana".bytes().map(u32::from).collect();
        let sa = suffix_array(&text);
        assert_eq!(sa, [5, 3, 1, 0, 4, 2]);
        assert_eq!(lcp_array(&text, &sa), [0, 1, 3, 0, 0, 2]);
    }

    proptest! {
        #[test]
        fn matches_naive_sort(text in prop::collection::vec(0u32..4, 0..60)) {
            let sa = suffix_array(&text);
            prop_assert_eq!(&sa, &naive_sa(&text));
            let lcp = lcp_array(&text, &sa);
            for j in 1..sa.len() {
                let a = &text[sa[j - 1]..];
                let b = &text[sa[j]..];
                let expect = a.iter().zip(b).take_while(|(x, y)| x == y).count();
                prop_assert_eq!(lcp[j], expect);
            }
        }
    }
}
