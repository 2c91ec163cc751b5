//! Prefix trie over letter sequences with lazily expanded leaves.
//!
//! A branch is only materialized as deep as two inserted sequences agree,
//! so memory is proportional to the sum of pairwise common prefixes rather
//! than to the total input length.

use crate::words::Letter;

const EMPTY: u32 = u32::MAX;
const LEAF_BIT: u32 = 1 << 31;

#[derive(Debug)]
pub struct PrefixTrie<'a> {
    width: usize,
    /// `width` slots per node: `EMPTY`, a node id, or `LEAF_BIT | entry`.
    slots: Vec<u32>,
    /// Entries ending exactly at each node.
    ends: Vec<u32>,
    entries: Vec<&'a [Letter]>,
}

/// Outcome of one insertion.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Insertion {
    /// Longest common prefix with any earlier entry.
    pub lcp: usize,
    /// Number of earlier entries equal to this one.
    pub duplicates: u32,
}

impl<'a> PrefixTrie<'a> {
    pub fn new(alphabet_size: usize) -> Self {
        PrefixTrie {
            width: alphabet_size,
            slots: vec![EMPTY; alphabet_size],
            ends: vec![0],
            entries: Vec::new(),
        }
    }

    fn new_node(&mut self) -> u32 {
        let id = self.ends.len() as u32;
        self.slots.extend(std::iter::repeat_n(EMPTY, self.width));
        self.ends.push(0);
        id
    }

    pub fn insert(&mut self, entry: &'a [Letter]) -> Insertion {
        let entry_id = self.entries.len() as u32;
        self.entries.push(entry);
        let mut node = 0u32;
        let mut depth = 0usize;
        loop {
            if depth == entry.len() {
                let duplicates = self.ends[node as usize];
                self.ends[node as usize] += 1;
                return Insertion {
                    lcp: depth,
                    duplicates,
                };
            }
            let slot = node as usize * self.width + entry[depth].index();
            let value = self.slots[slot];
            if value == EMPTY {
                self.slots[slot] = LEAF_BIT | entry_id;
                return Insertion {
                    lcp: depth,
                    duplicates: 0,
                };
            }
            if value & LEAF_BIT == 0 {
                node = value;
                depth += 1;
                continue;
            }
            // Burst the leaf: push it down as far as it agrees with `entry`.
            let other_id = value & !LEAF_BIT;
            let other = self.entries[other_id as usize];
            let child = self.new_node();
            self.slots[slot] = child;
            node = child;
            depth += 1;
            loop {
                let a = other.get(depth);
                let b = entry.get(depth);
                match (a, b) {
                    (Some(x), Some(y)) if x == y => {
                        let next = self.new_node();
                        self.slots[node as usize * self.width + x.index()] = next;
                        node = next;
                        depth += 1;
                    }
                    _ => {
                        match a {
                            Some(x) => {
                                self.slots[node as usize * self.width + x.index()] =
                                    LEAF_BIT | other_id;
                            }
                            None => self.ends[node as usize] += 1,
                        }
                        break;
                    }
                }
            }
        }
    }

    pub fn node_count(&self) -> usize {
        self.ends.len()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::words::Alphabet;

    #[test]
    fn reports_lcp_with_earlier_entries() {
        let ab = Alphabet::new(2).unwrap();
        let words: Vec<Vec<Letter>> = ["abab", "abba", "b", "abab", "aba", "ab"]
            .iter()
            .map(|s| ab.parse_raw(s).unwrap())
            .collect();
        let mut trie = PrefixTrie::new(ab.size());
        let got: Vec<Insertion> = words.iter().map(|w| trie.insert(w)).collect();
        let lcps: Vec<usize> = got.iter().map(|i| i.lcp).collect();
        assert_eq!(lcps, [0, 2, 0, 4, 3, 2]);
        assert_eq!(got[3].duplicates, 1);
        assert_eq!(got[4].duplicates, 0);
    }

    #[test]
    fn counts_repeated_duplicates() {
        let ab = Alphabet::new(2).unwrap();
        let word = ab.parse_raw("ba").unwrap();
        let mut trie = PrefixTrie::new(ab.size());
        let dups: Vec<u32> = (0..4).map(|_| trie.insert(&word).duplicates).collect();
        assert_eq!(dups, [0, 1, 2, 3]);
    }
}
