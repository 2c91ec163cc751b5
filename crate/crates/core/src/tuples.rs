//! Tuples of reduced words and their prefix statistics.
//!
//! `Lcp` is measured over the symmetrized sequence
//! `h± = (h_1, h_1^-1, ..., h_k, h_k^-1)`: an entry is never compared with
//! itself, but `h_i` is compared with `h_i^-1` and duplicated words at
//! different indices share their full length.

use std::fmt;

use crate::error::{Error, Result};
use crate::suffix::{lcp_array, suffix_array};
use crate::trie::PrefixTrie;
use crate::words::{Alphabet, ReducedWord};

/// A finite sequence of nonempty reduced words over a shared alphabet.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WordTuple {
    alphabet: Alphabet,
    words: Vec<ReducedWord>,
}

/// `Min`, `Max`, `Nbr` and `Lcp` of a nonempty tuple.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct TupleStats {
    pub min: usize,
    pub max: usize,
    pub nbr: usize,
    pub lcp: usize,
}

/// Outcome of the sufficient malnormality test.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum MalnormalityCertificate {
    Certified,
    Inconclusive,
}

impl WordTuple {
    pub fn new(alphabet: Alphabet, words: Vec<ReducedWord>) -> Result<Self> {
        for (index, word) in words.iter().enumerate() {
            if word.alphabet() != alphabet {
                return Err(Error::AlphabetMismatch {
                    left: alphabet.rank(),
                    right: word.alphabet().rank(),
                });
            }
            if word.is_empty() {
                return Err(Error::EmptyWord { index });
            }
        }
        Ok(WordTuple { alphabet, words })
    }

    /// Parses whitespace-separated words, reducing each one.
    pub fn parse_words(alphabet: Alphabet, text: &str) -> Result<Self> {
        let words = text
            .split_whitespace()
            .map(|w| alphabet.parse(w))
            .collect::<Result<Vec<_>>>()?;
        WordTuple::new(alphabet, words)
    }

    pub fn alphabet(&self) -> Alphabet {
        self.alphabet
    }

    pub fn words(&self) -> &[ReducedWord] {
        &self.words
    }

    pub fn len(&self) -> usize {
        self.words.len()
    }

    pub fn is_empty(&self) -> bool {
        self.words.is_empty()
    }

    pub fn into_words(self) -> Vec<ReducedWord> {
        self.words
    }

    /// `(h_1, h_1^-1, ..., h_k, h_k^-1)`.
    pub fn symmetrized(&self) -> Vec<ReducedWord> {
        self.words
            .iter()
            .flat_map(|w| [w.clone(), w.inverse()])
            .collect()
    }

    /// The sub-tuple at the given indices.
    pub fn select(&self, indices: &[usize]) -> WordTuple {
        WordTuple {
            alphabet: self.alphabet,
            words: indices.iter().map(|&i| self.words[i].clone()).collect(),
        }
    }

    pub fn min_len(&self) -> Option<usize> {
        self.words.iter().map(ReducedWord::len).min()
    }

    pub fn max_len(&self) -> Option<usize> {
        self.words.iter().map(ReducedWord::len).max()
    }

    /// Longest common prefix between two distinct entries of `h±`, via a trie.
    pub fn lcp(&self) -> Result<usize> {
        if self.is_empty() {
            return Err(Error::EmptyTuple);
        }
        let entries = self.symmetrized();
        let mut trie = PrefixTrie::new(self.alphabet.size());
        Ok(entries
            .iter()
            .map(|e| trie.insert(e.letters()).lcp)
            .max()
            .unwrap_or(0))
    }

    pub fn stats(&self) -> Result<TupleStats> {
        let lcp = self.lcp()?;
        Ok(TupleStats {
            min: self.min_len().unwrap_or(0),
            max: self.max_len().unwrap_or(0),
            nbr: self.len(),
            lcp,
        })
    }

    /// `2 Lcp < Min`.
    pub fn has_central_tree_property(&self) -> Result<bool> {
        let s = self.stats()?;
        Ok(2 * s.lcp < s.min)
    }

    pub fn lcp_below(&self, bound: usize) -> Result<bool> {
        Ok(self.lcp()? <= bound)
    }

    /// Length of the longest word with two occurrences as a factor of the
    /// entries of `h±` (occurrences are distinct `(entry, start)` pairs).
    pub fn longest_repeated_factor(&self) -> Result<usize> {
        if self.is_empty() {
            return Err(Error::EmptyTuple);
        }
        let size = self.alphabet.size() as u32;
        let mut text: Vec<u32> = Vec::new();
        for (i, entry) in self.symmetrized().iter().enumerate() {
            text.extend(entry.letters().iter().map(|x| x.index() as u32));
            text.push(size + i as u32);
        }
        let sa = suffix_array(&text);
        Ok(lcp_array(&text, &sa).into_iter().max().unwrap_or(0))
    }

    /// Sufficient condition for malnormality: `3 Lcp < Min` and no factor of
    /// length `floor((Min - 3 Lcp) / 2)` repeats in `h±`.
    pub fn malnormality_certificate(&self) -> Result<MalnormalityCertificate> {
        let s = self.stats()?;
        if 3 * s.lcp >= s.min {
            return Ok(MalnormalityCertificate::Inconclusive);
        }
        let threshold = (s.min - 3 * s.lcp) / 2;
        if self.longest_repeated_factor()? < threshold {
            Ok(MalnormalityCertificate::Certified)
        } else {
            Ok(MalnormalityCertificate::Inconclusive)
        }
    }

    /// Parses the tuple text format: one word per line, `#` comment lines and
    /// blank lines ignored. Without an explicit alphabet the smallest rank
    /// covering every letter is used.
    pub fn parse_file(text: &str, alphabet: Option<Alphabet>) -> Result<Self> {
        let lines: Vec<(usize, &str)> = text
            .lines()
            .enumerate()
            .map(|(i, l)| (i + 1, l.trim()))
            .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'))
            .collect();
        let alphabet = match alphabet {
            Some(a) => a,
            None => {
                let mut rank = 1;
                for (line_no, line) in &lines {
                    let a = Alphabet::infer(line)
                        .map_err(|e| Error::parse(format!("line {line_no}"), e.to_string()))?;
                    rank = rank.max(a.rank());
                }
                Alphabet::new(rank)?
            }
        };
        let mut words = Vec::with_capacity(lines.len());
        for (line_no, line) in lines {
            let raw = alphabet
                .parse_raw(line)
                .map_err(|e| Error::parse(format!("line {line_no}"), e.to_string()))?;
            let word = ReducedWord::from_reduced(alphabet, raw)
                .map_err(|_| Error::parse(format!("line {line_no}"), "word is not reduced"))?;
            if word.is_empty() {
                return Err(Error::parse(format!("line {line_no}"), "empty word"));
            }
            words.push(word);
        }
        WordTuple::new(alphabet, words)
    }

    /// Writes the tuple text format.
    pub fn to_file_string(&self) -> String {
        let mut out = String::new();
        for w in &self.words {
            out.push_str(&w.to_string());
            out.push('\n');
        }
        out
    }
}

impl fmt::Display for WordTuple {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, w) in self.words.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{w}")?;
        }
        write!(f, ")")
    }
}
