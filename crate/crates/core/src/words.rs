//! Reduced words over a symmetrized alphabet.
//!
//! Letters are indexed `0..2r`: index `2j` is the generator `a_j` and
//! `2j + 1` its inverse, so inversion is `i ^ 1`. The text form writes
//! generators in lowercase and inverses in uppercase (`"abA"` is
//! `a b a^-1`).

use std::fmt;

use num_bigint::BigUint;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub const MAX_RANK: usize = 26;

/// Default cap on the number of words produced by [`enumerate_reduced`].
pub const DEFAULT_ENUMERATION_CAP: u64 = 10_000_000;

/// A letter of the symmetrized alphabet.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Letter(u8);

impl Letter {
    pub const fn from_index(index: u8) -> Self {
        Letter(index)
    }

    /// The positive letter `a_j`.
    pub const fn generator(j: u8) -> Self {
        Letter(2 * j)
    }

    #[inline]
    pub const fn index(self) -> usize {
        self.0 as usize
    }

    #[inline]
    pub const fn inverse(self) -> Self {
        Letter(self.0 ^ 1)
    }

    #[inline]
    pub const fn is_positive(self) -> bool {
        self.0 & 1 == 0
    }

    /// Index `j` of the underlying generator.
    #[inline]
    pub const fn generator_index(self) -> usize {
        (self.0 >> 1) as usize
    }

    /// The positive letter with the same generator.
    #[inline]
    pub const fn positive(self) -> Self {
        Letter(self.0 & !1)
    }

    pub fn to_char(self) -> char {
        let base = if self.is_positive() { b'a' } else { b'A' };
        (base + (self.0 >> 1)) as char
    }
}

impl fmt::Display for Letter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_char())
    }
}

/// Symmetrized alphabet of rank `r`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Alphabet {
    rank: u8,
}

impl Alphabet {
    pub fn new(rank: usize) -> Result<Self> {
        if rank == 0 || rank > MAX_RANK {
            return Err(Error::RankOutOfRange(rank));
        }
        Ok(Alphabet { rank: rank as u8 })
    }

    pub const fn rank(self) -> usize {
        self.rank as usize
    }

    /// Number of letters, `2r`.
    pub const fn size(self) -> usize {
        2 * self.rank as usize
    }

    pub fn letters(self) -> impl Iterator<Item = Letter> + Clone {
        (0..self.size() as u8).map(Letter)
    }

    pub fn letter(self, index: usize) -> Result<Letter> {
        if index < self.size() {
            Ok(Letter(index as u8))
        } else {
            Err(Error::LetterOutOfRange {
                index,
                rank: self.rank(),
            })
        }
    }

    pub fn contains(self, letter: Letter) -> bool {
        letter.index() < self.size()
    }

    /// Parses one letter character; `position` is only used for errors.
    pub fn parse_letter(self, ch: char, position: usize) -> Result<Letter> {
        let index = match ch {
            'a'..='z' => 2 * (ch as usize - 'a' as usize),
            'A'..='Z' => 2 * (ch as usize - 'A' as usize) + 1,
            _ => return Err(Error::InvalidCharacter { ch, position }),
        };
        if index >= self.size() {
            return Err(Error::InvalidCharacter { ch, position });
        }
        Ok(Letter(index as u8))
    }

    /// Parses text into a raw (not necessarily reduced) letter sequence.
    pub fn parse_raw(self, text: &str) -> Result<Vec<Letter>> {
        text.chars()
            .enumerate()
            .map(|(pos, ch)| self.parse_letter(ch, pos))
            .collect()
    }

    /// Parses and reduces.
    pub fn parse(self, text: &str) -> Result<ReducedWord> {
        let raw = self.parse_raw(text)?;
        Ok(ReducedWord::reduce_letters(self, raw))
    }

    /// Smallest alphabet containing every letter character of `text`.
    pub fn infer(text: &str) -> Result<Self> {
        let mut rank = 1;
        for (position, ch) in text.chars().enumerate() {
            let j = match ch {
                'a'..='z' => ch as usize - 'a' as usize,
                'A'..='Z' => ch as usize - 'A' as usize,
                c if c.is_whitespace() => continue,
                _ => return Err(Error::InvalidCharacter { ch, position }),
            };
            rank = rank.max(j + 1);
        }
        Alphabet::new(rank)
    }
}

/// A reduced word: no factor `x x^-1`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ReducedWord {
    alphabet: Alphabet,
    letters: Vec<Letter>,
}

impl ReducedWord {
    pub fn empty(alphabet: Alphabet) -> Self {
        ReducedWord {
            alphabet,
            letters: Vec::new(),
        }
    }

    /// Reduces a raw index sequence, checking every index is in range.
    pub fn reduce(alphabet: Alphabet, raw: &[usize]) -> Result<Self> {
        let letters = raw
            .iter()
            .map(|&i| alphabet.letter(i))
            .collect::<Result<Vec<_>>>()?;
        Ok(Self::reduce_letters(alphabet, letters))
    }

    /// Stack-based free reduction of letters already known to be in range.
    pub fn reduce_letters(alphabet: Alphabet, raw: impl IntoIterator<Item = Letter>) -> Self {
        let mut out: Vec<Letter> = Vec::new();
        for x in raw {
            debug_assert!(alphabet.contains(x));
            if out.last() == Some(&x.inverse()) {
                out.pop();
            } else {
                out.push(x);
            }
        }
        ReducedWord {
            alphabet,
            letters: out,
        }
    }

    /// Wraps letters that are already reduced; fails otherwise.
    pub fn from_reduced(alphabet: Alphabet, letters: Vec<Letter>) -> Result<Self> {
        for (i, &x) in letters.iter().enumerate() {
            if !alphabet.contains(x) {
                return Err(Error::LetterOutOfRange {
                    index: x.index(),
                    rank: alphabet.rank(),
                });
            }
            if i > 0 && letters[i - 1] == x.inverse() {
                return Err(Error::parse(
                    format!("position {i}"),
                    "word is not reduced",
                ));
            }
        }
        Ok(ReducedWord { alphabet, letters })
    }

    pub(crate) fn from_reduced_unchecked(alphabet: Alphabet, letters: Vec<Letter>) -> Self {
        debug_assert!(letters.windows(2).all(|w| w[0] != w[1].inverse()));
        ReducedWord { alphabet, letters }
    }

    pub fn alphabet(&self) -> Alphabet {
        self.alphabet
    }

    pub fn letters(&self) -> &[Letter] {
        &self.letters
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    pub fn first(&self) -> Option<Letter> {
        self.letters.first().copied()
    }

    pub fn last(&self) -> Option<Letter> {
        self.letters.last().copied()
    }

    fn check_alphabet(&self, other: &Self) -> Result<()> {
        if self.alphabet != other.alphabet {
            return Err(Error::AlphabetMismatch {
                left: self.alphabet.rank(),
                right: other.alphabet.rank(),
            });
        }
        Ok(())
    }

    /// Group product: reduced form of the concatenation.
    pub fn multiply(&self, other: &Self) -> Result<Self> {
        self.check_alphabet(other)?;
        let mut cancel = 0;
        while cancel < self.len().min(other.len())
            && self.letters[self.len() - 1 - cancel] == other.letters[cancel].inverse()
        {
            cancel += 1;
        }
        let mut letters = Vec::with_capacity(self.len() + other.len() - 2 * cancel);
        letters.extend_from_slice(&self.letters[..self.len() - cancel]);
        letters.extend_from_slice(&other.letters[cancel..]);
        Ok(ReducedWord {
            alphabet: self.alphabet,
            letters,
        })
    }

    pub fn inverse(&self) -> Self {
        ReducedWord {
            alphabet: self.alphabet,
            letters: self.letters.iter().rev().map(|x| x.inverse()).collect(),
        }
    }

    /// Nonempty and first letter is not the inverse of the last.
    pub fn is_cyclically_reduced(&self) -> bool {
        match (self.first(), self.last()) {
            (Some(first), Some(last)) => first != last.inverse(),
            _ => false,
        }
    }

    pub fn cyclic_reduce(&self) -> CyclicReduction {
        let n = self.len();
        let mut k = 0;
        while 2 * k + 1 < n && self.letters[k] == self.letters[n - 1 - k].inverse() {
            k += 1;
        }
        CyclicReduction {
            core: ReducedWord::from_reduced_unchecked(
                self.alphabet,
                self.letters[k..n - k].to_vec(),
            ),
            conjugator: ReducedWord::from_reduced_unchecked(
                self.alphabet,
                self.letters[..k].to_vec(),
            ),
        }
    }

    /// Rotation by `shift`: `letters[shift..] ++ letters[..shift]`.
    pub fn rotate(&self, shift: usize) -> Self {
        let mut letters = self.letters.clone();
        if !letters.is_empty() {
            letters.rotate_left(shift % self.len());
        }
        ReducedWord::from_reduced_unchecked(self.alphabet, letters)
    }

    /// All `|u|` cyclic conjugates in order of rotation amount.
    pub fn rotations(&self) -> Result<Vec<ReducedWord>> {
        if !self.is_cyclically_reduced() {
            return Err(Error::NotCyclicallyReduced { index: 0 });
        }
        Ok((0..self.len()).map(|s| self.rotate(s)).collect())
    }

    /// Signed letter counts: `+1` per `a_j`, `-1` per `a_j^-1`.
    pub fn exponent_sums(&self) -> Vec<i64> {
        let mut sums = vec![0; self.alphabet.rank()];
        for x in &self.letters {
            sums[x.generator_index()] += if x.is_positive() { 1 } else { -1 };
        }
        sums
    }
}

impl fmt::Display for ReducedWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for x in &self.letters {
            write!(f, "{}", x.to_char())?;
        }
        Ok(())
    }
}

/// `u = conjugator · core · conjugator^-1` with `core` cyclically reduced
/// (or empty when `u` is).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CyclicReduction {
    pub core: ReducedWord,
    pub conjugator: ReducedWord,
}

/// Number of reduced words of length `n`: 1 for `n = 0`, else `2r(2r-1)^(n-1)`.
pub fn count_reduced(rank: usize, n: usize) -> BigUint {
    if n == 0 {
        return BigUint::from(1u32);
    }
    let r = rank as u64;
    BigUint::from(2 * r) * num_traits::pow(BigUint::from(2 * r - 1), n - 1)
}

/// Number of reduced words of length `1..=n` (the empty word excluded).
pub fn count_reduced_up_to(rank: usize, n: usize) -> BigUint {
    (1..=n).map(|k| count_reduced(rank, k)).sum()
}

/// Every reduced word of length `n`, lexicographic in letter index order.
pub fn enumerate_reduced(alphabet: Alphabet, n: usize, cap: u64) -> Result<Vec<ReducedWord>> {
    let total = count_reduced(alphabet.rank(), n);
    if total > BigUint::from(cap) {
        return Err(Error::CapExceeded {
            what: "reduced word enumeration",
            requested: u128::try_from(&total).unwrap_or(u128::MAX),
            cap: cap as u128,
        });
    }
    let mut out = Vec::new();
    let mut current = Vec::with_capacity(n);
    enumerate_into(alphabet, n, &mut current, &mut out);
    Ok(out)
}

fn enumerate_into(
    alphabet: Alphabet,
    n: usize,
    current: &mut Vec<Letter>,
    out: &mut Vec<ReducedWord>,
) {
    if current.len() == n {
        out.push(ReducedWord::from_reduced_unchecked(alphabet, current.clone()));
        return;
    }
    for x in alphabet.letters() {
        if current.last() == Some(&x.inverse()) {
            continue;
        }
        current.push(x);
        enumerate_into(alphabet, n, current, out);
        current.pop();
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ab() -> Alphabet {
        Alphabet::new(2).unwrap()
    }

    fn w(text: &str) -> ReducedWord {
        Alphabet::new(3).unwrap().parse(text).unwrap()
    }

    #[test]
    fn reduces_worked_example() {
        assert_eq!(ab().parse("aabBA").unwrap().to_string(), "a");
        assert_eq!(ab().parse("").unwrap().to_string(), "");
        assert_eq!(ab().parse("abBA").unwrap().to_string(), "");
    }

    #[test]
    fn reduce_rejects_out_of_range() {
        assert!(matches!(
            ReducedWord::reduce(ab(), &[0, 4]),
            Err(Error::LetterOutOfRange { index: 4, rank: 2 })
        ));
        let word = ReducedWord::reduce(ab(), &[0, 0, 2, 3, 1]).unwrap();
        assert_eq!(word.to_string(), "a");
    }

    #[test]
    fn parse_reports_position() {
        match ab().parse("ab#a") {
            Err(Error::InvalidCharacter { ch: '#', position: 2 }) => {}
            other => panic!("unexpected {other:?}"),
        }
        assert!(matches!(
            ab().parse("abc"),
            Err(Error::InvalidCharacter { ch: 'c', position: 2 })
        ));
    }

    #[test]
    fn multiply_examples() {
        let m = |u: &str, v: &str| w(u).multiply(&w(v)).unwrap().to_string();
        assert_eq!(m("ab", "BA"), "");
        assert_eq!(m("ab", "bc"), "abbc");
        assert_eq!(m("abA", "aB"), "a");
        let other = Alphabet::new(2).unwrap().parse("a").unwrap();
        assert!(w("a").multiply(&other).is_err());
    }

    #[test]
    fn inverse_examples() {
        assert_eq!(w("abA").inverse().to_string(), "aBA");
        assert_eq!(w("").inverse().to_string(), "");
    }

    #[test]
    fn cyclic_reduction_examples() {
        let red = w("aBAbbA").cyclic_reduce();
        assert_eq!(red.core.to_string(), "Ab");
        assert_eq!(red.conjugator.to_string(), "aB");

        let red = w("aBAbbb").cyclic_reduce();
        assert_eq!(red.core.to_string(), "aBAbbb");
        assert!(red.conjugator.is_empty());

        let red = w("a").cyclic_reduce();
        assert_eq!(red.core.to_string(), "a");
        assert!(red.conjugator.is_empty());

        let red = w("").cyclic_reduce();
        assert!(red.core.is_empty() && red.conjugator.is_empty());
    }

    #[test]
    fn cyclically_reduced_examples() {
        assert!(w("aBAbbb").is_cyclically_reduced());
        assert!(!w("aBAbbA").is_cyclically_reduced());
        assert!(!w("").is_cyclically_reduced());
        assert!(w("a").is_cyclically_reduced());
    }

    #[test]
    fn rotation_examples() {
        let rots: Vec<String> = w("ab").rotations().unwrap().iter().map(|r| r.to_string()).collect();
        assert_eq!(rots, ["ab", "ba"]);
        let rots: Vec<String> = w("abab")
            .rotations()
            .unwrap()
            .iter()
            .map(|r| r.to_string())
            .collect();
        assert_eq!(rots, ["abab", "baba", "abab", "baba"]);
        assert!(w("abA").rotations().is_err());
    }

    #[test]
    fn counting_examples() {
        assert_eq!(count_reduced(2, 1), BigUint::from(4u32));
        assert_eq!(count_reduced(2, 3), BigUint::from(36u32));
        assert_eq!(count_reduced(1, 5), BigUint::from(2u32));
        assert_eq!(count_reduced(2, 0), BigUint::from(1u32));
        // 4 * 3^39 does not fit in 64 bits.
        let big = count_reduced(2, 41);
        assert!(big > BigUint::from(u64::MAX));
        assert_eq!(count_reduced_up_to(2, 3), BigUint::from(52u32));
    }

    #[test]
    fn enumeration_order_and_cap() {
        let words: Vec<String> = enumerate_reduced(ab(), 1, DEFAULT_ENUMERATION_CAP)
            .unwrap()
            .iter()
            .map(|w| w.to_string())
            .collect();
        assert_eq!(words, ["a", "A", "b", "B"]);
        assert!(enumerate_reduced(ab(), 20, 1000).is_err());
        let level2 = enumerate_reduced(ab(), 2, 100).unwrap();
        assert!(level2.windows(2).all(|p| p[0].letters() < p[1].letters()));
    }

    #[test]
    fn infer_rank() {
        assert_eq!(Alphabet::infer("abC").unwrap().rank(), 3);
        assert_eq!(Alphabet::infer("").unwrap().rank(), 1);
        assert!(Alphabet::infer("a1").is_err());
    }

    #[test]
    fn exponent_sums_count_signs() {
        assert_eq!(w("aBa").exponent_sums(), vec![2, -1, 0]);
        assert_eq!(w("abAB").exponent_sums(), vec![0, 0, 0]);
    }
}
