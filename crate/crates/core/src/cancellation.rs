//! Pieces and the small cancellation condition `C'(λ)`.
//!
//! The relator set is the set of cyclic rotations of `h_i` and `h_i^-1`.
//! A rotation slot `(i, sign, ρ)` is the rotation of `h_i` (or of its
//! inverse) starting at position `ρ`. The piece of a slot is the longest
//! common prefix it shares with any other slot; slots of the same word at
//! different shifts count as different even when the rotations coincide.

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::suffix::{lcp_array, suffix_array};
use crate::tuples::WordTuple;
use crate::words::{Letter, ReducedWord};

/// Default cap on `(number of slots)^2 * max length` for [`pieces_naive`].
pub const DEFAULT_NAIVE_CAP: u128 = 1_000_000_000;

/// A rational `p/q` with `0 < p < q`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Lambda {
    p: u64,
    q: u64,
}

impl Lambda {
    pub fn new(p: u64, q: u64) -> Result<Self> {
        if p == 0 || p >= q {
            return Err(Error::InvalidLambda(format!("{p}/{q}")));
        }
        Ok(Lambda { p, q })
    }

    pub fn numerator(self) -> u64 {
        self.p
    }

    pub fn denominator(self) -> u64 {
        self.q
    }

    pub fn to_f64(self) -> f64 {
        self.p as f64 / self.q as f64
    }

    /// `piece < λ |w|`, in exact integer arithmetic.
    pub fn admits(self, piece: usize, length: usize) -> bool {
        (self.q as u128) * (piece as u128) < (self.p as u128) * (length as u128)
    }

    pub fn le(self, other: Lambda) -> bool {
        (self.p as u128) * (other.q as u128) <= (other.p as u128) * (self.q as u128)
    }
}

impl FromStr for Lambda {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::InvalidLambda(s.to_string());
        let (p, q) = s.trim().split_once('/').ok_or_else(bad)?;
        let p: u64 = p.trim().parse().map_err(|_| bad())?;
        let q: u64 = q.trim().parse().map_err(|_| bad())?;
        Lambda::new(p, q).map_err(|_| bad())
    }
}

impl fmt::Display for Lambda {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}", self.p, self.q)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct RotationSlot {
    pub word: usize,
    pub inverted: bool,
    pub shift: usize,
}

impl fmt::Display for RotationSlot {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let sign = if self.inverted { "-" } else { "+" };
        write!(f, "(word {}, {sign}, shift {})", self.word, self.shift)
    }
}

/// Maximal piece length per rotation slot, with a partner slot achieving it.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PieceTable {
    pub slots: Vec<RotationSlot>,
    pub pieces: Vec<usize>,
    pub partners: Vec<Option<RotationSlot>>,
    lengths: Vec<usize>,
}

/// A rotation whose maximal piece is too long for `C'(λ)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Violation {
    pub slot: RotationSlot,
    pub partner: RotationSlot,
    pub piece: usize,
    pub length: usize,
    pub rotation: ReducedWord,
    pub common_prefix: ReducedWord,
}

impl PieceTable {
    pub fn len(&self) -> usize {
        self.slots.len()
    }

    pub fn is_empty(&self) -> bool {
        self.slots.is_empty()
    }

    pub fn get(&self, slot: RotationSlot) -> Option<usize> {
        self.slots.binary_search(&slot).ok().map(|i| self.pieces[i])
    }

    pub fn length(&self, i: usize) -> usize {
        self.lengths[i]
    }

    pub fn max_piece(&self) -> usize {
        self.pieces.iter().copied().max().unwrap_or(0)
    }
}

fn check_cyclic(h: &WordTuple) -> Result<()> {
    if h.is_empty() {
        return Err(Error::EmptyTuple);
    }
    for (index, w) in h.words().iter().enumerate() {
        if !w.is_cyclically_reduced() {
            return Err(Error::NotCyclicallyReduced { index });
        }
    }
    Ok(())
}

fn signed(h: &WordTuple) -> Vec<(usize, bool, ReducedWord)> {
    h.words()
        .iter()
        .enumerate()
        .flat_map(|(i, w)| [(i, false, w.clone()), (i, true, w.inverse())])
        .collect()
}

fn slot_list(h: &WordTuple) -> (Vec<RotationSlot>, Vec<usize>) {
    let mut slots = Vec::new();
    let mut lengths = Vec::new();
    for (word, inverted, w) in signed(h) {
        for shift in 0..w.len() {
            slots.push(RotationSlot {
                word,
                inverted,
                shift,
            });
            lengths.push(w.len());
        }
    }
    (slots, lengths)
}

/// Maximal piece per rotation slot, via a suffix array over the doubled
/// words `e e #` of every entry `e` of `h±`.
pub fn max_piece_per_rotation(h: &WordTuple) -> Result<PieceTable> {
    check_cyclic(h)?;
    let size = h.alphabet().size() as u32;
    let (slots, lengths) = slot_list(h);
    let mut text: Vec<u32> = Vec::new();
    // Text position of each slot's suffix, and the slot at each position.
    let mut slot_at: Vec<u32> = Vec::new();
    let mut next_slot = 0u32;
    for (k, (_, _, w)) in signed(h).iter().enumerate() {
        for copy in 0..2 {
            for x in w.letters() {
                text.push(x.index() as u32);
                if copy == 0 {
                    slot_at.push(next_slot);
                    next_slot += 1;
                } else {
                    slot_at.push(u32::MAX);
                }
            }
        }
        text.push(size + k as u32);
        slot_at.push(u32::MAX);
    }
    let sa = suffix_array(&text);
    let lcp = lcp_array(&text, &sa);

    // Restrict the suffix order to slot suffixes; adjacent lcp is the range
    // minimum over the skipped suffixes.
    let mut order: Vec<u32> = Vec::with_capacity(slots.len());
    let mut between: Vec<usize> = Vec::with_capacity(slots.len());
    let mut run = usize::MAX;
    for (j, &p) in sa.iter().enumerate() {
        if j > 0 {
            run = run.min(lcp[j]);
        }
        let s = slot_at[p];
        if s != u32::MAX {
            between.push(if order.is_empty() { 0 } else { run });
            order.push(s);
            run = usize::MAX;
        }
    }

    let m = order.len();
    let mut pieces = vec![0usize; slots.len()];
    let mut partners: Vec<Option<RotationSlot>> = vec![None; slots.len()];
    for j in 0..m {
        let me = order[j] as usize;
        let mut best = 0usize;
        let mut partner = None;
        let mut run = usize::MAX;
        for k in (0..j).rev() {
            run = run.min(between[k + 1]);
            if run <= best {
                break;
            }
            let other = order[k] as usize;
            let cand = run.min(lengths[me]).min(lengths[other]);
            if cand > best {
                best = cand;
                partner = Some(other);
            }
        }
        let mut run = usize::MAX;
        for k in j + 1..m {
            run = run.min(between[k]);
            if run <= best {
                break;
            }
            let other = order[k] as usize;
            let cand = run.min(lengths[me]).min(lengths[other]);
            if cand > best {
                best = cand;
                partner = Some(other);
            }
        }
        pieces[me] = best;
        partners[me] = partner.map(|o| slots[o]);
        if partner.is_none() && m > 1 {
            // No common prefix with anyone: report an adjacent slot.
            let k = if j > 0 { j - 1 } else { 1 };
            partners[me] = Some(slots[order[k] as usize]);
        }
    }
    Ok(PieceTable {
        slots,
        pieces,
        partners,
        lengths,
    })
}

/// Quadratic oracle for [`max_piece_per_rotation`].
pub fn pieces_naive(h: &WordTuple, cap: u128) -> Result<PieceTable> {
    check_cyclic(h)?;
    let (slots, lengths) = slot_list(h);
    let n = slots.len() as u128;
    let work = n * n * h.max_len().unwrap_or(0) as u128;
    if work > cap {
        return Err(Error::CapExceeded {
            what: "naive piece comparisons",
            requested: work,
            cap,
        });
    }
    let rotations: Vec<Vec<Letter>> = signed(h)
        .iter()
        .flat_map(|(_, _, w)| (0..w.len()).map(move |s| w.rotate(s).letters().to_vec()))
        .collect();
    let mut pieces = vec![0usize; slots.len()];
    let mut partners = vec![None; slots.len()];
    for i in 0..slots.len() {
        for j in 0..slots.len() {
            if i == j {
                continue;
            }
            let l = rotations[i]
                .iter()
                .zip(&rotations[j])
                .take_while(|(x, y)| x == y)
                .count();
            if l > pieces[i] || partners[i].is_none() {
                if l > pieces[i] {
                    pieces[i] = l;
                }
                partners[i] = Some(slots[j]);
            }
        }
    }
    Ok(PieceTable {
        slots,
        pieces,
        partners,
        lengths,
    })
}

/// First rotation slot (in slot order) violating `C'(λ)`.
pub fn cprime_violation(h: &WordTuple, lambda: Lambda) -> Result<Option<Violation>> {
    let table = max_piece_per_rotation(h)?;
    for i in 0..table.len() {
        let (piece, length) = (table.pieces[i], table.lengths[i]);
        if !lambda.admits(piece, length) {
            let slot = table.slots[i];
            let partner = table.partners[i].unwrap_or(slot);
            let base = &h.words()[slot.word];
            let word = if slot.inverted { base.inverse() } else { base.clone() };
            let rotation = word.rotate(slot.shift);
            let common_prefix = ReducedWord::reduce_letters(
                h.alphabet(),
                rotation.letters()[..piece].iter().copied(),
            );
            return Ok(Some(Violation {
                slot,
                partner,
                piece,
                length,
                rotation,
                common_prefix,
            }));
        }
    }
    Ok(None)
}

/// `C'(λ)`: every piece of every rotation is shorter than `λ |rotation|`.
pub fn satisfies_cprime(h: &WordTuple, lambda: Lambda) -> Result<bool> {
    Ok(cprime_violation(h, lambda)?.is_none())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::words::Alphabet;
    use proptest::prelude::*;

    fn tuple(rank: usize, words: &[&str]) -> WordTuple {
        let ab = Alphabet::new(rank).unwrap();
        WordTuple::new(ab, words.iter().map(|w| ab.parse(w).unwrap()).collect()).unwrap()
    }

    fn lambda(s: &str) -> Lambda {
        s.parse().unwrap()
    }

    #[test]
    fn lambda_parsing() {
        assert_eq!(lambda("1/6"), Lambda::new(1, 6).unwrap());
        assert!("0/3".parse::<Lambda>().is_err());
        assert!("3/3".parse::<Lambda>().is_err());
        assert!("1.5".parse::<Lambda>().is_err());
        assert!(lambda("1/6").le(lambda("1/3")));
        assert!(!lambda("1/2").le(lambda("1/3")));
    }

    #[test]
    fn commutator_satisfies_nothing_small() {
        // Rotations of abAB and its inverse share single letters.
        let t = tuple(2, &["abAB"]);
        let table = max_piece_per_rotation(&t).unwrap();
        assert_eq!(table.max_piece(), 1);
        assert!(!satisfies_cprime(&t, lambda("1/4")).unwrap());
        assert!(satisfies_cprime(&t, lambda("1/3")).unwrap());
    }

    #[test]
    fn single_letter_relator() {
        // Rotation slots of "a" at its single shift: "a" and "A" share nothing.
        let t = tuple(2, &["a"]);
        let table = max_piece_per_rotation(&t).unwrap();
        assert_eq!(table.pieces, [0, 0]);
        assert!(satisfies_cprime(&t, lambda("1/6")).unwrap());
    }

    #[test]
    fn periodic_word_pieces_span_most_of_the_word() {
        // Shifts 0 and 2 of "abab" coincide, giving a piece of full length.
        let t = tuple(2, &["abab"]);
        assert_eq!(max_piece_per_rotation(&t).unwrap().max_piece(), 4);
        assert!(!satisfies_cprime(&t, lambda("99/100")).unwrap());
    }

    #[test]
    fn rejects_non_cyclically_reduced() {
        assert!(matches!(
            max_piece_per_rotation(&tuple(2, &["ab", "abA"])),
            Err(Error::NotCyclicallyReduced { index: 1 })
        ));
    }

    #[test]
    fn witness_reports_shared_prefix() {
        let t = tuple(2, &["aabbb", "aabAB"]);
        let v = cprime_violation(&t, lambda("1/6")).unwrap().unwrap();
        assert!(v.piece >= 1);
        assert_eq!(v.common_prefix.len(), v.piece);
        let partner_word = &t.words()[v.partner.word];
        let partner = if v.partner.inverted {
            partner_word.inverse()
        } else {
            partner_word.clone()
        }
        .rotate(v.partner.shift);
        assert!(partner.letters().starts_with(v.common_prefix.letters()));
        assert!(v.rotation.letters().starts_with(v.common_prefix.letters()));
    }

    #[test]
    fn naive_cap() {
        let t = tuple(2, &["abAB"]);
        assert!(matches!(
            pieces_naive(&t, 10),
            Err(Error::CapExceeded { .. })
        ));
    }

    fn arb_cyclic_tuple() -> impl Strategy<Value = WordTuple> {
        (1usize..4).prop_flat_map(|rank| {
            let word = prop::collection::vec(0..2 * rank, 1..12);
            prop::collection::vec(word, 1..5).prop_filter_map("nonempty", move |raws| {
                let ab = Alphabet::new(rank).unwrap();
                let words: Vec<ReducedWord> = raws
                    .iter()
                    .map(|r| ReducedWord::reduce(ab, r).unwrap().cyclic_reduce().core)
                    .filter(|w| !w.is_empty())
                    .collect();
                (!words.is_empty()).then(|| WordTuple::new(ab, words).unwrap())
            })
        })
    }

    proptest! {
        #[test]
        fn suffix_pieces_match_naive(t in arb_cyclic_tuple()) {
            let fast = max_piece_per_rotation(&t).unwrap();
            let slow = pieces_naive(&t, DEFAULT_NAIVE_CAP).unwrap();
            prop_assert_eq!(&fast.slots, &slow.slots);
            prop_assert_eq!(&fast.pieces, &slow.pieces);
        }

        #[test]
        fn antitone_in_lambda(t in arb_cyclic_tuple(), a in 1u64..20, b in 1u64..20) {
            let (lo, hi) = (a.min(b), a.max(b));
            let l1 = Lambda::new(lo, 21).unwrap();
            let l2 = Lambda::new(hi, 21).unwrap();
            if satisfies_cprime(&t, l1).unwrap() {
                prop_assert!(satisfies_cprime(&t, l2).unwrap());
            }
        }

        #[test]
        fn partners_share_the_piece(t in arb_cyclic_tuple()) {
            let table = max_piece_per_rotation(&t).unwrap();
            let rot = |s: RotationSlot| {
                let w = &t.words()[s.word];
                let w = if s.inverted { w.inverse() } else { w.clone() };
                w.rotate(s.shift)
            };
            for i in 0..table.len() {
                if let Some(p) = table.partners[i] {
                    prop_assert_ne!(p, table.slots[i]);
                    let a = rot(table.slots[i]);
                    let b = rot(p);
                    let l = a.letters().iter().zip(b.letters()).take_while(|(x, y)| x == y).count();
                    prop_assert_eq!(l, table.pieces[i]);
                }
            }
        }
    }
}
