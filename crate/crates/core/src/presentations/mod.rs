//! Checks on the group `<A | h>` presented by a tuple: abelianization and
//! prefix collisions.
//!
//! Both are necessary conditions only. The abelianization cannot tell
//! `F(D) * Z/2` from other groups with the same abelian quotient.

mod snf;

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::One;

pub use snf::{determinant, identity, mat_mul, smith_normal_form, IntMatrix, RowLattice, SmithDecomposition};

use crate::error::{Error, Result};
use crate::markov::MarkovianAutomaton;
use crate::scalar::Probability;
use crate::trie::PrefixTrie;
use crate::tuples::WordTuple;

/// Cap on the reported number of colliding pairs.
pub const COLLISION_PAIR_CAP: u64 = 1 << 32;

/// `Z^free_rank + Z/d_1 + ... + Z/d_k` with `d_1 | d_2 | ...`, all `d_i > 1`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AbelianizationResult {
    pub free_rank: usize,
    pub invariant_factors: Vec<BigInt>,
}

impl fmt::Display for AbelianizationResult {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts: Vec<String> = Vec::new();
        if self.free_rank > 0 {
            parts.push(if self.free_rank == 1 {
                "Z".into()
            } else {
                format!("Z^{}", self.free_rank)
            });
        }
        parts.extend(self.invariant_factors.iter().map(|d| format!("Z/{d}")));
        if parts.is_empty() {
            write!(f, "0")
        } else {
            write!(f, "{}", parts.join(" + "))
        }
    }
}

/// Exponent sums: row `i`, column `j` counts `a_j` minus `a_j^-1` in `h_i`.
pub fn exponent_matrix(h: &WordTuple) -> IntMatrix {
    h.words()
        .iter()
        .map(|w| w.exponent_sums().into_iter().map(BigInt::from).collect())
        .collect()
}

/// `Z^r / rowspace`, folding rows into an echelon basis one at a time.
pub fn abelianization(h: &WordTuple) -> AbelianizationResult {
    let r = h.alphabet().rank();
    let mut lattice = RowLattice::new(r);
    for w in h.words() {
        lattice.insert(w.exponent_sums().into_iter().map(BigInt::from).collect());
    }
    from_lattice(&lattice, r)
}

fn from_lattice(lattice: &RowLattice, r: usize) -> AbelianizationResult {
    if lattice.rank() == 0 {
        return AbelianizationResult {
            free_rank: r,
            invariant_factors: Vec::new(),
        };
    }
    let diag = smith_normal_form(&lattice.basis().to_vec()).diagonal();
    AbelianizationResult {
        free_rank: r - diag.len(),
        invariant_factors: diag.into_iter().filter(|d| !d.is_one()).collect(),
    }
}

/// The predicted degenerate group for an automaton: `E` the letters that
/// label transitions, `D` the generators with neither sign in `E`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct DegeneratePrediction {
    /// Some letter and its inverse both occur.
    pub has_inverse_pair: bool,
    /// `|D|`, plus one when no inverse pair occurs (a free factor survives).
    pub free_part: usize,
}

impl DegeneratePrediction {
    pub fn for_automaton<W: Probability>(a: &MarkovianAutomaton<W>) -> Self {
        let used = a.used_letters();
        let has_inverse_pair = used.iter().any(|x| used.contains(&x.inverse()));
        let absent = (0..a.alphabet().rank())
            .filter(|&j| !used.iter().any(|x| x.generator_index() == j))
            .count();
        DegeneratePrediction {
            has_inverse_pair,
            free_part: absent + usize::from(!has_inverse_pair),
        }
    }

    /// Expected class for words of length `n`: `Z/2` for even `n` when an
    /// inverse pair occurs, trivial otherwise.
    pub fn expected(&self, n: usize) -> DegenerateClass {
        if self.has_inverse_pair && n % 2 == 0 {
            DegenerateClass::ConsistentZ2
        } else {
            DegenerateClass::ConsistentTrivial
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum DegenerateClass {
    /// Abelianization is `Z^free_part`.
    ConsistentTrivial,
    /// Abelianization is `Z^free_part + Z/2`.
    ConsistentZ2,
    Other(AbelianizationResult),
}

impl fmt::Display for DegenerateClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            DegenerateClass::ConsistentTrivial => write!(f, "consistent_trivial"),
            DegenerateClass::ConsistentZ2 => write!(f, "consistent_Z2"),
            DegenerateClass::Other(r) => write!(f, "other({r})"),
        }
    }
}

/// Classifies the abelianization of `<A | h>` against the degenerate
/// groups, `free_part` being the rank of the free factor `F(D)`.
pub fn degenerate_class_check(h: &WordTuple, free_part: usize) -> DegenerateClass {
    let ab = abelianization(h);
    let two = BigInt::from(2);
    if ab.free_rank == free_part && ab.invariant_factors.is_empty() {
        DegenerateClass::ConsistentTrivial
    } else if ab.free_rank == free_part && ab.invariant_factors == [two] {
        DegenerateClass::ConsistentZ2
    } else {
        DegenerateClass::Other(ab)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct CollisionStatistic {
    /// Pairs of distinct indices sharing the prefix, capped.
    pub pairs: u64,
    pub exists: bool,
}

/// Pairs of words (distinct indices) with a common prefix of length `ell`.
pub fn collision_statistic(h: &WordTuple, ell: usize) -> Result<CollisionStatistic> {
    let min = h.min_len().ok_or(Error::EmptyTuple)?;
    if ell > min {
        return Err(Error::PrefixTooLong { prefix: ell, min });
    }
    let mut trie = PrefixTrie::new(h.alphabet().size());
    let mut pairs = 0u64;
    for w in h.words() {
        let dup = trie.insert(&w.letters()[..ell]).duplicates;
        pairs = pairs.saturating_add(u64::from(dup)).min(COLLISION_PAIR_CAP);
    }
    Ok(CollisionStatistic {
        pairs,
        exists: pairs > 0,
    })
}

impl AbelianizationResult {
    /// Whether `Z/2` is a quotient: a free part or an even invariant factor.
    pub fn has_z2_quotient(&self) -> bool {
        self.free_rank > 0 || self.invariant_factors.iter().any(|d| d.is_even())
    }
}
