//! Built-in automata.

use num_bigint::BigInt;
use num_rational::BigRational;

use super::{MarkovianAutomaton, TransitionSpec};
use crate::error::{Error, Result};
use crate::scalar::Probability;
use crate::words::{Alphabet, Letter};

fn ratio<W: Probability>(p: i64, q: i64) -> W {
    W::from_rational(&BigRational::new(BigInt::from(p), BigInt::from(q)))
        .expect("small rationals are representable")
}

/// The uniform distribution on reduced words of each length.
///
/// State `x` stands for "the previous letter was `x`" and emits every letter
/// but `x^-1` with probability `1/(2r-1)`. The initial law is uniform over
/// states, which makes the first letter uniform as well.
pub fn uniform_automaton<W: Probability>(rank: usize) -> Result<MarkovianAutomaton<W>> {
    let alphabet = Alphabet::new(rank)?;
    let size = alphabet.size() as i64;
    let names = alphabet.letters().map(|x| x.to_string()).collect();
    let initial = vec![ratio(1, size); alphabet.size()];
    let mut transitions = Vec::new();
    for x in alphabet.letters() {
        for y in alphabet.letters().filter(|&y| y != x.inverse()) {
            transitions.push(TransitionSpec {
                from: x.index(),
                letter: y,
                to: y.index(),
                prob: ratio(1, size - 1),
            });
        }
    }
    MarkovianAutomaton::new(alphabet, names, initial, transitions)
}

/// Automata over `{a, b}` presenting `PSL(2, Z) = <a, b | a^2, b^3>` style
/// normal forms: `a` alternates with powers of `b`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Psl2Variant {
    /// Words alternating `a` with `b` or `B`.
    Geodesic,
    /// Words alternating `a` with `b` or `bb`; `bbb` never occurs.
    Quasigeodesic,
}

/// Free parameters of the PSL(2, Z) automata.
///
/// `initial` is indexed by state in the order the preset lists them.
/// `branch` is the probability of the first of the two choices: `b` over
/// `B` after `a` (geodesic), or `a` over a second `b` (quasigeodesic).
#[derive(Clone, Debug, PartialEq)]
pub struct Psl2Weights<W> {
    pub initial: [W; 3],
    pub branch: W,
}

impl<W: Probability> Default for Psl2Weights<W> {
    fn default() -> Self {
        Psl2Weights {
            initial: [ratio(1, 3), ratio(1, 3), ratio(1, 3)],
            branch: ratio(1, 2),
        }
    }
}

pub fn psl2_automaton<W: Probability>(
    variant: Psl2Variant,
    weights: Psl2Weights<W>,
) -> Result<MarkovianAutomaton<W>> {
    let alphabet = Alphabet::new(2)?;
    if weights.branch <= W::zero() || weights.branch >= W::one() {
        return Err(Error::Config(format!(
            "branch probability {} must lie strictly between 0 and 1",
            weights.branch
        )));
    }
    let a = Letter::generator(0);
    let b = Letter::generator(1);
    let big_b = b.inverse();
    let p = weights.branch.clone();
    let rest = W::one() - weights.branch;
    let t = |from, letter, to, prob| TransitionSpec {
        from,
        letter,
        to,
        prob,
    };
    let (names, transitions) = match variant {
        Psl2Variant::Geodesic => (
            ["after_a", "after_b", "after_B"],
            vec![
                t(0, b, 1, p),
                t(0, big_b, 2, rest),
                t(1, a, 0, W::one()),
                t(2, a, 0, W::one()),
            ],
        ),
        Psl2Variant::Quasigeodesic => (
            ["after_a", "after_b", "after_bb"],
            vec![
                t(0, b, 1, W::one()),
                t(1, a, 0, p),
                t(1, b, 2, rest),
                t(2, a, 0, W::one()),
            ],
        ),
    };
    MarkovianAutomaton::new(
        alphabet,
        names.iter().map(|s| s.to_string()).collect(),
        weights.initial.to_vec(),
        transitions,
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::words::{count_reduced, enumerate_reduced};
    use num_traits::{One, ToPrimitive};

    fn exact(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    #[test]
    fn uniform_word_probabilities_are_exact() {
        for rank in 1..=3 {
            let a = uniform_automaton::<BigRational>(rank).unwrap();
            assert!(a.is_uniform());
            let ab = a.alphabet();
            for n in 1..=4 {
                let count = count_reduced(rank, n).to_i64().unwrap();
                let mut total = BigRational::from_integer(0.into());
                for w in enumerate_reduced(ab, n, 1_000_000).unwrap() {
                    let p = a.word_probability(w.letters());
                    assert_eq!(p, exact(1, count));
                    total += p;
                }
                assert!(total.is_one());
            }
        }
    }

    #[test]
    fn non_reduced_words_have_probability_zero() {
        let a = uniform_automaton::<f64>(2).unwrap();
        let ab = a.alphabet();
        assert_eq!(a.word_probability(&ab.parse_raw("aA").unwrap()), 0.0);
    }

    #[test]
    fn psl2_supports() {
        let g = psl2_automaton::<BigRational>(Psl2Variant::Geodesic, Psl2Weights::default()).unwrap();
        let ab = g.alphabet();
        let p = |w: &str| g.word_probability(&ab.parse_raw(w).unwrap());
        assert!(p("abaB") > exact(0, 1));
        assert_eq!(p("abb"), exact(0, 1));
        assert_eq!(p("aa"), exact(0, 1));

        let q = psl2_automaton::<BigRational>(Psl2Variant::Quasigeodesic, Psl2Weights::default())
            .unwrap();
        let p = |w: &str| q.word_probability(&ab.parse_raw(w).unwrap());
        assert!(p("abb") > exact(0, 1));
        assert_eq!(p("abbb"), exact(0, 1));
        assert_eq!(p("aB"), exact(0, 1));
        assert!(!q.is_uniform());
    }

    #[test]
    fn psl2_rejects_degenerate_branch() {
        let w = Psl2Weights {
            initial: [1.0 / 3.0; 3],
            branch: 1.0,
        };
        assert!(psl2_automaton(Psl2Variant::Geodesic, w).is_err());
    }
}
