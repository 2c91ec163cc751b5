//! Local automata: every state is entered by a single letter.

use std::collections::BTreeSet;

use super::{MarkovianAutomaton, TransitionSpec};
use crate::error::Result;
use crate::scalar::Probability;
use crate::words::Letter;

/// A state `(q, x)` of the local automaton: state `q` of the original,
/// entered by letter `x`. `incoming` is `None` only for states of the
/// original that no transition enters.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct LocalState {
    pub state: usize,
    pub incoming: Option<Letter>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct LocalAutomaton<W> {
    pub automaton: MarkovianAutomaton<W>,
    pub states: Vec<LocalState>,
}

impl<W: Probability> LocalAutomaton<W> {
    pub fn index_of(&self, s: LocalState) -> Option<usize> {
        self.states.binary_search(&s).ok()
    }
}

/// Splits each state by its incoming letter. The result defines the same
/// distribution on words of every length.
///
/// The initial mass of a state goes to its split copy with the smallest
/// incoming letter; states with no incoming transition keep a copy
/// `(q, None)` when they carry initial mass.
pub fn localize<W: Probability>(a: &MarkovianAutomaton<W>) -> Result<LocalAutomaton<W>> {
    let mut incoming: BTreeSet<LocalState> = BTreeSet::new();
    let transitions = a.transitions();
    for t in &transitions {
        incoming.insert(LocalState {
            state: t.to,
            incoming: Some(t.letter),
        });
    }
    let entered: Vec<bool> = {
        let mut v = vec![false; a.state_count()];
        for t in &transitions {
            v[t.to] = true;
        }
        v
    };
    for (p, g) in a.initial().iter().enumerate() {
        if !entered[p] && !g.is_zero() {
            incoming.insert(LocalState {
                state: p,
                incoming: None,
            });
        }
    }
    let states: Vec<LocalState> = incoming.into_iter().collect();
    let index = |s: LocalState| states.binary_search(&s).expect("local state exists");

    let mut initial = vec![W::zero(); states.len()];
    for (p, g) in a.initial().iter().enumerate() {
        if g.is_zero() {
            continue;
        }
        // States are sorted with `None` before letters, so the first copy of
        // `p` is the right target either way.
        let first = states.partition_point(|s| s.state < p);
        initial[first] = g.clone();
    }

    let mut local_transitions = Vec::new();
    for (i, s) in states.iter().enumerate() {
        for x in a.alphabet().letters() {
            if let Some((q, prob)) = a.transition(s.state, x) {
                local_transitions.push(TransitionSpec {
                    from: i,
                    letter: x,
                    to: index(LocalState {
                        state: *q,
                        incoming: Some(x),
                    }),
                    prob: prob.clone(),
                });
            }
        }
    }
    let names = states
        .iter()
        .map(|s| match s.incoming {
            Some(x) => format!("{}/{x}", a.state_names()[s.state]),
            None => a.state_names()[s.state].clone(),
        })
        .collect();
    let automaton = MarkovianAutomaton::new(a.alphabet(), names, initial, local_transitions)?;
    Ok(LocalAutomaton { automaton, states })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::markov::{psl2_automaton, uniform_automaton, Psl2Variant, Psl2Weights};
    use crate::words::{enumerate_reduced, Alphabet};
    use num_rational::BigRational;

    fn check_same_distribution(a: &MarkovianAutomaton<BigRational>) {
        let l = localize(a).unwrap();
        assert!(l.automaton.is_local());
        for n in 0..=6 {
            for w in enumerate_reduced(a.alphabet(), n, 100_000).unwrap() {
                assert_eq!(
                    a.word_probability(w.letters()),
                    l.automaton.word_probability(w.letters()),
                    "{w}"
                );
            }
        }
    }

    #[test]
    fn presets_localize_exactly() {
        check_same_distribution(&uniform_automaton(2).unwrap());
        check_same_distribution(&psl2_automaton(Psl2Variant::Geodesic, Psl2Weights::default()).unwrap());
        check_same_distribution(
            &psl2_automaton(Psl2Variant::Quasigeodesic, Psl2Weights::default()).unwrap(),
        );
    }

    #[test]
    fn non_local_automaton_with_unentered_start() {
        // `s` is never entered; `t` is entered by both a and b.
        let ab = Alphabet::new(2).unwrap();
        let a = Letter::generator(0);
        let b = Letter::generator(1);
        let half = BigRational::new(1.into(), 2.into());
        let m = MarkovianAutomaton::new(
            ab,
            vec!["s".into(), "t".into()],
            vec![half.clone(), half.clone()],
            vec![
                TransitionSpec { from: 0, letter: a, to: 1, prob: half.clone() },
                TransitionSpec { from: 0, letter: b, to: 1, prob: half.clone() },
                TransitionSpec { from: 1, letter: a, to: 1, prob: half.clone() },
                TransitionSpec { from: 1, letter: b, to: 1, prob: half },
            ],
        )
        .unwrap();
        assert!(!m.is_local());
        let l = localize(&m).unwrap();
        assert_eq!(l.states.len(), 3);
        assert!(l.index_of(LocalState { state: 0, incoming: None }).is_some());
        check_same_distribution(&m);
    }
}
