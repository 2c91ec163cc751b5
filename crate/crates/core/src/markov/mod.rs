//! Markovian automata: deterministic automata over the symmetrized alphabet
//! with an initial law and per-state transition probabilities.

mod cycles;
mod json;
mod local;
mod presets;
mod sampling;
mod spectral;

use std::fmt;

pub use cycles::{
    elementary_cycles, has_probability_one_cycle, prefix_heavy_params, CycleBound,
    PrefixHeavyParams, SpectralBound, DEFAULT_CYCLE_CAP,
};
pub use json::{automaton_from_json, automaton_from_json_str, automaton_to_json};
pub use local::{localize, LocalAutomaton, LocalState};
pub use presets::{psl2_automaton, uniform_automaton, Psl2Variant, Psl2Weights};
pub use sampling::{
    density_to_size, threshold_predictions, Sampler, ThresholdPrediction, ThresholdPredictions,
};
pub use spectral::{
    analyze, entrywise_power_matrix, power_iteration, stochastic_matrix, DenseMatrix,
    PowerIteration, SpectralOptions, SpectralSummary,
};

use crate::error::{Error, Result};
use crate::scalar::Probability;
use crate::words::{Alphabet, Letter};

/// A transition `(from, letter) -> to` with its probability.
#[derive(Clone, Debug, PartialEq)]
pub struct TransitionSpec<W> {
    pub from: usize,
    pub letter: Letter,
    pub to: usize,
    pub prob: W,
}

#[derive(Clone, Debug, PartialEq)]
pub struct MarkovianAutomaton<W> {
    alphabet: Alphabet,
    names: Vec<String>,
    initial: Vec<W>,
    /// `transitions[state][letter]`.
    transitions: Vec<Vec<Option<(usize, W)>>>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ViolationKind {
    UnknownState,
    DuplicateTransition,
    InitialOutOfRange,
    InitialSum,
    ProbabilityOutOfRange,
    ZeroProbability,
    StateSum,
    /// `(p, a, q)` is a transition but `q` has an outgoing `a^-1`.
    ReducedSupport,
    NoStates,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Violation {
    pub kind: ViolationKind,
    pub state: Option<usize>,
    pub letter: Option<Letter>,
    pub message: String,
}

/// Every failed check of an automaton.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct ValidationReport {
    pub violations: Vec<Violation>,
}

impl ValidationReport {
    pub fn is_valid(&self) -> bool {
        self.violations.is_empty()
    }

    fn push(&mut self, kind: ViolationKind, state: Option<usize>, letter: Option<Letter>, message: String) {
        self.violations.push(Violation {
            kind,
            state,
            letter,
            message,
        });
    }
}

impl fmt::Display for ValidationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.violations.is_empty() {
            return write!(f, "valid");
        }
        for (i, v) in self.violations.iter().enumerate() {
            if i > 0 {
                writeln!(f)?;
            }
            write!(f, "  {}", v.message)?;
        }
        Ok(())
    }
}

impl<W: Probability> MarkovianAutomaton<W> {
    /// Assembles an automaton and validates it.
    pub fn new(
        alphabet: Alphabet,
        names: Vec<String>,
        initial: Vec<W>,
        transitions: Vec<TransitionSpec<W>>,
    ) -> Result<Self> {
        let a = Self::new_unchecked(alphabet, names, initial, transitions)?;
        let report = a.validate();
        if report.is_valid() {
            Ok(a)
        } else {
            Err(Error::InvalidAutomaton(report))
        }
    }

    /// Assembles an automaton, only rejecting structural problems (unknown
    /// states, two transitions for one `(state, letter)`).
    pub fn new_unchecked(
        alphabet: Alphabet,
        names: Vec<String>,
        initial: Vec<W>,
        transitions: Vec<TransitionSpec<W>>,
    ) -> Result<Self> {
        let n = names.len();
        let mut report = ValidationReport::default();
        if n == 0 {
            report.push(ViolationKind::NoStates, None, None, "automaton has no states".into());
        }
        if initial.len() != n {
            report.push(
                ViolationKind::UnknownState,
                None,
                None,
                format!("initial law has {} entries for {n} states", initial.len()),
            );
        }
        let mut table: Vec<Vec<Option<(usize, W)>>> = vec![vec![None; alphabet.size()]; n];
        for t in transitions {
            if t.from >= n || t.to >= n {
                report.push(
                    ViolationKind::UnknownState,
                    None,
                    Some(t.letter),
                    format!("transition {} --{}--> {} uses an unknown state", t.from, t.letter, t.to),
                );
                continue;
            }
            if !alphabet.contains(t.letter) {
                return Err(Error::LetterOutOfRange {
                    index: t.letter.index(),
                    rank: alphabet.rank(),
                });
            }
            let slot = &mut table[t.from][t.letter.index()];
            if slot.is_some() {
                report.push(
                    ViolationKind::DuplicateTransition,
                    Some(t.from),
                    Some(t.letter),
                    format!("state {}: two transitions labeled {}", names[t.from], t.letter),
                );
                continue;
            }
            *slot = Some((t.to, t.prob));
        }
        if !report.is_valid() {
            return Err(Error::InvalidAutomaton(report));
        }
        Ok(MarkovianAutomaton {
            alphabet,
            names,
            initial,
            transitions: table,
        })
    }

    /// Checks the stochastic and reduced-support conditions.
    pub fn validate(&self) -> ValidationReport {
        let tol = W::stochastic_tolerance();
        let zero = W::zero();
        let one = W::one();
        let mut report = ValidationReport::default();
        let mut total = W::zero();
        for (p, g) in self.initial.iter().enumerate() {
            if *g < zero || *g > one.clone() + tol.clone() {
                report.push(
                    ViolationKind::InitialOutOfRange,
                    Some(p),
                    None,
                    format!("initial probability of {} is {g}, outside [0, 1]", self.names[p]),
                );
            }
            total = total + g.clone();
        }
        if !total.approx_eq(&one) {
            report.push(
                ViolationKind::InitialSum,
                None,
                None,
                format!("initial probabilities sum to {total}, not 1"),
            );
        }
        for p in 0..self.state_count() {
            let mut sum = W::zero();
            for x in self.alphabet.letters() {
                let Some((q, prob)) = self.transition(p, x) else { continue };
                if *prob <= zero {
                    report.push(
                        ViolationKind::ZeroProbability,
                        Some(p),
                        Some(x),
                        format!("state {}, letter {x}: stored probability {prob} is not positive", self.names[p]),
                    );
                } else if *prob > one.clone() + tol.clone() {
                    report.push(
                        ViolationKind::ProbabilityOutOfRange,
                        Some(p),
                        Some(x),
                        format!("state {}, letter {x}: probability {prob} exceeds 1", self.names[p]),
                    );
                }
                if self.transition(*q, x.inverse()).is_some() {
                    report.push(
                        ViolationKind::ReducedSupport,
                        Some(p),
                        Some(x),
                        format!(
                            "state {}, letter {x}: target {} has a transition labeled {}",
                            self.names[p],
                            self.names[*q],
                            x.inverse()
                        ),
                    );
                }
                sum = sum + prob.clone();
            }
            if !sum.approx_eq(&one) {
                report.push(
                    ViolationKind::StateSum,
                    Some(p),
                    None,
                    format!("state {}: outgoing probabilities sum to {sum}, not 1", self.names[p]),
                );
            }
        }
        report
    }

    pub fn alphabet(&self) -> Alphabet {
        self.alphabet
    }

    pub fn state_count(&self) -> usize {
        self.names.len()
    }

    pub fn state_names(&self) -> &[String] {
        &self.names
    }

    pub fn state_index(&self, name: &str) -> Option<usize> {
        self.names.iter().position(|n| n == name)
    }

    pub fn initial(&self) -> &[W] {
        &self.initial
    }

    pub fn transition(&self, state: usize, letter: Letter) -> Option<&(usize, W)> {
        self.transitions[state][letter.index()].as_ref()
    }

    /// Every transition, ordered by state then letter.
    pub fn transitions(&self) -> Vec<TransitionSpec<W>> {
        let mut out = Vec::new();
        for p in 0..self.state_count() {
            for x in self.alphabet.letters() {
                if let Some((q, prob)) = self.transition(p, x) {
                    out.push(TransitionSpec {
                        from: p,
                        letter: x,
                        to: *q,
                        prob: prob.clone(),
                    });
                }
            }
        }
        out
    }

    /// `γ(p, u)`: product of the probabilities along `u` from `p`.
    pub fn path_probability(&self, state: usize, word: &[Letter]) -> W {
        let mut p = state;
        let mut acc = W::one();
        for &x in word {
            match self.transition(p, x) {
                Some((q, prob)) => {
                    acc = acc * prob.clone();
                    p = *q;
                }
                None => return W::zero(),
            }
        }
        acc
    }

    /// Probability that the sampled word of length `|u|` equals `u`.
    pub fn word_probability(&self, word: &[Letter]) -> W {
        let mut total = W::zero();
        for (p, g) in self.initial.iter().enumerate() {
            if !g.is_zero() {
                total = total + g.clone() * self.path_probability(p, word);
            }
        }
        total
    }

    /// Letters labeling at least one transition.
    pub fn used_letters(&self) -> Vec<Letter> {
        self.alphabet
            .letters()
            .filter(|&x| (0..self.state_count()).any(|p| self.transition(p, x).is_some()))
            .collect()
    }

    /// Converts the weights to another scalar type.
    pub fn map_weights<V: Probability>(&self, f: impl Fn(&W) -> V) -> MarkovianAutomaton<V> {
        MarkovianAutomaton {
            alphabet: self.alphabet,
            names: self.names.clone(),
            initial: self.initial.iter().map(&f).collect(),
            transitions: self
                .transitions
                .iter()
                .map(|row| row.iter().map(|t| t.as_ref().map(|(q, w)| (*q, f(w)))).collect())
                .collect(),
        }
    }

    pub fn to_f64(&self) -> MarkovianAutomaton<f64> {
        self.map_weights(|w| w.to_f64())
    }

    /// Every transition entering a state carries the same letter.
    pub fn is_local(&self) -> bool {
        let mut incoming: Vec<Option<Letter>> = vec![None; self.state_count()];
        for t in self.transitions() {
            match incoming[t.to] {
                None => incoming[t.to] = Some(t.letter),
                Some(x) if x != t.letter => return false,
                _ => {}
            }
        }
        true
    }

    /// Whether this is the uniform automaton on reduced words: word
    /// probabilities `1 / (2r (2r-1)^(n-1))`, checked on the local form.
    pub fn is_uniform(&self) -> bool {
        let size = self.alphabet.size();
        let rank = self.alphabet.rank();
        let step = W::from_usize(2 * rank - 1).map(|d| W::one() / d);
        let first = W::from_usize(size).map(|d| W::one() / d);
        let (Some(step), Some(first)) = (step, first) else {
            return false;
        };
        // First letter law.
        for x in self.alphabet.letters() {
            let mut mass = W::zero();
            for (p, g) in self.initial.iter().enumerate() {
                if let Some((_, prob)) = self.transition(p, x) {
                    mass = mass + g.clone() * prob.clone();
                }
            }
            if !mass.approx_eq(&first) {
                return false;
            }
        }
        // Every reachable state, entered by x, allows all letters but x^-1
        // with equal weight. States not entered by any letter only matter
        // through the first letter law.
        for t in self.transitions() {
            let q = t.to;
            for y in self.alphabet.letters() {
                if y == t.letter.inverse() {
                    continue;
                }
                match self.transition(q, y) {
                    Some((_, prob)) if prob.approx_eq(&step) => {}
                    _ => return false,
                }
            }
        }
        true
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_rational::BigRational;

    fn letter(c: char) -> Letter {
        Alphabet::new(2).unwrap().parse_letter(c, 0).unwrap()
    }

    #[test]
    fn validation_reports_each_violation() {
        let ab = Alphabet::new(2).unwrap();
        let names = vec!["p".to_string(), "q".to_string()];
        let transitions = vec![
            TransitionSpec { from: 0, letter: letter('a'), to: 1, prob: 0.5 },
            TransitionSpec { from: 0, letter: letter('b'), to: 0, prob: 0.25 },
            TransitionSpec { from: 1, letter: letter('A'), to: 0, prob: 1.0 },
        ];
        let a = MarkovianAutomaton::new_unchecked(ab, names, vec![0.5, 0.6], transitions).unwrap();
        let report = a.validate();
        let kinds: Vec<ViolationKind> = report.violations.iter().map(|v| v.kind).collect();
        assert!(kinds.contains(&ViolationKind::InitialSum));
        assert!(kinds.contains(&ViolationKind::StateSum));
        assert!(kinds.contains(&ViolationKind::ReducedSupport));
        assert!(report.to_string().contains("state p"));
    }

    #[test]
    fn duplicate_transition_is_structural() {
        let ab = Alphabet::new(1).unwrap();
        let transitions = vec![
            TransitionSpec { from: 0, letter: letter('a'), to: 0, prob: 0.5 },
            TransitionSpec { from: 0, letter: letter('a'), to: 0, prob: 0.5 },
        ];
        let err = MarkovianAutomaton::new(ab, vec!["s".into()], vec![1.0], transitions).unwrap_err();
        assert!(matches!(err, Error::InvalidAutomaton(_)));
    }

    #[test]
    fn exact_weights_have_zero_tolerance() {
        let ab = Alphabet::new(1).unwrap();
        let third = BigRational::new(1.into(), 3.into());
        let almost = BigRational::new(333_333.into(), 1_000_000.into());
        let ok = MarkovianAutomaton::new(
            ab,
            vec!["s".into(), "t".into(), "u".into()],
            vec![third.clone(), third.clone(), third.clone()],
            vec![
                TransitionSpec { from: 0, letter: letter('a'), to: 0, prob: BigRational::from_integer(1.into()) },
                TransitionSpec { from: 1, letter: letter('a'), to: 0, prob: BigRational::from_integer(1.into()) },
                TransitionSpec { from: 2, letter: letter('A'), to: 2, prob: BigRational::from_integer(1.into()) },
            ],
        );
        assert!(ok.is_ok());
        let bad = MarkovianAutomaton::new(
            ab,
            vec!["s".into(), "t".into(), "u".into()],
            vec![third.clone(), third, almost],
            vec![],
        );
        assert!(bad.is_err());
    }
}
