//! Elementary cycles and prefix-heavy parameters.
//!
//! A distribution is prefix-heavy with parameters `(C, α)` when every word
//! `u` has `P(prefix = u) <= C α^|u|`.

use super::local::localize;
use super::spectral::{entrywise_power_matrix, power_iteration, stochastic_matrix};
use super::{MarkovianAutomaton, SpectralOptions};
use crate::error::{Error, Result};
use crate::scalar::{Probability, SpectralScalar};

/// Default cap on the number of elementary cycles enumerated.
pub const DEFAULT_CYCLE_CAP: usize = 100_000;

/// Bound from the cycle structure: `δ` is the largest probability of an
/// elementary cycle, `ℓ` the largest length, `α = δ^(1/ℓ)` and
/// `C = δ^(-|Q|/ℓ)` over the `|Q|` local states.
#[derive(Clone, Debug, PartialEq)]
pub struct CycleBound<T> {
    pub cycles: usize,
    pub delta: T,
    pub max_length: usize,
    pub alpha: T,
    pub c: T,
}

/// Bound from the entrywise square: `α = sqrt(α_[2])`, and `C` from the
/// spread of its right Perron vector when that vector is positive.
#[derive(Clone, Debug, PartialEq)]
pub struct SpectralBound<T> {
    pub alpha: T,
    pub c: Option<T>,
}

#[derive(Debug)]
pub struct PrefixHeavyParams<T> {
    pub cycle: Result<CycleBound<T>>,
    pub spectral: SpectralBound<T>,
}

/// Some cycle uses only transitions of probability 1.
pub fn has_probability_one_cycle<W: Probability>(a: &MarkovianAutomaton<W>) -> bool {
    // Each state has at most one certain transition, so the certain
    // transitions form a partial function; look for a cycle in it.
    let n = a.state_count();
    let one = W::one();
    let mut next = vec![None; n];
    for t in a.transitions() {
        if t.prob.approx_eq(&one) {
            next[t.from] = Some(t.to);
        }
    }
    // 0 = unvisited, 1 = on the current walk, 2 = done.
    let mut mark = vec![0u8; n];
    for start in 0..n {
        let mut walk = Vec::new();
        let mut v = Some(start);
        while let Some(u) = v {
            match mark[u] {
                1 => return true,
                2 => break,
                _ => {}
            }
            mark[u] = 1;
            walk.push(u);
            v = next[u];
        }
        for u in walk {
            mark[u] = 2;
        }
    }
    false
}

/// Elementary cycles of the transition graph (Johnson's algorithm), each as
/// its sequence of states starting from its least state.
pub fn elementary_cycles<W: Probability>(
    a: &MarkovianAutomaton<W>,
    cap: usize,
) -> Result<Vec<Vec<usize>>> {
    let n = a.state_count();
    let mut adj = vec![Vec::new(); n];
    for t in a.transitions() {
        adj[t.from].push(t.to);
    }
    for row in &mut adj {
        row.sort_unstable();
        row.dedup();
    }
    let mut search = Johnson {
        adj: &adj,
        blocked: vec![false; n],
        waiting: vec![Vec::new(); n],
        stack: Vec::new(),
        out: Vec::new(),
        cap,
    };
    for s in 0..n {
        search.blocked.iter_mut().for_each(|b| *b = false);
        search.waiting.iter_mut().for_each(Vec::clear);
        search.circuit(s, s)?;
    }
    Ok(search.out)
}

struct Johnson<'a> {
    adj: &'a [Vec<usize>],
    blocked: Vec<bool>,
    waiting: Vec<Vec<usize>>,
    stack: Vec<usize>,
    out: Vec<Vec<usize>>,
    cap: usize,
}

impl Johnson<'_> {
    fn circuit(&mut self, v: usize, s: usize) -> Result<bool> {
        let mut found = false;
        self.stack.push(v);
        self.blocked[v] = true;
        for &w in &self.adj[v] {
            if w < s {
                continue;
            }
            if w == s {
                if self.out.len() == self.cap {
                    return Err(Error::CapExceeded {
                        what: "elementary cycles",
                        requested: self.cap as u128 + 1,
                        cap: self.cap as u128,
                    });
                }
                self.out.push(self.stack.clone());
                found = true;
            } else if !self.blocked[w] && self.circuit(w, s)? {
                found = true;
            }
        }
        if found {
            self.unblock(v);
        } else {
            for &w in &self.adj[v] {
                if w >= s && !self.waiting[w].contains(&v) {
                    self.waiting[w].push(v);
                }
            }
        }
        self.stack.pop();
        Ok(found)
    }

    fn unblock(&mut self, u: usize) {
        self.blocked[u] = false;
        while let Some(w) = self.waiting[u].pop() {
            if self.blocked[w] {
                self.unblock(w);
            }
        }
    }
}

/// Both prefix-heavy bounds. Fails outright when some cycle has
/// probability 1, since no exponential bound then holds.
pub fn prefix_heavy_params<T: SpectralScalar>(
    a: &MarkovianAutomaton<T>,
    options: SpectralOptions<T>,
    cycle_cap: usize,
) -> Result<PrefixHeavyParams<T>> {
    if has_probability_one_cycle(a) {
        return Err(Error::ProbabilityOneCycle);
    }
    let local = localize(a)?;
    let la = &local.automaton;
    let cycle = elementary_cycles(la, cycle_cap).and_then(|cycles| {
        let mut delta = T::zero();
        let mut max_length = 0;
        for c in &cycles {
            let mut p = T::one();
            for (i, &u) in c.iter().enumerate() {
                let v = c[(i + 1) % c.len()];
                let prob = la
                    .alphabet()
                    .letters()
                    .filter_map(|x| la.transition(u, x))
                    .find(|(q, _)| *q == v)
                    .map(|(_, w)| *w)
                    .expect("cycle edge exists");
                p = p * prob;
            }
            delta = delta.max(p);
            max_length = max_length.max(c.len());
        }
        if cycles.is_empty() {
            return Err(Error::Config("automaton has no cycles".into()));
        }
        let l = T::from_usize(max_length).unwrap();
        let q = T::from_usize(la.state_count()).unwrap();
        Ok(CycleBound {
            cycles: cycles.len(),
            delta,
            max_length,
            alpha: delta.powf(T::one() / l),
            c: delta.powf(-q / l),
        })
    });
    let m2 = entrywise_power_matrix(&stochastic_matrix(&local), 2);
    let p2 = power_iteration(&m2, options)?;
    let positive = p2.vector.iter().all(|&v| v > T::zero());
    let c = positive.then(|| {
        let max = p2.vector.iter().fold(T::zero(), |m, &v| m.max(v));
        let min = p2.vector.iter().fold(T::infinity(), |m, &v| m.min(v));
        (max / min).sqrt()
    });
    Ok(PrefixHeavyParams {
        cycle,
        spectral: SpectralBound {
            alpha: p2.radius.sqrt(),
            c,
        },
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::markov::{psl2_automaton, uniform_automaton, Psl2Variant, Psl2Weights, TransitionSpec};
    use crate::words::{enumerate_reduced, Alphabet, Letter};
    use std::collections::HashSet;

    #[test]
    fn uniform_cycle_bound() {
        let a = uniform_automaton::<f64>(2).unwrap();
        let p = prefix_heavy_params(&a, SpectralOptions::default(), DEFAULT_CYCLE_CAP).unwrap();
        let c = p.cycle.unwrap();
        assert!((c.delta - 1.0 / 3.0).abs() < 1e-15);
        assert_eq!(c.max_length, 4);
        assert!((c.alpha - 3f64.powf(-0.25)).abs() < 1e-12);
        assert!((c.c - 3.0).abs() < 1e-12);
        assert!((p.spectral.alpha - (1.0f64 / 3.0).sqrt()).abs() < 1e-10);
        assert!((p.spectral.c.unwrap() - 1.0).abs() < 1e-9);
    }

    #[test]
    fn probability_one_cycle_is_rejected() {
        let ab = Alphabet::new(2).unwrap();
        let a = Letter::generator(0);
        let b = Letter::generator(1);
        let m = MarkovianAutomaton::new(
            ab,
            vec!["p".into(), "q".into()],
            vec![1.0, 0.0],
            vec![
                TransitionSpec { from: 0, letter: a, to: 1, prob: 1.0 },
                TransitionSpec { from: 1, letter: b, to: 0, prob: 1.0 },
            ],
        )
        .unwrap();
        assert!(has_probability_one_cycle(&m));
        assert!(matches!(
            prefix_heavy_params(&m, SpectralOptions::default(), DEFAULT_CYCLE_CAP),
            Err(Error::ProbabilityOneCycle)
        ));
        let g = psl2_automaton::<f64>(Psl2Variant::Geodesic, Psl2Weights::default()).unwrap();
        assert!(!has_probability_one_cycle(&g));
    }

    fn brute_cycles(a: &MarkovianAutomaton<f64>) -> HashSet<Vec<usize>> {
        // Canonical rotations of all simple cycles, by DFS from each start.
        let n = a.state_count();
        let mut out = HashSet::new();
        fn dfs(a: &MarkovianAutomaton<f64>, path: &mut Vec<usize>, out: &mut HashSet<Vec<usize>>) {
            let v = *path.last().unwrap();
            let mut targets: Vec<usize> = a.transitions().iter().filter(|t| t.from == v).map(|t| t.to).collect();
            targets.sort_unstable();
            targets.dedup();
            for w in targets {
                if w == path[0] {
                    out.insert(path.clone());
                } else if w > path[0] && !path.contains(&w) {
                    path.push(w);
                    dfs(a, path, out);
                    path.pop();
                }
            }
        }
        for s in 0..n {
            dfs(a, &mut vec![s], &mut out);
        }
        out
    }

    #[test]
    fn johnson_matches_brute_force() {
        for a in [
            uniform_automaton::<f64>(2).unwrap(),
            uniform_automaton::<f64>(3).unwrap(),
            psl2_automaton(Psl2Variant::Quasigeodesic, Psl2Weights::default()).unwrap(),
        ] {
            let fast: HashSet<Vec<usize>> = elementary_cycles(&a, DEFAULT_CYCLE_CAP).unwrap().into_iter().collect();
            assert_eq!(fast, brute_cycles(&a));
        }
        assert!(matches!(
            elementary_cycles(&uniform_automaton::<f64>(3).unwrap(), 5),
            Err(Error::CapExceeded { .. })
        ));
    }

    #[test]
    fn both_bounds_dominate_prefix_probabilities() {
        for a in [
            uniform_automaton::<f64>(2).unwrap(),
            psl2_automaton(Psl2Variant::Geodesic, Psl2Weights::default()).unwrap(),
            psl2_automaton(Psl2Variant::Quasigeodesic, Psl2Weights { initial: [0.5, 0.25, 0.25], branch: 0.3 }).unwrap(),
        ] {
            let p = prefix_heavy_params(&a, SpectralOptions::default(), DEFAULT_CYCLE_CAP).unwrap();
            let cycle = p.cycle.unwrap();
            for n in 1..=8 {
                for w in enumerate_reduced(a.alphabet(), n, 100_000).unwrap() {
                    let prob = a.word_probability(w.letters());
                    let bound = cycle.c * cycle.alpha.powi(n as i32);
                    assert!(prob <= bound * (1.0 + 1e-9), "{w}: {prob} > {bound}");
                    if let Some(c) = p.spectral.c {
                        let sb = c * p.spectral.alpha.powi(n as i32);
                        assert!(prob <= sb * (1.0 + 1e-9), "{w}: {prob} > {sb}");
                    }
                }
            }
        }
    }
}
