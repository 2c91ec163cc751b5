//! Spectral quantities of the local stochastic matrix.

use std::collections::VecDeque;

use serde_json::{json, Value};

use super::local::{localize, LocalAutomaton, LocalState};
use super::MarkovianAutomaton;
use crate::error::{Error, Result};
use crate::scalar::{Probability, SpectralScalar};

/// Square row-major matrix.
#[derive(Clone, Debug, PartialEq)]
pub struct DenseMatrix<T> {
    n: usize,
    data: Vec<T>,
}

impl<T: SpectralScalar> DenseMatrix<T> {
    pub fn zeros(n: usize) -> Self {
        DenseMatrix {
            n,
            data: vec![T::zero(); n * n],
        }
    }

    pub fn size(&self) -> usize {
        self.n
    }

    pub fn get(&self, i: usize, j: usize) -> T {
        self.data[i * self.n + j]
    }

    pub fn set(&mut self, i: usize, j: usize, value: T) {
        self.data[i * self.n + j] = value;
    }

    pub fn transpose(&self) -> Self {
        let mut t = DenseMatrix::zeros(self.n);
        for i in 0..self.n {
            for j in 0..self.n {
                t.set(j, i, self.get(i, j));
            }
        }
        t
    }

    pub fn mul_vec(&self, x: &[T]) -> Vec<T> {
        (0..self.n)
            .map(|i| {
                let row = &self.data[i * self.n..(i + 1) * self.n];
                row.iter().zip(x).fold(T::zero(), |acc, (&a, &b)| acc + a * b)
            })
            .collect()
    }

    pub fn map(&self, f: impl Fn(T) -> T) -> Self {
        DenseMatrix {
            n: self.n,
            data: self.data.iter().map(|&x| f(x)).collect(),
        }
    }
}

/// `M(x, y) = γ(x, y)` over the states of a local automaton.
pub fn stochastic_matrix<T: SpectralScalar>(local: &LocalAutomaton<T>) -> DenseMatrix<T> {
    let a = &local.automaton;
    let mut m = DenseMatrix::zeros(a.state_count());
    for t in a.transitions() {
        m.set(t.from, t.to, m.get(t.from, t.to) + t.prob);
    }
    m
}

/// Entrywise `k`-th power.
pub fn entrywise_power_matrix<T: SpectralScalar>(m: &DenseMatrix<T>, k: i32) -> DenseMatrix<T> {
    m.map(|x| x.powi(k))
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SpectralOptions<T> {
    /// Relative residual at which iteration stops.
    pub tolerance: T,
    pub max_iterations: usize,
}

impl<T: SpectralScalar> Default for SpectralOptions<T> {
    fn default() -> Self {
        SpectralOptions {
            tolerance: T::spectral_tolerance(),
            max_iterations: 1_000_000,
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct PowerIteration<T> {
    /// Spectral radius estimate.
    pub radius: T,
    /// Nonnegative eigenvector normalized to sum 1.
    pub vector: Vec<T>,
    pub iterations: usize,
    pub residual: T,
    /// Collatz-Wielandt bounds `min (Mx)_i / x_i <= ρ <= max (Mx)_i / x_i`,
    /// available when the vector is positive.
    pub bounds: Option<(T, T)>,
}

/// Perron root and right vector of a nonnegative matrix, iterating on
/// `(M + I) / 2` so that periodic matrices converge too.
pub fn power_iteration<T: SpectralScalar>(
    m: &DenseMatrix<T>,
    options: SpectralOptions<T>,
) -> Result<PowerIteration<T>> {
    let n = m.size();
    if n == 0 {
        return Ok(PowerIteration {
            radius: T::zero(),
            vector: Vec::new(),
            iterations: 0,
            residual: T::zero(),
            bounds: None,
        });
    }
    let half = T::from_f64(0.5).unwrap();
    let mut x = vec![T::one() / T::from_usize(n).unwrap(); n];
    let mut residual = T::infinity();
    for iteration in 1..=options.max_iterations {
        let mx = m.mul_vec(&x);
        let y: Vec<T> = mx.iter().zip(&x).map(|(&a, &b)| (a + b) * half).collect();
        let lambda = y.iter().fold(T::zero(), |acc, &v| acc + v);
        residual = y
            .iter()
            .zip(&x)
            .fold(T::zero(), |acc, (&a, &b)| acc + (a - lambda * b).abs())
            / lambda;
        x = y.into_iter().map(|v| v / lambda).collect();
        if residual <= options.tolerance {
            let radius = (lambda + lambda - T::one()).max(T::zero());
            let mx = m.mul_vec(&x);
            let bounds = x.iter().all(|&v| v > T::zero()).then(|| {
                let ratios = mx.iter().zip(&x).map(|(&a, &b)| a / b);
                ratios.fold((T::infinity(), T::neg_infinity()), |(lo, hi), r| {
                    (lo.min(r), hi.max(r))
                })
            });
            return Ok(PowerIteration {
                radius,
                vector: x,
                iterations: iteration,
                residual,
                bounds,
            });
        }
    }
    Err(Error::NonConvergence {
        iterations: options.max_iterations,
        residual: Probability::to_f64(&residual),
    })
}

#[derive(Clone, Debug, PartialEq)]
pub struct SpectralSummary<T> {
    pub local_states: Vec<LocalState>,
    pub local_names: Vec<String>,
    /// Spectral radius of the entrywise square of `M`.
    pub alpha2: T,
    /// Spectral radius of the entrywise cube of `M`.
    pub alpha3: T,
    /// Right Perron vector of the entrywise square.
    pub perron2: Vec<T>,
    /// Strong connectivity of the original automaton.
    pub irreducible: bool,
    /// Period of the original automaton when irreducible.
    pub period: Option<usize>,
    pub ergodic: bool,
    /// Stationary law on local states (ergodic case).
    pub stationary: Option<Vec<T>>,
    /// Law of the first letter of a word.
    pub first_letter: Vec<T>,
    /// Stationary law of the letter entering the current state.
    pub stationary_letter: Option<Vec<T>>,
    /// Limit probability that the last letter cancels the first.
    pub degeneracy: Option<T>,
    /// Limit proportion of cyclically reduced words.
    pub cyclic_density: Option<T>,
}

/// Spectral summary of an automaton (computed on its local form).
pub fn analyze<T: SpectralScalar>(
    a: &MarkovianAutomaton<T>,
    options: SpectralOptions<T>,
) -> Result<SpectralSummary<T>> {
    let local = localize(a)?;
    let m = stochastic_matrix(&local);
    let p2 = power_iteration(&entrywise_power_matrix(&m, 2), options)?;
    let p3 = power_iteration(&entrywise_power_matrix(&m, 3), options)?;
    let (irreducible, period) = connectivity(a);
    let ergodic = irreducible && period == Some(1);

    let alphabet = a.alphabet();
    let mut first_letter = vec![T::zero(); alphabet.size()];
    for (p, &g) in a.initial().iter().enumerate() {
        for x in alphabet.letters() {
            if let Some(&(_, prob)) = a.transition(p, x) {
                first_letter[x.index()] = first_letter[x.index()] + g * prob;
            }
        }
    }

    let (stationary, stationary_letter, degeneracy) = if ergodic {
        let left = power_iteration(&m.transpose(), options)?;
        let mut letters = vec![T::zero(); alphabet.size()];
        for (s, &w) in local.states.iter().zip(&left.vector) {
            if let Some(x) = s.incoming {
                letters[x.index()] = letters[x.index()] + w;
            }
        }
        let s = alphabet
            .letters()
            .fold(T::zero(), |acc, x| acc + first_letter[x.index()] * letters[x.inverse().index()]);
        (Some(left.vector), Some(letters), Some(s))
    } else {
        (None, None, None)
    };

    Ok(SpectralSummary {
        local_names: local.automaton.state_names().to_vec(),
        local_states: local.states,
        alpha2: p2.radius,
        alpha3: p3.radius,
        perron2: p2.vector,
        irreducible,
        period,
        ergodic,
        stationary,
        first_letter,
        stationary_letter,
        cyclic_density: degeneracy.map(|s| T::one() - s),
        degeneracy,
    })
}

/// Strong connectivity and, when strongly connected, the period.
pub(crate) fn connectivity<W: Probability>(
    a: &MarkovianAutomaton<W>,
) -> (bool, Option<usize>) {
    let n = a.state_count();
    let mut forward = vec![Vec::new(); n];
    let mut backward = vec![Vec::new(); n];
    for t in a.transitions() {
        forward[t.from].push(t.to);
        backward[t.to].push(t.from);
    }
    let reach = |adj: &[Vec<usize>]| -> Vec<Option<usize>> {
        let mut level = vec![None; n];
        level[0] = Some(0);
        let mut queue = VecDeque::from([0usize]);
        while let Some(v) = queue.pop_front() {
            let d = level[v].unwrap();
            for &w in &adj[v] {
                if level[w].is_none() {
                    level[w] = Some(d + 1);
                    queue.push_back(w);
                }
            }
        }
        level
    };
    let levels = reach(&forward);
    if levels.iter().any(Option::is_none) || reach(&backward).iter().any(Option::is_none) {
        return (false, None);
    }
    let mut g = 0usize;
    for (u, targets) in forward.iter().enumerate() {
        for &v in targets {
            let d = (levels[u].unwrap() + 1).abs_diff(levels[v].unwrap());
            g = num_integer::gcd(g, d);
        }
    }
    (true, Some(g))
}

impl<T: SpectralScalar> SpectralSummary<T> {
    pub fn to_json(&self) -> Value {
        let f = |x: &T| Probability::to_f64(x);
        let vec = |v: &[T]| v.iter().map(f).collect::<Vec<f64>>();
        json!({
            "local_states": self.local_names,
            "alpha2": f(&self.alpha2),
            "alpha3": f(&self.alpha3),
            "perron2": vec(&self.perron2),
            "irreducible": self.irreducible,
            "period": self.period,
            "ergodic": self.ergodic,
            "stationary": self.stationary.as_deref().map(vec),
            "first_letter": vec(&self.first_letter),
            "stationary_letter": self.stationary_letter.as_deref().map(vec),
            "degeneracy": self.degeneracy.as_ref().map(f),
            "cyclic_density": self.cyclic_density.as_ref().map(f),
        })
    }
}
