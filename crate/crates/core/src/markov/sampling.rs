//! Sampling words from a Markovian automaton, and density bookkeeping.

use rand::Rng;

use super::MarkovianAutomaton;
use crate::cancellation::Lambda;
use crate::error::{Error, Result};
use crate::scalar::Probability;
use crate::words::{Alphabet, Letter, ReducedWord};

/// Precomputed inverse-CDF tables.
#[derive(Clone, Debug, PartialEq)]
pub struct Sampler {
    alphabet: Alphabet,
    initial: Vec<(f64, u32)>,
    rows: Vec<Vec<(f64, Letter, u32)>>,
}

fn pick<T: Copy>(table: &[(f64, T)], u: f64) -> T {
    let i = table.partition_point(|&(c, _)| c <= u);
    table[i.min(table.len() - 1)].1
}

impl Sampler {
    pub fn new<W: Probability>(a: &MarkovianAutomaton<W>) -> Self {
        let mut acc = 0.0;
        let mut initial = Vec::new();
        for (p, g) in a.initial().iter().enumerate() {
            let g = g.to_f64();
            if g > 0.0 {
                acc += g;
                initial.push((acc, p as u32));
            }
        }
        normalize(&mut initial);
        let rows = (0..a.state_count())
            .map(|p| {
                let mut acc = 0.0;
                let mut row: Vec<(f64, (Letter, u32))> = Vec::new();
                for x in a.alphabet().letters() {
                    if let Some((q, prob)) = a.transition(p, x) {
                        acc += prob.to_f64();
                        row.push((acc, (x, *q as u32)));
                    }
                }
                normalize(&mut row);
                row.into_iter().map(|(c, (x, q))| (c, x, q)).collect()
            })
            .collect();
        Sampler {
            alphabet: a.alphabet(),
            initial,
            rows,
        }
    }

    pub fn alphabet(&self) -> Alphabet {
        self.alphabet
    }

    /// A word of length `n` drawn from the automaton's distribution.
    pub fn sample_reduced<R: Rng + ?Sized>(&self, n: usize, rng: &mut R) -> ReducedWord {
        let mut state = pick(&self.initial, rng.random::<f64>()) as usize;
        let mut letters = Vec::with_capacity(n);
        for _ in 0..n {
            let row = &self.rows[state];
            let u = rng.random::<f64>();
            let i = row.partition_point(|&(c, _, _)| c <= u).min(row.len() - 1);
            let (_, x, q) = row[i];
            letters.push(x);
            state = q as usize;
        }
        ReducedWord::from_reduced_unchecked(self.alphabet, letters)
    }

    /// Rejection sampling conditioned on being cyclically reduced.
    pub fn sample_cyclically_reduced<R: Rng + ?Sized>(
        &self,
        n: usize,
        rng: &mut R,
        max_attempts: usize,
    ) -> Result<ReducedWord> {
        for _ in 0..max_attempts {
            let w = self.sample_reduced(n, rng);
            if w.is_cyclically_reduced() {
                return Ok(w);
            }
        }
        Err(Error::AttemptsExhausted(max_attempts))
    }
}

/// Rescales cumulative weights so the last entry is exactly 1.
fn normalize<T>(table: &mut [(f64, T)]) {
    if let Some(total) = table.last().map(|e| e.0) {
        for e in table.iter_mut() {
            e.0 /= total;
        }
        table.last_mut().unwrap().0 = 1.0;
    }
}

/// `ceil(α^(-d n))`, the number of words at `α`-density `d`.
///
/// Values within relative `1e-9` of an integer are taken to be that
/// integer, so that exact powers such as `3^8` do not round up.
pub fn density_to_size(alpha: f64, d: f64, n: usize, cap: u64) -> Result<u64> {
    if !(alpha > 0.0 && alpha < 1.0) {
        return Err(Error::Config(format!("α = {alpha} must lie in (0, 1)")));
    }
    if !(0.0..1.0).contains(&d) || d.is_nan() {
        return Err(Error::Config(format!("density {d} must lie in [0, 1)")));
    }
    let x = (-(d * n as f64) * alpha.ln()).exp();
    let rounded = x.round();
    let size = if (x - rounded).abs() <= 1e-9 * x {
        rounded
    } else {
        x.ceil()
    };
    let size = size.max(1.0);
    if size > cap as f64 {
        return Err(Error::CapExceeded {
            what: "tuple size",
            requested: if size.is_finite() { size as u128 } else { u128::MAX },
            cap: cap as u128,
        });
    }
    Ok(size as u64)
}

#[derive(Clone, Debug, PartialEq)]
pub struct ThresholdPrediction {
    pub property: String,
    pub threshold: f64,
    /// `"alpha2"` for `α_[2]`-density, `"alpha"` for the uniform `α`.
    pub units: &'static str,
}

#[derive(Clone, Debug, PartialEq)]
pub struct ThresholdPredictions {
    pub entries: Vec<ThresholdPrediction>,
}

impl ThresholdPredictions {
    pub fn get(&self, property: &str, units: &str) -> Option<f64> {
        self.entries
            .iter()
            .find(|e| e.property == property && e.units == units)
            .map(|e| e.threshold)
    }
}

/// Critical densities: general bounds in `α_[2]`-density, plus the sharp
/// uniform thresholds when `a` is the uniform automaton.
pub fn threshold_predictions<W: Probability>(
    a: &MarkovianAutomaton<W>,
    lambdas: &[Lambda],
) -> ThresholdPredictions {
    let entry = |property: String, threshold: f64, units| ThresholdPrediction {
        property,
        threshold,
        units,
    };
    let mut entries = vec![
        entry("ctp".into(), 1.0 / 8.0, "alpha2"),
        entry("malnormal".into(), 1.0 / 32.0, "alpha2"),
    ];
    for l in lambdas {
        entries.push(entry(format!("cprime({l})"), l.to_f64() / 2.0, "alpha2"));
    }
    entries.push(entry("degenerate".into(), 0.5, "alpha2"));
    if a.is_uniform() {
        entries.push(entry("ctp".into(), 0.25, "alpha"));
        entries.push(entry("malnormal".into(), 1.0 / 16.0, "alpha"));
    }
    ThresholdPredictions { entries }
}
