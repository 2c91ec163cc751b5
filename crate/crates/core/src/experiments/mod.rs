//! Monte Carlo sweeps: sample tuples over a grid of `(n, size, property)`
//! cells and estimate success frequencies.
//!
//! Every trial gets its own ChaCha8 stream seeded from
//! `(master_seed, cell, trial)`, so results do not depend on the number of
//! workers or on scheduling.

mod csv;
mod stats;

use std::path::{Path, PathBuf};
use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use serde_json::Value;

pub use csv::{format_float, CSV_HEADER};
pub use stats::{find_crossing, wilson_interval, Crossing};

use crate::cancellation::{satisfies_cprime, Lambda};
use crate::error::{Error, Result};
use crate::markov::{
    analyze, automaton_from_json, automaton_from_json_str, density_to_size, psl2_automaton,
    uniform_automaton, MarkovianAutomaton, Psl2Variant, Psl2Weights, Sampler, SpectralOptions,
};
use crate::presentations::{collision_statistic, degenerate_class_check, DegenerateClass, DegeneratePrediction};
use crate::stallings::{is_malnormal_with_cap, stallings_graph};
use crate::tuples::{MalnormalityCertificate, WordTuple};
use crate::words::{Alphabet, ReducedWord};

pub const DEFAULT_SIZE_CAP: u64 = 10_000_000;
pub const DEFAULT_MAX_ATTEMPTS: usize = 10_000;
pub const DEFAULT_VERTEX_PAIR_BUDGET: u64 = 100_000_000;

/// An automaton given by preset name, file path or inline JSON.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum AutomatonRef {
    Name(String),
    Inline(Value),
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SizeMode {
    /// `ceil(α^(-d n))` words.
    Density(f64),
    Fixed(u64),
    /// `ceil(n^c)` words.
    Polynomial(f64),
}

impl SizeMode {
    pub fn name(&self) -> &'static str {
        match self {
            SizeMode::Density(_) => "density",
            SizeMode::Fixed(_) => "fixed",
            SizeMode::Polynomial(_) => "polynomial",
        }
    }

    pub fn param(&self) -> f64 {
        match *self {
            SizeMode::Density(d) => d,
            SizeMode::Fixed(k) => k as f64,
            SizeMode::Polynomial(c) => c,
        }
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum LengthMode {
    #[default]
    Exact,
    /// Uniform over reduced words of length `1..=n` (uniform preset only).
    AtMost,
}

impl LengthMode {
    pub fn name(self) -> &'static str {
        match self {
            LengthMode::Exact => "exact",
            LengthMode::AtMost => "at_most",
        }
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum WordMode {
    #[default]
    Reduced,
    CyclicallyReduced,
}

impl WordMode {
    pub fn name(self) -> &'static str {
        match self {
            WordMode::Reduced => "reduced",
            WordMode::CyclicallyReduced => "cyclically_reduced",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum LcpBound {
    Constant(usize),
    /// `floor(c ln n)`.
    Log(f64),
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PrefixRule {
    Constant(usize),
    /// `floor(f n)`.
    Fraction(f64),
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ClassTarget {
    /// Whatever the automaton predicts at this length.
    #[default]
    Predicted,
    Trivial,
    Z2,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum PropertySpec {
    Ctp,
    LcpBelow {
        bound: LcpBound,
    },
    Cprime {
        lambda: String,
    },
    MalnormalCert,
    /// Certificate first, then the fiber product when it fits the budget.
    MalnormalExact,
    Collision {
        prefix: PrefixRule,
    },
    Abelianization {
        #[serde(default)]
        class: ClassTarget,
    },
}

impl PropertySpec {
    pub fn name(&self) -> &'static str {
        match self {
            PropertySpec::Ctp => "ctp",
            PropertySpec::LcpBelow { .. } => "lcp_below",
            PropertySpec::Cprime { .. } => "cprime",
            PropertySpec::MalnormalCert => "malnormal_cert",
            PropertySpec::MalnormalExact => "malnormal_exact",
            PropertySpec::Collision { .. } => "collision",
            PropertySpec::Abelianization { .. } => "abelianization",
        }
    }

    pub fn param(&self) -> String {
        match self {
            PropertySpec::Ctp | PropertySpec::MalnormalCert | PropertySpec::MalnormalExact => String::new(),
            PropertySpec::LcpBelow { bound: LcpBound::Constant(b) } => b.to_string(),
            PropertySpec::LcpBelow { bound: LcpBound::Log(c) } => format!("log:{}", format_float(*c)),
            PropertySpec::Cprime { lambda } => lambda.clone(),
            PropertySpec::Collision { prefix: PrefixRule::Constant(l) } => l.to_string(),
            PropertySpec::Collision { prefix: PrefixRule::Fraction(f) } => {
                format!("fraction:{}", format_float(*f))
            }
            PropertySpec::Abelianization { class } => match class {
                ClassTarget::Predicted => "predicted".into(),
                ClassTarget::Trivial => "trivial".into(),
                ClassTarget::Z2 => "z2".into(),
            },
        }
    }
}

fn default_workers() -> usize {
    1
}

fn default_size_cap() -> u64 {
    DEFAULT_SIZE_CAP
}

fn default_max_attempts() -> usize {
    DEFAULT_MAX_ATTEMPTS
}

fn default_vertex_pair_budget() -> u64 {
    DEFAULT_VERTEX_PAIR_BUDGET
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SweepConfig {
    pub automaton: AutomatonRef,
    pub n_values: Vec<usize>,
    pub size_modes: Vec<SizeMode>,
    #[serde(default)]
    pub length_mode: LengthMode,
    #[serde(default)]
    pub word_mode: WordMode,
    pub properties: Vec<PropertySpec>,
    pub trials: u64,
    pub master_seed: u64,
    #[serde(default = "default_workers")]
    pub workers: usize,
    #[serde(default)]
    pub trial_timeout_ms: Option<u64>,
    #[serde(default = "default_size_cap")]
    pub size_cap: u64,
    #[serde(default = "default_max_attempts")]
    pub max_attempts: usize,
    #[serde(default = "default_vertex_pair_budget")]
    pub vertex_pair_budget: u64,
}

impl SweepConfig {
    /// A config with default knobs.
    pub fn new(
        automaton: AutomatonRef,
        n_values: Vec<usize>,
        size_modes: Vec<SizeMode>,
        properties: Vec<PropertySpec>,
        trials: u64,
        master_seed: u64,
    ) -> Self {
        SweepConfig {
            automaton,
            n_values,
            size_modes,
            length_mode: LengthMode::Exact,
            word_mode: WordMode::Reduced,
            properties,
            trials,
            master_seed,
            workers: 1,
            trial_timeout_ms: None,
            size_cap: DEFAULT_SIZE_CAP,
            max_attempts: DEFAULT_MAX_ATTEMPTS,
            vertex_pair_budget: DEFAULT_VERTEX_PAIR_BUDGET,
        }
    }

    pub fn from_json_str(text: &str) -> Result<Self> {
        let config: SweepConfig =
            serde_json::from_str(text).map_err(|e| Error::parse("$", e.to_string()))?;
        config.check()?;
        Ok(config)
    }

    /// Structural checks; per-cell problems are reported in the cells.
    pub fn check(&self) -> Result<()> {
        if self.n_values.is_empty() || self.n_values.contains(&0) {
            return Err(Error::Config("n_values must be nonempty and positive".into()));
        }
        if self.size_modes.is_empty() || self.properties.is_empty() {
            return Err(Error::Config("size_modes and properties must be nonempty".into()));
        }
        if self.trials == 0 {
            return Err(Error::Config("trials must be positive".into()));
        }
        if self.workers == 0 {
            return Err(Error::Config("workers must be positive".into()));
        }
        for m in &self.size_modes {
            match *m {
                SizeMode::Density(d) if !(0.0..1.0).contains(&d) => {
                    return Err(Error::Config(format!("density {d} must lie in [0, 1)")));
                }
                SizeMode::Fixed(0) => return Err(Error::Config("fixed size must be positive".into())),
                SizeMode::Polynomial(c) if !(c.is_finite() && c >= 0.0) => {
                    return Err(Error::Config(format!("polynomial exponent {c} must be nonnegative")));
                }
                _ => {}
            }
        }
        for p in &self.properties {
            match p {
                PropertySpec::Cprime { lambda } => {
                    lambda.parse::<Lambda>()?;
                }
                PropertySpec::LcpBelow { bound: LcpBound::Log(c) } if !(c.is_finite() && *c >= 0.0) => {
                    return Err(Error::Config(format!("log coefficient {c} must be nonnegative")));
                }
                PropertySpec::Collision { prefix: PrefixRule::Fraction(f) } if !(0.0..=1.0).contains(f) => {
                    return Err(Error::Config(format!("prefix fraction {f} must lie in [0, 1]")));
                }
                _ => {}
            }
        }
        Ok(())
    }
}

/// A resolved automaton with what the sweep needs from it.
#[derive(Clone, Debug)]
pub struct ResolvedAutomaton {
    pub id: String,
    pub automaton: MarkovianAutomaton<f64>,
    /// `α` for density sizing: exact `1/(2r-1)` for the uniform preset,
    /// else the spectral `α2`.
    pub alpha: std::result::Result<f64, String>,
    pub uniform: bool,
}

/// Preset names: `uniform:<r>`, `psl2:geodesic`, `psl2:quasigeodesic`.
pub fn preset<W: crate::scalar::Probability>(name: &str) -> Option<Result<MarkovianAutomaton<W>>> {
    if let Some(r) = name.strip_prefix("uniform:") {
        return Some(match r.parse::<usize>() {
            Ok(r) => uniform_automaton(r),
            Err(_) => Err(Error::Config(format!("bad rank in preset {name:?}"))),
        });
    }
    match name {
        "psl2:geodesic" => Some(psl2_automaton(Psl2Variant::Geodesic, Psl2Weights::default())),
        "psl2:quasigeodesic" => Some(psl2_automaton(Psl2Variant::Quasigeodesic, Psl2Weights::default())),
        _ => None,
    }
}

/// Loads a preset if `name` is one, otherwise reads a JSON file relative
/// to `base`.
pub fn load_automaton<W: crate::scalar::Probability>(
    name: &str,
    base: Option<&Path>,
) -> Result<MarkovianAutomaton<W>> {
    if let Some(a) = preset(name) {
        return a;
    }
    let path = match base {
        Some(b) if Path::new(name).is_relative() => b.join(name),
        _ => PathBuf::from(name),
    };
    let text = std::fs::read_to_string(&path)?;
    automaton_from_json_str(&text).map_err(|e| match e {
        Error::Parse { path: p, message } => Error::Parse {
            path: format!("{}: {p}", path.display()),
            message,
        },
        other => other,
    })
}

impl AutomatonRef {
    pub fn resolve(&self, base: Option<&Path>) -> Result<ResolvedAutomaton> {
        let (id, automaton) = match self {
            AutomatonRef::Name(name) => (name.clone(), load_automaton::<f64>(name, base)?),
            AutomatonRef::Inline(v) => ("inline".to_string(), automaton_from_json(v)?),
        };
        let uniform = automaton.is_uniform();
        let alpha = if uniform {
            let r = automaton.alphabet().rank();
            Ok(1.0 / (2 * r - 1) as f64)
        } else {
            analyze(&automaton, SpectralOptions::default())
                .map(|s| s.alpha2)
                .map_err(|e| e.to_string())
        };
        Ok(ResolvedAutomaton {
            id,
            automaton,
            alpha,
            uniform,
        })
    }
}

/// Length law of uniform reduced words of length at most `n`: length `l`
/// has weight `|R_l| = 2r (2r-1)^(l-1)`.
#[derive(Clone, Debug)]
pub struct AtMostSampler {
    cumulative: Vec<f64>,
    words: Sampler,
}

impl AtMostSampler {
    pub fn new(uniform: &MarkovianAutomaton<f64>, n: usize) -> Result<Self> {
        if !uniform.is_uniform() {
            return Err(Error::Config("length mode at_most needs the uniform preset".into()));
        }
        if n == 0 {
            return Err(Error::Config("maximal length must be positive".into()));
        }
        let base = (2 * uniform.alphabet().rank() - 1) as f64;
        // Weights relative to the longest length, to stay in range.
        let mut acc = 0.0;
        let mut cumulative = Vec::with_capacity(n);
        for l in 1..=n {
            acc += base.powi(l as i32 - n as i32);
            cumulative.push(acc);
        }
        for c in cumulative.iter_mut() {
            *c /= acc;
        }
        *cumulative.last_mut().unwrap() = 1.0;
        Ok(AtMostSampler {
            cumulative,
            words: Sampler::new(uniform),
        })
    }

    pub fn sample_length<R: Rng + ?Sized>(&self, rng: &mut R) -> usize {
        let u = rng.random::<f64>();
        self.cumulative.partition_point(|&c| c <= u).min(self.cumulative.len() - 1) + 1
    }

    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> ReducedWord {
        let l = self.sample_length(rng);
        self.words.sample_reduced(l, rng)
    }
}

/// `splitmix64` finalizer.
fn mix(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

/// Seed of the stream for one trial of one cell.
pub fn substream_seed(master: u64, cell: u64, trial: u64) -> u64 {
    mix(mix(mix(master) ^ cell) ^ trial)
}

#[derive(Clone, Debug, PartialEq)]
pub struct ReportRow {
    pub automaton: String,
    pub n: usize,
    pub size_mode: &'static str,
    pub size_param: f64,
    pub length_mode: &'static str,
    pub word_mode: &'static str,
    pub property: &'static str,
    pub property_param: String,
    /// Completed trials; 0 for a cell that failed.
    pub trials: u64,
    pub successes: u64,
    pub frequency: f64,
    pub ci_low: f64,
    pub ci_high: f64,
    pub master_seed: u64,
    pub wall_ms: u128,
    /// Number of words per tuple, when it could be computed.
    pub tuple_size: Option<u64>,
    pub error: Option<String>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct SweepReport {
    pub rows: Vec<ReportRow>,
}

impl SweepReport {
    pub fn to_csv(&self) -> String {
        let mut out = String::new();
        out.push_str(CSV_HEADER);
        out.push('\n');
        for r in &self.rows {
            csv::write_row(&mut out, r);
        }
        out
    }

    pub fn errors(&self) -> impl Iterator<Item = &ReportRow> {
        self.rows.iter().filter(|r| r.error.is_some())
    }
}

struct Cell<'a> {
    index: u64,
    n: usize,
    size: SizeMode,
    property: &'a PropertySpec,
}

/// What one trial needs, shared across a cell.
struct Context<'a> {
    config: &'a SweepConfig,
    alphabet: Alphabet,
    sampler: Sampler,
    at_most: Option<AtMostSampler>,
    prediction: DegeneratePrediction,
    alpha: std::result::Result<f64, String>,
}

impl Context<'_> {
    fn sample_word(&self, n: usize, rng: &mut ChaCha8Rng) -> Result<ReducedWord> {
        let cyclic = self.config.word_mode == WordMode::CyclicallyReduced;
        match &self.at_most {
            None if cyclic => self.sampler.sample_cyclically_reduced(n, rng, self.config.max_attempts),
            None => Ok(self.sampler.sample_reduced(n, rng)),
            Some(s) if cyclic => {
                // Redraw length and word together on rejection.
                for _ in 0..self.config.max_attempts {
                    let w = s.sample(rng);
                    if w.is_cyclically_reduced() {
                        return Ok(w);
                    }
                }
                Err(Error::AttemptsExhausted(self.config.max_attempts))
            }
            Some(s) => Ok(s.sample(rng)),
        }
    }

    fn sample_tuple(&self, n: usize, size: u64, rng: &mut ChaCha8Rng) -> Result<WordTuple> {
        let words = (0..size)
            .map(|_| self.sample_word(n, rng))
            .collect::<Result<Vec<_>>>()?;
        WordTuple::new(self.alphabet, words)
    }
}

fn tuple_size(size: SizeMode, n: usize, alpha: &std::result::Result<f64, String>, cap: u64) -> Result<u64> {
    let k = match size {
        SizeMode::Density(d) => {
            let alpha = alpha.as_ref().map_err(|e| Error::Config(format!("no α for density sizing: {e}")))?;
            return density_to_size(*alpha, d, n, cap);
        }
        SizeMode::Fixed(k) => k as f64,
        SizeMode::Polynomial(c) => (n as f64).powf(c).ceil().max(1.0),
    };
    if k > cap as f64 {
        return Err(Error::CapExceeded {
            what: "tuple size",
            requested: if k.is_finite() { k as u128 } else { u128::MAX },
            cap: cap as u128,
        });
    }
    Ok(k as u64)
}

/// Evaluates one property on one tuple.
pub fn evaluate_property(
    property: &PropertySpec,
    h: &WordTuple,
    n: usize,
    prediction: &DegeneratePrediction,
    vertex_pair_budget: u64,
) -> Result<bool> {
    match property {
        PropertySpec::Ctp => h.has_central_tree_property(),
        PropertySpec::LcpBelow { bound } => {
            let b = match *bound {
                LcpBound::Constant(b) => b,
                LcpBound::Log(c) => (c * (n as f64).ln()).floor() as usize,
            };
            h.lcp_below(b)
        }
        PropertySpec::Cprime { lambda } => satisfies_cprime(h, lambda.parse()?),
        PropertySpec::MalnormalCert => {
            Ok(h.malnormality_certificate()? == MalnormalityCertificate::Certified)
        }
        PropertySpec::MalnormalExact => {
            if h.malnormality_certificate()? == MalnormalityCertificate::Certified {
                return Ok(true);
            }
            let g = stallings_graph(h);
            is_malnormal_with_cap(&g, vertex_pair_budget as u128)
        }
        PropertySpec::Collision { prefix } => {
            let ell = match *prefix {
                PrefixRule::Constant(l) => l,
                PrefixRule::Fraction(f) => (f * n as f64).floor() as usize,
            };
            Ok(collision_statistic(h, ell)?.exists)
        }
        PropertySpec::Abelianization { class } => {
            let target = match class {
                ClassTarget::Predicted => prediction.expected(n),
                ClassTarget::Trivial => DegenerateClass::ConsistentTrivial,
                ClassTarget::Z2 => DegenerateClass::ConsistentZ2,
            };
            Ok(degenerate_class_check(h, prediction.free_part) == target)
        }
    }
}

fn run_trial(ctx: &Context<'_>, cell: &Cell<'_>, size: u64, trial: u64) -> Result<bool> {
    let start = Instant::now();
    let seed = substream_seed(ctx.config.master_seed, cell.index, trial);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let h = ctx.sample_tuple(cell.n, size, &mut rng)?;
    let timeout = ctx.config.trial_timeout_ms;
    let check_time = || -> Result<()> {
        match timeout {
            Some(ms) if start.elapsed().as_millis() > ms as u128 => Err(Error::CapExceeded {
                what: "trial wall time (ms)",
                requested: start.elapsed().as_millis(),
                cap: ms as u128,
            }),
            _ => Ok(()),
        }
    };
    check_time()?;
    let ok = evaluate_property(cell.property, &h, cell.n, &ctx.prediction, ctx.config.vertex_pair_budget)?;
    check_time()?;
    Ok(ok)
}

fn run_cell(ctx: &Context<'_>, id: &str, cell: &Cell<'_>) -> ReportRow {
    let start = Instant::now();
    let config = ctx.config;
    let mut row = ReportRow {
        automaton: id.to_string(),
        n: cell.n,
        size_mode: cell.size.name(),
        size_param: cell.size.param(),
        length_mode: config.length_mode.name(),
        word_mode: config.word_mode.name(),
        property: cell.property.name(),
        property_param: cell.property.param(),
        trials: 0,
        successes: 0,
        frequency: f64::NAN,
        ci_low: f64::NAN,
        ci_high: f64::NAN,
        master_seed: config.master_seed,
        wall_ms: 0,
        tuple_size: None,
        error: None,
    };
    let outcome = (|| -> Result<u64> {
        if matches!(cell.property, PropertySpec::Cprime { .. })
            && config.word_mode != WordMode::CyclicallyReduced
        {
            return Err(Error::Config("cprime needs word_mode cyclically_reduced".into()));
        }
        let alpha = &ctx.alpha;
        let size = tuple_size(cell.size, cell.n, alpha, config.size_cap)?;
        row.tuple_size = Some(size);
        let results: Vec<Result<bool>> = (0..config.trials)
            .into_par_iter()
            .map(|t| run_trial(ctx, cell, size, t))
            .collect();
        let mut successes = 0;
        for r in results {
            successes += u64::from(r?);
        }
        Ok(successes)
    })();
    match outcome {
        Ok(s) => {
            row.trials = config.trials;
            row.successes = s;
            row.frequency = s as f64 / config.trials as f64;
            (row.ci_low, row.ci_high) = wilson_interval(s, config.trials);
        }
        Err(e) => row.error = Some(e.to_string()),
    }
    row.wall_ms = start.elapsed().as_millis();
    row
}

/// Runs every cell. Cells are ordered by `n`, then size mode, then
/// property, as listed in the config.
pub fn run_sweep(config: &SweepConfig, base: Option<&Path>) -> Result<SweepReport> {
    config.check()?;
    let resolved = config.automaton.resolve(base)?;
    run_resolved(config, &resolved)
}

/// [`run_sweep`] with an already resolved automaton.
pub fn run_resolved(config: &SweepConfig, resolved: &ResolvedAutomaton) -> Result<SweepReport> {
    config.check()?;
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(config.workers)
        .build()
        .map_err(|e| Error::Config(format!("cannot start worker pool: {e}")))?;
    let mut cells = Vec::new();
    for &n in &config.n_values {
        for &size in &config.size_modes {
            for property in &config.properties {
                cells.push(Cell {
                    index: cells.len() as u64,
                    n,
                    size,
                    property,
                });
            }
        }
    }
    let alpha = resolved.alpha.clone();
    let prediction = DegeneratePrediction::for_automaton(&resolved.automaton);
    let rows = pool.install(|| {
        cells
            .par_iter()
            .map(|cell| {
                let at_most = match config.length_mode {
                    LengthMode::Exact => None,
                    LengthMode::AtMost => match AtMostSampler::new(&resolved.automaton, cell.n) {
                        Ok(s) => Some(s),
                        Err(e) => return failed_row(config, &resolved.id, cell, e),
                    },
                };
                let ctx = Context {
                    config,
                    alphabet: resolved.automaton.alphabet(),
                    sampler: Sampler::new(&resolved.automaton),
                    at_most,
                    prediction,
                    alpha: alpha.clone(),
                };
                run_cell(&ctx, &resolved.id, cell)
            })
            .collect()
    });
    Ok(SweepReport { rows })
}

fn failed_row(config: &SweepConfig, id: &str, cell: &Cell<'_>, e: Error) -> ReportRow {
    ReportRow {
        automaton: id.to_string(),
        n: cell.n,
        size_mode: cell.size.name(),
        size_param: cell.size.param(),
        length_mode: config.length_mode.name(),
        word_mode: config.word_mode.name(),
        property: cell.property.name(),
        property_param: cell.property.param(),
        trials: 0,
        successes: 0,
        frequency: f64::NAN,
        ci_low: f64::NAN,
        ci_high: f64::NAN,
        master_seed: config.master_seed,
        wall_ms: 0,
        tuple_size: None,
        error: Some(e.to_string()),
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct TransitionEstimate {
    pub report: SweepReport,
    /// `(density, frequency)` per grid point.
    pub points: Vec<(f64, f64)>,
    pub crossing: Crossing,
}

/// Sweeps `property` at length `n` over an increasing density grid and
/// locates where its frequency crosses 1/2.
pub fn estimate_transition(
    base_config: &SweepConfig,
    resolved: &ResolvedAutomaton,
    property: PropertySpec,
    n: usize,
    grid: &[f64],
) -> Result<TransitionEstimate> {
    if grid.is_empty() || grid.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::Config("density grid must be nonempty and increasing".into()));
    }
    let mut config = base_config.clone();
    config.n_values = vec![n];
    config.size_modes = grid.iter().map(|&d| SizeMode::Density(d)).collect();
    config.properties = vec![property];
    let report = run_resolved(&config, resolved)?;
    if let Some(bad) = report.errors().next() {
        return Err(Error::Config(format!(
            "cell at density {} failed: {}",
            bad.size_param,
            bad.error.as_deref().unwrap_or("")
        )));
    }
    let points: Vec<(f64, f64)> = report.rows.iter().map(|r| (r.size_param, r.frequency)).collect();
    let crossing = find_crossing(&points);
    Ok(TransitionEstimate {
        report,
        points,
        crossing,
    })
}
