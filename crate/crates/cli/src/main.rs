//! `genfree`: command-line access to the genfree library.
//!
//! Exit codes: 0 success (property holds), 10 property fails, 2 usage
//! error, 3 invalid input, 4 resource cap exceeded.

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use genfree::cancellation::{cprime_violation, max_piece_per_rotation, Lambda};
use genfree::experiments::{format_float, load_automaton, run_sweep, SweepConfig};
use genfree::markov::{
    analyze, prefix_heavy_params, threshold_predictions, SpectralOptions, DEFAULT_CYCLE_CAP,
};
use genfree::presentations::abelianization;
use genfree::stallings::{is_malnormal_with_cap, stallings_graph, DEFAULT_PAIR_CAP};
use genfree::words::count_reduced;
use genfree::{Alphabet, Automaton, BigRational, Error, ExactAutomaton, MalnormalityCertificate, Sampler, StallingsGraph, WordTuple};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde_json::json;

const EXIT_FAILS: u8 = 10;
const EXIT_USAGE: u8 = 2;
const EXIT_INPUT: u8 = 3;
const EXIT_CAP: u8 = 4;

#[derive(Parser)]
#[command(name = "genfree", version, about = "Free group words, subgroup graphs and random tuple experiments")]
struct Cli {
    /// Seed for every random choice; drawn from entropy and printed when absent.
    #[arg(long, global = true)]
    seed: Option<u64>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Word utilities.
    #[command(subcommand)]
    Words(WordsCommand),
    /// Validate or analyze a Markovian automaton (file or preset).
    #[command(subcommand)]
    Automaton(AutomatonCommand),
    /// Check a property of a tuple file.
    Check {
        #[arg(long, value_enum)]
        property: Property,
        /// Required for cprime, as p/q.
        #[arg(long)]
        lambda: Option<String>,
        #[arg(long)]
        input: PathBuf,
        /// Alphabet rank; inferred from the letters when absent.
        #[arg(short, long)]
        rank: Option<usize>,
        /// Vertex-pair budget for malnormal-exact.
        #[arg(long, default_value_t = DEFAULT_PAIR_CAP as u64)]
        pair_budget: u64,
        #[arg(long)]
        json: bool,
    },
    /// Sample words from an automaton.
    Sample {
        #[arg(long)]
        automaton: String,
        #[arg(long)]
        n: usize,
        #[arg(long, default_value_t = 1)]
        count: usize,
        /// Condition on being cyclically reduced.
        #[arg(long)]
        cyclic: bool,
        #[arg(long, default_value_t = 10_000)]
        max_attempts: usize,
    },
    /// Run an experiment sweep and write the results CSV.
    Sweep {
        #[arg(long)]
        config: PathBuf,
        #[arg(long)]
        out: PathBuf,
        /// Overrides the config's worker count.
        #[arg(long)]
        workers: Option<usize>,
    },
    /// Fold a tuple file into its Stallings graph.
    Stallings {
        #[arg(long)]
        input: PathBuf,
        #[arg(short, long)]
        rank: Option<usize>,
        /// Print the graph JSON instead of a summary.
        #[arg(long)]
        json: bool,
        /// Write the graph JSON to a file.
        #[arg(long)]
        out: Option<PathBuf>,
        /// Write a Graphviz rendering.
        #[arg(long)]
        dot: Option<PathBuf>,
    },
    /// Membership of words in the subgroup of a graph JSON file.
    Contains {
        #[arg(long)]
        graph: PathBuf,
        #[arg(required = true)]
        words: Vec<String>,
    },
}

#[derive(Subcommand)]
enum WordsCommand {
    /// Free reduction.
    Reduce {
        word: String,
        #[arg(short, long)]
        rank: Option<usize>,
    },
    /// Cyclic reduction; prints the core and the conjugator.
    CyclicReduce {
        word: String,
        #[arg(short, long)]
        rank: Option<usize>,
    },
    /// Number of reduced words of length n.
    Count {
        #[arg(short, long)]
        rank: usize,
        #[arg(short, long)]
        n: usize,
    },
}

#[derive(Subcommand)]
enum AutomatonCommand {
    Validate {
        source: String,
        /// Check with exact rational arithmetic.
        #[arg(long)]
        exact: bool,
        #[arg(long)]
        json: bool,
    },
    Analyze {
        source: String,
        /// Values of λ for the C'(λ) threshold predictions.
        #[arg(long = "lambda", default_values_t = ["1/6".to_string()])]
        lambdas: Vec<String>,
        #[arg(long)]
        json: bool,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum Property {
    Ctp,
    Cprime,
    MalnormalCert,
    MalnormalExact,
    Abelianization,
}

struct Failure {
    code: u8,
    message: String,
}

impl Failure {
    fn usage(message: impl Into<String>) -> Self {
        Failure {
            code: EXIT_USAGE,
            message: message.into(),
        }
    }

    /// An error from reading or processing input: 4 for resource caps, else 3.
    fn input(e: Error) -> Self {
        Failure {
            code: if e.is_resource_limit() { EXIT_CAP } else { EXIT_INPUT },
            message: e.to_string(),
        }
    }

    fn argument(e: Error) -> Self {
        Failure::usage(e.to_string())
    }
}

type Outcome = Result<u8, Failure>;

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(f) => {
            eprintln!("error: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}

fn run(cli: Cli) -> Outcome {
    let seed = cli.seed;
    match cli.command {
        Command::Words(cmd) => words(cmd),
        Command::Automaton(cmd) => automaton(cmd),
        Command::Check {
            property,
            lambda,
            input,
            rank,
            pair_budget,
            json,
        } => check(property, lambda.as_deref(), &input, rank, pair_budget, json),
        Command::Sample {
            automaton,
            n,
            count,
            cyclic,
            max_attempts,
        } => sample(&automaton, n, count, cyclic, max_attempts, seed),
        Command::Sweep { config, out, workers } => sweep(&config, &out, workers, seed),
        Command::Stallings {
            input,
            rank,
            json,
            out,
            dot,
        } => stallings(&input, rank, json, out.as_deref(), dot.as_deref()),
        Command::Contains { graph, words } => contains(&graph, &words),
    }
}

fn alphabet_for(word: &str, rank: Option<usize>) -> Result<Alphabet, Failure> {
    match rank {
        Some(r) => Alphabet::new(r).map_err(Failure::argument),
        None => Alphabet::infer(word).map_err(Failure::argument),
    }
}

fn words(cmd: WordsCommand) -> Outcome {
    match cmd {
        WordsCommand::Reduce { word, rank } => {
            let ab = alphabet_for(&word, rank)?;
            println!("{}", ab.parse(&word).map_err(Failure::argument)?);
        }
        WordsCommand::CyclicReduce { word, rank } => {
            let ab = alphabet_for(&word, rank)?;
            let k = ab.parse(&word).map_err(Failure::argument)?.cyclic_reduce();
            println!("{} {}", k.core, k.conjugator);
        }
        WordsCommand::Count { rank, n } => {
            Alphabet::new(rank).map_err(Failure::argument)?;
            println!("{}", count_reduced(rank, n));
        }
    }
    Ok(0)
}

fn read(path: &Path) -> Result<String, Failure> {
    std::fs::read_to_string(path).map_err(|e| Failure {
        code: EXIT_INPUT,
        message: format!("{}: {e}", path.display()),
    })
}

fn automaton(cmd: AutomatonCommand) -> Outcome {
    match cmd {
        AutomatonCommand::Validate { source, exact, json } => {
            let states = if exact {
                load_automaton::<BigRational>(&source, None)
                    .map(|a: ExactAutomaton| a.state_count())
            } else {
                load_automaton::<f64>(&source, None).map(|a: Automaton| a.state_count())
            };
            match states {
                Ok(n) => {
                    if json {
                        println!("{}", json!({"valid": true, "states": n}));
                    } else {
                        println!("valid ({n} states)");
                    }
                    Ok(0)
                }
                Err(Error::InvalidAutomaton(report)) if json => {
                    let list: Vec<String> = report.violations.iter().map(|v| v.message.clone()).collect();
                    println!("{}", json!({"valid": false, "violations": list}));
                    Ok(EXIT_INPUT)
                }
                Err(e) => Err(Failure::input(e)),
            }
        }
        AutomatonCommand::Analyze { source, lambdas, json } => {
            let lambdas = lambdas
                .iter()
                .map(|l| l.parse::<Lambda>())
                .collect::<Result<Vec<_>, _>>()
                .map_err(Failure::argument)?;
            let a: Automaton = load_automaton(&source, None).map_err(Failure::input)?;
            analyze_report(&a, &lambdas, json)
        }
    }
}

fn analyze_report(a: &Automaton, lambdas: &[Lambda], json: bool) -> Outcome {
    let s = analyze(a, SpectralOptions::default()).map_err(Failure::input)?;
    let heavy = prefix_heavy_params(a, SpectralOptions::default(), DEFAULT_CYCLE_CAP);
    let thresholds = threshold_predictions(a, lambdas);
    if json {
        let mut out = s.to_json();
        out["states"] = json!(a.state_count());
        out["prefix_heavy"] = match &heavy {
            Ok(p) => json!({
                "cycles": match &p.cycle {
                    Ok(c) => json!({"c": c.c, "alpha": c.alpha, "delta": c.delta, "max_length": c.max_length, "cycles": c.cycles}),
                    Err(e) => json!({"error": e.to_string()}),
                },
                "spectral": {"c": p.spectral.c, "alpha": p.spectral.alpha},
            }),
            Err(e) => json!({"error": e.to_string()}),
        };
        out["thresholds"] = thresholds
            .entries
            .iter()
            .map(|t| json!({"property": t.property, "threshold": t.threshold, "units": t.units}))
            .collect();
        println!("{}", serde_json::to_string_pretty(&out).expect("serializable"));
        return Ok(0);
    }
    let opt = |x: Option<f64>| x.map_or("undefined".to_string(), format_float);
    let vector = |v: &[f64]| v.iter().map(|&x| format_float(x)).collect::<Vec<_>>().join(" ");
    println!("states: {} ({} local)", a.state_count(), s.local_names.len());
    println!("irreducible: {}", s.irreducible);
    println!("period: {}", s.period.map_or("undefined".into(), |p| p.to_string()));
    println!("ergodic: {}", s.ergodic);
    println!("alpha2: {}", format_float(s.alpha2));
    println!("alpha3: {}", format_float(s.alpha3));
    match &s.stationary {
        Some(pi) => println!("stationary: {}", vector(pi)),
        None => println!("stationary: undefined"),
    }
    println!("degeneracy: {}", opt(s.degeneracy));
    println!("cyclic density: {}", opt(s.cyclic_density));
    match &heavy {
        Ok(p) => {
            match &p.cycle {
                Ok(c) => println!(
                    "prefix-heavy (cycles): C={} alpha={} (delta={}, length {}, {} cycles)",
                    format_float(c.c),
                    format_float(c.alpha),
                    format_float(c.delta),
                    c.max_length,
                    c.cycles
                ),
                Err(e) => println!("prefix-heavy (cycles): {e}"),
            }
            println!(
                "prefix-heavy (spectral): C={} alpha={}",
                opt(p.spectral.c),
                format_float(p.spectral.alpha)
            );
        }
        Err(e) => println!("prefix-heavy: {e}"),
    }
    for t in &thresholds.entries {
        println!("threshold {}: {} ({}-density)", t.property, format_float(t.threshold), t.units);
    }
    Ok(0)
}

fn load_tuple(path: &Path, rank: Option<usize>) -> Result<WordTuple, Failure> {
    let text = read(path)?;
    let alphabet = rank.map(Alphabet::new).transpose().map_err(Failure::argument)?;
    WordTuple::parse_file(&text, alphabet).map_err(|e| Failure {
        code: EXIT_INPUT,
        message: format!("{}: {e}", path.display()),
    })
}

fn verdict(holds: bool) -> u8 {
    if holds {
        0
    } else {
        EXIT_FAILS
    }
}

fn check(property: Property, lambda: Option<&str>, input: &Path, rank: Option<usize>, budget: u64, json: bool) -> Outcome {
    let lambda = match (property, lambda) {
        (Property::Cprime, None) => return Err(Failure::usage("--lambda p/q is required for cprime")),
        (_, l) => l.map(str::parse::<Lambda>).transpose().map_err(Failure::argument)?,
    };
    let h = load_tuple(input, rank)?;
    let stats = h.stats().map_err(Failure::input)?;
    match property {
        Property::Ctp => {
            let holds = h.has_central_tree_property().map_err(Failure::input)?;
            if json {
                println!("{}", json!({"property": "ctp", "holds": holds, "lcp": stats.lcp, "min": stats.min}));
            } else {
                println!("Lcp={} Min={}", stats.lcp, stats.min);
                println!("central tree property {}", if holds { "holds" } else { "fails" });
            }
            Ok(verdict(holds))
        }
        Property::Cprime => {
            let lambda = lambda.expect("checked above");
            let violation = cprime_violation(&h, lambda).map_err(Failure::input)?;
            let max_piece = max_piece_per_rotation(&h).map_err(Failure::input)?.max_piece();
            match (&violation, json) {
                (None, true) => println!("{}", json!({"property": "cprime", "lambda": lambda.to_string(), "holds": true, "max_piece": max_piece})),
                (None, false) => println!("C'({lambda}) holds (longest piece {max_piece})"),
                (Some(v), true) => println!(
                    "{}",
                    json!({
                        "property": "cprime", "lambda": lambda.to_string(), "holds": false,
                        "max_piece": max_piece, "piece": v.common_prefix.to_string(),
                        "rotation": v.rotation.to_string(), "length": v.length,
                        "slot": v.slot.to_string(), "partner": v.partner.to_string(),
                    })
                ),
                (Some(v), false) => {
                    println!("C'({lambda}) fails");
                    println!(
                        "piece {} (length {}) of rotation {} (length {}) at {}, shared with {}",
                        v.common_prefix, v.piece, v.rotation, v.length, v.slot, v.partner
                    );
                }
            }
            Ok(verdict(violation.is_none()))
        }
        Property::MalnormalCert => {
            let cert = h.malnormality_certificate().map_err(Failure::input)?;
            let lrf = h.longest_repeated_factor().map_err(Failure::input)?;
            let holds = cert == MalnormalityCertificate::Certified;
            if json {
                println!("{}", json!({"property": "malnormal-cert", "certified": holds, "lcp": stats.lcp, "min": stats.min, "repeated_factor": lrf}));
            } else {
                println!("Lcp={} Min={} longest repeated factor={}", stats.lcp, stats.min, lrf);
                println!("malnormality {}", if holds { "certified" } else { "not certified" });
            }
            Ok(verdict(holds))
        }
        Property::MalnormalExact => {
            let g = stallings_graph(&h);
            let holds = is_malnormal_with_cap(&g, budget as u128).map_err(Failure::input)?;
            if json {
                println!("{}", json!({"property": "malnormal-exact", "holds": holds, "vertices": g.vertex_count()}));
            } else {
                println!("subgroup is {}malnormal", if holds { "" } else { "not " });
            }
            Ok(verdict(holds))
        }
        Property::Abelianization => {
            let ab = abelianization(&h);
            if json {
                let factors: Vec<String> = ab.invariant_factors.iter().map(|d| d.to_string()).collect();
                println!("{}", json!({"property": "abelianization", "free_rank": ab.free_rank, "invariant_factors": factors, "group": ab.to_string()}));
            } else {
                println!("{ab}");
            }
            Ok(0)
        }
    }
}

fn chosen_seed(seed: Option<u64>) -> u64 {
    seed.unwrap_or_else(|| {
        let s = rand::random::<u64>();
        eprintln!("seed: {s}");
        s
    })
}

fn sample(source: &str, n: usize, count: usize, cyclic: bool, max_attempts: usize, seed: Option<u64>) -> Outcome {
    let a: Automaton = load_automaton(source, None).map_err(Failure::input)?;
    let sampler = Sampler::new(&a);
    let mut rng = ChaCha8Rng::seed_from_u64(chosen_seed(seed));
    for _ in 0..count {
        let w = if cyclic {
            sampler.sample_cyclically_reduced(n, &mut rng, max_attempts).map_err(Failure::input)?
        } else {
            sampler.sample_reduced(n, &mut rng)
        };
        println!("{w}");
    }
    Ok(0)
}

fn sweep(config_path: &Path, out: &Path, workers: Option<usize>, seed: Option<u64>) -> Outcome {
    let text = read(config_path)?;
    let mut config = SweepConfig::from_json_str(&text).map_err(|e| Failure {
        code: EXIT_INPUT,
        message: format!("{}: {e}", config_path.display()),
    })?;
    if let Some(w) = workers {
        config.workers = w;
    }
    if let Some(s) = seed {
        config.master_seed = s;
    }
    let base = config_path.parent().filter(|p| !p.as_os_str().is_empty());
    let report = run_sweep(&config, base).map_err(Failure::input)?;
    std::fs::write(out, report.to_csv()).map_err(|e| Failure {
        code: EXIT_INPUT,
        message: format!("{}: {e}", out.display()),
    })?;
    let errors: Vec<_> = report.errors().collect();
    for r in &errors {
        eprintln!(
            "cell n={} {}={} {}{}: {}",
            r.n,
            r.size_mode,
            format_float(r.size_param),
            r.property,
            if r.property_param.is_empty() { String::new() } else { format!("({})", r.property_param) },
            r.error.as_deref().unwrap_or("")
        );
    }
    println!("{} cells, {} failed, written to {}", report.rows.len(), errors.len(), out.display());
    Ok(0)
}

fn stallings(input: &Path, rank: Option<usize>, json: bool, out: Option<&Path>, dot: Option<&Path>) -> Outcome {
    let h = load_tuple(input, rank)?;
    let g = stallings_graph(&h);
    let write = |path: &Path, text: String| {
        std::fs::write(path, text).map_err(|e| Failure {
            code: EXIT_INPUT,
            message: format!("{}: {e}", path.display()),
        })
    };
    let graph_json = serde_json::to_string_pretty(&g.to_json()).expect("serializable");
    if let Some(path) = out {
        write(path, graph_json.clone() + "\n")?;
    }
    if let Some(path) = dot {
        write(path, g.to_dot())?;
    }
    if json {
        println!("{graph_json}");
    } else {
        println!("vertices {} edges {} rank {}", g.vertex_count(), g.edge_count(), g.rank());
    }
    Ok(0)
}

fn contains(graph: &Path, words: &[String]) -> Outcome {
    let text = read(graph)?;
    let value: serde_json::Value = serde_json::from_str(&text).map_err(|e| Failure {
        code: EXIT_INPUT,
        message: format!("{}: {e}", graph.display()),
    })?;
    let g = StallingsGraph::from_json(&value).map_err(|e| Failure {
        code: EXIT_INPUT,
        message: format!("{}: {e}", graph.display()),
    })?;
    let mut all = true;
    for w in words {
        let word = g.alphabet().parse(w).map_err(Failure::argument)?;
        let yes = g.contains(&word);
        all &= yes;
        println!("{w} {}", if yes { "yes" } else { "no" });
    }
    Ok(verdict(all))
}
