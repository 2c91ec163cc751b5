use genfree::experiments::{
    evaluate_property, run_sweep, substream_seed, AtMostSampler, AutomatonRef, LengthMode,
    PropertySpec, SizeMode, SweepConfig, CSV_HEADER,
};
use genfree::markov::{density_to_size, uniform_automaton, Sampler};
use genfree::presentations::DegeneratePrediction;
use genfree::{Alphabet, WordTuple};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use statrs::distribution::{ChiSquared, ContinuousCDF};

#[test]
fn at_most_length_law() {
    let u = uniform_automaton::<f64>(2).unwrap();
    let s = AtMostSampler::new(&u, 3).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let draws = 100_000;
    let mut counts = [0u64; 3];
    for _ in 0..draws {
        counts[s.sample_length(&mut rng) - 1] += 1;
    }
    let law = [4.0 / 52.0, 12.0 / 52.0, 36.0 / 52.0];
    let stat: f64 = counts
        .iter()
        .zip(law)
        .map(|(&o, p)| (o as f64 - p * draws as f64).powi(2) / (p * draws as f64))
        .sum();
    let p = 1.0 - ChiSquared::new(2.0).unwrap().cdf(stat);
    assert!(p > 0.001, "p = {p}, counts {counts:?}");

    let one = AtMostSampler::new(&u, 1).unwrap();
    assert!((0..100).all(|_| one.sample_length(&mut rng) == 1));
}

#[test]
fn cells_reuse_the_library_checkers() {
    let property = PropertySpec::Ctp;
    let c = SweepConfig::new(
        AutomatonRef::Name("uniform:2".into()),
        vec![15],
        vec![SizeMode::Density(0.2)],
        vec![property.clone()],
        30,
        2024,
    );
    let report = run_sweep(&c, None).unwrap();
    let u = uniform_automaton::<f64>(2).unwrap();
    let sampler = Sampler::new(&u);
    let size = density_to_size(1.0 / 3.0, 0.2, 15, u64::MAX).unwrap();
    let prediction = DegeneratePrediction::for_automaton(&u);
    let mut successes = 0;
    for trial in 0..30 {
        let mut rng = ChaCha8Rng::seed_from_u64(substream_seed(2024, 0, trial));
        let words = (0..size).map(|_| sampler.sample_reduced(15, &mut rng)).collect();
        let h = WordTuple::new(Alphabet::new(2).unwrap(), words).unwrap();
        assert_eq!(
            evaluate_property(&property, &h, 15, &prediction, 1 << 20).unwrap(),
            h.has_central_tree_property().unwrap()
        );
        successes += u64::from(h.has_central_tree_property().unwrap());
    }
    assert_eq!(report.rows[0].successes, successes);
    assert_eq!(report.rows[0].tuple_size, Some(size));
}

#[test]
fn ctp_frequency_decreases_with_density() {
    let grid: Vec<SizeMode> = (1..=8).map(|i| SizeMode::Density(0.05 * i as f64)).collect();
    let trials = 60;
    let c = SweepConfig::new(AutomatonRef::Name("uniform:2".into()), vec![20], grid, vec![PropertySpec::Ctp], trials, 3);
    let report = run_sweep(&c, None).unwrap();
    for w in report.rows.windows(2) {
        let (p, q) = (w[0].frequency, w[1].frequency);
        let sd = ((p * (1.0 - p) + q * (1.0 - q)) / trials as f64).sqrt();
        assert!(q <= p + 3.0 * sd + 1e-12, "{p} then {q}");
    }
}

#[test]
fn config_files_resolve_relative_automata() {
    let dir = std::env::temp_dir().join(format!("genfree-sweep-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    std::fs::write(
        dir.join("coin.json"),
        r#"{"rank": 2, "states": ["s"], "initial": {"s": 1},
            "transitions": [{"from": "s", "letter": "a", "to": "s", "prob": "1/2"},
                            {"from": "s", "letter": "b", "to": "s", "prob": "1/2"}]}"#,
    )
    .unwrap();
    let config = SweepConfig::from_json_str(
        r#"{"automaton": "coin.json", "n_values": [6], "size_modes": [{"fixed": 4}, {"density": 0.3}],
            "properties": [{"kind": "malnormal_exact"}, {"kind": "abelianization"}],
            "trials": 5, "master_seed": 1, "length_mode": "at_most"}"#,
    )
    .unwrap();
    assert_eq!(config.length_mode, LengthMode::AtMost);
    let report = run_sweep(&config, Some(&dir)).unwrap();
    assert_eq!(report.rows[0].automaton, "coin.json");
    // at_most needs the uniform preset.
    assert!(report.rows.iter().all(|r| r.error.is_some()));
    let mut exact = config.clone();
    exact.length_mode = LengthMode::Exact;
    let report = run_sweep(&exact, Some(&dir)).unwrap();
    assert!(report.rows.iter().all(|r| r.error.is_none()), "{:?}", report.rows);
    // Density sizing uses α2 = 1/2 here: ceil(2^1.8) = 4.
    assert_eq!(report.rows[2].tuple_size, Some(4));
    let csv = report.to_csv();
    assert_eq!(csv.lines().next(), Some(CSV_HEADER));
    std::fs::remove_dir_all(&dir).unwrap();
}
