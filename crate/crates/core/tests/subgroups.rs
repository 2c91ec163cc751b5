use genfree::markov::{uniform_automaton, Sampler};
use genfree::stallings::{is_malnormal, stallings_graph, Edge, StallingsGraph};
use genfree::{Alphabet, MalnormalityCertificate, ReducedWord, WordTuple};
use proptest::prelude::*;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn sample_tuple(rng: &mut ChaCha8Rng, k: usize, n: usize) -> WordTuple {
    let ab = Alphabet::new(2).unwrap();
    let s = Sampler::new(&uniform_automaton::<f64>(2).unwrap());
    WordTuple::new(ab, (0..k).map(|_| s.sample_reduced(n, rng)).collect()).unwrap()
}

/// The petal graph before folding: one loop per word at vertex 0.
fn petals(h: &WordTuple) -> (usize, Vec<Edge>) {
    let mut edges = Vec::new();
    let mut next = 1;
    for w in h.words() {
        let letters = w.letters();
        let mut prev = 0;
        for (i, &x) in letters.iter().enumerate() {
            let target = if i + 1 == letters.len() {
                0
            } else {
                next += 1;
                next - 1
            };
            edges.push(Edge { source: prev, letter: x, target });
            prev = target;
        }
    }
    (next, edges)
}

#[test]
fn folding_ignores_edge_order() {
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    for _ in 0..50 {
        let k = rng.random_range(1..=4);
        let n = rng.random_range(1..=10);
        let h = sample_tuple(&mut rng, k, n);
        let reference = stallings_graph(&h);
        let (vertices, mut edges) = petals(&h);
        edges.shuffle(&mut rng);
        let shuffled = StallingsGraph::from_edges(h.alphabet(), vertices, &edges).unwrap();
        assert!(reference.is_isomorphic(&shuffled), "{h}");
        assert_eq!(reference, shuffled, "canonical numbering should agree for {h}");
    }
}

#[test]
fn products_of_generators_are_members() {
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    for _ in 0..30 {
        let h = sample_tuple(&mut rng, 3, 6);
        let g = stallings_graph(&h);
        let mut product = ReducedWord::empty(h.alphabet());
        for _ in 0..5 {
            let w = &h.words()[rng.random_range(0..h.len())];
            let w = if rng.random_bool(0.5) { w.inverse() } else { w.clone() };
            product = product.multiply(&w).unwrap();
            assert!(g.contains(&product));
        }
    }
}

#[test]
fn graph_json_roundtrip() {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let h = sample_tuple(&mut rng, 3, 8);
    let g = stallings_graph(&h);
    let back = StallingsGraph::from_json(&g.to_json()).unwrap();
    assert_eq!(g, back);
    assert!(g.to_dot().starts_with("digraph"));
}

#[test]
fn certified_tuples_are_malnormal() {
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let trials = 100;
    let mut certified = 0;
    for _ in 0..trials {
        let h = sample_tuple(&mut rng, 3, 200);
        if h.malnormality_certificate().unwrap() == MalnormalityCertificate::Certified {
            certified += 1;
            assert!(is_malnormal(&stallings_graph(&h)).unwrap());
        }
    }
    assert!(certified as f64 >= 0.9 * trials as f64, "{certified} of {trials}");
}

#[test]
fn central_tree_graphs_have_free_bases() {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let mut seen = 0;
    while seen < 50 {
        let h = sample_tuple(&mut rng, 4, 20);
        if !h.has_central_tree_property().unwrap() {
            continue;
        }
        seen += 1;
        let g = stallings_graph(&h);
        assert_eq!(g.rank(), h.len());
        // Vertices: the central tree plus the outer paths of each loop.
        let lcp = h.lcp().unwrap();
        assert!(g.vertex_count() <= 2 * h.len() * (20 - 2 * lcp) + 2 * h.len() * lcp + 1);
    }
}

proptest! {
    #[test]
    fn rank_is_euler_characteristic(words in prop::collection::vec(prop::collection::vec(0usize..4, 1..8), 1..5)) {
        let ab = Alphabet::new(2).unwrap();
        let words: Vec<ReducedWord> = words
            .iter()
            .map(|w| ReducedWord::reduce(ab, w).unwrap())
            .filter(|w| !w.is_empty())
            .collect();
        prop_assume!(!words.is_empty());
        let h = WordTuple::new(ab, words).unwrap();
        let g = stallings_graph(&h);
        prop_assert_eq!(g.rank(), g.edge_count() + 1 - g.vertex_count());
        prop_assert!(g.rank() <= h.len());
        for w in g.basis() {
            prop_assert!(g.contains(&w));
        }
    }
}
