use genfree::cancellation::{max_piece_per_rotation, satisfies_cprime, Lambda};
use genfree::markov::{uniform_automaton, Sampler};
use genfree::{Alphabet, WordTuple};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn cyclic_tuple(seed: u64, k: usize, n: usize) -> WordTuple {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let s = Sampler::new(&uniform_automaton::<f64>(2).unwrap());
    let words = (0..k)
        .map(|_| s.sample_cyclically_reduced(n, &mut rng, 1000).unwrap())
        .collect();
    WordTuple::new(Alphabet::new(2).unwrap(), words).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn verdict_survives_symmetries(seed in any::<u64>(), k in 1usize..5, n in 4usize..24, shift in 0usize..24, p in 1u64..4) {
        let h = cyclic_tuple(seed, k, n);
        let lambda = Lambda::new(1, p + 2).unwrap();
        let verdict = satisfies_cprime(&h, lambda).unwrap();
        let mut words = h.words().to_vec();
        words.reverse();
        words[0] = words[0].inverse();
        let last = words.len() - 1;
        words[last] = words[last].rotate(shift % n);
        let moved = WordTuple::new(h.alphabet(), words).unwrap();
        prop_assert_eq!(satisfies_cprime(&moved, lambda).unwrap(), verdict);
        prop_assert_eq!(
            max_piece_per_rotation(&moved).unwrap().max_piece(),
            max_piece_per_rotation(&h).unwrap().max_piece()
        );
    }
}

#[test]
fn larger_lambda_is_weaker() {
    for seed in 0..40 {
        let h = cyclic_tuple(seed, 3, 30);
        let mut last = false;
        for q in (2..=12).rev() {
            let now = satisfies_cprime(&h, Lambda::new(1, q).unwrap()).unwrap();
            assert!(!last || now, "seed {seed}: C'(1/{q}) fails after a smaller λ passed");
            last = now;
        }
    }
}
