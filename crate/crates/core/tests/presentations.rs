use genfree::markov::{psl2_automaton, uniform_automaton, Psl2Variant, Psl2Weights, Sampler};
use genfree::presentations::{abelianization, collision_statistic, DegenerateClass, DegeneratePrediction};
use genfree::{Alphabet, WordTuple};
use num_bigint::BigInt;
use num_traits::Zero;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

#[test]
fn relator_parity_forces_a_z2_quotient() {
    let s = Sampler::new(&uniform_automaton::<f64>(2).unwrap());
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    for n in 2..14 {
        for _ in 0..10 {
            let words = (0..6).map(|_| s.sample_reduced(n, &mut rng)).collect();
            let h = WordTuple::new(Alphabet::new(2).unwrap(), words).unwrap();
            let ab = abelianization(&h);
            if n % 2 == 0 {
                assert!(ab.has_z2_quotient(), "n = {n}: {ab}");
            }
            assert!(ab.free_rank + ab.invariant_factors.len() <= 2);
            for w in ab.invariant_factors.windows(2) {
                assert!((&w[1] % &w[0]).is_zero());
            }
            assert!(ab.invariant_factors.iter().all(|d| *d > BigInt::from(1)));
        }
    }
}

#[test]
fn psl2_predictions() {
    let geo = psl2_automaton::<f64>(Psl2Variant::Geodesic, Psl2Weights::default()).unwrap();
    let p = DegeneratePrediction::for_automaton(&geo);
    assert!(p.has_inverse_pair);
    assert_eq!(p.free_part, 0);
    let quasi = psl2_automaton::<f64>(Psl2Variant::Quasigeodesic, Psl2Weights::default()).unwrap();
    let q = DegeneratePrediction::for_automaton(&quasi);
    assert!(!q.has_inverse_pair);
    assert_eq!(q.free_part, 1);
    assert_eq!(q.expected(10), DegenerateClass::ConsistentTrivial);
}

#[test]
fn collisions_appear_past_the_birthday_bound() {
    let s = Sampler::new(&uniform_automaton::<f64>(2).unwrap());
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    let words = (0..2000).map(|_| s.sample_reduced(30, &mut rng)).collect();
    let h = WordTuple::new(Alphabet::new(2).unwrap(), words).unwrap();
    assert!(collision_statistic(&h, 8).unwrap().exists);
    assert!(!collision_statistic(&h, 30).unwrap().exists);
}
