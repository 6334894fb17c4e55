use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use frobchar_core::fgl::{CoefficientRing, FormalGroupLaw};
use frobchar_core::lusztig::{e_n, stabilization_check, steinberg_check, E1Mode, E1Source};
use frobchar_core::qchar::{pi, twist_hat};
use frobchar_core::quiverfix::{enumerate_components, eval_at_one, poincare_polynomial, uneven_orbits, verify_a1_even_iso};
use frobchar_core::verify::random_eps_t_char;
use frobchar_core::weylchar::weyl_character;
use frobchar_core::{Character, RootSystem, WeightVector};

fn a1() -> RootSystem {
    RootSystem::parse("A1").unwrap()
}

fn small_char() -> impl Strategy<Value = Character> {
    prop::collection::vec(((-4i64..=4, -4i64..=4), -3i64..=3), 0..5)
        .prop_map(|terms| Character::from_terms(terms.into_iter().map(|((a, b), c)| (WeightVector(vec![a, b]), c))))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn twist_is_a_ring_map(a in small_char(), b in small_char(), t in 0u32..3, p in prop::sample::select(vec![2u64, 3, 5])) {
        prop_assert_eq!((&a * &b).frobenius_twist(t, p), &a.frobenius_twist(t, p) * &b.frobenius_twist(t, p));
        prop_assert_eq!((&a + &b).frobenius_twist(t, p), &a.frobenius_twist(t, p) + &b.frobenius_twist(t, p));
        prop_assert_eq!(a.frobenius_twist(t, p).frobenius_twist(1, p), a.frobenius_twist(t + 1, p));
    }

    #[test]
    fn pi_is_a_ring_map(seed in any::<u64>(), p in prop::sample::select(vec![2u64, 3]), n in 0usize..3, rank in 1usize..4) {
        let root = RootSystem::parse(&format!("A{rank}")).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let x = random_eps_t_char(&mut rng, rank, p, n);
        let y = random_eps_t_char(&mut rng, rank, p, n);
        prop_assert_eq!(pi(&(&x * &y), &root).unwrap(), &pi(&x, &root).unwrap() * &pi(&y, &root).unwrap());
        prop_assert_eq!(pi(&(&x + &y), &root).unwrap(), &pi(&x, &root).unwrap() + &pi(&y, &root).unwrap());
    }

    #[test]
    fn pi_commutes_with_twist(seed in any::<u64>(), p in prop::sample::select(vec![2u64, 3]), n in 0usize..3, t in 1usize..3) {
        let root = RootSystem::parse("A2").unwrap();
        let x = random_eps_t_char(&mut ChaCha8Rng::seed_from_u64(seed), 2, p, n);
        prop_assert_eq!(pi(&twist_hat(&x, t).unwrap(), &root).unwrap(), pi(&x, &root).unwrap().frobenius_twist(t as u32, p));
    }

    #[test]
    fn twist_is_multiplicative(seed in any::<u64>(), p in prop::sample::select(vec![2u64, 3]), t in 1usize..3) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let x = random_eps_t_char(&mut rng, 2, p, 1);
        let y = random_eps_t_char(&mut rng, 2, p, 1);
        prop_assert_eq!(twist_hat(&(&x * &y), t).unwrap(), &twist_hat(&x, t).unwrap() * &twist_hat(&y, t).unwrap());
    }

    #[test]
    fn steinberg_holds_in_a1(x in 0i64..80, p in prop::sample::select(vec![2u64, 3, 5, 7]), n in 1u32..4) {
        let src = E1Source::new(a1(), p, E1Mode::Sl2ClosedForm).unwrap();
        prop_assert!(steinberg_check(&src, &WeightVector(vec![x]), n).unwrap().passed);
    }

    #[test]
    fn level_characters_are_weyl_invariant_with_top_weight(x in 0i64..200, p in prop::sample::select(vec![2u64, 3, 5]), n in 0u32..4) {
        let src = E1Source::new(a1(), p, E1Mode::Sl2ClosedForm).unwrap();
        let e = e_n(&src, &WeightVector(vec![x]), n).unwrap().character;
        prop_assert!(e.is_weyl_invariant(&a1()));
        prop_assert_eq!(e.highest_dominant_term(&a1()), Some((WeightVector(vec![x]), 1)));
    }

    #[test]
    fn restricted_weights_stabilize_in_a2(a in 0i64..4, b in 0i64..4) {
        prop_assume!(a + b <= 3);
        let src = E1Source::new(RootSystem::parse("A2").unwrap(), 5, E1Mode::LowestAlcove).unwrap();
        prop_assert!(stabilization_check(&src, &WeightVector(vec![a, b]), 4).unwrap());
    }

    #[test]
    fn p_series_compose(p in 1u64..5, q in 1u64..5) {
        let law = FormalGroupLaw::multiplicative(CoefficientRing::Integers, 9);
        let (sp, sq) = (law.p_series(p), law.p_series(q));
        let pq = law.p_series(p * q);
        prop_assert_eq!(&sp.substitute(&[sq.clone()], false).unwrap(), &pq);
        prop_assert_eq!(&sq.substitute(&[sp], false).unwrap(), &pq);
    }

    #[test]
    fn honda_p_series_compose(p in 1u64..4, q in 1u64..4) {
        let law = FormalGroupLaw::honda(CoefficientRing::Rationals, 2, 2, 8).unwrap();
        let composed = law.p_series(p).substitute(&[law.p_series(q)], false).unwrap();
        prop_assert_eq!(composed, law.p_series(p * q));
    }

    #[test]
    fn quiver_invariants(m in 0u64..4, p in prop::sample::select(vec![2u64, 3])) {
        let w = m * p;
        prop_assert!(verify_a1_even_iso(w, p).unwrap().holds);
        for orbit in uneven_orbits(w, p).unwrap() {
            prop_assert_eq!(orbit.len() as u64, p);
        }
        let total: i64 = enumerate_components(w, p).unwrap().iter().map(|d| eval_at_one(&poincare_polynomial(d))).sum();
        // Σ_v binom(m, v) per eigenspace
        prop_assert_eq!(total, 1i64 << (m * p));
    }

    #[test]
    fn weyl_dimension_matches_sl2(k in 0i64..40) {
        prop_assert_eq!(weyl_character(&a1(), &WeightVector(vec![k])).unwrap().dim(), k + 1);
    }
}
