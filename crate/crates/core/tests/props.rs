mod common;

use std::sync::Arc;

use common::{random_action, random_int_spec};
use num_traits::Zero;
use proptest::prelude::*;
use sofic::nbhd::{neighborhood_code, restrict_type, stat_vector, statistical_distance, TypeOrdering};
use sofic::scalar::ratio;
use sofic::{GeneratorWord, Mode, NeighborhoodType, StatVector};

fn mode_strategy() -> impl Strategy<Value = Mode> {
    prop_oneof![Just(Mode::Free), Just(Mode::Involution)]
}

fn word_strategy(d: i64) -> impl Strategy<Value = GeneratorWord> {
    prop::collection::vec((1..=d, any::<bool>()), 0..8)
        .prop_map(|v| GeneratorWord::from_signed(&v.iter().map(|&(g, s)| if s { g } else { -g }).collect::<Vec<_>>()).unwrap())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn words_invert(seed in 0u64..1000, mode in mode_strategy(), w in word_strategy(3), v in 0usize..20) {
        let a = random_action(seed, 20, 3, mode, 0);
        let x = a.apply_word(&w, v).unwrap();
        prop_assert_eq!(a.apply_word(&w.inverse(mode), x).unwrap(), v);
        prop_assert!(w.concat(&w.inverse(mode)).reduced(mode).is_empty());
        prop_assert_eq!(a.apply_word(&w.reduced(mode), v).unwrap(), x);
        prop_assert_eq!(w.reduced(mode).reduced(mode), w.reduced(mode));
        prop_assert_eq!(GeneratorWord::parse(&w.to_string()).unwrap(), w);
    }

    #[test]
    fn codes_round_trip_and_restrict(seed in 0u64..1000, mode in mode_strategy(), d in 1u32..=3, v in 0usize..24) {
        let a = random_action(seed, 24, d, mode, 2);
        let r = if mode == Mode::Free && d == 3 { 1 } else { 2 };
        let t = neighborhood_code(&a, v, r).unwrap();
        prop_assert_eq!(NeighborhoodType::parse_code(&t.to_code_string()).unwrap(), t.clone());
        for q in 0..=r {
            prop_assert_eq!(restrict_type(&t, q).unwrap(), neighborhood_code(&a, v, q).unwrap());
        }
        // relabeling vertices does not change the code
        let n = a.n();
        let shift = |x: u32| (x as usize + seed as usize) % n;
        let gens: Vec<Vec<u32>> = a.generators().iter().map(|g| {
            let mut h = vec![0u32; n];
            for x in 0..n { h[shift(x as u32)] = shift(g[x]) as u32; }
            h
        }).collect();
        let mut labels = vec![sofic::LabelWord::default(); n];
        for x in 0..n { labels[shift(x as u32)] = a.label(x).clone(); }
        let b = sofic::FiniteAction::new(mode, gens, labels).unwrap();
        prop_assert_eq!(neighborhood_code(&b, shift(v as u32), r).unwrap(), t);
    }

    #[test]
    fn stats_csv_round_trip(seed in 0u64..1000, mode in mode_strategy()) {
        let s = stat_vector(&random_action(seed, 30, 2, mode, 1), 1).unwrap();
        let back = StatVector::from_csv(&s.to_csv()).unwrap();
        prop_assert!(back.iter().eq(s.iter()));
        prop_assert_eq!(back.samples(), s.samples());
    }

    #[test]
    fn distance_triangle(s1 in 0u64..500, s2 in 0u64..500, s3 in 0u64..500) {
        let v: Vec<StatVector> = [s1, s2, s3]
            .iter()
            .map(|&s| stat_vector(&random_action(s, 16, 1, Mode::Involution, 1), 1).unwrap())
            .collect();
        let ord = TypeOrdering::from_supports(&v);
        let d = |a: usize, b: usize| statistical_distance(&v[a..=a], &v[b..=b], &ord).unwrap();
        prop_assert!(d(0, 2) <= d(0, 1) + d(1, 2));
        prop_assert!(d(0, 1) <= ratio(2, 1));
        prop_assert!(d(0, 0).is_zero());
    }

    #[test]
    fn kernel_identities(seed in 0u64..1000, mode in mode_strategy(), dim in 1usize..=2) {
        let a = Arc::new(random_action(seed, 12, 2, mode, 1));
        let k = random_int_spec(seed, 2, mode, dim).instantiate(&a).unwrap();
        let l = random_int_spec(seed ^ 0xabc, 2, mode, dim).instantiate(&a).unwrap();
        let kl = k.mul(&l).unwrap();
        prop_assert_eq!(kl.adjoint().to_dense(), l.adjoint().mul(&k.adjoint()).unwrap().to_dense());
        prop_assert_eq!(kl.normalized_trace(), l.mul(&k).unwrap().normalized_trace());
        prop_assert_eq!(k.adjoint().adjoint().to_dense(), k.to_dense());
        let hs = k.hs_norm_sq();
        prop_assert_eq!(hs, k.adjoint().mul(&k).unwrap().normalized_trace());
        let est = k.op_norm(1e-10, 5000).unwrap_or_else(|e| match e {
            sofic::Error::Numerical { partial, .. } => partial,
            other => panic!("{other}"),
        });
        prop_assert!(est <= k.width() as f64 * k.sup_norm() + 1e-9);
        prop_assert!(est + 1e-9 >= k.hs_norm());
    }
}
