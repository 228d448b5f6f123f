mod common;

use common::{cycle, random_action};
use num_traits::{One, Zero};
use sofic::nbhd::{
    iso_bruteforce, neighborhood_code, neighborhood_code_with, pair_stats, restrict_type, stat_vector,
    stat_vector_with, statistical_distance, BallGraph, TypeOrdering,
};
use sofic::scalar::ratio;
use sofic::{FiniteAction, LabelWord, Mode, Rational};

#[test]
fn codes_agree_with_bruteforce_isomorphism() {
    for seed in 0..12u64 {
        let mode = if seed % 2 == 0 { Mode::Free } else { Mode::Involution };
        let d = 1 + (seed % 3) as u32;
        let n = if mode == Mode::Free && d == 3 { 10 } else { 16 };
        let a = random_action(seed, n, d, mode, 1);
        let r = if mode == Mode::Free && d > 1 { 1 } else { 2 };
        let codes: Vec<_> = (0..n).map(|v| neighborhood_code_with(&a, v, r, 1).unwrap()).collect();
        for u in 0..n {
            for v in 0..n {
                let iso = iso_bruteforce(&codes[u], &codes[v]).unwrap();
                assert_eq!(codes[u] == codes[v], iso, "seed {seed}, vertices {u} {v}");
            }
        }
    }
}

#[test]
fn code_graph_is_the_bfs_ball() {
    for seed in 0..6u64 {
        let a = random_action(seed, 25, 2, Mode::Involution, 2);
        for v in 0..25 {
            let t = neighborhood_code(&a, v, 2).unwrap();
            let g = BallGraph::from_action(&a, v, 2, 2);
            assert!(BallGraph::from_type(&t).isomorphic(&g));
            assert_eq!(t.size(), g.vertex_count());
        }
    }
}

#[test]
fn iso_oracle_edges() {
    let a = random_action(3, 12, 2, Mode::Free, 1);
    let t = neighborhood_code(&a, 0, 1).unwrap();
    assert!(iso_bruteforce(&t, &t).unwrap());
    let small = neighborhood_code(&cycle(3, 1), 0, 1).unwrap();
    let big = neighborhood_code(&cycle(9, 1), 0, 1).unwrap();
    assert_ne!(small.size(), neighborhood_code(&FiniteAction::with_zero_labels(Mode::Free, 1, vec![vec![0]], 1).unwrap(), 0, 1).unwrap().size());
    assert!(!iso_bruteforce(&small, &big).unwrap());
    let wide = neighborhood_code(&random_action(1, 200, 3, Mode::Free, 3), 0, 3).unwrap();
    assert!(iso_bruteforce(&wide, &wide).is_err());
}

#[test]
fn restriction_commutes_with_coding() {
    for seed in 0..8u64 {
        let mode = if seed % 2 == 0 { Mode::Free } else { Mode::Involution };
        let a = random_action(seed, 40, 2, mode, 3);
        for v in 0..40 {
            let top = neighborhood_code(&a, v, 3).unwrap();
            for q in 0..=3 {
                assert_eq!(restrict_type(&top, q).unwrap(), neighborhood_code(&a, v, q).unwrap());
            }
        }
    }
}

#[test]
fn stats_sum_to_one_and_marginalize() {
    for seed in 0..6u64 {
        let a = random_action(seed, 60, 2, Mode::Free, 2);
        let s = stat_vector(&a, 2).unwrap();
        assert!(s.total().is_one());
        assert_eq!(s.forget_labels(), stat_vector_with(&a, 2, 0).unwrap());
        assert_eq!(s.restrict(1).unwrap(), stat_vector(&a, 1).unwrap());
        assert!(s.iter().all(|(_, p)| *p > Rational::zero() && *p <= Rational::one()));
    }
}

#[test]
fn pair_equations_hold_on_involution_actions() {
    for seed in 0..8u64 {
        let a = random_action(seed, 50, 1 + (seed % 3) as u32, Mode::Involution, 2);
        for r in 0..=2 {
            let s = stat_vector(&a, r).unwrap();
            let p = pair_stats(&a, r).unwrap();
            p.check_equations(&s).unwrap();
        }
    }
}

#[test]
fn distance_is_a_bounded_metric_on_samples() {
    let vs: Vec<_> = (0..5u64)
        .map(|seed| stat_vector(&random_action(seed, 30, 1, Mode::Free, 1), 1).unwrap())
        .collect();
    let ord = TypeOrdering::from_supports(&vs);
    let d = |a: usize, b: usize| statistical_distance(&vs[a..=a], &vs[b..=b], &ord).unwrap();
    for a in 0..5 {
        assert!(d(a, a).is_zero());
        for b in 0..5 {
            assert_eq!(d(a, b), d(b, a));
            assert!(d(a, b) <= ratio(2, 1));
            for c in 0..5 {
                assert!(d(a, c) <= d(a, b) + d(b, c));
            }
        }
    }
}

#[test]
fn identity_action_statistics() {
    let labels = ["0", "0", "1", "1"].iter().map(|s| LabelWord::parse(s).unwrap()).collect();
    let a = FiniteAction::new(Mode::Free, vec![vec![0, 1, 2, 3]], labels).unwrap();
    let s = stat_vector(&a, 1).unwrap();
    assert_eq!(s.len(), 2);
    for (t, p) in s.iter() {
        assert_eq!(*p, ratio(1, 2));
        assert_eq!(t.size(), 1);
    }
}
