mod common;

use std::collections::BTreeMap;

use common::random_action;
use num_traits::{One, Signed, Zero};
use sofic::constructions::{
    bernoulli_labeling, bernoulli_target, build_profinite, build_treeable, cycle_ratio, default_word_table,
    oe_add_generator, rational_round, rational_round_stats, target_stats_free_involutions, Labeling, Preset,
    WordRule,
};
use sofic::nbhd::{neighborhood_code, pair_stats, restrict_type, stat_vector, stat_vector_with};
use sofic::scalar::ratio;
use sofic::{FiniteAction, GeneratorWord, Mode, Rational};

/// Undirected edge list with multiplicity: `(u, v)` per generator step.
fn edge_list(a: &FiniteAction) -> Vec<(usize, usize)> {
    let mut out = Vec::new();
    for g in a.generators() {
        for x in 0..a.n() {
            let y = g[x] as usize;
            if a.mode() == Mode::Free || x <= y {
                out.push((x, y));
            }
        }
    }
    out
}

fn cycle_through(edges: &[(usize, usize)], root: usize, q: usize) -> bool {
    fn go(edges: &[(usize, usize)], root: usize, at: usize, used: &mut Vec<usize>, seen: &mut Vec<usize>, q: usize) -> bool {
        for (k, &(u, v)) in edges.iter().enumerate() {
            if used.contains(&k) {
                continue;
            }
            let other = if u == at {
                v
            } else if v == at {
                u
            } else {
                continue;
            };
            if other == root {
                return true;
            }
            if used.len() + 1 < q && !seen.contains(&other) {
                used.push(k);
                seen.push(other);
                if go(edges, root, other, used, seen, q) {
                    return true;
                }
                used.pop();
                seen.pop();
            }
        }
        false
    }
    go(edges, root, root, &mut Vec::new(), &mut vec![root], q)
}

#[test]
fn cycle_ratio_matches_edge_list_search() {
    for seed in 0..10u64 {
        let mode = if seed % 2 == 0 { Mode::Free } else { Mode::Involution };
        let a = random_action(seed, 12, 2, mode, 0);
        let edges = edge_list(&a);
        for q in 1..=5u32 {
            let hits = (0..a.n()).filter(|&v| cycle_through(&edges, v, q as usize)).count();
            assert_eq!(cycle_ratio(&a, q), ratio(hits as i64, 12), "seed {seed} q {q}");
        }
    }
}

#[test]
fn cycle_ratio_on_cycles() {
    let c = build_profinite(Preset::Cyclic, 7, Labeling::Zeros(0), 0).unwrap();
    assert!(cycle_ratio(&c, 6).is_zero());
    assert!(cycle_ratio(&c, 7).is_one());
    let loops = FiniteAction::with_zero_labels(Mode::Involution, 3, vec![vec![0, 1, 2]], 0).unwrap();
    assert!(cycle_ratio(&loops, 1).is_one());
    // a single matched pair is a backtrack, not a 2-cycle
    let pair = FiniteAction::with_zero_labels(Mode::Involution, 2, vec![vec![1, 0]], 0).unwrap();
    assert!(cycle_ratio(&pair, 4).is_zero());
    let double = FiniteAction::with_zero_labels(Mode::Involution, 2, vec![vec![1, 0], vec![1, 0]], 0).unwrap();
    assert!(cycle_ratio(&double, 2).is_one());
}

#[test]
fn free_random_is_locally_tree_like() {
    let a = build_profinite(Preset::FreeRandom { d: 2 }, 2000, Labeling::Zeros(0), 5).unwrap();
    let s = stat_vector_with(&a, 1, 0).unwrap();
    let tree: Rational = s.iter().filter(|(t, _)| t.is_tree()).map(|(_, p)| p.clone()).sum();
    // every vertex on a cycle of length <= 3 sees it inside its 1-ball
    assert!(Rational::one() - &tree >= cycle_ratio(&a, 3));
    // about 22 of 2000 vertices are expected on such cycles
    assert!(tree >= ratio(97, 100), "tree fraction {tree}");
}

#[test]
fn bernoulli_is_deterministic_and_matches_target_on_small_cycles() {
    let base = build_profinite(Preset::Cyclic, 40_000, Labeling::Zeros(0), 0).unwrap();
    let table = default_word_table(1, Mode::Free, 5);
    let a = bernoulli_labeling(&base, &table, 5, 11).unwrap();
    assert_eq!(a, bernoulli_labeling(&base, &table, 5, 11).unwrap());
    assert_ne!(a, bernoulli_labeling(&base, &table, 5, 12).unwrap());
    let target = bernoulli_target(&base, 0, &table, 1).unwrap();
    let measured = stat_vector(&a, 1).unwrap();
    for (t, p) in target.iter() {
        let diff = sofic::scalar::rational_to_f64(&(measured.get(t) - p)).abs();
        assert!(diff < 0.02, "{t}: {diff}");
    }
}

#[test]
fn bernoulli_two_vertex_ball() {
    // one involution joining two vertices, labels read at the vertex and its partner
    let base = FiniteAction::with_zero_labels(Mode::Involution, 2, vec![vec![1, 0]], 0).unwrap();
    let table = vec![GeneratorWord::identity(), GeneratorWord::power(1, 1)];
    let t = bernoulli_target(&base, 0, &table, 1).unwrap();
    assert_eq!(t.len(), 4);
    assert!(t.iter().all(|(_, p)| *p == ratio(1, 4)));
    assert!(t.total().is_one());
}

#[test]
fn free_involution_targets() {
    let (s, p) = target_stats_free_involutions(2, 1).unwrap();
    assert_eq!(s.len(), 8);
    assert!(s.iter().all(|(t, w)| t.is_tree() && *w == ratio(1, 8)));
    assert!(p.iter().all(|(_, w)| *w == ratio(1, 16)));
    p.check_equations(&s).unwrap();
    let (s3, p3) = target_stats_free_involutions(3, 1).unwrap();
    assert_eq!(s3.len(), 16);
    p3.check_equations(&s3).unwrap();
}

#[test]
fn rounding_keeps_exact_targets() {
    let (s, p) = target_stats_free_involutions(2, 1).unwrap();
    let sol = rational_round_stats(&s, &p, &ratio(1, 1000)).unwrap();
    let (s2, p2) = sol.to_stats().unwrap();
    assert_eq!(s2, s);
    assert_eq!(p2.iter().collect::<Vec<_>>(), p.iter().collect::<Vec<_>>());
}

#[test]
fn rounding_irrational_single_type_pair() {
    let a = random_action(1, 30, 1, Mode::Involution, 1);
    let types: Vec<_> = stat_vector(&a, 0).unwrap().support().cloned().collect();
    assert_eq!(types.len(), 2);
    let x = std::f64::consts::FRAC_1_SQRT_2;
    let approx = |v: f64| Rational::from_float(v).unwrap();
    let singles = BTreeMap::from([(types[0].clone(), approx(x)), (types[1].clone(), approx(1.0 - x))]);
    let eps = ratio(1, 1000);
    // no generators: only the normalization constrains the weights
    let sol = rational_round(&singles, &BTreeMap::new(), 0, &eps).unwrap();
    let total: Rational = sol.w_alpha.values().sum();
    assert!(total.is_one());
    for (t, w) in &sol.w_alpha {
        assert!((w - &singles[t]).abs() <= eps);
    }
}

#[test]
fn rounding_measured_pair_statistics() {
    for seed in 0..4u64 {
        let a = random_action(seed, 300, 2, Mode::Involution, 1);
        let s = stat_vector(&a, 1).unwrap();
        let p = pair_stats(&a, 1).unwrap();
        // measured statistics already solve the system
        let sol = rational_round_stats(&s, &p, &ratio(1, 100)).unwrap();
        sol.check().unwrap();
        let rounded = sol.to_stats().unwrap().0;
        assert!(rounded.iter().eq(s.iter()));
    }
}

#[test]
fn treeable_build_realizes_solution() {
    let (s, p) = target_stats_free_involutions(2, 2).unwrap();
    let sol = rational_round_stats(&s, &p, &ratio(1, 1000)).unwrap();
    for seed in 0..3u64 {
        let m = build_treeable(&sol, 5000, 2, seed).unwrap();
        assert_eq!(m.scale % (2 * sol.common_denominator().to_string().parse::<u64>().unwrap()), 0);
        assert_eq!(m.action.n() as u64, m.scale);
        m.action.validate().unwrap();
        for (t, &size) in &m.class_sizes {
            assert_eq!(Rational::from_integer(size.into()), &sol.w_alpha[t] * Rational::from_integer(m.scale.into()));
        }
        for (k, &size) in &m.pair_sizes {
            assert_eq!(Rational::from_integer(size.into()), &sol.w_aib[k] * Rational::from_integer(m.scale.into()));
        }
        let mut checked = 0;
        for y in 0..m.action.n() {
            for q in 0..=2 {
                let code = neighborhood_code(&m.action, y, q).unwrap();
                if code.is_tree() {
                    assert_eq!(code, restrict_type(m.intended_type(y), q).unwrap());
                    checked += 1;
                }
            }
        }
        assert!(checked > m.action.n());
    }
}

#[test]
fn oe_constant_rule() {
    let base = build_profinite(Preset::Cyclic, 50, Labeling::Iid { k: 2, seed: 1 }, 0).unwrap();
    let rule = WordRule::constant(GeneratorWord::power(1, 1), GeneratorWord::power(1, -1));
    let (a, rep) = oe_add_generator(&base, &rule, &Rational::zero()).unwrap();
    assert!(rep.bad_ratio.is_zero());
    assert_eq!(a.generator(2), base.generator(1));
}

#[test]
fn oe_bit_rule_bad_set() {
    let rule = WordRule::parse("0 1 -1\n1 -1 1\n").unwrap();
    for seed in 0..20u64 {
        let base = build_profinite(Preset::Cyclic, 101, Labeling::Iid { k: 1, seed }, 0).unwrap();
        let (a, rep) = oe_add_generator(&base, &rule, &ratio(1, 4)).unwrap();
        a.validate().unwrap();
        let bit = |v: usize| base.label(v).bit(0);
        let bad = (0..101)
            .filter(|&g| {
                let img = if bit(g) { (g + 100) % 101 } else { (g + 1) % 101 };
                bit(img) != bit(g)
            })
            .count();
        assert_eq!(rep.bad_ratio, ratio(bad as i64, 101));
        // good vertices keep the rule's image
        for g in 0..101 {
            let img = if bit(g) { (g + 100) % 101 } else { (g + 1) % 101 };
            if bit(img) == bit(g) {
                assert_eq!(a.generator(2)[g] as usize, img);
            }
        }
    }
}
