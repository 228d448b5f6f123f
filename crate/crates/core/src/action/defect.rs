use num_bigint::BigInt;

use crate::error::Result;
use crate::scalar::Rational;

use super::finite::FiniteAction;
use super::word::GeneratorWord;

/// Worst-case multiplicativity and freeness defects of the map
/// `w ↦ φ(w)` induced by an action on a finite set of test words.
#[derive(Debug, Clone, PartialEq)]
pub struct SoficDefectReport {
    /// Word pairs `(e, f)` checked, relations included as `(R, 1)`.
    pub pairs: Vec<(GeneratorWord, GeneratorWord)>,
    /// `max 1 - #fix(φ(e)φ(f)φ(ef)⁻¹)/n`.
    pub eps_mult: Rational,
    /// `max #fix(φ(e))/n` over the non-identity test words.
    pub eps_free: Rational,
}

impl SoficDefectReport {
    pub fn eps_mult_f64(&self) -> f64 {
        crate::scalar::rational_to_f64(&self.eps_mult)
    }

    pub fn eps_free_f64(&self) -> f64 {
        crate::scalar::rational_to_f64(&self.eps_free)
    }
}

fn fixed_points(p: &[u32]) -> usize {
    p.iter().enumerate().filter(|&(v, &w)| v == w as usize).count()
}

/// Measures how far the action is from a homomorphism of the group that the
/// words are taken in.
///
/// For a pair `(e, f)` the product `ef` is represented by the reduced
/// concatenation. Each relation `R` (a word trivial in the group) is tested
/// as the pair `(R, 1)` whose product is represented by the empty word, which
/// gives the defect `1 - #fix(φ(R))/n`. Freeness is tested on every
/// non-identity word among the pair components and products.
pub fn sofic_defect(
    action: &FiniteAction,
    pairs: &[(GeneratorWord, GeneratorWord)],
    relations: &[GeneratorWord],
) -> Result<SoficDefectReport> {
    let n = action.n().max(1);
    let mode = action.mode();
    let mut worst_mult = 0usize;
    let mut worst_fix = 0usize;
    let mut tested = Vec::new();

    let mut free_words: Vec<GeneratorWord> = Vec::new();
    for (e, f) in pairs {
        let ef = e.concat(f).reduced(mode);
        let pe = action.word_permutation(e)?;
        let pf = action.word_permutation(f)?;
        let pef = action.word_permutation(&ef)?;
        // #fix(φ(e)φ(f)φ(ef)⁻¹) = #{y : φ(e)φ(f)y = φ(ef)y}
        let agree = (0..action.n())
            .filter(|&y| pe[pf[y] as usize] == pef[y])
            .count();
        worst_mult = worst_mult.max(action.n() - agree);
        tested.push((e.clone(), f.clone()));
        for w in [e.reduced(mode), f.reduced(mode), ef] {
            if !w.is_empty() && !free_words.contains(&w) {
                free_words.push(w);
            }
        }
    }
    for r in relations {
        let pr = action.word_permutation(r)?;
        worst_mult = worst_mult.max(action.n() - fixed_points(&pr));
        tested.push((r.clone(), GeneratorWord::identity()));
    }
    for w in &free_words {
        worst_fix = worst_fix.max(fixed_points(&action.word_permutation(w)?));
    }
    let frac = |k: usize| Rational::new(BigInt::from(k), BigInt::from(n));
    Ok(SoficDefectReport {
        pairs: tested,
        eps_mult: frac(worst_mult),
        eps_free: frac(worst_fix),
    })
}

/// Reduced words of length `1..=max_len` over the action's generators.
pub fn nontrivial_words(action: &FiniteAction, max_len: u32) -> Vec<GeneratorWord> {
    let e = super::word::WordEnumeration::new(action.d(), action.mode(), max_len);
    (1..e.count_upto(max_len)).map(|i| e.word(i)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::action::Mode;
    use num_traits::{One, Zero};

    fn cycle(n: usize) -> FiniteAction {
        let g = (0..n as u32).map(|v| (v + 1) % n as u32).collect();
        FiniteAction::with_zero_labels(Mode::Free, n, vec![g], 0).unwrap()
    }

    #[test]
    fn quotient_is_multiplicative() {
        let c = cycle(7);
        let words = nontrivial_words(&c, 3);
        let pairs: Vec<_> = words
            .iter()
            .flat_map(|e| words.iter().map(move |f| (e.clone(), f.clone())))
            .collect();
        let rep = sofic_defect(&c, &pairs, &[]).unwrap();
        assert!(rep.eps_mult.is_zero());
        // words of length ≤ 3 are nontrivial in Z/7
        assert!(rep.eps_free.is_zero());
        // γ1^7 is trivial in Z/7 but not in Z
        let rep = sofic_defect(&c, &[(GeneratorWord::power(1, 7), GeneratorWord::identity())], &[]).unwrap();
        assert!(rep.eps_free.is_one());
    }

    #[test]
    fn identity_action_is_not_free() {
        let a = FiniteAction::with_zero_labels(Mode::Free, 4, vec![vec![0, 1, 2, 3]], 0).unwrap();
        let g = GeneratorWord::power(1, 1);
        let rep = sofic_defect(&a, &[(g.clone(), g)], &[]).unwrap();
        assert!(rep.eps_free.is_one());
        assert!(rep.eps_mult.is_zero());
    }

    #[test]
    fn broken_relation_shows_up() {
        // two non-commuting permutations with the commutator declared trivial
        let a = FiniteAction::with_zero_labels(Mode::Free, 3, vec![vec![1, 2, 0], vec![1, 0, 2]], 0).unwrap();
        let comm = GeneratorWord::from_signed(&[1, 2, -1, -2]).unwrap();
        let rep = sofic_defect(&a, &[], &[comm]).unwrap();
        assert_eq!(rep.eps_mult, Rational::one());
    }
}
