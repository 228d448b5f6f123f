//! Bernoulli labels on a sofic approximation: one random bit `ω(g)` per
//! vertex, and vertex `g` is labeled by the bits `ω(θ(w_{γ_j}, g))`.

use std::collections::{BTreeMap, HashMap};

use rand::Rng;

use crate::action::{FiniteAction, GeneratorWord, LabelWord, Letter, Mode, WordEnumeration};
use crate::error::{Error, Result};
use crate::nbhd::{code_with, NeighborhoodType, StatVector, Walk};
use crate::scalar::{ratio, Rational};
use crate::seed::stage_rng;

/// Largest number of random bits [`bernoulli_target`] enumerates.
pub const BERNOULLI_MAX_CELLS: usize = 20;

/// The first `k` words of the length-lex enumeration of the free group (or
/// free product of involutions) on `d` generators.
pub fn default_word_table(d: u32, mode: Mode, k: usize) -> Vec<GeneratorWord> {
    let mut r = 0;
    loop {
        let e = WordEnumeration::new(d, mode, r);
        if e.ball_len() >= k || (r > 0 && e.count_upto(r) == e.count_upto(r - 1)) {
            return (0..k.min(e.ball_len())).map(|i| e.word(i)).collect();
        }
        r += 1;
    }
}

fn check_table(base: &FiniteAction, table: &[GeneratorWord], k: usize) -> Result<()> {
    if table.len() < k {
        return Err(Error::input(format!(
            "word table has {} entries, {k} needed",
            table.len()
        )));
    }
    table[..k].iter().try_for_each(|w| base.check_word(w))
}

pub fn bernoulli_labeling(
    base: &FiniteAction,
    word_table: &[GeneratorWord],
    k: usize,
    seed: u64,
) -> Result<FiniteAction> {
    check_table(base, word_table, k)?;
    let mut rng = stage_rng(seed, "bernoulli");
    let omega: Vec<bool> = (0..base.n()).map(|_| rng.random()).collect();
    let labels = (0..base.n())
        .map(|g| {
            LabelWord::new(
                word_table[..k]
                    .iter()
                    .map(|w| omega[base.apply_unchecked(w, g)])
                    .collect(),
            )
        })
        .collect();
    base.with_labels(labels)
}

/// The base action with labels computed from a partial assignment of `ω`.
struct Assigned<'a> {
    base: &'a FiniteAction,
    table: &'a [GeneratorWord],
    omega: &'a HashMap<usize, bool>,
    k: usize,
}

impl Walk for Assigned<'_> {
    fn gens(&self) -> u32 {
        self.base.d()
    }
    fn mode(&self) -> Mode {
        self.base.mode()
    }
    fn label_len(&self) -> usize {
        self.k
    }
    fn step(&self, v: usize, a: Letter) -> Option<usize> {
        Some(self.base.step(v, a))
    }
    fn label_prefix(&self, v: usize, bits: usize) -> u64 {
        self.table[..bits].iter().fold(0, |acc, w| {
            (acc << 1) | u64::from(self.omega[&self.base.apply_unchecked(w, v)])
        })
    }
}

/// Exact law of the labeled `r`-neighborhood type of `root` when `ω` is
/// uniform: every assignment of the bits that the type depends on is
/// enumerated. For vertex-transitive bases (cyclic, torus) this is the
/// limit of the empirical statistics.
pub fn bernoulli_target(
    base: &FiniteAction,
    root: usize,
    word_table: &[GeneratorWord],
    r: u32,
) -> Result<StatVector> {
    check_table(base, word_table, r as usize)?;
    if root >= base.n() {
        return Err(Error::input(format!("vertex {root} out of range")));
    }
    let e = WordEnumeration::new(base.d(), base.mode(), r);
    let mut ball = vec![0usize; e.ball_len()];
    for (i, w) in e.all().iter().take(e.ball_len()).enumerate() {
        ball[i] = match w.first {
            None => root,
            Some(a) => base.step(ball[w.rest], a),
        };
    }
    let mut cells: Vec<usize> = ball
        .iter()
        .flat_map(|&x| word_table[..r as usize].iter().map(move |w| base.apply_unchecked(w, x)))
        .collect();
    cells.sort_unstable();
    cells.dedup();
    if cells.len() > BERNOULLI_MAX_CELLS {
        return Err(Error::Guard(format!(
            "{} random bits exceed the enumeration limit {BERNOULLI_MAX_CELLS}",
            cells.len()
        )));
    }
    let mut counts: BTreeMap<NeighborhoodType, u64> = BTreeMap::new();
    let mut omega = HashMap::with_capacity(cells.len());
    for mask in 0u64..1 << cells.len() {
        for (j, &c) in cells.iter().enumerate() {
            omega.insert(c, mask >> j & 1 == 1);
        }
        let walk = Assigned {
            base,
            table: word_table,
            omega: &omega,
            k: r as usize,
        };
        let t = code_with(&walk, &e, root, r).expect("actions are total");
        *counts.entry(t).or_default() += 1;
    }
    let total = 1i64 << cells.len();
    let entries: BTreeMap<NeighborhoodType, Rational> = counts
        .into_iter()
        .map(|(t, c)| (t, ratio(c as i64, total)))
        .collect();
    StatVector::new(r, r, entries)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::constructions::{build_profinite, Labeling, Preset};

    #[test]
    fn power_table_unfolds_windows() {
        let base = build_profinite(Preset::Cyclic, 12, Labeling::Zeros(0), 0).unwrap();
        let table: Vec<_> = (0..4).map(|j| GeneratorWord::power(1, j)).collect();
        let a = bernoulli_labeling(&base, &table, 4, 3).unwrap();
        let single = bernoulli_labeling(&base, &table, 1, 3).unwrap();
        for v in 0..12 {
            for j in 0..4 {
                assert_eq!(a.label(v).bit(j), single.label((v + j) % 12).bit(0));
            }
        }
    }

    #[test]
    fn default_table_is_length_lex() {
        let t = default_word_table(1, Mode::Free, 5);
        let s: Vec<String> = t.iter().map(|w| w.to_string()).collect();
        assert_eq!(s, ["e", "1", "-1", "1,1", "-1,-1"]);
        assert_eq!(default_word_table(1, Mode::Involution, 5).len(), 2);
    }

    #[test]
    fn cyclic_target_is_uniform_over_windows() {
        let base = build_profinite(Preset::Cyclic, 50, Labeling::Zeros(0), 0).unwrap();
        let table = default_word_table(1, Mode::Free, 5);
        let t = bernoulli_target(&base, 0, &table, 2).unwrap();
        // labels (ω(x), ω(x+1)) for x in -2..=2 depend on six cells
        assert_eq!(t.len(), 64);
        assert!(t.iter().all(|(_, p)| *p == ratio(1, 64)));
        assert!(bernoulli_labeling(&base, &table, 6, 0).is_err());
    }
}
