//! Random involution models realizing an exact solution of the type
//! equations: vertex classes `Y_α`, split along each generator into
//! `Y_{αiβ}`, glued by random bijections and matchings.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{ToPrimitive, Zero};
use rand::seq::SliceRandom;

use crate::action::{FiniteAction, GeneratorWord, LabelWord, Letter, Mode};
use crate::error::{Error, Result};
use crate::nbhd::{NeighborhoodType, PairKey};
use crate::seed::stage_rng;

use super::round::RationalSolution;

/// A built model with its bookkeeping.
#[derive(Debug, Clone)]
pub struct TreeableModel {
    pub action: FiniteAction,
    /// The scale `N`: `|Y_α| = N·w_α`.
    pub scale: u64,
    /// Types in solution order.
    pub types: Vec<NeighborhoodType>,
    /// Index into `types` of the class each vertex was placed in.
    pub vertex_type: Vec<u32>,
    pub class_sizes: BTreeMap<NeighborhoodType, u64>,
    pub pair_sizes: BTreeMap<PairKey, u64>,
}

/// Whether `S_i` fixes the root of `α`.
fn fixes_root(alpha: &NeighborhoodType, i: u32) -> bool {
    alpha.radius() > 0 && alpha.class_of_word(&GeneratorWord::new(vec![Letter::new(i)])) == Some(0)
}

fn scaled(w: &crate::scalar::Rational, n: &BigInt) -> Result<u64> {
    let v = w * crate::scalar::Rational::from_integer(n.clone());
    if !v.is_integer() {
        return Err(Error::Numerical {
            msg: "class size is not integral".into(),
            partial: 0.0,
        });
    }
    v.to_integer()
        .to_u64()
        .ok_or_else(|| Error::Guard("class size out of range".into()))
}

/// Builds a model with `N` the least multiple of twice the common
/// denominator that is at least `n_hint`. Labels are the root labels of the
/// types, padded with zeros to `label_len` bits.
pub fn build_treeable(sol: &RationalSolution, n_hint: u64, label_len: usize, seed: u64) -> Result<TreeableModel> {
    sol.check().map_err(|e| Error::input(format!("solution violates the type equations: {e}")))?;
    let unit: BigInt = sol.common_denominator() * 2;
    let mut n: BigInt = BigInt::from(n_hint).div_ceil(&unit) * &unit;
    if n.is_zero() {
        n = unit.clone();
    }
    let scale = n
        .to_u64()
        .filter(|&s| s <= u32::MAX as u64)
        .ok_or_else(|| Error::Guard(format!("model size {n} too large")))?;

    let types: Vec<NeighborhoodType> = sol.w_alpha.keys().cloned().collect();
    let mut class_sizes = BTreeMap::new();
    let mut starts = Vec::with_capacity(types.len());
    let mut vertex_type = Vec::with_capacity(scale as usize);
    let mut labels = Vec::with_capacity(scale as usize);
    for (k, t) in types.iter().enumerate() {
        if (t.label_bits() as usize) > label_len {
            return Err(Error::input(format!(
                "label length {label_len} shorter than the types' {} bits",
                t.label_bits()
            )));
        }
        let size = scaled(&sol.w_alpha[t], &n)?;
        starts.push(vertex_type.len() as u32);
        let label = t.root_label().resized(label_len);
        vertex_type.extend(std::iter::repeat_n(k as u32, size as usize));
        labels.extend(std::iter::repeat_n(label, size as usize));
        class_sizes.insert(t.clone(), size);
    }
    let pair_sizes = sol
        .w_aib
        .iter()
        .map(|(k, w)| Ok((k.clone(), scaled(w, &n)?)))
        .collect::<Result<BTreeMap<_, _>>>()?;

    // (α, i) ↦ [(β, |Y_{αiβ}|)] with β in solution order
    let index: BTreeMap<&NeighborhoodType, usize> = types.iter().enumerate().map(|(k, t)| (t, k)).collect();
    let mut partners: BTreeMap<(usize, u32), Vec<(usize, u64)>> = BTreeMap::new();
    for ((a, i, b), &s) in &pair_sizes {
        if s > 0 {
            partners.entry((index[a], *i)).or_default().push((index[b], s));
        }
    }
    for list in partners.values_mut() {
        list.sort_unstable();
    }

    let mut gens = Vec::with_capacity(sol.gens as usize);
    for i in 1..=sol.gens {
        let mut rng = stage_rng(seed, &format!("treeable/{i}"));
        let mut g: Vec<u32> = (0..scale as u32).collect();
        // Y_{αiβ} as a slice of the shuffled Y_α
        let mut parts: BTreeMap<(usize, usize), Vec<u32>> = BTreeMap::new();
        for (k, t) in types.iter().enumerate() {
            let size = class_sizes[t] as u32;
            let mut block: Vec<u32> = (starts[k]..starts[k] + size).collect();
            let mine = partners.get(&(k, i)).map_or(&[][..], Vec::as_slice);
            if fixes_root(t, i) {
                if mine.iter().any(|&(l, _)| l != k) {
                    return Err(Error::input(format!("type {t} fixes its root under {i} but is paired with other types")));
                }
                continue;
            }
            block.shuffle(&mut rng);
            let mut at = 0usize;
            for &(l, s) in mine {
                parts.insert((k, l), block[at..at + s as usize].to_vec());
                at += s as usize;
            }
            debug_assert_eq!(at, block.len());
        }
        for (&(k, l), part) in &parts {
            if k < l {
                for (&x, &y) in part.iter().zip(&parts[&(l, k)]) {
                    g[x as usize] = y;
                    g[y as usize] = x;
                }
            } else if k == l {
                for xy in part.chunks_exact(2) {
                    g[xy[0] as usize] = xy[1];
                    g[xy[1] as usize] = xy[0];
                }
            }
        }
        gens.push(g);
    }
    let action = FiniteAction::new(Mode::Involution, gens, labels)?;
    Ok(TreeableModel {
        action,
        scale,
        types,
        vertex_type,
        class_sizes,
        pair_sizes,
    })
}

impl TreeableModel {
    /// The type each vertex was built to realize.
    pub fn intended_type(&self, v: usize) -> &NeighborhoodType {
        &self.types[self.vertex_type[v] as usize]
    }

    /// Label of the class a vertex belongs to, at full label length.
    pub fn label(&self, v: usize) -> &LabelWord {
        self.action.label(v)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::constructions::{rational_round_stats, target_stats_free_involutions};
    use crate::nbhd::{pair_stats, stat_vector};
    use crate::scalar::ratio;

    #[test]
    fn root_fixing_type_gives_identity() {
        // one vertex, S_1 fixing it
        let a = FiniteAction::with_zero_labels(Mode::Involution, 1, vec![vec![0]], 1).unwrap();
        let s = stat_vector(&a, 1).unwrap();
        let p = pair_stats(&a, 1).unwrap();
        let sol = rational_round_stats(&s, &p, &ratio(1, 10)).unwrap();
        let m = build_treeable(&sol, 10, 1, 0).unwrap();
        assert_eq!(m.scale, 10);
        assert!(m.action.generator(1).iter().enumerate().all(|(v, &w)| v == w as usize));
        assert!(stat_vector(&m.action, 1).unwrap().iter().eq(s.iter()));
    }

    #[test]
    fn bookkeeping_matches_solution() {
        let (s, p) = target_stats_free_involutions(1, 1).unwrap();
        let sol = rational_round_stats(&s, &p, &ratio(1, 1000)).unwrap();
        let m = build_treeable(&sol, 1000, 3, 7).unwrap();
        assert_eq!(m.scale, 1000);
        for (t, &size) in &m.class_sizes {
            assert_eq!(size * 4, 1000, "{t}");
        }
        // count realized pairs
        let g = m.action.generator(1);
        let mut seen: BTreeMap<(u32, u32), u64> = BTreeMap::new();
        for (x, &y) in g.iter().enumerate() {
            *seen.entry((m.vertex_type[x], m.vertex_type[y as usize])).or_default() += 1;
        }
        for ((a, _, b), &size) in &m.pair_sizes {
            let ka = m.types.iter().position(|t| t == a).unwrap() as u32;
            let kb = m.types.iter().position(|t| t == b).unwrap() as u32;
            assert_eq!(seen.get(&(ka, kb)).copied().unwrap_or(0), size);
        }
        assert_eq!(m.action.label_len(), 3);
    }
}
