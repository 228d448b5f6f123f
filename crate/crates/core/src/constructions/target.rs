//! Exact statistics of the free product of `d` copies of `Z/2` acting on
//! itself, with i.i.d. uniform label bits.

use std::collections::BTreeMap;

use crate::action::{GeneratorWord, Letter, Mode, WordEnumeration};
use crate::error::{Error, Result};
use crate::nbhd::{NeighborhoodType, PairKey, PairStatVector, StatVector};
use crate::scalar::Rational;
use num_traits::Zero;

/// Largest number of independent label bits enumerated per pair.
pub const TARGET_MAX_BITS: usize = 20;

fn power_of_half(bits: usize) -> Rational {
    Rational::new(1.into(), num_bigint::BigInt::from(1) << bits)
}

/// Splits `mask` into `count` labels of `bits` bits; label `j` is read from
/// bits `j·bits ..`.
fn labels_from(mask: u64, count: usize, bits: u32) -> Vec<u64> {
    let m = (1u64 << bits) - 1;
    (0..count).map(|j| (mask >> (j as u32 * bits)) & m).collect()
}

/// `p_α = 2^{-r|W_r|}` for every labeling of the Cayley ball (the ball is a
/// tree), and `p_{αiβ} = 2^{-r|W_r ∪ W_r s_i|}` for consistent pairs.
pub fn target_stats_free_involutions(d: u32, r: u32) -> Result<(StatVector, PairStatVector)> {
    if d == 0 {
        return Err(Error::input("at least one involution is needed"));
    }
    let e = WordEnumeration::new(d, Mode::Involution, r);
    let ball = e.ball_len();

    // For each i: the cells W_r ∪ W_r·s_i, and the cell of w·s_i per w ∈ W_r.
    let layouts: Vec<(usize, Vec<usize>)> = (1..=d)
        .map(|i| {
            let s = GeneratorWord::new(vec![Letter::new(i)]);
            let mut cells: Vec<usize> = (0..ball).collect();
            let shifted = (0..ball)
                .map(|w| {
                    let idx = e
                        .index_of(&e.word(w).concat(&s).reduced(Mode::Involution))
                        .expect("length at most r + 1");
                    cells.iter().position(|&c| c == idx).unwrap_or_else(|| {
                        cells.push(idx);
                        cells.len() - 1
                    })
                })
                .collect();
            (cells.len(), shifted)
        })
        .collect();
    let widest = layouts.iter().map(|(c, _)| *c).max().unwrap_or(ball);
    if r as usize * widest > TARGET_MAX_BITS {
        return Err(Error::Guard(format!(
            "d = {d}, r = {r} needs {} label bits, limit {TARGET_MAX_BITS}",
            r as usize * widest
        )));
    }
    let tree = |labels: Vec<u64>| NeighborhoodType::tree(d, Mode::Involution, r, r, labels);

    let mut singles = BTreeMap::new();
    let p = power_of_half(r as usize * ball);
    for mask in 0u64..1 << (r as usize * ball) {
        singles.insert(tree(labels_from(mask, ball, r)), p.clone());
    }

    let mut pairs: BTreeMap<PairKey, Rational> = BTreeMap::new();
    for (i, (cells, shifted)) in (1..=d).zip(&layouts) {
        let bits = r as usize * cells;
        let p = power_of_half(bits);
        for mask in 0u64..1 << bits {
            let all = labels_from(mask, *cells, r);
            let alpha = tree(all[..ball].to_vec());
            let beta = tree(shifted.iter().map(|&c| all[c]).collect());
            *pairs.entry((alpha, i, beta)).or_insert_with(Rational::zero) += &p;
        }
    }
    let singles = StatVector::new(r, r, singles)?;
    Ok((singles, PairStatVector::new(r, d, pairs)))
}
