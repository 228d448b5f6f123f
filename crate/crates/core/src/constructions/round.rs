//! Rounding approximate type frequencies to an exact rational solution of
//!
//! 1. `Σ_α w_α = 1`,
//! 2. `Σ_β w_{αiβ} = w_α` for every `α` and `i`,
//! 3. `w_{αiβ} = w_{βiα}`,
//!
//! keeping every variable close to its target and every zero target at 0.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::linalg::solve_affine;
use crate::nbhd::{NeighborhoodType, PairKey, PairStatVector, StatVector};
use crate::scalar::Rational;

/// Finest rounding grid tried, as a power of two.
const MAX_GRID_BITS: u32 = 96;

/// An exact solution of the type equations.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RationalSolution {
    pub radius: u32,
    pub gens: u32,
    pub w_alpha: BTreeMap<NeighborhoodType, Rational>,
    pub w_aib: BTreeMap<PairKey, Rational>,
}

impl RationalSolution {
    /// The solution as statistics; fails unless the type equations hold
    /// exactly and all values are nonnegative.
    pub fn to_stats(&self) -> Result<(StatVector, PairStatVector)> {
        let label_bits = self.w_alpha.keys().next().map_or(0, NeighborhoodType::label_bits);
        if self.w_aib.values().any(|v| v.is_negative()) {
            return Err(Error::Feasibility("negative pair weight".into()));
        }
        let singles = StatVector::new(self.radius, label_bits, self.w_alpha.clone())
            .map_err(|e| Error::Feasibility(e.to_string()))?;
        let pairs = PairStatVector::new(self.radius, self.gens, self.w_aib.clone());
        pairs.check_equations(&singles)?;
        Ok((singles, pairs))
    }

    pub fn check(&self) -> Result<()> {
        self.to_stats().map(|_| ())
    }

    /// Least common multiple of all denominators.
    pub fn common_denominator(&self) -> BigInt {
        self.w_alpha
            .values()
            .chain(self.w_aib.values())
            .fold(BigInt::one(), |l, v| num_integer::Integer::lcm(&l, v.denom()))
    }
}

fn pair_var((a, i, b): &PairKey) -> PairKey {
    if a <= b {
        (a.clone(), *i, b.clone())
    } else {
        (b.clone(), *i, a.clone())
    }
}

/// See the module documentation. `singles` and `pairs` may violate the
/// equations by a small residue; entries that are zero or absent stay 0.
pub fn rational_round(
    singles: &BTreeMap<NeighborhoodType, Rational>,
    pairs: &BTreeMap<PairKey, Rational>,
    gens: u32,
    eps: &Rational,
) -> Result<RationalSolution> {
    if !eps.is_positive() {
        return Err(Error::input("eps must be positive"));
    }
    let radius = singles.keys().next().map_or(0, NeighborhoodType::radius);
    let alphas: Vec<&NeighborhoodType> = singles.iter().filter(|(_, p)| p.is_positive()).map(|(t, _)| t).collect();
    let alpha_index: BTreeMap<&NeighborhoodType, usize> = alphas.iter().enumerate().map(|(k, t)| (*t, k)).collect();

    // One variable per unordered pair {α, β} and generator i.
    let mut pair_vars: BTreeMap<PairKey, usize> = BTreeMap::new();
    let mut pair_targets: Vec<Vec<Rational>> = Vec::new();
    for (key, p) in pairs {
        if !p.is_positive() {
            continue;
        }
        let (a, i, b) = key;
        if *i == 0 || *i > gens {
            return Err(Error::input(format!("generator {i} out of range 1..={gens}")));
        }
        if !alpha_index.contains_key(a) || !alpha_index.contains_key(b) {
            return Err(Error::input(format!("pair ({a}, {i}, {b}) involves a type of zero weight")));
        }
        let v = pair_var(key);
        let next = alphas.len() + pair_vars.len();
        let idx = *pair_vars.entry(v).or_insert(next);
        if idx == pair_targets.len() + alphas.len() {
            pair_targets.push(Vec::new());
        }
        pair_targets[idx - alphas.len()].push(p.clone());
    }
    let cols = alphas.len() + pair_vars.len();
    let target: Vec<Rational> = alphas
        .iter()
        .map(|t| singles[*t].clone())
        .chain(pair_targets.iter().map(|ps| {
            // average of the two orientations
            ps.iter().sum::<Rational>() / Rational::from_integer(BigInt::from(ps.len()))
        }))
        .collect();

    // rows as sparse (column, coefficient) lists: the normalization, then
    // for each α and i the balance Σ_β w_{αiβ} − w_α = 0
    let one = Rational::one();
    let mut rows: Vec<Vec<(usize, Rational)>> = vec![(0..alphas.len()).map(|k| (k, one.clone())).collect()];
    let mut rhs: Vec<Rational> = vec![one.clone()];
    let balance = |k: usize, i: u32| 1 + k * gens as usize + (i as usize - 1);
    for k in 0..alphas.len() {
        for _ in 1..=gens {
            rows.push(vec![(k, -one.clone())]);
            rhs.push(Rational::zero());
        }
    }
    // α–α variables count once, α–β ones appear in both rows
    for ((x, j, y), &idx) in &pair_vars {
        rows[balance(alpha_index[x], *j)].push((idx, one.clone()));
        if x != y {
            rows[balance(alpha_index[y], *j)].push((idx, one.clone()));
        }
    }

    let assemble = |x: &[Rational]| {
        let w_alpha = alphas.iter().zip(x).map(|(t, v)| ((*t).clone(), v.clone())).collect();
        let mut w_aib = BTreeMap::new();
        for ((a, i, b), &idx) in &pair_vars {
            w_aib.insert((a.clone(), *i, b.clone()), x[idx].clone());
            w_aib.insert((b.clone(), *i, a.clone()), x[idx].clone());
        }
        RationalSolution {
            radius,
            gens,
            w_alpha,
            w_aib,
        }
    };

    let satisfies = |x: &[Rational]| {
        rows.iter().zip(&rhs).all(|(row, b)| {
            row.iter().fold(Rational::zero(), |acc, (c, v)| acc + v * &x[*c]) == *b
        })
    };
    let orientations_agree = pairs.iter().filter(|(_, p)| p.is_positive()).all(|((a, i, b), p)| {
        pairs.get(&(b.clone(), *i, a.clone())) == Some(p)
    });
    if orientations_agree && satisfies(&target) {
        return Ok(assemble(&target));
    }

    let dense: Vec<Vec<Rational>> = rows
        .iter()
        .map(|row| {
            let mut d = vec![Rational::zero(); cols];
            for (c, v) in row {
                d[*c] += v;
            }
            d
        })
        .collect();
    let sol = solve_affine(&dense, &rhs, cols)
        .ok_or_else(|| Error::Feasibility("the type equations have no solution on this support".into()))?;
    for bits in 1..=MAX_GRID_BITS {
        let grid = Rational::from_integer(BigInt::one() << bits);
        let mut x = sol.particular.clone();
        for (f, b) in sol.free.iter().zip(&sol.basis) {
            let t = (&target[*f] * &grid).round() / &grid;
            for (xj, bj) in x.iter_mut().zip(b) {
                if !bj.is_zero() {
                    *xj += &t * bj;
                }
            }
        }
        let close = x.iter().zip(&target).all(|(v, t)| (v - t).abs() <= *eps);
        if close && x.iter().all(|v| !v.is_negative()) {
            return Ok(assemble(&x));
        }
    }
    Err(Error::Feasibility(format!(
        "no nonnegative solution within {eps} of the targets"
    )))
}

/// [`rational_round`] on statistics that may already be exact.
pub fn rational_round_stats(singles: &StatVector, pairs: &PairStatVector, eps: &Rational) -> Result<RationalSolution> {
    let s = singles.iter().map(|(t, p)| (t.clone(), p.clone())).collect();
    let p = pairs.iter().map(|(k, v)| (k.clone(), v.clone())).collect();
    rational_round(&s, &p, pairs.gens(), eps)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::action::Mode;
    use crate::constructions::target_stats_free_involutions;
    use crate::scalar::ratio;

    fn ty(label: u64) -> NeighborhoodType {
        NeighborhoodType::tree(0, Mode::Involution, 0, 1, vec![label]).clone()
    }

    #[test]
    fn exact_targets_unchanged() {
        let (s, p) = target_stats_free_involutions(2, 1).unwrap();
        let sol = rational_round_stats(&s, &p, &ratio(1, 1000)).unwrap();
        let (s2, p2) = sol.to_stats().unwrap();
        assert_eq!(s2, s);
        assert_eq!(p2.iter().collect::<Vec<_>>(), p.iter().collect::<Vec<_>>());
    }

    #[test]
    fn irrational_pair_sums_to_one() {
        let sqrt_half = Rational::from_float(std::f64::consts::FRAC_1_SQRT_2).unwrap();
        let singles = BTreeMap::from([(ty(0), sqrt_half.clone()), (ty(1), Rational::one() - &sqrt_half + ratio(1, 1 << 20))]);
        let eps = ratio(1, 1000);
        let sol = rational_round(&singles, &BTreeMap::new(), 0, &eps).unwrap();
        let total: Rational = sol.w_alpha.values().sum();
        assert_eq!(total, Rational::one());
        for (t, v) in &sol.w_alpha {
            assert!((v - &singles[t]).abs() <= eps);
        }
    }

    #[test]
    fn perturbed_targets_round_with_zeros_kept() {
        let (s, p) = target_stats_free_involutions(2, 1).unwrap();
        let bump = ratio(1, 100_000);
        let mut singles: BTreeMap<_, _> = s.iter().map(|(t, v)| (t.clone(), v.clone())).collect();
        let first = singles.keys().next().unwrap().clone();
        *singles.get_mut(&first).unwrap() += &bump;
        let mut pairs: BTreeMap<_, _> = p.iter().map(|(k, v)| (k.clone(), v.clone())).collect();
        let key = pairs.keys().next().unwrap().clone();
        let extra = singles
            .keys()
            .map(|b| (first.clone(), 1, b.clone()))
            .find(|k| !pairs.contains_key(k))
            .unwrap();
        pairs.insert(extra.clone(), Rational::zero());
        *pairs.get_mut(&key).unwrap() -= &bump;
        let sol = rational_round(&singles, &pairs, 2, &ratio(1, 1000)).unwrap();
        sol.check().unwrap();
        assert!(sol.w_aib.get(&extra).is_none_or(|v| v.is_zero()));
        assert!(sol.common_denominator() > BigInt::one());
    }
}
