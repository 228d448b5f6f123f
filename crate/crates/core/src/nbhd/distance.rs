//! The statistical distance `d_s` over an explicit type ordering.

use std::collections::{BTreeSet, HashMap};

use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::scalar::Rational;

use super::code::NeighborhoodType;
use super::stats::StatVector;

/// A fixed enumeration `α_1, α_2, …` of types. Position `i` (1-based) is
/// weighted by `2^{-i}` in [`statistical_distance`].
#[derive(Debug, Clone)]
pub struct TypeOrdering {
    types: Vec<NeighborhoodType>,
    index: HashMap<NeighborhoodType, usize>,
}

impl TypeOrdering {
    /// How [`TypeOrdering::from_supports`] orders types, for output metadata.
    pub const DESCRIPTION: &'static str =
        "union of supports sorted by radius, then generator count, mode, label length and canonical code";

    pub fn new(types: Vec<NeighborhoodType>) -> Result<Self> {
        let mut index = HashMap::with_capacity(types.len());
        for (i, t) in types.iter().enumerate() {
            if index.insert(t.clone(), i).is_some() {
                return Err(Error::input(format!("type {t} listed twice in ordering")));
            }
        }
        Ok(TypeOrdering { types, index })
    }

    /// Sorted union of the supports of all given vectors.
    pub fn from_supports<'a>(vectors: impl IntoIterator<Item = &'a StatVector>) -> Self {
        let set: BTreeSet<NeighborhoodType> = vectors
            .into_iter()
            .flat_map(|s| s.support().cloned())
            .collect();
        TypeOrdering::new(set.into_iter().collect()).expect("set has no duplicates")
    }

    pub fn types(&self) -> &[NeighborhoodType] {
        &self.types
    }

    /// 1-based position.
    pub fn position(&self, t: &NeighborhoodType) -> Option<usize> {
        self.index.get(t).map(|i| i + 1)
    }

    pub fn len(&self) -> usize {
        self.types.len()
    }

    pub fn is_empty(&self) -> bool {
        self.types.is_empty()
    }
}

fn lookup(family: &[StatVector], t: &NeighborhoodType) -> Rational {
    family
        .iter()
        .filter(|s| s.radius() == t.radius() && s.label_bits() == t.label_bits())
        .map(|s| s.get(t))
        .find(|p| !p.is_zero())
        .unwrap_or_else(Rational::zero)
}

/// `Σ_i |p_{α_i} − p'_{α_i}| / 2^i`. Each side is a family of vectors (for
/// example one per radius); a type absent from a family counts as 0. Fails
/// if some supported type is missing from the ordering.
pub fn statistical_distance(a: &[StatVector], b: &[StatVector], ordering: &TypeOrdering) -> Result<Rational> {
    for s in a.iter().chain(b) {
        if let Some(t) = s.support().find(|t| ordering.position(t).is_none()) {
            return Err(Error::input(format!("type {t} is not covered by the ordering")));
        }
    }
    let mut total = Rational::zero();
    let mut weight = Rational::one();
    let half = Rational::new(1.into(), 2.into());
    for t in ordering.types() {
        weight *= &half;
        let diff = lookup(a, t) - lookup(b, t);
        if !diff.is_zero() {
            total += diff.abs() * &weight;
        }
    }
    Ok(total)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::action::{FiniteAction, LabelWord, Mode};
    use crate::nbhd::stat_vector;
    use crate::scalar::ratio;

    fn constant(label: &str) -> StatVector {
        let a = FiniteAction::new(
            Mode::Free,
            vec![vec![0]],
            vec![LabelWord::parse(label).unwrap()],
        )
        .unwrap();
        stat_vector(&a, 1).unwrap()
    }

    #[test]
    fn positions_one_and_two() {
        let (s0, s1) = (constant("0"), constant("1"));
        let ord = TypeOrdering::from_supports([&s0, &s1]);
        let d = statistical_distance(&[s0.clone()], &[s1.clone()], &ord).unwrap();
        assert_eq!(d, ratio(3, 4));
        assert_eq!(statistical_distance(&[s0.clone()], &[s0.clone()], &ord).unwrap(), Rational::zero());
        let short = TypeOrdering::from_supports([&s0]);
        assert!(statistical_distance(&[s0], &[s1], &short).is_err());
    }
}
