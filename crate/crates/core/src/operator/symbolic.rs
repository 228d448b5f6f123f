//! Operations on specs themselves, traces computed from type statistics, and
//! the gap between operating on specs and operating on their instances.

use std::collections::{BTreeSet, HashMap};
use std::sync::Arc;

use num_traits::Zero;

use crate::action::{FiniteAction, GeneratorWord, Mode, WordEnumeration};
use crate::error::{Error, Result};
use crate::nbhd::{code_with, restrict_type, vertex_types, BallModel, NeighborhoodType, StatVector, Walk};
use crate::scalar::{FieldScalar, Rational, Scalar};

use super::block;
use super::spec::{FiniteTypeOperatorSpec, SelectorIndex, SpecEntry, TypeSelector};

/// A set of types of one radius, standing for the neighborhoods of the
/// limit object. Products and adjoints of type-dependent specs are
/// expressed over it.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TypeUniverse {
    radius: u32,
    types: BTreeSet<NeighborhoodType>,
}

impl TypeUniverse {
    pub fn new(radius: u32, types: impl IntoIterator<Item = NeighborhoodType>) -> Result<Self> {
        let types: BTreeSet<_> = types.into_iter().collect();
        if let Some(t) = types.iter().find(|t| t.radius() != radius || t.label_bits() != radius) {
            return Err(Error::input(format!("type {t} is not a radius {radius} labeled type")));
        }
        Ok(TypeUniverse { radius, types })
    }

    /// The support of a statistics vector.
    pub fn from_stats(s: &StatVector) -> Result<Self> {
        Self::new(s.radius(), s.support().cloned())
    }

    pub fn radius(&self) -> u32 {
        self.radius
    }

    pub fn contains(&self, t: &NeighborhoodType) -> bool {
        self.types.contains(t)
    }

    pub fn len(&self) -> usize {
        self.types.len()
    }

    pub fn is_empty(&self) -> bool {
        self.types.is_empty()
    }

    fn at_least(&self, r: u32) -> Result<&Self> {
        if self.radius < r {
            return Err(Error::input(format!(
                "type universe of radius {} too small, {r} needed",
                self.radius
            )));
        }
        Ok(self)
    }
}

/// The radius-`q` type of the vertex `θ(u, root)` inside `beta`, if its
/// ball fits.
pub fn recenter(beta: &NeighborhoodType, u: &GeneratorWord, q: u32) -> Option<NeighborhoodType> {
    let model = BallModel::new(beta);
    let c = walk_word(&model, &u.reduced(beta.mode()), 0)?;
    if model.dist(c) + q > beta.radius() {
        return None;
    }
    code_with(&model, &WordEnumeration::new(beta.gens(), beta.mode(), q), c, q)
}

fn walk_word<W: Walk>(w: &W, word: &GeneratorWord, from: usize) -> Option<usize> {
    word.letters().iter().rev().try_fold(from, |x, &a| w.step(x, a))
}

fn selects(sel: &TypeSelector, beta: &NeighborhoodType, shift: &GeneratorWord) -> bool {
    match sel {
        TypeSelector::Any => true,
        TypeSelector::Exact(t) => {
            if shift.is_empty() {
                restrict_type(beta, t.radius()).is_ok_and(|b| &b == t)
            } else {
                recenter(beta, shift, t.radius()).as_ref() == Some(t)
            }
        }
    }
}

/// The spec of `KL`: entry pairs compose to the word `w_K·w_L` and block
/// `B_K·B_L`. When `K`'s entry depends on the type of the intermediate
/// vertex, the condition is re-expressed through the universe types at
/// radius `r_K + r_L`.
pub fn spec_product<T: Scalar>(
    k: &FiniteTypeOperatorSpec<T>,
    l: &FiniteTypeOperatorSpec<T>,
    universe: Option<&TypeUniverse>,
) -> Result<FiniteTypeOperatorSpec<T>> {
    if k.dim() != l.dim() {
        return Err(Error::input("block sizes differ"));
    }
    let radius = k.radius() + l.radius();
    let dim = k.dim();
    let mut entries = Vec::new();
    for ek in k.entries() {
        for el in l.entries() {
            let word = ek.word.concat(&el.word);
            let blk = block::mul(&ek.block, &el.block, dim);
            if block::is_zero(&blk) {
                continue;
            }
            match &ek.selector {
                TypeSelector::Any => entries.push(SpecEntry {
                    selector: el.selector.clone(),
                    word,
                    block: blk,
                }),
                TypeSelector::Exact(_) => {
                    let u = universe
                        .ok_or_else(|| Error::input("type-dependent product needs a type universe"))?
                        .at_least(radius)?;
                    for beta in &u.types {
                        let beta = restrict_type(beta, radius)?;
                        if selects(&el.selector, &beta, &GeneratorWord::identity())
                            && selects(&ek.selector, &beta, &el.word)
                        {
                            entries.push(SpecEntry {
                                selector: TypeSelector::Exact(beta),
                                word: word.clone(),
                                block: blk.clone(),
                            });
                        }
                    }
                }
            }
        }
    }
    FiniteTypeOperatorSpec::new(radius, dim, entries)
}

/// The spec of `K*`: `(S, w, B) ↦ (S', w⁻¹, B*)`, where `S'` selects the
/// vertices `p` with `w⁻¹·p` in `S`.
pub fn spec_adjoint<T: Scalar>(
    k: &FiniteTypeOperatorSpec<T>,
    universe: Option<&TypeUniverse>,
) -> Result<FiniteTypeOperatorSpec<T>> {
    let dim = k.dim();
    let mut radius = k.radius();
    let mut entries = Vec::new();
    for e in k.entries() {
        let inv = e.word.inverse(Mode::Free);
        let blk = block::adjoint(&e.block, dim);
        match &e.selector {
            TypeSelector::Any => entries.push(SpecEntry {
                selector: TypeSelector::Any,
                word: inv,
                block: blk,
            }),
            TypeSelector::Exact(_) => {
                let need = 2 * k.radius();
                radius = need;
                let u = universe
                    .ok_or_else(|| Error::input("type-dependent adjoint needs a type universe"))?
                    .at_least(need)?;
                for beta in &u.types {
                    let beta = restrict_type(beta, need)?;
                    if selects(&e.selector, &beta, &inv) {
                        entries.push(SpecEntry {
                            selector: TypeSelector::Exact(beta),
                            word: inv.clone(),
                            block: blk.clone(),
                        });
                    }
                }
            }
        }
    }
    FiniteTypeOperatorSpec::new(radius, dim, entries)
}

/// `Σ_α p_α·Tr((K^i)(root, root))/d_block`, the root value computed on
/// the finite ball `α` itself. Needs statistics of radius at least `i·r`.
pub fn analytic_trace<T: Scalar>(
    spec: &FiniteTypeOperatorSpec<T>,
    i: u32,
    targets: &StatVector,
) -> Result<T::Field> {
    if i == 0 {
        return Err(Error::input("power must be at least 1"));
    }
    let need = i * spec.radius();
    if targets.radius() < need {
        return Err(Error::input(format!(
            "statistics of radius {} given, {need} needed",
            targets.radius()
        )));
    }
    let sel_radius = spec.selector_radius();
    if let Some(rs) = sel_radius {
        if targets.label_bits() < rs {
            return Err(Error::input("statistics carry fewer label bits than the selectors"));
        }
    }
    let index = SelectorIndex::new(spec);
    let dim = spec.dim();
    let mut total = T::Field::zero();
    for (alpha, p) in targets.iter() {
        let model = BallModel::new(alpha);
        let words: Vec<GeneratorWord> = spec.entries().iter().map(|e| e.word.reduced(alpha.mode())).collect();
        let e_sel = sel_radius.map(|rs| WordEnumeration::new(alpha.gens(), alpha.mode(), rs));
        let mut col: HashMap<usize, Vec<T>> = HashMap::from([(0, block::identity(dim))]);
        for _ in 0..i {
            let mut next: HashMap<usize, Vec<T>> = HashMap::new();
            for (&x, v) in &col {
                let ty = match (&e_sel, sel_radius) {
                    (Some(e), Some(rs)) => Some(code_with(&model, e, x, rs).ok_or_else(|| {
                        Error::input("selector ball leaves the statistics radius")
                    })?),
                    _ => None,
                };
                for k in index.matching(ty.as_ref()) {
                    let y = walk_word(&model, &words[k], x)
                        .ok_or_else(|| Error::input("word leaves the statistics radius"))?;
                    if words[k].max_gen() > alpha.gens() {
                        return Err(Error::input("spec uses more generators than the types"));
                    }
                    let acc = next.entry(y).or_insert_with(|| block::zero(dim));
                    block::mul_add_into(acc, &spec.entries()[k].block, v, dim);
                }
            }
            col = next;
        }
        if let Some(root) = col.get(&0) {
            let tr = block::trace(root, dim).into_field() / T::Field::from_count(dim);
            total = total + T::Field::from_rational(p) * tr;
        }
    }
    Ok(total)
}

/// Which operation [`approximation_defect`] compares.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SpecOp {
    Add,
    Mul,
    Adjoint,
}

#[derive(Debug, Clone, PartialEq)]
pub struct DefectReport {
    /// `‖lhs − rhs‖` in the normalized Hilbert–Schmidt norm.
    pub defect: f64,
    /// Fraction of vertices `p` where column `p` of the difference is nonzero.
    pub support_ratio: Rational,
    /// Fraction of vertices whose type is outside the universe.
    pub deviant_ratio: Rational,
    /// Whether every column of the difference sits at a deviant vertex.
    pub support_within_deviant: bool,
}

/// Compares operating on instances (`K_n + L_n`, `K_n L_n`, `K_n*`) with
/// instantiating the symbolic result. `l` is ignored for adjoints.
pub fn approximation_defect<T: Scalar>(
    k: &FiniteTypeOperatorSpec<T>,
    l: &FiniteTypeOperatorSpec<T>,
    action: &Arc<FiniteAction>,
    op: SpecOp,
    universe: Option<&TypeUniverse>,
) -> Result<DefectReport> {
    let kn = k.instantiate(action)?;
    let (lhs, spec) = match op {
        SpecOp::Add => (kn.add(&l.instantiate(action)?)?, k.sum(l)?),
        SpecOp::Mul => (kn.mul(&l.instantiate(action)?)?, spec_product(k, l, universe)?),
        SpecOp::Adjoint => (kn.adjoint(), spec_adjoint(k, universe)?),
    };
    let rhs = spec.instantiate(action)?;
    let diff = lhs.sub(&rhs)?;
    let n = action.n();
    let mut in_support = vec![false; n];
    for u in 0..n {
        for (v, _) in diff.row(u) {
            in_support[*v as usize] = true;
        }
    }
    let deviant: Vec<bool> = match universe {
        Some(u) => vertex_types(action, u.radius(), u.radius())?
            .iter()
            .map(|t| !u.contains(t))
            .collect(),
        None => vec![false; n],
    };
    let frac = |c: usize| Rational::new(c.into(), n.max(1).into());
    Ok(DefectReport {
        defect: diff.hs_norm(),
        support_ratio: frac(in_support.iter().filter(|&&s| s).count()),
        deviant_ratio: frac(deviant.iter().filter(|&&s| s).count()),
        support_within_deviant: in_support.iter().zip(&deviant).all(|(&s, &d)| !s || d),
    })
}
