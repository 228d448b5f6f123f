//! Finite-type operators: kernels whose value on `(w·x, x)` depends only on
//! the neighborhood type of `x` and the word `w`.

use std::collections::{BTreeMap, HashMap};
use std::fmt::Write as _;
use std::sync::Arc;

use crate::action::{FiniteAction, GeneratorWord};
use crate::error::{Error, Result};
use crate::nbhd::{restrict_type, vertex_types, NeighborhoodType};
use crate::scalar::{Scalar, ScalarText};

use super::block;
use super::kernel::BlockKernel;

/// Which vertices an entry applies to.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum TypeSelector {
    /// Every vertex.
    Any,
    /// Vertices whose labeled neighborhood of the type's radius is this type.
    Exact(NeighborhoodType),
}

impl TypeSelector {
    fn radius(&self) -> u32 {
        match self {
            TypeSelector::Any => 0,
            TypeSelector::Exact(t) => t.radius(),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SpecEntry<T> {
    pub selector: TypeSelector,
    pub word: GeneratorWord,
    pub block: Vec<T>,
}

/// A table `(type, word) ↦ block`. Instantiated on an action, vertex `p`
/// contributes `block` at `K(w·p, p)` for every matching entry; entries
/// reaching the same position add up.
#[derive(Debug, Clone, PartialEq)]
pub struct FiniteTypeOperatorSpec<T> {
    radius: u32,
    dim: usize,
    entries: Vec<SpecEntry<T>>,
}

impl<T: Scalar> FiniteTypeOperatorSpec<T> {
    pub fn new(radius: u32, dim: usize, entries: Vec<SpecEntry<T>>) -> Result<Self> {
        if dim == 0 {
            return Err(Error::input("block dimension must be positive"));
        }
        for e in &entries {
            if e.block.len() != dim * dim {
                return Err(Error::input(format!(
                    "entry for word {} has {} values, expected {}",
                    e.word,
                    e.block.len(),
                    dim * dim
                )));
            }
            if e.word.len() > radius as usize {
                return Err(Error::input(format!("word {} longer than radius {radius}", e.word)));
            }
            if e.selector.radius() > radius {
                return Err(Error::input(format!("selector type radius exceeds spec radius {radius}")));
            }
        }
        Ok(FiniteTypeOperatorSpec { radius, dim, entries })
    }

    pub fn identity(dim: usize) -> Self {
        Self::new(
            0,
            dim,
            vec![SpecEntry {
                selector: TypeSelector::Any,
                word: GeneratorWord::identity(),
                block: block::identity(dim),
            }],
        )
        .expect("valid")
    }

    /// Type-independent `Σ c_w·w` with scalar blocks; the radius is the
    /// longest word.
    pub fn word_sum(terms: Vec<(GeneratorWord, T)>) -> Self {
        let radius = terms.iter().map(|(w, _)| w.len() as u32).max().unwrap_or(0);
        let entries = terms
            .into_iter()
            .map(|(word, c)| SpecEntry {
                selector: TypeSelector::Any,
                word,
                block: vec![c],
            })
            .collect();
        Self::new(radius, 1, entries).expect("valid")
    }

    pub fn radius(&self) -> u32 {
        self.radius
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn entries(&self) -> &[SpecEntry<T>] {
        &self.entries
    }

    /// Whether every entry ignores vertex types.
    pub fn is_type_independent(&self) -> bool {
        self.entries.iter().all(|e| e.selector == TypeSelector::Any)
    }

    /// Largest radius of an exact selector.
    pub fn selector_radius(&self) -> Option<u32> {
        self.entries
            .iter()
            .filter_map(|e| match &e.selector {
                TypeSelector::Exact(t) => Some(t.radius()),
                TypeSelector::Any => None,
            })
            .max()
    }

    pub fn max_gen(&self) -> u32 {
        self.entries.iter().map(|e| e.word.max_gen()).max().unwrap_or(0)
    }

    /// The sum of two specs: both tables side by side.
    pub fn sum(&self, other: &Self) -> Result<Self> {
        if self.dim != other.dim {
            return Err(Error::input("block sizes differ"));
        }
        let mut entries = self.entries.clone();
        entries.extend(other.entries.iter().cloned());
        Self::new(self.radius.max(other.radius), self.dim, entries)
    }

    /// `K_n` on `action`.
    pub fn instantiate(&self, action: &Arc<FiniteAction>) -> Result<BlockKernel<T>> {
        if action.label_len() < self.radius as usize {
            return Err(Error::input(format!(
                "label length < r ({} < {})",
                action.label_len(),
                self.radius
            )));
        }
        for e in &self.entries {
            action.check_word(&e.word)?;
            if let TypeSelector::Exact(t) = &e.selector {
                if t.gens() != action.d() || t.mode() != action.mode() {
                    return Err(Error::input(format!(
                        "selector type {t} does not match the action's generators"
                    )));
                }
            }
        }
        let selectors = SelectorIndex::new(self);
        let types = match self.selector_radius() {
            Some(r) => Some(vertex_types(action, r, r)?),
            None => None,
        };
        let n = action.n();
        let mut triplets = Vec::new();
        for p in 0..n {
            for &k in &selectors.matching(types.as_ref().map(|t| &t[p])) {
                let e = &self.entries[k];
                let q = action.apply_word(&e.word, p)?;
                triplets.push((q, p, e.block.clone()));
            }
        }
        BlockKernel::from_entries(action.clone(), self.dim, triplets)
    }
}

/// Entries grouped for lookup by vertex type.
pub(crate) struct SelectorIndex {
    any: Vec<usize>,
    /// Per selector radius: type ↦ entry indices.
    exact: BTreeMap<u32, HashMap<NeighborhoodType, Vec<usize>>>,
}

impl SelectorIndex {
    pub(crate) fn new<T>(spec: &FiniteTypeOperatorSpec<T>) -> Self {
        let mut any = Vec::new();
        let mut exact: BTreeMap<u32, HashMap<NeighborhoodType, Vec<usize>>> = BTreeMap::new();
        for (k, e) in spec.entries.iter().enumerate() {
            match &e.selector {
                TypeSelector::Any => any.push(k),
                TypeSelector::Exact(t) => exact.entry(t.radius()).or_default().entry(t.clone()).or_default().push(k),
            }
        }
        SelectorIndex { any, exact }
    }

    /// Entries applying to a vertex of type `ty` (given at the largest
    /// selector radius, or `None` for type-independent specs), in table
    /// order.
    pub(crate) fn matching(&self, ty: Option<&NeighborhoodType>) -> Vec<usize> {
        let mut out = self.any.clone();
        if let Some(ty) = ty {
            for (&r, table) in &self.exact {
                let t = if r == ty.radius() {
                    std::borrow::Cow::Borrowed(ty)
                } else {
                    std::borrow::Cow::Owned(restrict_type(ty, r).expect("radius below the maximum"))
                };
                if let Some(ks) = table.get(t.as_ref()) {
                    out.extend(ks);
                }
            }
        }
        out.sort_unstable();
        out
    }
}

impl<T: ScalarText> FiniteTypeOperatorSpec<T> {
    /// Header `r d_block`, then one line per entry:
    /// `type_code | word | entries`, where `*` selects every vertex, the word
    /// is comma-separated signed generators (`e` for the empty word) and the
    /// `d_block²` entries are whitespace-separated in row-major order.
    pub fn parse(text: &str) -> Result<Self> {
        let mut lines = text
            .lines()
            .enumerate()
            .map(|(i, l)| (i + 1, l.trim()))
            .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'));
        let (hl, header) = lines.next().ok_or_else(|| Error::input("empty spec file"))?;
        let h: Vec<&str> = header.split_whitespace().collect();
        if h.len() != 2 {
            return Err(Error::parse(hl, "expected header `r d_block`"));
        }
        let radius: u32 = h[0].parse().map_err(|_| Error::parse(hl, "bad radius"))?;
        let dim: usize = h[1].parse().map_err(|_| Error::parse(hl, "bad block dimension"))?;
        let mut entries = Vec::new();
        for (ln, line) in lines {
            let parts: Vec<&str> = line.split('|').map(str::trim).collect();
            if parts.len() != 3 {
                return Err(Error::parse(ln, "expected `type_code | word | entries`"));
            }
            let selector = if parts[0] == "*" {
                TypeSelector::Any
            } else {
                TypeSelector::Exact(NeighborhoodType::parse_code(parts[0]).map_err(|e| Error::parse(ln, e.to_string()))?)
            };
            let word = GeneratorWord::parse(parts[1]).map_err(|e| Error::parse(ln, e.to_string()))?;
            let block = parts[2]
                .split_whitespace()
                .map(|tok| T::parse_entry(tok).ok_or_else(|| Error::parse(ln, format!("bad entry '{tok}'"))))
                .collect::<Result<Vec<T>>>()?;
            if block.len() != dim * dim {
                return Err(Error::parse(ln, format!("{} entries, expected {}", block.len(), dim * dim)));
            }
            if word.len() > radius as usize {
                return Err(Error::parse(ln, format!("word longer than radius {radius}")));
            }
            entries.push(SpecEntry { selector, word, block });
        }
        Self::new(radius, dim, entries)
    }

    pub fn to_text(&self) -> String {
        let mut out = format!("{} {}\n", self.radius, self.dim);
        for e in &self.entries {
            let sel = match &e.selector {
                TypeSelector::Any => "*".to_string(),
                TypeSelector::Exact(t) => t.to_code_string(),
            };
            let vals: Vec<String> = e.block.iter().map(ScalarText::format_entry).collect();
            let _ = writeln!(out, "{sel} | {} | {}", e.word, vals.join(" "));
        }
        out
    }
}
