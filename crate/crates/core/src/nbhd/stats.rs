//! Exact neighborhood statistics `p_α` and pair statistics `p_{αiβ}`.

use std::collections::{BTreeMap, HashMap};
use std::fmt::Write as _;

use num_traits::{One, Zero};
use rayon::prelude::*;

use crate::action::{FiniteAction, Letter, Mode, WordEnumeration};
use crate::error::{Error, Result};
use crate::scalar::{ratio, Rational};

use super::code::{check_label_len, code_with, restrict_type, NeighborhoodType};

/// Codes of every vertex, in vertex order.
pub fn vertex_types(action: &FiniteAction, r: u32, label_bits: u32) -> Result<Vec<NeighborhoodType>> {
    check_label_len(action, label_bits)?;
    let e = WordEnumeration::new(action.d(), action.mode(), r);
    Ok((0..action.n())
        .into_par_iter()
        .map(|v| code_with(action, &e, v, label_bits).expect("actions are total"))
        .collect())
}

fn count_types(types: &[NeighborhoodType]) -> BTreeMap<NeighborhoodType, u64> {
    let counts = types
        .par_iter()
        .fold(HashMap::new, |mut m: HashMap<&NeighborhoodType, u64>, t| {
            *m.entry(t).or_default() += 1;
            m
        })
        .reduce(HashMap::new, |mut a, b| {
            for (t, c) in b {
                *a.entry(t).or_default() += c;
            }
            a
        });
    counts.into_iter().map(|(t, c)| (t.clone(), c)).collect()
}

/// Distribution over neighborhood types of one radius and label length.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StatVector {
    radius: u32,
    label_bits: u32,
    /// Number of vertices counted, when the vector came from a finite action.
    samples: Option<u64>,
    entries: BTreeMap<NeighborhoodType, Rational>,
}

impl StatVector {
    /// Checks that every type has the given radius and label length, values
    /// lie in `[0, 1]` and sum to exactly 1. Zero entries are dropped.
    pub fn new(radius: u32, label_bits: u32, entries: BTreeMap<NeighborhoodType, Rational>) -> Result<Self> {
        let mut total = Rational::zero();
        for (t, p) in &entries {
            if t.radius() != radius || t.label_bits() != label_bits {
                return Err(Error::input(format!("type {t} does not have radius {radius} and {label_bits} label bits")));
            }
            if *p < Rational::zero() || *p > Rational::one() {
                return Err(Error::input(format!("value {p} of {t} outside [0, 1]")));
            }
            total += p;
        }
        if !total.is_one() {
            return Err(Error::input(format!("values sum to {total}, not 1")));
        }
        let entries = entries.into_iter().filter(|(_, p)| !p.is_zero()).collect();
        Ok(StatVector {
            radius,
            label_bits,
            samples: None,
            entries,
        })
    }

    pub fn from_counts(radius: u32, label_bits: u32, counts: BTreeMap<NeighborhoodType, u64>) -> Result<Self> {
        let n: u64 = counts.values().sum();
        if n == 0 {
            return Err(Error::input("no samples"));
        }
        let entries = counts.iter().map(|(t, &c)| (t.clone(), ratio(c as i64, n as i64))).collect();
        let mut s = StatVector::new(radius, label_bits, entries)?;
        s.samples = Some(n);
        Ok(s)
    }

    pub fn radius(&self) -> u32 {
        self.radius
    }

    pub fn label_bits(&self) -> u32 {
        self.label_bits
    }

    pub fn samples(&self) -> Option<u64> {
        self.samples
    }

    /// `p_α`, zero for types outside the support.
    pub fn get(&self, alpha: &NeighborhoodType) -> Rational {
        self.entries.get(alpha).cloned().unwrap_or_else(Rational::zero)
    }

    /// Number of vertices of type `α`, for empirical vectors.
    pub fn count(&self, alpha: &NeighborhoodType) -> Option<u64> {
        let n = self.samples?;
        let c = self.get(alpha) * Rational::from_integer(n.into());
        c.to_integer().try_into().ok()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&NeighborhoodType, &Rational)> {
        self.entries.iter()
    }

    pub fn support(&self) -> impl Iterator<Item = &NeighborhoodType> {
        self.entries.keys()
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn total(&self) -> Rational {
        self.entries.values().sum()
    }

    fn push_forward(&self, radius: u32, label_bits: u32, f: impl Fn(&NeighborhoodType) -> NeighborhoodType) -> StatVector {
        let mut entries: BTreeMap<NeighborhoodType, Rational> = BTreeMap::new();
        for (t, p) in &self.entries {
            *entries.entry(f(t)).or_insert_with(Rational::zero) += p;
        }
        StatVector {
            radius,
            label_bits,
            samples: self.samples,
            entries,
        }
    }

    /// Label marginal: the induced distribution over bare shapes.
    pub fn forget_labels(&self) -> StatVector {
        self.push_forward(self.radius, 0, NeighborhoodType::unlabeled)
    }

    /// Marginal over `α|_q`.
    pub fn restrict(&self, q: u32) -> Result<StatVector> {
        if q > self.radius {
            return Err(Error::input(format!("cannot restrict radius {} statistics to {q}", self.radius)));
        }
        let bits = self.label_bits.min(q);
        Ok(self.push_forward(q, bits, |t| restrict_type(t, q).expect("radius checked")))
    }

    /// CSV with header `type_code,count,p_num,p_den`; `count` is empty for
    /// vectors not obtained by counting.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("type_code,count,p_num,p_den\n");
        for (t, p) in &self.entries {
            let count = self.count(t).map(|c| c.to_string()).unwrap_or_default();
            let _ = writeln!(out, "{t},{count},{},{}", p.numer(), p.denom());
        }
        out
    }

    pub fn from_csv(text: &str) -> Result<StatVector> {
        let mut entries = BTreeMap::new();
        let mut counts: Option<u64> = Some(0);
        let mut shape: Option<(u32, u32)> = None;
        let mut lines = text.lines().enumerate();
        match lines.next() {
            Some((_, h)) if h.trim() == "type_code,count,p_num,p_den" => {}
            _ => return Err(Error::parse(1, "expected header type_code,count,p_num,p_den")),
        }
        for (i, line) in lines {
            let line_no = i + 1;
            if line.trim().is_empty() {
                continue;
            }
            let f: Vec<&str> = line.trim().split(',').collect();
            if f.len() != 4 {
                return Err(Error::parse(line_no, "expected 4 fields"));
            }
            let t = NeighborhoodType::parse_code(f[0]).map_err(|e| Error::parse(line_no, e.to_string()))?;
            let num: num_bigint::BigInt = f[2].parse().map_err(|_| Error::parse(line_no, "bad numerator"))?;
            let den: num_bigint::BigInt = f[3].parse().map_err(|_| Error::parse(line_no, "bad denominator"))?;
            if den.is_zero() {
                return Err(Error::parse(line_no, "zero denominator"));
            }
            if f[1].is_empty() {
                counts = None;
            } else {
                let c: u64 = f[1].parse().map_err(|_| Error::parse(line_no, "bad count"))?;
                counts = counts.map(|s| s + c);
            }
            let here = (t.radius(), t.label_bits());
            if *shape.get_or_insert(here) != here {
                return Err(Error::parse(line_no, "mixed radii or label lengths"));
            }
            if entries.insert(t, Rational::new(num, den)).is_some() {
                return Err(Error::parse(line_no, "duplicate type"));
            }
        }
        let (radius, bits) = shape.ok_or_else(|| Error::input("empty statistics file"))?;
        let mut s = StatVector::new(radius, bits, entries)?;
        s.samples = counts;
        Ok(s)
    }
}

/// `p_α` over all vertices with `r`-bit labels.
pub fn stat_vector(action: &FiniteAction, r: u32) -> Result<StatVector> {
    stat_vector_with(action, r, r)
}

/// Statistics with a chosen label length; `label_bits = 0` gives shapes only.
pub fn stat_vector_with(action: &FiniteAction, r: u32, label_bits: u32) -> Result<StatVector> {
    let types = vertex_types(action, r, label_bits)?;
    StatVector::from_counts(r, label_bits, count_types(&types))
}

pub type PairKey = (NeighborhoodType, u32, NeighborhoodType);

/// Joint law of the types at `x` and `S_i(x)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PairStatVector {
    radius: u32,
    gens: u32,
    samples: Option<u64>,
    entries: BTreeMap<PairKey, Rational>,
}

impl PairStatVector {
    pub fn new(radius: u32, gens: u32, entries: BTreeMap<PairKey, Rational>) -> Self {
        let entries = entries.into_iter().filter(|(_, p)| !p.is_zero()).collect();
        PairStatVector {
            radius,
            gens,
            samples: None,
            entries,
        }
    }

    pub fn radius(&self) -> u32 {
        self.radius
    }

    pub fn gens(&self) -> u32 {
        self.gens
    }

    pub fn samples(&self) -> Option<u64> {
        self.samples
    }

    pub fn get(&self, alpha: &NeighborhoodType, i: u32, beta: &NeighborhoodType) -> Rational {
        self.entries
            .get(&(alpha.clone(), i, beta.clone()))
            .cloned()
            .unwrap_or_else(Rational::zero)
    }

    pub fn iter(&self) -> impl Iterator<Item = (&PairKey, &Rational)> {
        self.entries.iter()
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// Checks `Σ_α p_α = 1`, `Σ_β p_{αiβ} = p_α` and `p_{αiβ} = p_{βiα}`
    /// exactly against the single-vertex statistics.
    pub fn check_equations(&self, singles: &StatVector) -> Result<()> {
        if !singles.total().is_one() {
            return Err(Error::Feasibility("type frequencies do not sum to 1".into()));
        }
        let mut marginals: BTreeMap<(&NeighborhoodType, u32), Rational> = BTreeMap::new();
        for ((a, i, b), p) in &self.entries {
            if *i == 0 || *i > self.gens {
                return Err(Error::Feasibility(format!("generator {i} out of range")));
            }
            *marginals.entry((a, *i)).or_insert_with(Rational::zero) += p;
            if self.get(b, *i, a) != *p {
                return Err(Error::Feasibility(format!("asymmetric pair ({a}, {i}, {b})")));
            }
        }
        for (a, p) in singles.iter() {
            for i in 1..=self.gens {
                let m = marginals.remove(&(a, i)).unwrap_or_else(Rational::zero);
                if m != *p {
                    return Err(Error::Feasibility(format!("pair marginal of {a} along {i} is {m}, expected {p}")));
                }
            }
        }
        if let Some(((a, i), m)) = marginals.into_iter().find(|(_, m)| !m.is_zero()) {
            return Err(Error::Feasibility(format!("pair marginal {m} for {a} along {i} outside the support")));
        }
        Ok(())
    }

    /// CSV with header `alpha,i,beta,count,p_num,p_den`.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("alpha,i,beta,count,p_num,p_den\n");
        for ((a, i, b), p) in &self.entries {
            let count = self
                .samples
                .map(|n| (p * Rational::from_integer(n.into())).to_integer().to_string())
                .unwrap_or_default();
            let _ = writeln!(out, "{a},{i},{b},{count},{},{}", p.numer(), p.denom());
        }
        out
    }
    pub fn from_csv(text: &str) -> Result<PairStatVector> {
        let mut lines = text.lines().enumerate();
        match lines.next() {
            Some((_, h)) if h.trim() == "alpha,i,beta,count,p_num,p_den" => {}
            _ => return Err(Error::parse(1, "expected header alpha,i,beta,count,p_num,p_den")),
        }
        let mut entries = BTreeMap::new();
        let mut first_gen_count: Option<u64> = Some(0);
        let mut radius = None;
        let mut gens = 0;
        for (i, line) in lines {
            let line_no = i + 1;
            if line.trim().is_empty() {
                continue;
            }
            let f: Vec<&str> = line.trim().split(',').collect();
            if f.len() != 6 {
                return Err(Error::parse(line_no, "expected 6 fields"));
            }
            let ty = |s: &str| NeighborhoodType::parse_code(s).map_err(|e| Error::parse(line_no, e.to_string()));
            let (a, b) = (ty(f[0])?, ty(f[2])?);
            let g: u32 = f[1].parse().ok().filter(|&g| g > 0).ok_or_else(|| Error::parse(line_no, "bad generator"))?;
            let num: num_bigint::BigInt = f[4].parse().map_err(|_| Error::parse(line_no, "bad numerator"))?;
            let den: num_bigint::BigInt = f[5].parse().map_err(|_| Error::parse(line_no, "bad denominator"))?;
            if den.is_zero() {
                return Err(Error::parse(line_no, "zero denominator"));
            }
            if *radius.get_or_insert(a.radius()) != a.radius() || b.radius() != a.radius() {
                return Err(Error::parse(line_no, "mixed radii"));
            }
            if f[3].is_empty() {
                first_gen_count = None;
            } else if g == 1 {
                let c: u64 = f[3].parse().map_err(|_| Error::parse(line_no, "bad count"))?;
                first_gen_count = first_gen_count.map(|s| s + c);
            }
            gens = gens.max(g);
            if entries.insert((a, g, b), Rational::new(num, den)).is_some() {
                return Err(Error::parse(line_no, "duplicate pair"));
            }
        }
        let radius = radius.ok_or_else(|| Error::input("empty pair statistics file"))?;
        let mut p = PairStatVector::new(radius, gens, entries);
        p.samples = first_gen_count;
        Ok(p)
    }
}

/// `p_{αiβ}` for every generator of an involution action.
pub fn pair_stats(action: &FiniteAction, r: u32) -> Result<PairStatVector> {
    if action.mode() != Mode::Involution {
        return Err(Error::Mode("pair statistics need involution generators".into()));
    }
    let types = vertex_types(action, r, r)?;
    let n = action.n() as i64;
    let mut counts: BTreeMap<PairKey, u64> = BTreeMap::new();
    for i in 1..=action.d() {
        let mut local: HashMap<(&NeighborhoodType, &NeighborhoodType), u64> = HashMap::new();
        for (x, t) in types.iter().enumerate() {
            let y = action.step(x, Letter::new(i));
            *local.entry((t, &types[y])).or_default() += 1;
        }
        for ((a, b), c) in local {
            counts.insert((a.clone(), i, b.clone()), c);
        }
    }
    let entries = counts.into_iter().map(|(k, c)| (k, ratio(c as i64, n))).collect();
    let mut p = PairStatVector::new(r, action.d(), entries);
    p.samples = Some(n as u64);
    Ok(p)
}
