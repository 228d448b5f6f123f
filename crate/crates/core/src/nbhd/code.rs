//! Canonical codes of labeled rooted neighborhoods.
//!
//! Action graphs are deterministic (one out-edge per color and vertex), so a
//! rooted neighborhood is determined by where each reduced word sends the
//! root. Walking `W_r` in length-lex order and numbering endpoints by first
//! visit gives a canonical form with no isomorphism search. Words of length
//! `r + 1` are walked too, recording which of them land back inside the ball;
//! this captures the edges between outermost vertices.

use std::collections::HashMap;
use std::fmt;

use crate::action::{packed_to_string, FiniteAction, GeneratorWord, LabelWord, Letter, Mode, WordEnumeration};
use crate::error::{Error, Result};

/// Marks a boundary word whose endpoint lies outside the ball.
pub const OUTSIDE: u32 = u32::MAX;

/// Anything that can be walked letter by letter from a vertex.
pub trait Walk {
    fn gens(&self) -> u32;
    fn mode(&self) -> Mode;
    /// Label bits available at every vertex.
    fn label_len(&self) -> usize;
    /// `None` when the step leaves the known part of the graph.
    fn step(&self, v: usize, a: Letter) -> Option<usize>;
    fn label_prefix(&self, v: usize, bits: usize) -> u64;
}

impl Walk for FiniteAction {
    fn gens(&self) -> u32 {
        self.d()
    }
    fn mode(&self) -> Mode {
        FiniteAction::mode(self)
    }
    fn label_len(&self) -> usize {
        FiniteAction::label_len(self)
    }
    fn step(&self, v: usize, a: Letter) -> Option<usize> {
        Some(FiniteAction::step(self, v, a))
    }
    fn label_prefix(&self, v: usize, bits: usize) -> u64 {
        self.label(v).prefix(bits)
    }
}

/// Canonical code of an `r`-neighborhood whose vertices carry `label_bits`
/// label bits (`label_bits = r` for the labeled types, `0` for bare shapes).
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct NeighborhoodType {
    radius: u32,
    gens: u32,
    mode: Mode,
    label_bits: u32,
    /// Class of each word of `W_r`, in enumeration order.
    classes: Vec<u32>,
    /// Class (or [`OUTSIDE`]) of each word of length `r + 1`.
    boundary: Vec<u32>,
    /// Label prefix of each class.
    labels: Vec<u64>,
}

impl NeighborhoodType {
    pub fn radius(&self) -> u32 {
        self.radius
    }

    pub fn gens(&self) -> u32 {
        self.gens
    }

    pub fn mode(&self) -> Mode {
        self.mode
    }

    pub fn label_bits(&self) -> u32 {
        self.label_bits
    }

    /// Number of distinct vertices in the ball.
    pub fn size(&self) -> usize {
        self.labels.len()
    }

    pub fn class_labels(&self) -> &[u64] {
        &self.labels
    }

    pub fn root_label(&self) -> LabelWord {
        LabelWord::from_prefix(self.labels[0], self.label_bits as usize)
    }

    pub fn enumeration(&self) -> WordEnumeration {
        WordEnumeration::new(self.gens, self.mode, self.radius)
    }

    /// Class of the `idx`-th enumerated word (boundary words included).
    pub fn class_at(&self, idx: usize) -> u32 {
        if idx < self.classes.len() {
            self.classes[idx]
        } else {
            self.boundary[idx - self.classes.len()]
        }
    }

    /// Class reached from the root by `w`, if `w` stays within the ball.
    pub fn class_of_word(&self, w: &GeneratorWord) -> Option<u32> {
        let w = w.reduced(self.mode);
        let e = self.enumeration();
        let c = self.class_at(e.index_of(&w)?);
        (c != OUTSIDE).then_some(c)
    }

    /// The ball is a tree: no two words of `W_r` meet and no edge joins two
    /// outermost vertices.
    pub fn is_tree(&self) -> bool {
        self.labels.len() == self.classes.len() && self.boundary.iter().all(|&c| c == OUTSIDE)
    }

    /// Builds the tree type whose `i`-th word of `W_r` carries `labels[i]`.
    pub fn tree(gens: u32, mode: Mode, radius: u32, label_bits: u32, labels: Vec<u64>) -> Self {
        let e = WordEnumeration::new(gens, mode, radius);
        assert_eq!(labels.len(), e.ball_len(), "one label per word of the ball");
        let boundary_len = e.all().len() - e.ball_len();
        NeighborhoodType {
            radius,
            gens,
            mode,
            label_bits,
            classes: (0..labels.len() as u32).collect(),
            boundary: vec![OUTSIDE; boundary_len],
            labels,
        }
    }

    /// Same shape, labels forgotten.
    pub fn unlabeled(&self) -> NeighborhoodType {
        NeighborhoodType {
            label_bits: 0,
            labels: vec![0; self.labels.len()],
            ..self.clone()
        }
    }

    /// Deterministic text form, e.g. `1/1/f/1/0.1.2/x.x/0.1.1`.
    pub fn to_code_string(&self) -> String {
        let join = |v: &[u32]| {
            if v.is_empty() {
                "-".to_string()
            } else {
                v.iter()
                    .map(|&c| if c == OUTSIDE { "x".to_string() } else { c.to_string() })
                    .collect::<Vec<_>>()
                    .join(".")
            }
        };
        let labels = if self.label_bits == 0 {
            "-".to_string()
        } else {
            self.labels
                .iter()
                .map(|&l| packed_to_string(l, self.label_bits as usize))
                .collect::<Vec<_>>()
                .join(".")
        };
        format!(
            "{}/{}/{}/{}/{}/{}/{}",
            self.radius,
            self.gens,
            if self.mode == Mode::Free { "f" } else { "i" },
            self.label_bits,
            join(&self.classes),
            join(&self.boundary),
            labels
        )
    }

    pub fn parse_code(s: &str) -> Result<Self> {
        let bad = |why: &str| Error::input(format!("bad type code '{s}': {why}"));
        let parts: Vec<&str> = s.trim().split('/').collect();
        if parts.len() != 7 {
            return Err(bad("expected 7 '/'-separated fields"));
        }
        let num = |t: &str| t.parse::<u32>().map_err(|_| bad("bad number"));
        let radius = num(parts[0])?;
        let gens = num(parts[1])?;
        let mode = match parts[2] {
            "f" => Mode::Free,
            "i" => Mode::Involution,
            _ => return Err(bad("mode must be f or i")),
        };
        let label_bits = num(parts[3])?;
        if label_bits > 64 {
            return Err(bad("more than 64 label bits"));
        }
        let list = |t: &str| -> Result<Vec<u32>> {
            if t == "-" {
                return Ok(Vec::new());
            }
            t.split('.')
                .map(|c| if c == "x" { Ok(OUTSIDE) } else { num(c) })
                .collect()
        };
        let classes = list(parts[4])?;
        let boundary = list(parts[5])?;
        let size = classes.iter().max().map_or(0, |&m| m as usize + 1);
        let labels = if parts[6] == "-" {
            if label_bits != 0 {
                return Err(bad("missing labels"));
            }
            vec![0; size]
        } else {
            parts[6]
                .split('.')
                .map(|b| {
                    let l = LabelWord::parse(b).map_err(|_| bad("bad label"))?;
                    if l.len() != label_bits as usize {
                        return Err(bad("label length mismatch"));
                    }
                    Ok(l.prefix(label_bits as usize))
                })
                .collect::<Result<Vec<_>>>()?
        };
        let e = WordEnumeration::new(gens, mode, radius);
        if classes.len() != e.ball_len() || boundary.len() != e.all().len() - e.ball_len() {
            return Err(bad("word counts do not match radius and generators"));
        }
        if labels.len() != size {
            return Err(bad("one label per class expected"));
        }
        // first-visit numbering
        let mut next = 0u32;
        for &c in &classes {
            if c == OUTSIDE || c > next {
                return Err(bad("classes not in first-visit order"));
            }
            if c == next {
                next += 1;
            }
        }
        if boundary.iter().any(|&c| c != OUTSIDE && c >= next) {
            return Err(bad("boundary refers to unknown class"));
        }
        Ok(NeighborhoodType {
            radius,
            gens,
            mode,
            label_bits,
            classes,
            boundary,
            labels,
        })
    }
}

impl fmt::Display for NeighborhoodType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_code_string())
    }
}

/// Codes vertex `v` of any walkable structure. Returns `None` if a word of
/// the ball leaves the known part of the structure.
pub fn code_with<W: Walk + ?Sized>(
    walk: &W,
    e: &WordEnumeration,
    v: usize,
    label_bits: u32,
) -> Option<NeighborhoodType> {
    let ball = e.ball_len();
    let words = e.all();
    let mut ends: Vec<Option<usize>> = Vec::with_capacity(words.len());
    let mut verts: Vec<usize> = Vec::new();
    let mut classes = Vec::with_capacity(ball);
    let mut boundary = Vec::with_capacity(words.len() - ball);
    for (i, w) in words.iter().enumerate() {
        let end = match w.first {
            None => Some(v),
            Some(a) => ends[w.rest].and_then(|x| walk.step(x, a)),
        };
        ends.push(end);
        let pos = end.and_then(|x| verts.iter().position(|&y| y == x));
        if i < ball {
            let x = end?;
            let c = match pos {
                Some(c) => c,
                None => {
                    verts.push(x);
                    verts.len() - 1
                }
            };
            classes.push(c as u32);
        } else {
            boundary.push(pos.map_or(OUTSIDE, |c| c as u32));
        }
    }
    let labels = verts
        .iter()
        .map(|&x| walk.label_prefix(x, label_bits as usize))
        .collect();
    Some(NeighborhoodType {
        radius: e.radius,
        gens: e.gens,
        mode: e.mode,
        label_bits,
        classes,
        boundary,
        labels,
    })
}

pub(crate) fn check_label_len<W: Walk + ?Sized>(walk: &W, label_bits: u32) -> Result<()> {
    if label_bits > 64 {
        return Err(Error::Guard("label prefixes longer than 64 bits".into()));
    }
    if walk.label_len() < label_bits as usize {
        return Err(Error::input(format!(
            "label length < r ({} < {label_bits})",
            walk.label_len()
        )));
    }
    Ok(())
}

/// Labeled `r`-neighborhood type of `v`, with `r`-bit labels.
pub fn neighborhood_code(action: &FiniteAction, v: usize, r: u32) -> Result<NeighborhoodType> {
    neighborhood_code_with(action, v, r, r)
}

pub fn neighborhood_code_with(
    action: &FiniteAction,
    v: usize,
    r: u32,
    label_bits: u32,
) -> Result<NeighborhoodType> {
    if v >= action.n() {
        return Err(Error::input(format!("vertex {v} out of range 0..{}", action.n())));
    }
    check_label_len(action, label_bits)?;
    let e = WordEnumeration::new(action.d(), action.mode(), r);
    Ok(code_with(action, &e, v, label_bits).expect("actions are total"))
}

/// `α|_q`: the sub-ball of radius `q` with labels cut to `min(bits, q)` bits.
pub fn restrict_type(alpha: &NeighborhoodType, q: u32) -> Result<NeighborhoodType> {
    if q > alpha.radius {
        return Err(Error::input(format!(
            "cannot restrict radius {} type to radius {q}",
            alpha.radius
        )));
    }
    if q == alpha.radius {
        return Ok(alpha.clone());
    }
    // W_{q+1} is a prefix of the radius-r enumeration.
    let e = WordEnumeration::new(alpha.gens, alpha.mode, q);
    let ball = e.ball_len();
    let mut remap: HashMap<u32, u32> = HashMap::new();
    let mut old_of_new: Vec<u32> = Vec::new();
    let mut classes = Vec::with_capacity(ball);
    for idx in 0..ball {
        let old = alpha.class_at(idx);
        let c = *remap.entry(old).or_insert_with(|| {
            old_of_new.push(old);
            old_of_new.len() as u32 - 1
        });
        classes.push(c);
    }
    let boundary = (ball..e.all().len())
        .map(|idx| remap.get(&alpha.class_at(idx)).copied().unwrap_or(OUTSIDE))
        .collect();
    let bits = alpha.label_bits.min(q);
    let shift = alpha.label_bits - bits;
    let labels = old_of_new
        .iter()
        .map(|&o| alpha.labels[o as usize] >> shift)
        .collect();
    Ok(NeighborhoodType {
        radius: q,
        gens: alpha.gens,
        mode: alpha.mode,
        label_bits: bits,
        classes,
        boundary,
        labels,
    })
}

/// The finite partial action carried by a type: classes as vertices, letter
/// steps defined wherever the target is inside the ball.
#[derive(Debug, Clone)]
pub struct BallModel {
    ty: NeighborhoodType,
    letters: Vec<Letter>,
    /// `steps[c][j]`: target of letter `letters[j]` from class `c`.
    steps: Vec<Vec<Option<usize>>>,
    dist: Vec<u32>,
}

impl BallModel {
    pub fn new(ty: &NeighborhoodType) -> Self {
        let e = ty.enumeration();
        let letters = ty.mode.letters(ty.gens);
        let mut index: HashMap<(Letter, usize), usize> = HashMap::new();
        for (i, w) in e.all().iter().enumerate() {
            if let Some(a) = w.first {
                index.insert((a, w.rest), i);
            }
        }
        let size = ty.size();
        let mut rep = vec![usize::MAX; size];
        for (idx, &c) in ty.classes.iter().enumerate() {
            if rep[c as usize] == usize::MAX {
                rep[c as usize] = idx;
            }
        }
        let words = e.all();
        let dist = rep.iter().map(|&i| words[i].len).collect();
        let steps = rep
            .iter()
            .map(|&i| {
                letters
                    .iter()
                    .map(|&a| {
                        let target_idx = match words[i].first {
                            Some(b) if ty.mode.cancels(a, b) => Some(words[i].rest),
                            _ => index.get(&(a, i)).copied(),
                        };
                        target_idx
                            .map(|t| ty.class_at(t))
                            .filter(|&c| c != OUTSIDE)
                            .map(|c| c as usize)
                    })
                    .collect()
            })
            .collect();
        BallModel {
            ty: ty.clone(),
            letters,
            steps,
            dist,
        }
    }

    pub fn ty(&self) -> &NeighborhoodType {
        &self.ty
    }

    pub fn size(&self) -> usize {
        self.ty.size()
    }

    /// Distance of a class from the root.
    pub fn dist(&self, c: usize) -> u32 {
        self.dist[c]
    }

    fn letter_index(&self, a: Letter) -> usize {
        match self.ty.mode {
            Mode::Free => 2 * (a.gen as usize - 1) + usize::from(a.inverse),
            Mode::Involution => a.gen as usize - 1,
        }
    }

    pub fn letters(&self) -> &[Letter] {
        &self.letters
    }
}

impl Walk for BallModel {
    fn gens(&self) -> u32 {
        self.ty.gens
    }
    fn mode(&self) -> Mode {
        self.ty.mode
    }
    fn label_len(&self) -> usize {
        self.ty.label_bits as usize
    }
    fn step(&self, v: usize, a: Letter) -> Option<usize> {
        if a.gen == 0 || a.gen > self.ty.gens {
            return None;
        }
        self.steps[v][self.letter_index(a)]
    }
    fn label_prefix(&self, v: usize, bits: usize) -> u64 {
        self.ty.labels[v] >> (self.ty.label_bits as usize - bits)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cycle(n: usize, labels: &[&str]) -> FiniteAction {
        let g = (0..n as u32).map(|v| (v + 1) % n as u32).collect();
        let labels = labels.iter().map(|s| LabelWord::parse(s).unwrap()).collect();
        FiniteAction::new(Mode::Free, vec![g], labels).unwrap()
    }

    #[test]
    fn identity_action_collapses() {
        let a = FiniteAction::with_zero_labels(Mode::Free, 3, vec![vec![0, 1, 2]], 1).unwrap();
        let c = neighborhood_code(&a, 1, 1).unwrap();
        assert_eq!(c.size(), 1);
        assert!(!c.is_tree());
        assert_eq!(c.to_code_string(), "1/1/f/1/0.0.0/0.0/0");
    }

    #[test]
    fn cycle_vertices_with_equal_windows_agree() {
        let a = cycle(9, &["0", "1", "1", "0", "0", "1", "1", "0", "1"]);
        // windows of radius 1 around 2 and 6: (1,1,0) vs (1,1,0)
        let c2 = neighborhood_code(&a, 2, 1).unwrap();
        let c6 = neighborhood_code(&a, 6, 1).unwrap();
        assert_eq!(c2, c6);
        assert!(c2.is_tree());
        assert_ne!(c2, neighborhood_code(&a, 1, 1).unwrap());
    }

    #[test]
    fn short_cycle_detected_through_boundary() {
        // C_3 at radius 1: words e, γ, γ⁻¹ are distinct but γγ lands on γ⁻¹.
        let a = cycle(3, &["0", "0", "0"]);
        let c = neighborhood_code(&a, 0, 1).unwrap();
        assert_eq!(c.size(), 3);
        assert!(!c.is_tree());
        let big = cycle(4, &["0", "0", "0", "0"]);
        assert!(neighborhood_code(&big, 0, 1).unwrap().is_tree());
        assert_ne!(c, neighborhood_code(&big, 0, 1).unwrap());
    }

    #[test]
    fn label_guard() {
        let a = cycle(3, &["0", "0", "0"]);
        let err = neighborhood_code(&a, 0, 2).unwrap_err();
        assert!(err.to_string().contains("label length < r"));
    }

    #[test]
    fn code_string_round_trip() {
        let a = cycle(5, &["01", "11", "10", "00", "01"]);
        for r in 0..=2 {
            for v in 0..5 {
                let c = neighborhood_code(&a, v, r).unwrap();
                assert_eq!(NeighborhoodType::parse_code(&c.to_code_string()).unwrap(), c);
            }
        }
        assert!(NeighborhoodType::parse_code("1/1/f/1/0.2.1/x.x/0.0.0").is_err());
        assert!(NeighborhoodType::parse_code("1/1/f/1/0.1/x.x/0.0").is_err());
    }

    #[test]
    fn restriction_edges() {
        let a = cycle(7, &["01", "11", "10", "00", "01", "10", "11"]);
        let c = neighborhood_code(&a, 3, 2).unwrap();
        assert_eq!(restrict_type(&c, 2).unwrap(), c);
        let root = restrict_type(&c, 0).unwrap();
        assert_eq!(root.size(), 1);
        assert_eq!(root.label_bits(), 0);
        assert!(restrict_type(&c, 3).is_err());
        assert_eq!(restrict_type(&c, 1).unwrap(), neighborhood_code(&a, 3, 1).unwrap());
    }

    #[test]
    fn ball_model_reproduces_inner_codes() {
        let a = cycle(11, &["0", "1", "1", "0", "1", "0", "0", "1", "1", "1", "0"]);
        let big = neighborhood_code_with(&a, 5, 3, 1).unwrap();
        let ball = BallModel::new(&big);
        let e = WordEnumeration::new(1, Mode::Free, 2);
        // class 1 is γ·root = vertex 6, at distance 1; its radius-2 ball fits
        let inner = code_with(&ball, &e, 1, 1).unwrap();
        assert_eq!(inner, neighborhood_code_with(&a, 6, 2, 1).unwrap());
    }
}
