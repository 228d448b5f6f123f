use crate::error::{Error, Result};

use super::label::LabelWord;
use super::word::{GeneratorWord, Letter, Mode};

/// A finite labeled X-set: `d` generator permutations of `{0..n-1}` and a
/// fixed-length bit label per vertex.
///
/// Every vertex has exactly one out-edge and one in-edge of each color, which
/// is what bijectivity of each generator guarantees. Construction validates
/// this, and involution-mode actions are additionally checked to square to
/// the identity.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FiniteAction {
    mode: Mode,
    gens: Vec<Vec<u32>>,
    inv: Vec<Vec<u32>>,
    labels: Vec<LabelWord>,
    label_len: usize,
}

impl FiniteAction {
    /// Validates and builds an action on `labels.len()` vertices.
    pub fn new(mode: Mode, gens: Vec<Vec<u32>>, labels: Vec<LabelWord>) -> Result<Self> {
        let n = labels.len();
        let label_len = labels.first().map_or(0, LabelWord::len);
        if let Some((v, l)) = labels.iter().enumerate().find(|(_, l)| l.len() != label_len) {
            return Err(Error::input(format!(
                "vertex {v} has label length {}, expected {label_len}",
                l.len()
            )));
        }
        let mut inv = Vec::with_capacity(gens.len());
        for (i, g) in gens.iter().enumerate() {
            if g.len() != n {
                return Err(Error::input(format!(
                    "generator {} has {} images for {n} vertices",
                    i + 1,
                    g.len()
                )));
            }
            let mut gi = vec![u32::MAX; n];
            for (v, &w) in g.iter().enumerate() {
                let w = w as usize;
                if w >= n {
                    return Err(Error::input(format!(
                        "generator {} maps {v} to {w}, outside 0..{n}",
                        i + 1
                    )));
                }
                if gi[w] != u32::MAX {
                    return Err(Error::input(format!(
                        "generator {} is not a bijection: {w} hit twice",
                        i + 1
                    )));
                }
                gi[w] = v as u32;
            }
            if mode == Mode::Involution {
                if let Some(v) = (0..n).find(|&v| g[g[v] as usize] as usize != v) {
                    return Err(Error::input(format!(
                        "generator {} is not an involution at vertex {v}",
                        i + 1
                    )));
                }
            }
            inv.push(gi);
        }
        Ok(FiniteAction {
            mode,
            gens,
            inv,
            labels,
            label_len,
        })
    }

    /// Action with all labels zero of length `k`.
    pub fn with_zero_labels(mode: Mode, n: usize, gens: Vec<Vec<u32>>, k: usize) -> Result<Self> {
        Self::new(mode, gens, vec![LabelWord::zeros(k); n])
    }

    pub fn n(&self) -> usize {
        self.labels.len()
    }

    pub fn d(&self) -> u32 {
        self.gens.len() as u32
    }

    pub fn mode(&self) -> Mode {
        self.mode
    }

    pub fn label_len(&self) -> usize {
        self.label_len
    }

    pub fn label(&self, v: usize) -> &LabelWord {
        &self.labels[v]
    }

    pub fn labels(&self) -> &[LabelWord] {
        &self.labels
    }

    /// Image table of generator `i` (1-based).
    pub fn generator(&self, i: u32) -> &[u32] {
        &self.gens[i as usize - 1]
    }

    pub fn generators(&self) -> &[Vec<u32>] {
        &self.gens
    }

    /// One letter step; the caller guarantees the letter is in range.
    #[inline]
    pub fn step(&self, v: usize, a: Letter) -> usize {
        let g = a.gen as usize - 1;
        if a.inverse && self.mode == Mode::Free {
            self.inv[g][v] as usize
        } else {
            self.gens[g][v] as usize
        }
    }

    pub(crate) fn apply_unchecked(&self, w: &GeneratorWord, v: usize) -> usize {
        w.letters().iter().rev().fold(v, |x, &a| self.step(x, a))
    }

    pub fn check_word(&self, w: &GeneratorWord) -> Result<()> {
        if w.max_gen() > self.d() {
            return Err(Error::input(format!(
                "word {w} uses generator {} but the action has {}",
                w.max_gen(),
                self.d()
            )));
        }
        Ok(())
    }

    /// `θ(w, v)`, rightmost letter first.
    pub fn apply_word(&self, w: &GeneratorWord, v: usize) -> Result<usize> {
        if v >= self.n() {
            return Err(Error::input(format!("vertex {v} out of range 0..{}", self.n())));
        }
        self.check_word(w)?;
        Ok(self.apply_unchecked(w, v))
    }

    /// The permutation `v ↦ θ(w, v)`.
    pub fn word_permutation(&self, w: &GeneratorWord) -> Result<Vec<u32>> {
        self.check_word(w)?;
        Ok((0..self.n())
            .map(|v| self.apply_unchecked(w, v) as u32)
            .collect())
    }

    /// Keeps generators `1..=r`; vertices and labels are unchanged.
    pub fn restrict_generators(&self, r: u32) -> Result<FiniteAction> {
        if r == 0 || r > self.d() {
            return Err(Error::input(format!(
                "restriction to {r} generators out of range 1..={}",
                self.d()
            )));
        }
        let r = r as usize;
        Ok(FiniteAction {
            mode: self.mode,
            gens: self.gens[..r].to_vec(),
            inv: self.inv[..r].to_vec(),
            labels: self.labels.clone(),
            label_len: self.label_len,
        })
    }

    /// Same generators, new labels.
    pub fn with_labels(&self, labels: Vec<LabelWord>) -> Result<FiniteAction> {
        if labels.len() != self.n() {
            return Err(Error::input(format!(
                "{} labels for {} vertices",
                labels.len(),
                self.n()
            )));
        }
        Self::new(self.mode, self.gens.clone(), labels)
    }

    /// Orbit representative (smallest vertex) of every vertex.
    pub fn orbit_ids(&self) -> Vec<u32> {
        let n = self.n();
        let mut parent: Vec<u32> = (0..n as u32).collect();
        fn find(p: &mut [u32], mut x: u32) -> u32 {
            while p[x as usize] != x {
                p[x as usize] = p[p[x as usize] as usize];
                x = p[x as usize];
            }
            x
        }
        for g in &self.gens {
            for (v, &w) in g.iter().enumerate() {
                let (a, b) = (find(&mut parent, v as u32), find(&mut parent, w));
                if a != b {
                    let (lo, hi) = (a.min(b), a.max(b));
                    parent[hi as usize] = lo;
                }
            }
        }
        (0..n as u32).map(|v| find(&mut parent, v)).collect()
    }

    /// Re-runs the structural checks; always succeeds for values built
    /// through the public constructors.
    pub fn validate(&self) -> Result<()> {
        Self::new(self.mode, self.gens.clone(), self.labels.clone()).map(|_| ())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    pub(crate) fn cycle(n: usize) -> FiniteAction {
        let g = (0..n as u32).map(|v| (v + 1) % n as u32).collect();
        FiniteAction::with_zero_labels(Mode::Free, n, vec![g], 0).unwrap()
    }

    #[test]
    fn cyclic_words() {
        let c5 = cycle(5);
        let w = GeneratorWord::from_signed(&[1, 1]).unwrap();
        assert_eq!(c5.apply_word(&w, 0).unwrap(), 2);
        assert_eq!(c5.apply_word(&GeneratorWord::identity(), 4).unwrap(), 4);
        let w = GeneratorWord::from_signed(&[1, -1]).unwrap();
        assert_eq!(c5.apply_word(&w, 3).unwrap(), 3);
        assert_eq!(c5.apply_word(&GeneratorWord::power(1, -1), 0).unwrap(), 4);
    }

    #[test]
    fn word_errors() {
        let c5 = cycle(5);
        assert!(c5.apply_word(&GeneratorWord::identity(), 5).is_err());
        assert!(c5.apply_word(&GeneratorWord::power(2, 1), 0).is_err());
    }

    #[test]
    fn validation_rejects_non_bijections() {
        let err = FiniteAction::with_zero_labels(Mode::Free, 3, vec![vec![0, 0, 1]], 0);
        assert!(err.is_err());
        let err = FiniteAction::with_zero_labels(Mode::Free, 3, vec![vec![0, 1, 3]], 0);
        assert!(err.is_err());
        // a 3-cycle is not an involution
        let err = FiniteAction::with_zero_labels(Mode::Involution, 3, vec![vec![1, 2, 0]], 0);
        assert!(err.is_err());
        let ok = FiniteAction::with_zero_labels(Mode::Involution, 3, vec![vec![1, 0, 2]], 0);
        assert!(ok.is_ok());
        let labels = vec![LabelWord::zeros(2), LabelWord::zeros(3)];
        assert!(FiniteAction::new(Mode::Free, vec![], labels).is_err());
    }

    #[test]
    fn restriction() {
        let gens = vec![
            vec![1, 2, 3, 4, 5, 0],
            vec![1, 0, 3, 2, 5, 4],
            vec![0, 1, 2, 3, 4, 5],
        ];
        let labels = (0..6).map(|v| LabelWord::new(vec![v % 2 == 1])).collect();
        let a = FiniteAction::new(Mode::Free, gens, labels).unwrap();
        assert_eq!(a.restrict_generators(3).unwrap(), a);
        let r1 = a.restrict_generators(1).unwrap();
        assert_eq!(r1.d(), 1);
        assert_eq!(r1.generator(1), a.generator(1));
        assert_eq!(r1.labels(), a.labels());
        assert_eq!(
            a.restrict_generators(3).unwrap().restrict_generators(2).unwrap(),
            a.restrict_generators(2).unwrap()
        );
        assert!(a.restrict_generators(0).is_err());
        assert!(a.restrict_generators(4).is_err());
    }

    #[test]
    fn orbits() {
        let a = FiniteAction::with_zero_labels(Mode::Free, 5, vec![vec![1, 0, 3, 4, 2]], 0).unwrap();
        assert_eq!(a.orbit_ids(), vec![0, 0, 2, 2, 2]);
    }
}
