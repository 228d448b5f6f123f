use std::fmt;

use crate::error::{Error, Result};

/// How generator letters invert.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Mode {
    /// Free group: each generator has a distinct inverse letter.
    Free,
    /// Free product of involutions: every generator is its own inverse.
    Involution,
}

impl Mode {
    pub fn as_str(self) -> &'static str {
        match self {
            Mode::Free => "free",
            Mode::Involution => "involution",
        }
    }

    pub fn parse(s: &str) -> Option<Mode> {
        match s {
            "free" => Some(Mode::Free),
            "involution" => Some(Mode::Involution),
            _ => None,
        }
    }

    /// Letters available over `d` generators, in enumeration order.
    pub fn letters(self, d: u32) -> Vec<Letter> {
        let mut out = Vec::new();
        for g in 1..=d {
            out.push(Letter::new(g));
            if self == Mode::Free {
                out.push(Letter::inv(g));
            }
        }
        out
    }

    /// Whether `a` followed by `b` (in word order) cancels.
    pub fn cancels(self, a: Letter, b: Letter) -> bool {
        a.gen == b.gen
            && match self {
                Mode::Free => a.inverse != b.inverse,
                Mode::Involution => true,
            }
    }
}

impl fmt::Display for Mode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// A generator or its inverse. Generators are 1-based. Ordering is
/// `γ1 < γ1⁻¹ < γ2 < γ2⁻¹ < …`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Letter {
    pub gen: u32,
    pub inverse: bool,
}

impl Letter {
    pub fn new(gen: u32) -> Self {
        Letter {
            gen,
            inverse: false,
        }
    }

    pub fn inv(gen: u32) -> Self {
        Letter { gen, inverse: true }
    }

    pub fn inverted(self) -> Self {
        Letter {
            gen: self.gen,
            inverse: !self.inverse,
        }
    }

    fn signed(self) -> i64 {
        if self.inverse {
            -i64::from(self.gen)
        } else {
            i64::from(self.gen)
        }
    }
}

/// A word in the generators, read as a composition: the rightmost letter acts
/// first, so `θ(uv, x) = θ(u, θ(v, x))`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct GeneratorWord {
    letters: Vec<Letter>,
}

impl GeneratorWord {
    pub fn identity() -> Self {
        Self::default()
    }

    pub fn new(letters: Vec<Letter>) -> Self {
        GeneratorWord { letters }
    }

    /// Builds a word from signed generator indices, e.g. `[1, -2]` = γ1γ2⁻¹.
    pub fn from_signed(ints: &[i64]) -> Result<Self> {
        let mut letters = Vec::with_capacity(ints.len());
        for &i in ints {
            if i == 0 {
                return Err(Error::input("generator index 0 in word"));
            }
            let gen = u32::try_from(i.unsigned_abs())
                .map_err(|_| Error::input(format!("generator index {i} too large")))?;
            letters.push(Letter {
                gen,
                inverse: i < 0,
            });
        }
        Ok(GeneratorWord { letters })
    }

    /// `γ_gen^k`, negative `k` giving inverse letters.
    pub fn power(gen: u32, k: i64) -> Self {
        let l = if k < 0 {
            Letter::inv(gen)
        } else {
            Letter::new(gen)
        };
        GeneratorWord {
            letters: vec![l; k.unsigned_abs() as usize],
        }
    }

    pub fn letters(&self) -> &[Letter] {
        &self.letters
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    pub fn max_gen(&self) -> u32 {
        self.letters.iter().map(|l| l.gen).max().unwrap_or(0)
    }

    /// `self · other`.
    pub fn concat(&self, other: &GeneratorWord) -> GeneratorWord {
        let mut letters = self.letters.clone();
        letters.extend_from_slice(&other.letters);
        GeneratorWord { letters }
    }

    pub fn inverse(&self, mode: Mode) -> GeneratorWord {
        let letters = self
            .letters
            .iter()
            .rev()
            .map(|&l| match mode {
                Mode::Free => l.inverted(),
                Mode::Involution => Letter::new(l.gen),
            })
            .collect();
        GeneratorWord { letters }
    }

    /// Free reduction (free mode) or cancellation of repeated involutions.
    /// In involution mode all letters are normalized to positive sign.
    pub fn reduced(&self, mode: Mode) -> GeneratorWord {
        let mut out: Vec<Letter> = Vec::with_capacity(self.letters.len());
        for &l in &self.letters {
            let l = match mode {
                Mode::Free => l,
                Mode::Involution => Letter::new(l.gen),
            };
            match out.last() {
                Some(&prev) if mode.cancels(prev, l) => {
                    out.pop();
                }
                _ => out.push(l),
            }
        }
        GeneratorWord { letters: out }
    }

    pub fn is_reduced(&self, mode: Mode) -> bool {
        self.reduced(mode) == *self
    }

    /// Parses `e` (identity) or comma-separated signed generator indices.
    pub fn parse(s: &str) -> Result<Self> {
        let s = s.trim();
        if s == "e" || s.is_empty() {
            return Ok(Self::identity());
        }
        let ints = s
            .split(',')
            .map(|t| {
                t.trim()
                    .parse::<i64>()
                    .map_err(|_| Error::input(format!("bad letter '{t}' in word '{s}'")))
            })
            .collect::<Result<Vec<_>>>()?;
        Self::from_signed(&ints)
    }
}

impl fmt::Display for GeneratorWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.letters.is_empty() {
            return f.write_str("e");
        }
        for (i, l) in self.letters.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{}", l.signed())?;
        }
        Ok(())
    }
}

/// Entry of a [`WordEnumeration`]: `first · rest`, where `rest` indexes a
/// shorter word. The identity has no first letter.
#[derive(Debug, Clone, Copy)]
pub struct EnumeratedWord {
    pub first: Option<Letter>,
    pub rest: usize,
    pub len: u32,
}

/// Reduced words of length at most `radius + 1`, ordered by length then
/// lexicographically on letters. The words of length `radius + 1` form the
/// boundary layer used to record edges between outermost vertices.
#[derive(Debug, Clone)]
pub struct WordEnumeration {
    pub gens: u32,
    pub mode: Mode,
    pub radius: u32,
    words: Vec<EnumeratedWord>,
    /// `starts[l]` is the index of the first word of length `l`.
    starts: Vec<usize>,
}

impl WordEnumeration {
    pub fn new(gens: u32, mode: Mode, radius: u32) -> Self {
        let letters = mode.letters(gens);
        let mut words = vec![EnumeratedWord {
            first: None,
            rest: 0,
            len: 0,
        }];
        let mut starts = vec![0, 1];
        for len in 1..=radius + 1 {
            let (lo, hi) = (starts[len as usize - 1], starts[len as usize]);
            for &a in &letters {
                for rest in lo..hi {
                    let ok = match words[rest].first {
                        None => true,
                        Some(b) => !mode.cancels(a, b),
                    };
                    if ok {
                        words.push(EnumeratedWord {
                            first: Some(a),
                            rest,
                            len,
                        });
                    }
                }
            }
            starts.push(words.len());
        }
        WordEnumeration {
            gens,
            mode,
            radius,
            words,
            starts,
        }
    }

    /// Words of length at most `len`.
    pub fn count_upto(&self, len: u32) -> usize {
        self.starts[(len as usize + 1).min(self.starts.len() - 1)]
    }

    /// `|W_radius|`.
    pub fn ball_len(&self) -> usize {
        self.count_upto(self.radius)
    }

    pub fn all(&self) -> &[EnumeratedWord] {
        &self.words
    }

    pub fn word(&self, idx: usize) -> GeneratorWord {
        let mut letters = Vec::new();
        let mut i = idx;
        while let Some(a) = self.words[i].first {
            letters.push(a);
            i = self.words[i].rest;
        }
        GeneratorWord::new(letters)
    }

    /// Index of a reduced word of length at most `radius + 1`.
    pub fn index_of(&self, w: &GeneratorWord) -> Option<usize> {
        if w.len() > self.radius as usize + 1 {
            return None;
        }
        // Walk from the right end: the suffix of length j has a unique index.
        let mut idx = 0usize;
        for (j, &a) in w.letters().iter().rev().enumerate() {
            let len = j + 1;
            let (lo, hi) = (self.starts[len], self.starts[len + 1]);
            idx = (lo..hi).find(|&c| self.words[c].rest == idx && self.words[c].first == Some(a))?;
        }
        Some(idx)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_and_display() {
        let w = GeneratorWord::parse("1,-2, 3").unwrap();
        assert_eq!(w.to_string(), "1,-2,3");
        assert_eq!(GeneratorWord::parse("e").unwrap(), GeneratorWord::identity());
        assert!(GeneratorWord::parse("1,0").is_err());
        assert!(GeneratorWord::parse("x").is_err());
    }

    #[test]
    fn reduction() {
        let w = GeneratorWord::from_signed(&[1, 2, -2, -1, 3]).unwrap();
        assert_eq!(w.reduced(Mode::Free).to_string(), "3");
        let v = GeneratorWord::from_signed(&[1, 2, -2, 1]).unwrap();
        assert!(v.reduced(Mode::Involution).is_empty());
        assert!(GeneratorWord::from_signed(&[1, 1]).unwrap().is_reduced(Mode::Free));
    }

    #[test]
    fn enumeration_sizes() {
        // free F_d: 1 + 2d * sum (2d-1)^j
        let e = WordEnumeration::new(2, Mode::Free, 2);
        assert_eq!(e.count_upto(0), 1);
        assert_eq!(e.count_upto(1), 5);
        assert_eq!(e.count_upto(2), 17);
        assert_eq!(e.count_upto(3), 53);
        let i = WordEnumeration::new(3, Mode::Involution, 1);
        assert_eq!(i.count_upto(1), 4);
        assert_eq!(i.count_upto(2), 10);
    }

    #[test]
    fn enumeration_is_length_lex_and_indexable() {
        let e = WordEnumeration::new(2, Mode::Free, 2);
        let words: Vec<_> = (0..e.all().len()).map(|i| e.word(i)).collect();
        for pair in words.windows(2) {
            let (a, b) = (&pair[0], &pair[1]);
            assert!((a.len(), a.letters()) < (b.len(), b.letters()));
            assert!(b.is_reduced(Mode::Free));
        }
        for (i, w) in words.iter().enumerate() {
            assert_eq!(e.index_of(w), Some(i));
        }
        assert_eq!(words[1].to_string(), "1");
        assert_eq!(words[2].to_string(), "-1");
    }
}
