//! Adding a generator defined piecewise by words: `γ(g) = θ(w_x, g)` where
//! `x` is the first `M` label bits of `g`, with `w'_x` the intended inverse.

use num_bigint::BigInt;

use crate::action::{FiniteAction, GeneratorWord, LabelWord, Mode};
use crate::error::{Error, Result};
use crate::scalar::Rational;

/// For each `M`-bit label prefix, the words `(w_x, w'_x)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WordRule {
    m: usize,
    table: Vec<(GeneratorWord, GeneratorWord)>,
}

impl WordRule {
    /// `table[x]` is used for prefix `x` read as a big-endian integer.
    pub fn new(m: usize, table: Vec<(GeneratorWord, GeneratorWord)>) -> Result<Self> {
        if m > 24 {
            return Err(Error::Guard(format!("rule prefix length {m} too long")));
        }
        if table.len() != 1 << m {
            return Err(Error::input(format!(
                "rule has {} entries, a total rule on {m} bits needs {}",
                table.len(),
                1usize << m
            )));
        }
        Ok(WordRule { m, table })
    }

    /// The same pair of words for every vertex.
    pub fn constant(w: GeneratorWord, w_inv: GeneratorWord) -> Self {
        WordRule {
            m: 0,
            table: vec![(w, w_inv)],
        }
    }

    pub fn prefix_len(&self) -> usize {
        self.m
    }

    pub fn words(&self, label: &LabelWord) -> &(GeneratorWord, GeneratorWord) {
        &self.table[label.prefix(self.m) as usize]
    }

    /// Lines `<bits> <word_x> <word_x_inv>`, one per `M`-bit pattern. Words
    /// are comma-separated signed generator indices, `e` for the identity.
    pub fn parse(text: &str) -> Result<Self> {
        let mut m = None;
        let mut entries: Vec<Option<(GeneratorWord, GeneratorWord)>> = Vec::new();
        for (i, line) in text.lines().enumerate() {
            let line_no = i + 1;
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let f: Vec<&str> = line.split_whitespace().collect();
            if f.len() != 3 {
                return Err(Error::parse(line_no, "expected <bits> <word_x> <word_x_inv>"));
            }
            let bits = if f[0] == "-" { LabelWord::zeros(0) } else { LabelWord::parse(f[0]).map_err(|e| Error::parse(line_no, e.to_string()))? };
            let len = *m.get_or_insert(bits.len());
            if bits.len() != len {
                return Err(Error::parse(line_no, "patterns of different lengths"));
            }
            if len > 24 {
                return Err(Error::parse(line_no, "pattern longer than 24 bits"));
            }
            entries.resize(1 << len, None);
            let w = GeneratorWord::parse(f[1]).map_err(|e| Error::parse(line_no, e.to_string()))?;
            let w_inv = GeneratorWord::parse(f[2]).map_err(|e| Error::parse(line_no, e.to_string()))?;
            let slot = &mut entries[bits.prefix(len) as usize];
            if slot.is_some() {
                return Err(Error::parse(line_no, format!("pattern {bits} listed twice")));
            }
            *slot = Some((w, w_inv));
        }
        let m = m.ok_or_else(|| Error::input("empty rule file"))?;
        if let Some(x) = entries.iter().position(Option::is_none) {
            return Err(Error::input(format!(
                "rule is not total: pattern {} missing",
                LabelWord::from_prefix(x as u64, m)
            )));
        }
        WordRule::new(m, entries.into_iter().map(|e| e.expect("checked")).collect())
    }

    pub fn to_text(&self) -> String {
        self.table
            .iter()
            .enumerate()
            .map(|(x, (w, wi))| {
                let bits = if self.m == 0 { "-".to_string() } else { LabelWord::from_prefix(x as u64, self.m).to_string() };
                format!("{bits} {w} {wi}\n")
            })
            .collect()
    }
}

/// Outcome of [`oe_add_generator`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OEReport {
    /// Fraction of vertices where `w'` fails to invert `w`.
    pub bad_ratio: Rational,
    pub patched: u64,
    /// The exceptional mass the rule was designed for; the bad ratio is
    /// expected to stay below `2·eps` for large models.
    pub eps: Rational,
}

impl OEReport {
    pub fn within_bound(&self) -> bool {
        self.bad_ratio <= &self.eps * Rational::from_integer(2.into())
    }
}

/// Appends `γ` as a new free generator. Vertices where `w'` does not undo
/// `w` are bad; their images are reassigned by matching the bad sources to
/// the unused targets, both in increasing order.
pub fn oe_add_generator(base: &FiniteAction, rule: &WordRule, eps: &Rational) -> Result<(FiniteAction, OEReport)> {
    if base.label_len() < rule.prefix_len() {
        return Err(Error::input(format!(
            "labels have {} bits, the rule reads {}",
            base.label_len(),
            rule.prefix_len()
        )));
    }
    for (w, wi) in &rule.table {
        base.check_word(w)?;
        base.check_word(wi)?;
    }
    let n = base.n();
    let image: Vec<usize> = (0..n)
        .map(|g| base.apply_unchecked(&rule.words(base.label(g)).0, g))
        .collect();
    let good: Vec<bool> = (0..n)
        .map(|g| {
            let h = image[g];
            base.apply_unchecked(&rule.words(base.label(h)).1, h) == g
        })
        .collect();
    let mut hit = vec![false; n];
    let mut gamma = vec![u32::MAX; n];
    for g in (0..n).filter(|&g| good[g]) {
        hit[image[g]] = true;
        gamma[g] = image[g] as u32;
    }
    let sources = (0..n).filter(|&g| !good[g]);
    let targets = (0..n).filter(|&h| !hit[h]);
    let mut patched = 0u64;
    for (g, h) in sources.zip(targets) {
        gamma[g] = h as u32;
        patched += 1;
    }
    let mut gens = base.generators().to_vec();
    gens.push(gamma);
    let action = FiniteAction::new(Mode::Free, gens, base.labels().to_vec())?;
    let report = OEReport {
        bad_ratio: Rational::new(BigInt::from(patched), BigInt::from(n.max(1))),
        patched,
        eps: eps.clone(),
    };
    Ok((action, report))
}
