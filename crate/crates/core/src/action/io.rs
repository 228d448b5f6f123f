//! Plain-text action format.
//!
//! ```text
//! n d k mode
//! <n images of generator 1>
//! ...
//! <n images of generator d>
//! <k-bit label of vertex 0>
//! ...
//! ```

use std::fmt::Write as _;

use crate::error::{Error, Result};

use super::finite::FiniteAction;
use super::label::LabelWord;
use super::word::Mode;

pub fn write_action(a: &FiniteAction) -> String {
    let mut out = String::with_capacity(a.n() * (a.d() as usize * 7 + a.label_len() + 1) + 32);
    writeln!(out, "{} {} {} {}", a.n(), a.d(), a.label_len(), a.mode()).unwrap();
    for g in a.generators() {
        for (i, w) in g.iter().enumerate() {
            if i > 0 {
                out.push(' ');
            }
            write!(out, "{w}").unwrap();
        }
        out.push('\n');
    }
    for l in a.labels() {
        writeln!(out, "{l}").unwrap();
    }
    out
}

pub fn parse_action(text: &str) -> Result<FiniteAction> {
    let mut lines = text.lines().enumerate().map(|(i, l)| (i + 1, l.trim_end_matches('\r')));
    let (ln, header) = lines.next().ok_or_else(|| Error::parse(1, "empty action file"))?;
    let parts: Vec<&str> = header.split_whitespace().collect();
    if parts.len() != 4 {
        return Err(Error::parse(ln, "header must be `n d k mode`"));
    }
    let num = |s: &str, what: &str| {
        s.parse::<usize>()
            .map_err(|_| Error::parse(ln, format!("bad {what} '{s}'")))
    };
    let n = num(parts[0], "n")?;
    let d = num(parts[1], "d")?;
    let k = num(parts[2], "k")?;
    let mode = Mode::parse(parts[3])
        .ok_or_else(|| Error::parse(ln, format!("unknown mode '{}'", parts[3])))?;

    let mut gens = Vec::with_capacity(d);
    for gi in 0..d {
        let (ln, line) = lines
            .next()
            .ok_or_else(|| Error::parse(ln + gi + 1, format!("missing generator {}", gi + 1)))?;
        let images = line
            .split_whitespace()
            .map(|t| {
                t.parse::<u32>()
                    .map_err(|_| Error::parse(ln, format!("bad image '{t}'")))
            })
            .collect::<Result<Vec<_>>>()?;
        if images.len() != n {
            return Err(Error::parse(
                ln,
                format!("generator {} has {} images, expected {n}", gi + 1, images.len()),
            ));
        }
        gens.push(images);
    }
    let mut labels = Vec::with_capacity(n);
    for v in 0..n {
        let next = lines.next();
        let label = match next {
            Some((ln, line)) => {
                let l = LabelWord::parse(line.trim()).map_err(|e| Error::parse(ln, e.to_string()))?;
                if l.len() != k {
                    return Err(Error::parse(ln, format!("label of vertex {v} has length {}, expected {k}", l.len())));
                }
                l
            }
            None if k == 0 => LabelWord::zeros(0),
            None => return Err(Error::parse(d + 2 + v, format!("missing label of vertex {v}"))),
        };
        labels.push(label);
    }
    if let Some((ln, extra)) = lines.find(|(_, l)| !l.trim().is_empty()) {
        return Err(Error::parse(ln, format!("unexpected trailing content '{extra}'")));
    }
    FiniteAction::new(mode, gens, labels).map_err(|e| Error::parse(1, e.to_string()))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn round_trip() {
        let labels = ["01", "11", "00"].iter().map(|s| LabelWord::parse(s).unwrap()).collect();
        let a = FiniteAction::new(Mode::Involution, vec![vec![1, 0, 2]], labels).unwrap();
        let text = write_action(&a);
        assert_eq!(text, "3 1 2 involution\n1 0 2\n01\n11\n00\n");
        assert_eq!(parse_action(&text).unwrap(), a);
    }

    #[test]
    fn zero_length_labels_may_be_omitted() {
        let a = parse_action("2 1 0 free\n1 0\n").unwrap();
        assert_eq!(a.n(), 2);
        assert_eq!(parse_action(&write_action(&a)).unwrap(), a);
    }

    #[test]
    fn errors_name_the_line() {
        let err = parse_action("3 1 1 free\n1 2 x\n0\n0\n0\n").unwrap_err();
        assert_eq!(err, Error::parse(2, "bad image 'x'"));
        let err = parse_action("2 1 1 free\n1 0\n0\n2\n").unwrap_err();
        assert!(matches!(err, Error::Parse { line: 4, .. }));
        let err = parse_action("2 1 1 weird\n1 0\n0\n1\n").unwrap_err();
        assert!(matches!(err, Error::Parse { line: 1, .. }));
    }
}
