#![allow(dead_code)]

use rand::seq::SliceRandom;
use rand::Rng;
use sofic::seed::stage_rng;
use sofic::{FiniteAction, LabelWord, Mode};

/// Random action: uniform permutations in free mode; in involution mode,
/// random matchings leaving about a fifth of the vertices fixed.
pub fn random_action(seed: u64, n: usize, d: u32, mode: Mode, k: usize) -> FiniteAction {
    let mut rng = stage_rng(seed, "test-action");
    let gens = (0..d)
        .map(|_| {
            let mut p: Vec<u32> = (0..n as u32).collect();
            p.shuffle(&mut rng);
            match mode {
                Mode::Free => p,
                Mode::Involution => {
                    let mut g: Vec<u32> = (0..n as u32).collect();
                    let paired = n - n / 5;
                    for xy in p[..paired].chunks_exact(2) {
                        g[xy[0] as usize] = xy[1];
                        g[xy[1] as usize] = xy[0];
                    }
                    g
                }
            }
        })
        .collect();
    let labels = (0..n)
        .map(|_| LabelWord::new((0..k).map(|_| rng.random_bool(0.5)).collect()))
        .collect();
    FiniteAction::new(mode, gens, labels).unwrap()
}

pub fn cycle(n: usize, k: usize) -> FiniteAction {
    let g = (0..n as u32).map(|v| (v + 1) % n as u32).collect();
    FiniteAction::with_zero_labels(Mode::Free, n, vec![g], k).unwrap()
}

/// Radius-1 spec with `Any` selectors: the identity and each letter get a
/// random integer block with entries in `-2..=2`, some left out.
pub fn random_int_spec(seed: u64, gens: u32, mode: Mode, dim: usize) -> sofic::IntSpec {
    use sofic::operator::{SpecEntry, TypeSelector};
    let mut rng = stage_rng(seed, "test-spec");
    let mut words = vec![sofic::GeneratorWord::identity()];
    words.extend(mode.letters(gens).into_iter().map(|l| sofic::GeneratorWord::new(vec![l])));
    let mut entries = Vec::new();
    for word in words {
        if word.is_empty() || rng.random_bool(0.7) {
            let block = (0..dim * dim).map(|_| rng.random_range(-2..=2)).collect();
            entries.push(SpecEntry { selector: TypeSelector::Any, word, block });
        }
    }
    sofic::FiniteTypeOperatorSpec::new(1, dim, entries).unwrap()
}

pub fn dense_close(a: &nalgebra::DMatrix<sofic::Complex64>, b: &nalgebra::DMatrix<sofic::Complex64>, tol: f64) -> bool {
    a.shape() == b.shape() && (a - b).iter().all(|z| z.norm() <= tol)
}
