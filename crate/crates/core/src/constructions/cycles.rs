//! The cycle ratio `ν_q`: the fraction of vertices on a short cycle.

use num_bigint::BigInt;
use rayon::prelude::*;

use crate::action::{FiniteAction, Mode};
use crate::scalar::Rational;

/// Edges at a vertex as `(neighbor, edge id)`. In free mode each generator
/// contributes an out-edge and an in-edge; in involution mode `S_i` gives a
/// single undirected edge, so stepping back along it is a backtrack.
fn incident(action: &FiniteAction, x: usize, out: &mut Vec<(usize, u64)>) {
    out.clear();
    let d = action.d() as u64;
    for (i, g) in action.generators().iter().enumerate() {
        let y = g[x] as usize;
        match action.mode() {
            Mode::Free => {
                out.push((y, x as u64 * d + i as u64));
                let z = action.step(x, crate::action::Letter::inv(i as u32 + 1));
                out.push((z, z as u64 * d + i as u64));
            }
            Mode::Involution => {
                out.push((y, x.min(y) as u64 * d + i as u64));
            }
        }
    }
}

/// Whether `root` lies on a cycle of length at most `q`: a closed path with
/// distinct intermediate vertices and no edge used twice. Loops are cycles
/// of length 1; two distinct edges between the same pair form a 2-cycle.
fn on_short_cycle(action: &FiniteAction, root: usize, q: u32) -> bool {
    let mut path: Vec<usize> = vec![root];
    let mut edges: Vec<u64> = Vec::new();
    let mut scratch = Vec::new();
    fn search(
        action: &FiniteAction,
        q: u32,
        path: &mut Vec<usize>,
        edges: &mut Vec<u64>,
        scratch: &mut Vec<(usize, u64)>,
    ) -> bool {
        let x = *path.last().expect("path starts at the root");
        incident(action, x, scratch);
        let next = scratch.clone();
        for (y, e) in next {
            if edges.contains(&e) {
                continue;
            }
            if y == path[0] {
                return true;
            }
            if path.len() as u32 >= q || path.contains(&y) {
                continue;
            }
            path.push(y);
            edges.push(e);
            if search(action, q, path, edges, scratch) {
                return true;
            }
            path.pop();
            edges.pop();
        }
        false
    }
    q >= 1 && search(action, q, &mut path, &mut edges, &mut scratch)
}

/// `ν_q` as an exact fraction of `n`.
pub fn cycle_ratio(action: &FiniteAction, q: u32) -> Rational {
    let n = action.n();
    if n == 0 {
        return Rational::from_integer(0.into());
    }
    let hits = (0..n)
        .into_par_iter()
        .filter(|&v| on_short_cycle(action, v, q))
        .count();
    Rational::new(BigInt::from(hits), BigInt::from(n))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::constructions::{build_profinite, Labeling, Preset};
    use num_traits::{One, Zero};

    #[test]
    fn cycle_lengths() {
        let c = build_profinite(Preset::Cyclic, 7, Labeling::Zeros(0), 0).unwrap();
        assert!(cycle_ratio(&c, 6).is_zero());
        assert!(cycle_ratio(&c, 7).is_one());
        let loops = FiniteAction::with_zero_labels(Mode::Free, 3, vec![vec![0, 2, 1]], 0).unwrap();
        // vertex 0 has a loop, 1 and 2 form a 2-cycle through two distinct edges
        assert!(cycle_ratio(&loops, 1) == Rational::new(1.into(), 3.into()));
        assert!(cycle_ratio(&loops, 2).is_one());
    }

    #[test]
    fn involution_backtrack_is_not_a_cycle() {
        let swap = FiniteAction::with_zero_labels(Mode::Involution, 2, vec![vec![1, 0]], 0).unwrap();
        assert!(cycle_ratio(&swap, 4).is_zero());
        let double = FiniteAction::with_zero_labels(Mode::Involution, 2, vec![vec![1, 0], vec![1, 0]], 0).unwrap();
        assert!(cycle_ratio(&double, 2).is_one());
        let fixed = FiniteAction::with_zero_labels(Mode::Involution, 1, vec![vec![0]], 0).unwrap();
        assert!(cycle_ratio(&fixed, 1).is_one());
    }
}
