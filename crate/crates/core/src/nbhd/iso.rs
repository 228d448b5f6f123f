//! Explicit rooted colored graphs and a brute-force isomorphism test, used
//! as an independent check of the canonical codes.

use std::collections::{BTreeSet, VecDeque};

use crate::action::{FiniteAction, Letter};
use crate::error::{Error, Result};

use super::code::{BallModel, NeighborhoodType, Walk};

/// Classes above which [`iso_bruteforce`] refuses to search.
pub const ISO_MAX_VERTICES: usize = 40;

/// A rooted, vertex-labeled graph with colored arcs `v -> γ_i(v)`. Vertex 0
/// is the root.
#[derive(Debug, Clone)]
pub struct BallGraph {
    labels: Vec<u64>,
    arcs: BTreeSet<(usize, u32, usize)>,
    out: Vec<Vec<(u32, usize)>>,
    inc: Vec<Vec<(u32, usize)>>,
}

impl BallGraph {
    fn from_parts(labels: Vec<u64>, arcs: BTreeSet<(usize, u32, usize)>) -> Self {
        let n = labels.len();
        let mut out = vec![Vec::new(); n];
        let mut inc = vec![Vec::new(); n];
        for &(u, i, v) in &arcs {
            out[u].push((i, v));
            inc[v].push((i, u));
        }
        BallGraph {
            labels,
            arcs,
            out,
            inc,
        }
    }

    /// The induced subgraph on the graph-distance ball of radius `r` around
    /// `root`, found by breadth-first search.
    pub fn from_action(action: &FiniteAction, root: usize, r: u32, label_bits: u32) -> Self {
        let letters = action.mode().letters(action.d());
        let mut index = vec![usize::MAX; action.n()];
        let mut verts = vec![root];
        let mut dist = vec![0u32];
        index[root] = 0;
        let mut queue = VecDeque::from([root]);
        while let Some(x) = queue.pop_front() {
            let dx = dist[index[x]];
            if dx == r {
                continue;
            }
            for &a in &letters {
                let y = action.step(x, a);
                if index[y] == usize::MAX {
                    index[y] = verts.len();
                    verts.push(y);
                    dist.push(dx + 1);
                    queue.push_back(y);
                }
            }
        }
        let mut arcs = BTreeSet::new();
        for (k, &x) in verts.iter().enumerate() {
            for i in 1..=action.d() {
                let y = action.step(x, Letter::new(i));
                if index[y] != usize::MAX {
                    arcs.insert((k, i, index[y]));
                }
            }
        }
        let labels = verts
            .iter()
            .map(|&x| action.label(x).prefix(label_bits as usize))
            .collect();
        BallGraph::from_parts(labels, arcs)
    }

    /// The graph a canonical code describes.
    pub fn from_type(ty: &NeighborhoodType) -> Self {
        let model = BallModel::new(ty);
        let mut arcs = BTreeSet::new();
        for c in 0..model.size() {
            for i in 1..=ty.gens() {
                if let Some(t) = model.step(c, Letter::new(i)) {
                    arcs.insert((c, i, t));
                }
            }
        }
        BallGraph::from_parts(ty.class_labels().to_vec(), arcs)
    }

    pub fn vertex_count(&self) -> usize {
        self.labels.len()
    }

    pub fn arc_count(&self) -> usize {
        self.arcs.len()
    }

    fn signature(&self, v: usize) -> (u64, Vec<u32>, Vec<u32>, usize) {
        let mut o: Vec<u32> = self.out[v].iter().map(|&(i, _)| i).collect();
        let mut n: Vec<u32> = self.inc[v].iter().map(|&(i, _)| i).collect();
        o.sort_unstable();
        n.sort_unstable();
        let loops = self.out[v].iter().filter(|&&(_, w)| w == v).count();
        (self.labels[v], o, n, loops)
    }

    /// Root-preserving, label- and color-preserving isomorphism by
    /// backtracking.
    pub fn isomorphic(&self, other: &BallGraph) -> bool {
        if self.vertex_count() != other.vertex_count() || self.arc_count() != other.arc_count() {
            return false;
        }
        let n = self.vertex_count();
        let sig_a: Vec<_> = (0..n).map(|v| self.signature(v)).collect();
        let sig_b: Vec<_> = (0..n).map(|v| other.signature(v)).collect();
        if sig_a[0] != sig_b[0] {
            return false;
        }
        let mut map = vec![usize::MAX; n];
        let mut used = vec![false; n];
        map[0] = 0;
        used[0] = true;
        self.extend(other, &sig_a, &sig_b, &mut map, &mut used, 1)
    }

    fn consistent(&self, other: &BallGraph, map: &[usize], v: usize) -> bool {
        let fv = map[v];
        let out_ok = self.out[v].iter().all(|&(i, w)| {
            map[w] == usize::MAX || other.arcs.contains(&(fv, i, map[w]))
        });
        let in_ok = self.inc[v].iter().all(|&(i, w)| {
            map[w] == usize::MAX || other.arcs.contains(&(map[w], i, fv))
        });
        out_ok && in_ok
    }

    fn extend(
        &self,
        other: &BallGraph,
        sig_a: &[(u64, Vec<u32>, Vec<u32>, usize)],
        sig_b: &[(u64, Vec<u32>, Vec<u32>, usize)],
        map: &mut [usize],
        used: &mut [bool],
        v: usize,
    ) -> bool {
        if v == map.len() {
            return true;
        }
        for c in 0..map.len() {
            if used[c] || sig_a[v] != sig_b[c] {
                continue;
            }
            map[v] = c;
            if self.consistent(other, map, v) {
                used[c] = true;
                if self.extend(other, sig_a, sig_b, map, used, v + 1) {
                    return true;
                }
                used[c] = false;
            }
            map[v] = usize::MAX;
        }
        false
    }
}

/// Decides whether two codes describe isomorphic labeled rooted balls by
/// building both graphs and searching for an isomorphism. Only for small
/// balls (radius at most 2, at most [`ISO_MAX_VERTICES`] vertices).
pub fn iso_bruteforce(alpha: &NeighborhoodType, beta: &NeighborhoodType) -> Result<bool> {
    for t in [alpha, beta] {
        if t.radius() > 2 || t.size() > ISO_MAX_VERTICES {
            return Err(Error::Guard(format!(
                "brute-force isomorphism limited to radius 2 and {ISO_MAX_VERTICES} vertices"
            )));
        }
    }
    if alpha.radius() != beta.radius()
        || alpha.gens() != beta.gens()
        || alpha.label_bits() != beta.label_bits()
    {
        return Ok(false);
    }
    Ok(BallGraph::from_type(alpha).isomorphic(&BallGraph::from_type(beta)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::action::Mode;
    use crate::nbhd::neighborhood_code;

    #[test]
    fn graph_from_code_matches_bfs_ball() {
        let g = (0..6u32).map(|v| (v + 1) % 6).collect();
        let a = FiniteAction::with_zero_labels(Mode::Free, 6, vec![g], 2).unwrap();
        let t = neighborhood_code(&a, 0, 2).unwrap();
        let from_code = BallGraph::from_type(&t);
        let bfs = BallGraph::from_action(&a, 0, 2, 2);
        assert_eq!(from_code.vertex_count(), 5);
        // arcs inside the ball: 4 path arcs, none closing since n = 6
        assert_eq!(from_code.arc_count(), 4);
        assert!(from_code.isomorphic(&bfs));
    }

    #[test]
    fn distinguishes_labels() {
        let g: Vec<u32> = (0..5u32).map(|v| (v + 1) % 5).collect();
        let mk = |l: &[&str]| {
            let labels = l.iter().map(|s| crate::action::LabelWord::parse(s).unwrap()).collect();
            FiniteAction::new(Mode::Free, vec![g.clone()], labels).unwrap()
        };
        let a = mk(&["1", "0", "0", "0", "0"]);
        let t0 = neighborhood_code(&a, 0, 1).unwrap();
        let t1 = neighborhood_code(&a, 1, 1).unwrap();
        let t2 = neighborhood_code(&a, 2, 1).unwrap();
        assert!(!iso_bruteforce(&t0, &t1).unwrap());
        // 1 sees the 1 behind it, 4 sees it in front: mirror images differ
        let t4 = neighborhood_code(&a, 4, 1).unwrap();
        assert!(!iso_bruteforce(&t1, &t4).unwrap());
        assert!(iso_bruteforce(&t2, &neighborhood_code(&a, 3, 1).unwrap()).unwrap());
    }
}
