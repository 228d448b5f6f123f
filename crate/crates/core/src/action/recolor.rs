use super::finite::FiniteAction;
use super::word::Mode;

/// Re-expresses a free-mode action through involutions with the same orbits.
///
/// The simple graph underlying the action (loops dropped, parallel edges
/// merged) is properly edge-colored greedily, edges taken in sorted order.
/// Each color class is a matching and becomes one involution. At most
/// `2·(2d) - 1` colors are used; an action without non-loop edges yields a
/// single identity generator.
pub fn recolor_to_involutions(action: &FiniteAction) -> FiniteAction {
    let n = action.n();
    let mut edges: Vec<(u32, u32)> = action
        .generators()
        .iter()
        .flat_map(|g| {
            g.iter()
                .enumerate()
                .filter(|&(v, &w)| v != w as usize)
                .map(|(v, &w)| (v.min(w as usize) as u32, v.max(w as usize) as u32))
        })
        .collect();
    edges.sort_unstable();
    edges.dedup();

    // colors_at[v] = colors already used at v
    let mut colors_at: Vec<Vec<u32>> = vec![Vec::new(); n];
    let mut classes: Vec<Vec<u32>> = Vec::new();
    for &(u, v) in &edges {
        let c = (0u32..)
            .find(|c| !colors_at[u as usize].contains(c) && !colors_at[v as usize].contains(c))
            .expect("unbounded color search");
        if c as usize == classes.len() {
            classes.push((0..n as u32).collect());
        }
        let s = &mut classes[c as usize];
        s[u as usize] = v;
        s[v as usize] = u;
        colors_at[u as usize].push(c);
        colors_at[v as usize].push(c);
    }
    if classes.is_empty() {
        classes.push((0..n as u32).collect());
    }
    FiniteAction::new(Mode::Involution, classes, action.labels().to_vec())
        .expect("color classes are matchings")
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cycle(n: usize) -> FiniteAction {
        let g = (0..n as u32).map(|v| (v + 1) % n as u32).collect();
        FiniteAction::with_zero_labels(Mode::Free, n, vec![g], 1).unwrap()
    }

    fn is_perfect_matching(p: &[u32]) -> bool {
        p.iter().enumerate().all(|(v, &w)| v != w as usize && p[w as usize] as usize == v)
    }

    #[test]
    fn identity_becomes_single_identity() {
        let a = FiniteAction::with_zero_labels(Mode::Free, 3, vec![vec![0, 1, 2], vec![0, 1, 2]], 0).unwrap();
        let r = recolor_to_involutions(&a);
        assert_eq!(r.d(), 1);
        assert_eq!(r.generator(1), &[0, 1, 2]);
    }

    #[test]
    fn even_cycle_two_matchings() {
        let r = recolor_to_involutions(&cycle(4));
        assert_eq!(r.d(), 2);
        assert!(is_perfect_matching(r.generator(1)));
        assert!(is_perfect_matching(r.generator(2)));
        assert_eq!(r.orbit_ids(), cycle(4).orbit_ids());
    }

    #[test]
    fn odd_cycle_three_colors() {
        let r = recolor_to_involutions(&cycle(5));
        assert_eq!(r.d(), 3);
        assert_eq!(r.orbit_ids(), cycle(5).orbit_ids());
    }
}
