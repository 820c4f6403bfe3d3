//! Canonical orderings as topological sortings of canonical orientations.

use std::collections::BTreeSet;
use std::ops::ControlFlow;

use thiserror::Error;

use crate::ice::CanonicalOrientation;
use crate::plane_graph::{MaximalPlaneGraph, VertexId};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum OrderingViolation {
    #[error("not a permutation of the vertices")]
    NotPermutation,
    #[error("v1 ≠ u")]
    FirstVertex,
    #[error("v2 ≠ v")]
    SecondVertex,
    #[error("vn ≠ z")]
    LastVertex,
    #[error("k={k}: G_k is not biconnected")]
    NotBiconnected { k: usize },
    #[error("k={k}: v_k is not on the outer face of G_(k-1)")]
    NotOnOuterFace { k: usize },
    #[error("k={k}: neighbours of v_k are not an interval of at least 2 vertices on C_(k-1) - (u,v)")]
    NotInterval { k: usize },
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
#[error("orientation has a directed cycle")]
pub struct CycleError;

struct Sorter {
    succ: Vec<Vec<VertexId>>,
    indeg: Vec<usize>,
    avail: BTreeSet<VertexId>,
    seq: Vec<VertexId>,
}

impl Sorter {
    fn place(&mut self, v: VertexId) {
        self.avail.remove(&v);
        self.seq.push(v);
        for i in 0..self.succ[v].len() {
            let w = self.succ[v][i];
            self.indeg[w] -= 1;
            if self.indeg[w] == 0 {
                self.avail.insert(w);
            }
        }
    }

    fn unplace(&mut self, v: VertexId) {
        for i in 0..self.succ[v].len() {
            let w = self.succ[v][i];
            if self.indeg[w] == 0 {
                self.avail.remove(&w);
            }
            self.indeg[w] += 1;
        }
        self.seq.pop();
        self.avail.insert(v);
    }

    fn run<B>(&mut self, visit: &mut impl FnMut(&[VertexId]) -> ControlFlow<B>) -> ControlFlow<B> {
        if self.seq.len() == self.succ.len() {
            return visit(&self.seq);
        }
        let mut cur = self.avail.first().copied();
        while let Some(v) = cur {
            self.place(v);
            let r = self.run(visit);
            self.unplace(v);
            r?;
            cur = self.avail.range(v + 1..).next().copied();
        }
        ControlFlow::Continue(())
    }
}

fn is_acyclic(succ: &[Vec<VertexId>]) -> bool {
    let mut indeg = vec![0; succ.len()];
    for list in succ {
        for &w in list {
            indeg[w] += 1;
        }
    }
    let mut ready: Vec<VertexId> = (0..succ.len()).filter(|&v| indeg[v] == 0).collect();
    let mut seen = 0;
    while let Some(v) = ready.pop() {
        seen += 1;
        for &w in &succ[v] {
            indeg[w] -= 1;
            if indeg[w] == 0 {
                ready.push(w);
            }
        }
    }
    seen == succ.len()
}

/// Calls `visit` with every linear extension of `d`. Among available
/// sources the smallest vertex id is tried first, so sortings arrive in
/// lexicographic order.
pub fn topological_sortings<B>(
    g: &MaximalPlaneGraph,
    d: &CanonicalOrientation,
    mut visit: impl FnMut(&[VertexId]) -> ControlFlow<B>,
) -> Result<ControlFlow<B>, CycleError> {
    let succ = d.successors(g);
    if !is_acyclic(&succ) {
        return Err(CycleError);
    }
    let indeg = d.indegrees(g);
    let avail = (0..g.n()).filter(|&v| indeg[v] == 0).collect();
    let mut sorter = Sorter { succ, indeg, avail, seq: Vec::with_capacity(g.n()) };
    Ok(sorter.run(&mut visit))
}

/// The lexicographically first topological sorting of `d`.
pub fn first_topological_sorting(
    g: &MaximalPlaneGraph,
    d: &CanonicalOrientation,
) -> Result<Vec<VertexId>, CycleError> {
    let mut out = Vec::new();
    let _ = topological_sortings(g, d, |seq| {
        out = seq.to_vec();
        ControlFlow::Break(())
    })?;
    Ok(out)
}

/// Orients every edge from the earlier to the later vertex of `seq`.
pub fn orientation_of(g: &MaximalPlaneGraph, seq: &[VertexId]) -> CanonicalOrientation {
    let mut pos = vec![0; g.n()];
    for (i, &v) in seq.iter().enumerate() {
        pos[v] = i;
    }
    let forward = g.edges().iter().map(|&[a, b]| pos[a] < pos[b]).collect();
    CanonicalOrientation { root: g.outer(), forward }
}

/// Right-hand walk from `u -> v` in the subgraph induced by `inside`.
fn outer_walk(g: &MaximalPlaneGraph, inside: &[bool]) -> Vec<VertexId> {
    let [u, v, _] = g.outer();
    let mut walk = vec![u];
    let (mut a, mut b) = (u, v);
    while !(b == v && a == u && walk.len() > 1) {
        walk.push(b);
        let mut e = g.edge_between(a, b).expect("walk follows edges");
        loop {
            e = g.succ(b, e);
            if inside[g.other(e, b)] {
                break;
            }
        }
        a = b;
        b = g.other(e, a);
        if walk.len() > 2 * g.edge_count() + 2 {
            break;
        }
    }
    walk.pop();
    walk
}

fn is_biconnected(g: &MaximalPlaneGraph, inside: &[bool], size: usize) -> bool {
    let members: Vec<VertexId> = (0..g.n()).filter(|&x| inside[x]).collect();
    for &cut in &members {
        let start = *members.iter().find(|&&x| x != cut).expect("at least 3 vertices");
        let mut seen = vec![false; g.n()];
        seen[start] = true;
        let mut stack = vec![start];
        let mut count = 1;
        while let Some(x) = stack.pop() {
            for y in g.neighbors(x) {
                if inside[y] && y != cut && !seen[y] {
                    seen[y] = true;
                    count += 1;
                    stack.push(y);
                }
            }
        }
        if count != size - 1 {
            return false;
        }
    }
    true
}

/// Checks the canonical ordering conditions, reporting the first violation.
pub fn is_canonical_ordering(g: &MaximalPlaneGraph, seq: &[VertexId]) -> Result<(), OrderingViolation> {
    let n = g.n();
    let mut seen = vec![false; n];
    if seq.len() != n || seq.iter().any(|&v| v >= n || std::mem::replace(&mut seen[v], true)) {
        return Err(OrderingViolation::NotPermutation);
    }
    let [u, v, z] = g.outer();
    if seq[0] != u {
        return Err(OrderingViolation::FirstVertex);
    }
    if seq[1] != v {
        return Err(OrderingViolation::SecondVertex);
    }
    if seq[n - 1] != z {
        return Err(OrderingViolation::LastVertex);
    }
    let mut inside = vec![false; n];
    inside[u] = true;
    inside[v] = true;
    for k in 2..n {
        // G_k holds seq[..k]; check the step that adds seq[k] = v_(k+1).
        if k >= 3 && !is_biconnected(g, &inside, k) {
            return Err(OrderingViolation::NotBiconnected { k });
        }
        let walk = outer_walk(g, &inside);
        // Path C_k - (u, v), from v round to u.
        let mut path = walk[1..].to_vec();
        path.push(u);
        let x = seq[k];
        let mut positions: Vec<usize> = Vec::new();
        for y in g.neighbors(x).filter(|&y| inside[y]) {
            match path.iter().position(|&p| p == y) {
                Some(i) => positions.push(i),
                None => return Err(OrderingViolation::NotInterval { k: k + 1 }),
            }
        }
        positions.sort_unstable();
        if positions.len() < 2 || positions.windows(2).any(|w| w[1] != w[0] + 1) {
            return Err(OrderingViolation::NotInterval { k: k + 1 });
        }
        inside[x] = true;
        if !outer_walk(g, &inside).contains(&x) {
            return Err(OrderingViolation::NotOnOuterFace { k: k + 1 });
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures::{self, octa};
    use crate::ice::canonical_orientations;

    fn all_sortings(g: &MaximalPlaneGraph, d: &CanonicalOrientation) -> Vec<Vec<VertexId>> {
        let mut out = Vec::new();
        let _ = topological_sortings::<()>(g, d, |s| {
            out.push(s.to_vec());
            ControlFlow::Continue(())
        })
        .unwrap();
        out
    }

    #[test]
    fn triangle_and_k4_sortings() {
        let t = fixtures::triangle();
        let d = canonical_orientations(&t).next().unwrap();
        assert_eq!(all_sortings(&t, &d), vec![vec![0, 1, 2]]);
        let k = fixtures::k4();
        let d = canonical_orientations(&k).next().unwrap();
        assert_eq!(all_sortings(&k, &d), vec![vec![0, 1, 3, 2]]);
    }

    #[test]
    fn octahedron_b_a_c_orientation() {
        use octa::*;
        let g = fixtures::octahedron();
        let seq = vec![U, V, B, A, C, Z];
        let d = orientation_of(&g, &seq);
        assert_eq!(all_sortings(&g, &d), vec![seq]);
    }

    #[test]
    fn k4_validator() {
        let g = fixtures::k4();
        assert_eq!(is_canonical_ordering(&g, &[0, 1, 3, 2]), Ok(()));
        let err = is_canonical_ordering(&g, &[0, 3, 1, 2]).unwrap_err();
        assert_eq!(err.to_string(), "v2 ≠ v");
        assert_eq!(is_canonical_ordering(&g, &[0, 1, 1, 2]), Err(OrderingViolation::NotPermutation));
    }

    #[test]
    fn octahedron_fails_at_three() {
        use octa::*;
        let g = fixtures::octahedron();
        assert_eq!(
            is_canonical_ordering(&g, &[U, V, A, B, C, Z]),
            Err(OrderingViolation::NotInterval { k: 3 })
        );
    }

    #[test]
    fn round_trip_through_orientation() {
        let g = fixtures::six_stacked();
        for d in canonical_orientations(&g) {
            for s in all_sortings(&g, &d) {
                assert_eq!(orientation_of(&g, &s), d);
                assert_eq!(is_canonical_ordering(&g, &s), Ok(()));
            }
        }
    }

    #[test]
    fn cycle_is_rejected() {
        let g = fixtures::triangle();
        let d = CanonicalOrientation { root: g.outer(), forward: vec![true, true, true] };
        // Edges 0-1, 0-2, 1-2 all forward is acyclic; flip 0-2 to make 0->1->2->0.
        let mut c = d.clone();
        let e = g.edge_between(0, 2).unwrap();
        c.forward[e] = !c.forward[e];
        assert!(topological_sortings::<()>(&g, &d, |_| ControlFlow::Continue(())).is_ok());
        assert_eq!(topological_sortings::<()>(&g, &c, |_| ControlFlow::Continue(())), Err(CycleError));
    }
}
