//! Brute-force enumerators and validators used as ground truth in tests.

use std::collections::BTreeSet;

use itertools::Itertools;
use thiserror::Error;

use crate::geometry::{overlap_at_shared_endpoint, segments_touch, Coord, Drawing};
use crate::ice::CanonicalOrientation;
use crate::orderings::is_canonical_ordering;
use crate::plane_graph::{EdgeId, MaximalPlaneGraph, VertexId};

/// Largest edge count accepted by [`brute_force_orientations`].
pub const MAX_BRUTE_FORCE_EDGES: usize = 24;
/// Largest vertex count accepted by [`brute_force_orderings`].
pub const MAX_BRUTE_FORCE_VERTICES: usize = 8;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum OracleError {
    #[error("graph has {found} edges; brute force is limited to {limit}")]
    TooManyEdges { found: usize, limit: usize },
    #[error("graph has {found} vertices; brute force is limited to {limit}")]
    TooManyVertices { found: usize, limit: usize },
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum OrientationViolation {
    #[error("orientation has {found} bits for {expected} edges")]
    WrongLength { expected: usize, found: usize },
    #[error("u not a source")]
    SourceNotU,
    #[error("z not a sink")]
    SinkNotZ,
    #[error("vertex {0} is a second source")]
    ExtraSource(VertexId),
    #[error("vertex {0} is a second sink")]
    ExtraSink(VertexId),
    #[error("internal vertex {vertex} indegree {indegree}")]
    LowIndegree { vertex: VertexId, indegree: usize },
    #[error("directed cycle")]
    Cycle,
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum PlanarityViolation {
    #[error("drawing has {found} points for {expected} vertices")]
    WrongLength { expected: usize, found: usize },
    #[error("vertices {0} and {1} share a point")]
    SharedPoint(VertexId, VertexId),
    #[error("edges {0} and {1} overlap")]
    Overlap(EdgeId, EdgeId),
    #[error("edges {0} and {1} intersect")]
    Crossing(EdgeId, EdgeId),
}

/// A deduplicated set of orientations of one rooted graph, ordered
/// lexicographically by direction bits.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct OrientationSet {
    bits: BTreeSet<Vec<bool>>,
}

impl OrientationSet {
    pub fn new() -> Self {
        Self::default()
    }

    /// Returns false if `d` was already present.
    pub fn insert(&mut self, d: &CanonicalOrientation) -> bool {
        self.bits.insert(d.forward.clone())
    }

    pub fn contains(&self, d: &CanonicalOrientation) -> bool {
        self.bits.contains(&d.forward)
    }

    pub fn len(&self) -> usize {
        self.bits.len()
    }

    pub fn is_empty(&self) -> bool {
        self.bits.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = &Vec<bool>> {
        self.bits.iter()
    }
}

/// Checks acyclicity, the unique source `u`, the unique sink `z`, and
/// indegree at least 2 at every internal vertex.
pub fn is_canonical_orientation(
    g: &MaximalPlaneGraph,
    d: &CanonicalOrientation,
) -> Result<(), OrientationViolation> {
    let m = g.edge_count();
    if d.forward.len() != m {
        return Err(OrientationViolation::WrongLength { expected: m, found: d.forward.len() });
    }
    let n = g.n();
    let [u, _, z] = g.outer();
    let mut indeg = vec![0; n];
    let mut outdeg = vec![0; n];
    let mut succ = vec![Vec::new(); n];
    for e in 0..m {
        let (a, b) = (d.tail(g, e), d.head(g, e));
        outdeg[a] += 1;
        indeg[b] += 1;
        succ[a].push(b);
    }
    if indeg[u] != 0 {
        return Err(OrientationViolation::SourceNotU);
    }
    if outdeg[z] != 0 {
        return Err(OrientationViolation::SinkNotZ);
    }
    if let Some(x) = (0..n).find(|&x| x != u && indeg[x] == 0) {
        return Err(OrientationViolation::ExtraSource(x));
    }
    if let Some(x) = (0..n).find(|&x| x != z && outdeg[x] == 0) {
        return Err(OrientationViolation::ExtraSink(x));
    }
    if let Some(x) = (0..n).find(|&x| !g.is_outer_vertex(x) && indeg[x] < 2) {
        return Err(OrientationViolation::LowIndegree { vertex: x, indegree: indeg[x] });
    }
    // Depth-first search with colours: 0 unvisited, 1 on stack, 2 done.
    let mut colour = vec![0u8; n];
    for root in 0..n {
        if colour[root] != 0 {
            continue;
        }
        let mut stack = vec![(root, 0usize)];
        colour[root] = 1;
        while let Some(&mut (x, ref mut i)) = stack.last_mut() {
            if let Some(&y) = succ[x].get(*i) {
                *i += 1;
                match colour[y] {
                    0 => {
                        colour[y] = 1;
                        stack.push((y, 0));
                    }
                    1 => return Err(OrientationViolation::Cycle),
                    _ => {}
                }
            } else {
                colour[x] = 2;
                stack.pop();
            }
        }
    }
    Ok(())
}

/// Every direction assignment satisfying [`is_canonical_orientation`].
pub fn brute_force_orientations(g: &MaximalPlaneGraph) -> Result<OrientationSet, OracleError> {
    let m = g.edge_count();
    if m > MAX_BRUTE_FORCE_EDGES {
        return Err(OracleError::TooManyEdges { found: m, limit: MAX_BRUTE_FORCE_EDGES });
    }
    let mut out = OrientationSet::new();
    let mut d = CanonicalOrientation { root: g.outer(), forward: vec![false; m] };
    for mask in 0u64..(1 << m) {
        for (e, bit) in d.forward.iter_mut().enumerate() {
            *bit = mask >> e & 1 == 1;
        }
        if is_canonical_orientation(g, &d).is_ok() {
            out.insert(&d);
        }
    }
    Ok(out)
}

/// Every vertex permutation satisfying [`is_canonical_ordering`].
pub fn brute_force_orderings(g: &MaximalPlaneGraph) -> Result<BTreeSet<Vec<VertexId>>, OracleError> {
    let n = g.n();
    if n > MAX_BRUTE_FORCE_VERTICES {
        return Err(OracleError::TooManyVertices { found: n, limit: MAX_BRUTE_FORCE_VERTICES });
    }
    let u = g.outer()[0];
    Ok((0..n)
        .permutations(n)
        .filter(|p| p[0] == u && is_canonical_ordering(g, p).is_ok())
        .collect())
}

/// Exact check that the straight-line drawing of `g` has no crossings,
/// overlaps, or coincident vertices.
pub fn check_planar_straightline<T: Coord>(
    g: &MaximalPlaneGraph,
    drawing: &Drawing<T>,
) -> Result<(), PlanarityViolation> {
    if drawing.len() != g.n() {
        return Err(PlanarityViolation::WrongLength { expected: g.n(), found: drawing.len() });
    }
    for a in 0..g.n() {
        for b in a + 1..g.n() {
            if drawing.point(a) == drawing.point(b) {
                return Err(PlanarityViolation::SharedPoint(a, b));
            }
        }
    }
    let edges = g.edges();
    for e in 0..edges.len() {
        for f in e + 1..edges.len() {
            let [a, b] = edges[e];
            let [c, d] = edges[f];
            let shared = [a, b].into_iter().find(|x| *x == c || *x == d);
            match shared {
                Some(p) => {
                    let q1 = if a == p { b } else { a };
                    let q2 = if c == p { d } else { c };
                    let pt = |x| drawing.point(x);
                    if overlap_at_shared_endpoint(pt(p), pt(q1), pt(q2)) {
                        return Err(PlanarityViolation::Overlap(e, f));
                    }
                }
                None => {
                    let pt = |x| drawing.point(x);
                    if segments_touch(pt(a), pt(b), pt(c), pt(d)) {
                        return Err(PlanarityViolation::Crossing(e, f));
                    }
                }
            }
        }
    }
    Ok(())
}
