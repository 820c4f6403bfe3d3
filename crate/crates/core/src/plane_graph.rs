//! Maximal plane graphs given by a counter-clockwise rotation system.
//!
//! Faces are traced with the right-hand walk: after arriving at `b` along
//! `a -> b`, leave `b` along the counter-clockwise successor of `(b, a)`.
//! The walk that starts with `u -> v` on the outer triple `(u, v, z)` visits
//! `u, v, z`, so every face triple reported by [`MaximalPlaneGraph::faces`]
//! reads counter-clockwise when that face is taken as the outer face.

use std::collections::{HashMap, HashSet};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

pub type VertexId = usize;
pub type EdgeId = usize;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GraphError {
    #[error("syntax error: {0}")]
    Syntax(String),
    #[error("need at least 3 vertices, got {0}")]
    TooSmall(usize),
    #[error("expected {expected} rotation lists, got {found}")]
    RotationCount { expected: usize, found: usize },
    #[error("vertex {0} out of range")]
    VertexOutOfRange(usize),
    #[error("self-loop at vertex {0}")]
    SelfLoop(VertexId),
    #[error("duplicate edge {0}-{1}")]
    DuplicateEdge(VertexId, VertexId),
    #[error("asymmetric rotation: {1} appears around {0} but not vice versa")]
    Asymmetric(VertexId, VertexId),
    #[error("wrong edge count: expected {expected}, found {found}")]
    EdgeCount { expected: usize, found: usize },
    #[error("inconsistent rotation system: face of length {0}")]
    FaceLength(usize),
    #[error("inconsistent rotation system: expected {expected} faces, found {found}")]
    FaceCount { expected: usize, found: usize },
    #[error("outer triple {0:?} is not a face")]
    OuterNotFace([VertexId; 3]),
    #[error("outer face orientation: {0:?} is a clockwise face")]
    OuterOrientation([VertexId; 3]),
}

/// The JSON input document.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GraphDocument {
    pub n: usize,
    pub rotations: Vec<Vec<VertexId>>,
    pub outer: [VertexId; 3],
}

/// A simple triangulation with a counter-clockwise rotation system and an
/// outer triple `(u, v, z)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MaximalPlaneGraph {
    n: usize,
    edges: Vec<[VertexId; 2]>,
    rotations: Vec<Vec<EdgeId>>,
    /// Index of each edge within the rotation of each endpoint.
    position: Vec<[usize; 2]>,
    index: HashMap<(VertexId, VertexId), EdgeId>,
    outer: [VertexId; 3],
}

/// A choice of outer face and reflection.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Rooting {
    pub face: [VertexId; 3],
    pub reflected: bool,
}

impl Rooting {
    pub fn identity(g: &MaximalPlaneGraph) -> Self {
        Rooting { face: g.outer, reflected: false }
    }

    /// The outer triple of the rerooted graph.
    pub fn outer(&self) -> [VertexId; 3] {
        let [a, b, c] = self.face;
        if self.reflected {
            [a, c, b]
        } else {
            [a, b, c]
        }
    }
}

pub fn parse_graph(text: &str) -> Result<MaximalPlaneGraph, GraphError> {
    let doc: GraphDocument =
        serde_json::from_str(text).map_err(|e| GraphError::Syntax(e.to_string()))?;
    MaximalPlaneGraph::from_document(&doc)
}

impl MaximalPlaneGraph {
    pub fn from_document(doc: &GraphDocument) -> Result<Self, GraphError> {
        Self::from_rotations(doc.n, &doc.rotations, doc.outer)
    }

    /// Builds and validates a graph from counter-clockwise neighbour lists.
    pub fn from_rotations(
        n: usize,
        rotations: &[Vec<VertexId>],
        outer: [VertexId; 3],
    ) -> Result<Self, GraphError> {
        if n < 3 {
            return Err(GraphError::TooSmall(n));
        }
        if rotations.len() != n {
            return Err(GraphError::RotationCount { expected: n, found: rotations.len() });
        }
        for &x in outer.iter() {
            if x >= n {
                return Err(GraphError::VertexOutOfRange(x));
            }
        }
        let mut index: HashMap<(VertexId, VertexId), EdgeId> = HashMap::new();
        let mut edges = Vec::new();
        for (a, rot) in rotations.iter().enumerate() {
            for &b in rot {
                if b >= n {
                    return Err(GraphError::VertexOutOfRange(b));
                }
                if a == b {
                    return Err(GraphError::SelfLoop(a));
                }
            }
        }
        for (a, rot) in rotations.iter().enumerate() {
            let mut seen = std::collections::HashSet::new();
            for &b in rot {
                if !seen.insert(b) {
                    return Err(GraphError::DuplicateEdge(a, b));
                }
                if !rotations[b].contains(&a) {
                    return Err(GraphError::Asymmetric(a, b));
                }
                let key = (a.min(b), a.max(b));
                if let std::collections::hash_map::Entry::Vacant(slot) = index.entry(key) {
                    slot.insert(edges.len());
                    edges.push([a, b]);
                }
            }
        }
        if edges.len() != 3 * n - 6 {
            return Err(GraphError::EdgeCount { expected: 3 * n - 6, found: edges.len() });
        }
        let mut position = vec![[usize::MAX; 2]; edges.len()];
        let rot_ids: Vec<Vec<EdgeId>> = rotations
            .iter()
            .enumerate()
            .map(|(a, rot)| {
                rot.iter()
                    .enumerate()
                    .map(|(i, &b)| {
                        let e = index[&(a.min(b), a.max(b))];
                        let slot = usize::from(edges[e][0] != a);
                        position[e][slot] = i;
                        e
                    })
                    .collect()
            })
            .collect();
        let g = MaximalPlaneGraph { n, edges, rotations: rot_ids, position, index, outer };
        g.check_faces()?;
        Ok(g)
    }

    fn check_faces(&self) -> Result<(), GraphError> {
        let mut count = 0;
        let mut seen = vec![[false; 2]; self.edges.len()];
        for e in 0..self.edges.len() {
            for side in 0..2 {
                if seen[e][side] {
                    continue;
                }
                count += 1;
                let (mut a, mut b) = (self.edges[e][side], self.edges[e][1 - side]);
                let mut len = 0;
                loop {
                    let f = self.edge_between(a, b).expect("edge exists");
                    let s = usize::from(self.edges[f][0] != a);
                    if seen[f][s] {
                        break;
                    }
                    seen[f][s] = true;
                    len += 1;
                    let c = self.right_turn(a, b);
                    a = b;
                    b = c;
                }
                if len != 3 || (a, b) != (self.edges[e][side], self.edges[e][1 - side]) {
                    return Err(GraphError::FaceLength(len));
                }
            }
        }
        if count != 2 * self.n - 4 {
            return Err(GraphError::FaceCount { expected: 2 * self.n - 4, found: count });
        }
        let [u, v, z] = self.outer;
        if u == v || v == z || u == z {
            return Err(GraphError::OuterNotFace(self.outer));
        }
        match (self.edge_between(u, v), self.edge_between(v, z)) {
            (Some(_), Some(_)) if self.right_turn(u, v) == z => Ok(()),
            _ if self.edge_between(u, z).is_some() && self.right_turn(u, z) == v => {
                Err(GraphError::OuterOrientation(self.outer))
            }
            _ => Err(GraphError::OuterNotFace(self.outer)),
        }
    }

    /// Next vertex of the right-hand face walk after `a -> b`.
    pub fn right_turn(&self, a: VertexId, b: VertexId) -> VertexId {
        let e = self.edge_between(a, b).expect("edge exists");
        self.other(self.succ(b, e), b)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn edges(&self) -> &[[VertexId; 2]] {
        &self.edges
    }

    pub fn endpoints(&self, e: EdgeId) -> [VertexId; 2] {
        self.edges[e]
    }

    pub fn other(&self, e: EdgeId, v: VertexId) -> VertexId {
        let [a, b] = self.edges[e];
        if a == v {
            b
        } else {
            a
        }
    }

    pub fn outer(&self) -> [VertexId; 3] {
        self.outer
    }

    pub fn is_outer_vertex(&self, v: VertexId) -> bool {
        self.outer.contains(&v)
    }

    pub fn is_outer_edge(&self, e: EdgeId) -> bool {
        let [a, b] = self.edges[e];
        self.is_outer_vertex(a) && self.is_outer_vertex(b)
    }

    pub fn degree(&self, v: VertexId) -> usize {
        self.rotations[v].len()
    }

    /// Incident edges of `v` in counter-clockwise order.
    pub fn rotation(&self, v: VertexId) -> &[EdgeId] {
        &self.rotations[v]
    }

    pub fn neighbors(&self, v: VertexId) -> impl Iterator<Item = VertexId> + '_ {
        self.rotations[v].iter().map(move |&e| self.other(e, v))
    }

    pub fn edge_between(&self, a: VertexId, b: VertexId) -> Option<EdgeId> {
        self.index.get(&(a.min(b), a.max(b))).copied()
    }

    fn pos(&self, v: VertexId, e: EdgeId) -> usize {
        self.position[e][usize::from(self.edges[e][0] != v)]
    }

    /// Counter-clockwise successor of `e` around `v`.
    pub fn succ(&self, v: VertexId, e: EdgeId) -> EdgeId {
        let rot = &self.rotations[v];
        rot[(self.pos(v, e) + 1) % rot.len()]
    }

    /// Counter-clockwise predecessor of `e` around `v`.
    pub fn pred(&self, v: VertexId, e: EdgeId) -> EdgeId {
        let rot = &self.rotations[v];
        rot[(self.pos(v, e) + rot.len() - 1) % rot.len()]
    }

    /// All faces as right-walk triples, each starting at its smallest vertex,
    /// sorted lexicographically.
    pub fn faces(&self) -> Vec<[VertexId; 3]> {
        let mut out = Vec::with_capacity(2 * self.n - 4);
        for &[a, b] in &self.edges {
            for (x, y) in [(a, b), (b, a)] {
                let c = self.right_turn(x, y);
                if x < y && x < c {
                    out.push([x, y, c]);
                }
            }
        }
        out.sort_unstable();
        out
    }

    /// Every (face, reflection) pair, unreflected first for each face.
    pub fn enumerate_rootings(&self) -> Vec<Rooting> {
        self.faces()
            .into_iter()
            .flat_map(|face| [false, true].map(|reflected| Rooting { face, reflected }))
            .collect()
    }

    /// The same graph with the outer triple chosen by `r`.
    pub fn reroot(&self, r: &Rooting) -> MaximalPlaneGraph {
        let mut g = self.clone();
        if r.reflected {
            for rot in g.rotations.iter_mut() {
                rot.reverse();
            }
            for (v, rot) in g.rotations.iter().enumerate() {
                for (i, &e) in rot.iter().enumerate() {
                    let slot = usize::from(g.edges[e][0] != v);
                    g.position[e][slot] = i;
                }
            }
        }
        g.outer = r.outer();
        debug_assert_eq!(g.right_turn(g.outer[0], g.outer[1]), g.outer[2]);
        g
    }

    /// The graph rooted at the outer triple rotated `k` places, so that
    /// `outer[k]` becomes the first vertex.
    pub fn with_first_vertex(&self, k: usize) -> MaximalPlaneGraph {
        let mut g = self.clone();
        g.outer = [0, 1, 2].map(|i| self.outer[(i + k) % 3]);
        g
    }

    pub fn to_document(&self) -> GraphDocument {
        GraphDocument {
            n: self.n,
            rotations: (0..self.n).map(|v| self.neighbors(v).collect()).collect(),
            outer: self.outer,
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(&self.to_document()).expect("serializable")
    }
}

/// A stacked triangulation: start from a triangle and repeatedly insert a
/// vertex into a random inner face. The outer triple is always `(0, 1, 2)`.
pub fn random_stacked_triangulation(n: usize, seed: u64) -> MaximalPlaneGraph {
    assert!(n >= 3, "need at least 3 vertices");
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut rot: Vec<Vec<VertexId>> = vec![vec![1, 2], vec![2, 0], vec![0, 1]];
    // Inner faces, counter-clockwise in the plane.
    let mut faces: Vec<[VertexId; 3]> = vec![[0, 1, 2]];
    for x in 3..n {
        let i = rng.gen_range(0..faces.len());
        let [a, b, c] = faces[i];
        for (p, after) in [(a, b), (b, c), (c, a)] {
            let at = rot[p].iter().position(|&q| q == after).expect("face corner");
            rot[p].insert(at + 1, x);
        }
        rot.push(vec![a, b, c]);
        faces[i] = [a, b, x];
        faces.push([b, c, x]);
        faces.push([c, a, x]);
    }
    MaximalPlaneGraph::from_rotations(n, &rot, [0, 1, 2]).expect("stacking yields a triangulation")
}

/// A stacked triangulation followed by `flips` attempted random edge flips.
/// Stacked triangulations have a single canonical orientation; flipped ones
/// usually have many. The outer triple stays `(0, 1, 2)`.
pub fn random_triangulation(n: usize, flips: usize, seed: u64) -> MaximalPlaneGraph {
    let g = random_stacked_triangulation(n, seed);
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x9e37_79b9_7f4a_7c15);
    let mut rot: Vec<Vec<VertexId>> = (0..n).map(|v| g.neighbors(v).collect()).collect();
    let mut edges = g.edges.clone();
    let key = |a: VertexId, b: VertexId| (a.min(b), a.max(b));
    let mut adjacent: HashSet<(VertexId, VertexId)> = edges.iter().map(|&[a, b]| key(a, b)).collect();
    let pos = |r: &[VertexId], x: VertexId| r.iter().position(|&q| q == x).expect("neighbour");
    for _ in 0..flips {
        let i = rng.gen_range(0..edges.len());
        let [a, b] = edges[i];
        if a < 3 && b < 3 {
            continue;
        }
        // Faces a -> b -> c and b -> a -> d.
        let c = rot[b][(pos(&rot[b], a) + 1) % rot[b].len()];
        let d = rot[a][(pos(&rot[a], b) + 1) % rot[a].len()];
        if adjacent.contains(&key(c, d)) {
            continue;
        }
        rot[a].retain(|&q| q != b);
        rot[b].retain(|&q| q != a);
        let at = pos(&rot[c], b);
        rot[c].insert(at + 1, d);
        let at = pos(&rot[d], a);
        rot[d].insert(at + 1, c);
        adjacent.remove(&key(a, b));
        adjacent.insert(key(c, d));
        edges[i] = [c, d];
    }
    MaximalPlaneGraph::from_rotations(n, &rot, [0, 1, 2]).expect("flips preserve the triangulation")
}

#[cfg(test)]
mod tests {
    use super::*;

    const K4: &str = r#"{"n":4,"rotations":[[1,3,2],[2,3,0],[0,3,1],[0,1,2]],"outer":[0,1,2]}"#;

    #[test]
    fn parse_k4() {
        let g = parse_graph(K4).unwrap();
        assert_eq!(g.edge_count(), 6);
        assert_eq!(g.faces().len(), 4);
        assert_eq!(g.edges()[0], [0, 1]);
    }

    #[test]
    fn k4_clockwise_outer_rejected() {
        let text = K4.replace("\"outer\":[0,1,2]", "\"outer\":[0,2,1]");
        let err = parse_graph(&text).unwrap_err();
        assert!(err.to_string().contains("outer face orientation"), "{err}");
    }

    #[test]
    fn malformed_inputs_rejected() {
        assert!(matches!(parse_graph("{"), Err(GraphError::Syntax(_))));
        let asym = r#"{"n":3,"rotations":[[1,2],[2,0],[0]],"outer":[0,1,2]}"#;
        assert!(matches!(parse_graph(asym), Err(GraphError::Asymmetric(_, _))));
        let looped = r#"{"n":3,"rotations":[[1,2,0],[2,0],[0,1]],"outer":[0,1,2]}"#;
        assert!(matches!(parse_graph(looped), Err(GraphError::SelfLoop(0))));
        let dup = r#"{"n":3,"rotations":[[1,2,1],[2,0],[0,1]],"outer":[0,1,2]}"#;
        assert!(matches!(parse_graph(dup), Err(GraphError::DuplicateEdge(0, 1))));
        let c4 = r#"{"n":4,"rotations":[[1,3],[2,0],[3,1],[0,2]],"outer":[0,1,2]}"#;
        assert!(matches!(parse_graph(c4), Err(GraphError::EdgeCount { .. })));
        // K4 with one rotation permuted: right counts, broken embedding.
        let bad = r#"{"n":4,"rotations":[[1,2,3],[2,3,0],[0,3,1],[0,1,2]],"outer":[0,1,2]}"#;
        assert!(parse_graph(bad).is_err());
    }

    #[test]
    fn triangle_accepts_both_orders() {
        for outer in ["[0,1,2]", "[0,2,1]"] {
            let text = format!(r#"{{"n":3,"rotations":[[1,2],[2,0],[0,1]],"outer":{outer}}}"#);
            let g = parse_graph(&text).unwrap();
            assert_eq!(g.faces().len(), 2);
        }
    }

    #[test]
    fn rootings_and_reflection() {
        let g = parse_graph(K4).unwrap();
        let rs = g.enumerate_rootings();
        assert_eq!(rs.len(), 8);
        assert_eq!(g.reroot(&Rooting::identity(&g)), g);
        let r = Rooting { face: g.outer(), reflected: true };
        let h = g.reroot(&r);
        for v in 0..4 {
            let mut rev: Vec<_> = g.rotation(v).to_vec();
            rev.reverse();
            assert_eq!(h.rotation(v), &rev[..]);
        }
        assert_eq!(h.outer(), [0, 2, 1]);
    }

    #[test]
    fn stacked_small_cases() {
        let t = random_stacked_triangulation(3, 9);
        assert_eq!(t.edge_count(), 3);
        let k4 = random_stacked_triangulation(4, 9);
        assert_eq!(k4.edge_count(), 6);
        assert!(k4.faces().iter().any(|f| f == &[0, 1, 2]));
        assert_eq!(random_stacked_triangulation(30, 5), random_stacked_triangulation(30, 5));
    }

    #[test]
    fn document_round_trip() {
        let g = random_stacked_triangulation(50, 1);
        let h = parse_graph(&g.to_json()).unwrap();
        assert_eq!(g, h);
    }
}
