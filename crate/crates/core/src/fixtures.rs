//! Small named triangulations built from straight-line coordinates.

use std::cmp::Ordering;

use crate::plane_graph::{random_stacked_triangulation, random_triangulation, MaximalPlaneGraph, VertexId};

/// Half-plane index used to sort directions by angle without trigonometry.
fn half(dx: i64, dy: i64) -> u8 {
    u8::from(dy < 0 || (dy == 0 && dx < 0))
}

fn angle_cmp(a: (i64, i64), b: (i64, i64)) -> Ordering {
    half(a.0, a.1)
        .cmp(&half(b.0, b.1))
        .then_with(|| 0.cmp(&(a.0 * b.1 - a.1 * b.0)))
}

/// Builds a graph from a straight-line embedding: rotations are the
/// neighbours sorted counter-clockwise by direction.
pub fn from_straight_line(
    points: &[(i64, i64)],
    edges: &[(VertexId, VertexId)],
    outer: [VertexId; 3],
) -> MaximalPlaneGraph {
    let n = points.len();
    let mut rot: Vec<Vec<VertexId>> = vec![Vec::new(); n];
    for &(a, b) in edges {
        rot[a].push(b);
        rot[b].push(a);
    }
    for (v, list) in rot.iter_mut().enumerate() {
        let (px, py) = points[v];
        list.sort_by(|&a, &b| {
            angle_cmp((points[a].0 - px, points[a].1 - py), (points[b].0 - px, points[b].1 - py))
        });
    }
    MaximalPlaneGraph::from_rotations(n, &rot, outer).expect("fixture is a triangulation")
}

/// Vertices 0, 1, 2 = u, v, z.
pub fn triangle() -> MaximalPlaneGraph {
    from_straight_line(&[(0, 0), (4, 0), (2, 4)], &[(0, 1), (1, 2), (0, 2)], [0, 1, 2])
}

/// Vertices 0, 1, 2 = u, v, z and 3 = w in the middle.
pub fn k4() -> MaximalPlaneGraph {
    from_straight_line(
        &[(0, 0), (4, 0), (2, 4), (2, 1)],
        &[(0, 1), (1, 2), (0, 2), (0, 3), (1, 3), (2, 3)],
        [0, 1, 2],
    )
}

/// The 5-vertex triangulation (K5 minus the edge 0-4). Vertex 0 has degree 3.
fn k5_minus_edge(outer: [VertexId; 3]) -> MaximalPlaneGraph {
    // 0 outer with degree 3; 1, 2 outer; 3, 4 inner.
    from_straight_line(
        &[(0, 0), (12, 0), (6, 12), (6, 3), (7, 6)],
        &[(0, 1), (1, 2), (0, 2), (0, 3), (1, 3), (2, 3), (1, 4), (2, 4), (3, 4)],
        outer,
    )
}

/// K5 minus an edge, rooted with its degree-3 vertex as the first vertex.
pub fn five_a() -> MaximalPlaneGraph {
    k5_minus_edge([0, 1, 2])
}

/// K5 minus an edge, rooted with its degree-3 vertex as the last vertex.
pub fn five_b() -> MaximalPlaneGraph {
    k5_minus_edge([1, 2, 0])
}

pub mod octa {
    use crate::plane_graph::VertexId;
    pub const U: VertexId = 0;
    pub const V: VertexId = 1;
    pub const Z: VertexId = 2;
    pub const A: VertexId = 3;
    pub const B: VertexId = 4;
    pub const C: VertexId = 5;
}

/// Outer u, v, z; inner a, b, c with u adjacent to a, b; v to b, c; z to c, a.
pub fn octahedron() -> MaximalPlaneGraph {
    use octa::*;
    from_straight_line(
        &[(0, 0), (10, 0), (5, 10), (3, 5), (5, 2), (7, 5)],
        &[
            (U, V),
            (V, Z),
            (U, Z),
            (U, A),
            (U, B),
            (V, B),
            (V, C),
            (Z, C),
            (Z, A),
            (A, B),
            (B, C),
            (A, C),
        ],
        [U, V, Z],
    )
}

/// A 6-vertex triangulation with degree sequence 3, 3, 4, 4, 5, 5.
pub fn six_stacked() -> MaximalPlaneGraph {
    // Triangle 0, 1, 2; 3 inside; 4 inside (0, 1, 3); 5 inside (1, 2, 3).
    from_straight_line(
        &[(0, 0), (30, 0), (15, 30), (15, 10), (15, 4), (19, 12)],
        &[
            (0, 1),
            (1, 2),
            (0, 2),
            (0, 3),
            (1, 3),
            (2, 3),
            (0, 4),
            (1, 4),
            (3, 4),
            (1, 5),
            (2, 5),
            (3, 5),
        ],
        [0, 1, 2],
    )
}

/// The fixed fixtures, by name.
pub fn named() -> Vec<(&'static str, MaximalPlaneGraph)> {
    vec![
        ("triangle", triangle()),
        ("k4", k4()),
        ("five_a", five_a()),
        ("five_b", five_b()),
        ("octahedron", octahedron()),
        ("six_stacked", six_stacked()),
    ]
}

/// Stacked triangulations with `min_n..=max_n` vertices from consecutive seeds.
pub fn random_corpus(count: usize, min_n: usize, max_n: usize, seed: u64) -> Vec<MaximalPlaneGraph> {
    (0..count)
        .map(|i| {
            let n = min_n + i % (max_n - min_n + 1);
            random_stacked_triangulation(n, seed.wrapping_add(i as u64))
        })
        .collect()
}

/// Flipped random triangulations with `min_n..=max_n` vertices, `n` flips each.
pub fn random_flipped_corpus(count: usize, min_n: usize, max_n: usize, seed: u64) -> Vec<MaximalPlaneGraph> {
    (0..count)
        .map(|i| {
            let n = min_n + i % (max_n - min_n + 1);
            random_triangulation(n, n, seed.wrapping_add(i as u64))
        })
        .collect()
}
