//! Schnyder woods from canonical orientations, and the face-counting
//! Schnyder drawing.

use std::collections::HashSet;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::geometry::{Coord, Drawing, Point};
use crate::ice::CanonicalOrientation;
use crate::oracle::is_canonical_orientation;
use crate::plane_graph::{EdgeId, MaximalPlaneGraph, VertexId};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Color {
    One,
    Two,
    Three,
}

impl Color {
    pub const ALL: [Color; 3] = [Color::One, Color::Two, Color::Three];

    /// 1, 2 or 3.
    pub fn index(self) -> u8 {
        self as u8 + 1
    }

    pub fn next(self) -> Color {
        Color::ALL[(self as usize + 1) % 3]
    }

    pub fn prev(self) -> Color {
        Color::ALL[(self as usize + 2) % 3]
    }
}

/// Colour and direction of one internal edge.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct WoodEdge {
    pub color: Color,
    /// True if directed from the edge's first endpoint to its second.
    pub forward: bool,
}

/// A colour and direction for every internal edge, indexed by edge id;
/// outer edges are `None`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SchnyderWood {
    /// `(u1, u2, u3) = (u, v, z)`.
    pub root: [VertexId; 3],
    pub edges: Vec<Option<WoodEdge>>,
}

impl SchnyderWood {
    pub fn tail(&self, g: &MaximalPlaneGraph, e: EdgeId) -> Option<VertexId> {
        self.edges[e].map(|w| g.endpoints(e)[usize::from(!w.forward)])
    }

    pub fn head(&self, g: &MaximalPlaneGraph, e: EdgeId) -> Option<VertexId> {
        self.edges[e].map(|w| g.endpoints(e)[usize::from(w.forward)])
    }

    /// `(tail, head, colour index)` for every internal edge in id order.
    pub fn colored_edges(&self, g: &MaximalPlaneGraph) -> Vec<(VertexId, VertexId, u8)> {
        (0..self.edges.len())
            .filter_map(|e| Some((self.tail(g, e)?, self.head(g, e)?, self.edges[e]?.color.index())))
            .collect()
    }

    fn root_of(&self, c: Color) -> VertexId {
        self.root[c as usize]
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SchnyderError {
    #[error("invalid orientation: {0}")]
    InvalidOrientation(String),
    #[error("invalid wood: {0}")]
    InvalidWood(String),
    #[error("vertex {0} is not internal")]
    NotInternal(VertexId),
    #[error("drawing does not encode a wood: {0}")]
    Undecodable(String),
}

fn bad_wood<T>(msg: String) -> Result<T, SchnyderError> {
    Err(SchnyderError::InvalidWood(msg))
}

/// Colours the edges of a canonical orientation: at each internal vertex
/// the first and last incoming edges, counter-clockwise, become its
/// outgoing edges of colours 1 and 2; the incoming edges in between keep
/// their direction and get colour 3, as do the internal edges into `z`.
pub fn wood_from_orientation(
    g: &MaximalPlaneGraph,
    d: &CanonicalOrientation,
) -> Result<SchnyderWood, SchnyderError> {
    is_canonical_orientation(g, d).map_err(|e| SchnyderError::InvalidOrientation(e.to_string()))?;
    let [_, _, z] = g.outer();
    let mut edges: Vec<Option<WoodEdge>> = vec![None; g.edge_count()];
    let toward = |e: EdgeId, to: VertexId| g.endpoints(e)[1] == to;
    let away = |e: EdgeId, from: VertexId| g.endpoints(e)[0] == from;
    for w in 0..g.n() {
        if g.is_outer_vertex(w) {
            continue;
        }
        let rot = g.rotation(w);
        let k = rot.len();
        let incoming = |i: usize| d.head(g, rot[i % k]) == w;
        let start = (0..k)
            .find(|&i| incoming(i) && !incoming(i + k - 1))
            .expect("incoming edges form one block");
        let block: Vec<EdgeId> = (start..start + k).take_while(|&i| incoming(i)).map(|i| rot[i % k]).collect();
        let last = block.len() - 1;
        for (i, &e) in block.iter().enumerate() {
            edges[e] = Some(match i {
                0 => WoodEdge { color: Color::One, forward: away(e, w) },
                i if i == last => WoodEdge { color: Color::Two, forward: away(e, w) },
                _ => WoodEdge { color: Color::Three, forward: toward(e, w) },
            });
        }
    }
    for &e in g.rotation(z) {
        if !g.is_outer_edge(e) {
            edges[e] = Some(WoodEdge { color: Color::Three, forward: toward(e, z) });
        }
    }
    Ok(SchnyderWood { root: g.outer(), edges })
}

/// Checks the local Schnyder conditions at every vertex and that each
/// colour class is a tree into its root.
pub fn validate_wood(g: &MaximalPlaneGraph, wd: &SchnyderWood) -> Result<(), SchnyderError> {
    if wd.edges.len() != g.edge_count() || wd.root != g.outer() {
        return bad_wood("wood does not belong to this rooted graph".into());
    }
    for e in 0..g.edge_count() {
        match (g.is_outer_edge(e), wd.edges[e].is_some()) {
            (true, true) => return bad_wood(format!("outer edge {e} is coloured")),
            (false, false) => return bad_wood(format!("internal edge {e} is not coloured")),
            _ => {}
        }
    }
    for w in 0..g.n() {
        if g.is_outer_vertex(w) {
            continue;
        }
        let rot = g.rotation(w);
        let k = rot.len();
        let label = |i: usize| {
            let e = rot[i % k];
            (wd.edges[e].expect("internal").color, wd.tail(g, e) == Some(w))
        };
        let outs: Vec<(usize, Color)> = (0..k).filter(|&i| label(i).1).map(|i| (i, label(i).0)).collect();
        let colors: Vec<Color> = outs.iter().map(|&(_, c)| c).collect();
        let start = match outs.iter().find(|&&(_, c)| c == Color::One) {
            Some(&(i, _)) if outs.len() == 3 => i,
            _ => return bad_wood(format!("vertex {w} does not have one outgoing edge per colour: {colors:?}")),
        };
        // Counter-clockwise from out-1: out-1, in-3*, out-2, in-1*, out-3, in-2*.
        let mut expect_out = Color::One;
        for i in start..start + k {
            let (c, out) = label(i);
            if out {
                if c != expect_out {
                    return bad_wood(format!("vertex {w}: outgoing colours are not counter-clockwise 1, 2, 3"));
                }
                expect_out = expect_out.next();
            } else if c != expect_out.next() {
                return bad_wood(format!(
                    "vertex {w}: incoming colour {} edge in the sector after outgoing colour {}",
                    c.index(),
                    expect_out.prev().index()
                ));
            }
        }
    }
    for c in Color::ALL {
        let r = wd.root_of(c);
        for &e in g.rotation(r) {
            if let Some(we) = wd.edges[e] {
                if we.color != c || wd.head(g, e) != Some(r) {
                    return bad_wood(format!("root {r} has an internal edge that is not incoming of colour {}", c.index()));
                }
            }
        }
    }
    let parents = parent_table(g, wd);
    for c in Color::ALL {
        for w in (0..g.n()).filter(|&w| !g.is_outer_vertex(w)) {
            let mut cur = w;
            let mut steps = 0;
            while cur != wd.root_of(c) {
                cur = match parents[cur][c as usize] {
                    Some(p) => p,
                    None => return bad_wood(format!("colour {} path from {w} stops at {cur}", c.index())),
                };
                steps += 1;
                if steps > g.n() {
                    return bad_wood(format!("colour {} has a cycle through {w}", c.index()));
                }
            }
        }
    }
    Ok(())
}

/// Outgoing neighbour of every vertex in each colour.
fn parent_table(g: &MaximalPlaneGraph, wd: &SchnyderWood) -> Vec<[Option<VertexId>; 3]> {
    let mut parents = vec![[None; 3]; g.n()];
    for e in 0..g.edge_count() {
        if let (Some(we), Some(a), Some(b)) = (wd.edges[e], wd.tail(g, e), wd.head(g, e)) {
            parents[a][we.color as usize] = Some(b);
        }
    }
    parents
}

/// The paths from internal vertex `w` to `u1`, `u2`, `u3` in the three trees.
pub fn tree_paths(g: &MaximalPlaneGraph, wd: &SchnyderWood, w: VertexId) -> Result<[Vec<VertexId>; 3], SchnyderError> {
    if g.is_outer_vertex(w) {
        return Err(SchnyderError::NotInternal(w));
    }
    let parents = parent_table(g, wd);
    let mut out: [Vec<VertexId>; 3] = Default::default();
    for c in Color::ALL {
        let path = &mut out[c as usize];
        path.push(w);
        let mut cur = w;
        while cur != wd.root_of(c) {
            cur = parents[cur][c as usize]
                .ok_or_else(|| SchnyderError::InvalidWood(format!("colour {} path from {w} is broken", c.index())))?;
            path.push(cur);
            if path.len() > g.n() {
                return bad_wood(format!("cycle in colour {}", c.index()));
            }
        }
    }
    Ok(out)
}

/// Face-adjacency helper for counting faces inside a cycle.
struct FaceIndex {
    /// Face id of each directed edge side `(edge, from slot)`.
    face_of: Vec<[usize; 2]>,
    /// Directed sides of each face.
    sides: Vec<Vec<(EdgeId, usize)>>,
}

impl FaceIndex {
    fn new(g: &MaximalPlaneGraph) -> Self {
        let m = g.edge_count();
        let mut face_of = vec![[usize::MAX; 2]; m];
        let mut sides = Vec::new();
        for e in 0..m {
            for slot in 0..2 {
                if face_of[e][slot] != usize::MAX {
                    continue;
                }
                let id = sides.len();
                let mut walk = Vec::new();
                let (mut a, mut b) = (g.endpoints(e)[slot], g.endpoints(e)[1 - slot]);
                loop {
                    let f = g.edge_between(a, b).expect("edge");
                    let s = usize::from(g.endpoints(f)[0] != a);
                    if face_of[f][s] != usize::MAX {
                        break;
                    }
                    face_of[f][s] = id;
                    walk.push((f, s));
                    let c = g.right_turn(a, b);
                    a = b;
                    b = c;
                }
                sides.push(walk);
            }
        }
        FaceIndex { face_of, sides }
    }

    /// Faces reachable from the non-outer side of `boundary_edge` without
    /// crossing an edge of `cycle`.
    fn count_inside(&self, g: &MaximalPlaneGraph, cycle: &HashSet<EdgeId>, boundary_edge: EdgeId) -> usize {
        let [u, v, _] = g.outer();
        let uv = g.edge_between(u, v).expect("outer edge");
        let outer = self.face_of[uv][usize::from(g.endpoints(uv)[0] != u)];
        let start = self.face_of[boundary_edge].into_iter().find(|&f| f != outer).expect("inner side");
        let mut seen = vec![false; self.sides.len()];
        seen[start] = true;
        let mut stack = vec![start];
        let mut count = 0;
        while let Some(f) = stack.pop() {
            count += 1;
            for &(e, s) in &self.sides[f] {
                if cycle.contains(&e) {
                    continue;
                }
                let other = self.face_of[e][1 - s];
                if !seen[other] {
                    seen[other] = true;
                    stack.push(other);
                }
            }
        }
        count
    }
}

fn path_edges(g: &MaximalPlaneGraph, path: &[VertexId], into: &mut HashSet<EdgeId>) {
    for w in path.windows(2) {
        into.insert(g.edge_between(w[0], w[1]).expect("path follows edges"));
    }
}

/// Number of inner faces in the regions of `w` bounded by
/// `P1 + P3 + (u1,u3)`, `P1 + P2 + (u1,u2)`, and `P2 + P3 + (u2,u3)`.
pub fn region_face_counts(g: &MaximalPlaneGraph, wd: &SchnyderWood, w: VertexId) -> Result<[usize; 3], SchnyderError> {
    let faces = FaceIndex::new(g);
    region_counts_with(g, wd, w, &faces)
}

fn region_counts_with(
    g: &MaximalPlaneGraph,
    wd: &SchnyderWood,
    w: VertexId,
    faces: &FaceIndex,
) -> Result<[usize; 3], SchnyderError> {
    let paths = tree_paths(g, wd, w)?;
    let [u1, u2, u3] = wd.root;
    let mut out = [0; 3];
    for (slot, (a, b, corner)) in [(0, 2, (u1, u3)), (0, 1, (u1, u2)), (1, 2, (u2, u3))].into_iter().enumerate() {
        let mut cycle = HashSet::new();
        path_edges(g, &paths[a], &mut cycle);
        path_edges(g, &paths[b], &mut cycle);
        let side = g.edge_between(corner.0, corner.1).expect("outer edge");
        cycle.insert(side);
        out[slot] = faces.count_inside(g, &cycle, side);
    }
    Ok(out)
}

/// Places `u1, u2, u3` at `(0,0)`, `(2n-5,0)`, `(0,2n-5)` and every internal
/// vertex at its first two region face counts.
///
/// Each vertex costs one flood fill, so the total is O(n^2).
pub fn schnyder_draw<T: Coord>(g: &MaximalPlaneGraph, wd: &SchnyderWood) -> Result<Drawing<T>, SchnyderError> {
    validate_wood(g, wd)?;
    let n = g.n();
    let big = T::from_usize(2 * n - 5);
    let zero = T::zero();
    let mut pts = vec![Point::new(zero, zero); n];
    let [u1, u2, u3] = wd.root;
    pts[u1] = Point::new(zero, zero);
    pts[u2] = Point::new(big, zero);
    pts[u3] = Point::new(zero, big);
    let faces = FaceIndex::new(g);
    for w in (0..n).filter(|&w| !g.is_outer_vertex(w)) {
        let [x, y, _] = region_counts_with(g, wd, w, &faces)?;
        pts[w] = Point::new(T::from_usize(x), T::from_usize(y));
    }
    Ok(Drawing::new(pts))
}

/// Recovers the wood from a Schnyder drawing by the direction of each
/// internal edge: colour 1 edges point into the open third quadrant, colour
/// 2 edges into the sector between 270 and 360 degrees above the line of
/// slope -1, and colour 3 edges into the sector between 90 and 135 degrees.
pub fn decode_wood<T: Coord>(g: &MaximalPlaneGraph, drawing: &Drawing<T>) -> Result<SchnyderWood, SchnyderError> {
    let zero = T::zero();
    let mut edges = vec![None; g.edge_count()];
    for e in 0..g.edge_count() {
        if g.is_outer_edge(e) {
            continue;
        }
        let [a, b] = g.endpoints(e);
        let d = drawing.point(b) - drawing.point(a);
        let (dx, dy) = (d.x, d.y);
        // (colour, a -> b) for a direction a -> b pointing along the colour.
        let classify = |dx: T, dy: T| -> Option<Color> {
            if dx < zero && dy < zero {
                Some(Color::One)
            } else if dx > zero && dy < zero && -dy < dx {
                Some(Color::Two)
            } else if dx < zero && dy > -dx {
                Some(Color::Three)
            } else {
                None
            }
        };
        let we = match (classify(dx, dy), classify(-dx, -dy)) {
            (Some(c), None) => WoodEdge { color: c, forward: true },
            (None, Some(c)) => WoodEdge { color: c, forward: false },
            _ => return Err(SchnyderError::Undecodable(format!("edge {e} has a boundary slope"))),
        };
        edges[e] = Some(we);
    }
    Ok(SchnyderWood { root: g.outer(), edges })
}
