//! The shift method: planar straight-line drawings on a (2n-4) x (n-2)
//! grid from a canonical ordering.
//!
//! [`fpp_draw`] stores, for each vertex, its x-offset relative to a parent
//! in a binary tree (contour successor, or first covered vertex), so a
//! shift of a whole set costs O(1) and absolute coordinates are resolved in
//! one final traversal. Total time is O(n). [`fpp_draw_explicit`] keeps the
//! shift sets as explicit lists and is O(n^2); it serves as a cross-check.

use thiserror::Error;

use crate::geometry::{Coord, Drawing, Point};
use crate::ice::CanonicalOrientation;
use crate::orderings::first_topological_sorting;
use crate::plane_graph::{MaximalPlaneGraph, VertexId};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum FppError {
    #[error("invalid ordering: {0}")]
    InvalidOrdering(String),
}

fn invalid<T>(msg: impl Into<String>) -> Result<T, FppError> {
    Err(FppError::InvalidOrdering(msg.into()))
}

fn check_sequence(g: &MaximalPlaneGraph, seq: &[VertexId]) -> Result<(), FppError> {
    let n = g.n();
    let mut seen = vec![false; n];
    if seq.len() != n || seq.iter().any(|&v| v >= n || std::mem::replace(&mut seen[v], true)) {
        return invalid("not a permutation of the vertices");
    }
    let [u, v, z] = g.outer();
    if seq[0] != u || seq[1] != v || seq[n - 1] != z {
        return invalid("sequence must start with u, v and end with z");
    }
    Ok(())
}

/// The placed neighbours of `x` as `(w_p, w_q, count)`, reading
/// counter-clockwise around `x` from the left end of the block to the right.
fn attachment(
    g: &MaximalPlaneGraph,
    placed: &[bool],
    x: VertexId,
) -> Result<(VertexId, VertexId, usize), FppError> {
    let rot = g.rotation(x);
    let d = rot.len();
    let is_placed = |i: usize| placed[g.other(rot[i % d], x)];
    let count = (0..d).filter(|&i| is_placed(i)).count();
    if count == d {
        let [u, v, _] = g.outer();
        return Ok((u, v, count));
    }
    let starts: Vec<usize> = (0..d).filter(|&i| is_placed(i) && !is_placed(i + d - 1)).collect();
    if starts.len() != 1 || count < 2 {
        return invalid(format!("placed neighbours of {x} are not a block of at least 2"));
    }
    let i = starts[0];
    Ok((g.other(rot[i], x), g.other(rot[(i + count - 1) % d], x), count))
}

/// Draws `g` with the shift method along the canonical ordering `seq`.
pub fn fpp_draw<T: Coord>(g: &MaximalPlaneGraph, seq: &[VertexId]) -> Result<Drawing<T>, FppError> {
    check_sequence(g, seq)?;
    let n = g.n();
    let (zero, one, two) = (T::zero(), T::one(), T::from_usize(2));
    let mut off = vec![zero; n];
    let mut y = vec![zero; n];
    let mut right: Vec<Option<VertexId>> = vec![None; n];
    let mut left: Vec<Option<VertexId>> = vec![None; n];
    let mut placed = vec![false; n];

    let (v1, v2, v3) = (seq[0], seq[1], seq[2]);
    if g.edge_between(v3, v1).is_none() || g.edge_between(v3, v2).is_none() {
        return invalid("v3 must be adjacent to v1 and v2");
    }
    off[v3] = one;
    off[v2] = one;
    y[v3] = one;
    right[v1] = Some(v3);
    right[v3] = Some(v2);
    for &x in &seq[..3] {
        placed[x] = true;
    }

    for &x in &seq[3..] {
        let (wp, wq, count) = attachment(g, &placed, x)?;
        // Walk the contour from w_p to w_q, checking every vertex is a neighbour.
        let wp1 = right[wp].ok_or_else(|| FppError::InvalidOrdering(format!("{wp} is not on the contour")))?;
        let mut delta = zero;
        let mut steps = 0;
        let mut cur = wp;
        let mut before_q = wp;
        while cur != wq {
            let next = match right[cur] {
                Some(nx) => nx,
                None => return invalid(format!("neighbours of {x} are not contiguous on the contour")),
            };
            if g.edge_between(x, next).is_none() {
                return invalid(format!("contour vertex {next} under {x} is not a neighbour"));
            }
            if next == wq {
                before_q = cur;
            }
            if next == wp1 {
                off[next] = off[next] + one;
            }
            if next == wq {
                off[next] = off[next] + one;
            }
            delta = delta + off[next];
            steps += 1;
            cur = next;
        }
        if steps + 1 != count {
            return invalid(format!("neighbours of {x} are not contiguous on the contour"));
        }
        let (yp, yq) = (y[wp], y[wq]);
        let ox = (delta + yq - yp) / two;
        debug_assert!(((delta + yq - yp) % two).is_zero());
        off[x] = ox;
        y[x] = (delta + yq + yp) / two;
        off[wq] = delta - ox;
        if wp1 != wq {
            off[wp1] = off[wp1] - ox;
            left[x] = Some(wp1);
            right[before_q] = None;
        }
        right[wp] = Some(x);
        right[x] = Some(wq);
        placed[x] = true;
    }

    let mut xs = vec![zero; n];
    let mut stack = vec![(v1, zero)];
    while let Some((v, base)) = stack.pop() {
        let xv = base + off[v];
        xs[v] = xv;
        for c in [right[v], left[v]].into_iter().flatten() {
            stack.push((c, xv));
        }
    }
    Ok(Drawing::new((0..n).map(|v| Point::new(xs[v], y[v])).collect()))
}

/// Same result as [`fpp_draw`], keeping every shift set as an explicit list
/// and asserting the contour and nesting invariants after each step.
pub fn fpp_draw_explicit<T: Coord>(g: &MaximalPlaneGraph, seq: &[VertexId]) -> Result<Drawing<T>, FppError> {
    check_sequence(g, seq)?;
    let n = g.n();
    let (zero, one, two) = (T::zero(), T::one(), T::from_usize(2));
    let mut pts = vec![Point::new(zero, zero); n];
    let mut sets: Vec<Vec<VertexId>> = vec![Vec::new(); n];
    let mut placed = vec![false; n];
    let (v1, v2, v3) = (seq[0], seq[1], seq[2]);
    if g.edge_between(v3, v1).is_none() || g.edge_between(v3, v2).is_none() {
        return invalid("v3 must be adjacent to v1 and v2");
    }
    pts[v2] = Point::new(two, zero);
    pts[v3] = Point::new(one, one);
    sets[v1] = vec![v1, v2, v3];
    sets[v3] = vec![v2, v3];
    sets[v2] = vec![v2];
    let mut contour = vec![v1, v3, v2];
    for &x in &seq[..3] {
        placed[x] = true;
    }
    for &x in &seq[3..] {
        let (wp, wq, count) = attachment(g, &placed, x)?;
        let p = contour.iter().position(|&c| c == wp);
        let q = contour.iter().position(|&c| c == wq);
        let (p, q) = match (p, q) {
            (Some(p), Some(q)) if q == p + count - 1 => (p, q),
            _ => return invalid(format!("neighbours of {x} are not contiguous on the contour")),
        };
        if contour[p..=q].iter().any(|&c| g.edge_between(x, c).is_none()) {
            return invalid(format!("contour under {x} contains a non-neighbour"));
        }
        for &w in &sets[contour[p + 1]] {
            pts[w].x = pts[w].x + one;
        }
        for &w in &sets[wq] {
            pts[w].x = pts[w].x + one;
        }
        let (a, b) = (pts[wp], pts[wq]);
        pts[x] = Point::new((a.x + b.x + b.y - a.y) / two, (b.x - a.x + b.y + a.y) / two);
        for &w in &contour[..=p] {
            sets[w].push(x);
        }
        let mut mine = sets[contour[p + 1]].clone();
        mine.push(x);
        sets[x] = mine;
        contour.splice(p + 1..q, [x]);
        placed[x] = true;
        debug_assert!(contour.windows(2).all(|w| {
            let (a, b) = (pts[w[0]], pts[w[1]]);
            a.x < b.x && (b.y - a.y).abs() == b.x - a.x
        }));
        debug_assert!(contour.windows(2).all(|w| sets[w[1]].iter().all(|v| sets[w[0]].contains(v))));
    }
    Ok(Drawing::new(pts))
}

/// The drawing of a canonical orientation: [`fpp_draw`] along its first
/// topological sorting. Every sorting gives the same drawing.
///
/// Runs in O(n log n), dominated by the sorting.
pub fn canonical_drawing<T: Coord>(g: &MaximalPlaneGraph, d: &CanonicalOrientation) -> Result<Drawing<T>, FppError> {
    let seq = first_topological_sorting(g, d).map_err(|e| FppError::InvalidOrdering(e.to_string()))?;
    fpp_draw(g, &seq)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;

    fn coords(d: &Drawing<i64>) -> Vec<(i64, i64)> {
        d.coords.iter().map(|p| (p.x, p.y)).collect()
    }

    #[test]
    fn triangle() {
        let g = fixtures::triangle();
        let d = fpp_draw::<i64>(&g, &[0, 1, 2]).unwrap();
        assert_eq!(coords(&d), vec![(0, 0), (2, 0), (1, 1)]);
    }

    #[test]
    fn k4() {
        let g = fixtures::k4();
        let d = fpp_draw::<i64>(&g, &[0, 1, 3, 2]).unwrap();
        assert_eq!(coords(&d), vec![(0, 0), (4, 0), (2, 2), (2, 1)]);
        assert_eq!(fpp_draw_explicit::<i64>(&g, &[0, 1, 3, 2]).unwrap(), d);
        let small = fpp_draw::<i32>(&g, &[0, 1, 3, 2]).unwrap();
        assert_eq!(small.point(3), Point::new(2, 1));
    }

    #[test]
    fn rejects_bad_orderings() {
        let g = fixtures::k4();
        assert!(fpp_draw::<i64>(&g, &[0, 3, 1, 2]).is_err());
        assert!(fpp_draw::<i64>(&g, &[0, 1, 2]).is_err());
        let o = fixtures::octahedron();
        use fixtures::octa::*;
        assert!(fpp_draw::<i64>(&o, &[U, V, A, B, C, Z]).is_err());
        assert!(fpp_draw_explicit::<i64>(&o, &[U, V, A, B, C, Z]).is_err());
    }
}
