//! Integer grid points, drawings, and exact segment predicates.

use std::fmt;

use num_traits::{PrimInt, Signed};
use serde::{Deserialize, Serialize};

use crate::plane_graph::VertexId;

/// Scalar type for grid coordinates.
///
/// Any signed primitive integer works. Predicates multiply two coordinate
/// differences, so the coordinate range must stay below the square root of
/// the type's maximum.
pub trait Coord: PrimInt + Signed + fmt::Debug + fmt::Display + Send + Sync + 'static {
    fn from_usize(n: usize) -> Self {
        <Self as num_traits::NumCast>::from(n).expect("coordinate out of range")
    }
}

impl<T> Coord for T where T: PrimInt + Signed + fmt::Debug + fmt::Display + Send + Sync + 'static {}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Point<T> {
    pub x: T,
    pub y: T,
}

impl<T: Coord> Point<T> {
    pub fn new(x: T, y: T) -> Self {
        Point { x, y }
    }
}

impl<T: Coord> std::ops::Sub for Point<T> {
    type Output = Self;

    fn sub(self, o: Self) -> Self {
        Point::new(self.x - o.x, self.y - o.y)
    }
}

/// Twice the signed area of the triangle (a, b, c).
pub fn cross<T: Coord>(a: Point<T>, b: Point<T>, c: Point<T>) -> T {
    let (u, v) = (b - a, c - a);
    u.x * v.y - u.y * v.x
}

fn dot<T: Coord>(u: Point<T>, v: Point<T>) -> T {
    u.x * v.x + u.y * v.y
}

/// True if `p` lies on the closed segment `ab`.
pub fn on_segment<T: Coord>(a: Point<T>, b: Point<T>, p: Point<T>) -> bool {
    cross(a, b, p).is_zero()
        && p.x >= a.x.min(b.x)
        && p.x <= a.x.max(b.x)
        && p.y >= a.y.min(b.y)
        && p.y <= a.y.max(b.y)
}

/// True if the closed segments `ab` and `cd` share at least one point.
pub fn segments_touch<T: Coord>(a: Point<T>, b: Point<T>, c: Point<T>, d: Point<T>) -> bool {
    let d1 = cross(c, d, a).signum();
    let d2 = cross(c, d, b).signum();
    let d3 = cross(a, b, c).signum();
    let d4 = cross(a, b, d).signum();
    if d1 * d2 < T::zero() && d3 * d4 < T::zero() {
        return true;
    }
    on_segment(c, d, a) || on_segment(c, d, b) || on_segment(a, b, c) || on_segment(a, b, d)
}

/// True if two segments sharing the endpoint `p` overlap beyond `p`.
pub fn overlap_at_shared_endpoint<T: Coord>(p: Point<T>, q1: Point<T>, q2: Point<T>) -> bool {
    cross(p, q1, q2).is_zero() && dot(q1 - p, q2 - p) > T::zero()
}

/// A straight-line drawing: one point per vertex, indexed by vertex id.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Drawing<T> {
    pub coords: Vec<Point<T>>,
}

impl<T: Coord> Drawing<T> {
    pub fn new(coords: Vec<Point<T>>) -> Self {
        Drawing { coords }
    }

    pub fn point(&self, v: VertexId) -> Point<T> {
        self.coords[v]
    }

    pub fn len(&self) -> usize {
        self.coords.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coords.is_empty()
    }

    pub fn max_x(&self) -> T {
        self.coords.iter().map(|p| p.x).fold(T::zero(), T::max)
    }

    pub fn max_y(&self) -> T {
        self.coords.iter().map(|p| p.y).fold(T::zero(), T::max)
    }

    pub fn min_coord(&self) -> T {
        self.coords.iter().flat_map(|p| [p.x, p.y]).fold(T::zero(), T::min)
    }

    /// Coordinates as `[x, y]` pairs.
    pub fn pairs(&self) -> Vec<[T; 2]> {
        self.coords.iter().map(|p| [p.x, p.y]).collect()
    }
}
