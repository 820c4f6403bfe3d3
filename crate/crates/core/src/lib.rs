//! Enumeration of canonical orientations, canonical orderings, Schnyder
//! woods, and the two associated families of planar grid drawings of a
//! maximal plane graph.
//!
//! Combinatorial structures use integer vertex and edge ids. Drawings are
//! generic over a signed integer coordinate type; [`GridDrawing`] and
//! [`GridPoint`] fix it to `i64`.

pub mod fixtures;
pub mod fpp;
pub mod geometry;
pub mod ice;
pub mod oracle;
pub mod orderings;
pub mod plane_graph;
pub mod schnyder;

pub use geometry::{Coord, Drawing, Point};
pub use ice::{CanonicalOrientation, WellFormedGraph};
pub use plane_graph::{parse_graph, EdgeId, MaximalPlaneGraph, Rooting, VertexId};
pub use schnyder::SchnyderWood;

/// Grid drawing with `i64` coordinates.
pub type GridDrawing = Drawing<i64>;
/// Grid point with `i64` coordinates.
pub type GridPoint = Point<i64>;
