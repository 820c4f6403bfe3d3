//! Inner-canonical orientation enumeration by reversible graph surgery.
//!
//! The workspace is a plane multigraph with poles `s` and `t`. Edges at `s`
//! are kept in a linear list from the rightmost edge `e1` to the leftmost
//! edge `(s, t)`; every other vertex keeps a cyclic counter-clockwise
//! rotation. "Right to left" around `s` is the same as counter-clockwise
//! starting at `e1`.
//!
//! Each edge stores its two current endpoints in slots `x` and `y`. Slot 0
//! starts as the edge's first endpoint in the input graph and slot 1 as the
//! second; contraction may rename a slot to `s`, but the orientation bit is
//! always relative to the slots, so it also reads in input order.

use std::collections::HashMap;
use std::ops::ControlFlow;

use thiserror::Error;

use crate::plane_graph::{EdgeId, MaximalPlaneGraph, VertexId};

#[derive(Debug, Clone, Default, PartialEq, Eq, Hash)]
pub struct VertexRecord {
    pub degree: usize,
    pub is_outer: bool,
    /// Rightmost edge joining this vertex to `s`.
    pub first_incident_to_s: Option<EdgeId>,
    // Fields below are only meaningful for `s`.
    pub e1: Option<EdgeId>,
    pub first_chord: Option<EdgeId>,
    pub first_parallel: Option<EdgeId>,
    pub first_lens: Option<EdgeId>,
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Hash)]
pub struct EdgeRecord {
    pub ends: [VertexId; 2],
    /// `Some(true)` if directed from `ends[0]` to `ends[1]`.
    pub oriented_from_x_to_y: Option<bool>,
    pub is_outer: bool,
    /// Counter-clockwise successor at each endpoint; `None` only at the end
    /// of the list around `s`.
    pub next_around: [Option<EdgeId>; 2],
    // Fields below are only meaningful for edges at `s`.
    pub ord: Option<usize>,
    pub next_parallel_with_me: Option<EdgeId>,
    pub next_chord: Option<EdgeId>,
    pub next_nonloose_parallel: Option<EdgeId>,
    pub next_nonloose_lens: Option<EdgeId>,
}

impl EdgeRecord {
    fn slot(&self, v: VertexId) -> usize {
        if self.ends[0] == v {
            0
        } else {
            debug_assert_eq!(self.ends[1], v, "edge not incident to vertex");
            1
        }
    }

    fn clear_s_fields(&mut self) {
        self.ord = None;
        self.next_parallel_with_me = None;
        self.next_chord = None;
        self.next_nonloose_parallel = None;
        self.next_nonloose_lens = None;
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum CaseLabel {
    Base,
    Contract,
    Remove,
    ContractAndRemove,
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum IceError {
    #[error("edge {0} has no orientation")]
    Unoriented(EdgeId),
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
#[error("workspace is not well-formed: {0}")]
pub struct WellFormedViolation(pub String);

/// A direction for every edge of a rooted maximal plane graph.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct CanonicalOrientation {
    /// The rooting `(u, v, z)` the orientation belongs to.
    pub root: [VertexId; 3],
    /// `forward[e]` is true if edge `e = (a, b)` is directed `a -> b`.
    pub forward: Vec<bool>,
}

impl CanonicalOrientation {
    pub fn tail(&self, g: &MaximalPlaneGraph, e: EdgeId) -> VertexId {
        g.endpoints(e)[usize::from(!self.forward[e])]
    }

    pub fn head(&self, g: &MaximalPlaneGraph, e: EdgeId) -> VertexId {
        g.endpoints(e)[usize::from(self.forward[e])]
    }

    /// Directed edges `(tail, head)` in edge-id order.
    pub fn directed_edges(&self, g: &MaximalPlaneGraph) -> Vec<[VertexId; 2]> {
        (0..self.forward.len()).map(|e| [self.tail(g, e), self.head(g, e)]).collect()
    }

    /// Out-neighbour lists.
    pub fn successors(&self, g: &MaximalPlaneGraph) -> Vec<Vec<VertexId>> {
        let mut out = vec![Vec::new(); g.n()];
        for e in 0..self.forward.len() {
            out[self.tail(g, e)].push(self.head(g, e));
        }
        out
    }

    pub fn indegrees(&self, g: &MaximalPlaneGraph) -> Vec<usize> {
        let mut d = vec![0; g.n()];
        for e in 0..self.forward.len() {
            d[self.head(g, e)] += 1;
        }
        d
    }
}

/// Full record state, for exact comparisons in tests.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct RecordSnapshot {
    pub vertices: Vec<VertexRecord>,
    pub edges: Vec<EdgeRecord>,
}

/// The mutable enumeration workspace.
#[derive(Debug, Clone)]
pub struct WellFormedGraph {
    vertices: Vec<VertexRecord>,
    edges: Vec<EdgeRecord>,
    s: VertexId,
    t: VertexId,
    root: [VertexId; 3],
    ops: u64,
}

impl WellFormedGraph {
    /// Sets up the workspace with poles `s = u` and `t = z`.
    pub fn new(g: &MaximalPlaneGraph) -> Self {
        let [u, v, z] = g.outer();
        let (s, t) = (u, z);
        let mut vertices = vec![VertexRecord::default(); g.n()];
        let mut edges: Vec<EdgeRecord> = g
            .edges()
            .iter()
            .map(|&ends| EdgeRecord { ends, ..EdgeRecord::default() })
            .collect();
        let mut ops = 0;
        for (x, rec) in vertices.iter_mut().enumerate() {
            rec.degree = g.degree(x);
            rec.is_outer = g.is_outer_vertex(x);
            let rot = g.rotation(x);
            for (i, &e) in rot.iter().enumerate() {
                let slot = edges[e].slot(x);
                edges[e].next_around[slot] = Some(rot[(i + 1) % rot.len()]);
                ops += 1;
            }
        }
        for (e, rec) in edges.iter_mut().enumerate() {
            rec.is_outer = g.is_outer_edge(e);
        }
        let e1 = g.edge_between(s, v).expect("outer edge");
        let em = g.edge_between(s, t).expect("outer edge");
        let deg = g.degree(s);
        let mut last_chord: Option<EdgeId> = None;
        let mut e = e1;
        for i in 0..deg {
            let x = g.other(e, s);
            edges[e].ord = Some(deg - i);
            if vertices[x].first_incident_to_s.is_none() {
                vertices[x].first_incident_to_s = Some(e);
            }
            if vertices[x].is_outer && !edges[e].is_outer {
                match last_chord {
                    Some(l) => edges[l].next_chord = Some(e),
                    None => vertices[s].first_chord = Some(e),
                }
                last_chord = Some(e);
            }
            ops += 1;
            e = g.succ(s, e);
        }
        let slot = edges[em].slot(s);
        edges[em].next_around[slot] = None;
        vertices[s].e1 = Some(e1);
        WellFormedGraph { vertices, edges, s, t, root: g.outer(), ops }
    }

    pub fn s(&self) -> VertexId {
        self.s
    }

    pub fn t(&self) -> VertexId {
        self.t
    }

    pub fn root(&self) -> [VertexId; 3] {
        self.root
    }

    pub fn vertex(&self, v: VertexId) -> &VertexRecord {
        &self.vertices[v]
    }

    pub fn edge(&self, e: EdgeId) -> &EdgeRecord {
        &self.edges[e]
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    /// Record touches performed so far (setup plus surgery).
    pub fn op_count(&self) -> u64 {
        self.ops
    }

    pub fn snapshot(&self) -> RecordSnapshot {
        RecordSnapshot { vertices: self.vertices.clone(), edges: self.edges.clone() }
    }

    fn other(&self, e: EdgeId, v: VertexId) -> VertexId {
        let r = &self.edges[e];
        r.ends[1 - r.slot(v)]
    }

    fn next_at(&self, e: EdgeId, v: VertexId) -> Option<EdgeId> {
        let r = &self.edges[e];
        r.next_around[r.slot(v)]
    }

    fn set_next_at(&mut self, e: EdgeId, v: VertexId, next: Option<EdgeId>) {
        let slot = self.edges[e].slot(v);
        self.edges[e].next_around[slot] = next;
    }

    /// Directs `e` away from `v`.
    fn orient_from(&mut self, e: EdgeId, v: VertexId) {
        let slot = self.edges[e].slot(v);
        self.edges[e].oriented_from_x_to_y = Some(slot == 0);
    }

    fn e1(&self) -> EdgeId {
        self.vertices[self.s].e1.expect("s has an incident edge")
    }

    fn ord(&self, e: EdgeId) -> usize {
        self.edges[e].ord.expect("edge at s has a position")
    }

    pub fn detect_case(&self) -> CaseLabel {
        let s = self.s;
        let e1 = self.e1();
        let sv = &self.vertices[s];
        if self.next_at(e1, s).is_none() {
            CaseLabel::Base
        } else if sv.first_parallel.is_none() {
            CaseLabel::Contract
        } else if self.edges[e1].next_parallel_with_me.is_some() {
            CaseLabel::Remove
        } else {
            let lens = sv.first_lens.expect("parallel edges imply a multilens");
            match sv.first_chord {
                Some(c) if self.ord(c) >= self.ord(lens) => CaseLabel::Contract,
                _ => CaseLabel::ContractAndRemove,
            }
        }
    }

    /// Orients `e1 = (s, w1)` away from `s` and merges `w1` into `s`.
    /// Returns `e1`.
    pub fn contract(&mut self) -> EdgeId {
        let s = self.s;
        let e1 = self.e1();
        let w1 = self.other(e1, s);
        self.orient_from(e1, s);
        let deg_w1 = self.vertices[w1].degree;
        let first = self.next_at(e1, w1).expect("cyclic rotation");
        let deg = self.vertices[s].degree + deg_w1 - 2;
        self.vertices[s].e1 = Some(first);
        self.vertices[s].degree = deg;
        let old_chord = self.vertices[s].first_chord;
        let old_parallel = self.vertices[s].first_parallel;
        let mut last_chord: Option<EdgeId> = None;
        let mut last_parallel: Option<EdgeId> = None;
        let mut e = first;
        for i in 1..deg_w1 {
            self.ops += 1;
            let slot = self.edges[e].slot(w1);
            let x = self.edges[e].ends[1 - slot];
            let next = self.edges[e].next_around[slot].expect("cyclic rotation");
            self.edges[e].ends[slot] = s;
            self.edges[e].ord = Some(deg - i + 1);
            if self.vertices[x].is_outer && !self.edges[e].is_outer {
                match last_chord {
                    Some(l) => self.edges[l].next_chord = Some(e),
                    None => self.vertices[s].first_chord = Some(e),
                }
                last_chord = Some(e);
            }
            if next == e1 {
                self.edges[e].next_nonloose_lens = self.vertices[s].first_lens;
                self.vertices[s].first_lens = Some(e);
            }
            if let Some(f) = self.vertices[x].first_incident_to_s {
                self.edges[e].next_parallel_with_me = Some(f);
                match last_parallel {
                    Some(l) => self.edges[l].next_nonloose_parallel = Some(e),
                    None => self.vertices[s].first_parallel = Some(e),
                }
                last_parallel = Some(e);
            }
            self.vertices[x].first_incident_to_s = Some(e);
            if i + 1 < deg_w1 {
                e = next;
            }
        }
        if let Some(l) = last_chord {
            self.edges[l].next_chord = old_chord;
        }
        if let Some(l) = last_parallel {
            self.edges[l].next_nonloose_parallel = old_parallel;
        }
        // `e` is now the predecessor of e1 around w1; splice it before e2.
        let e2 = self.next_at(e1, s);
        self.set_next_at(e, s, e2);
        e1
    }

    /// Undoes the [`contract`](Self::contract) call that returned `e1`.
    pub fn decontract(&mut self, e1: EdgeId) {
        let s = self.s;
        let w1 = self.other(e1, s);
        self.edges[e1].oriented_from_x_to_y = None;
        let h = self.vertices[s].first_lens.expect("contraction created a lens");
        let b = self.edges[h].next_parallel_with_me.expect("lens edge has a twin");
        let saved_lens = self.edges[h].next_nonloose_lens;
        let mut chord_tail: Option<Option<EdgeId>> = None;
        let mut parallel_tail: Option<Option<EdgeId>> = None;
        let mut e = self.e1();
        while e != b {
            self.ops += 1;
            let slot = self.edges[e].slot(s);
            let x = self.edges[e].ends[1 - slot];
            let next = self.edges[e].next_around[slot].expect("b lies further left");
            self.edges[e].ends[slot] = w1;
            self.vertices[x].first_incident_to_s = self.edges[e].next_parallel_with_me;
            if self.vertices[x].is_outer && !self.edges[e].is_outer {
                chord_tail = Some(self.edges[e].next_chord);
            }
            if self.edges[e].next_parallel_with_me.is_some() {
                parallel_tail = Some(self.edges[e].next_nonloose_parallel);
            }
            self.edges[e].clear_s_fields();
            e = next;
        }
        self.set_next_at(h, w1, Some(e1));
        let deg_w1 = self.vertices[w1].degree;
        let sv = &mut self.vertices[s];
        sv.first_lens = saved_lens;
        if let Some(c) = chord_tail {
            sv.first_chord = c;
        }
        if let Some(p) = parallel_tail {
            sv.first_parallel = p;
        }
        sv.e1 = Some(e1);
        sv.degree = sv.degree + 2 - deg_w1;
    }

    /// Orients `e1..ej` away from `s` and detaches them, where `(e_j,
    /// e_{j+1})` is the rightmost multilens. Returns `[e1, .., ej]`.
    pub fn remove(&mut self) -> Vec<EdgeId> {
        let mut out = Vec::new();
        self.remove_into(&mut out);
        out
    }

    fn remove_into(&mut self, out: &mut Vec<EdgeId>) {
        let s = self.s;
        let e1 = self.e1();
        let ej = self.vertices[s].first_lens.expect("a multilens exists");
        let ej1 = self.next_at(ej, s).expect("lens edge has a left neighbour");
        let sv = &mut self.vertices[s];
        sv.degree = self.edges[ej1].ord.expect("edge at s");
        sv.first_lens = self.edges[ej].next_nonloose_lens;
        sv.first_parallel = self.edges[ej].next_nonloose_parallel;
        sv.e1 = Some(ej1);
        let mut chords = sv.first_chord;
        if chords == Some(ej1) {
            // j = 1 and e2 is a chord that is about to become outer.
            debug_assert_eq!(ej, e1);
            chords = self.edges[ej1].next_chord.take();
        }
        let mut e = e1;
        loop {
            self.ops += 1;
            let vi = self.other(e, s);
            self.orient_from(e, s);
            self.vertices[vi].is_outer = true;
            self.vertices[vi].degree -= 1;
            out.push(e);
            let around_vi = self.next_at(e, vi);
            if e != ej {
                let enext = self.next_at(e, s).expect("more edges at s");
                let vnext = self.other(enext, s);
                let between = self.next_at(enext, vnext).expect("cyclic rotation");
                self.edges[between].is_outer = true;
                self.set_next_at(between, vi, around_vi);
            } else {
                self.edges[ej1].is_outer = true;
                self.set_next_at(ej1, vi, around_vi);
            }
            let mut group = self.edges[e].next_parallel_with_me;
            self.vertices[vi].first_incident_to_s = group;
            if e == ej {
                group = group.and_then(|f| self.edges[f].next_parallel_with_me);
            }
            if e != e1 {
                if let Some(start) = group {
                    let mut last = start;
                    while let Some(f) = self.edges[last].next_parallel_with_me {
                        self.ops += 1;
                        self.edges[last].next_chord = Some(f);
                        last = f;
                    }
                    self.edges[last].next_chord = chords;
                    chords = Some(start);
                }
            }
            if e == ej {
                break;
            }
            e = self.next_at(e, s).expect("more edges at s");
        }
        self.vertices[s].first_chord = chords;
    }

    /// Undoes the [`remove`](Self::remove) call that returned `removed`.
    pub fn reinsert(&mut self, removed: &[EdgeId]) {
        let s = self.s;
        let j = removed.len();
        let (e1, ej) = (removed[0], removed[j - 1]);
        let ej1 = self.next_at(ej, s).expect("e_{j+1} still follows e_j");
        let mut first_chord = self.vertices[s].first_chord;
        let mut first_parallel = self.vertices[s].first_parallel;
        for i in (0..j).rev() {
            self.ops += 1;
            let e = removed[i];
            let vi = self.other(e, s);
            self.edges[e].oriented_from_x_to_y = None;
            if i > 0 {
                self.vertices[vi].is_outer = false;
            }
            self.vertices[vi].first_incident_to_s = Some(e);
            self.vertices[vi].degree += 1;
            if i + 1 < j {
                let enext = removed[i + 1];
                let vnext = self.other(enext, s);
                let between = self.next_at(enext, vnext).expect("cyclic rotation");
                self.set_next_at(between, vi, Some(e));
                self.edges[between].is_outer = false;
            } else {
                self.set_next_at(ej1, vi, Some(ej));
                if self.next_at(ej1, s).is_some() {
                    self.edges[ej1].is_outer = false;
                }
            }
            if i > 0 {
                let mut group = self.edges[e].next_parallel_with_me;
                if i + 1 == j {
                    group = group.and_then(|f| self.edges[f].next_parallel_with_me);
                }
                if let Some(mut last) = group {
                    while let Some(f) = self.edges[last].next_parallel_with_me {
                        self.ops += 1;
                        self.edges[last].next_chord = None;
                        last = f;
                    }
                    first_chord = self.edges[last].next_chord.take();
                }
            }
            if self.edges[e].next_parallel_with_me.is_some() {
                first_parallel = Some(e);
            }
        }
        if j == 1 && self.next_at(ej1, s).is_some() && self.vertices[self.other(ej1, s)].is_outer {
            self.edges[ej1].next_chord = first_chord;
            first_chord = Some(ej1);
        }
        let sv = &mut self.vertices[s];
        sv.first_chord = first_chord;
        sv.first_parallel = first_parallel;
        sv.first_lens = Some(ej);
        sv.e1 = Some(e1);
        sv.degree += j;
    }

    /// Copies the orientation of every edge. All bits must be set.
    pub fn snapshot_orientation(&self) -> Result<CanonicalOrientation, IceError> {
        let mut out = CanonicalOrientation { root: self.root, forward: Vec::new() };
        self.snapshot_into(&mut out)?;
        Ok(out)
    }

    fn snapshot_into(&self, out: &mut CanonicalOrientation) -> Result<(), IceError> {
        out.root = self.root;
        out.forward.clear();
        for (e, r) in self.edges.iter().enumerate() {
            out.forward.push(r.oriented_from_x_to_y.ok_or(IceError::Unoriented(e))?);
        }
        Ok(())
    }

    /// Edges currently incident to `s`, right to left.
    fn s_list(&self) -> Vec<EdgeId> {
        let mut out = Vec::new();
        let mut cur = self.vertices[self.s].e1;
        while let Some(e) = cur {
            out.push(e);
            if out.len() > self.edges.len() {
                break;
            }
            cur = self.next_at(e, self.s);
        }
        out
    }

    /// Full scan of the well-formedness conditions and of every record
    /// field against values recomputed from the current linkage.
    pub fn check_well_formed(&self) -> Result<(), WellFormedViolation> {
        let fail = |msg: String| Err(WellFormedViolation(msg));
        let (s, t) = (self.s, self.t);
        let list = self.s_list();
        if list.is_empty() || list.len() > self.edges.len() {
            return fail("broken edge list at s".into());
        }
        let em = *list.last().expect("nonempty");
        if self.other(em, s) != t {
            return fail("leftmost edge at s does not reach t".into());
        }
        for (i, &e) in list.iter().enumerate() {
            if self.edges[e].slot(s) > 1 || !self.edges[e].ends.contains(&s) {
                return fail(format!("edge {e} listed at s is not incident to s"));
            }
            if self.edges[e].ord != Some(list.len() - i) {
                return fail(format!("edge {e} has ord {:?}, expected {}", self.edges[e].ord, list.len() - i));
            }
        }
        if self.vertices[s].degree != list.len() {
            return fail("degree of s".into());
        }

        // Discover vertices and rotations.
        let mut rotation: HashMap<VertexId, Vec<EdgeId>> = HashMap::new();
        rotation.insert(s, list.clone());
        let mut stack: Vec<(VertexId, EdgeId)> = list.iter().map(|&e| (self.other(e, s), e)).collect();
        while let Some((x, start)) = stack.pop() {
            if rotation.contains_key(&x) {
                continue;
            }
            let mut rot = vec![start];
            let mut cur = self.next_at(start, x);
            while let Some(e) = cur {
                if e == start {
                    break;
                }
                if rot.len() > self.edges.len() || !self.edges[e].ends.contains(&x) {
                    return fail(format!("broken rotation at {x}"));
                }
                rot.push(e);
                cur = self.next_at(e, x);
            }
            if cur.is_none() {
                return fail(format!("rotation at {x} is not cyclic"));
            }
            if self.vertices[x].degree != rot.len() {
                return fail(format!("degree of {x} is {}, rotation has {}", self.vertices[x].degree, rot.len()));
            }
            for &e in &rot {
                stack.push((self.other(e, x), e));
            }
            rotation.insert(x, rot);
        }
        let mut sides: HashMap<EdgeId, usize> = HashMap::new();
        for rot in rotation.values() {
            for &e in rot {
                *sides.entry(e).or_default() += 1;
            }
        }
        if let Some((e, _)) = sides.iter().find(|(_, &c)| c != 2) {
            return fail(format!("edge {e} is not in both endpoint rotations"));
        }
        let present: Vec<EdgeId> = {
            let mut v: Vec<_> = sides.keys().copied().collect();
            v.sort_unstable();
            v
        };

        // Faces via the right-hand walk; the list at s is closed cyclically.
        let succ = |x: VertexId, e: EdgeId| -> EdgeId {
            if x == s {
                self.next_at(e, s).unwrap_or(list[0])
            } else {
                self.next_at(e, x).expect("cyclic")
            }
        };
        let mut seen: HashMap<(EdgeId, VertexId), usize> = HashMap::new();
        let mut faces: Vec<Vec<(EdgeId, VertexId)>> = Vec::new();
        for &e in &present {
            for from in self.edges[e].ends {
                if seen.contains_key(&(e, from)) {
                    continue;
                }
                let mut walk = Vec::new();
                let (mut d, mut a) = (e, from);
                while !seen.contains_key(&(d, a)) {
                    seen.insert((d, a), faces.len());
                    walk.push((d, a));
                    let b = self.other(d, a);
                    d = succ(b, d);
                    a = b;
                }
                if (d, a) != (e, from) {
                    return fail("face walk does not close".into());
                }
                faces.push(walk);
            }
        }
        if rotation.len() + faces.len() != present.len() + 2 {
            return fail("Euler formula violated".into());
        }
        let outer = seen[&(em, t)];
        if seen[&(list[0], s)] != outer {
            return fail("e1 and (s,t) do not bound the outer face".into());
        }
        for (i, walk) in faces.iter().enumerate() {
            let mut vs: Vec<VertexId> = walk.iter().map(|&(_, a)| a).collect();
            vs.sort_unstable();
            vs.dedup();
            if vs.len() != walk.len() {
                return fail(format!("face {i} is not bounded by a cycle"));
            }
            if i != outer && !(2..=3).contains(&vs.len()) {
                return fail(format!("inner face with {} vertices", vs.len()));
            }
        }
        let outer_vertices: Vec<VertexId> = faces[outer].iter().map(|&(_, a)| a).collect();
        let outer_edges: Vec<EdgeId> = faces[outer].iter().map(|&(d, _)| d).collect();
        for &x in rotation.keys() {
            if self.vertices[x].is_outer != outer_vertices.contains(&x) {
                return fail(format!("outer flag of vertex {x}"));
            }
        }
        for &e in &present {
            if self.edges[e].is_outer != outer_edges.contains(&e) {
                return fail(format!("outer flag of edge {e}"));
            }
        }

        // Biconnectivity: removing any single vertex leaves the rest connected.
        if rotation.len() > 2 {
            for &cut in rotation.keys() {
                let start = *rotation.keys().find(|&&x| x != cut).expect("three vertices");
                let mut reached = vec![start];
                let mut todo = vec![start];
                while let Some(x) = todo.pop() {
                    for &e in &rotation[&x] {
                        let y = self.other(e, x);
                        if y != cut && !reached.contains(&y) {
                            reached.push(y);
                            todo.push(y);
                        }
                    }
                }
                if reached.len() != rotation.len() - 1 {
                    return fail(format!("vertex {cut} is a cut vertex"));
                }
            }
        }

        // Parallel edges.
        let mut by_pair: HashMap<(VertexId, VertexId), Vec<EdgeId>> = HashMap::new();
        for &e in &present {
            let [a, b] = self.edges[e].ends;
            by_pair.entry((a.min(b), a.max(b))).or_default().push(e);
        }
        for (&(a, b), group) in &by_pair {
            if group.len() > 1 && a != s && b != s {
                return fail(format!("parallel edges {a}-{b} avoid s"));
            }
        }
        let far: Vec<VertexId> = list.iter().map(|&e| self.other(e, s)).collect();
        for p in 0..list.len() {
            for q in p + 1..list.len() {
                if far[p] != far[q] {
                    continue;
                }
                let lens = (p + 1..q).all(|r| far[r] == far[p]);
                let inner = (p + 1..q.saturating_sub(1)).any(|r| far[r] == far[r + 1] && far[r] != far[p]);
                if !lens && !inner {
                    return fail(format!("parallel pair {}, {} contains no multilens", list[p], list[q]));
                }
            }
        }

        // Records at s.
        if self.vertices[s].e1 != Some(list[0]) {
            return fail("e1".into());
        }
        for &x in rotation.keys() {
            if x == s {
                continue;
            }
            let expect = far.iter().position(|&y| y == x).map(|i| list[i]);
            if self.vertices[x].first_incident_to_s != expect {
                return fail(format!("first_incident_to_s of {x}"));
            }
        }
        let mut chords = Vec::new();
        let mut parallels = Vec::new();
        let mut lenses = Vec::new();
        for i in 0..list.len() {
            let e = list[i];
            let x = far[i];
            let twin = (i + 1..list.len()).find(|&k| far[k] == x).map(|k| list[k]);
            if self.edges[e].next_parallel_with_me != twin {
                return fail(format!("next_parallel_with_me of {e}"));
            }
            if !self.edges[e].is_outer && self.vertices[x].is_outer {
                chords.push(e);
            }
            if far[i + 1..].contains(&x) {
                parallels.push(e);
            }
            if i + 1 < list.len() && far[i + 1] == x {
                lenses.push(e);
            }
        }
        let check_chain = |name: &str,
                           head: Option<EdgeId>,
                           members: &[EdgeId],
                           link: &dyn Fn(&EdgeRecord) -> Option<EdgeId>|
         -> Result<(), WellFormedViolation> {
            if head != members.first().copied() {
                return Err(WellFormedViolation(format!("{name} head is {head:?}, expected {:?}", members.first())));
            }
            for &e in &list {
                let want = members.iter().position(|&m| m == e).and_then(|i| members.get(i + 1).copied());
                if link(&self.edges[e]) != want {
                    return Err(WellFormedViolation(format!("{name} link of edge {e}")));
                }
            }
            Ok(())
        };
        let sv = &self.vertices[s];
        check_chain("chord", sv.first_chord, &chords, &|r| r.next_chord)?;
        check_chain("parallel", sv.first_parallel, &parallels, &|r| r.next_nonloose_parallel)?;
        check_chain("lens", sv.first_lens, &lenses, &|r| r.next_nonloose_lens)?;

        for &e in &present {
            let r = &self.edges[e];
            if !r.ends.contains(&s)
                && (r.ord.is_some()
                    || r.next_parallel_with_me.is_some()
                    || r.next_chord.is_some()
                    || r.next_nonloose_parallel.is_some()
                    || r.next_nonloose_lens.is_some())
            {
                return fail(format!("edge {e} away from s carries s-fields"));
            }
            if e != em && r.oriented_from_x_to_y.is_some() {
                return fail(format!("present edge {e} is already oriented"));
            }
        }
        for (e, r) in self.edges.iter().enumerate() {
            if !sides.contains_key(&e) && r.oriented_from_x_to_y.is_none() {
                return fail(format!("detached edge {e} has no orientation"));
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy)]
enum Frame {
    Contracted { e1: EdgeId, then_remove: bool },
    Removed { start: usize },
}

/// Explicit-stack driver for the enumeration recursion.
///
/// The stack and the removed-edge arena are preallocated to their maximum
/// size, so the driver allocates nothing after construction.
#[derive(Debug)]
pub struct IceCursor {
    stack: Vec<Frame>,
    removed: Vec<EdgeId>,
    started: bool,
    done: bool,
    at_leaf: bool,
}

impl IceCursor {
    pub fn new(w: &WellFormedGraph) -> Self {
        IceCursor {
            stack: Vec::with_capacity(w.edge_count() + 1),
            removed: Vec::with_capacity(w.edge_count() + 1),
            started: false,
            done: false,
            at_leaf: false,
        }
    }

    fn descend(&mut self, w: &mut WellFormedGraph) {
        loop {
            match w.detect_case() {
                CaseLabel::Base => {
                    let em = w.e1();
                    w.orient_from(em, w.s);
                    self.at_leaf = true;
                    return;
                }
                CaseLabel::Contract => {
                    let e1 = w.contract();
                    self.stack.push(Frame::Contracted { e1, then_remove: false });
                }
                CaseLabel::ContractAndRemove => {
                    let e1 = w.contract();
                    self.stack.push(Frame::Contracted { e1, then_remove: true });
                }
                CaseLabel::Remove => self.push_remove(w),
            }
        }
    }

    fn push_remove(&mut self, w: &mut WellFormedGraph) {
        let start = self.removed.len();
        w.remove_into(&mut self.removed);
        self.stack.push(Frame::Removed { start });
    }

    fn leave_leaf(&mut self, w: &mut WellFormedGraph) {
        if self.at_leaf {
            let em = w.e1();
            w.edges[em].oriented_from_x_to_y = None;
            self.at_leaf = false;
        }
    }

    /// Undoes surgery up to the next unexplored branch. Returns false when
    /// the whole tree has been explored and the workspace is restored.
    fn backtrack(&mut self, w: &mut WellFormedGraph) -> bool {
        self.leave_leaf(w);
        while let Some(frame) = self.stack.pop() {
            match frame {
                Frame::Contracted { e1, then_remove } => {
                    w.decontract(e1);
                    if then_remove {
                        self.push_remove(w);
                        return true;
                    }
                }
                Frame::Removed { start } => {
                    w.reinsert(&self.removed[start..]);
                    self.removed.truncate(start);
                }
            }
        }
        false
    }

    /// Moves to the next leaf. Returns false when exhausted.
    pub fn advance(&mut self, w: &mut WellFormedGraph) -> bool {
        if self.done {
            return false;
        }
        if self.started {
            if !self.backtrack(w) {
                self.done = true;
                return false;
            }
        } else {
            self.started = true;
        }
        self.descend(w);
        true
    }

    /// Restores the workspace to its state before the first `advance`.
    pub fn unwind(&mut self, w: &mut WellFormedGraph) {
        self.leave_leaf(w);
        while let Some(frame) = self.stack.pop() {
            match frame {
                Frame::Contracted { e1, .. } => w.decontract(e1),
                Frame::Removed { start } => {
                    w.reinsert(&self.removed[start..]);
                    self.removed.truncate(start);
                }
            }
        }
        self.done = true;
    }
}

/// Calls `visit` once per inner-canonical orientation of the workspace. A
/// `Break` from `visit` stops the enumeration; the workspace is restored
/// in either case.
pub fn enumerate_inner_canonical<B>(
    w: &mut WellFormedGraph,
    mut visit: impl FnMut(&CanonicalOrientation) -> ControlFlow<B>,
) -> ControlFlow<B> {
    let mut cursor = IceCursor::new(w);
    let mut buf = CanonicalOrientation { root: w.root, forward: Vec::with_capacity(w.edge_count()) };
    while cursor.advance(w) {
        w.snapshot_into(&mut buf).expect("all edges oriented at a leaf");
        if let ControlFlow::Break(b) = visit(&buf) {
            cursor.unwind(w);
            return ControlFlow::Break(b);
        }
    }
    ControlFlow::Continue(())
}

/// Pull-style iterator over the canonical orientations of a rooted graph.
#[derive(Debug)]
pub struct CanonicalOrientations {
    w: WellFormedGraph,
    cursor: IceCursor,
}

impl CanonicalOrientations {
    pub fn new(g: &MaximalPlaneGraph) -> Self {
        let w = WellFormedGraph::new(g);
        let cursor = IceCursor::new(&w);
        CanonicalOrientations { w, cursor }
    }

    pub fn workspace(&self) -> &WellFormedGraph {
        &self.w
    }
}

impl Iterator for CanonicalOrientations {
    type Item = CanonicalOrientation;

    fn next(&mut self) -> Option<CanonicalOrientation> {
        if self.cursor.advance(&mut self.w) {
            Some(self.w.snapshot_orientation().expect("all edges oriented at a leaf"))
        } else {
            None
        }
    }
}

/// All canonical orientations of `g` with first vertex `u`, in enumeration order.
pub fn canonical_orientations(g: &MaximalPlaneGraph) -> CanonicalOrientations {
    CanonicalOrientations::new(g)
}

/// Number of canonical orientations, without storing any of them.
pub fn count_orientations(g: &MaximalPlaneGraph, limit: Option<u64>) -> u64 {
    let mut w = WellFormedGraph::new(g);
    let mut cursor = IceCursor::new(&w);
    let mut count = 0;
    while limit.is_none_or(|l| count < l) && cursor.advance(&mut w) {
        count += 1;
    }
    cursor.unwind(&mut w);
    count
}

/// Operation counts observed while enumerating.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DelayProfile {
    pub setup_ops: u64,
    /// Record touches between consecutive outputs; the first entry counts
    /// from the end of setup to the first output.
    pub ops_per_output: Vec<u64>,
    /// Wall-clock nanoseconds between consecutive outputs.
    pub nanos_per_output: Vec<u64>,
}

impl DelayProfile {
    pub fn max_ops(&self) -> u64 {
        self.ops_per_output.iter().copied().max().unwrap_or(0)
    }
}

/// Enumerates up to `limit` orientations and records per-output costs.
pub fn profile_delay(g: &MaximalPlaneGraph, limit: usize) -> DelayProfile {
    let mut w = WellFormedGraph::new(g);
    let setup_ops = w.op_count();
    let mut cursor = IceCursor::new(&w);
    let mut buf = CanonicalOrientation { root: w.root, forward: Vec::with_capacity(w.edge_count()) };
    let mut ops_per_output = Vec::with_capacity(limit);
    let mut nanos_per_output = Vec::with_capacity(limit);
    let mut last_ops = setup_ops;
    let mut clock = std::time::Instant::now();
    while ops_per_output.len() < limit && cursor.advance(&mut w) {
        w.snapshot_into(&mut buf).expect("all edges oriented at a leaf");
        let now = std::time::Instant::now();
        ops_per_output.push(w.op_count() - last_ops);
        nanos_per_output.push((now - clock).as_nanos() as u64);
        last_ops = w.op_count();
        clock = now;
    }
    cursor.unwind(&mut w);
    DelayProfile { setup_ops, ops_per_output, nanos_per_output }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;

    #[test]
    fn triangle_setup() {
        let g = fixtures::triangle();
        let w = WellFormedGraph::new(&g);
        let s = w.vertex(w.s());
        assert_eq!(s.degree, 2);
        assert_eq!(s.e1, g.edge_between(0, 1));
        assert_eq!(s.first_chord, None);
        w.check_well_formed().unwrap();
    }

    #[test]
    fn k4_setup_and_first_contract() {
        let g = fixtures::k4();
        let mut w = WellFormedGraph::new(&g);
        assert_eq!(w.vertex(0).first_chord, None);
        assert_eq!(w.detect_case(), CaseLabel::Contract);
        let before = w.snapshot();
        let e1 = w.contract();
        assert_eq!(Some(e1), g.edge_between(0, 1));
        // deg(u) = deg(v) = 3 in K4, so the merged vertex has 3 + 3 - 2 edges.
        assert_eq!(w.vertex(0).degree, 4);
        w.check_well_formed().unwrap();
        w.decontract(e1);
        assert_eq!(w.snapshot(), before);
    }

    #[test]
    fn octahedron_setup_ords() {
        let g = fixtures::octahedron();
        let w = WellFormedGraph::new(&g);
        assert_eq!(w.vertex(w.s()).degree, 4);
        let mut ords: Vec<_> = g.rotation(w.s()).iter().map(|&e| w.edge(e).ord.unwrap()).collect();
        ords.sort_unstable();
        assert_eq!(ords, vec![1, 2, 3, 4]);
    }

    #[test]
    fn triangle_contract_remove_base() {
        let g = fixtures::triangle();
        let mut w = WellFormedGraph::new(&g);
        let before = w.snapshot();
        let e1 = w.contract();
        w.check_well_formed().unwrap();
        assert!(w.vertex(0).first_lens.is_some());
        assert_eq!(w.vertex(0).degree, 2);
        assert_eq!(w.detect_case(), CaseLabel::Remove);
        let mid = w.snapshot();
        let removed = w.remove();
        assert_eq!(removed, vec![g.edge_between(1, 2).unwrap()]);
        assert_eq!(w.vertex(0).degree, 1);
        w.check_well_formed().unwrap();
        assert_eq!(w.detect_case(), CaseLabel::Base);
        w.reinsert(&removed);
        assert_eq!(w.snapshot(), mid);
        w.decontract(e1);
        assert_eq!(w.snapshot(), before);
    }

    #[test]
    fn triangle_orientation() {
        let g = fixtures::triangle();
        let all: Vec<_> = canonical_orientations(&g).collect();
        assert_eq!(all.len(), 1);
        let mut d = all[0].directed_edges(&g);
        d.sort_unstable();
        assert_eq!(d, vec![[0, 1], [0, 2], [1, 2]]);
    }

    #[test]
    fn unset_bit_is_an_error() {
        let w = WellFormedGraph::new(&fixtures::k4());
        assert!(matches!(w.snapshot_orientation(), Err(IceError::Unoriented(_))));
    }

    #[test]
    fn break_restores_workspace() {
        let g = fixtures::octahedron();
        let mut w = WellFormedGraph::new(&g);
        let before = w.snapshot();
        let r = enumerate_inner_canonical(&mut w, |_| ControlFlow::Break(7));
        assert_eq!(r, ControlFlow::Break(7));
        assert_eq!(w.snapshot(), before);
        let mut n = 0;
        let _ = enumerate_inner_canonical::<()>(&mut w, |_| {
            n += 1;
            ControlFlow::Continue(())
        });
        assert_eq!(n, 2);
        assert_eq!(w.snapshot(), before);
    }
}
