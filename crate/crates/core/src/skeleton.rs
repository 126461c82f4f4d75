//! Edge, face and vertex classes of a triangulation, found by tracing orbits of
//! the face pairings.

use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::perm::{complement, edge_index, EDGE_VERTICES};
use crate::triangulation::{Mode, Triangulation, Violation};

/// One incidence of an edge class with a tetrahedron.
///
/// `vertices = [a, b, c, d]`: the edge runs from `a` to `b` in the class
/// orientation, and the cycle continues to the next corner through face `d`
/// (the face opposite `d`, which contains `a`, `b`, `c`).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Corner {
    pub tet: usize,
    pub vertices: [usize; 4],
}

impl Corner {
    pub fn edge(&self) -> [usize; 2] {
        [self.vertices[0], self.vertices[1]]
    }

    /// Face crossed on the way to the next corner.
    pub fn exit_face(&self) -> usize {
        self.vertices[3]
    }

    /// Face crossed on the way from the previous corner.
    pub fn entry_face(&self) -> usize {
        self.vertices[2]
    }

    pub fn edge_index(&self) -> usize {
        edge_index(self.vertices[0], self.vertices[1])
    }

    fn key(&self) -> (usize, usize) {
        (self.tet, self.edge_index())
    }

    fn flipped_direction(self) -> Corner {
        let [a, b, c, d] = self.vertices;
        Corner { tet: self.tet, vertices: [a, b, d, c] }
    }

    fn flipped_orientation(self) -> Corner {
        let [a, b, c, d] = self.vertices;
        Corner { tet: self.tet, vertices: [b, a, c, d] }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct EdgeClass {
    pub index: usize,
    pub corners: Vec<Corner>,
    /// True when the corners form an open chain ending on unglued faces.
    pub boundary: bool,
}

impl EdgeClass {
    pub fn degree(&self) -> usize {
        self.corners.len()
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FaceClass {
    pub index: usize,
    /// `(tet, face)` pairs; two entries unless the face is on the boundary.
    pub representatives: Vec<(usize, usize)>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum SurfaceKind {
    Sphere,
    Torus,
    KleinBottle,
    Other { euler_characteristic: i64, orientable: bool, boundary_components: usize },
}

impl std::fmt::Display for SurfaceKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            SurfaceKind::Sphere => write!(f, "sphere"),
            SurfaceKind::Torus => write!(f, "torus"),
            SurfaceKind::KleinBottle => write!(f, "klein bottle"),
            SurfaceKind::Other { euler_characteristic, orientable, boundary_components } => {
                let o = if *orientable { "orientable" } else { "non-orientable" };
                write!(f, "{o} surface (chi={euler_characteristic}, boundary components={boundary_components})")
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct VertexLink {
    pub vertex: usize,
    pub triangle_count: usize,
    pub euler_characteristic: i64,
    pub orientable: bool,
    pub boundary_components: usize,
    pub surface_kind: SurfaceKind,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Classification {
    ClosedManifold1Vertex,
    IdealAllTorusOrKlein,
    PseudoManifoldOther,
}

/// Which edge class a tetrahedron edge belongs to, and whether the class
/// orientation runs from its lower to its higher vertex label.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct EdgeRef {
    pub class: usize,
    pub forward: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SkeletonSummary {
    pub tet_count: usize,
    pub vertex_count: usize,
    pub edges: Vec<EdgeClass>,
    pub faces: Vec<FaceClass>,
    pub links: Vec<VertexLink>,
    pub classification: Classification,
    /// V - E + F - T of the pseudo-manifold.
    pub euler_characteristic: i64,
    /// `edge_of[t][i]` for tetrahedron edge `i` in the order 01, 02, 03, 12, 13, 23.
    pub edge_of: Vec<[EdgeRef; 6]>,
    pub face_of: Vec<[usize; 4]>,
    pub vertex_of: Vec<[usize; 4]>,
    /// Orientation (+1/-1) of each corner triangle within its vertex link; only
    /// meaningful for orientable links.
    pub link_orientation: Vec<[i8; 4]>,
}

impl SkeletonSummary {
    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn degrees(&self) -> Vec<usize> {
        self.edges.iter().map(EdgeClass::degree).collect()
    }

    pub fn edge_class_of(&self, tet: usize, a: usize, b: usize) -> EdgeRef {
        let r = self.edge_of[tet][edge_index(a, b)];
        if a < b {
            r
        } else {
            EdgeRef { class: r.class, forward: !r.forward }
        }
    }

    /// Vertex classes at the start and end of an edge class (in its orientation).
    pub fn edge_endpoints(&self, edge: usize) -> [usize; 2] {
        let c = self.edges[edge].corners[0];
        [self.vertex_of[c.tet][c.vertices[0]], self.vertex_of[c.tet][c.vertices[1]]]
    }

    /// Checks V - E + F - T against the sum of link contributions, valid for closed inputs.
    pub fn link_formula_holds(&self) -> bool {
        if self.links.iter().any(|l| l.boundary_components > 0) {
            return true;
        }
        // chi(M^) = sum over vertices of (1 - chi(link)/2)
        let twice: i64 = self.links.iter().map(|l| 2 - l.euler_characteristic).sum();
        twice == 2 * self.euler_characteristic
    }
}

struct UnionFind(Vec<usize>);

impl UnionFind {
    fn new(n: usize) -> Self {
        UnionFind((0..n).collect())
    }

    fn find(&mut self, x: usize) -> usize {
        let mut r = x;
        while self.0[r] != r {
            r = self.0[r];
        }
        let mut y = x;
        while self.0[y] != r {
            let next = self.0[y];
            self.0[y] = r;
            y = next;
        }
        r
    }

    fn union(&mut self, a: usize, b: usize) {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra != rb {
            let (lo, hi) = if ra < rb { (ra, rb) } else { (rb, ra) };
            self.0[hi] = lo;
        }
    }
}

fn start_corner(tet: usize, edge: usize) -> Corner {
    let [a, b] = EDGE_VERTICES[edge];
    let [c, d] = complement(a, b);
    Corner { tet, vertices: [a, b, c, d] }
}

fn step(tri: &Triangulation, c: Corner) -> Option<Corner> {
    let [a, b, cc, d] = c.vertices;
    let g = tri.gluing(c.tet, d)?;
    let s = g.perm;
    Some(Corner { tet: g.tet, vertices: [s.apply(a), s.apply(b), s.apply(d), s.apply(cc)] })
}

enum Trace {
    Cycle(Vec<Corner>),
    Chain(Vec<Corner>),
    Reversed(Corner),
}

fn trace(tri: &Triangulation, start: Corner) -> Trace {
    let mut corners = vec![start];
    let mut cur = start;
    loop {
        match step(tri, cur) {
            None => break,
            Some(next) => {
                if next.key() == start.key() {
                    if next.vertices[0] == start.vertices[0] {
                        return Trace::Cycle(corners);
                    }
                    return Trace::Reversed(start);
                }
                if corners.iter().any(|c| c.key() == next.key()) {
                    return Trace::Reversed(next);
                }
                corners.push(next);
                cur = next;
            }
        }
    }
    let mut back = Vec::new();
    let mut cur = start.flipped_direction();
    while let Some(next) = step(tri, cur) {
        if next.key() == start.key() || back.iter().any(|c: &Corner| c.key() == next.key()) {
            return Trace::Reversed(next);
        }
        back.push(next);
        cur = next;
    }
    let mut chain: Vec<Corner> = back.into_iter().rev().map(Corner::flipped_direction).collect();
    chain.extend(corners);
    Trace::Chain(chain)
}

fn canonical_cycle(mut corners: Vec<Corner>) -> Vec<Corner> {
    let n = corners.len();
    let least = (0..n).min_by_key(|&i| corners[i].key()).unwrap();
    corners.rotate_left(least);
    if n > 2 && corners[n - 1].key() < corners[1].key() {
        let first = corners[0];
        let mut rev: Vec<Corner> = vec![first.flipped_direction()];
        rev.extend(corners[1..].iter().rev().map(|c| c.flipped_direction()));
        corners = rev;
    }
    orient_low_to_high(corners)
}

fn canonical_chain(corners: Vec<Corner>) -> Vec<Corner> {
    let n = corners.len();
    let corners = if n > 1 && corners[n - 1].key() < corners[0].key() {
        corners.into_iter().rev().map(Corner::flipped_direction).collect()
    } else {
        corners
    };
    orient_low_to_high(corners)
}

fn orient_low_to_high(corners: Vec<Corner>) -> Vec<Corner> {
    if corners[0].vertices[0] > corners[0].vertices[1] {
        corners.into_iter().map(Corner::flipped_orientation).collect()
    } else {
        corners
    }
}

/// Edges identified with themselves in reverse; assumes gluings are mutually inverse.
pub(crate) fn reversed_edges(tri: &Triangulation) -> Vec<Violation> {
    let mut seen = vec![[false; 6]; tri.tet_count()];
    let mut out = Vec::new();
    for t in 0..tri.tet_count() {
        for e in 0..6 {
            if seen[t][e] {
                continue;
            }
            match trace(tri, start_corner(t, e)) {
                Trace::Cycle(cs) | Trace::Chain(cs) => {
                    for c in cs {
                        seen[c.tet][c.edge_index()] = true;
                    }
                }
                Trace::Reversed(c) => {
                    seen[t][e] = true;
                    out.push(Violation::ReversedEdge { tet: c.tet, edge: EDGE_VERTICES[c.edge_index()] });
                }
            }
        }
    }
    out
}

/// Edge classes with their lookup table, without the rest of the skeleton.
pub fn edge_classes(tri: &Triangulation) -> Result<(Vec<EdgeClass>, Vec<[EdgeRef; 6]>)> {
    let n = tri.tet_count();
    let mut edge_of: Vec<[Option<EdgeRef>; 6]> = vec![[None; 6]; n];
    let mut edges = Vec::new();
    for t in 0..n {
        for e in 0..6 {
            if edge_of[t][e].is_some() {
                continue;
            }
            let (corners, boundary) = match trace(tri, start_corner(t, e)) {
                Trace::Cycle(cs) => (canonical_cycle(cs), false),
                Trace::Chain(cs) => (canonical_chain(cs), true),
                Trace::Reversed(c) => {
                    return Err(crate::error::Error::InvalidTriangulation(vec![Violation::ReversedEdge {
                        tet: c.tet,
                        edge: EDGE_VERTICES[c.edge_index()],
                    }]))
                }
            };
            let index = edges.len();
            for c in &corners {
                edge_of[c.tet][c.edge_index()] =
                    Some(EdgeRef { class: index, forward: c.vertices[0] < c.vertices[1] });
            }
            edges.push(EdgeClass { index, corners, boundary });
        }
    }
    let edge_of = edge_of.into_iter().map(|row| row.map(Option::unwrap)).collect();
    Ok((edges, edge_of))
}

/// Computes the quotient skeleton. Unglued faces are allowed; mutual-inverse
/// and self-identification violations are not.
pub fn build_skeleton(tri: &Triangulation) -> Result<SkeletonSummary> {
    tri.require_valid(Mode::Boundary)?;
    let n = tri.tet_count();
    let (edges, edge_of) = edge_classes(tri)?;

    let mut face_of = vec![[usize::MAX; 4]; n];
    let mut faces = Vec::new();
    for t in 0..n {
        for f in 0..4 {
            if face_of[t][f] != usize::MAX {
                continue;
            }
            let index = faces.len();
            let mut reps = vec![(t, f)];
            face_of[t][f] = index;
            if let Some(g) = tri.gluing(t, f) {
                let back = g.perm.apply(f);
                reps.push((g.tet, back));
                face_of[g.tet][back] = index;
            }
            faces.push(FaceClass { index, representatives: reps });
        }
    }

    // Vertex classes.
    let mut uf = UnionFind::new(4 * n);
    for t in 0..n {
        for f in 0..4 {
            if let Some(g) = tri.gluing(t, f) {
                for v in (0..4).filter(|&v| v != f) {
                    uf.union(4 * t + v, 4 * g.tet + g.perm.apply(v));
                }
            }
        }
    }
    let mut vertex_of = vec![[0usize; 4]; n];
    let mut roots: Vec<usize> = Vec::new();
    for t in 0..n {
        for v in 0..4 {
            let r = uf.find(4 * t + v);
            let idx = match roots.iter().position(|&x| x == r) {
                Some(i) => i,
                None => {
                    roots.push(r);
                    roots.len() - 1
                }
            };
            vertex_of[t][v] = idx;
        }
    }
    let vertex_count = roots.len();

    // Edge ends: (t, v, w) is the end at v of tetrahedron edge vw.
    let end_id = |t: usize, v: usize, w: usize| 16 * t + 4 * v + w;
    let mut ends = UnionFind::new(16 * n);
    for t in 0..n {
        for f in 0..4 {
            if let Some(g) = tri.gluing(t, f) {
                for v in (0..4).filter(|&v| v != f) {
                    for w in (0..4).filter(|&w| w != f && w != v) {
                        ends.union(end_id(t, v, w), end_id(g.tet, g.perm.apply(v), g.perm.apply(w)));
                    }
                }
            }
        }
    }

    let mut link_orientation = vec![[0i8; 4]; n];
    let mut links = Vec::with_capacity(vertex_count);
    for vx in 0..vertex_count {
        let triangles: Vec<(usize, usize)> =
            (0..n).flat_map(|t| (0..4).map(move |v| (t, v))).filter(|&(t, v)| vertex_of[t][v] == vx).collect();
        let mut glued_sides = 0usize;
        let mut free_sides = 0usize;
        let mut end_roots = BTreeSet::new();
        let mut boundary_uf_pairs = Vec::new();
        for &(t, v) in &triangles {
            for f in (0..4).filter(|&f| f != v) {
                if tri.gluing(t, f).is_some() {
                    glued_sides += 1;
                } else {
                    free_sides += 1;
                    let [w1, w2] = complement(v, f);
                    boundary_uf_pairs.push((ends.find(end_id(t, v, w1)), ends.find(end_id(t, v, w2))));
                }
            }
            for w in (0..4).filter(|&w| w != v) {
                end_roots.insert(ends.find(end_id(t, v, w)));
            }
        }
        let vcount = end_roots.len() as i64;
        let ecount = (glued_sides / 2 + free_sides) as i64;
        let fcount = triangles.len() as i64;
        let euler = vcount - ecount + fcount;

        let boundary_components = {
            let ids: Vec<usize> = boundary_uf_pairs.iter().flat_map(|&(a, b)| [a, b]).collect::<BTreeSet<_>>().into_iter().collect();
            let mut buf = UnionFind::new(ids.len());
            for &(a, b) in &boundary_uf_pairs {
                let ia = ids.binary_search(&a).unwrap();
                let ib = ids.binary_search(&b).unwrap();
                buf.union(ia, ib);
            }
            (0..ids.len()).filter(|&i| buf.find(i) == i).count()
        };

        // Two-colour the corner triangles; a conflict means non-orientable.
        let mut orientable = true;
        let mut stack = Vec::new();
        if let Some(&(t0, v0)) = triangles.first() {
            link_orientation[t0][v0] = 1;
            stack.push((t0, v0));
        }
        while let Some((t, v)) = stack.pop() {
            let o = link_orientation[t][v];
            for f in (0..4).filter(|&f| f != v) {
                if let Some(g) = tri.gluing(t, f) {
                    let (t2, v2) = (g.tet, g.perm.apply(v));
                    let want = if g.perm.sign() == -1 { o } else { -o };
                    if link_orientation[t2][v2] == 0 {
                        link_orientation[t2][v2] = want;
                        stack.push((t2, v2));
                    } else if link_orientation[t2][v2] != want {
                        orientable = false;
                    }
                }
            }
        }

        let surface_kind = match (euler, orientable, boundary_components) {
            (2, true, 0) => SurfaceKind::Sphere,
            (0, true, 0) => SurfaceKind::Torus,
            (0, false, 0) => SurfaceKind::KleinBottle,
            _ => SurfaceKind::Other { euler_characteristic: euler, orientable, boundary_components },
        };
        links.push(VertexLink {
            vertex: vx,
            triangle_count: triangles.len(),
            euler_characteristic: euler,
            orientable,
            boundary_components,
            surface_kind,
        });
    }

    let closed = tri.is_closed();
    let classification = if closed && n > 0 && vertex_count == 1 && links[0].surface_kind == SurfaceKind::Sphere {
        Classification::ClosedManifold1Vertex
    } else if closed
        && n > 0
        && links.iter().all(|l| matches!(l.surface_kind, SurfaceKind::Torus | SurfaceKind::KleinBottle))
    {
        Classification::IdealAllTorusOrKlein
    } else {
        Classification::PseudoManifoldOther
    };

    let euler_characteristic = vertex_count as i64 - edges.len() as i64 + faces.len() as i64 - n as i64;

    Ok(SkeletonSummary {
        tet_count: n,
        vertex_count,
        edges,
        faces,
        links,
        classification,
        euler_characteristic,
        edge_of,
        face_of,
        vertex_of,
        link_orientation,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::perm::Perm4;

    #[test]
    fn empty_triangulation_has_empty_skeleton() {
        let s = build_skeleton(&Triangulation::new(0)).unwrap();
        assert_eq!(s.vertex_count, 0);
        assert!(s.edges.is_empty() && s.faces.is_empty() && s.links.is_empty());
        assert_eq!(s.classification, Classification::PseudoManifoldOther);
    }

    #[test]
    fn lone_tetrahedron_is_six_boundary_edges() {
        let s = build_skeleton(&Triangulation::new(1)).unwrap();
        assert_eq!(s.degrees(), vec![1; 6]);
        assert!(s.edges.iter().all(|e| e.boundary));
        assert_eq!(s.vertex_count, 4);
        assert_eq!(s.faces.len(), 4);
        for l in &s.links {
            assert_eq!(l.euler_characteristic, 1);
            assert_eq!(l.boundary_components, 1);
        }
    }

    #[test]
    fn rejects_reversed_edge() {
        // Fold face 3 onto face 2 swapping vertices 0 and 1: edge 01 is reversed.
        let mut t = Triangulation::new(1);
        t.join(0, 3, 0, Perm4::new([1, 0, 3, 2]).unwrap());
        let report = t.validate_mode(Mode::Boundary);
        assert!(report.violations.iter().any(|v| matches!(v, Violation::ReversedEdge { .. })), "{report:?}");
        assert!(build_skeleton(&t).is_err());
    }
}
