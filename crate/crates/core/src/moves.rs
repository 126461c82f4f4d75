//! Local retriangulations: Pachner 2-3 and 3-2 moves and the 0-2 pillow move.

use std::collections::HashMap;

use serde::{Deserialize, Serialize};

use crate::angles::AngleVector;
use crate::error::{Error, Result};
use crate::perm::{edge_index, Perm4};
use crate::skeleton::{build_skeleton, edge_classes, Corner};
use crate::triangulation::{Gluing, Mode, Triangulation};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum MoveKind {
    TwoThree,
    ThreeTwo,
    ZeroTwo,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MoveRecord {
    pub kind: MoveKind,
    /// Face class (2-3) or edge class (3-2, 0-2) of the input.
    pub site: usize,
    /// Corner positions of the two faces for a 0-2 move.
    pub side: Option<[usize; 2]>,
    pub created_tets: Vec<usize>,
    /// Where each input tetrahedron went; `None` for removed ones.
    pub tet_map: Vec<Option<usize>>,
    /// New edge classes of the output: the degree-3 edge of a 2-3 move, the
    /// degree-2 edge and the two halves of the split edge for a 0-2 move.
    pub created_edges: Vec<usize>,
    pub degree_two_edge: Option<usize>,
    pub split_edges: Vec<usize>,
}

fn perm(images: [usize; 4]) -> Perm4 {
    Perm4::new(images.map(|v| v as u8)).expect("move construction produced a non-bijection")
}

/// Face `face` of new tetrahedron `new` stands in for face `old_face` of the
/// removed tetrahedron `old`; `emb` sends the new vertex labels to the old ones.
struct Patch {
    new: usize,
    face: usize,
    old: usize,
    old_face: usize,
    emb: Perm4,
}

/// Replaces the tetrahedra `removed` by `new_count` fresh ones appended after
/// the survivors.
fn rebuild(
    tri: &Triangulation,
    removed: &[usize],
    new_count: usize,
    internal: &[(usize, usize, usize, Perm4)],
    patches: &[Patch],
) -> Result<(Triangulation, Vec<Option<usize>>)> {
    let n = tri.tet_count();
    let mut tet_map = vec![None; n];
    let mut kept = 0;
    for (t, slot) in tet_map.iter_mut().enumerate() {
        if !removed.contains(&t) {
            *slot = Some(kept);
            kept += 1;
        }
    }
    let base = kept;
    let mut out = Triangulation::new(kept + new_count);
    for t in 0..n {
        let Some(nt) = tet_map[t] else { continue };
        for f in 0..4 {
            if let Some(g) = tri.gluing(t, f) {
                if let Some(ng) = tet_map[g.tet] {
                    out.set_one_sided(nt, f, Some(Gluing { tet: ng, perm: g.perm }));
                }
            }
        }
    }
    let lookup: HashMap<(usize, usize), &Patch> = patches.iter().map(|p| ((p.old, p.old_face), p)).collect();
    for p in patches {
        debug_assert_eq!(p.emb.apply(p.face), p.old_face);
        let Some(g) = tri.gluing(p.old, p.old_face) else { continue };
        let k = base + p.new;
        match tet_map[g.tet] {
            Some(nt) => out.join(k, p.face, nt, g.perm * p.emb),
            None => {
                let other = lookup
                    .get(&(g.tet, g.perm.apply(p.old_face)))
                    .ok_or_else(|| Error::Internal("removed face has no replacement".into()))?;
                let q = other.emb.inverse() * g.perm * p.emb;
                out.set_one_sided(k, p.face, Some(Gluing { tet: base + other.new, perm: q }));
            }
        }
    }
    for &(a, f, b, q) in internal {
        out.join(base + a, f, base + b, q);
    }
    out.label = tri.label.clone();
    Ok((out, tet_map))
}

fn check_output(out: &Triangulation, input: &Triangulation) -> Result<()> {
    let mode = if input.is_closed() { Mode::Closed } else { Mode::Boundary };
    out.require_valid(mode)?;
    if input.is_oriented() && !out.is_oriented() {
        return Err(Error::Internal("move lost the orientation".into()));
    }
    Ok(())
}

/// Replaces the two tetrahedra meeting along a face class by three around a new edge.
pub fn pachner_2_3(tri: &Triangulation, face_class: usize) -> Result<(Triangulation, MoveRecord)> {
    let skel = build_skeleton(tri)?;
    let face = skel
        .faces
        .get(face_class)
        .ok_or_else(|| Error::Precondition(format!("no face class {face_class}")))?;
    let [(t0, f0), (t1, f1)] = match face.representatives[..] {
        [a, b] => [a, b],
        _ => return Err(Error::Precondition(format!("face class {face_class} is on the boundary"))),
    };
    if t0 == t1 {
        return Err(Error::Precondition(format!(
            "face class {face_class} joins tetrahedron {t0} to itself"
        )));
    }
    let sigma = tri.gluing(t0, f0).unwrap().perm;
    debug_assert_eq!(sigma.apply(f0), f1);
    // Order the face vertices so that (f0, u0, u1, u2) is an even permutation.
    let mut u: Vec<usize> = (0..4).filter(|&v| v != f0).collect();
    if perm([f0, u[0], u[1], u[2]]).sign() < 0 {
        u.swap(1, 2);
    }
    let mut patches = Vec::new();
    let mut internal = Vec::new();
    for k in 0..3 {
        let (uk, u1, u2) = (u[k], u[(k + 1) % 3], u[(k + 2) % 3]);
        // New tetrahedron k: vertices A (apex of t0), B (apex of t1), u_{k+1}, u_{k+2}.
        patches.push(Patch { new: k, face: 1, old: t0, old_face: uk, emb: perm([f0, uk, u1, u2]) });
        let s = |v: usize| sigma.apply(v);
        patches.push(Patch { new: k, face: 0, old: t1, old_face: s(uk), emb: perm([s(uk), f1, s(u1), s(u2)]) });
        internal.push((k, 2, (k + 1) % 3, perm([0, 1, 3, 2])));
    }
    let (out, tet_map) = rebuild(tri, &[t0, t1], 3, &internal, &patches)?;
    check_output(&out, tri)?;
    let base = out.tet_count() - 3;
    let (_, edge_of) = edge_classes(&out)?;
    let record = MoveRecord {
        kind: MoveKind::TwoThree,
        site: face_class,
        side: None,
        created_tets: (base..base + 3).collect(),
        tet_map,
        created_edges: vec![edge_of[base][edge_index(0, 1)].class],
        degree_two_edge: None,
        split_edges: Vec::new(),
    };
    Ok((out, record))
}

/// Replaces the three tetrahedra around a degree-3 edge by two sharing a face.
pub fn pachner_3_2(tri: &Triangulation, edge_class: usize) -> Result<(Triangulation, MoveRecord)> {
    let skel = build_skeleton(tri)?;
    let edge = skel
        .edges
        .get(edge_class)
        .ok_or_else(|| Error::Precondition(format!("no edge class {edge_class}")))?;
    if edge.boundary || edge.degree() != 3 {
        return Err(Error::Precondition(format!(
            "edge class {edge_class} has degree {}{}, expected an interior edge of degree 3",
            edge.degree(),
            if edge.boundary { " on the boundary" } else { "" }
        )));
    }
    let cs = &edge.corners;
    let tets = [cs[0].tet, cs[1].tet, cs[2].tet];
    if tets[0] == tets[1] || tets[1] == tets[2] || tets[0] == tets[2] {
        return Err(Error::Precondition(format!(
            "edge class {edge_class} meets fewer than three distinct tetrahedra"
        )));
    }
    let mut last_err = None;
    for mirrored in [false, true] {
        let (out, tet_map) = three_two_layout(tri, cs, tets, mirrored)?;
        match check_output(&out, tri) {
            Ok(()) => {
                let base = out.tet_count() - 2;
                let record = MoveRecord {
                    kind: MoveKind::ThreeTwo,
                    site: edge_class,
                    side: None,
                    created_tets: vec![base, base + 1],
                    tet_map,
                    created_edges: Vec::new(),
                    degree_two_edge: None,
                    split_edges: Vec::new(),
                };
                return Ok((out, record));
            }
            Err(e) => last_err = Some(e),
        }
    }
    Err(last_err.unwrap())
}

fn three_two_layout(
    tri: &Triangulation,
    cs: &[Corner],
    tets: [usize; 3],
    mirrored: bool,
) -> Result<(Triangulation, Vec<Option<usize>>)> {
    // Link vertex e_i is c of corner i, which is d of corner i+1.
    // P = [A, e0, e1, e2], Q = [B, e0, e2, e1] (or with e1, e2 swapped when mirrored).
    let (p_pos, q_pos) = if mirrored { ([1, 3, 2], [1, 2, 3]) } else { ([1, 2, 3], [1, 3, 2]) };
    let mut patches = Vec::new();
    for j in 0..3 {
        let i = (j + 2) % 3;
        let [a, b, c, d] = cs[i].vertices;
        let prev = (i + 2) % 3;
        for (new, apex_old, opposite_old, pos) in [(0, a, b, p_pos), (1, b, a, q_pos)] {
            let mut images = [0; 4];
            images[0] = apex_old;
            images[pos[prev]] = d;
            images[pos[i]] = c;
            images[pos[j]] = opposite_old;
            patches.push(Patch { new, face: pos[j], old: tets[i], old_face: opposite_old, emb: perm(images) });
        }
    }
    // P's face 0 meets Q's face 0 with e_k matched to e_k.
    let mut q = [0; 4];
    for k in 0..3 {
        q[p_pos[k]] = q_pos[k];
    }
    let internal = [(0, 0, 1, perm(q))];
    rebuild(tri, &tets, 2, &internal, &patches)
}

/// Which faces of an edge cycle a 0-2 move opens: corners `side[0]` and
/// `side[1]` of the canonical cycle, leaving through their exit faces.
fn pillow_site(tri: &Triangulation, edge_class: usize, side: [usize; 2]) -> Result<(Vec<Corner>, usize, usize)> {
    let skel = build_skeleton(tri)?;
    let edge = skel
        .edges
        .get(edge_class)
        .ok_or_else(|| Error::Precondition(format!("no edge class {edge_class}")))?;
    if edge.boundary {
        return Err(Error::Precondition(format!("edge class {edge_class} is on the boundary")));
    }
    let d = edge.degree();
    let [i, j] = side;
    if i >= d || j >= d || i == j {
        return Err(Error::Precondition(format!(
            "side positions {i},{j} do not name two faces adjacent along edge {edge_class} of degree {d}"
        )));
    }
    let face_i = skel.face_of[edge.corners[i].tet][edge.corners[i].exit_face()];
    let face_j = skel.face_of[edge.corners[j].tet][edge.corners[j].exit_face()];
    if face_i == face_j {
        return Err(Error::Precondition(format!(
            "corners {i} and {j} of edge {edge_class} leave through the same face class {face_i}"
        )));
    }
    Ok((edge.corners.clone(), i, j))
}

/// Opens the two faces leaving corners `side[0]` and `side[1]` of an edge cycle
/// and fills the gap with two tetrahedra sharing two faces and a degree-2 edge.
pub fn pillow_0_2(tri: &Triangulation, edge_class: usize, side: [usize; 2]) -> Result<(Triangulation, MoveRecord)> {
    let (corners, i, j) = pillow_site(tri, edge_class, side)?;
    let d = corners.len();
    let mut last_err = None;
    for flip in [false, true] {
        let cs: Vec<[usize; 4]> = corners
            .iter()
            .map(|c| {
                let [a, b, cc, dd] = c.vertices;
                if flip {
                    [b, a, cc, dd]
                } else {
                    [a, b, cc, dd]
                }
            })
            .collect();
        let emb = |k: usize| {
            let [a, b, c, dd] = cs[k];
            perm([dd, c, a, b])
        };
        let n = tri.tet_count();
        let mut out = tri.clone();
        let p0 = out.add_tetrahedron();
        let p1 = out.add_tetrahedron();
        let next = |k: usize| (k + 1) % d;
        out.unglue(corners[i].tet, corners[i].exit_face());
        out.unglue(corners[j].tet, corners[j].exit_face());
        out.join(p0, 1, corners[next(i)].tet, emb(next(i)));
        out.join(p0, 0, corners[j].tet, emb(j));
        out.join(p1, 0, corners[i].tet, emb(i));
        out.join(p1, 1, corners[next(j)].tet, emb(next(j)));
        let swap = perm([1, 0, 2, 3]);
        out.join(p0, 3, p1, swap);
        out.join(p0, 2, p1, swap);
        if let Err(e) = check_output(&out, tri) {
            last_err = Some(e);
            continue;
        }
        let (edges, edge_of) = edge_classes(&out)?;
        let degree_two = edge_of[p0][edge_index(0, 1)].class;
        debug_assert_eq!(edges[degree_two].corners.len(), 2);
        let halves = vec![edge_of[p0][edge_index(2, 3)].class, edge_of[p1][edge_index(2, 3)].class];
        let mut created_edges = vec![degree_two];
        created_edges.extend(&halves);
        let record = MoveRecord {
            kind: MoveKind::ZeroTwo,
            site: edge_class,
            side: Some(side),
            created_tets: vec![n, n + 1],
            tet_map: (0..n).map(Some).collect(),
            created_edges,
            degree_two_edge: Some(degree_two),
            split_edges: halves,
        };
        return Ok((out, record));
    }
    Err(last_err.unwrap())
}

/// Carries a taut structure across `pillow_0_2(tri, edge_class, side)`.
///
/// Needs exactly one π corner of the edge on each side of the two opened faces;
/// both pillow tetrahedra then take their π at the degree-2 edge.
pub fn extend_taut(tri: &Triangulation, edge_class: usize, side: [usize; 2], taut: &AngleVector) -> Result<AngleVector> {
    let slots = taut
        .taut_slots()
        .ok_or_else(|| Error::TautTransport("the angle vector is not taut".into()))?;
    if slots.len() != tri.tet_count() {
        return Err(Error::LengthMismatch { expected: 3 * tri.tet_count(), got: taut.entries.len() });
    }
    let (corners, i, j) = pillow_site(tri, edge_class, side)?;
    let d = corners.len();
    let is_pi = |k: usize| {
        let c = corners[k];
        crate::perm::slot_of(c.vertices[0], c.vertices[1]) == slots[c.tet]
    };
    // Sector one runs over corners i+1..=j, sector two over j+1..=i.
    let count = |from: usize, to: usize| {
        let mut k = (from + 1) % d;
        let mut hits = vec![k];
        while k != to {
            k = (k + 1) % d;
            hits.push(k);
        }
        hits.into_iter().filter(|&k| is_pi(k)).count()
    };
    let (first, second) = (count(i, j), count(j, i));
    if first != 1 || second != 1 {
        return Err(Error::TautTransport(format!(
            "edge {edge_class} has {first} and {second} π corners on the two sides of the opened faces; need one on each"
        )));
    }
    let mut extended = slots;
    extended.extend([0, 0]);
    Ok(AngleVector::taut(&extended))
}

/// Sites `(edge, [i, j])` with `i < j` where `extend_taut` succeeds for `taut`.
pub fn taut_pillow_sites(tri: &Triangulation, taut: &AngleVector) -> Result<Vec<(usize, [usize; 2])>> {
    let skel = build_skeleton(tri)?;
    let mut sites = Vec::new();
    for e in skel.edges.iter().filter(|e| !e.boundary) {
        let d = e.degree();
        for i in 0..d {
            for j in i + 1..d {
                if extend_taut(tri, e.index, [i, j], taut).is_ok() {
                    sites.push((e.index, [i, j]));
                }
            }
        }
    }
    Ok(sites)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::angles::{build_angle_system, enumerate_taut};
    use crate::fixtures;
    use crate::isomorphism::are_isomorphic;

    fn two_glued() -> Triangulation {
        let mut t = Triangulation::new(2);
        t.join(0, 3, 1, perm([0, 2, 1, 3]));
        t
    }

    #[test]
    fn two_three_on_a_bare_face() {
        let t = two_glued();
        let (out, rec) = pachner_2_3(&t, build_skeleton(&t).unwrap().face_of[0][3]).unwrap();
        assert_eq!(out.tet_count(), 3);
        let skel = build_skeleton(&out).unwrap();
        let e = &skel.edges[rec.created_edges[0]];
        assert!(!e.boundary);
        assert_eq!(e.degree(), 3);
    }

    #[test]
    fn two_three_then_three_two_round_trips() {
        for tri in [fixtures::figure_eight(), fixtures::m136()] {
            let skel = build_skeleton(&tri).unwrap();
            for face in 0..skel.faces.len() {
                let Ok((mid, rec)) = pachner_2_3(&tri, face) else { continue };
                assert_eq!(mid.tet_count(), tri.tet_count() + 1);
                assert!(mid.is_oriented());
                let (back, _) = pachner_3_2(&mid, rec.created_edges[0]).unwrap();
                assert!(are_isomorphic(&tri, &back).is_some(), "face {face}");
            }
        }
    }

    #[test]
    fn m136_face_between_three_and_five() {
        let tri = fixtures::m136();
        let skel = build_skeleton(&tri).unwrap();
        let face = skel
            .faces
            .iter()
            .find(|f| {
                let ts: Vec<usize> = f.representatives.iter().map(|r| r.0).collect();
                ts == [3, 5] || ts == [5, 3]
            })
            .unwrap();
        let (out, _) = pachner_2_3(&tri, face.index).unwrap();
        assert_eq!(out.tet_count(), 8);
        let s = build_skeleton(&out).unwrap();
        assert_eq!(s.classification, crate::skeleton::Classification::IdealAllTorusOrKlein);
    }

    #[test]
    fn three_two_rejects_wrong_degree() {
        let tri = fixtures::figure_eight();
        assert!(matches!(pachner_3_2(&tri, 0), Err(Error::Precondition(_))));
    }

    #[test]
    fn pillow_on_m136_transports_taut() {
        let tri = fixtures::m136();
        let taut = enumerate_taut(&tri, 1).unwrap().remove(0);
        let sites = taut_pillow_sites(&tri, &taut).unwrap();
        assert!(!sites.is_empty());
        let (e, side) = sites[0];
        let (out, rec) = pillow_0_2(&tri, e, side).unwrap();
        assert_eq!(out.tet_count(), 9);
        let skel = build_skeleton(&out).unwrap();
        assert_eq!(skel.edges[rec.degree_two_edge.unwrap()].degree(), 2);
        assert_eq!(skel.edge_count(), 9);
        assert_eq!(skel.euler_characteristic, 1);
        let moved = extend_taut(&tri, e, side, &taut).unwrap();
        assert!(build_angle_system(&out).unwrap().satisfied_by(&moved));
    }

    #[test]
    fn pillow_rejects_bad_sides() {
        let tri = fixtures::m136();
        assert!(pillow_0_2(&tri, 0, [1, 1]).is_err());
        assert!(pillow_0_2(&tri, 0, [0, 9]).is_err());
    }
}
