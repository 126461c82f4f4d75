//! Peripheral curves of torus cusps and words for edges running between cusps.

use std::collections::{BTreeMap, VecDeque};

use num_bigint::BigInt;
use num_traits::{ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use super::snf::{lattice_solve, smith_normal_form};
use super::{spine_presentation_with, SpinePresentation, Word};
use crate::error::{Error, Result};
use crate::skeleton::{build_skeleton, SkeletonSummary, SurfaceKind};
use crate::triangulation::Triangulation;

/// Leaving corner triangle `(tet, vertex)` through face `exit_face` of `tet`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct LinkStep {
    pub tet: usize,
    pub vertex: usize,
    pub exit_face: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PeripheralCurve {
    /// Closed walk through corner triangles, starting and ending at the basepoint.
    pub walk: Vec<LinkStep>,
    pub word: Word,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PeripheralSystem {
    pub vertex: usize,
    /// Lexicographically least corner triangle of the link.
    pub basepoint: (usize, usize),
    pub curves: [PeripheralCurve; 2],
}

impl PeripheralSystem {
    pub fn words(&self) -> Vec<Word> {
        self.curves.iter().map(|c| c.word.clone()).collect()
    }
}

/// Spanning tree of a vertex link's corner-triangle adjacency graph.
pub(crate) struct LinkTree {
    pub root: (usize, usize),
    /// Path from the root to each triangle, as steps.
    pub paths: BTreeMap<(usize, usize), Vec<LinkStep>>,
    pub words: BTreeMap<(usize, usize), Word>,
    /// Cotree adjacencies `(t, v, f)`, listed from their canonical side.
    pub cotree: Vec<(usize, usize, usize)>,
}

fn partner(tri: &Triangulation, t: usize, v: usize, f: usize) -> (usize, usize, usize) {
    let g = tri.gluing(t, f).expect("closed triangulation");
    (g.tet, g.perm.apply(v), g.perm.apply(f))
}

fn canonical(tri: &Triangulation, side: (usize, usize, usize)) -> ((usize, usize, usize), bool) {
    let other = partner(tri, side.0, side.1, side.2);
    if side <= other {
        (side, true)
    } else {
        (other, false)
    }
}

impl LinkTree {
    pub fn build(
        tri: &Triangulation,
        skel: &SkeletonSummary,
        spine: &SpinePresentation,
        vertex: usize,
    ) -> LinkTree {
        let triangles: Vec<(usize, usize)> = (0..tri.tet_count())
            .flat_map(|t| (0..4).map(move |v| (t, v)))
            .filter(|&(t, v)| skel.vertex_of[t][v] == vertex)
            .collect();
        let root = triangles[0];
        let mut paths = BTreeMap::from([(root, Vec::new())]);
        let mut words = BTreeMap::from([(root, Word::empty())]);
        let mut tree_sides = std::collections::BTreeSet::new();
        let mut queue = VecDeque::from([root]);
        while let Some((t, v)) = queue.pop_front() {
            for f in (0..4).filter(|&f| f != v) {
                let (t2, v2, _) = partner(tri, t, v, f);
                if paths.contains_key(&(t2, v2)) {
                    continue;
                }
                let mut p = paths[&(t, v)].clone();
                p.push(LinkStep { tet: t, vertex: v, exit_face: f });
                paths.insert((t2, v2), p);
                words.insert((t2, v2), words[&(t, v)].concat(&spine.crossing(skel, t, f)));
                tree_sides.insert(canonical(tri, (t, v, f)).0);
                queue.push_back((t2, v2));
            }
        }
        let mut cotree = Vec::new();
        for &(t, v) in &triangles {
            for f in (0..4).filter(|&f| f != v) {
                let (key, is_rep) = canonical(tri, (t, v, f));
                if is_rep && !tree_sides.contains(&key) {
                    cotree.push(key);
                }
            }
        }
        LinkTree { root, paths, words, cotree }
    }

    /// Closed walk: tree path to the cotree side, across it, tree path back.
    fn cotree_loop(&self, tri: &Triangulation, side: (usize, usize, usize)) -> Vec<LinkStep> {
        let (t, v, f) = side;
        let (t2, v2, _) = partner(tri, t, v, f);
        let mut walk = self.paths[&(t, v)].clone();
        walk.push(LinkStep { tet: t, vertex: v, exit_face: f });
        walk.extend(reverse_walk(tri, &self.paths[&(t2, v2)]));
        walk
    }
}

/// The same path traversed backwards.
pub fn reverse_walk(tri: &Triangulation, walk: &[LinkStep]) -> Vec<LinkStep> {
    walk.iter()
        .rev()
        .map(|s| {
            let (t2, v2, f2) = partner(tri, s.tet, s.vertex, s.exit_face);
            LinkStep { tet: t2, vertex: v2, exit_face: f2 }
        })
        .collect()
}

fn walk_word(skel: &SkeletonSummary, spine: &SpinePresentation, walk: &[LinkStep]) -> Word {
    let letters: Vec<i32> = walk.iter().flat_map(|s| spine.crossing(skel, s.tet, s.exit_face).0).collect();
    Word::from_letters(letters)
}

/// Two curves generating the fundamental group of a torus vertex link.
pub fn peripheral_system(
    tri: &Triangulation,
    skel: &SkeletonSummary,
    spine: &SpinePresentation,
    vertex: usize,
) -> Result<PeripheralSystem> {
    let link = skel.links.get(vertex).ok_or_else(|| Error::Precondition(format!("no vertex {vertex}")))?;
    if link.surface_kind != SurfaceKind::Torus {
        return Err(Error::NotTorusLink { vertex, kind: link.surface_kind.to_string() });
    }
    let tree = LinkTree::build(tri, skel, spine, vertex);
    let c = tree.cotree.len();
    let index: BTreeMap<(usize, usize, usize), usize> = tree.cotree.iter().enumerate().map(|(i, &k)| (k, i)).collect();

    // Loops around link vertices, written in the cotree basis of the cycle space.
    let mut rows: Vec<Vec<BigInt>> = Vec::new();
    for e in &skel.edges {
        for end in 0..2 {
            let c0 = e.corners[0];
            if skel.vertex_of[c0.tet][c0.vertices[end]] != vertex {
                continue;
            }
            let mut row = vec![BigInt::zero(); c];
            for corner in &e.corners {
                let (key, is_rep) = canonical(tri, (corner.tet, corner.vertices[end], corner.exit_face()));
                if let Some(&i) = index.get(&key) {
                    row[i] += if is_rep { 1 } else { -1 };
                }
            }
            rows.push(row);
        }
    }
    let snf = smith_normal_form(&rows, c);
    if snf.rank + 2 != c || snf.diagonal.iter().take(snf.rank).any(|d| *d != BigInt::from(1)) {
        return Err(Error::Internal(format!("link of vertex {vertex} does not have first homology Z^2")));
    }

    let mut curves = Vec::with_capacity(2);
    for j in snf.rank..c {
        let mut target = vec![BigInt::zero(); c];
        target[j] = BigInt::from(1);
        let u = lattice_solve(&snf.q, c, &target).ok_or_else(|| Error::Internal("non-unimodular transform".into()))?;
        let mut walk = Vec::new();
        for (i, ui) in u.iter().enumerate() {
            let k = ui.to_i64().ok_or_else(|| Error::Internal("peripheral coefficient overflow".into()))?;
            if k == 0 {
                continue;
            }
            let l = tree.cotree_loop(tri, tree.cotree[i]);
            let piece = if k > 0 { l } else { reverse_walk(tri, &l) };
            for _ in 0..k.unsigned_abs() {
                walk.extend_from_slice(&piece);
            }
        }
        let word = walk_word(skel, spine, &walk);
        curves.push(PeripheralCurve { walk, word });
    }
    let curves: [PeripheralCurve; 2] = curves.try_into().expect("two free coordinates");
    Ok(PeripheralSystem { vertex, basepoint: tree.root, curves })
}

/// Peripheral words of a torus cusp in the spine presentation's generators.
pub fn peripheral_words(tri: &Triangulation, vertex: usize) -> Result<[Word; 2]> {
    let skel = build_skeleton(tri)?;
    let spine = spine_presentation_with(tri, &skel)?;
    let sys = peripheral_system(tri, &skel, &spine, vertex)?;
    Ok(sys.curves.map(|c| c.word))
}

/// Word of edge class `edge` as an arc between the basepoints of its end cusps:
/// link-tree path to the edge's start, along the edge, link-tree path back from its end.
pub fn edge_core_word(
    tri: &Triangulation,
    skel: &SkeletonSummary,
    spine: &SpinePresentation,
    edge: usize,
) -> (usize, usize, Word) {
    let c = skel.edges[edge].corners[0];
    let (a, b) = (c.vertices[0], c.vertices[1]);
    let va = skel.vertex_of[c.tet][a];
    let vb = skel.vertex_of[c.tet][b];
    let ta = LinkTree::build(tri, skel, spine, va);
    let tb = if vb == va { None } else { Some(LinkTree::build(tri, skel, spine, vb)) };
    let tb = tb.as_ref().unwrap_or(&ta);
    let w = ta.words[&(c.tet, a)].concat(&tb.words[&(c.tet, b)].inverse());
    (va, vb, w)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;
    use crate::pi1::Abelianization;

    #[test]
    fn peripheral_words_are_independent_in_the_link() {
        for tri in [fixtures::figure_eight(), fixtures::m136()] {
            let skel = build_skeleton(&tri).unwrap();
            let spine = spine_presentation_with(&tri, &skel).unwrap();
            let sys = peripheral_system(&tri, &skel, &spine, 0).unwrap();
            for c in &sys.curves {
                assert!(!c.walk.is_empty());
                assert_eq!(walk_word(&skel, &spine, &c.walk), c.word);
                let first = c.walk[0];
                assert_eq!((first.tet, first.vertex), sys.basepoint);
            }
            let ab = Abelianization::new(&spine.presentation);
            let comm = Word::commutator(&sys.curves[0].word, &sys.curves[1].word);
            assert!(ab.is_trivial(&comm));
        }
    }

    #[test]
    fn sphere_link_is_rejected() {
        let tri = fixtures::quaternionic();
        assert!(matches!(peripheral_words(&tri, 0), Err(Error::NotTorusLink { .. })));
    }
}
