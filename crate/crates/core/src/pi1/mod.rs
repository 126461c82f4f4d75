//! Fundamental group presentations and budgeted decision procedures.

mod coset;
mod decide;
mod peripheral;
mod quotient;
mod rewrite;
pub mod simplify;
pub mod snf;
mod word;

use std::collections::VecDeque;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::skeleton::{build_skeleton, Classification, SkeletonSummary};
use crate::triangulation::Triangulation;

pub use coset::{enumerate_cosets, CosetTable};
pub use decide::{
    decide_double_coset, decide_membership, decide_word, Answer, Budget, Certificate, GroupContext, GroupVerdict, Question,
};
pub use peripheral::{edge_core_word, peripheral_system, peripheral_words, LinkStep, PeripheralCurve, PeripheralSystem};
pub use quotient::{find_quotients, Permutation, QuotientHom};
pub use rewrite::{RewriteStep, RewriteSystem};
pub use simplify::{simplify_presentation, Simplified};
pub use snf::{homology, word_image, Abelianization, HomologyInvariants};
pub use word::{gen_of, letter, Word};

/// What a generator stands for in the triangulation.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum GeneratorSource {
    EdgeClass(usize),
    FaceClass(usize),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Presentation {
    pub generator_count: usize,
    pub relators: Vec<Word>,
    /// One entry per generator, when known.
    #[serde(default)]
    pub labels: Vec<Option<GeneratorSource>>,
}

impl Presentation {
    pub fn new(generator_count: usize, relators: Vec<Word>) -> Self {
        Presentation { generator_count, relators, labels: vec![None; generator_count] }
    }

    pub fn is_well_formed(&self) -> bool {
        self.relators.iter().all(|r| r.max_generator().is_none_or(|g| g < self.generator_count))
    }
}

impl std::fmt::Display for Presentation {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let gens: Vec<String> = (0..self.generator_count).map(|g| format!("x{g}")).collect();
        let rels: Vec<String> = self.relators.iter().map(|r| r.to_string()).collect();
        write!(f, "< {} | {} >", gens.join(", "), rels.join(", "))
    }
}

/// Edge-generator presentation of a closed one-vertex triangulation.
///
/// Generator `e` is edge class `e`, oriented as its first corner; each face class
/// contributes the relator read around the face boundary.
pub fn presentation_closed(tri: &Triangulation) -> Result<Presentation> {
    let skel = build_skeleton(tri)?;
    presentation_closed_with(tri, &skel)
}

pub fn presentation_closed_with(tri: &Triangulation, skel: &SkeletonSummary) -> Result<Presentation> {
    if !tri.is_closed() {
        return Err(Error::Precondition("edge presentation needs every face glued".into()));
    }
    if skel.vertex_count != 1 {
        return Err(Error::Precondition(format!(
            "edge presentation needs exactly one vertex, found {}",
            skel.vertex_count
        )));
    }
    if skel.classification != Classification::ClosedManifold1Vertex {
        return Err(Error::Precondition(format!("vertex link is a {}, not a sphere", skel.links[0].surface_kind)));
    }
    let relators = skel
        .faces
        .iter()
        .map(|fc| {
            let (t, f) = fc.representatives[0];
            let vs: Vec<usize> = (0..4).filter(|&v| v != f).collect();
            let cyc = [(vs[0], vs[1]), (vs[1], vs[2]), (vs[2], vs[0])];
            Word::from_letters(cyc.iter().map(|&(a, b)| {
                let r = skel.edge_class_of(t, a, b);
                letter(r.class, !r.forward)
            }))
        })
        .collect();
    let mut p = Presentation::new(skel.edges.len(), relators);
    p.labels = (0..skel.edges.len()).map(|e| Some(GeneratorSource::EdgeClass(e))).collect();
    Ok(p)
}

/// The dual-spine presentation together with the bookkeeping needed to turn
/// paths through tetrahedra into words.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SpinePresentation {
    pub presentation: Presentation,
    /// Face classes collapsed by the dual spanning tree.
    pub tree_faces: Vec<usize>,
    /// Generator of each face class, or `None` for tree faces.
    pub face_generator: Vec<Option<usize>>,
    /// Presentation before the tree collapse: one generator per face class.
    pub uncollapsed: Presentation,
}

impl SpinePresentation {
    /// Word for crossing face `face` of `tet` towards its neighbour.
    pub fn crossing(&self, skel: &SkeletonSummary, tet: usize, face: usize) -> Word {
        let fc = skel.face_of[tet][face];
        match self.face_generator[fc] {
            None => Word::empty(),
            Some(g) => {
                let forward = skel.faces[fc].representatives[0] == (tet, face);
                Word(vec![letter(g, !forward)])
            }
        }
    }

    /// Same as `crossing`, before the tree collapse.
    pub fn raw_crossing(skel: &SkeletonSummary, tet: usize, face: usize) -> i32 {
        let fc = skel.face_of[tet][face];
        letter(fc, skel.faces[fc].representatives[0] != (tet, face))
    }
}

pub fn presentation_spine(tri: &Triangulation) -> Result<Presentation> {
    Ok(spine_presentation(tri)?.presentation)
}

/// Generators are face classes, oriented from their first representative to
/// the second; relators read the faces crossed around each edge class.
pub fn spine_presentation(tri: &Triangulation) -> Result<SpinePresentation> {
    let skel = build_skeleton(tri)?;
    spine_presentation_with(tri, &skel)
}

pub fn spine_presentation_with(tri: &Triangulation, skel: &SkeletonSummary) -> Result<SpinePresentation> {
    if !tri.is_closed() {
        return Err(Error::Precondition("spine presentation needs every face glued".into()));
    }
    let n = tri.tet_count();
    let nf = skel.faces.len();
    let raw_relators: Vec<Word> = skel
        .edges
        .iter()
        .map(|e| Word(e.corners.iter().map(|c| SpinePresentation::raw_crossing(skel, c.tet, c.exit_face())).collect()))
        .collect();
    let mut uncollapsed = Presentation::new(nf, raw_relators.clone());
    uncollapsed.labels = (0..nf).map(|f| Some(GeneratorSource::FaceClass(f))).collect();

    let mut in_tree = vec![false; nf];
    let mut visited = vec![false; n];
    for root in 0..n {
        if visited[root] {
            continue;
        }
        visited[root] = true;
        let mut queue = VecDeque::from([root]);
        while let Some(t) = queue.pop_front() {
            for f in 0..4 {
                let g = tri.gluing(t, f).expect("closed");
                if !visited[g.tet] {
                    visited[g.tet] = true;
                    in_tree[skel.face_of[t][f]] = true;
                    queue.push_back(g.tet);
                }
            }
        }
    }
    let mut face_generator = vec![None; nf];
    let mut labels = Vec::new();
    for fc in 0..nf {
        if !in_tree[fc] {
            face_generator[fc] = Some(labels.len());
            labels.push(Some(GeneratorSource::FaceClass(fc)));
        }
    }
    let images: Vec<Word> = face_generator.iter().map(|g| g.map(Word::gen).unwrap_or_default()).collect();
    let relators = raw_relators.iter().map(|r| r.substitute(&images)).collect();
    let presentation = Presentation { generator_count: labels.len(), relators, labels };
    let tree_faces = (0..nf).filter(|&f| in_tree[f]).collect();
    Ok(SpinePresentation { presentation, tree_faces, face_generator, uncollapsed })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;

    #[test]
    fn figure_eight_spine_counts() {
        let p = presentation_spine(&fixtures::figure_eight()).unwrap();
        assert_eq!(p.generator_count, 3);
        assert_eq!(p.relators.len(), 2);
        assert_eq!(homology(&p).to_string(), "Z");
    }

    #[test]
    fn m136_spine_counts() {
        let p = presentation_spine(&fixtures::m136()).unwrap();
        assert_eq!(p.generator_count, 8);
        assert_eq!(p.relators.len(), 7);
    }

    #[test]
    fn closed_presentation_rejects_ideal_input() {
        assert!(presentation_closed(&fixtures::figure_eight()).is_err());
        assert!(presentation_closed(&Triangulation::new(1)).is_err());
    }
}
