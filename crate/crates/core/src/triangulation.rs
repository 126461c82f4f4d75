//! Tetrahedra with face pairings: the combinatorial data every other module reads.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::perm::Perm4;

/// Where a face is glued: the target tetrahedron and the vertex map onto it.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Gluing {
    pub tet: usize,
    pub perm: Perm4,
}

/// A singular triangulation given by face pairings.
///
/// Face `f` of a tetrahedron is the face opposite vertex `f`. A gluing
/// `(t, f) -> (t', σ)` identifies vertex `v` of `t` with vertex `σ(v)` of `t'`,
/// so face `f` lands on face `σ(f)` of `t'`.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Triangulation {
    gluings: Vec<[Option<Gluing>; 4]>,
    pub label: Option<String>,
}

/// Whether unglued faces are acceptable.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Mode {
    Closed,
    Boundary,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Violation {
    Unglued { tet: usize, face: usize },
    TargetOutOfRange { tet: usize, face: usize, target: usize },
    MutualInverse { tet: usize, face: usize },
    SelfIdentifiedFace { tet: usize, face: usize },
    ReversedEdge { tet: usize, edge: [usize; 2] },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::Unglued { tet, face } => write!(f, "unglued face at ({tet},{face})"),
            Violation::TargetOutOfRange { tet, face, target } => {
                write!(f, "face ({tet},{face}) glued to missing tetrahedron {target}")
            }
            Violation::MutualInverse { tet, face } => {
                write!(f, "mutual inverse violated at ({tet},{face})")
            }
            Violation::SelfIdentifiedFace { tet, face } => {
                write!(f, "face ({tet},{face}) is glued to itself")
            }
            Violation::ReversedEdge { tet, edge } => write!(
                f,
                "edge {}{} of tetrahedron {tet} is identified with itself in reverse",
                edge[0], edge[1]
            ),
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct ValidationReport {
    pub violations: Vec<Violation>,
}

impl ValidationReport {
    pub fn is_valid(&self) -> bool {
        self.violations.is_empty()
    }
}

impl Triangulation {
    /// `n` tetrahedra with every face unglued.
    pub fn new(n: usize) -> Self {
        Triangulation { gluings: vec![[None; 4]; n], label: None }
    }

    pub fn from_gluings(gluings: Vec<[Option<Gluing>; 4]>) -> Self {
        Triangulation { gluings, label: None }
    }

    pub fn tet_count(&self) -> usize {
        self.gluings.len()
    }

    pub fn gluing(&self, tet: usize, face: usize) -> Option<Gluing> {
        self.gluings[tet][face]
    }

    pub fn gluings(&self) -> &[[Option<Gluing>; 4]] {
        &self.gluings
    }

    pub fn add_tetrahedron(&mut self) -> usize {
        self.gluings.push([None; 4]);
        self.gluings.len() - 1
    }

    /// Glues face `face` of `tet` to `target` with vertex map `perm`, setting both sides.
    pub fn join(&mut self, tet: usize, face: usize, target: usize, perm: Perm4) {
        self.gluings[tet][face] = Some(Gluing { tet: target, perm });
        self.gluings[target][perm.apply(face)] = Some(Gluing { tet, perm: perm.inverse() });
    }

    /// Sets one side of a gluing only; used by parsers that read both sides separately.
    pub(crate) fn set_one_sided(&mut self, tet: usize, face: usize, gluing: Option<Gluing>) {
        self.gluings[tet][face] = gluing;
    }

    pub fn unglue(&mut self, tet: usize, face: usize) {
        if let Some(g) = self.gluings[tet][face].take() {
            let back = g.perm.apply(face);
            if self.gluings[g.tet][back].map(|b| b.tet) == Some(tet) {
                self.gluings[g.tet][back] = None;
            }
        }
    }

    pub fn is_closed(&self) -> bool {
        self.gluings.iter().all(|faces| faces.iter().all(Option::is_some))
    }

    /// Every gluing reverses orientation, so the labels 0123 orient all tetrahedra coherently.
    pub fn is_oriented(&self) -> bool {
        self.first_orientation_defect().is_none()
    }

    pub(crate) fn first_orientation_defect(&self) -> Option<(usize, usize)> {
        for (t, faces) in self.gluings.iter().enumerate() {
            for (f, g) in faces.iter().enumerate() {
                if let Some(g) = g {
                    if g.perm.sign() != -1 {
                        return Some((t, f));
                    }
                }
            }
        }
        None
    }

    pub fn validate(&self) -> ValidationReport {
        self.validate_mode(Mode::Closed)
    }

    pub fn validate_mode(&self, mode: Mode) -> ValidationReport {
        let n = self.tet_count();
        let mut violations = Vec::new();
        for t in 0..n {
            for f in 0..4 {
                let Some(g) = self.gluings[t][f] else {
                    if mode == Mode::Closed {
                        violations.push(Violation::Unglued { tet: t, face: f });
                    }
                    continue;
                };
                if g.tet >= n {
                    violations.push(Violation::TargetOutOfRange { tet: t, face: f, target: g.tet });
                    continue;
                }
                let back_face = g.perm.apply(f);
                if g.tet == t && back_face == f {
                    violations.push(Violation::SelfIdentifiedFace { tet: t, face: f });
                    continue;
                }
                let back = self.gluings[g.tet][back_face];
                if back != Some(Gluing { tet: t, perm: g.perm.inverse() }) {
                    violations.push(Violation::MutualInverse { tet: t, face: f });
                }
            }
        }
        if violations.is_empty() {
            violations.extend(crate::skeleton::reversed_edges(self));
        }
        ValidationReport { violations }
    }

    /// Errors unless the triangulation is valid in the given mode.
    pub fn require_valid(&self, mode: Mode) -> Result<()> {
        let report = self.validate_mode(mode);
        if report.is_valid() {
            Ok(())
        } else {
            Err(Error::InvalidTriangulation(report.violations))
        }
    }

    /// Relabels tetrahedra: tetrahedron `t` becomes `map[t]`.
    pub fn relabel(&self, map: &[usize]) -> Triangulation {
        let mut out = Triangulation::new(self.tet_count());
        for (t, faces) in self.gluings.iter().enumerate() {
            for (f, g) in faces.iter().enumerate() {
                out.gluings[map[t]][f] = g.map(|g| Gluing { tet: map[g.tet], perm: g.perm });
            }
        }
        out.label = self.label.clone();
        out
    }

    /// Relabels the vertices of each tetrahedron: vertex `v` of `t` becomes `perms[t](v)`.
    pub fn relabel_vertices(&self, perms: &[Perm4]) -> Triangulation {
        let mut out = Triangulation::new(self.tet_count());
        for (t, faces) in self.gluings.iter().enumerate() {
            for (f, g) in faces.iter().enumerate() {
                if let Some(g) = g {
                    let perm = perms[g.tet] * g.perm * perms[t].inverse();
                    out.gluings[t][perms[t].apply(f)] = Some(Gluing { tet: g.tet, perm });
                }
            }
        }
        out.label = self.label.clone();
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(images: [u8; 4]) -> Perm4 {
        Perm4::new(images).unwrap()
    }

    #[test]
    fn lone_tetrahedron_has_four_unglued_faces() {
        let t = Triangulation::new(1);
        let report = t.validate();
        assert_eq!(report.violations.len(), 4);
        assert!(report.violations.iter().all(|v| matches!(v, Violation::Unglued { .. })));
        assert!(t.validate_mode(Mode::Boundary).is_valid());
    }

    #[test]
    fn detects_broken_mutual_inverse() {
        let mut t = Triangulation::new(3);
        t.join(0, 3, 1, p([3, 1, 2, 0]));
        // Overwrite the back side so it points at tetrahedron 2.
        t.set_one_sided(1, 0, Some(Gluing { tet: 2, perm: Perm4::IDENTITY }));
        let report = t.validate_mode(Mode::Boundary);
        assert!(report.violations.contains(&Violation::MutualInverse { tet: 0, face: 3 }));
        assert_eq!(
            report.violations.iter().find(|v| matches!(v, Violation::MutualInverse { tet: 0, .. })).unwrap().to_string(),
            "mutual inverse violated at (0,3)"
        );
    }

    #[test]
    fn detects_face_glued_to_itself() {
        let mut t = Triangulation::new(1);
        t.set_one_sided(0, 0, Some(Gluing { tet: 0, perm: p([0, 2, 1, 3]) }));
        let report = t.validate_mode(Mode::Boundary);
        assert_eq!(report.violations, vec![Violation::SelfIdentifiedFace { tet: 0, face: 0 }]);
    }

    #[test]
    fn empty_triangulation_is_valid() {
        assert!(Triangulation::new(0).validate().is_valid());
    }

    #[test]
    fn relabel_vertices_keeps_validity() {
        let mut t = Triangulation::new(2);
        t.join(0, 0, 1, p([1, 0, 2, 3]));
        t.join(0, 1, 1, p([0, 2, 1, 3]));
        let perms = [p([1, 2, 3, 0]), p([3, 0, 2, 1])];
        let r = t.relabel_vertices(&perms);
        assert!(r.validate_mode(Mode::Boundary).is_valid());
    }
}
