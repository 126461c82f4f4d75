//! Combinatorial isomorphisms between triangulations.

use serde::{Deserialize, Serialize};

use crate::perm::Perm4;
use crate::triangulation::{Gluing, Triangulation};

/// Tetrahedron `t` of the first triangulation goes to `tet_map[t]` of the
/// second, with vertex `v` going to `perms[t](v)`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Isomorphism {
    pub tet_map: Vec<usize>,
    pub perms: Vec<Perm4>,
}

impl Isomorphism {
    /// Checks that the map is a bijection commuting with every gluing.
    pub fn verify(&self, a: &Triangulation, b: &Triangulation) -> bool {
        let n = a.tet_count();
        if b.tet_count() != n || self.tet_map.len() != n || self.perms.len() != n {
            return false;
        }
        let mut hit = vec![false; n];
        for &t in &self.tet_map {
            if t >= n || std::mem::replace(&mut hit[t], true) {
                return false;
            }
        }
        (0..n).all(|t| (0..4).all(|f| image_gluing(self, a, t, f) == b.gluing(self.tet_map[t], self.perms[t].apply(f))))
    }
}

fn image_gluing(iso: &Isomorphism, a: &Triangulation, t: usize, f: usize) -> Option<Gluing> {
    a.gluing(t, f).map(|g| Gluing { tet: iso.tet_map[g.tet], perm: iso.perms[g.tet] * g.perm * iso.perms[t].inverse() })
}

/// Extends a partial map from `start -> (target, p)` across face gluings.
/// Returns the tetrahedra newly assigned, or `None` on a conflict.
fn propagate(
    a: &Triangulation,
    b: &Triangulation,
    map: &mut [Option<(usize, Perm4)>],
    used: &mut [bool],
    start: usize,
    target: usize,
    p: Perm4,
) -> Option<Vec<usize>> {
    let mut assigned = Vec::new();
    let undo = |map: &mut [Option<(usize, Perm4)>], used: &mut [bool], assigned: &[usize]| {
        for &t in assigned {
            if let Some((x, _)) = map[t].take() {
                used[x] = false;
            }
        }
    };
    if used[target] {
        return None;
    }
    map[start] = Some((target, p));
    used[target] = true;
    assigned.push(start);
    let mut stack = vec![start];
    while let Some(t) = stack.pop() {
        let (tb, pt) = map[t].unwrap();
        for f in 0..4 {
            let ga = a.gluing(t, f);
            let gb = b.gluing(tb, pt.apply(f));
            match (ga, gb) {
                (None, None) => {}
                (Some(ga), Some(gb)) => {
                    // Required vertex map on the neighbour.
                    let q = gb.perm * pt * ga.perm.inverse();
                    match map[ga.tet] {
                        Some((x, qx)) => {
                            if x != gb.tet || qx != q {
                                undo(map, used, &assigned);
                                return None;
                            }
                        }
                        None => {
                            if used[gb.tet] {
                                undo(map, used, &assigned);
                                return None;
                            }
                            map[ga.tet] = Some((gb.tet, q));
                            used[gb.tet] = true;
                            assigned.push(ga.tet);
                            stack.push(ga.tet);
                        }
                    }
                }
                _ => {
                    undo(map, used, &assigned);
                    return None;
                }
            }
        }
    }
    Some(assigned)
}

fn search(a: &Triangulation, b: &Triangulation, map: &mut Vec<Option<(usize, Perm4)>>, used: &mut Vec<bool>) -> bool {
    let Some(start) = map.iter().position(Option::is_none) else { return true };
    for target in 0..b.tet_count() {
        if used[target] {
            continue;
        }
        for p in Perm4::all() {
            if let Some(assigned) = propagate(a, b, map, used, start, target, p) {
                if search(a, b, map, used) {
                    return true;
                }
                for t in assigned {
                    if let Some((x, _)) = map[t].take() {
                        used[x] = false;
                    }
                }
            }
        }
    }
    false
}

/// Finds an isomorphism by fixing the image of the first unmapped tetrahedron of
/// each component and propagating across gluings.
pub fn are_isomorphic(a: &Triangulation, b: &Triangulation) -> Option<Isomorphism> {
    if a.tet_count() != b.tet_count() {
        return None;
    }
    let n = a.tet_count();
    let mut map = vec![None; n];
    let mut used = vec![false; n];
    if !search(a, b, &mut map, &mut used) {
        return None;
    }
    let iso = Isomorphism {
        tet_map: map.iter().map(|m| m.unwrap().0).collect(),
        perms: map.iter().map(|m| m.unwrap().1).collect(),
    };
    debug_assert!(iso.verify(a, b));
    Some(iso)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;

    #[test]
    fn identity_on_itself() {
        let t = fixtures::m136();
        let iso = are_isomorphic(&t, &t).unwrap();
        assert_eq!(iso.tet_map, (0..7).collect::<Vec<_>>());
        assert!(iso.perms.iter().all(|p| p.is_identity()));
    }

    #[test]
    fn recovers_cyclic_shift() {
        let t = fixtures::m136();
        let shift: Vec<usize> = (0..7).map(|i| (i + 1) % 7).collect();
        let s = t.relabel(&shift);
        let iso = are_isomorphic(&t, &s).unwrap();
        assert_eq!(iso.tet_map, shift);
        assert!(iso.verify(&t, &s));
    }

    #[test]
    fn vertex_relabelling_and_different_sizes() {
        let t = fixtures::figure_eight();
        let perms = [Perm4::new([2, 0, 3, 1]).unwrap(), Perm4::new([1, 0, 2, 3]).unwrap()];
        let r = t.relabel_vertices(&perms);
        let iso = are_isomorphic(&t, &r).unwrap();
        assert!(iso.verify(&t, &r));
        assert!(are_isomorphic(&fixtures::m136(), &t).is_none());
        assert!(are_isomorphic(&fixtures::quaternionic(), &t).is_none());
    }
}
