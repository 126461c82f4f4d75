use std::collections::{BTreeMap, BTreeSet, HashSet, VecDeque};
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use super::{slot_values, verify_shapes};
use crate::error::{Error, Result};
use crate::gaussian::GaussianRational;
use crate::perm::{slot_of, Perm4, EDGE_VERTICES};
use crate::pi1::snf::lattice_solve;
use crate::skeleton::build_skeleton;
use crate::triangulation::Triangulation;

type Gq = GaussianRational;

/// A point of the Riemann sphere with Gaussian-rational coordinate.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(into = "String", try_from = "String")]
pub enum Point {
    Infinity,
    Finite(Gq),
}

impl fmt::Display for Point {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Point::Infinity => write!(f, "inf"),
            Point::Finite(z) => write!(f, "{z}"),
        }
    }
}

impl From<Point> for String {
    fn from(p: Point) -> String {
        p.to_string()
    }
}

impl TryFrom<String> for Point {
    type Error = String;
    fn try_from(s: String) -> Result<Self, String> {
        if s == "inf" {
            Ok(Point::Infinity)
        } else {
            s.parse().map(Point::Finite)
        }
    }
}

/// Homogeneous coordinates `[x : y]`.
type H = [Gq; 2];

fn homog(p: &Point) -> H {
    match p {
        Point::Infinity => [Gq::one(), Gq::zero()],
        Point::Finite(z) => [z.clone(), Gq::one()],
    }
}

fn dehomog(h: &H) -> Point {
    if h[1].is_zero() {
        Point::Infinity
    } else {
        Point::Finite(h[0].checked_div(&h[1]).unwrap())
    }
}

fn det(x: &H, y: &H) -> Gq {
    &(&x[0] * &y[1]) - &(&x[1] * &y[0])
}

type Mobius = [[Gq; 2]; 2];

fn apply(m: &Mobius, x: &H) -> H {
    [&(&m[0][0] * &x[0]) + &(&m[0][1] * &x[1]), &(&m[1][0] * &x[0]) + &(&m[1][1] * &x[1])]
}

fn compose(a: &Mobius, b: &Mobius) -> Mobius {
    let e = |i: usize, j: usize| &(&a[i][0] * &b[0][j]) + &(&a[i][1] * &b[1][j]);
    [[e(0, 0), e(0, 1)], [e(1, 0), e(1, 1)]]
}

fn adjugate(m: &Mobius) -> Mobius {
    [[m[1][1].clone(), -&m[0][1]], [-&m[1][0], m[0][0].clone()]]
}

/// The Möbius map sending `a, b, c` to `∞, 0, 1`.
fn normalizer(a: &H, b: &H, c: &H) -> Mobius {
    let alpha = det(c, a);
    let beta = det(c, b);
    [[&alpha * &b[1], -&(&alpha * &b[0])], [&beta * &a[1], -&(&beta * &a[0])]]
}

/// The fourth vertex `d` of a tetrahedron with `(a, b, c, d)` positively ordered
/// and shape `z` at edge `ab`.
fn fourth_vertex(a: &H, b: &H, c: &H, z: &Gq) -> H {
    let m = adjugate(&normalizer(a, b, c));
    apply(&m, &[z.clone(), Gq::one()])
}

/// Shape at edge `ab` of positions `(a, b, c, d)`.
fn cross_ratio(a: &H, b: &H, c: &H, d: &H) -> Option<Gq> {
    match dehomog(&apply(&normalizer(a, b, c), d)) {
        Point::Finite(z) => Some(z),
        Point::Infinity => None,
    }
}

/// An even ordering `(a, b, c, d)` with `d` last.
fn even_order(d: usize) -> [usize; 4] {
    let rest: Vec<usize> = (0..4).filter(|&v| v != d).collect();
    let mut o = [rest[0], rest[1], rest[2], d];
    if Perm4::new(o.map(|v| v as u8)).unwrap().sign() < 0 {
        o.swap(0, 1);
    }
    o
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DevelopedTet {
    pub tet: usize,
    pub depth: usize,
    /// Developed tetrahedron and face crossed to reach this one.
    pub parent: Option<(usize, usize)>,
    pub positions: [Point; 4],
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ParallelPair {
    pub edges: [usize; 2],
    pub endpoints: [Point; 2],
    /// Tetrahedra visited from the root to each of the two lifts.
    pub paths: [Vec<usize>; 2],
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FlatCluster {
    pub tets: Vec<usize>,
    /// Holonomies of loops in the cluster, all parabolic with one fixed point.
    pub closed: bool,
    pub fixed_point: Option<Point>,
    /// Translation lengths after moving the fixed point to infinity.
    pub translations: Vec<Gq>,
    /// Pairs of distinct edge classes sharing both endpoints somewhere in the
    /// cluster's development.
    pub parallel: Vec<[usize; 2]>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DevelopReport {
    pub radius: usize,
    pub tets: Vec<DevelopedTet>,
    /// Edge classes with a developed lift whose endpoints coincide.
    pub coincident_edges: Vec<usize>,
    pub parallel_pairs: Vec<ParallelPair>,
    pub flat_clusters: Vec<FlatCluster>,
    pub positively_oriented: bool,
    /// Every flat cluster closes up under parabolic translations and its whole
    /// development is free of parallel pairs.
    pub conclusive_for_flat_clusters: bool,
}

fn neighbour_positions(tri: &Triangulation, shapes: &[[Gq; 3]], tet: usize, pos: &[H; 4], face: usize) -> Option<(usize, [H; 4])> {
    let g = tri.gluing(tet, face)?;
    let mut out: [Option<H>; 4] = Default::default();
    for v in (0..4).filter(|&v| v != face) {
        out[g.perm.apply(v)] = Some(pos[v].clone());
    }
    let d = g.perm.apply(face);
    let [a, b, c, _] = even_order(d);
    let z = &shapes[g.tet][slot_of(a, b)];
    let pd = fourth_vertex(out[a].as_ref().unwrap(), out[b].as_ref().unwrap(), out[c].as_ref().unwrap(), z);
    out[d] = Some(pd);
    Some((g.tet, out.map(|p| homog(&dehomog(&p.unwrap())))))
}

fn edge_key(p: &Point, q: &Point) -> (String, String) {
    let (a, b) = (p.to_string(), q.to_string());
    if a <= b {
        (a, b)
    } else {
        (b, a)
    }
}

fn path_to(nodes: &[DevelopedTet], mut i: usize) -> Vec<usize> {
    let mut out = vec![nodes[i].tet];
    while let Some((p, _)) = nodes[i].parent {
        out.push(nodes[p].tet);
        i = p;
    }
    out.reverse();
    out
}

/// Develops from tetrahedron 0 placed at `(∞, 0, 1, z₀)` out to combinatorial
/// distance `radius`, then scans lifts for coincident or shared endpoints.
/// Flat clusters are developed in full, modulo their holonomy.
pub fn develop_and_scan(tri: &Triangulation, shapes: &[Gq], radius: usize) -> Result<DevelopReport> {
    let report = verify_shapes(tri, shapes)?;
    if !report.passed {
        return Err(Error::VerificationFailed("edge equations do not hold".into()));
    }
    let skel = build_skeleton(tri)?;
    let slots: Vec<[Gq; 3]> = shapes.iter().map(|z| slot_values(z).unwrap()).collect();
    let n = tri.tet_count();
    let mut nodes = Vec::new();
    if n > 0 {
        let start = [Point::Infinity, Point::Finite(Gq::zero()), Point::Finite(Gq::one()), Point::Finite(shapes[0].clone())];
        nodes.push(DevelopedTet { tet: 0, depth: 0, parent: None, positions: start });
    }
    let mut seen: HashSet<(usize, [Point; 4])> = nodes.iter().map(|d| (d.tet, d.positions.clone())).collect();
    let mut queue: VecDeque<usize> = (0..nodes.len()).collect();
    while let Some(i) = queue.pop_front() {
        if nodes[i].depth >= radius {
            continue;
        }
        let pos = nodes[i].positions.clone().map(|p| homog(&p));
        for f in 0..4 {
            let Some((t2, p2)) = neighbour_positions(tri, &slots, nodes[i].tet, &pos, f) else { continue };
            let positions = p2.map(|h| dehomog(&h));
            if seen.insert((t2, positions.clone())) {
                nodes.push(DevelopedTet { tet: t2, depth: nodes[i].depth + 1, parent: Some((i, f)), positions });
                queue.push_back(nodes.len() - 1);
            }
        }
    }

    let mut coincident = BTreeSet::new();
    let mut by_ends: BTreeMap<(String, String), (usize, usize)> = BTreeMap::new();
    let mut pairs: BTreeMap<[usize; 2], ParallelPair> = BTreeMap::new();
    for (i, node) in nodes.iter().enumerate() {
        for e in 0..6 {
            let class = skel.edge_of[node.tet][e].class;
            let [a, b] = EDGE_VERTICES[e];
            let (p, q) = (&node.positions[a], &node.positions[b]);
            if p == q {
                coincident.insert(class);
                continue;
            }
            let key = edge_key(p, q);
            match by_ends.get(&key) {
                Some(&(c, j)) if c != class => {
                    let edges = [c.min(class), c.max(class)];
                    pairs.entry(edges).or_insert_with(|| ParallelPair {
                        edges,
                        endpoints: [p.clone(), q.clone()],
                        paths: [path_to(&nodes, j), path_to(&nodes, i)],
                    });
                }
                Some(_) => {}
                None => {
                    by_ends.insert(key, (class, i));
                }
            }
        }
    }

    let flat: Vec<bool> = shapes.iter().map(|z| z.im.is_zero()).collect();
    let flat_clusters = flat_clusters(tri, &skel.edge_of, &slots, &flat);
    let conclusive = flat_clusters.iter().all(|c| c.closed && c.parallel.is_empty());
    Ok(DevelopReport {
        radius,
        tets: nodes,
        coincident_edges: coincident.into_iter().collect(),
        parallel_pairs: pairs.into_values().collect(),
        positively_oriented: shapes.iter().all(|z| !z.im.is_negative()),
        conclusive_for_flat_clusters: conclusive,
        flat_clusters,
    })
}

/// Möbius map carrying the labelled positions `from` onto `to`, if one exists.
fn map_between(from: &[H; 4], to: &[H; 4]) -> Option<Mobius> {
    let a = normalizer(&from[0], &from[1], &from[2]);
    let b = adjugate(&normalizer(&to[0], &to[1], &to[2]));
    let g = compose(&b, &a);
    (dehomog(&apply(&g, &from[3])) == dehomog(&to[3])).then_some(g)
}

fn is_scalar(m: &Mobius) -> bool {
    m[0][1].is_zero() && m[1][0].is_zero() && m[0][0] == m[1][1]
}

fn parabolic_fixed_point(m: &Mobius) -> Option<Point> {
    let tr = &m[0][0] + &m[1][1];
    let d = &(&m[0][0] * &m[1][1]) - &(&m[0][1] * &m[1][0]);
    let four = Gq::real(crate::gaussian::rat(4, 1));
    if &tr * &tr != &four * &d || is_scalar(m) {
        return None;
    }
    if m[1][0].is_zero() {
        return Some(Point::Infinity);
    }
    let two_c = &m[1][0] + &m[1][0];
    Some(Point::Finite((&m[0][0] - &m[1][1]).checked_div(&two_c).unwrap()))
}

/// `x ↦ 1/(x - p)`, or the identity when `p = ∞`.
fn to_infinity(p: &Point) -> Mobius {
    match p {
        Point::Infinity => [[Gq::one(), Gq::zero()], [Gq::zero(), Gq::one()]],
        Point::Finite(p) => [[Gq::zero(), Gq::one()], [Gq::one(), -p]],
    }
}

struct TranslationLattice {
    rows: Vec<Vec<BigInt>>,
    denom: BigInt,
}

impl TranslationLattice {
    fn new(gens: &[Gq]) -> Self {
        let mut denom = BigInt::one();
        for g in gens {
            denom = denom.lcm(g.re.denom()).lcm(g.im.denom());
        }
        let rows = gens.iter().map(|g| Self::scaled(g, &denom)).collect();
        TranslationLattice { rows, denom }
    }

    fn scaled(g: &Gq, denom: &BigInt) -> Vec<BigInt> {
        [&g.re, &g.im].iter().map(|q| (q.numer() * denom) / q.denom()).collect()
    }

    fn contains(&self, x: &Gq) -> bool {
        let d = Self::scaled(x, &self.denom);
        let exact = [&x.re, &x.im].iter().all(|q| (q.numer() * &self.denom) % q.denom() == BigInt::zero());
        exact && lattice_solve(&self.rows, 2, &d).is_some()
    }
}

/// Whether some translation in `lattice` carries the edge `{x2, y2}` onto `{x1, y1}`.
fn translates(lattice: &TranslationLattice, e1: &[Point; 2], e2: &[Point; 2]) -> bool {
    let matches = |p1: &Point, q1: &Point, p2: &Point, q2: &Point| match (p1, p2, q1, q2) {
        (Point::Infinity, Point::Infinity, Point::Finite(a), Point::Finite(b))
        | (Point::Finite(a), Point::Finite(b), Point::Infinity, Point::Infinity) => lattice.contains(&(a - b)),
        (Point::Finite(a), Point::Finite(b), Point::Finite(c), Point::Finite(d)) => {
            let t = a - b;
            t == c - d && lattice.contains(&t)
        }
        _ => false,
    };
    matches(&e1[0], &e1[1], &e2[0], &e2[1]) || matches(&e1[0], &e1[1], &e2[1], &e2[0])
}

fn flat_clusters(
    tri: &Triangulation,
    edge_of: &[[crate::skeleton::EdgeRef; 6]],
    slots: &[[Gq; 3]],
    flat: &[bool],
) -> Vec<FlatCluster> {
    let n = tri.tet_count();
    let mut done = vec![false; n];
    let mut out = Vec::new();
    for root in 0..n {
        if !flat[root] || done[root] {
            continue;
        }
        let z = &slots[root][0];
        let mut piece: BTreeMap<usize, [H; 4]> = BTreeMap::new();
        piece.insert(
            root,
            [Point::Infinity, Point::Finite(Gq::zero()), Point::Finite(Gq::one()), Point::Finite(z.clone())].map(|p| homog(&p)),
        );
        done[root] = true;
        let mut holonomy = Vec::new();
        let mut closed = true;
        let mut queue = VecDeque::from([root]);
        while let Some(t) = queue.pop_front() {
            let pos = piece[&t].clone();
            for f in 0..4 {
                let Some((t2, p2)) = neighbour_positions(tri, slots, t, &pos, f) else { continue };
                if !flat[t2] {
                    continue;
                }
                match piece.get(&t2) {
                    None => {
                        piece.insert(t2, p2);
                        done[t2] = true;
                        queue.push_back(t2);
                    }
                    Some(old) => match map_between(old, &p2) {
                        Some(g) if is_scalar(&g) => {}
                        Some(g) => holonomy.push(g),
                        None => closed = false,
                    },
                }
            }
        }
        let fixed: Vec<Option<Point>> = holonomy.iter().map(parabolic_fixed_point).collect();
        let fixed_point = match fixed.first() {
            Some(Some(p)) if fixed.iter().all(|q| q.as_ref() == Some(p)) => Some(p.clone()),
            Some(_) => {
                closed = false;
                None
            }
            None => None,
        };
        let h = fixed_point.as_ref().map(to_infinity).unwrap_or_else(|| to_infinity(&Point::Infinity));
        let h_inv = adjugate(&h);
        let translations: Vec<Gq> = if closed {
            holonomy
                .iter()
                .map(|g| {
                    let c = compose(&h, &compose(g, &h_inv));
                    c[0][1].checked_div(&c[0][0]).unwrap()
                })
                .collect()
        } else {
            Vec::new()
        };
        let mut parallel = BTreeSet::new();
        if closed {
            let lattice = TranslationLattice::new(&translations);
            let edges: Vec<(usize, [Point; 2])> = piece
                .iter()
                .flat_map(|(&t, pos)| {
                    let moved: Vec<Point> = pos.iter().map(|p| dehomog(&apply(&h, p))).collect();
                    (0..6).map(move |e| {
                        let [a, b] = EDGE_VERTICES[e];
                        (edge_of[t][e].class, [moved[a].clone(), moved[b].clone()])
                    })
                })
                .collect();
            for (i, (c1, e1)) in edges.iter().enumerate() {
                for (c2, e2) in &edges[i + 1..] {
                    if c1 != c2 && translates(&lattice, e1, e2) {
                        parallel.insert([*c1.min(c2), *c1.max(c2)]);
                    }
                }
            }
        }
        out.push(FlatCluster {
            tets: piece.keys().copied().collect(),
            closed,
            fixed_point,
            translations,
            parallel: parallel.into_iter().collect(),
        });
    }
    out
}

/// Shape at edge 01 recomputed from developed positions.
pub fn developed_shape(positions: &[Point; 4]) -> Option<Gq> {
    let h = positions.clone().map(|p| homog(&p));
    cross_ratio(&h[0], &h[1], &h[2], &h[3])
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;

    #[test]
    fn m136_flat_cluster_closes() {
        let tri = fixtures::m136();
        let report = develop_and_scan(&tri, &fixtures::m136_shapes(), 3).unwrap();
        assert!(report.coincident_edges.is_empty());
        assert!(report.parallel_pairs.is_empty(), "{:?}", report.parallel_pairs);
        assert_eq!(report.flat_clusters.len(), 1);
        assert_eq!(report.flat_clusters[0].tets, vec![3, 5]);
        assert!(report.conclusive_for_flat_clusters, "{:?}", report.flat_clusters);
    }

    #[test]
    fn developed_cross_ratios_reproduce_shapes() {
        let tri = fixtures::m136();
        let shapes = fixtures::m136_shapes();
        let report = develop_and_scan(&tri, &shapes, 2).unwrap();
        for node in &report.tets {
            assert_eq!(developed_shape(&node.positions).as_ref(), Some(&shapes[node.tet]));
        }
    }

    #[test]
    fn radius_zero_is_one_tetrahedron() {
        let tri = fixtures::m136();
        let report = develop_and_scan(&tri, &fixtures::m136_shapes(), 0).unwrap();
        assert_eq!(report.tets.len(), 1);
        assert!(report.coincident_edges.is_empty());
    }
}
