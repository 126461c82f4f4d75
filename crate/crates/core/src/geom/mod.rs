//! Shape parameters: gluing and completeness equations, exact verification,
//! Newton solving and developing into the upper half space.

mod develop;
mod newton;

pub use develop::{develop_and_scan, developed_shape, DevelopReport, DevelopedTet, FlatCluster, ParallelPair, Point};
pub use newton::{solve_shapes_newton, NewtonOutcome};

use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::angles::{angle_system_from, AngleVector};
use crate::error::{Error, Result};
use crate::gaussian::{rat, GaussianRational};
use crate::perm::{slot_of, Perm4};
use crate::pi1::{peripheral_system, spine_presentation_with, LinkStep};
use crate::skeleton::{build_skeleton, Classification, SkeletonSummary, SurfaceKind};
use crate::triangulation::Triangulation;

/// Shapes at edge 01 of each tetrahedron, exact or floating.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", content = "shapes", rename_all = "snake_case")]
pub enum ShapeAssignment {
    Exact(Vec<GaussianRational>),
    Float(Vec<Complex64>),
}

impl ShapeAssignment {
    pub fn len(&self) -> usize {
        match self {
            ShapeAssignment::Exact(v) => v.len(),
            ShapeAssignment::Float(v) => v.len(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn to_complex(&self) -> Vec<Complex64> {
        match self {
            ShapeAssignment::Exact(v) => v.iter().map(GaussianRational::to_complex).collect(),
            ShapeAssignment::Float(v) => v.clone(),
        }
    }
}

/// `[z, 1/(1-z), 1-1/z]`, or `None` when `z` is 0 or 1.
pub fn slot_values(z: &GaussianRational) -> Option<[GaussianRational; 3]> {
    let one = GaussianRational::one();
    let z1 = (&one - z).inv()?;
    let z2 = &one - &z.inv()?;
    Some([z.clone(), z1, z2])
}

pub fn slot_values_f64(z: Complex64) -> [Complex64; 3] {
    let one = Complex64::new(1.0, 0.0);
    [z, one / (one - z), one - one / z]
}

/// Exponent rows of the gluing equations: `Σ row[3t+s] · log z_{t,s}` equals
/// `2πi` for an edge row and `0` for a cusp row.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GluingSystem {
    pub tet_count: usize,
    pub edges: Vec<usize>,
    pub edge_rows: Vec<Vec<i64>>,
    pub cusps: Vec<CuspRows>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CuspRows {
    pub vertex: usize,
    pub rows: [Vec<i64>; 2],
}

impl GluingSystem {
    /// Every equation as `(row, target in units of πi)`, edges first.
    pub fn equations(&self) -> Vec<(&[i64], i64)> {
        let mut out: Vec<(&[i64], i64)> = self.edge_rows.iter().map(|r| (r.as_slice(), 2)).collect();
        for c in &self.cusps {
            out.extend(c.rows.iter().map(|r| (r.as_slice(), 0)));
        }
        out
    }

    /// Largest `|Σ row · log z - target|` over all equations.
    pub fn residual(&self, shapes: &[Complex64]) -> f64 {
        let logs: Vec<[Complex64; 3]> = shapes.iter().map(|&z| slot_values_f64(z).map(|w| w.ln())).collect();
        self.equations()
            .iter()
            .map(|(row, target)| {
                let sum: Complex64 = row
                    .iter()
                    .enumerate()
                    .filter(|(_, a)| **a != 0)
                    .map(|(k, &a)| logs[k / 3][k % 3] * a as f64)
                    .sum();
                (sum - Complex64::new(0.0, std::f64::consts::PI * *target as f64)).norm()
            })
            .fold(0.0, f64::max)
    }
}

fn require_cusped(tri: &Triangulation, skel: &SkeletonSummary) -> Result<()> {
    if skel.classification != Classification::IdealAllTorusOrKlein || !tri.is_closed() {
        return Err(Error::Precondition("gluing equations need an ideal triangulation with torus cusps".into()));
    }
    if let Some(l) = skel.links.iter().find(|l| l.surface_kind != SurfaceKind::Torus) {
        return Err(Error::NotTorusLink { vertex: l.vertex, kind: l.surface_kind.to_string() });
    }
    if let Some((tet, face)) = tri.first_orientation_defect() {
        return Err(Error::NotOriented { tet, face });
    }
    Ok(())
}

/// Removes immediate backtracks, including across the end of the loop; each
/// would otherwise contribute a spurious half turn.
fn cyclically_reduced(tri: &Triangulation, walk: &[LinkStep]) -> Vec<LinkStep> {
    let back = |s: &LinkStep| {
        let g = tri.gluing(s.tet, s.exit_face).expect("closed triangulation");
        LinkStep { tet: g.tet, vertex: g.perm.apply(s.vertex), exit_face: g.perm.apply(s.exit_face) }
    };
    let mut out: Vec<LinkStep> = Vec::with_capacity(walk.len());
    for &s in walk {
        if out.last().is_some_and(|p| back(p) == s) {
            out.pop();
        } else {
            out.push(s);
        }
    }
    let mut lo = 0;
    while out.len() - lo >= 2 && back(out.last().unwrap()) == out[lo] {
        out.pop();
        lo += 1;
    }
    out.drain(..lo);
    out
}

/// Cusp rows: each step of a peripheral walk cuts off one corner of a link
/// triangle, contributing the log shape of that corner's edge with the sign of
/// the turn.
fn cusp_rows(tri: &Triangulation, skel: &SkeletonSummary) -> Result<Vec<CuspRows>> {
    let spine = spine_presentation_with(tri, skel)?;
    let n = tri.tet_count();
    let mut out = Vec::new();
    for link in &skel.links {
        let sys = peripheral_system(tri, skel, &spine, link.vertex)?;
        let rows = sys.curves.map(|curve| {
            let mut row = vec![0i64; 3 * n];
            let walk = &cyclically_reduced(tri, &curve.walk);
            for (k, step) in walk.iter().enumerate() {
                let prev = walk[(k + walk.len() - 1) % walk.len()];
                let g = tri.gluing(prev.tet, prev.exit_face).expect("closed triangulation");
                let f_in = g.perm.apply(prev.exit_face);
                let (v, f_out) = (step.vertex, step.exit_face);
                if f_in == f_out {
                    continue;
                }
                let w = (0..4).find(|&x| x != v && x != f_in && x != f_out).unwrap();
                let sign = Perm4::new([v as u8, f_in as u8, f_out as u8, w as u8]).unwrap().sign() as i64;
                row[3 * step.tet + slot_of(v, w)] += sign;
            }
            row
        });
        out.push(CuspRows { vertex: link.vertex, rows });
    }
    Ok(out)
}

pub fn build_gluing_system(tri: &Triangulation) -> Result<GluingSystem> {
    let skel = build_skeleton(tri)?;
    require_cusped(tri, &skel)?;
    let angles = angle_system_from(&skel);
    let n = tri.tet_count();
    Ok(GluingSystem {
        tet_count: n,
        edges: angles.edges.clone(),
        edge_rows: angles.matrix[n..].to_vec(),
        cusps: cusp_rows(tri, &skel)?,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EdgeCheck {
    pub edge: usize,
    pub product: GaussianRational,
    pub product_is_one: bool,
    /// Sum of the corner arguments, in units of π.
    pub argument_sum: f64,
    pub argument_ok: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CuspCheck {
    pub vertex: usize,
    pub holonomy: [GaussianRational; 2],
    /// Signed argument sums in units of π.
    pub rotation: [f64; 2],
    pub complete: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ShapeReport {
    pub edges: Vec<EdgeCheck>,
    pub flat: Vec<usize>,
    pub negatively_oriented: Vec<usize>,
    /// Absent when completeness equations are not available for this input.
    pub cusps: Option<Vec<CuspCheck>>,
    pub passed: bool,
}

impl ShapeReport {
    pub fn is_complete(&self) -> bool {
        self.cusps.as_ref().is_some_and(|c| c.iter().all(|c| c.complete))
    }
}

pub const ARGUMENT_TOLERANCE: f64 = 1e-9;

fn exact_slots(shapes: &[GaussianRational]) -> Result<Vec<[GaussianRational; 3]>> {
    shapes.iter().enumerate().map(|(t, z)| slot_values(z).ok_or(Error::DegenerateShape(t))).collect()
}

fn signed_power(z: &GaussianRational, k: i64) -> GaussianRational {
    let base = if k < 0 { z.inv().expect("nondegenerate slot") } else { z.clone() };
    let mut out = GaussianRational::one();
    for _ in 0..k.unsigned_abs() {
        out = &out * &base;
    }
    out
}

fn row_product(row: &[i64], slots: &[[GaussianRational; 3]]) -> (GaussianRational, f64) {
    let mut product = GaussianRational::one();
    let mut args = 0.0;
    for (k, &a) in row.iter().enumerate().filter(|(_, a)| **a != 0) {
        let s = &slots[k / 3][k % 3];
        product = &product * &signed_power(s, a);
        args += a as f64 * s.arg() / std::f64::consts::PI;
    }
    (product, args)
}

/// Exact edge products, argument sums with arguments in `[0, π]`, the flat set
/// and, for oriented torus-cusped inputs, the cusp holonomies.
pub fn verify_shapes(tri: &Triangulation, shapes: &[GaussianRational]) -> Result<ShapeReport> {
    if shapes.len() != tri.tet_count() {
        return Err(Error::LengthMismatch { expected: tri.tet_count(), got: shapes.len() });
    }
    let slots = exact_slots(shapes)?;
    let skel = build_skeleton(tri)?;
    let system = angle_system_from(&skel);
    let n = tri.tet_count();
    let edges: Vec<EdgeCheck> = system
        .edges
        .iter()
        .zip(&system.matrix[n..])
        .map(|(&edge, row)| {
            let (product, argument_sum) = row_product(row, &slots);
            EdgeCheck {
                edge,
                product_is_one: product.is_one(),
                product,
                argument_ok: (argument_sum - 2.0).abs() < ARGUMENT_TOLERANCE,
                argument_sum,
            }
        })
        .collect();
    let flat = (0..n).filter(|&t| shapes[t].im.is_zero()).collect();
    let negatively_oriented = (0..n).filter(|&t| shapes[t].im.is_negative()).collect();
    let cusps = if require_cusped(tri, &skel).is_ok() {
        let rows = cusp_rows(tri, &skel)?;
        Some(
            rows.iter()
                .map(|c| {
                    let [(h0, r0), (h1, r1)] = c.rows.clone().map(|r| row_product(&r, &slots));
                    let complete = h0.is_one() && h1.is_one() && r0.abs() < ARGUMENT_TOLERANCE && r1.abs() < ARGUMENT_TOLERANCE;
                    CuspCheck { vertex: c.vertex, holonomy: [h0, h1], rotation: [r0, r1], complete }
                })
                .collect(),
        )
    } else {
        None
    };
    let passed = edges.iter().all(|e| e.product_is_one && e.argument_ok);
    Ok(ShapeReport { edges, flat, negatively_oriented, cusps, passed })
}

/// Dihedral angles read off from shapes, in units of π.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ShapeAngles {
    pub angles: Vec<f64>,
    /// Present when every argument is a known rational multiple of π.
    pub exact: Option<AngleVector>,
    /// All shapes have positive imaginary part, so the angles form a strict structure.
    pub strict: bool,
}

pub fn shapes_to_angles(tri: &Triangulation, shapes: &ShapeAssignment) -> Result<ShapeAngles> {
    if shapes.len() != tri.tet_count() {
        return Err(Error::LengthMismatch { expected: tri.tet_count(), got: shapes.len() });
    }
    let skel = build_skeleton(tri)?;
    let system = angle_system_from(&skel);
    let (angles, exact, strict) = match shapes {
        ShapeAssignment::Exact(zs) => {
            let report = verify_shapes(tri, zs)?;
            if !report.passed {
                return Err(Error::VerificationFailed("edge equations do not hold".into()));
            }
            let slots = exact_slots(zs)?;
            let angles = slots.iter().flat_map(|s| s.iter().map(|w| w.arg() / std::f64::consts::PI)).collect();
            let exact: Option<Vec<BigRational>> = slots.iter().flat_map(|s| s.iter().map(|w| w.arg_in_pi())).collect();
            let exact = exact.map(AngleVector::new);
            if let Some(x) = &exact {
                if !system.satisfied_by(x) {
                    return Err(Error::VerificationFailed("exact arguments miss the angle equations".into()));
                }
            }
            (angles, exact, zs.iter().all(|z| z.im.is_positive()))
        }
        ShapeAssignment::Float(zs) => {
            if zs.iter().any(|z| z.norm() < 1e-12 || (z - 1.0).norm() < 1e-12) {
                return Err(Error::VerificationFailed("shape at 0 or 1".into()));
            }
            let angles: Vec<f64> =
                zs.iter().flat_map(|&z| slot_values_f64(z).map(|w| w.arg() / std::f64::consts::PI)).collect();
            (angles, None, zs.iter().all(|z| z.im > 0.0))
        }
    };
    for (row, &b) in system.matrix.iter().zip(&system.rhs) {
        let lhs: f64 = row.iter().zip(&angles).map(|(&a, x)| a as f64 * x).sum();
        if (lhs - b as f64).abs() > ARGUMENT_TOLERANCE {
            return Err(Error::VerificationFailed(format!("angle sum {lhs} where {b} is required")));
        }
    }
    Ok(ShapeAngles { angles, exact, strict })
}

/// The exact shapes rounded from floating ones, when each coordinate is within
/// `tol` of a fraction with denominator at most `max_den`.
pub fn round_shapes(shapes: &[Complex64], max_den: i64, tol: f64) -> Option<Vec<GaussianRational>> {
    let round = |x: f64| {
        (1..=max_den).find_map(|d| {
            let n = (x * d as f64).round();
            ((x - n / d as f64).abs() < tol).then(|| rat(n as i64, d))
        })
    };
    shapes.iter().map(|z| Some(GaussianRational::new(round(z.re)?, round(z.im)?))).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;

    #[test]
    fn slot_identity() {
        let z: GaussianRational = "3/5+1/5i".parse().unwrap();
        let [a, b, c] = slot_values(&z).unwrap();
        assert_eq!(&(&a * &b) * &c, GaussianRational::real(rat(-1, 1)));
        assert!(slot_values(&GaussianRational::one()).is_none());
    }

    #[test]
    fn m136_table_shapes_verify() {
        let report = verify_shapes(&fixtures::m136(), &fixtures::m136_shapes()).unwrap();
        assert!(report.edges.iter().all(|e| e.product_is_one && e.argument_ok), "{report:?}");
        assert_eq!(report.flat, vec![3, 5]);
        assert!(report.is_complete(), "{:?}", report.cusps);
    }

    #[test]
    fn m136_edge_zero_row() {
        let g = build_gluing_system(&fixtures::m136()).unwrap();
        let picked: Vec<(usize, usize)> =
            g.edge_rows[0].iter().enumerate().filter(|(_, a)| **a != 0).map(|(k, _)| (k / 3, k % 3)).collect();
        assert_eq!(picked, vec![(0, 0), (1, 1), (2, 2), (4, 2)]);
        for row in &g.edge_rows {
            assert_eq!(row.len(), 21);
        }
    }

    #[test]
    fn all_i_fails_off_degree_four() {
        let tri = fixtures::figure_eight();
        let report = verify_shapes(&tri, &[GaussianRational::i(), GaussianRational::i()]).unwrap();
        assert!(!report.passed);
        assert!(report.edges.iter().all(|e| !e.product_is_one));
    }

    #[test]
    fn single_shape_angles() {
        let tri = Triangulation::new(1);
        let out = shapes_to_angles(&tri, &ShapeAssignment::Exact(vec![GaussianRational::i()])).unwrap();
        assert_eq!(out.exact.unwrap().entries, vec![rat(1, 2), rat(1, 4), rat(1, 4)]);
    }

    #[test]
    fn m136_angles_vanish_only_at_flat_tets() {
        let tri = fixtures::m136();
        let out = shapes_to_angles(&tri, &ShapeAssignment::Exact(fixtures::m136_shapes())).unwrap();
        assert!(!out.strict);
        for t in 0..7 {
            let zeros = (0..3).filter(|&s| out.angles[3 * t + s].abs() < 1e-12).count();
            assert_eq!(zeros, if t == 3 || t == 5 { 2 } else { 0 });
        }
    }
}
