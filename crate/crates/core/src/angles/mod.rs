//! Angle structures in units of π: the linear system, exact LP solving, taut
//! enumeration and combinatorial area.

pub mod simplex;

use std::fmt;

use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::gaussian::{parse_rational, rat};
use crate::perm::{slot_of, EDGE_VERTICES};
use crate::skeleton::{build_skeleton, SkeletonSummary};
use crate::triangulation::{Mode, Triangulation};
use simplex::{maximize, LpResult};

/// Three angles per tetrahedron, slot `s` covering the opposite edge pair
/// {01,23}, {02,13} or {03,12}.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(into = "Vec<String>", try_from = "Vec<String>")]
pub struct AngleVector {
    pub entries: Vec<BigRational>,
}

impl AngleVector {
    pub fn new(entries: Vec<BigRational>) -> Self {
        AngleVector { entries }
    }

    /// A taut vector with a π angle at slot `slots[t]` of each tetrahedron.
    pub fn taut(slots: &[usize]) -> Self {
        let mut entries = vec![BigRational::zero(); 3 * slots.len()];
        for (t, &s) in slots.iter().enumerate() {
            entries[3 * t + s] = BigRational::one();
        }
        AngleVector { entries }
    }

    pub fn tet_count(&self) -> usize {
        self.entries.len() / 3
    }

    pub fn get(&self, tet: usize, slot: usize) -> &BigRational {
        &self.entries[3 * tet + slot]
    }

    pub fn is_semi(&self) -> bool {
        self.entries.iter().all(|x| !x.is_negative())
    }

    pub fn is_strict(&self) -> bool {
        self.entries.iter().all(|x| x.is_positive())
    }

    pub fn is_taut(&self) -> bool {
        self.entries.iter().all(|x| x.is_zero() || x.is_one())
    }

    /// For taut vectors, the π slot of each tetrahedron.
    pub fn taut_slots(&self) -> Option<Vec<usize>> {
        if !self.is_taut() {
            return None;
        }
        (0..self.tet_count()).map(|t| (0..3).find(|&s| self.get(t, s).is_one())).collect()
    }

    pub fn min_entry(&self) -> Option<&BigRational> {
        self.entries.iter().min()
    }
}

impl fmt::Display for AngleVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for t in 0..self.tet_count() {
            if t > 0 {
                write!(f, " | ")?;
            }
            write!(f, "{} {} {}", self.get(t, 0), self.get(t, 1), self.get(t, 2))?;
        }
        Ok(())
    }
}

impl From<AngleVector> for Vec<String> {
    fn from(v: AngleVector) -> Vec<String> {
        v.entries.iter().map(|q| q.to_string()).collect()
    }
}

impl TryFrom<Vec<String>> for AngleVector {
    type Error = String;
    fn try_from(v: Vec<String>) -> Result<Self, String> {
        if !v.len().is_multiple_of(3) {
            return Err(format!("angle vector length {} is not a multiple of 3", v.len()));
        }
        v.iter()
            .map(|s| parse_rational(s).ok_or_else(|| format!("bad rational {s:?}")))
            .collect::<Result<_, _>>()
            .map(AngleVector::new)
    }
}

/// `(tet, slot)` pairs met by one edge class, one per corner of its cycle.
pub type EdgeIncidence = Vec<(usize, usize)>;

/// The equalities `A x = b`: one row per tetrahedron, then one per interior edge class.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct AngleSystem {
    pub tet_count: usize,
    /// Edge classes with a row, in row order.
    pub edges: Vec<usize>,
    pub matrix: Vec<Vec<i64>>,
    pub rhs: Vec<i64>,
    pub incidence: Vec<EdgeIncidence>,
}

impl AngleSystem {
    pub fn rows(&self) -> usize {
        self.matrix.len()
    }

    pub fn columns(&self) -> usize {
        3 * self.tet_count
    }

    /// Exact residuals `A x - b`.
    pub fn residuals(&self, x: &AngleVector) -> Result<Vec<BigRational>> {
        if x.entries.len() != self.columns() {
            return Err(Error::LengthMismatch { expected: self.columns(), got: x.entries.len() });
        }
        Ok(self
            .matrix
            .iter()
            .zip(&self.rhs)
            .map(|(row, &b)| {
                let lhs: BigRational = row
                    .iter()
                    .zip(&x.entries)
                    .filter(|(a, _)| **a != 0)
                    .map(|(&a, xi)| xi * rat(a, 1))
                    .sum();
                lhs - rat(b, 1)
            })
            .collect())
    }

    pub fn satisfied_by(&self, x: &AngleVector) -> bool {
        self.residuals(x).map(|r| r.iter().all(Zero::is_zero)).unwrap_or(false)
    }
}

pub fn build_angle_system(tri: &Triangulation) -> Result<AngleSystem> {
    let skel = build_skeleton(tri)?;
    Ok(angle_system_from(&skel))
}

pub fn angle_system_from(skel: &SkeletonSummary) -> AngleSystem {
    let n = skel.tet_count;
    let mut matrix = Vec::new();
    let mut rhs = Vec::new();
    for t in 0..n {
        let mut row = vec![0; 3 * n];
        row[3 * t..3 * t + 3].fill(1);
        matrix.push(row);
        rhs.push(1);
    }
    let mut edges = Vec::new();
    let mut incidence = Vec::new();
    for e in skel.edges.iter().filter(|e| !e.boundary) {
        let mut row = vec![0; 3 * n];
        let mut inc = Vec::new();
        for c in &e.corners {
            let s = slot_of(c.vertices[0], c.vertices[1]);
            row[3 * c.tet + s] += 1;
            inc.push((c.tet, s));
        }
        matrix.push(row);
        rhs.push(2);
        edges.push(e.index);
        incidence.push(inc);
    }
    AngleSystem { tet_count: n, edges, matrix, rhs, incidence }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum AngleMode {
    Semi,
    Strict,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum LpStatus {
    Infeasible,
    Feasible,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LPOutcome {
    pub status: LpStatus,
    pub witness: Option<AngleVector>,
    /// Strict mode only: the largest achievable minimum angle.
    #[serde(with = "opt_rational")]
    pub optimum: Option<BigRational>,
}

impl LPOutcome {
    pub fn is_feasible(&self) -> bool {
        self.status == LpStatus::Feasible
    }
}

mod opt_rational {
    use num_rational::BigRational;
    use serde::{Deserialize, Deserializer, Serialize, Serializer};

    pub fn serialize<S: Serializer>(v: &Option<BigRational>, s: S) -> Result<S::Ok, S::Error> {
        v.as_ref().map(|q| q.to_string()).serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Option<BigRational>, D::Error> {
        let text = Option::<String>::deserialize(d)?;
        text.map(|t| {
            crate::gaussian::parse_rational(&t).ok_or_else(|| serde::de::Error::custom(format!("bad rational {t:?}")))
        })
        .transpose()
    }
}

pub fn solve_angle_lp(tri: &Triangulation, mode: AngleMode) -> Result<LPOutcome> {
    tri.require_valid(Mode::Closed)?;
    let system = build_angle_system(tri)?;
    solve_system(&system, mode)
}

pub fn solve_system(system: &AngleSystem, mode: AngleMode) -> Result<LPOutcome> {
    let cols = system.columns();
    let to_q = |row: &Vec<i64>| row.iter().map(|&a| rat(a, 1)).collect::<Vec<_>>();
    let b: Vec<BigRational> = system.rhs.iter().map(|&v| rat(v, 1)).collect();
    match mode {
        AngleMode::Semi => {
            let a: Vec<_> = system.matrix.iter().map(to_q).collect();
            match maximize(&a, &b, &vec![BigRational::zero(); cols]) {
                LpResult::Infeasible => Ok(LPOutcome { status: LpStatus::Infeasible, witness: None, optimum: None }),
                LpResult::Optimal { x, .. } => {
                    let w = AngleVector::new(x);
                    debug_assert!(system.satisfied_by(&w));
                    Ok(LPOutcome { status: LpStatus::Feasible, witness: Some(w), optimum: None })
                }
                LpResult::Unbounded => Err(Error::Internal("semi-angle program reported unbounded".into())),
            }
        }
        AngleMode::Strict => {
            // x = y + (t⁺ - t⁻)·1 with y ≥ 0; maximise t⁺ - t⁻.
            let a: Vec<_> = system
                .matrix
                .iter()
                .map(|row| {
                    let s: i64 = row.iter().sum();
                    let mut q = to_q(row);
                    q.push(rat(s, 1));
                    q.push(rat(-s, 1));
                    q
                })
                .collect();
            let mut c = vec![BigRational::zero(); cols];
            c.push(BigRational::one());
            c.push(-BigRational::one());
            match maximize(&a, &b, &c) {
                LpResult::Infeasible => Ok(LPOutcome { status: LpStatus::Infeasible, witness: None, optimum: None }),
                LpResult::Optimal { x, value } => {
                    let entries = x[..cols].iter().map(|y| y + &value).collect();
                    let w = AngleVector::new(entries);
                    if !system.satisfied_by(&w) {
                        return Err(Error::Internal("strict witness fails the angle equations".into()));
                    }
                    let status = if value.is_positive() { LpStatus::Feasible } else { LpStatus::Infeasible };
                    Ok(LPOutcome { status, witness: Some(w), optimum: Some(value) })
                }
                LpResult::Unbounded => Err(Error::Internal("strict program reported unbounded".into())),
            }
        }
    }
}

pub fn enumerate_taut(tri: &Triangulation, limit: usize) -> Result<Vec<AngleVector>> {
    tri.require_valid(Mode::Closed)?;
    let system = build_angle_system(tri)?;
    Ok(enumerate_taut_system(&system, limit))
}

pub fn enumerate_taut_system(system: &AngleSystem, limit: usize) -> Vec<AngleVector> {
    let n = system.tet_count;
    let m = system.incidence.len();
    // hits[t][s]: edge rows receiving π when tet t puts its π at slot s.
    let mut hits = vec![[Vec::new(), Vec::new(), Vec::new()]; n];
    let mut remaining = vec![0usize; m];
    let mut last_tet = vec![0usize; m];
    for (row, inc) in system.incidence.iter().enumerate() {
        for &(t, s) in inc {
            hits[t][s].push(row);
            last_tet[row] = last_tet[row].max(t);
        }
    }
    let mut touched = vec![Vec::new(); n];
    for (row, inc) in system.incidence.iter().enumerate() {
        for &(t, _) in inc {
            touched[t].push(row);
            remaining[row] += 1;
        }
    }
    let mut out = Vec::new();
    if limit == 0 {
        return out;
    }
    let mut state = TautSearch { hits, touched, sums: vec![0; m], remaining, choice: vec![0; n], out: &mut out, limit };
    state.search(0);
    out
}

struct TautSearch<'a> {
    hits: Vec<[Vec<usize>; 3]>,
    touched: Vec<Vec<usize>>,
    sums: Vec<usize>,
    remaining: Vec<usize>,
    choice: Vec<usize>,
    out: &'a mut Vec<AngleVector>,
    limit: usize,
}

impl TautSearch<'_> {
    fn search(&mut self, t: usize) -> bool {
        if t == self.choice.len() {
            self.out.push(AngleVector::taut(&self.choice));
            return self.out.len() >= self.limit;
        }
        for &row in &self.touched[t] {
            self.remaining[row] -= 1;
        }
        for s in 0..3 {
            for &row in &self.hits[t][s] {
                self.sums[row] += 1;
            }
            let ok = self.touched[t].iter().all(|&row| self.sums[row] <= 2 && self.sums[row] + self.remaining[row] >= 2);
            if ok {
                self.choice[t] = s;
                if self.search(t + 1) {
                    return true;
                }
            }
            for &row in &self.hits[t][s] {
                self.sums[row] -= 1;
            }
        }
        for &row in &self.touched[t] {
            self.remaining[row] += 1;
        }
        false
    }
}

/// `Σ angles - (n - 2)` in units of π: the combinatorial area of an n-gon.
pub fn formal_gauss_bonnet(corner_angles: &[BigRational], corner_count: usize) -> Result<BigRational> {
    if corner_angles.len() != corner_count {
        return Err(Error::LengthMismatch { expected: corner_count, got: corner_angles.len() });
    }
    if corner_count < 3 {
        return Err(Error::Precondition(format!("a polygon needs at least 3 corners, got {corner_count}")));
    }
    let sum: BigRational = corner_angles.iter().sum();
    Ok(sum - rat(corner_count as i64 - 2, 1))
}

/// Angle at the tetrahedron edge `{a, b}`.
pub fn angle_at(x: &AngleVector, tet: usize, edge: usize) -> &BigRational {
    let [a, b] = EDGE_VERTICES[edge];
    x.get(tet, slot_of(a, b))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;

    #[test]
    fn system_shapes() {
        let s = build_angle_system(&fixtures::figure_eight()).unwrap();
        assert_eq!((s.rows(), s.columns()), (4, 6));
        for row in &s.matrix[2..] {
            assert_eq!(row.iter().sum::<i64>(), 6);
        }
        let s = build_angle_system(&fixtures::m136()).unwrap();
        assert_eq!((s.rows(), s.columns()), (14, 21));
        let sums: Vec<i64> = s.matrix[7..].iter().map(|r| r.iter().sum()).collect();
        assert_eq!(sums, vec![4, 4, 10, 10, 6, 4, 4]);
        let s = build_angle_system(&Triangulation::new(1)).unwrap();
        assert_eq!(s.matrix, vec![vec![1, 1, 1]]);
        assert_eq!(s.rhs, vec![1]);
    }

    #[test]
    fn figure_eight_strict_optimum_is_a_third() {
        let out = solve_angle_lp(&fixtures::figure_eight(), AngleMode::Strict).unwrap();
        assert!(out.is_feasible());
        assert_eq!(out.optimum, Some(rat(1, 3)));
        assert!(out.witness.unwrap().entries.iter().all(|x| *x == rat(1, 3)));
    }

    #[test]
    fn m136_sits_on_the_boundary() {
        let tri = fixtures::m136();
        let strict = solve_angle_lp(&tri, AngleMode::Strict).unwrap();
        assert_eq!(strict.optimum, Some(BigRational::zero()));
        assert!(!strict.is_feasible());
        assert!(solve_angle_lp(&tri, AngleMode::Semi).unwrap().is_feasible());
        let taut = enumerate_taut(&tri, 100).unwrap();
        assert!(!taut.is_empty());
        let system = build_angle_system(&tri).unwrap();
        for x in &taut {
            assert!(system.satisfied_by(x));
        }
    }

    #[test]
    fn angle_vector_json_uses_fraction_strings() {
        let v = AngleVector::new(vec![rat(1, 3), rat(2, 3), BigRational::zero()]);
        let json = serde_json::to_string(&v).unwrap();
        assert_eq!(json, r#"["1/3","2/3","0"]"#);
        assert_eq!(serde_json::from_str::<AngleVector>(&json).unwrap(), v);
    }

    #[test]
    fn gauss_bonnet_examples() {
        let (a, b, c) = (rat(1, 5), rat(1, 3), rat(7, 15));
        assert!(formal_gauss_bonnet(&[a.clone(), b.clone(), c.clone()], 3).unwrap().is_zero());
        let quad = formal_gauss_bonnet(&[a.clone(), b.clone(), a.clone(), b.clone()], 4).unwrap();
        assert_eq!(quad, -(rat(2, 1) * &c));
        let oct = [a.clone(), a.clone(), a.clone(), a.clone(), b.clone(), b.clone(), c.clone(), c.clone()];
        assert_eq!(formal_gauss_bonnet(&oct, 8).unwrap(), rat(2, 1) * (&a - rat(2, 1)));
        assert!(formal_gauss_bonnet(&[a], 2).is_err());
    }
}
