use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::{build_gluing_system, slot_values_f64, GluingSystem};
use crate::error::{Error, Result};
use crate::triangulation::Triangulation;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NewtonOutcome {
    pub shapes: Vec<Complex64>,
    /// Largest residual over every edge and cusp equation.
    pub residual: f64,
    pub iterations: usize,
    /// Equations used in the solve, indexed as in `GluingSystem::equations`.
    pub selected: Vec<usize>,
}

/// d(log slot_s)/d(log z) for the three slots.
fn slot_derivatives(z: Complex64) -> [Complex64; 3] {
    let one = Complex64::new(1.0, 0.0);
    [one, z / (one - z), one / (z - one)]
}

fn jacobian_row(row: &[i64], zs: &[Complex64]) -> Vec<Complex64> {
    let mut out = vec![Complex64::new(0.0, 0.0); zs.len()];
    for (k, &a) in row.iter().enumerate().filter(|(_, a)| **a != 0) {
        out[k / 3] += slot_derivatives(zs[k / 3])[k % 3] * a as f64;
    }
    out
}

fn value(row: &[i64], target: i64, zs: &[Complex64]) -> Complex64 {
    let mut sum = Complex64::new(0.0, -std::f64::consts::PI * target as f64);
    for (k, &a) in row.iter().enumerate().filter(|(_, a)| **a != 0) {
        sum += slot_values_f64(zs[k / 3])[k % 3].ln() * a as f64;
    }
    sum
}

/// Lowest-index equations whose Jacobian rows at `zs` are independent.
fn select_rows(system: &GluingSystem, zs: &[Complex64]) -> Vec<usize> {
    let n = zs.len();
    let mut basis: Vec<Vec<Complex64>> = Vec::new();
    let mut selected = Vec::new();
    for (i, (row, _)) in system.equations().iter().enumerate() {
        if basis.len() == n {
            break;
        }
        let mut v = jacobian_row(row, zs);
        let scale = v.iter().map(|x| x.norm()).fold(0.0, f64::max);
        for b in &basis {
            let dot: Complex64 = b.iter().zip(&v).map(|(x, y)| x.conj() * y).sum();
            for (x, y) in v.iter_mut().zip(b) {
                *x -= dot * y;
            }
        }
        let norm = v.iter().map(|x| x.norm_sqr()).sum::<f64>().sqrt();
        if norm > 1e-8 * scale.max(1.0) {
            basis.push(v.into_iter().map(|x| x / norm).collect());
            selected.push(i);
        }
    }
    selected
}

/// Newton's method on log shapes. Succeeds once every equation, including the
/// ones left out of the solve, has residual below `tol`.
pub fn solve_shapes_newton(tri: &Triangulation, initial: &[Complex64], tol: f64, max_iter: usize) -> Result<NewtonOutcome> {
    let system = build_gluing_system(tri)?;
    let n = tri.tet_count();
    if initial.len() != n {
        return Err(Error::LengthMismatch { expected: n, got: initial.len() });
    }
    let equations = system.equations();
    let mut zs = initial.to_vec();
    let selected = select_rows(&system, &zs);
    let degenerate = |zs: &[Complex64]| zs.iter().any(|z| !z.is_finite() || z.norm() < 1e-14 || (z - 1.0).norm() < 1e-14);
    let merit = |zs: &[Complex64]| {
        selected.iter().map(|&i| value(equations[i].0, equations[i].1, zs).norm_sqr()).sum::<f64>()
    };
    for iter in 0..=max_iter {
        let residual = system.residual(&zs);
        if residual < tol {
            return Ok(NewtonOutcome { shapes: zs, residual, iterations: iter, selected });
        }
        if iter == max_iter {
            break;
        }
        let m = selected.len();
        let jac = DMatrix::from_fn(m, n, |r, c| jacobian_row(equations[selected[r]].0, &zs)[c]);
        let rhs = DVector::from_fn(m, |r, _| -value(equations[selected[r]].0, equations[selected[r]].1, &zs));
        let step = if m == n {
            jac.lu().solve(&rhs)
        } else {
            jac.svd(true, true).solve(&rhs, 1e-12).ok()
        }
        .ok_or(Error::SingularJacobian(iter))?;
        if step.iter().any(|x| !x.is_finite()) {
            return Err(Error::SingularJacobian(iter));
        }
        // Damped update on log z.
        let current = merit(&zs);
        let mut lambda = 1.0;
        let mut next = zs.clone();
        for _ in 0..30 {
            next = zs.iter().zip(step.iter()).map(|(z, d)| (z.ln() + d * lambda).exp()).collect();
            if !degenerate(&next) && merit(&next) < current {
                break;
            }
            lambda /= 2.0;
        }
        zs = next;
    }
    Err(Error::Divergence(max_iter))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;

    #[test]
    fn figure_eight_converges_to_regular_shapes() {
        let tri = fixtures::figure_eight();
        let i = Complex64::new(0.0, 1.0);
        let out = solve_shapes_newton(&tri, &[i, i], 1e-12, 50).unwrap();
        let target = Complex64::new(0.5, 3f64.sqrt() / 2.0);
        for z in &out.shapes {
            assert!((z - target).norm() < 1e-9, "{z}");
        }
        assert!(out.residual < 1e-12);
    }

    #[test]
    fn zero_tolerance_never_succeeds() {
        let tri = fixtures::figure_eight();
        let i = Complex64::new(0.0, 1.0);
        assert!(matches!(solve_shapes_newton(&tri, &[i, i], 0.0, 20), Err(Error::Divergence(20))));
    }
}
