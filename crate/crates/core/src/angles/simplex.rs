//! Dense-tableau simplex over exact rationals, Bland's rule, two phases.

use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

#[derive(Debug, Clone, PartialEq)]
pub enum LpResult {
    Infeasible,
    Unbounded,
    Optimal { x: Vec<BigRational>, value: BigRational },
}

struct Tableau {
    /// `rows[i]` holds the constraint coefficients followed by the right-hand side.
    rows: Vec<Vec<BigRational>>,
    basis: Vec<usize>,
    ncols: usize,
}

impl Tableau {
    fn pivot(&mut self, r: usize, c: usize) {
        let p = self.rows[r][c].clone();
        for x in self.rows[r].iter_mut() {
            *x /= &p;
        }
        let pivot_row = self.rows[r].clone();
        for (i, row) in self.rows.iter_mut().enumerate() {
            if i == r || row[c].is_zero() {
                continue;
            }
            let f = row[c].clone();
            for (x, y) in row.iter_mut().zip(pivot_row.iter()) {
                if !y.is_zero() {
                    *x -= &f * y;
                }
            }
        }
        self.basis[r] = c;
    }

    fn rhs(&self, i: usize) -> &BigRational {
        &self.rows[i][self.ncols]
    }

    /// Maximises `cost · x` over columns `0..active` from the current basic feasible point.
    fn optimise(&mut self, cost: &[BigRational], active: usize) -> bool {
        loop {
            // Reduced cost d_j = c_j - c_B · column_j; Bland: first improving column.
            let mut entering = None;
            for j in 0..active {
                if self.basis.contains(&j) {
                    continue;
                }
                let mut d = cost[j].clone();
                for (i, &b) in self.basis.iter().enumerate() {
                    if !self.rows[i][j].is_zero() && !cost[b].is_zero() {
                        d -= &cost[b] * &self.rows[i][j];
                    }
                }
                if d.is_positive() {
                    entering = Some(j);
                    break;
                }
            }
            let Some(c) = entering else { return true };
            let mut leave: Option<(usize, BigRational)> = None;
            for i in 0..self.rows.len() {
                let a = &self.rows[i][c];
                if !a.is_positive() {
                    continue;
                }
                let ratio = self.rhs(i) / a;
                let better = match &leave {
                    None => true,
                    Some((li, lr)) => ratio < *lr || (ratio == *lr && self.basis[i] < self.basis[*li]),
                };
                if better {
                    leave = Some((i, ratio));
                }
            }
            let Some((r, _)) = leave else { return false };
            self.pivot(r, c);
        }
    }
}

/// Maximises `c · x` subject to `a x = b`, `x ≥ 0`.
pub fn maximize(a: &[Vec<BigRational>], b: &[BigRational], c: &[BigRational]) -> LpResult {
    let m = a.len();
    let n = c.len();
    let ncols = n + m;
    let mut rows = Vec::with_capacity(m);
    for i in 0..m {
        let neg = b[i].is_negative();
        let mut row: Vec<BigRational> =
            a[i].iter().map(|x| if neg { -x.clone() } else { x.clone() }).collect();
        row.resize(n, BigRational::zero());
        for k in 0..m {
            row.push(if k == i { BigRational::one() } else { BigRational::zero() });
        }
        row.push(if neg { -b[i].clone() } else { b[i].clone() });
        rows.push(row);
    }
    let mut t = Tableau { rows, basis: (n..n + m).collect(), ncols };
    let mut phase1 = vec![BigRational::zero(); ncols];
    for x in phase1.iter_mut().skip(n) {
        *x = -BigRational::one();
    }
    t.optimise(&phase1, ncols);
    let infeasibility: BigRational = (0..m).filter(|&i| t.basis[i] >= n).map(|i| t.rhs(i).clone()).sum();
    if infeasibility.is_positive() {
        return LpResult::Infeasible;
    }
    // Drive artificials out of the basis; rows where that is impossible are redundant.
    let mut i = 0;
    while i < t.rows.len() {
        if t.basis[i] >= n {
            match (0..n).find(|&j| !t.rows[i][j].is_zero()) {
                Some(j) => {
                    t.pivot(i, j);
                    i += 1;
                }
                None => {
                    t.rows.remove(i);
                    t.basis.remove(i);
                }
            }
        } else {
            i += 1;
        }
    }
    let mut cost = c.to_vec();
    cost.resize(ncols, BigRational::zero());
    if !t.optimise(&cost, n) {
        return LpResult::Unbounded;
    }
    let mut x = vec![BigRational::zero(); n];
    for (i, &bv) in t.basis.iter().enumerate() {
        if bv < n {
            x[bv] = t.rhs(i).clone();
        }
    }
    let value = x.iter().zip(c).map(|(xi, ci)| xi * ci).sum();
    LpResult::Optimal { x, value }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gaussian::rat;

    fn r(v: &[i64]) -> Vec<BigRational> {
        v.iter().map(|&x| rat(x, 1)).collect()
    }

    #[test]
    fn small_programs() {
        // max x + y, x + y + s = 4, x - y + u = 2
        let a = vec![r(&[1, 1, 1, 0]), r(&[1, -1, 0, 1])];
        match maximize(&a, &r(&[4, 2]), &r(&[1, 1, 0, 0])) {
            LpResult::Optimal { value, .. } => assert_eq!(value, rat(4, 1)),
            other => panic!("{other:?}"),
        }
        assert_eq!(maximize(&[r(&[1, 1])], &r(&[-1]), &r(&[0, 0])), LpResult::Infeasible);
        assert_eq!(maximize(&[r(&[1, -1])], &r(&[0]), &r(&[1, 0])), LpResult::Unbounded);
        // Redundant rows are tolerated.
        let a = vec![r(&[1, 1]), r(&[2, 2])];
        match maximize(&a, &r(&[1, 2]), &r(&[1, 0])) {
            LpResult::Optimal { x, .. } => assert_eq!(x, r(&[1, 0])),
            other => panic!("{other:?}"),
        }
    }
}
