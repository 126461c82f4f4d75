//! Smith normal form over the integers, abelianization and lattice membership.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use super::{Presentation, Word};

pub type Matrix = Vec<Vec<BigInt>>;

/// `p * a * q = diag(diagonal)` with `p`, `q` unimodular.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Snf {
    pub diagonal: Vec<BigInt>,
    pub rank: usize,
    pub p: Matrix,
    pub q: Matrix,
    pub rows: usize,
    pub cols: usize,
}

fn identity(n: usize) -> Matrix {
    (0..n).map(|i| (0..n).map(|j| if i == j { BigInt::one() } else { BigInt::zero() }).collect()).collect()
}

pub fn to_big(rows: &[Vec<i64>]) -> Matrix {
    rows.iter().map(|r| r.iter().map(|&x| BigInt::from(x)).collect()).collect()
}

pub fn smith_normal_form(a: &Matrix, cols: usize) -> Snf {
    let m = a.len();
    let n = cols;
    let mut a = a.clone();
    let mut p = identity(m);
    let mut q = identity(n);

    fn swap_cols(x: &mut Matrix, i: usize, j: usize) {
        for row in x.iter_mut() {
            row.swap(i, j);
        }
    }
    // row_i -= f * row_k
    fn row_sub(x: &mut Matrix, i: usize, k: usize, f: &BigInt) {
        let rk = x[k].clone();
        for (xi, xk) in x[i].iter_mut().zip(rk.iter()) {
            *xi -= f * xk;
        }
    }
    fn col_sub(x: &mut Matrix, j: usize, k: usize, f: &BigInt) {
        for row in x.iter_mut() {
            let v = f * &row[k];
            row[j] -= v;
        }
    }

    let mut rank = 0;
    for k in 0..m.min(n) {
        // smallest nonzero entry in the remaining block
        let mut best: Option<(usize, usize)> = None;
        for i in k..m {
            for j in k..n {
                if !a[i][j].is_zero() && best.is_none_or(|(bi, bj)| a[i][j].abs() < a[bi][bj].abs()) {
                    best = Some((i, j));
                }
            }
        }
        let Some((bi, bj)) = best else { break };
        a.swap(k, bi);
        p.swap(k, bi);
        swap_cols(&mut a, k, bj);
        swap_cols(&mut q, k, bj);
        loop {
            let mut dirty = false;
            for i in k + 1..m {
                if a[i][k].is_zero() {
                    continue;
                }
                let f = a[i][k].div_floor(&a[k][k]);
                row_sub(&mut a, i, k, &f);
                row_sub(&mut p, i, k, &f);
                if !a[i][k].is_zero() {
                    a.swap(k, i);
                    p.swap(k, i);
                    dirty = true;
                }
            }
            for j in k + 1..n {
                if a[k][j].is_zero() {
                    continue;
                }
                let f = a[k][j].div_floor(&a[k][k]);
                col_sub(&mut a, j, k, &f);
                col_sub(&mut q, j, k, &f);
                if !a[k][j].is_zero() {
                    swap_cols(&mut a, k, j);
                    swap_cols(&mut q, k, j);
                    dirty = true;
                }
            }
            if dirty {
                continue;
            }
            // Divisibility: fold an offending row into row k and go again.
            let mut offender = None;
            'outer: for i in k + 1..m {
                for j in k + 1..n {
                    if !(&a[i][j] % &a[k][k]).is_zero() {
                        offender = Some(i);
                        break 'outer;
                    }
                }
            }
            match offender {
                Some(i) => {
                    let neg_one = -BigInt::one();
                    row_sub(&mut a, k, i, &neg_one);
                    row_sub(&mut p, k, i, &neg_one);
                }
                None => break,
            }
        }
        if a[k][k].is_negative() {
            for x in a[k].iter_mut() {
                *x = -x.clone();
            }
            for x in p[k].iter_mut() {
                *x = -x.clone();
            }
        }
        rank += 1;
    }
    let diagonal = (0..m.min(n)).map(|i| a[i][i].clone()).collect();
    Snf { diagonal, rank, p, q, rows: m, cols: n }
}

fn row_times(v: &[BigInt], m: &Matrix, out_len: usize) -> Vec<BigInt> {
    let mut out = vec![BigInt::zero(); out_len];
    for (vi, row) in v.iter().zip(m.iter()) {
        if vi.is_zero() {
            continue;
        }
        for (o, x) in out.iter_mut().zip(row.iter()) {
            *o += vi * x;
        }
    }
    out
}

/// Finds integer coefficients `c` with `c * rows = target`, if any exist.
pub fn lattice_solve(rows: &Matrix, cols: usize, target: &[BigInt]) -> Option<Vec<BigInt>> {
    if rows.is_empty() {
        return target.iter().all(Zero::is_zero).then(Vec::new);
    }
    let snf = smith_normal_form(rows, cols);
    let y = row_times(target, &snf.q, cols);
    let mut x = vec![BigInt::zero(); rows.len()];
    for (i, yi) in y.iter().enumerate() {
        if i < snf.rank {
            let (qt, r) = yi.div_rem(&snf.diagonal[i]);
            if !r.is_zero() {
                return None;
            }
            x[i] = qt;
        } else if !yi.is_zero() {
            return None;
        }
    }
    let c = row_times(&x, &snf.p, rows.len());
    debug_assert_eq!(row_times(&c, rows, cols), target.to_vec());
    Some(c)
}

/// Checks `c * rows = target` directly.
pub fn lattice_check(rows: &Matrix, cols: usize, coefficients: &[BigInt], target: &[BigInt]) -> bool {
    coefficients.len() == rows.len() && row_times(coefficients, rows, cols) == target
}

#[derive(Debug, Clone)]
pub struct Abelianization {
    pub generator_count: usize,
    pub relation_matrix: Matrix,
    snf: Snf,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct HomologyInvariants {
    /// Torsion coefficients greater than 1, then one 0 per free summand.
    pub invariants: Vec<BigInt>,
}

impl HomologyInvariants {
    pub fn betti(&self) -> usize {
        self.invariants.iter().filter(|d| d.is_zero()).count()
    }

    pub fn torsion(&self) -> Vec<BigInt> {
        self.invariants.iter().filter(|d| !d.is_zero()).cloned().collect()
    }
}

impl std::fmt::Display for HomologyInvariants {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        if self.invariants.is_empty() {
            return write!(f, "0");
        }
        let parts: Vec<String> =
            self.invariants.iter().map(|d| if d.is_zero() { "Z".into() } else { format!("Z{d}") }).collect();
        write!(f, "{}", parts.join(" + "))
    }
}

impl Abelianization {
    pub fn from_matrix(relation_matrix: Matrix, generator_count: usize) -> Self {
        let snf = smith_normal_form(&relation_matrix, generator_count);
        Abelianization { generator_count, relation_matrix, snf }
    }

    pub fn new(p: &Presentation) -> Self {
        let rows = p.relators.iter().map(|r| r.exponents(p.generator_count)).collect::<Vec<_>>();
        Self::from_matrix(to_big(&rows), p.generator_count)
    }

    fn kept(&self) -> impl Iterator<Item = usize> + '_ {
        (0..self.generator_count).filter(|&i| i >= self.snf.rank || !self.snf.diagonal[i].is_one())
    }

    pub fn invariants(&self) -> HomologyInvariants {
        let mut torsion = Vec::new();
        let mut free = 0;
        for i in self.kept() {
            if i < self.snf.rank {
                torsion.push(self.snf.diagonal[i].clone());
            } else {
                free += 1;
            }
        }
        torsion.extend(std::iter::repeat_n(BigInt::zero(), free));
        HomologyInvariants { invariants: torsion }
    }

    /// Coordinates of an exponent vector in the invariant decomposition.
    pub fn image_of_exponents(&self, u: &[BigInt]) -> Vec<BigInt> {
        let y = row_times(u, &self.snf.q, self.generator_count);
        self.kept()
            .map(|i| if i < self.snf.rank { y[i].mod_floor(&self.snf.diagonal[i]) } else { y[i].clone() })
            .collect()
    }

    pub fn image(&self, w: &Word) -> Vec<BigInt> {
        let u: Vec<BigInt> = w.exponents(self.generator_count).into_iter().map(BigInt::from).collect();
        self.image_of_exponents(&u)
    }

    pub fn is_trivial(&self, w: &Word) -> bool {
        self.image(w).iter().all(Zero::is_zero)
    }

    /// Coefficients over relator rows and then `extra` rows writing `w`'s exponent vector, if possible.
    pub fn solve_with(&self, extra: &[Word], w: &Word) -> Option<Vec<BigInt>> {
        let mut rows = self.relation_matrix.clone();
        rows.extend(extra.iter().map(|h| h.exponents(self.generator_count).into_iter().map(BigInt::from).collect()));
        let target: Vec<BigInt> = w.exponents(self.generator_count).into_iter().map(BigInt::from).collect();
        lattice_solve(&rows, self.generator_count, &target)
    }
}

pub fn homology(p: &Presentation) -> HomologyInvariants {
    Abelianization::new(p).invariants()
}

pub fn word_image(p: &Presentation, w: &Word) -> Vec<BigInt> {
    Abelianization::new(p).image(w)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn inv(rows: &[Vec<i64>], n: usize) -> Vec<i64> {
        let a = Abelianization::from_matrix(to_big(rows), n);
        a.invariants().invariants.iter().map(|d| i64::try_from(d).unwrap()).collect()
    }

    #[test]
    fn snf_examples() {
        assert_eq!(inv(&[vec![2, 0], vec![0, 0]], 2), vec![2, 0]);
        assert_eq!(inv(&[vec![2, 4, 4], vec![-6, 6, 12], vec![10, -4, -16]], 3), vec![2, 6, 12]);
        assert_eq!(inv(&[vec![1, 1]], 2), vec![0]);
        assert_eq!(inv(&[], 2), vec![0, 0]);
        assert_eq!(inv(&[vec![2, 0], vec![0, 3]], 2), vec![6]);
    }

    #[test]
    fn transforms_are_consistent() {
        let a = to_big(&[vec![4, 6, 2], vec![2, 8, -2], vec![0, 2, 4], vec![6, 0, 0]]);
        let s = smith_normal_form(&a, 3);
        let pa: Matrix = s.p.iter().map(|r| row_times(r, &a, 3)).collect();
        let paq: Matrix = pa.iter().map(|r| row_times(r, &s.q, 3)).collect();
        for (i, row) in paq.iter().enumerate() {
            for (j, x) in row.iter().enumerate() {
                let want = if i == j && i < 3 { s.diagonal[i].clone() } else { BigInt::zero() };
                assert_eq!(*x, want);
            }
        }
        for w in s.diagonal.windows(2) {
            assert!(w[1].is_zero() || (&w[1] % &w[0]).is_zero());
        }
    }

    #[test]
    fn lattice_membership() {
        let rows = to_big(&[vec![2, 0], vec![0, 3]]);
        let t = [BigInt::from(4), BigInt::from(-3)];
        let c = lattice_solve(&rows, 2, &t).unwrap();
        assert!(lattice_check(&rows, 2, &c, &t));
        assert!(lattice_solve(&rows, 2, &[BigInt::from(1), BigInt::zero()]).is_none());
    }
}
