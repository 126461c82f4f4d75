//! Todd–Coxeter coset enumeration, HLT strategy with coincidence handling.

use serde::{Deserialize, Serialize};

use super::word::gen_of;
use super::{Presentation, Word};

const NONE: usize = usize::MAX;

fn col(letter: i32) -> usize {
    2 * gen_of(letter) + usize::from(letter < 0)
}

/// A complete coset table: `table[c][2g]` is `c·g`, `table[c][2g+1]` is `c·g⁻¹`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CosetTable {
    pub generator_count: usize,
    pub table: Vec<Vec<usize>>,
}

impl CosetTable {
    pub fn len(&self) -> usize {
        self.table.len()
    }

    pub fn is_empty(&self) -> bool {
        self.table.is_empty()
    }

    pub fn act(&self, coset: usize, w: &Word) -> usize {
        w.0.iter().fold(coset, |c, &l| self.table[c][col(l)])
    }

    /// Complete, inverse-consistent, every relator closes at every coset and
    /// every subgroup generator fixes coset 0.
    pub fn verify(&self, p: &Presentation, subgroup: &[Word]) -> bool {
        let n = self.table.len();
        if n == 0 || self.generator_count != p.generator_count {
            return false;
        }
        for row in &self.table {
            if row.len() != 2 * self.generator_count || row.iter().any(|&x| x >= n) {
                return false;
            }
        }
        for c in 0..n {
            for g in 0..self.generator_count {
                if self.table[self.table[c][2 * g]][2 * g + 1] != c {
                    return false;
                }
            }
            if p.relators.iter().any(|r| self.act(c, r) != c) {
                return false;
            }
        }
        subgroup.iter().all(|h| self.act(0, h) == 0)
    }

    /// Permutation of the cosets induced by a word.
    pub fn permutation(&self, w: &Word) -> Vec<usize> {
        (0..self.len()).map(|c| self.act(c, w)).collect()
    }
}

struct Enumerator {
    ncols: usize,
    table: Vec<Vec<usize>>,
    parent: Vec<usize>,
    queue: Vec<usize>,
    budget: usize,
    overflow: bool,
}

impl Enumerator {
    fn rep(&mut self, c: usize) -> usize {
        let mut r = c;
        while self.parent[r] != r {
            r = self.parent[r];
        }
        let mut x = c;
        while self.parent[x] != r {
            let next = self.parent[x];
            self.parent[x] = r;
            x = next;
        }
        r
    }

    fn live(&self, c: usize) -> bool {
        self.parent[c] == c
    }

    fn define(&mut self, c: usize, x: usize) -> bool {
        if self.table.len() >= self.budget {
            self.overflow = true;
            return false;
        }
        let n = self.table.len();
        self.table.push(vec![NONE; self.ncols]);
        self.parent.push(n);
        self.table[c][x] = n;
        self.table[n][x ^ 1] = c;
        true
    }

    fn merge(&mut self, a: usize, b: usize) {
        let (a, b) = (self.rep(a), self.rep(b));
        if a == b {
            return;
        }
        let (lo, hi) = if a < b { (a, b) } else { (b, a) };
        self.parent[hi] = lo;
        self.queue.push(hi);
    }

    fn coincidence(&mut self, a: usize, b: usize) {
        self.queue.clear();
        self.merge(a, b);
        let mut i = 0;
        while i < self.queue.len() {
            let e = self.queue[i];
            i += 1;
            for x in 0..self.ncols {
                let f = self.table[e][x];
                if f == NONE {
                    continue;
                }
                if self.table[f][x ^ 1] == e {
                    self.table[f][x ^ 1] = NONE;
                }
                let e1 = self.rep(e);
                let f1 = self.rep(f);
                if self.table[e1][x] != NONE {
                    let t = self.table[e1][x];
                    self.merge(f1, t);
                } else if self.table[f1][x ^ 1] != NONE {
                    let t = self.table[f1][x ^ 1];
                    self.merge(e1, t);
                } else {
                    self.table[e1][x] = f1;
                    self.table[f1][x ^ 1] = e1;
                }
            }
        }
    }

    /// Scans `word` at coset `c`, defining new cosets to complete the scan.
    fn scan_and_fill(&mut self, c: usize, word: &[usize]) {
        if word.is_empty() {
            return;
        }
        let mut f = c;
        let mut b = c;
        let mut i = 0usize;
        let mut j = word.len() as isize - 1;
        loop {
            while (i as isize) <= j && self.table[f][word[i]] != NONE {
                f = self.table[f][word[i]];
                i += 1;
            }
            if (i as isize) > j {
                if f != b {
                    self.coincidence(f, b);
                }
                return;
            }
            while j >= i as isize && self.table[b][word[j as usize] ^ 1] != NONE {
                b = self.table[b][word[j as usize] ^ 1];
                j -= 1;
            }
            if j < i as isize {
                self.coincidence(f, b);
                return;
            }
            if i as isize == j {
                let x = word[i];
                self.table[f][x] = b;
                self.table[b][x ^ 1] = f;
                return;
            }
            if !self.define(f, word[i]) {
                return;
            }
        }
    }
}

/// Enumerates the cosets of `⟨subgroup⟩` with at most `max_cosets` defined
/// cosets; `None` if the budget runs out first.
pub fn enumerate_cosets(p: &Presentation, subgroup: &[Word], max_cosets: usize) -> Option<CosetTable> {
    let ncols = 2 * p.generator_count;
    let mut en = Enumerator {
        ncols,
        table: vec![vec![NONE; ncols]],
        parent: vec![0],
        queue: Vec::new(),
        budget: max_cosets.max(1),
        overflow: false,
    };
    let rels: Vec<Vec<usize>> =
        p.relators.iter().map(|r| r.cyclically_reduced().0.iter().map(|&l| col(l)).collect()).collect();
    let subs: Vec<Vec<usize>> = subgroup.iter().map(|h| h.reduced().0.iter().map(|&l| col(l)).collect()).collect();
    for h in &subs {
        en.scan_and_fill(0, h);
        if en.overflow {
            return None;
        }
    }
    let mut c = 0;
    while c < en.table.len() {
        if en.live(c) {
            for r in &rels {
                if !en.live(c) {
                    break;
                }
                en.scan_and_fill(c, r);
                if en.overflow {
                    return None;
                }
            }
            for x in 0..ncols {
                if en.live(c) && en.table[c][x] == NONE && !en.define(c, x) {
                    return None;
                }
            }
        }
        c += 1;
    }
    // Compact to the live cosets.
    let live: Vec<usize> = (0..en.table.len()).filter(|&c| en.live(c)).collect();
    let mut index = vec![NONE; en.table.len()];
    for (k, &c) in live.iter().enumerate() {
        index[c] = k;
    }
    let reps: Vec<usize> = (0..en.table.len()).map(|c| en.rep(c)).collect();
    let table: Vec<Vec<usize>> = live
        .iter()
        .map(|&c| en.table[c].iter().map(|&d| if d == NONE { NONE } else { index[reps[d]] }).collect())
        .collect();
    if table.iter().any(|row| row.contains(&NONE)) {
        return None;
    }
    let out = CosetTable { generator_count: p.generator_count, table };
    debug_assert!(out.verify(p, subgroup));
    Some(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cyclic_and_dihedral_orders() {
        let c5 = Presentation::new(1, vec![Word(vec![1; 5])]);
        assert_eq!(enumerate_cosets(&c5, &[], 100).unwrap().len(), 5);
        // <a, b | a^3, b^2, (ab)^2> is S3.
        let s3 = Presentation::new(2, vec![Word(vec![1, 1, 1]), Word(vec![2, 2]), Word(vec![1, 2, 1, 2])]);
        let t = enumerate_cosets(&s3, &[], 100).unwrap();
        assert_eq!(t.len(), 6);
        assert!(t.verify(&s3, &[]));
        assert_eq!(enumerate_cosets(&s3, &[Word(vec![2])], 100).unwrap().len(), 3);
    }

    #[test]
    fn quaternion_group() {
        // <a, b | a^4, a^2 b^-2, a b a b^-1>
        let q8 = Presentation::new(
            2,
            vec![Word(vec![1, 1, 1, 1]), Word(vec![1, 1, -2, -2]), Word(vec![1, 2, 1, -2])],
        );
        let t = enumerate_cosets(&q8, &[], 1000).unwrap();
        assert_eq!(t.len(), 8);
    }

    #[test]
    fn infinite_group_hits_budget() {
        let z = Presentation::new(1, vec![]);
        assert!(enumerate_cosets(&z, &[], 50).is_none());
    }
}
