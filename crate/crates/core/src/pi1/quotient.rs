//! Homomorphisms from a finitely presented group onto small symmetric groups.

use std::collections::{BTreeSet, VecDeque};

use serde::{Deserialize, Serialize};

use super::word::gen_of;
use super::{Presentation, Word};

/// A permutation of `0..n`, stored by images; composed left to right
/// (`(a * b)(i) = b(a(i))`) to match right actions on cosets.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Permutation(pub Vec<u8>);

impl Permutation {
    pub fn identity(n: usize) -> Self {
        Permutation((0..n as u8).collect())
    }

    pub fn degree(&self) -> usize {
        self.0.len()
    }

    pub fn is_identity(&self) -> bool {
        self.0.iter().enumerate().all(|(i, &x)| i == x as usize)
    }

    /// `self` then `other`.
    pub fn then(&self, other: &Permutation) -> Permutation {
        Permutation(self.0.iter().map(|&x| other.0[x as usize]).collect())
    }

    pub fn inverse(&self) -> Permutation {
        let mut inv = vec![0u8; self.0.len()];
        for (i, &x) in self.0.iter().enumerate() {
            inv[x as usize] = i as u8;
        }
        Permutation(inv)
    }

    pub fn is_valid(&self) -> bool {
        let mut seen = vec![false; self.0.len()];
        self.0.iter().all(|&x| (x as usize) < seen.len() && !std::mem::replace(&mut seen[x as usize], true))
    }
}

/// Images of each generator; a homomorphism when every relator maps to the identity.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct QuotientHom {
    pub degree: usize,
    pub images: Vec<Permutation>,
}

impl QuotientHom {
    pub fn eval(&self, w: &Word) -> Permutation {
        eval_images(&self.images, self.degree, w)
    }

    pub fn verify(&self, p: &Presentation) -> bool {
        self.images.len() == p.generator_count
            && self.images.iter().all(|g| g.degree() == self.degree && g.is_valid())
            && p.relators.iter().all(|r| self.eval(r).is_identity())
    }

    /// Elements of the subgroup generated by the images of `words`.
    pub fn subgroup(&self, words: &[Word]) -> BTreeSet<Permutation> {
        let gens: Vec<Permutation> = words.iter().map(|w| self.eval(w)).collect();
        closure(self.degree, &gens)
    }
}

fn eval_images(images: &[Permutation], degree: usize, w: &Word) -> Permutation {
    let mut acc: Vec<u8> = (0..degree as u8).collect();
    for &l in &w.0 {
        let img = &images[gen_of(l)].0;
        if l > 0 {
            for x in acc.iter_mut() {
                *x = img[*x as usize];
            }
        } else {
            for x in acc.iter_mut() {
                *x = img.iter().position(|&y| y == *x).unwrap() as u8;
            }
        }
    }
    Permutation(acc)
}

pub fn closure(degree: usize, gens: &[Permutation]) -> BTreeSet<Permutation> {
    let id = Permutation::identity(degree);
    let mut seen = BTreeSet::from([id.clone()]);
    let mut queue = VecDeque::from([id]);
    while let Some(x) = queue.pop_front() {
        for g in gens {
            for y in [x.then(g), x.then(&g.inverse())] {
                if seen.insert(y.clone()) {
                    queue.push_back(y);
                }
            }
        }
    }
    seen
}

fn all_permutations(n: usize) -> Vec<Permutation> {
    let mut out = Vec::new();
    let mut cur: Vec<u8> = Vec::with_capacity(n);
    let mut used = vec![false; n];
    fn rec(n: usize, cur: &mut Vec<u8>, used: &mut [bool], out: &mut Vec<Permutation>) {
        if cur.len() == n {
            out.push(Permutation(cur.clone()));
            return;
        }
        for x in 0..n {
            if !used[x] {
                used[x] = true;
                cur.push(x as u8);
                rec(n, cur, used, out);
                cur.pop();
                used[x] = false;
            }
        }
    }
    rec(n, &mut cur, &mut used, &mut out);
    out
}

/// One permutation per cycle type: consecutive cycles on 0..n.
fn cycle_type_representatives(n: usize) -> Vec<Permutation> {
    fn partitions(n: usize, max: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if n == 0 {
            out.push(cur.clone());
            return;
        }
        for k in (1..=n.min(max)).rev() {
            cur.push(k);
            partitions(n - k, k, cur, out);
            cur.pop();
        }
    }
    let mut parts = Vec::new();
    partitions(n, n, &mut Vec::new(), &mut parts);
    let mut reps: Vec<Permutation> = parts
        .into_iter()
        .map(|p| {
            let mut img = vec![0u8; n];
            let mut start = 0;
            for len in p {
                for k in 0..len {
                    img[start + k] = (start + (k + 1) % len) as u8;
                }
                start += len;
            }
            Permutation(img)
        })
        .collect();
    reps.sort();
    reps
}

/// Enumerates homomorphisms to `S_n` for `n = 2..=max_degree`, with the first
/// generator's image fixed up to conjugacy; skips the trivial homomorphism.
/// Stops after `max_nodes` partial assignments. Returns the homomorphisms found
/// and whether the enumeration finished.
pub fn find_quotients(p: &Presentation, max_degree: usize, max_nodes: usize) -> (Vec<QuotientHom>, bool) {
    let g = p.generator_count;
    let mut found = Vec::new();
    if g == 0 {
        return (found, true);
    }
    // Relators become checkable once their highest generator is assigned.
    let mut checks: Vec<Vec<&Word>> = vec![Vec::new(); g];
    for r in &p.relators {
        if let Some(m) = r.max_generator() {
            checks[m].push(r);
        }
    }
    let mut nodes = 0usize;
    for n in 2..=max_degree {
        let perms = all_permutations(n);
        let firsts = cycle_type_representatives(n);
        let mut images: Vec<Permutation> = Vec::with_capacity(g);
        #[allow(clippy::too_many_arguments)]
        fn rec(
            k: usize,
            g: usize,
            n: usize,
            perms: &[Permutation],
            firsts: &[Permutation],
            checks: &[Vec<&Word>],
            images: &mut Vec<Permutation>,
            nodes: &mut usize,
            max_nodes: usize,
            found: &mut Vec<QuotientHom>,
        ) -> bool {
            if k == g {
                if images.iter().any(|x| !x.is_identity()) {
                    found.push(QuotientHom { degree: n, images: images.clone() });
                }
                return true;
            }
            let cands = if k == 0 { firsts } else { perms };
            for c in cands {
                *nodes += 1;
                if *nodes > max_nodes {
                    return false;
                }
                images.push(c.clone());
                let ok = checks[k].iter().all(|r| eval_images(images, n, r).is_identity());
                if ok && !rec(k + 1, g, n, perms, firsts, checks, images, nodes, max_nodes, found) {
                    images.pop();
                    return false;
                }
                images.pop();
            }
            true
        }
        if !rec(0, g, n, &perms, &firsts, &checks, &mut images, &mut nodes, max_nodes, &mut found) {
            return (found, false);
        }
    }
    (found, true)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cycle_types_of_s4() {
        assert_eq!(cycle_type_representatives(4).len(), 5);
        assert_eq!(all_permutations(4).len(), 24);
    }

    #[test]
    fn order_two_group_maps_to_s2() {
        let p = Presentation::new(1, vec![Word(vec![1, 1])]);
        let (homs, done) = find_quotients(&p, 3, 10_000);
        assert!(done);
        assert!(homs.iter().all(|h| h.verify(&p)));
        assert!(homs.iter().any(|h| !h.eval(&Word(vec![1])).is_identity()));
    }

    #[test]
    fn subgroup_closure() {
        let a = Permutation(vec![1, 0, 2]);
        let b = Permutation(vec![0, 2, 1]);
        assert_eq!(closure(3, &[a.clone(), b]).len(), 6);
        assert_eq!(closure(3, &[a]).len(), 2);
    }
}
