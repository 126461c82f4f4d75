//! Permutations of the four vertex labels of a tetrahedron.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::Error;

/// A bijection of `{0, 1, 2, 3}`, stored by its images.
///
/// Composition follows function notation: `(a * b)(i) = a(b(i))`.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "[u8; 4]", into = "[u8; 4]")]
pub struct Perm4([u8; 4]);

impl Perm4 {
    pub const IDENTITY: Perm4 = Perm4([0, 1, 2, 3]);

    pub fn new(images: [u8; 4]) -> Result<Self, Error> {
        let mut seen = [false; 4];
        for &i in &images {
            if i > 3 || seen[i as usize] {
                return Err(Error::InvalidPermutation(images));
            }
            seen[i as usize] = true;
        }
        Ok(Perm4(images))
    }

    /// All 24 permutations in lexicographic order of their image lists.
    pub fn all() -> impl Iterator<Item = Perm4> {
        (0..24usize).map(|mut k| {
            let mut pool = vec![0u8, 1, 2, 3];
            let mut images = [0u8; 4];
            let fact = [6, 2, 1, 1];
            for (slot, f) in images.iter_mut().zip(fact) {
                *slot = pool.remove(k / f);
                k %= f;
            }
            Perm4(images)
        })
    }

    pub fn images(self) -> [u8; 4] {
        self.0
    }

    #[inline]
    pub fn apply(self, i: usize) -> usize {
        self.0[i] as usize
    }

    pub fn inverse(self) -> Perm4 {
        let mut inv = [0u8; 4];
        for (i, &j) in self.0.iter().enumerate() {
            inv[j as usize] = i as u8;
        }
        Perm4(inv)
    }

    /// `self ∘ other`.
    pub fn compose(self, other: Perm4) -> Perm4 {
        Perm4(other.0.map(|j| self.0[j as usize]))
    }

    /// +1 for even permutations, -1 for odd ones.
    pub fn sign(self) -> i32 {
        let mut inversions = 0;
        for i in 0..4 {
            for j in i + 1..4 {
                if self.0[i] > self.0[j] {
                    inversions += 1;
                }
            }
        }
        if inversions % 2 == 0 {
            1
        } else {
            -1
        }
    }

    pub fn is_identity(self) -> bool {
        self == Self::IDENTITY
    }
}

impl std::ops::Mul for Perm4 {
    type Output = Perm4;

    fn mul(self, rhs: Perm4) -> Perm4 {
        self.compose(rhs)
    }
}

impl Default for Perm4 {
    fn default() -> Self {
        Self::IDENTITY
    }
}

impl TryFrom<[u8; 4]> for Perm4 {
    type Error = Error;

    fn try_from(images: [u8; 4]) -> Result<Self, Error> {
        Perm4::new(images)
    }
}

impl From<Perm4> for [u8; 4] {
    fn from(p: Perm4) -> [u8; 4] {
        p.0
    }
}

impl fmt::Debug for Perm4 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Perm4{:?}", self.0)
    }
}

impl fmt::Display for Perm4 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let [a, b, c, d] = self.0;
        write!(f, "{a}{b}{c}{d}")
    }
}

/// Index of the tetrahedron edge `{a, b}` in the order 01, 02, 03, 12, 13, 23.
pub fn edge_index(a: usize, b: usize) -> usize {
    let (a, b) = if a < b { (a, b) } else { (b, a) };
    match (a, b) {
        (0, 1) => 0,
        (0, 2) => 1,
        (0, 3) => 2,
        (1, 2) => 3,
        (1, 3) => 4,
        (2, 3) => 5,
        _ => panic!("not a tetrahedron edge: {a}{b}"),
    }
}

/// Endpoints of tetrahedron edge `i`, lower label first.
pub const EDGE_VERTICES: [[usize; 2]; 6] = [[0, 1], [0, 2], [0, 3], [1, 2], [1, 3], [2, 3]];

/// Angle slot of the edge `{a, b}`: 0 for the pair {01, 23}, 1 for {02, 13}, 2 for {03, 12}.
pub fn slot_of(a: usize, b: usize) -> usize {
    match edge_index(a, b) {
        0 | 5 => 0,
        1 | 4 => 1,
        _ => 2,
    }
}

/// The two vertices other than `a` and `b`, in increasing order.
pub fn complement(a: usize, b: usize) -> [usize; 2] {
    let mut out = [0; 2];
    let mut k = 0;
    for v in 0..4 {
        if v != a && v != b {
            out[k] = v;
            k += 1;
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn all_yields_24_distinct_bijections() {
        let all: Vec<_> = Perm4::all().collect();
        assert_eq!(all.len(), 24);
        assert_eq!(all[0], Perm4::IDENTITY);
        let mut sorted = all.clone();
        sorted.sort();
        sorted.dedup();
        assert_eq!(sorted.len(), 24);
        assert_eq!(sorted, all);
    }

    #[test]
    fn group_axioms_hold_on_all_elements() {
        for a in Perm4::all() {
            assert_eq!(a * a.inverse(), Perm4::IDENTITY);
            assert_eq!(a.inverse() * a, Perm4::IDENTITY);
            assert_eq!(a * Perm4::IDENTITY, a);
            for b in Perm4::all() {
                assert_eq!((a * b).sign(), a.sign() * b.sign());
                for c in Perm4::all() {
                    assert_eq!((a * b) * c, a * (b * c));
                }
            }
        }
    }

    #[test]
    fn rejects_non_bijections() {
        assert!(Perm4::new([0, 0, 1, 2]).is_err());
        assert!(Perm4::new([0, 1, 2, 4]).is_err());
    }

    #[test]
    fn slots_pair_opposite_edges() {
        for (i, [a, b]) in EDGE_VERTICES.iter().copied().enumerate() {
            let [c, d] = complement(a, b);
            assert_eq!(slot_of(a, b), slot_of(c, d), "edge {i}");
            assert_eq!(edge_index(b, a), i);
        }
    }
}
