//! Tietze simplification: free and cyclic reduction, and elimination of
//! generators that occur exactly once in some relator.

use serde::{Deserialize, Serialize};

use super::word::gen_of;
use super::{Presentation, Word};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Simplified {
    pub presentation: Presentation,
    /// Image of each original generator as a word in the new generators.
    pub substitution: Vec<Word>,
    /// Original index of each surviving generator.
    pub kept: Vec<usize>,
}

impl Simplified {
    pub fn map_word(&self, w: &Word) -> Word {
        w.substitute(&self.substitution)
    }
}

/// Least word among the rotations of `r` and of its inverse.
pub fn canonical_relator(r: &Word) -> Word {
    let r = r.cyclically_reduced();
    if r.is_empty() {
        return r;
    }
    let inv = r.inverse();
    r.rotations().chain(inv.rotations()).min_by(|a, b| key(a).cmp(&key(b))).unwrap()
}

fn key(w: &Word) -> Vec<(usize, bool)> {
    w.0.iter().map(|&l| (gen_of(l), l < 0)).collect()
}

fn normalise(relators: &mut Vec<Word>) {
    let mut rs: Vec<Word> = relators.iter().map(canonical_relator).filter(|r| !r.is_empty()).collect();
    rs.sort_by_key(|a| (a.len(), key(a)));
    rs.dedup();
    *relators = rs;
}

/// Simplifies `p`, never letting the total relator length exceed `max_length`
/// (or the starting length, if larger).
pub fn simplify_presentation(p: &Presentation, max_length: usize) -> Simplified {
    let mut gens: Vec<usize> = (0..p.generator_count).collect();
    let mut labels = p.labels.clone();
    labels.resize(p.generator_count, None);
    let mut substitution: Vec<Word> = (0..p.generator_count).map(Word::gen).collect();
    let mut relators = p.relators.clone();
    normalise(&mut relators);
    let limit = max_length.max(relators.iter().map(Word::len).sum());

    loop {
        let mut choice = None;
        'search: for (ri, r) in relators.iter().enumerate() {
            let g = gens.len();
            let mut counts = vec![0usize; g];
            for &l in &r.0 {
                counts[gen_of(l)] += 1;
            }
            for x in (0..g).rev() {
                if counts[x] != 1 {
                    continue;
                }
                let pos = r.0.iter().position(|&l| gen_of(l) == x).unwrap();
                let rot: Vec<i32> = r.0[pos..].iter().chain(r.0[..pos].iter()).copied().collect();
                let rest = Word(rot[1..].to_vec());
                let value = if rot[0] > 0 { rest.inverse() } else { rest };
                let mut images: Vec<Word> = (0..g).map(Word::gen).collect();
                images[x] = value.clone();
                let total: usize = relators
                    .iter()
                    .enumerate()
                    .filter(|&(k, _)| k != ri)
                    .map(|(_, s)| s.substitute(&images).cyclically_reduced().len())
                    .sum();
                if total <= limit {
                    choice = Some((ri, x, value));
                    break 'search;
                }
            }
        }
        let Some((ri, x, value)) = choice else { break };
        // Substitute x := value, then renumber generators above x.
        let g = gens.len();
        let images: Vec<Word> = (0..g)
            .map(|y| match y.cmp(&x) {
                std::cmp::Ordering::Less => Word::gen(y),
                std::cmp::Ordering::Equal => Word::empty(),
                std::cmp::Ordering::Greater => Word::gen(y - 1),
            })
            .collect();
        let renumber = |w: &Word| w.substitute(&images);
        let value = renumber(&value);
        let mut full: Vec<Word> = (0..g).map(|y| images[y].clone()).collect();
        full[x] = value;
        relators = relators.iter().enumerate().filter(|&(k, _)| k != ri).map(|(_, s)| s.substitute(&full)).collect();
        substitution = substitution.iter().map(|s| s.substitute(&full)).collect();
        gens.remove(x);
        labels.remove(x);
        normalise(&mut relators);
    }
    Simplified { presentation: Presentation { generator_count: gens.len(), relators, labels }, substitution, kept: gens }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::pi1::homology;

    #[test]
    fn eliminates_inverse_pair() {
        let p = Presentation::new(2, vec![Word(vec![1, 2]), Word::empty()]);
        let s = simplify_presentation(&p, 1000);
        assert_eq!(s.presentation.generator_count, 1);
        assert!(s.presentation.relators.is_empty());
        assert_eq!(s.substitution[1], Word(vec![-1]));
    }

    #[test]
    fn idempotent_and_preserves_homology() {
        let p = Presentation::new(
            3,
            vec![Word(vec![1, 2, -1, -2, 3]), Word(vec![3, 3, 1]), Word(vec![2, 2, 2])],
        );
        let s = simplify_presentation(&p, 1000);
        let t = simplify_presentation(&s.presentation, 1000);
        assert_eq!(t.presentation, s.presentation);
        assert_eq!(homology(&s.presentation), homology(&p));
        // Substitution sends every original relator to a consequence: check in homology.
        let ab = crate::pi1::Abelianization::new(&s.presentation);
        for r in &p.relators {
            assert!(ab.is_trivial(&s.map_word(r)));
        }
    }
}
