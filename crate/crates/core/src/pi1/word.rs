use std::fmt;

use serde::{Deserialize, Serialize};

/// A word in the generators: letter `k > 0` is generator `k - 1`, and `-k` its inverse.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Word(pub Vec<i32>);

pub fn letter(gen: usize, inverse: bool) -> i32 {
    let l = gen as i32 + 1;
    if inverse {
        -l
    } else {
        l
    }
}

pub fn gen_of(letter: i32) -> usize {
    (letter.unsigned_abs() - 1) as usize
}

impl Word {
    pub fn empty() -> Self {
        Word(Vec::new())
    }

    pub fn gen(g: usize) -> Self {
        Word(vec![letter(g, false)])
    }

    pub fn from_letters(letters: impl IntoIterator<Item = i32>) -> Self {
        Word(letters.into_iter().collect()).reduced()
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn letters(&self) -> &[i32] {
        &self.0
    }

    pub fn inverse(&self) -> Word {
        Word(self.0.iter().rev().map(|l| -l).collect())
    }

    pub fn concat(&self, other: &Word) -> Word {
        let mut v = self.0.clone();
        v.extend_from_slice(&other.0);
        Word(v).reduced()
    }

    pub fn pow(&self, k: i64) -> Word {
        let base = if k < 0 { self.inverse() } else { self.clone() };
        let mut out = Vec::new();
        for _ in 0..k.unsigned_abs() {
            out.extend_from_slice(&base.0);
        }
        Word(out).reduced()
    }

    /// Cancels adjacent inverse pairs.
    pub fn reduced(&self) -> Word {
        let mut out: Vec<i32> = Vec::with_capacity(self.0.len());
        for &l in &self.0 {
            if out.last() == Some(&-l) {
                out.pop();
            } else {
                out.push(l);
            }
        }
        Word(out)
    }

    /// Free and cyclic reduction.
    pub fn cyclically_reduced(&self) -> Word {
        let w = self.reduced().0;
        let (mut i, mut j) = (0, w.len());
        while j - i >= 2 && w[i] == -w[j - 1] {
            i += 1;
            j -= 1;
        }
        Word(w[i..j].to_vec())
    }

    /// All cyclic rotations of the word.
    pub fn rotations(&self) -> impl Iterator<Item = Word> + '_ {
        (0..self.0.len()).map(move |k| {
            let mut v = self.0[k..].to_vec();
            v.extend_from_slice(&self.0[..k]);
            Word(v)
        })
    }

    /// Exponent sum per generator.
    pub fn exponents(&self, generator_count: usize) -> Vec<i64> {
        let mut v = vec![0i64; generator_count];
        for &l in &self.0 {
            v[gen_of(l)] += l.signum() as i64;
        }
        v
    }

    pub fn max_generator(&self) -> Option<usize> {
        self.0.iter().map(|&l| gen_of(l)).max()
    }

    /// Replaces each generator `g` by `images[g]`.
    pub fn substitute(&self, images: &[Word]) -> Word {
        let mut out = Vec::new();
        for &l in &self.0 {
            let img = &images[gen_of(l)];
            if l > 0 {
                out.extend_from_slice(&img.0);
            } else {
                out.extend(img.0.iter().rev().map(|x| -x));
            }
        }
        Word(out).reduced()
    }

    pub fn commutator(a: &Word, b: &Word) -> Word {
        a.concat(b).concat(&a.inverse()).concat(&b.inverse())
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return write!(f, "1");
        }
        let mut first = true;
        let mut i = 0;
        while i < self.0.len() {
            let l = self.0[i];
            let mut run = 1;
            while i + run < self.0.len() && self.0[i + run] == l {
                run += 1;
            }
            if !first {
                write!(f, " ")?;
            }
            first = false;
            let exp = if l > 0 { run as i64 } else { -(run as i64) };
            if exp == 1 {
                write!(f, "x{}", gen_of(l))?;
            } else {
                write!(f, "x{}^{exp}", gen_of(l))?;
            }
            i += run;
        }
        Ok(())
    }
}

impl fmt::Debug for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Word({self})")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn reduction() {
        let w = Word(vec![1, 2, -2, -1, 3]);
        assert_eq!(w.reduced(), Word(vec![3]));
        assert_eq!(Word(vec![-1, 2, 3, 1]).cyclically_reduced(), Word(vec![2, 3]));
        assert_eq!(Word(vec![1, 2]).concat(&Word(vec![1, 2]).inverse()), Word::empty());
    }

    #[test]
    fn substitution_and_display() {
        let w = Word(vec![1, -2, -2]);
        let images = vec![Word(vec![2]), Word(vec![1, 2])];
        assert_eq!(w.substitute(&images), Word(vec![2, -2, -1, -2, -1]).reduced());
        assert_eq!(w.to_string(), "x0 x1^-2");
        assert_eq!(Word::empty().to_string(), "1");
        assert_eq!(w.exponents(2), vec![1, -2]);
    }
}
