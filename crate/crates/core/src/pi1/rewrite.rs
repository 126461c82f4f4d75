//! Relator rewriting with a replayable trace.
//!
//! A move takes a cyclically reduced word, rotates it, and replaces a prefix
//! `u` by `v⁻¹` where `uv` is a cyclic conjugate of a relator or its inverse and
//! `|u| ≥ |v|`. Every move keeps the conjugacy class, so reaching the empty word
//! proves triviality.

use std::cmp::Reverse;
use std::collections::{BinaryHeap, HashMap};

use serde::{Deserialize, Serialize};

use super::{Presentation, Word};

/// One move: rotate the current word by `rotation`, then replace the first
/// `length` letters, which equal the start of `relator`'s conjugate, by the
/// inverse of the rest of it.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RewriteStep {
    pub relator: usize,
    pub inverted: bool,
    pub relator_rotation: usize,
    pub rotation: usize,
    pub length: usize,
    pub result: Word,
}

#[derive(Debug, Clone)]
struct Pattern {
    letters: Vec<i32>,
    relator: usize,
    inverted: bool,
    rotation: usize,
}

#[derive(Debug, Clone)]
pub struct RewriteSystem {
    patterns: Vec<Pattern>,
    /// Patterns grouped by first letter.
    by_first: HashMap<i32, Vec<usize>>,
}

fn conjugate_of(relator: &Word, inverted: bool, rotation: usize) -> Vec<i32> {
    let base = if inverted { relator.inverse() } else { relator.clone() };
    let n = base.0.len();
    (0..n).map(|k| base.0[(k + rotation) % n]).collect()
}

fn rotate(w: &[i32], k: usize) -> Vec<i32> {
    let mut v = w[k..].to_vec();
    v.extend_from_slice(&w[..k]);
    v
}

/// Applies a move as the trace describes it; `None` if the prefix does not match.
pub fn apply_step(p: &Presentation, word: &Word, step: &RewriteStep) -> Option<Word> {
    let r = p.relators.get(step.relator)?.cyclically_reduced();
    if r.is_empty() || step.relator_rotation >= r.len() || step.length > r.len() {
        return None;
    }
    let pat = conjugate_of(&r, step.inverted, step.relator_rotation);
    let w = &word.0;
    if step.length > w.len() || (step.rotation >= w.len() && !w.is_empty()) {
        return None;
    }
    let rot = if w.is_empty() { Vec::new() } else { rotate(w, step.rotation) };
    if rot[..step.length] != pat[..step.length] {
        return None;
    }
    let mut out: Vec<i32> = pat[step.length..].iter().rev().map(|l| -l).collect();
    out.extend_from_slice(&rot[step.length..]);
    Some(Word(out).cyclically_reduced())
}

/// Replays a trace from `start` and checks it ends at the empty word.
pub fn replay(p: &Presentation, start: &Word, trace: &[RewriteStep]) -> bool {
    let mut cur = start.cyclically_reduced();
    for step in trace {
        match apply_step(p, &cur, step) {
            Some(next) if next == step.result => cur = next,
            _ => return false,
        }
    }
    cur.is_empty()
}

impl RewriteSystem {
    pub fn new(p: &Presentation) -> Self {
        let mut patterns = Vec::new();
        let mut seen = std::collections::HashSet::new();
        for (i, r) in p.relators.iter().enumerate() {
            let r = r.cyclically_reduced();
            for inverted in [false, true] {
                for rotation in 0..r.len() {
                    let letters = conjugate_of(&r, inverted, rotation);
                    if seen.insert(letters.clone()) {
                        patterns.push(Pattern { letters, relator: i, inverted, rotation });
                    }
                }
            }
        }
        let mut by_first: HashMap<i32, Vec<usize>> = HashMap::new();
        for (k, pat) in patterns.iter().enumerate() {
            by_first.entry(pat.letters[0]).or_default().push(k);
        }
        RewriteSystem { patterns, by_first }
    }

    /// Non-lengthening moves from `w`, in a fixed order.
    fn moves(&self, w: &[i32]) -> Vec<(RewriteStep, Word)> {
        let n = w.len();
        let mut out = Vec::new();
        for rot in 0..n {
            let Some(cands) = self.by_first.get(&w[rot]) else { continue };
            for &k in cands {
                let pat = &self.patterns[k];
                let m = pat.letters.len();
                let mut len = 0;
                while len < m && len < n && w[(rot + len) % n] == pat.letters[len] {
                    len += 1;
                }
                // Replace the longest matching prefix when it is at least half the relator.
                if 2 * len < m {
                    continue;
                }
                let rotw = rotate(w, rot);
                let mut next: Vec<i32> = pat.letters[len..].iter().rev().map(|l| -l).collect();
                next.extend_from_slice(&rotw[len..]);
                let next = Word(next).cyclically_reduced();
                let step = RewriteStep {
                    relator: pat.relator,
                    inverted: pat.inverted,
                    relator_rotation: pat.rotation,
                    rotation: rot,
                    length: len,
                    result: next.clone(),
                };
                out.push((step, next));
            }
        }
        out
    }

    /// Best-first search for a rewriting of `w` to the empty word, expanding at
    /// most `max_nodes` words.
    pub fn prove_trivial(&self, w: &Word, max_nodes: usize) -> Option<Vec<RewriteStep>> {
        let start = w.cyclically_reduced();
        if start.is_empty() {
            return Some(Vec::new());
        }
        let mut parent: HashMap<Word, Option<(Word, RewriteStep)>> = HashMap::new();
        parent.insert(start.clone(), None);
        let mut heap = BinaryHeap::new();
        let mut seq = 0usize;
        heap.push(Reverse((start.len(), seq, start.clone())));
        let mut expanded = 0;
        while let Some(Reverse((_, _, cur))) = heap.pop() {
            if expanded >= max_nodes {
                break;
            }
            expanded += 1;
            for (step, next) in self.moves(&cur.0) {
                if parent.contains_key(&next) {
                    continue;
                }
                parent.insert(next.clone(), Some((cur.clone(), step)));
                if next.is_empty() {
                    let mut trace = Vec::new();
                    let mut at = next;
                    while let Some(Some((prev, step))) = parent.get(&at) {
                        trace.push(step.clone());
                        at = prev.clone();
                    }
                    trace.reverse();
                    return Some(trace);
                }
                seq += 1;
                heap.push(Reverse((next.len(), seq, next)));
            }
        }
        None
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn power_relator() {
        let p = Presentation::new(1, vec![Word(vec![1, 1])]);
        let rs = RewriteSystem::new(&p);
        let t = rs.prove_trivial(&Word(vec![1, 1]), 100).unwrap();
        assert!(replay(&p, &Word(vec![1, 1]), &t));
        assert!(rs.prove_trivial(&Word(vec![1]), 100).is_none());
        let w = Word(vec![1, 1, 1, 1, 1, 1]);
        let t = rs.prove_trivial(&w, 100).unwrap();
        assert!(replay(&p, &w, &t));
        assert!(!replay(&p, &Word(vec![1]), &t));
    }

    #[test]
    fn commutator_in_free_abelian_group() {
        let p = Presentation::new(2, vec![Word(vec![1, 2, -1, -2])]);
        let rs = RewriteSystem::new(&p);
        let w = Word(vec![1, 1, 2, -1, -1, -2]);
        let t = rs.prove_trivial(&w, 1000).unwrap();
        assert!(replay(&p, &w, &t));
    }
}
