//! Three-valued, budgeted answers to word, membership and double-coset questions.
//!
//! Each stage either settles the question with a certificate that
//! [`GroupContext::replay`] re-checks, or passes to the next stage.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::sync::{Mutex, OnceLock};

use serde::{Deserialize, Serialize};

use super::coset::{enumerate_cosets, CosetTable};
use super::quotient::{find_quotients, Permutation, QuotientHom};
use super::rewrite::{replay as replay_trace, RewriteStep, RewriteSystem};
use super::simplify::{canonical_relator, simplify_presentation, Simplified};
use super::snf::Abelianization;
use super::{Presentation, Word};
use crate::error::{Error, Result};

/// Resource limits for the group procedures.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(default)]
pub struct Budget {
    /// Words expanded by each rewriting search.
    pub rewrite_steps: usize,
    /// Cosets defined by each Todd–Coxeter run.
    pub coset_nodes: usize,
    /// Largest symmetric group searched for quotients.
    pub quotient_degree: usize,
    /// Partial assignments visited by the quotient search.
    pub quotient_homs: usize,
    /// Longest subgroup word tried when looking for literal factorizations.
    pub factor_depth: usize,
    /// Cap on total relator length during simplification.
    pub simplify_length: usize,
}

impl Default for Budget {
    fn default() -> Self {
        Budget {
            rewrite_steps: 20_000,
            coset_nodes: 200_000,
            quotient_degree: 6,
            quotient_homs: 2_000_000,
            factor_depth: 3,
            simplify_length: 2_000,
        }
    }
}

impl Budget {
    pub const KEYS: [&'static str; 6] =
        ["rewrite_steps", "coset_nodes", "quotient_degree", "quotient_homs", "factor_depth", "simplify_length"];

    /// Applies `key=value,...` overrides.
    pub fn with_overrides(mut self, spec: &str) -> Result<Budget> {
        for item in spec.split(',').map(str::trim).filter(|s| !s.is_empty()) {
            let (k, v) = item
                .split_once('=')
                .ok_or_else(|| Error::Precondition(format!("budget entry {item:?} is not key=value")))?;
            let v: usize =
                v.trim().parse().map_err(|_| Error::Precondition(format!("budget value {v:?} is not a count")))?;
            let slot = match k.trim() {
                "rewrite_steps" => &mut self.rewrite_steps,
                "coset_nodes" => &mut self.coset_nodes,
                "quotient_degree" => &mut self.quotient_degree,
                "quotient_homs" => &mut self.quotient_homs,
                "factor_depth" => &mut self.factor_depth,
                "simplify_length" => &mut self.simplify_length,
                other => {
                    return Err(Error::Precondition(format!(
                        "unknown budget key {other:?} (known: {})",
                        Self::KEYS.join(", ")
                    )))
                }
            };
            *slot = v;
        }
        Ok(self)
    }

    /// A small budget for quick checks.
    pub fn small() -> Budget {
        Budget {
            rewrite_steps: 2_000,
            coset_nodes: 20_000,
            quotient_degree: 5,
            quotient_homs: 200_000,
            factor_depth: 2,
            simplify_length: 2_000,
        }
    }
}

impl fmt::Display for Budget {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "rewrite_steps={},coset_nodes={},quotient_degree={},quotient_homs={},factor_depth={},simplify_length={}",
            self.rewrite_steps,
            self.coset_nodes,
            self.quotient_degree,
            self.quotient_homs,
            self.factor_depth,
            self.simplify_length
        )
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Answer {
    Yes,
    No,
    Unknown,
}

impl Answer {
    pub fn negate(self) -> Answer {
        match self {
            Answer::Yes => Answer::No,
            Answer::No => Answer::Yes,
            Answer::Unknown => Answer::Unknown,
        }
    }
}

impl fmt::Display for Answer {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Answer::Yes => "yes",
            Answer::No => "no",
            Answer::Unknown => "unknown",
        })
    }
}

/// Evidence for an answer. Words inside rewriting, coset-table and
/// factorization certificates are in the simplified presentation's generators;
/// quotient images are given for the original generators.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Certificate {
    /// The word's image in the abelianization is nonzero.
    Abelianization { invariants: String, image: Vec<String> },
    /// The word's abelian image lies outside the image of the subgroup(s).
    AbelianLattice { invariants: String, image: Vec<String> },
    /// Rewrites of `word` down to the empty word.
    Rewriting { word: Word, trace: Vec<RewriteStep> },
    /// A complete coset table of `subgroup`, in which the question is read off.
    CosetTable { subgroup: Vec<Word>, word: Word, table: CosetTable },
    /// A homomorphism onto a permutation group separating the word.
    FiniteQuotient { hom: QuotientHom },
    /// `w = left · right · (trivial residual)`, with `left` a word in the second
    /// subgroup's generators and `right` one in the first's.
    Factorization { left: Word, right: Word, residual: Word, trace: Vec<RewriteStep> },
    BudgetExhausted { stages: Vec<String> },
}

impl Certificate {
    pub fn tag(&self) -> &'static str {
        match self {
            Certificate::Abelianization { .. } => "abelianization",
            Certificate::AbelianLattice { .. } => "abelian_lattice",
            Certificate::Rewriting { .. } => "rewriting",
            Certificate::CosetTable { .. } => "coset_table",
            Certificate::FiniteQuotient { .. } => "finite_quotient",
            Certificate::Factorization { .. } => "factorization",
            Certificate::BudgetExhausted { .. } => "budget_exhausted",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GroupVerdict {
    pub answer: Answer,
    pub certificate: Certificate,
}

impl fmt::Display for GroupVerdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} ({})", self.answer, self.certificate.tag())
    }
}

/// The three questions, for replaying verdicts.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Question {
    /// Is `w` nontrivial?
    Nontrivial { w: Word },
    /// Is `w` in the subgroup generated by `h`?
    Member { h: Vec<Word>, w: Word },
    /// Is `w` in `⟨h2⟩·⟨h1⟩`?
    DoubleCoset { h1: Vec<Word>, h2: Vec<Word>, w: Word },
}

/// A presentation with cached simplification, abelianization, rewriting
/// system, coset tables and finite quotients.
pub struct GroupContext {
    pub presentation: Presentation,
    pub budget: Budget,
    pub simplified: Simplified,
    abelian: Abelianization,
    rewrite: RewriteSystem,
    quotients: OnceLock<(Vec<QuotientHom>, bool)>,
    tables: Mutex<BTreeMap<Vec<Word>, Option<CosetTable>>>,
}

fn big_strings(v: &[num_bigint::BigInt]) -> Vec<String> {
    v.iter().map(|x| x.to_string()).collect()
}

/// Least representative of the conjugacy classes of `w` and `w⁻¹`.
fn canonical_conjugate(w: &Word) -> Word {
    canonical_relator(w)
}

/// Reduced words of length at most `depth` over `k` generators, by length then letters.
fn subgroup_words(k: usize, depth: usize) -> Vec<Word> {
    let mut out = vec![Word::empty()];
    let mut frontier = vec![Word::empty()];
    let letters: Vec<i32> = (0..k as i32).flat_map(|g| [g + 1, -(g + 1)]).collect();
    for _ in 0..depth {
        let mut next = Vec::new();
        for w in &frontier {
            for &l in &letters {
                if w.0.last() == Some(&-l) {
                    continue;
                }
                let mut v = w.0.clone();
                v.push(l);
                next.push(Word(v));
            }
        }
        out.extend(next.iter().cloned());
        frontier = next;
    }
    out
}

impl GroupContext {
    pub fn new(presentation: &Presentation, budget: &Budget) -> Self {
        let simplified = simplify_presentation(presentation, budget.simplify_length);
        let abelian = Abelianization::new(presentation);
        let rewrite = RewriteSystem::new(&simplified.presentation);
        GroupContext {
            presentation: presentation.clone(),
            budget: budget.clone(),
            simplified,
            abelian,
            rewrite,
            quotients: OnceLock::new(),
            tables: Mutex::new(BTreeMap::new()),
        }
    }

    pub fn abelianization(&self) -> &Abelianization {
        &self.abelian
    }

    fn simp(&self, w: &Word) -> Word {
        self.simplified.map_word(w)
    }

    /// Homomorphisms of the simplified group to small symmetric groups.
    pub fn quotients(&self) -> &(Vec<QuotientHom>, bool) {
        self.quotients.get_or_init(|| {
            find_quotients(&self.simplified.presentation, self.budget.quotient_degree, self.budget.quotient_homs)
        })
    }

    /// Coset table of a subgroup given in simplified generators, if it completes.
    pub fn coset_table(&self, subgroup: &[Word]) -> Option<CosetTable> {
        let key: Vec<Word> = subgroup.to_vec();
        if let Some(t) = self.tables.lock().unwrap().get(&key) {
            return t.clone();
        }
        let t = enumerate_cosets(&self.simplified.presentation, subgroup, self.budget.coset_nodes);
        self.tables.lock().unwrap().insert(key, t.clone());
        t
    }

    /// Pulls a quotient of the simplified group back to the original generators.
    fn pull_back(&self, hom: &QuotientHom) -> QuotientHom {
        QuotientHom { degree: hom.degree, images: self.simplified.substitution.iter().map(|s| hom.eval(s)).collect() }
    }

    fn invariants_text(&self) -> String {
        self.abelian.invariants().to_string()
    }

    /// Is `w` nontrivial?
    pub fn decide_word(&self, w: &Word) -> GroupVerdict {
        let image = self.abelian.image(w);
        if image.iter().any(|x| x != &num_bigint::BigInt::from(0)) {
            return GroupVerdict {
                answer: Answer::Yes,
                certificate: Certificate::Abelianization { invariants: self.invariants_text(), image: big_strings(&image) },
            };
        }
        let ws = canonical_conjugate(&self.simp(w));
        if let Some(trace) = self.rewrite.prove_trivial(&ws, self.budget.rewrite_steps) {
            return GroupVerdict { answer: Answer::No, certificate: Certificate::Rewriting { word: ws, trace } };
        }
        if let Some(table) = self.coset_table(&[]) {
            let answer = if table.act(0, &ws) != 0 { Answer::Yes } else { Answer::No };
            return GroupVerdict { answer, certificate: Certificate::CosetTable { subgroup: Vec::new(), word: ws, table } };
        }
        let (homs, _) = self.quotients();
        if let Some(h) = homs.iter().find(|h| !h.eval(&ws).is_identity()) {
            return GroupVerdict { answer: Answer::Yes, certificate: Certificate::FiniteQuotient { hom: self.pull_back(h) } };
        }
        unknown(&["abelianization", "rewriting", "coset enumeration", "finite quotients"])
    }

    /// Searches for `w = left·right` with `left ∈ ⟨h2⟩`, `right ∈ ⟨h1⟩`, trying
    /// literal equality first and then short rewriting of the residual.
    fn factorize(&self, h1: &[Word], h2: &[Word], w: &Word) -> Option<GroupVerdict> {
        let depth = self.budget.factor_depth;
        let mut lefts = if h2.is_empty() { vec![Word::empty()] } else { subgroup_words(h2.len(), depth) };
        let mut rights = if h1.is_empty() { vec![Word::empty()] } else { subgroup_words(h1.len(), depth) };
        // The abelian solution suggests exponents: try h^c products first.
        let mut both = h1.to_vec();
        both.extend_from_slice(h2);
        if let Some(c) = self.abelian.solve_with(&both, w) {
            let skip = self.abelian.relation_matrix.len();
            let power_word = |coeffs: &[num_bigint::BigInt]| -> Option<Word> {
                let mut letters = Vec::new();
                for (i, ci) in coeffs.iter().enumerate() {
                    let k: i64 = ci.try_into().ok()?;
                    if k.unsigned_abs() > 64 {
                        return None;
                    }
                    letters.extend(std::iter::repeat_n(if k > 0 { i as i32 + 1 } else { -(i as i32 + 1) }, k.unsigned_abs() as usize));
                }
                Some(Word(letters))
            };
            if let (Some(r), Some(l)) = (power_word(&c[skip..skip + h1.len()]), power_word(&c[skip + h1.len()..])) {
                rights.insert(0, r);
                lefts.insert(0, l);
            }
        }
        let ws = self.simp(w);
        let mut residuals = Vec::new();
        for l in &lefts {
            for r in &rights {
                let prod = l.substitute(h2).concat(&r.substitute(h1));
                let residual = self.simp(&prod).inverse().concat(&ws);
                if residual.cyclically_reduced().is_empty() {
                    return Some(GroupVerdict {
                        answer: Answer::Yes,
                        certificate: Certificate::Factorization {
                            left: l.clone(),
                            right: r.clone(),
                            residual,
                            trace: Vec::new(),
                        },
                    });
                }
                residuals.push((l, r, residual));
            }
        }
        let mut spent = 0;
        let per_try = 64;
        for (l, r, residual) in residuals {
            if spent + per_try > self.budget.rewrite_steps {
                break;
            }
            spent += per_try;
            if let Some(trace) = self.rewrite.prove_trivial(&residual, per_try) {
                return Some(GroupVerdict {
                    answer: Answer::Yes,
                    certificate: Certificate::Factorization { left: l.clone(), right: r.clone(), residual, trace },
                });
            }
        }
        None
    }

    /// Is `w` in the subgroup generated by `h`?
    pub fn decide_membership(&self, h: &[Word], w: &Word) -> GroupVerdict {
        if self.abelian.solve_with(h, w).is_none() {
            return GroupVerdict {
                answer: Answer::No,
                certificate: Certificate::AbelianLattice {
                    invariants: self.invariants_text(),
                    image: big_strings(&self.abelian.image(w)),
                },
            };
        }
        if let Some(v) = self.factorize(h, &[], w) {
            return v;
        }
        let hs: Vec<Word> = h.iter().map(|x| self.simp(x)).collect();
        let ws = self.simp(w);
        if let Some(table) = self.coset_table(&hs) {
            let answer = if table.act(0, &ws) == 0 { Answer::Yes } else { Answer::No };
            return GroupVerdict { answer, certificate: Certificate::CosetTable { subgroup: hs, word: ws, table } };
        }
        let (homs, _) = self.quotients();
        for q in homs {
            let img = q.subgroup(&hs);
            if !img.contains(&q.eval(&ws)) {
                return GroupVerdict { answer: Answer::No, certificate: Certificate::FiniteQuotient { hom: self.pull_back(q) } };
            }
        }
        unknown(&["abelian lattice", "factorization", "coset enumeration", "finite quotients"])
    }

    /// Is `w` in `⟨h2⟩·⟨h1⟩`?
    pub fn decide_double_coset(&self, h1: &[Word], h2: &[Word], w: &Word) -> GroupVerdict {
        let mut both = h1.to_vec();
        both.extend_from_slice(h2);
        if self.abelian.solve_with(&both, w).is_none() {
            return GroupVerdict {
                answer: Answer::No,
                certificate: Certificate::AbelianLattice {
                    invariants: self.invariants_text(),
                    image: big_strings(&self.abelian.image(w)),
                },
            };
        }
        if let Some(v) = self.factorize(h1, h2, w) {
            return v;
        }
        let h1s: Vec<Word> = h1.iter().map(|x| self.simp(x)).collect();
        let h2s: Vec<Word> = h2.iter().map(|x| self.simp(x)).collect();
        let ws = self.simp(w);
        let (homs, _) = self.quotients();
        for q in homs {
            if !in_product(q, &h1s, &h2s, &ws) {
                return GroupVerdict { answer: Answer::No, certificate: Certificate::FiniteQuotient { hom: self.pull_back(q) } };
            }
        }
        if let Some(table) = self.coset_table(&h1s) {
            let answer = if double_coset_by_table(&table, &h2s, &ws) { Answer::Yes } else { Answer::No };
            return GroupVerdict { answer, certificate: Certificate::CosetTable { subgroup: h1s, word: ws, table } };
        }
        unknown(&["abelian lattice", "factorization", "finite quotients", "coset enumeration"])
    }

    /// Re-checks a verdict's certificate against the question.
    pub fn replay(&self, q: &Question, v: &GroupVerdict) -> bool {
        let p = &self.presentation;
        let sp = &self.simplified.presentation;
        match (&v.certificate, q, v.answer) {
            (Certificate::BudgetExhausted { .. }, _, Answer::Unknown) => true,
            (_, _, Answer::Unknown) => false,
            (Certificate::Abelianization { image, .. }, Question::Nontrivial { w }, Answer::Yes) => {
                let img = self.abelian.image(w);
                big_strings(&img) == *image && img.iter().any(|x| x != &num_bigint::BigInt::from(0))
            }
            (Certificate::AbelianLattice { .. }, Question::Member { h, w }, Answer::No) => {
                self.abelian.solve_with(h, w).is_none()
            }
            (Certificate::AbelianLattice { .. }, Question::DoubleCoset { h1, h2, w }, Answer::No) => {
                let mut both = h1.clone();
                both.extend_from_slice(h2);
                self.abelian.solve_with(&both, w).is_none()
            }
            (Certificate::Rewriting { word, trace }, Question::Nontrivial { w }, Answer::No) => {
                *word == canonical_conjugate(&self.simp(w)) && replay_trace(sp, word, trace)
            }
            (Certificate::CosetTable { subgroup, word, table }, q, answer) => {
                if !table.verify(sp, subgroup) {
                    return false;
                }
                match q {
                    Question::Nontrivial { w } => {
                        subgroup.is_empty()
                            && *word == canonical_conjugate(&self.simp(w))
                            && (table.act(0, word) != 0) == (answer == Answer::Yes)
                    }
                    Question::Member { h, w } => {
                        *subgroup == h.iter().map(|x| self.simp(x)).collect::<Vec<_>>()
                            && *word == self.simp(w)
                            && (table.act(0, word) == 0) == (answer == Answer::Yes)
                    }
                    Question::DoubleCoset { h1, h2, w } => {
                        let h2s: Vec<Word> = h2.iter().map(|x| self.simp(x)).collect();
                        *subgroup == h1.iter().map(|x| self.simp(x)).collect::<Vec<_>>()
                            && *word == self.simp(w)
                            && double_coset_by_table(table, &h2s, word) == (answer == Answer::Yes)
                    }
                }
            }
            (Certificate::FiniteQuotient { hom }, q, answer) => {
                if !hom.verify(p) {
                    return false;
                }
                match (q, answer) {
                    (Question::Nontrivial { w }, Answer::Yes) => !hom.eval(w).is_identity(),
                    (Question::Member { h, w }, Answer::No) => !hom.subgroup(h).contains(&hom.eval(w)),
                    (Question::DoubleCoset { h1, h2, w }, Answer::No) => !in_product(hom, h1, h2, w),
                    _ => false,
                }
            }
            (Certificate::Factorization { left, right, residual, trace }, q, Answer::Yes) => {
                let (h1, h2, w): (&[Word], &[Word], &Word) = match q {
                    Question::Member { h, w } => (h, &[], w),
                    Question::DoubleCoset { h1, h2, w } => (h1, h2, w),
                    Question::Nontrivial { .. } => return false,
                };
                let in_range = |x: &Word, k: usize| x.max_generator().is_none_or(|g| g < k);
                if !in_range(left, h2.len()) || !in_range(right, h1.len()) {
                    return false;
                }
                let prod = left.substitute(h2).concat(&right.substitute(h1));
                let expect = self.simp(&prod).inverse().concat(&self.simp(w));
                expect == *residual && replay_trace(sp, residual, trace)
            }
            _ => false,
        }
    }
}

fn unknown(stages: &[&str]) -> GroupVerdict {
    GroupVerdict {
        answer: Answer::Unknown,
        certificate: Certificate::BudgetExhausted { stages: stages.iter().map(|s| s.to_string()).collect() },
    }
}

/// Does `q(w)` lie in `q(⟨h2⟩)·q(⟨h1⟩)`?
fn in_product(q: &QuotientHom, h1: &[Word], h2: &[Word], w: &Word) -> bool {
    let k1 = q.subgroup(h1);
    let k2 = q.subgroup(h2);
    let qw = q.eval(w);
    k2.iter().any(|a| k1.contains(&a.inverse().then(&qw)))
}

/// With `table` the cosets of `H1`: `w ∈ H2·H1` iff coset `0·w⁻¹` lies in the
/// orbit of coset 0 under `H2`.
fn double_coset_by_table(table: &CosetTable, h2: &[Word], w: &Word) -> bool {
    let perms: Vec<Vec<usize>> = h2.iter().map(|h| table.permutation(h)).collect();
    let target = table.act(0, &w.inverse());
    let mut seen = BTreeSet::from([0usize]);
    let mut stack = vec![0usize];
    while let Some(c) = stack.pop() {
        for p in &perms {
            let mut inv = vec![0; p.len()];
            for (i, &x) in p.iter().enumerate() {
                inv[x] = i;
            }
            for d in [p[c], inv[c]] {
                if seen.insert(d) {
                    stack.push(d);
                }
            }
        }
    }
    seen.contains(&target)
}

pub fn decide_word(p: &Presentation, w: &Word, budget: &Budget) -> GroupVerdict {
    GroupContext::new(p, budget).decide_word(w)
}

pub fn decide_membership(p: &Presentation, h: &[Word], w: &Word, budget: &Budget) -> GroupVerdict {
    GroupContext::new(p, budget).decide_membership(h, w)
}

pub fn decide_double_coset(p: &Presentation, h1: &[Word], h2: &[Word], w: &Word, budget: &Budget) -> GroupVerdict {
    GroupContext::new(p, budget).decide_double_coset(h1, h2, w)
}

#[allow(dead_code)]
fn _assert_sync() {
    fn is_sync<T: Sync + Send>() {}
    is_sync::<GroupContext>();
    let _ = Permutation::identity(1);
}

#[cfg(test)]
mod tests {
    use super::*;

    fn w(v: &[i32]) -> Word {
        Word(v.to_vec())
    }

    #[test]
    fn order_two() {
        let p = Presentation::new(1, vec![w(&[1, 1])]);
        let b = Budget::small();
        let ctx = GroupContext::new(&p, &b);
        let v = ctx.decide_word(&w(&[1]));
        assert_eq!(v.answer, Answer::Yes);
        assert!(ctx.replay(&Question::Nontrivial { w: w(&[1]) }, &v));
        let v = ctx.decide_word(&w(&[1, 1]));
        assert_eq!(v.answer, Answer::No);
        assert_eq!(v.certificate.tag(), "rewriting");
        assert!(ctx.replay(&Question::Nontrivial { w: w(&[1, 1]) }, &v));
    }

    #[test]
    fn free_group_membership() {
        let p = Presentation::new(2, vec![]);
        let b = Budget::small();
        let h = vec![w(&[1])];
        let v = decide_membership(&p, &h, &w(&[1, 1, 1]), &b);
        assert_eq!(v.answer, Answer::Yes);
        let v = decide_membership(&p, &h, &w(&[2]), &b);
        assert_eq!(v.answer, Answer::No);
        assert_eq!(v.certificate.tag(), "abelian_lattice");
    }

    #[test]
    fn free_group_double_cosets() {
        let p = Presentation::new(2, vec![]);
        let b = Budget::small();
        let ctx = GroupContext::new(&p, &b);
        let (h1, h2) = (vec![w(&[1])], vec![w(&[2])]);
        let v = ctx.decide_double_coset(&h1, &h2, &w(&[2, 1]));
        assert_eq!(v.answer, Answer::Yes);
        let q = Question::DoubleCoset { h1: h1.clone(), h2: h2.clone(), w: w(&[1, 2, 1]) };
        let v = ctx.decide_double_coset(&h1, &h2, &w(&[1, 2, 1]));
        assert_eq!(v.answer, Answer::No);
        assert_eq!(v.certificate.tag(), "finite_quotient");
        assert!(ctx.replay(&q, &v));
        assert_eq!(ctx.decide_double_coset(&h1, &h2, &Word::empty()).answer, Answer::Yes);
    }

    #[test]
    fn budget_overrides() {
        let b = Budget::default().with_overrides("coset_nodes=5, quotient_degree=4").unwrap();
        assert_eq!(b.coset_nodes, 5);
        assert_eq!(b.quotient_degree, 4);
        assert!(Budget::default().with_overrides("bogus=1").is_err());
        assert!(Budget::default().with_overrides("coset_nodes").is_err());
        assert_eq!(Budget::default().with_overrides(&Budget::small().to_string()).unwrap(), Budget::small());
    }
}
