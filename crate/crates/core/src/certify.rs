//! Essential and strongly essential verdicts assembled from every certificate source.
//!
//! Sources are tried in the order combinatorial, angles, homology, geometry,
//! group. The first conclusive source decides each edge or pair; in exhaustive
//! mode every enabled source runs and its answers are kept as evidence.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;
use std::sync::OnceLock;

use num_complex::Complex64;
use num_traits::Signed;
use serde::{Deserialize, Serialize};

use crate::angles::{solve_system, angle_system_from, AngleMode, AngleVector, LPOutcome};
use crate::error::{Error, Result};
use crate::gaussian::GaussianRational;
use crate::geom::{develop_and_scan, round_shapes, solve_shapes_newton, verify_shapes, DevelopReport};
use crate::pi1::{
    edge_core_word, peripheral_system, presentation_closed_with, spine_presentation_with, Answer, Budget, GroupContext,
    GroupVerdict, Presentation, Question, Word,
};
use crate::skeleton::{build_skeleton, Classification, SkeletonSummary, SurfaceKind};
use crate::triangulation::{Mode, Triangulation};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Method {
    Combinatorial,
    Angles,
    Homology,
    Geometry,
    Group,
}

impl Method {
    pub const ALL: [Method; 5] = [Method::Combinatorial, Method::Angles, Method::Homology, Method::Geometry, Method::Group];

    pub fn name(self) -> &'static str {
        match self {
            Method::Combinatorial => "combinatorial",
            Method::Angles => "angles",
            Method::Homology => "homology",
            Method::Geometry => "geometry",
            Method::Group => "group",
        }
    }
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Method {
    type Err = Error;
    fn from_str(s: &str) -> Result<Method> {
        Method::ALL
            .into_iter()
            .find(|m| m.name() == s.trim())
            .ok_or_else(|| Error::Unsupported(format!("unknown method {s:?}; expected one of combinatorial, angles, homology, geometry, group")))
    }
}

/// Parses a comma-separated method list, keeping the fixed precedence order.
pub fn parse_methods(list: &str) -> Result<Vec<Method>> {
    let mut out: Vec<Method> = list.split(',').filter(|s| !s.trim().is_empty()).map(str::parse).collect::<Result<_>>()?;
    out.sort();
    out.dedup();
    if out.is_empty() {
        return Err(Error::Unsupported("empty method list".into()));
    }
    Ok(out)
}

#[derive(Debug, Clone)]
pub struct CertifyOptions {
    pub budget: Budget,
    pub methods: Vec<Method>,
    /// Exact shapes to try before falling back to Newton plus rounding.
    pub shapes: Option<Vec<GaussianRational>>,
    /// Development radius for the geometric scan.
    pub radius: usize,
    /// Run every enabled source even after everything is resolved.
    pub exhaustive: bool,
}

impl Default for CertifyOptions {
    fn default() -> Self {
        CertifyOptions { budget: Budget::default(), methods: Method::ALL.to_vec(), shapes: None, radius: 3, exhaustive: false }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Case {
    /// Closed, one vertex with a sphere link.
    Closed,
    /// Closed pseudo-manifold whose vertex links are all tori.
    Ideal,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GroupCheck {
    pub question: Question,
    pub verdict: GroupVerdict,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum EdgeCertificate {
    /// The strict angle program has optimum `optimum > 0`.
    StrictAngle { optimum: String },
    /// The angle equations have a solution with all angles in `[0, π]`.
    SemiAngle,
    /// Abelian images rule out the relevant subgroup or double coset.
    Homology { detail: String },
    /// Developed endpoints of a lift under a verified complete structure.
    GeometricEndpoints { radius: usize, detail: String },
    /// The edge runs between two different cusps, or the pair joins different cusps.
    DistinctCusps { cusps: Vec<usize> },
    /// Two tetrahedra glued around a degree-two edge form a ball in which the
    /// two opposite edges are homotopic with their ends fixed.
    Pillow { degree_two_edge: usize, tets: [usize; 2] },
    Group { checks: Vec<GroupCheck> },
    BudgetExhausted { methods: Vec<Method> },
}

impl EdgeCertificate {
    pub fn tag(&self) -> String {
        match self {
            EdgeCertificate::StrictAngle { .. } => "strict_angle".into(),
            EdgeCertificate::SemiAngle => "semi_angle".into(),
            EdgeCertificate::Homology { .. } => "homology".into(),
            EdgeCertificate::GeometricEndpoints { .. } => "geometric_endpoints".into(),
            EdgeCertificate::DistinctCusps { .. } => "distinct_cusps".into(),
            EdgeCertificate::Pillow { .. } => "pillow".into(),
            EdgeCertificate::Group { checks } => {
                let kind = match checks.first().map(|c| &c.question) {
                    Some(Question::Nontrivial { .. }) => "word",
                    Some(Question::Member { .. }) => "membership",
                    Some(Question::DoubleCoset { .. }) => "double_coset",
                    None => "none",
                };
                format!("group({kind})")
            }
            EdgeCertificate::BudgetExhausted { .. } => "budget_exhausted".into(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct EdgeVerdict {
    pub edge: usize,
    pub essential: Answer,
    pub certificate: EdgeCertificate,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PairVerdict {
    pub edges: [usize; 2],
    pub parallel: Answer,
    pub certificate: EdgeCertificate,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Subject {
    Edge(usize),
    Pair([usize; 2]),
}

/// One source's conclusive answer: "essential?" for an edge, "parallel?" for a pair.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Evidence {
    pub method: Method,
    pub subject: Subject,
    pub answer: Answer,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LogEntry {
    pub method: Method,
    pub note: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TriangulationVerdict {
    pub case: Case,
    pub essential: Answer,
    /// Absent when only essentiality was asked for.
    pub strongly_essential: Option<Answer>,
    pub edges: Vec<EdgeVerdict>,
    pub pairs: Vec<PairVerdict>,
    pub angle_witness: Option<AngleVector>,
    pub log: Vec<LogEntry>,
    pub evidence: Vec<Evidence>,
}

impl TriangulationVerdict {
    /// The answer to whichever question was asked.
    pub fn answer(&self) -> Answer {
        self.strongly_essential.unwrap_or(self.essential)
    }

    /// Certificate tags behind the headline answer, in order of first use.
    pub fn headline_tags(&self) -> Vec<String> {
        let mut tags: Vec<String> = Vec::new();
        let mut push = |t: String| {
            if !tags.contains(&t) {
                tags.push(t);
            }
        };
        let strong = self.strongly_essential.is_some();
        match self.answer() {
            Answer::No => {
                if strong {
                    self.pairs.iter().filter(|p| p.parallel == Answer::Yes).for_each(|p| push(p.certificate.tag()));
                }
                self.edges.iter().filter(|e| e.essential == Answer::No).for_each(|e| push(e.certificate.tag()));
            }
            Answer::Yes => {
                self.edges.iter().for_each(|e| push(e.certificate.tag()));
                if strong {
                    self.pairs.iter().for_each(|p| push(p.certificate.tag()));
                }
            }
            Answer::Unknown => push("budget_exhausted".into()),
        }
        tags
    }

    /// Subjects on which two sources gave different conclusive answers.
    pub fn conflicts(&self) -> Vec<(Subject, Vec<Evidence>)> {
        let mut by_subject: BTreeMap<Subject, Vec<Evidence>> = BTreeMap::new();
        for e in self.evidence.iter().filter(|e| e.answer != Answer::Unknown) {
            by_subject.entry(e.subject).or_default().push(*e);
        }
        by_subject.into_iter().filter(|(_, v)| v.iter().any(|e| e.answer != v[0].answer)).collect()
    }

    /// Methods that produced at least one conclusive answer.
    pub fn resolving_methods(&self) -> Vec<Method> {
        let mut m: Vec<Method> = self.evidence.iter().filter(|e| e.answer != Answer::Unknown).map(|e| e.method).collect();
        m.sort();
        m.dedup();
        m
    }
}

impl fmt::Display for TriangulationVerdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} (certificate: {})", self.answer(), self.headline_tags().join(", "))
    }
}

/// Words and subgroups in one presentation of the fundamental group.
struct Setup<'a> {
    tri: &'a Triangulation,
    skel: SkeletonSummary,
    case: Case,
    presentation: Presentation,
    /// Start cusp, end cusp and word of each edge class.
    edge_words: Vec<(usize, usize, Word)>,
    peripheral: BTreeMap<usize, Vec<Word>>,
}

fn setup(tri: &Triangulation) -> Result<Setup<'_>> {
    tri.require_valid(Mode::Closed)?;
    let skel = build_skeleton(tri)?;
    match skel.classification {
        Classification::ClosedManifold1Vertex => {
            let presentation = presentation_closed_with(tri, &skel)?;
            let edge_words = (0..skel.edge_count()).map(|e| (0, 0, Word::gen(e))).collect();
            Ok(Setup { tri, skel, case: Case::Closed, presentation, edge_words, peripheral: BTreeMap::new() })
        }
        Classification::IdealAllTorusOrKlein => {
            if let Some(l) = skel.links.iter().find(|l| l.surface_kind != SurfaceKind::Torus) {
                return Err(Error::NotTorusLink { vertex: l.vertex, kind: l.surface_kind.to_string() });
            }
            let spine = spine_presentation_with(tri, &skel)?;
            let mut peripheral = BTreeMap::new();
            for v in 0..skel.vertex_count {
                peripheral.insert(v, peripheral_system(tri, &skel, &spine, v)?.words());
            }
            let edge_words = (0..skel.edge_count()).map(|e| edge_core_word(tri, &skel, &spine, e)).collect();
            Ok(Setup { tri, skel, case: Case::Ideal, presentation: spine.presentation, edge_words, peripheral })
        }
        Classification::PseudoManifoldOther => Err(Error::Unsupported(
            "certification needs a closed one-vertex manifold or an ideal triangulation with torus cusps".into(),
        )),
    }
}

/// A source's verdict on one subject.
type Finding = (Subject, Answer, EdgeCertificate);

struct Geometry {
    report: DevelopReport,
    radius: usize,
}

struct Engine<'a> {
    s: Setup<'a>,
    opts: &'a CertifyOptions,
    lp: OnceLock<Option<LPOutcome>>,
    geometry: OnceLock<std::result::Result<Geometry, String>>,
    group: OnceLock<GroupContext>,
    log: Vec<LogEntry>,
}

fn pairs_of(n: usize) -> Vec<[usize; 2]> {
    (0..n).flat_map(|i| (i + 1..n).map(move |j| [i, j])).collect()
}

fn conj(g: &Word, h: &Word) -> Word {
    g.inverse().concat(h).concat(g).reduced()
}

impl<'a> Engine<'a> {
    fn note(&mut self, method: Method, note: impl Into<String>) {
        self.log.push(LogEntry { method, note: note.into() });
    }

    fn strict_lp(&self) -> Option<&LPOutcome> {
        self.lp.get_or_init(|| solve_system(&angle_system_from(&self.s.skel), AngleMode::Strict).ok()).as_ref()
    }

    fn group(&self) -> &GroupContext {
        self.group.get_or_init(|| GroupContext::new(&self.s.presentation, &self.opts.budget))
    }

    fn geometry(&self) -> &std::result::Result<Geometry, String> {
        self.geometry.get_or_init(|| {
            let tri = self.s.tri;
            let shapes = match &self.opts.shapes {
                Some(z) => z.clone(),
                None => {
                    let start = vec![Complex64::new(0.5, 0.75f64.sqrt()); tri.tet_count()];
                    let out = solve_shapes_newton(tri, &start, 1e-12, 100).map_err(|e| format!("newton: {e}"))?;
                    round_shapes(&out.shapes, 1000, 1e-9).ok_or("numerical shapes are not recognisably exact")?
                }
            };
            let report = verify_shapes(tri, &shapes).map_err(|e| e.to_string())?;
            if !report.passed {
                return Err("shapes fail the gluing equations".into());
            }
            if !report.is_complete() {
                return Err("shapes do not give the complete structure".into());
            }
            if !report.negatively_oriented.is_empty() {
                return Err(format!("negatively oriented tetrahedra {:?}", report.negatively_oriented));
            }
            let develop = develop_and_scan(tri, &shapes, self.opts.radius).map_err(|e| e.to_string())?;
            if !develop.positively_oriented {
                return Err("development reverses orientation".into());
            }
            Ok(Geometry { report: develop, radius: self.opts.radius })
        })
    }

    fn essential_findings(&mut self, method: Method) -> Vec<Finding> {
        let n = self.s.skel.edge_count();
        let ideal = self.s.case == Case::Ideal;
        let mut out = Vec::new();
        match method {
            Method::Combinatorial => {
                if ideal {
                    for (e, (va, vb, _)) in self.s.edge_words.iter().enumerate() {
                        if va != vb {
                            out.push((Subject::Edge(e), Answer::Yes, EdgeCertificate::DistinctCusps { cusps: vec![*va, *vb] }));
                        }
                    }
                }
                self.note(method, format!("{} edges join distinct cusps", out.len()));
            }
            Method::Angles => {
                if !ideal {
                    self.note(method, "angle structures only certify ideal triangulations");
                    return out;
                }
                let Some(lp) = self.strict_lp().cloned() else {
                    self.note(method, "angle program failed");
                    return out;
                };
                match &lp.optimum {
                    Some(t) if !t.is_negative() => {
                        let cert = if t.is_positive() {
                            EdgeCertificate::StrictAngle { optimum: t.to_string() }
                        } else {
                            EdgeCertificate::SemiAngle
                        };
                        out.extend((0..n).map(|e| (Subject::Edge(e), Answer::Yes, cert.clone())));
                        self.note(method, format!("strict optimum t* = {t}; {}", cert.tag()));
                    }
                    Some(t) => self.note(method, format!("strict optimum t* = {t}; no semi-angle structure")),
                    None => self.note(method, "no semi-angle structure"),
                }
            }
            Method::Homology => {
                if !ideal {
                    self.note(method, "closed case: abelian images are part of the group stage");
                    return out;
                }
                let ab = self.group().abelianization();
                for (e, (va, vb, w)) in self.s.edge_words.iter().enumerate() {
                    if va == vb && ab.solve_with(&self.s.peripheral[va], w).is_none() {
                        let detail = format!("core word image {:?} lies outside the cusp {va} image", ab.image(w).iter().map(|x| x.to_string()).collect::<Vec<_>>());
                        out.push((Subject::Edge(e), Answer::Yes, EdgeCertificate::Homology { detail }));
                    }
                }
                self.note(method, format!("{} edges separated from their cusp in homology", out.len()));
            }
            Method::Geometry => {
                if !ideal {
                    self.note(method, "no cusps to develop");
                    return out;
                }
                match self.geometry() {
                    Err(why) => {
                        let why = why.clone();
                        self.note(method, why);
                    }
                    Ok(g) => {
                        for e in 0..n {
                            let coincident = g.report.coincident_edges.contains(&e);
                            let detail = if coincident { "a lift has equal endpoints" } else { "lift endpoints are distinct" };
                            out.push((
                                Subject::Edge(e),
                                if coincident { Answer::No } else { Answer::Yes },
                                EdgeCertificate::GeometricEndpoints { radius: g.radius, detail: detail.into() },
                            ));
                        }
                        let msg = format!("developed {} tetrahedra, coincident edges {:?}", g.report.tets.len(), g.report.coincident_edges);
                        self.note(method, msg);
                    }
                }
            }
            Method::Group => {
                let mut resolved = 0;
                for e in 0..n {
                    let (va, vb, w) = self.s.edge_words[e].clone();
                    let (question, answer) = if ideal {
                        if va != vb {
                            continue;
                        }
                        let h = self.s.peripheral[&va].clone();
                        let v = self.group().decide_membership(&h, &w);
                        let a = v.answer.negate();
                        (GroupCheck { question: Question::Member { h, w }, verdict: v }, a)
                    } else {
                        let v = self.group().decide_word(&w);
                        let a = v.answer;
                        (GroupCheck { question: Question::Nontrivial { w }, verdict: v }, a)
                    };
                    if answer != Answer::Unknown {
                        resolved += 1;
                    }
                    out.push((Subject::Edge(e), answer, EdgeCertificate::Group { checks: vec![question] }));
                }
                self.note(method, format!("{resolved} edges resolved by group computations"));
            }
        }
        out
    }

    /// Pillow detection: degree-two classes whose two corners sit in different tetrahedra.
    fn pillow_pairs(&self) -> Vec<([usize; 2], EdgeCertificate)> {
        let skel = &self.s.skel;
        let mut out = Vec::new();
        for (e, class) in skel.edges.iter().enumerate() {
            if class.degree() != 2 || class.corners[0].tet == class.corners[1].tet {
                continue;
            }
            let opposite = |c: &crate::skeleton::Corner| skel.edge_class_of(c.tet, c.vertices[2], c.vertices[3]).class;
            let (a, b) = (opposite(&class.corners[0]), opposite(&class.corners[1]));
            if a != b {
                let cert = EdgeCertificate::Pillow { degree_two_edge: e, tets: [class.corners[0].tet, class.corners[1].tet] };
                out.push(([a.min(b), a.max(b)], cert));
            }
        }
        out
    }

    /// Orientation-compatible double-coset questions for a pair, one per way of
    /// matching the second edge to the first.
    fn pair_questions(&self, pair: [usize; 2]) -> Vec<Question> {
        let (va, vb, we) = &self.s.edge_words[pair[0]];
        let (fa, fb, wf) = &self.s.edge_words[pair[1]];
        let mut out = Vec::new();
        for (sa, sb, w) in [(fa, fb, wf.clone()), (fb, fa, wf.inverse())] {
            if sa != va || sb != vb {
                continue;
            }
            // we ∈ H_a · w · H_b  ⟺  w⁻¹·we ∈ (w⁻¹ H_a w) · H_b
            let h2: Vec<Word> = self.s.peripheral[va].iter().map(|h| conj(&w, h)).collect();
            let h1 = self.s.peripheral[vb].clone();
            out.push(Question::DoubleCoset { h1, h2, w: w.inverse().concat(we).reduced() });
        }
        out
    }

    fn pair_findings(&mut self, method: Method, pairs: &[[usize; 2]]) -> Vec<Finding> {
        let ideal = self.s.case == Case::Ideal;
        let mut out = Vec::new();
        match method {
            Method::Combinatorial => {
                for (p, cert) in self.pillow_pairs() {
                    out.push((Subject::Pair(p), Answer::Yes, cert));
                }
                if ideal {
                    for &p in pairs {
                        if self.pair_questions(p).is_empty() {
                            let (va, vb, _) = self.s.edge_words[p[0]];
                            let (fa, fb, _) = self.s.edge_words[p[1]];
                            out.push((Subject::Pair(p), Answer::No, EdgeCertificate::DistinctCusps { cusps: vec![va, vb, fa, fb] }));
                        }
                    }
                }
                self.note(method, format!("{} pairs decided combinatorially", out.len()));
            }
            Method::Angles => {
                if !ideal {
                    return out;
                }
                if let Some(LPOutcome { optimum: Some(t), .. }) = self.strict_lp().cloned() {
                    if t.is_positive() {
                        let cert = EdgeCertificate::StrictAngle { optimum: t.to_string() };
                        out.extend(pairs.iter().map(|&p| (Subject::Pair(p), Answer::No, cert.clone())));
                        self.note(method, format!("strict angle structure with t* = {t} separates every pair"));
                    } else {
                        self.note(method, format!("strict optimum t* = {t}; pairs left open"));
                    }
                }
            }
            Method::Homology => {
                if !ideal {
                    return out;
                }
                let ab = self.group().abelianization();
                for &p in pairs {
                    let qs = self.pair_questions(p);
                    if qs.is_empty() {
                        continue;
                    }
                    let separated = qs.iter().all(|q| match q {
                        Question::DoubleCoset { h1, h2, w } => {
                            let mut both = h1.clone();
                            both.extend_from_slice(h2);
                            ab.solve_with(&both, w).is_none()
                        }
                        _ => false,
                    });
                    if separated {
                        let detail = format!("{} orientation(s) excluded by abelian images", qs.len());
                        out.push((Subject::Pair(p), Answer::No, EdgeCertificate::Homology { detail }));
                    }
                }
                self.note(method, format!("{} pairs separated in homology", out.len()));
            }
            Method::Geometry => {
                if !ideal {
                    return out;
                }
                match self.geometry() {
                    Err(why) => {
                        let why = why.clone();
                        self.note(method, why);
                    }
                    Ok(g) => {
                        let radius = g.radius;
                        let mut parallel: Vec<[usize; 2]> = g.report.parallel_pairs.iter().map(|p| p.edges).collect();
                        for c in &g.report.flat_clusters {
                            parallel.extend(c.parallel.iter().copied());
                        }
                        let parallel: Vec<[usize; 2]> = parallel.into_iter().map(|[a, b]| [a.min(b), a.max(b)]).collect();
                        let conclusive = g.report.conclusive_for_flat_clusters && g.report.coincident_edges.is_empty();
                        for &p in pairs {
                            if parallel.contains(&p) {
                                let detail = "two lifts share both developed endpoints".to_string();
                                out.push((Subject::Pair(p), Answer::Yes, EdgeCertificate::GeometricEndpoints { radius, detail }));
                            } else if conclusive {
                                let detail = "no shared endpoints; flat clusters close up".to_string();
                                out.push((Subject::Pair(p), Answer::No, EdgeCertificate::GeometricEndpoints { radius, detail }));
                            }
                        }
                        let msg = format!(
                            "{} parallel pairs seen, flat-cluster scan {}",
                            parallel.len(),
                            if conclusive { "conclusive" } else { "inconclusive" }
                        );
                        self.note(method, msg);
                    }
                }
            }
            Method::Group => {
                let mut resolved = 0;
                for &p in pairs {
                    let questions: Vec<Question> = if ideal {
                        self.pair_questions(p)
                    } else {
                        let (g, d) = (Word::gen(p[0]), Word::gen(p[1]));
                        vec![
                            Question::Nontrivial { w: g.concat(&d.inverse()).reduced() },
                            Question::Nontrivial { w: g.concat(&d).reduced() },
                        ]
                    };
                    if questions.is_empty() {
                        continue;
                    }
                    let mut checks = Vec::new();
                    let mut parallel = Answer::No;
                    for q in questions {
                        let v = match &q {
                            Question::Nontrivial { w } => self.group().decide_word(w),
                            Question::DoubleCoset { h1, h2, w } => self.group().decide_double_coset(h1, h2, w),
                            Question::Member { h, w } => self.group().decide_membership(h, w),
                        };
                        // "Parallel" for this orientation: trivial word or double-coset member.
                        let here = match q {
                            Question::Nontrivial { .. } => v.answer.negate(),
                            _ => v.answer,
                        };
                        checks.push(GroupCheck { question: q, verdict: v });
                        match here {
                            Answer::Yes => {
                                parallel = Answer::Yes;
                                checks = vec![checks.pop().unwrap()];
                                break;
                            }
                            Answer::Unknown => parallel = Answer::Unknown,
                            Answer::No => {}
                        }
                    }
                    if parallel != Answer::Unknown {
                        resolved += 1;
                    }
                    out.push((Subject::Pair(p), parallel, EdgeCertificate::Group { checks }));
                }
                self.note(method, format!("{resolved} of {} pairs resolved by group computations", pairs.len()));
            }
        }
        out
    }
}

fn pending(n: usize) -> Vec<Option<(Answer, EdgeCertificate)>> {
    vec![None; n]
}

fn merge(
    slots: &mut [Option<(Answer, EdgeCertificate)>],
    index: impl Fn(Subject) -> Option<usize>,
    findings: Vec<Finding>,
    method: Method,
    evidence: &mut Vec<Evidence>,
) {
    for (subject, answer, cert) in findings {
        let Some(i) = index(subject) else { continue };
        if answer != Answer::Unknown {
            evidence.push(Evidence { method, subject, answer });
            if slots[i].is_none() {
                slots[i] = Some((answer, cert));
            }
        }
    }
}

fn unresolved(methods: &[Method]) -> (Answer, EdgeCertificate) {
    (Answer::Unknown, EdgeCertificate::BudgetExhausted { methods: methods.to_vec() })
}

fn run(tri: &Triangulation, opts: &CertifyOptions, strong: bool) -> Result<TriangulationVerdict> {
    let s = setup(tri)?;
    let n = s.skel.edge_count();
    let case = s.case;
    let mut engine = Engine { s, opts, lp: OnceLock::new(), geometry: OnceLock::new(), group: OnceLock::new(), log: Vec::new() };
    let mut methods = opts.methods.clone();
    methods.sort();
    methods.dedup();

    let mut evidence = Vec::new();
    let mut edges = pending(n);
    for &m in &methods {
        if !opts.exhaustive && edges.iter().all(Option::is_some) {
            break;
        }
        let found = engine.essential_findings(m);
        merge(&mut edges, |s| if let Subject::Edge(e) = s { Some(e) } else { None }, found, m, &mut evidence);
    }
    let edges: Vec<EdgeVerdict> = edges
        .into_iter()
        .enumerate()
        .map(|(edge, v)| {
            let (essential, certificate) = v.unwrap_or_else(|| unresolved(&methods));
            EdgeVerdict { edge, essential, certificate }
        })
        .collect();
    let essential = if edges.iter().any(|e| e.essential == Answer::No) {
        Answer::No
    } else if edges.iter().all(|e| e.essential == Answer::Yes) {
        Answer::Yes
    } else {
        Answer::Unknown
    };

    let mut pairs = Vec::new();
    let mut strongly = None;
    if strong {
        let all = pairs_of(n);
        let mut slots = pending(all.len());
        let index = |s: Subject| if let Subject::Pair(p) = s { all.iter().position(|q| *q == p) } else { None };
        for &m in &methods {
            let open: Vec<[usize; 2]> = if opts.exhaustive {
                all.clone()
            } else {
                all.iter().zip(&slots).filter(|(_, s)| s.is_none()).map(|(p, _)| *p).collect()
            };
            if open.is_empty() || (!opts.exhaustive && slots.iter().any(|s| matches!(s, Some((Answer::Yes, _))))) {
                break;
            }
            let found = engine.pair_findings(m, &open);
            merge(&mut slots, index, found, m, &mut evidence);
        }
        pairs = all
            .iter()
            .zip(slots)
            .map(|(&edges, v)| {
                let (parallel, certificate) = v.unwrap_or_else(|| unresolved(&methods));
                PairVerdict { edges, parallel, certificate }
            })
            .collect();
        strongly = Some(if essential == Answer::No || pairs.iter().any(|p| p.parallel == Answer::Yes) {
            Answer::No
        } else if essential == Answer::Yes && pairs.iter().all(|p| p.parallel == Answer::No) {
            Answer::Yes
        } else {
            Answer::Unknown
        });
    }

    let angle_witness = engine.lp.get().cloned().flatten().and_then(|lp| lp.witness);
    Ok(TriangulationVerdict {
        case,
        essential,
        strongly_essential: strongly,
        edges,
        pairs,
        angle_witness,
        log: engine.log,
        evidence,
    })
}

/// Per-edge essentiality verdicts.
pub fn certify_essential(tri: &Triangulation, opts: &CertifyOptions) -> Result<TriangulationVerdict> {
    run(tri, opts, false)
}

/// Essentiality plus a parallelism verdict for every pair of distinct edge classes.
pub fn certify_strongly_essential(tri: &Triangulation, opts: &CertifyOptions) -> Result<TriangulationVerdict> {
    run(tri, opts, true)
}

/// Re-checks every group certificate in a verdict against the presentation it
/// was computed in.
pub fn replay_group_certificates(tri: &Triangulation, verdict: &TriangulationVerdict, budget: &Budget) -> Result<bool> {
    let s = setup(tri)?;
    let ctx = GroupContext::new(&s.presentation, budget);
    let mut certs = verdict.edges.iter().map(|e| &e.certificate).chain(verdict.pairs.iter().map(|p| &p.certificate));
    Ok(certs.all(|c| match c {
        EdgeCertificate::Group { checks } => {
            checks.iter().all(|ch| ch.verdict.answer == Answer::Unknown || ctx.replay(&ch.question, &ch.verdict))
        }
        _ => true,
    }))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;
    use crate::angles::enumerate_taut;
    use crate::moves::{pillow_0_2, taut_pillow_sites};

    fn only(methods: &[Method]) -> CertifyOptions {
        CertifyOptions { methods: methods.to_vec(), budget: Budget::small(), ..CertifyOptions::default() }
    }

    #[test]
    fn figure_eight_is_strongly_essential_by_angles() {
        let v = certify_strongly_essential(&fixtures::figure_eight(), &CertifyOptions::default()).unwrap();
        assert_eq!(v.essential, Answer::Yes);
        assert_eq!(v.strongly_essential, Some(Answer::Yes));
        assert_eq!(v.headline_tags(), vec!["strict_angle".to_string()]);
        assert_eq!(v.to_string(), "yes (certificate: strict_angle)");
    }

    #[test]
    fn m136_is_essential_by_semi_angles() {
        let v = certify_essential(&fixtures::m136(), &CertifyOptions::default()).unwrap();
        assert_eq!(v.essential, Answer::Yes);
        assert!(v.edges.iter().all(|e| e.certificate == EdgeCertificate::SemiAngle));
    }

    #[test]
    fn m136_is_strongly_essential_by_geometry() {
        let opts = CertifyOptions { shapes: Some(fixtures::m136_shapes()), ..only(&Method::ALL) };
        let v = certify_strongly_essential(&fixtures::m136(), &opts).unwrap();
        assert_eq!(v.strongly_essential, Some(Answer::Yes), "{:#?}", v.log);
        assert_eq!(v.pairs.len(), 21);
        assert!(v.pairs.iter().all(|p| p.parallel == Answer::No));
    }

    #[test]
    fn quaternionic_edges_need_group_certificates() {
        let tri = fixtures::quaternionic();
        let v = certify_essential(&tri, &CertifyOptions::default()).unwrap();
        assert_eq!(v.case, Case::Closed);
        assert_eq!(v.essential, Answer::Yes);
        assert!(v.edges.iter().all(|e| e.certificate.tag() == "group(word)"));
        assert!(replay_group_certificates(&tri, &v, &Budget::default()).unwrap());
    }

    #[test]
    fn pillow_is_not_strongly_essential() {
        let tri = fixtures::m136();
        let taut = enumerate_taut(&tri, 1).unwrap().remove(0);
        let (edge, side) = taut_pillow_sites(&tri, &taut).unwrap()[0];
        let (p, rec) = pillow_0_2(&tri, edge, side).unwrap();
        let v = certify_strongly_essential(&p, &only(&Method::ALL)).unwrap();
        assert_eq!(v.strongly_essential, Some(Answer::No));
        let split = rec.split_edges.clone();
        let hit = v.pairs.iter().find(|q| q.parallel == Answer::Yes).unwrap();
        assert_eq!(hit.certificate.tag(), "pillow");
        let mut want = [split[0], split[1]];
        want.sort();
        assert_eq!(hit.edges, want);
    }

    #[test]
    fn methods_parse_in_precedence_order() {
        assert_eq!(parse_methods("group, angles").unwrap(), vec![Method::Angles, Method::Group]);
        assert!(parse_methods("magic").is_err());
        assert!(parse_methods("").is_err());
    }

    #[test]
    fn verdict_json_round_trips() {
        let v = certify_essential(&fixtures::figure_eight(), &CertifyOptions::default()).unwrap();
        let text = serde_json::to_string(&v).unwrap();
        let back: TriangulationVerdict = serde_json::from_str(&text).unwrap();
        assert_eq!(back, v);
        assert!(text.contains("\"essential\":\"yes\""));
    }
}
