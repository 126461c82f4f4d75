//! Bundled triangulations used by tests, examples and the command line.

use crate::format::parse_document;
use crate::gaussian::GaussianRational;
use crate::triangulation::Triangulation;

pub const M136: &str = include_str!("../fixtures/m136.tri");
pub const FIGURE_EIGHT: &str = include_str!("../fixtures/fig8.tri");
pub const QUATERNIONIC: &str = include_str!("../fixtures/quaternionic.tri");

fn load(text: &str, label: &str) -> Triangulation {
    let mut t = parse_document(text).expect("bundled fixture parses").triangulation;
    t.label = Some(label.to_string());
    t
}

/// Seven ideal tetrahedra; one torus cusp.
pub fn m136() -> Triangulation {
    load(M136, "m136")
}

/// Exact shapes listed alongside the m136 gluings.
pub fn m136_shapes() -> Vec<GaussianRational> {
    parse_document(M136).expect("bundled fixture parses").shapes.expect("shape column present")
}

/// The standard two-tetrahedron triangulation of the figure-eight knot complement.
pub fn figure_eight() -> Triangulation {
    load(FIGURE_EIGHT, "figure-eight")
}

/// A two-tetrahedron, one-vertex triangulation of S³/Q₈.
pub fn quaternionic() -> Triangulation {
    load(QUATERNIONIC, "quaternionic space")
}

/// Every bundled triangulation with its name.
pub fn all() -> Vec<(&'static str, Triangulation)> {
    vec![("m136", m136()), ("figure-eight", figure_eight()), ("quaternionic", quaternionic())]
}
