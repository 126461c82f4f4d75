//! Ideal and closed triangulations of 3-manifolds: skeleta, moves, angle
//! structures, fundamental groups, shape parameters and essentiality verdicts.

pub mod angles;
pub mod certify;
pub mod error;
pub mod fixtures;
pub mod format;
pub mod gaussian;
pub mod geom;
pub mod isomorphism;
pub mod moves;
pub mod perm;
pub mod pi1;
pub mod skeleton;
pub mod triangulation;

pub use error::{Error, ParseError, Result};
pub use perm::Perm4;
pub use triangulation::{Gluing, Mode, Triangulation, ValidationReport, Violation};
