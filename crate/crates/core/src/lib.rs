//! Finite polygraphs, the free ω-categories they generate, and the
//! plex/polyplex calculus of pasting diagrams.

pub mod analyzer;
pub mod corpus;
pub mod expr;
pub mod freecat;
pub mod iso;
pub mod morphism;
pub mod polygraph;
pub mod polyplex;
pub mod text;
pub mod validate;

pub use expr::{Expr, Position};
pub use freecat::{arrows_equal, Verdict};
pub use morphism::{factor_epi_mono, pushout, PolygraphMorphism};
pub use polygraph::{Cell, CellId, Polygraph, PolygraphBuilder};
pub use validate::{classify, validate, ClassFlags, ValidationReport};
