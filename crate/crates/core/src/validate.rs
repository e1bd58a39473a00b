//! Validation and class membership of polygraphs.

use serde::Serialize;

use crate::expr::Expr;
use crate::freecat::{self, CellFault};
use crate::polygraph::Polygraph;

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Violation {
    pub cell: String,
    pub kind: CellFault,
    pub message: String,
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct ValidationReport {
    pub violations: Vec<Violation>,
}

impl ValidationReport {
    pub fn is_valid(&self) -> bool {
        self.violations.is_empty()
    }
}

pub fn validate(pg: &Polygraph) -> ValidationReport {
    let violations = freecat::cell_errors(pg)
        .into_iter()
        .map(|(c, kind, message)| Violation { cell: pg.name(c).to_string(), kind, message })
        .collect();
    ValidationReport { violations }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Hash, Serialize)]
pub struct ClassFlags {
    pub positive: bool,
    pub source_positive: bool,
    pub target_positive: bool,
    pub many_to_one: bool,
    pub globular: bool,
}

fn is_single_generator(pg: &Polygraph, e: &Expr, d: usize) -> bool {
    matches!(freecat::reduce(pg, e), Ok(Expr::Gen(c)) if pg.dim(c) == d)
}

fn is_identity_arrow(pg: &Polygraph, e: &Expr, d: usize) -> bool {
    freecat::is_identity(pg, e, d).unwrap_or(false)
}

/// Class flags of a valid polygraph. Cells whose boundaries fail to
/// normalize are treated as violating every flag.
pub fn classify(pg: &Polygraph) -> ClassFlags {
    let mut f =
        ClassFlags { positive: true, source_positive: true, target_positive: true, many_to_one: true, globular: true };
    for c in pg.ids() {
        let d = pg.dim(c);
        let Some((s, t)) = &pg.cell(c).boundary else { continue };
        let ok = freecat::well_formed(pg, s).is_ok() && freecat::well_formed(pg, t).is_ok();
        if !ok || is_identity_arrow(pg, s, d - 1) {
            f.source_positive = false;
        }
        if !ok || is_identity_arrow(pg, t, d - 1) {
            f.target_positive = false;
        }
        let single_t = ok && is_single_generator(pg, t, d - 1);
        if !single_t {
            f.many_to_one = false;
        }
        if !(single_t && is_single_generator(pg, s, d - 1)) {
            f.globular = false;
        }
    }
    f.positive = f.source_positive && f.target_positive;
    f
}
