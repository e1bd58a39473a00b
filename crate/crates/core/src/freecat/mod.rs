//! Arrows of the free ω-category generated by a polygraph.

pub mod derivation;
pub(crate) mod exchange;
pub mod nf;
pub mod oracle;

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use serde::Serialize;

use crate::expr::Expr;
use crate::polygraph::{CellId, Polygraph};

pub use derivation::{check_derivation, Derivation, Step, StepError};
pub use nf::{realize, Arrow1, Arrow2, Arrow3, CellFault, Label, Nf, Sign, Tok};
pub use oracle::{oracle_equal, OracleOutcome, OracleReason};

use nf::{cell_forms, CellForm, Ctx};

/// Normal-form carrier returned by [`whisker_normal_form`].
pub type WhiskerSequence = Nf;

/// Three-valued answer of the equality procedures.
#[derive(Copy, Clone, PartialEq, Eq, Hash, Debug, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Verdict {
    Equal,
    Unequal,
    Unknown,
}

impl Verdict {
    pub fn from_bool(b: bool) -> Verdict {
        if b {
            Verdict::Equal
        } else {
            Verdict::Unequal
        }
    }
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Verdict::Equal => "equal",
            Verdict::Unequal => "unequal",
            Verdict::Unknown => "unknown",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum FreeCatError {
    #[error("unknown cell {0}")]
    UnknownCell(String),
    #[error("cell `{0}` is ill-formed: {1}")]
    IllFormedCell(String, String),
    #[error("composite along dimension {k} is not defined: {detail}")]
    NotComposable { k: usize, detail: String },
    #[error("could not decide whether a composite is defined (search budget exhausted)")]
    Undecided,
    #[error("dimension {0} is not supported (at most 3)")]
    UnsupportedDimension(usize),
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
}

/// Knobs for [`arrows_equal_with`].
#[derive(Clone, Debug)]
pub struct EqConfig {
    /// Size bound for the oracle fallback; `None` means largest input size + 8.
    pub oracle_bound: Option<usize>,
    pub oracle_max_states: usize,
}

impl Default for EqConfig {
    fn default() -> Self {
        EqConfig { oracle_bound: None, oracle_max_states: oracle::DEFAULT_MAX_STATES }
    }
}

pub fn default_oracle_bound(e: &Expr, f: &Expr) -> usize {
    e.size().max(f.size()) + 8
}

pub(crate) fn with_ctx<R>(pg: &Polygraph, f: impl FnOnce(Ctx<'_>) -> R) -> R {
    let forms = cell_forms(pg);
    f(Ctx { pg, forms: &forms.forms, cache: Some(&forms.cache) })
}

/// Errors found while precomputing cell boundaries, by cell.
pub(crate) fn cell_errors(pg: &Polygraph) -> Vec<(CellId, CellFault, String)> {
    let forms = cell_forms(pg);
    forms
        .forms
        .iter()
        .enumerate()
        .filter_map(|(i, f)| match f {
            CellForm::Invalid(k, m) => Some((CellId(i as u32), *k, m.clone())),
            _ => None,
        })
        .collect()
}

pub fn whisker_normal_form(pg: &Polygraph, e: &Expr) -> Result<WhiskerSequence, FreeCatError> {
    with_ctx(pg, |ctx| nf::nf(ctx, e))
}

/// The normal form with every token list replaced by a fixed
/// representative of its exchange class.
pub fn canonical_form(pg: &Polygraph, e: &Expr) -> Result<Nf, FreeCatError> {
    with_ctx(pg, |ctx| Ok(exchange::canonical_nf(ctx, &nf::nf(ctx, e)?)))
}

pub fn well_formed(pg: &Polygraph, e: &Expr) -> Result<(), FreeCatError> {
    whisker_normal_form(pg, e).map(|_| ())
}

/// Dimension of the arrow denoted by `e` (identities count at their own level).
pub fn dim(pg: &Polygraph, e: &Expr) -> Result<usize, FreeCatError> {
    whisker_normal_form(pg, e).map(|x| x.dim())
}

/// `π^sign_k(e)` as a reduced expression.
pub fn boundary(pg: &Polygraph, e: &Expr, k: usize, sign: Sign) -> Result<Expr, FreeCatError> {
    with_ctx(pg, |ctx| {
        let x = nf::nf(ctx, e)?;
        Ok(realize(&exchange::canonical_nf(ctx, &nf::boundary(ctx, &x, k, sign))))
    })
}

/// Normal form of `π^sign_k(e)`.
pub fn boundary_nf(pg: &Polygraph, e: &Expr, k: usize, sign: Sign) -> Result<Nf, FreeCatError> {
    with_ctx(pg, |ctx| {
        let x = nf::nf(ctx, e)?;
        Ok(exchange::canonical_nf(ctx, &nf::boundary(ctx, &x, k, sign)))
    })
}

/// Removes composites in which one side is an identity at the composition
/// level (`Comp(m, a, b)` with `m >= dim a` or `m >= dim b`).
pub fn reduce(pg: &Polygraph, e: &Expr) -> Result<Expr, FreeCatError> {
    with_ctx(pg, |ctx| reduce_in(ctx, e).map(|(r, _)| r))
}

fn reduce_in(ctx: Ctx<'_>, e: &Expr) -> Result<(Expr, usize), FreeCatError> {
    match e {
        Expr::Gen(_) => Ok((e.clone(), nf::nf(ctx, e)?.dim())),
        Expr::Comp(k, a, b) => {
            let (ra, da) = reduce_in(ctx, a)?;
            let (rb, db) = reduce_in(ctx, b)?;
            nf::nf(ctx, e)?;
            if *k >= da {
                Ok((rb, db))
            } else if *k >= db {
                Ok((ra, da))
            } else {
                Ok((Expr::comp(*k, ra, rb), da.max(db)))
            }
        }
    }
}

/// Occurrences of the cell `c` in `e`; `c` must have the dimension of `e`.
pub fn count(pg: &Polygraph, e: &Expr, c: CellId) -> Result<usize, FreeCatError> {
    let d = dim(pg, e)?;
    if !pg.contains(c) {
        return Err(FreeCatError::UnknownCell(c.to_string()));
    }
    if pg.dim(c) != d {
        return Err(FreeCatError::DimensionMismatch { expected: d, found: pg.dim(c) });
    }
    Ok(reduce(pg, e)?.generators().into_iter().filter(|&g| g == c).count())
}

/// Occurrence counts of every generator of top dimension.
pub fn count_vector(pg: &Polygraph, e: &Expr) -> Result<BTreeMap<CellId, usize>, FreeCatError> {
    let d = dim(pg, e)?;
    let mut out = BTreeMap::new();
    for g in reduce(pg, e)?.generators() {
        if pg.dim(g) == d {
            *out.entry(g).or_insert(0) += 1;
        }
    }
    Ok(out)
}

/// True iff no `n`-dimensional generator occurs in (the reduced form of) `e`.
pub fn is_identity(pg: &Polygraph, e: &Expr, n: usize) -> Result<bool, FreeCatError> {
    Ok(reduce(pg, e)?.generators().into_iter().all(|g| pg.dim(g) != n))
}

/// Cells of the smallest sub-polygraph over which `e` is well-formed.
pub fn support_cells(pg: &Polygraph, e: &Expr) -> Result<BTreeSet<CellId>, FreeCatError> {
    well_formed(pg, e)?;
    let mut out = BTreeSet::new();
    for g in e.generators() {
        pg.cell_closure(g, &mut out);
    }
    Ok(out)
}

/// The support as a polygraph, with its inclusion (list of original ids).
pub fn support(pg: &Polygraph, e: &Expr) -> Result<(Polygraph, Vec<CellId>), FreeCatError> {
    Ok(pg.restrict(&support_cells(pg, e)?))
}

/// Whether some 2- or 3-cell has an identity as source or target.
pub(crate) fn has_degenerate_cells(pg: &Polygraph) -> bool {
    let forms = cell_forms(pg);
    forms.forms.iter().any(|f| match f {
        CellForm::Face { s, t } => s.cells.is_empty() || t.cells.is_empty(),
        CellForm::Volume { s, t, .. } => s.ws.is_empty() || t.ws.is_empty() || s.src.cells.is_empty(),
        _ => false,
    })
}

pub fn arrows_equal(pg: &Polygraph, e: &Expr, f: &Expr) -> Result<Verdict, FreeCatError> {
    arrows_equal_with(pg, e, f, &EqConfig::default())
}

/// Decides equality by normal forms and exchange search. When the search
/// is not known to be complete for the input, falls back to the oracle;
/// oracle answers are only trusted when they are certificates.
pub fn arrows_equal_with(pg: &Polygraph, e: &Expr, f: &Expr, cfg: &EqConfig) -> Result<Verdict, FreeCatError> {
    let outcome = with_ctx(pg, |ctx| -> Result<Option<Verdict>, FreeCatError> {
        let x = nf::nf(ctx, e)?;
        let y = nf::nf(ctx, f)?;
        Ok(match (&x, &y) {
            (Nf::D3(a), Nf::D3(b)) => match exchange::eq3(ctx, a, b) {
                Ok(Verdict::Unknown) => None,
                Ok(v) => Some(v),
                Err(exchange::StepSearch::Exhausted) if !has_degenerate_cells(pg) => Some(Verdict::Unequal),
                Err(_) => None,
            },
            _ => match exchange::nf_equal(ctx, &x, &y) {
                Verdict::Unknown => None,
                v => Some(v),
            },
        })
    })?;
    if let Some(v) = outcome {
        return Ok(v);
    }
    let bound = cfg.oracle_bound.unwrap_or_else(|| default_oracle_bound(e, f));
    let out = oracle::oracle_equal_with(pg, e, f, bound, cfg.oracle_max_states)?;
    Ok(match out.reason {
        OracleReason::Reached => Verdict::Equal,
        OracleReason::Invariant => Verdict::Unequal,
        _ => Verdict::Unknown,
    })
}
