//! Whisker-sequence normal forms for arrows of dimension at most 3.
//!
//! A 1-arrow is a path of 1-cells. A 2-arrow is a source path followed by a
//! list of whiskered 2-cells composed along dimension 1. A 3-arrow is a list
//! of steps composed along dimension 2, where each step is a token list with
//! exactly one whiskered 3-cell (a "fat" token) among whiskered 2-cells. Fat
//! tokens behave like 2-cells whose boundaries are the 1-boundaries of the
//! 3-cell, so the same exchange moves apply inside a step.

use std::collections::HashMap;
use std::sync::{Arc, Mutex};

use crate::expr::Expr;
use crate::polygraph::{CellId, Polygraph};

use super::FreeCatError;

pub type Path = Vec<CellId>;

#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub struct Arrow1 {
    pub start: CellId,
    pub end: CellId,
    pub cells: Path,
}

impl Arrow1 {
    pub fn unit(p: CellId) -> Arrow1 {
        Arrow1 { start: p, end: p, cells: Vec::new() }
    }
}

#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub enum Label {
    Two(CellId),
    Three(CellId),
}

impl Label {
    pub fn cell(self) -> CellId {
        match self {
            Label::Two(c) | Label::Three(c) => c,
        }
    }
}

/// A cell whiskered by a path on each side.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub struct Tok {
    pub left: Path,
    pub label: Label,
    pub right: Path,
}

#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub struct Arrow2 {
    pub src: Arrow1,
    pub ws: Vec<Tok>,
}

/// Non-empty list of steps; `base` is the 1-source.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub struct Arrow3 {
    pub base: Arrow1,
    pub steps: Vec<Vec<Tok>>,
}

/// An arrow in whisker-sequence form, stored at its true dimension.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub enum Nf {
    D0(CellId),
    D1(Arrow1),
    D2(Arrow2),
    D3(Arrow3),
}

#[derive(Copy, Clone, PartialEq, Eq, Hash, Debug, PartialOrd, Ord)]
pub enum Sign {
    Minus,
    Plus,
}

impl Nf {
    pub fn dim(&self) -> usize {
        match self {
            Nf::D0(_) => 0,
            Nf::D1(_) => 1,
            Nf::D2(_) => 2,
            Nf::D3(_) => 3,
        }
    }

    pub(crate) fn from1(a: Arrow1) -> Nf {
        if a.cells.is_empty() {
            Nf::D0(a.start)
        } else {
            Nf::D1(a)
        }
    }

    pub(crate) fn from2(a: Arrow2) -> Nf {
        if a.ws.is_empty() {
            Nf::from1(a.src)
        } else {
            Nf::D2(a)
        }
    }

    pub(crate) fn lift1(&self) -> Option<Arrow1> {
        match self {
            Nf::D0(p) => Some(Arrow1::unit(*p)),
            Nf::D1(a) => Some(a.clone()),
            _ => None,
        }
    }

    pub(crate) fn lift2(&self) -> Option<Arrow2> {
        match self {
            Nf::D2(a) => Some(a.clone()),
            other => other.lift1().map(|src| Arrow2 { src, ws: Vec::new() }),
        }
    }

    /// Generators occurring in the form, including whiskers.
    pub fn cells(&self) -> Vec<CellId> {
        let mut out = Vec::new();
        let toks = |ws: &[Tok], out: &mut Vec<CellId>| {
            for t in ws {
                out.extend(&t.left);
                out.push(t.label.cell());
                out.extend(&t.right);
            }
        };
        match self {
            Nf::D0(p) => out.push(*p),
            Nf::D1(a) => out.extend(&a.cells),
            Nf::D2(a) => {
                out.extend(&a.src.cells);
                toks(&a.ws, &mut out);
            }
            Nf::D3(a) => {
                out.extend(&a.base.cells);
                for s in &a.steps {
                    toks(s, &mut out);
                }
            }
        }
        out
    }
}

/// Precomputed boundary data of one cell.
#[derive(Clone, Debug)]
pub(crate) enum CellForm {
    Point,
    Edge {
        s: CellId,
        t: CellId,
    },
    Face {
        s: Arrow1,
        t: Arrow1,
    },
    Volume {
        s: Arrow2,
        t: Arrow2,
        spath: Path,
        tpath: Path,
    },
    /// Cells above dimension 3: boundaries are checked but the cell cannot
    /// be used inside normal forms.
    Hyper,
    Invalid(CellFault, String),
}

/// Why a cell's boundary data is rejected.
#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash, serde::Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum CellFault {
    DanglingReference,
    DimensionError,
    NonParallel,
    IllFormed,
}

#[derive(Default)]
pub(crate) struct OrbitCache {
    pub(crate) orbits: HashMap<Vec<Tok>, Arc<Vec<Vec<Tok>>>>,
}

pub(crate) struct CellForms {
    pub(crate) forms: Vec<CellForm>,
    pub(crate) cache: Mutex<OrbitCache>,
}

#[derive(Clone, Copy)]
pub(crate) struct Ctx<'a> {
    pub pg: &'a Polygraph,
    pub forms: &'a [CellForm],
    pub cache: Option<&'a Mutex<OrbitCache>>,
}

pub(crate) fn cell_forms(pg: &Polygraph) -> Arc<CellForms> {
    pg.forms.get_or_init(|| Arc::new(build_forms(pg))).clone()
}

fn build_forms(pg: &Polygraph) -> CellForms {
    let mut forms: Vec<CellForm> = Vec::with_capacity(pg.len());
    for c in pg.ids() {
        let ctx = Ctx { pg, forms: &forms, cache: None };
        let form = compute_form(ctx, c).unwrap_or_else(|(k, m)| CellForm::Invalid(k, m));
        forms.push(form);
    }
    CellForms { forms, cache: Mutex::new(OrbitCache::default()) }
}

fn compute_form(ctx: Ctx<'_>, c: CellId) -> Result<CellForm, (CellFault, String)> {
    use CellFault::*;
    let cell = ctx.pg.cell(c);
    let d = cell.dim;
    let Some((s, t)) = &cell.boundary else {
        return if d == 0 { Ok(CellForm::Point) } else { Err((DimensionError, format!("{d}-cell without boundary"))) };
    };
    if d == 0 {
        return Err((DimensionError, "0-cell with a boundary".into()));
    }
    for g in s.generators().into_iter().chain(t.generators()) {
        if !ctx.pg.contains(g) {
            return Err((DanglingReference, format!("boundary refers to unknown cell {g}")));
        }
        if g.index() >= ctx.forms.len() {
            return Err((
                DanglingReference,
                format!("boundary refers to `{}`, which is not declared earlier", ctx.pg.name(g)),
            ));
        }
        if ctx.pg.dim(g) >= d {
            return Err((DimensionError, format!("boundary uses `{}` of dimension {}", ctx.pg.name(g), ctx.pg.dim(g))));
        }
    }
    let ns = nf(ctx, s).map_err(|e| (IllFormed, format!("source: {e}")))?;
    let nt = nf(ctx, t).map_err(|e| (IllFormed, format!("target: {e}")))?;
    let non_parallel = || (NonParallel, "non-parallel boundary".to_string());
    match d {
        1 => match (ns, nt) {
            (Nf::D0(s), Nf::D0(t)) => Ok(CellForm::Edge { s, t }),
            _ => unreachable!(),
        },
        2 => {
            let (s, t) = (ns.lift1().unwrap(), nt.lift1().unwrap());
            if s.start != t.start || s.end != t.end {
                return Err(non_parallel());
            }
            Ok(CellForm::Face { s, t })
        }
        3 => {
            let (s, t) = (ns.lift2().unwrap(), nt.lift2().unwrap());
            let (ts, tt) = (arrow2_tgt(ctx, &s), arrow2_tgt(ctx, &t));
            if s.src != t.src || ts != tt {
                return Err(non_parallel());
            }
            Ok(CellForm::Volume { spath: s.src.cells.clone(), tpath: ts.cells, s, t })
        }
        _ => {
            let parallel = (0..d - 1).all(|k| {
                [Sign::Minus, Sign::Plus].into_iter().all(|sg| {
                    let (a, b) = (boundary(ctx, &ns, k, sg), boundary(ctx, &nt, k, sg));
                    super::exchange::nf_equal(ctx, &a, &b) == super::Verdict::Equal
                })
            });
            if parallel {
                Ok(CellForm::Hyper)
            } else {
                Err(non_parallel())
            }
        }
    }
}

fn form<'a>(ctx: Ctx<'a>, c: CellId) -> Result<&'a CellForm, FreeCatError> {
    match ctx.forms.get(c.index()) {
        None => Err(FreeCatError::UnknownCell(c.to_string())),
        Some(CellForm::Invalid(_, msg)) => Err(FreeCatError::IllFormedCell(ctx.pg.name(c).to_string(), msg.clone())),
        Some(f) => Ok(f),
    }
}

/// Endpoints of a 1-cell.
pub(crate) fn edge(ctx: Ctx<'_>, c: CellId) -> (CellId, CellId) {
    match &ctx.forms[c.index()] {
        CellForm::Edge { s, t } => (*s, *t),
        _ => panic!("not a 1-cell"),
    }
}

/// 1-source and 1-target paths of a token label.
pub(crate) fn label_paths<'a>(ctx: Ctx<'a>, l: Label) -> (&'a [CellId], &'a [CellId]) {
    match &ctx.forms[l.cell().index()] {
        CellForm::Face { s, t } => (&s.cells, &t.cells),
        CellForm::Volume { spath, tpath, .. } => (spath, tpath),
        _ => panic!("label is not a 2- or 3-cell"),
    }
}

/// The 2-dimensional boundaries of a 3-cell.
pub(crate) fn volume(ctx: Ctx<'_>, c: CellId) -> (&Arrow2, &Arrow2) {
    match &ctx.forms[c.index()] {
        CellForm::Volume { s, t, .. } => (s, t),
        _ => panic!("not a 3-cell"),
    }
}

pub(crate) fn tok_output(ctx: Ctx<'_>, t: &Tok) -> Path {
    let (_, tp) = label_paths(ctx, t.label);
    [t.left.as_slice(), tp, t.right.as_slice()].concat()
}

pub(crate) fn arrow2_tgt(ctx: Ctx<'_>, a: &Arrow2) -> Arrow1 {
    match a.ws.last() {
        None => a.src.clone(),
        Some(t) => Arrow1 { start: a.src.start, end: a.src.end, cells: tok_output(ctx, t) },
    }
}

/// Replaces a fat token by the whiskered source or target of its 3-cell.
pub(crate) fn expand(ctx: Ctx<'_>, fat: &Tok, sign: Sign) -> Vec<Tok> {
    let (s, t) = volume(ctx, fat.label.cell());
    let a = if sign == Sign::Minus { s } else { t };
    a.ws.iter().map(|tok| whisker_tok(tok, &fat.left, &fat.right)).collect()
}

pub(crate) fn fat_index(step: &[Tok]) -> usize {
    step.iter().position(|t| matches!(t.label, Label::Three(_))).expect("step has a 3-cell")
}

pub(crate) fn step_boundary(ctx: Ctx<'_>, step: &[Tok], sign: Sign) -> Vec<Tok> {
    let f = fat_index(step);
    let mut out = step[..f].to_vec();
    out.extend(expand(ctx, &step[f], sign));
    out.extend_from_slice(&step[f + 1..]);
    out
}

pub(crate) fn arrow3_src(ctx: Ctx<'_>, a: &Arrow3) -> Arrow2 {
    Arrow2 { src: a.base.clone(), ws: step_boundary(ctx, &a.steps[0], Sign::Minus) }
}

pub(crate) fn arrow3_tgt(ctx: Ctx<'_>, a: &Arrow3) -> Arrow2 {
    Arrow2 { src: a.base.clone(), ws: step_boundary(ctx, a.steps.last().unwrap(), Sign::Plus) }
}

fn whisker_tok(t: &Tok, l: &[CellId], r: &[CellId]) -> Tok {
    Tok { left: [l, t.left.as_slice()].concat(), label: t.label, right: [t.right.as_slice(), r].concat() }
}

/// Structural boundary `π^sign_k`.
pub(crate) fn boundary(ctx: Ctx<'_>, x: &Nf, k: usize, sign: Sign) -> Nf {
    if k >= x.dim() {
        return x.clone();
    }
    let pick = |a: &Arrow1| if sign == Sign::Minus { a.start } else { a.end };
    match x {
        Nf::D0(_) => unreachable!(),
        Nf::D1(a) => Nf::D0(pick(a)),
        Nf::D2(a) => match k {
            0 => Nf::D0(pick(&a.src)),
            _ => Nf::from1(if sign == Sign::Minus { a.src.clone() } else { arrow2_tgt(ctx, a) }),
        },
        Nf::D3(a) => match k {
            0 => Nf::D0(pick(&a.base)),
            1 => {
                let src = arrow3_src(ctx, a);
                Nf::from1(if sign == Sign::Minus { src.src } else { arrow2_tgt(ctx, &src) })
            }
            _ => Nf::from2(if sign == Sign::Minus { arrow3_src(ctx, a) } else { arrow3_tgt(ctx, a) }),
        },
    }
}

pub(crate) fn nf(ctx: Ctx<'_>, e: &Expr) -> Result<Nf, FreeCatError> {
    match e {
        Expr::Gen(c) => {
            if !ctx.pg.contains(*c) {
                return Err(FreeCatError::UnknownCell(c.to_string()));
            }
            Ok(match form(ctx, *c)? {
                CellForm::Point => Nf::D0(*c),
                CellForm::Edge { s, t } => Nf::D1(Arrow1 { start: *s, end: *t, cells: vec![*c] }),
                CellForm::Face { s, .. } => Nf::D2(Arrow2 {
                    src: s.clone(),
                    ws: vec![Tok { left: vec![], label: Label::Two(*c), right: vec![] }],
                }),
                CellForm::Volume { s, .. } => Nf::D3(Arrow3 {
                    base: s.src.clone(),
                    steps: vec![vec![Tok { left: vec![], label: Label::Three(*c), right: vec![] }]],
                }),
                CellForm::Hyper => return Err(FreeCatError::UnsupportedDimension(ctx.pg.dim(*c))),
                CellForm::Invalid(..) => unreachable!(),
            })
        }
        Expr::Comp(k, a, b) => {
            let x = nf(ctx, a)?;
            let y = nf(ctx, b)?;
            compose(ctx, *k, x, y).map_err(|err| match err {
                FreeCatError::NotComposable { k, detail } if detail.is_empty() => {
                    FreeCatError::NotComposable { k, detail: describe_mismatch(ctx, a, b, k) }
                }
                other => other,
            })
        }
    }
}

fn describe_mismatch(ctx: Ctx<'_>, a: &Expr, b: &Expr, k: usize) -> String {
    format!("`{}` and `{}` do not match along dimension {k}", a.display(ctx.pg), b.display(ctx.pg))
}

/// `x #_k y`, checking composability.
pub(crate) fn compose(ctx: Ctx<'_>, k: usize, x: Nf, y: Nf) -> Result<Nf, FreeCatError> {
    let bx = boundary(ctx, &x, k, Sign::Plus);
    let by = boundary(ctx, &y, k, Sign::Minus);
    match super::exchange::nf_equal(ctx, &bx, &by) {
        super::Verdict::Equal => {}
        super::Verdict::Unequal => return Err(FreeCatError::NotComposable { k, detail: String::new() }),
        super::Verdict::Unknown => return Err(FreeCatError::Undecided),
    }
    let (dx, dy) = (x.dim(), y.dim());
    if dx <= k {
        return Ok(y);
    }
    if dy <= k {
        return Ok(x);
    }
    match k {
        0 => {
            if dx == 1 {
                let Nf::D1(p) = &x else { unreachable!() };
                Ok(whisker(ctx, &p.cells, y, &[]))
            } else if dy == 1 {
                let Nf::D1(p) = &y else { unreachable!() };
                Ok(whisker(ctx, &[], x, &p.cells))
            } else {
                let s1y = boundary(ctx, &y, 1, Sign::Minus).lift1().unwrap();
                let t1x = boundary(ctx, &x, 1, Sign::Plus).lift1().unwrap();
                let a = whisker(ctx, &[], x, &s1y.cells);
                let b = whisker(ctx, &t1x.cells, y, &[]);
                compose(ctx, 1, a, b)
            }
        }
        1 => match (x, y) {
            (Nf::D2(a), Nf::D2(b)) => Ok(Nf::D2(Arrow2 { src: a.src, ws: [a.ws, b.ws].concat() })),
            (Nf::D3(a), Nf::D2(b)) => Ok(Nf::D3(Arrow3 {
                base: a.base,
                steps: a.steps.into_iter().map(|s| [s, b.ws.clone()].concat()).collect(),
            })),
            (Nf::D2(a), Nf::D3(b)) => Ok(Nf::D3(Arrow3 {
                base: a.src,
                steps: b.steps.into_iter().map(|s| [a.ws.clone(), s].concat()).collect(),
            })),
            (x, y) => {
                let s2y = boundary(ctx, &y, 2, Sign::Minus);
                let t2x = boundary(ctx, &x, 2, Sign::Plus);
                let a = compose(ctx, 1, x, s2y)?;
                let b = compose(ctx, 1, t2x, y)?;
                compose(ctx, 2, a, b)
            }
        },
        2 => match (x, y) {
            (Nf::D3(a), Nf::D3(b)) => Ok(Nf::D3(Arrow3 { base: a.base, steps: [a.steps, b.steps].concat() })),
            _ => unreachable!(),
        },
        _ => unreachable!(),
    }
}

fn path_start(ctx: Ctx<'_>, p: &[CellId], default: CellId) -> CellId {
    p.first().map_or(default, |&c| edge(ctx, c).0)
}

fn path_end(ctx: Ctx<'_>, p: &[CellId], default: CellId) -> CellId {
    p.last().map_or(default, |&c| edge(ctx, c).1)
}

/// `l #_0 x #_0 r` for paths `l`, `r` whose endpoints already match.
pub(crate) fn whisker(ctx: Ctx<'_>, l: &[CellId], x: Nf, r: &[CellId]) -> Nf {
    let w1 = |a: Arrow1| Arrow1 {
        start: path_start(ctx, l, a.start),
        end: path_end(ctx, r, a.end),
        cells: [l, a.cells.as_slice(), r].concat(),
    };
    match x {
        Nf::D0(p) => Nf::from1(w1(Arrow1::unit(p))),
        Nf::D1(a) => Nf::D1(w1(a)),
        Nf::D2(a) => Nf::D2(Arrow2 { src: w1(a.src), ws: a.ws.iter().map(|t| whisker_tok(t, l, r)).collect() }),
        Nf::D3(a) => Nf::D3(Arrow3 {
            base: w1(a.base),
            steps: a.steps.iter().map(|s| s.iter().map(|t| whisker_tok(t, l, r)).collect()).collect(),
        }),
    }
}

fn path_expr(p: &[CellId]) -> Option<Expr> {
    Expr::chain(0, p.iter().map(|&c| Expr::gen(c)))
}

fn tok_expr(t: &Tok) -> Expr {
    let mut e = Expr::gen(t.label.cell());
    if let Some(l) = path_expr(&t.left) {
        e = Expr::comp(0, l, e);
    }
    if let Some(r) = path_expr(&t.right) {
        e = Expr::comp(0, e, r);
    }
    e
}

fn arrow1_expr(a: &Arrow1) -> Expr {
    path_expr(&a.cells).unwrap_or(Expr::gen(a.start))
}

/// An expression whose normal form is `x`.
pub fn realize(x: &Nf) -> Expr {
    match x {
        Nf::D0(p) => Expr::gen(*p),
        Nf::D1(a) => arrow1_expr(a),
        Nf::D2(a) => Expr::chain(1, a.ws.iter().map(tok_expr)).unwrap_or_else(|| arrow1_expr(&a.src)),
        Nf::D3(a) => {
            Expr::chain(2, a.steps.iter().map(|s| Expr::chain(1, s.iter().map(tok_expr)).expect("non-empty step")))
                .expect("non-empty 3-arrow")
        }
    }
}
