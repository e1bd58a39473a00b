//! Polyplexes (pasting diagrams): polygraphs generated by a distinguished
//! universal arrow. Plexes are glued from parallel polyplexes, composites are
//! pushouts along shared boundaries, and expressions evaluate to labeled
//! polyplexes.

use std::collections::{BTreeSet, HashMap, VecDeque};
use std::fmt::Write as _;
use std::sync::{Arc, Mutex};

use crate::expr::Expr;
use crate::freecat::{self, FreeCatError, Sign, Verdict};
use crate::iso::{for_each_isomorphism, IsoSearch};
use crate::morphism::{pushout_with, Naming, PolygraphMorphism, PushoutError};
use crate::polygraph::{Cell, CellId, Polygraph};
use crate::text::write_document;
use crate::validate::{classify, validate};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum PolyplexError {
    #[error(transparent)]
    FreeCat(#[from] FreeCatError),
    #[error("cell `{0}` is not in the support of the universal arrow")]
    NotGenerated(String),
    #[error("the polygraph has dimension {pg} but the universal arrow has dimension {arrow}")]
    Dimension { pg: usize, arrow: usize },
    #[error("source and target are not parallel: {0}")]
    NotParallel(String),
    #[error("boundary mismatch: {0}")]
    BoundaryMismatch(String),
    #[error("could not decide equality of universal arrows")]
    Undecided,
    #[error("gluing failed: {0}")]
    Gluing(String),
}

impl From<PushoutError> for PolyplexError {
    fn from(e: PushoutError) -> Self {
        PolyplexError::Gluing(e.to_string())
    }
}

type BoundaryCache = Arc<Mutex<HashMap<(usize, Sign), Arc<LabeledDiagram>>>>;

/// A polygraph together with an arrow of its free ω-category that
/// generates it.
#[derive(Clone, Debug)]
pub struct Polyplex {
    pg: Arc<Polygraph>,
    universal: Expr,
    dim: usize,
    boundaries: BoundaryCache,
}

/// A polyplex with a morphism of its underlying polygraph into an ambient
/// polygraph.
#[derive(Clone, Debug)]
pub struct LabeledDiagram {
    pub plex: Polyplex,
    pub labeling: PolygraphMorphism,
    /// False when the ambient class is not known to be good or some gluing
    /// step had more than one admissible matching.
    pub unique: bool,
}

/// Automorphisms of a polyplex fixing its universal arrow.
#[derive(Clone, Debug, Default)]
pub struct AutGroup {
    pub elements: Vec<PolygraphMorphism>,
    /// Candidates for which equality of universal arrows was inconclusive.
    pub unresolved: Vec<PolygraphMorphism>,
}

impl AutGroup {
    pub fn order(&self) -> usize {
        self.elements.len()
    }

    pub fn is_trivial(&self) -> bool {
        self.elements.len() == 1 && self.unresolved.is_empty()
    }
}

#[derive(Copy, Clone, Debug, PartialEq, Eq)]
pub enum Location {
    SourceSide,
    TargetOf(CellId),
    Nowhere,
}

/// Every place a cell of codimension at least one appears.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CellLocations {
    pub in_source: bool,
    pub targets: Vec<CellId>,
}

impl Polyplex {
    pub fn new(pg: Arc<Polygraph>, universal: Expr) -> Result<Polyplex, PolyplexError> {
        let dim = freecat::dim(&pg, &universal)?;
        let pg_dim = pg.max_dim().unwrap_or(0);
        if pg_dim != dim {
            return Err(PolyplexError::Dimension { pg: pg_dim, arrow: dim });
        }
        let supp = freecat::support_cells(&pg, &universal)?;
        if let Some(c) = pg.ids().find(|c| !supp.contains(c)) {
            return Err(PolyplexError::NotGenerated(pg.name(c).to_string()));
        }
        Ok(Polyplex { pg, universal, dim, boundaries: Default::default() })
    }

    /// The single-point polyplex.
    pub fn point(name: &str) -> Polyplex {
        let pg = Polygraph::from_cells(vec![Cell { name: name.to_string(), dim: 0, boundary: None }])
            .expect("one cell has a unique name");
        Polyplex { pg: Arc::new(pg), universal: Expr::gen(CellId(0)), dim: 0, boundaries: Default::default() }
    }

    pub fn pg(&self) -> &Arc<Polygraph> {
        &self.pg
    }

    pub fn universal(&self) -> &Expr {
        &self.universal
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// The polyplex representing the `k`-boundary arrow, labeled into this
    /// polyplex. For `k >= dim` this is the polyplex itself.
    pub fn boundary(&self, k: usize, sign: Sign) -> Result<Arc<LabeledDiagram>, PolyplexError> {
        if k >= self.dim {
            let labeling = PolygraphMorphism::identity(self.pg.clone());
            return Ok(Arc::new(LabeledDiagram { plex: self.detached(), labeling, unique: true }));
        }
        if let Some(b) = self.boundaries.lock().expect("cache lock").get(&(k, sign)) {
            return Ok(b.clone());
        }
        let arrow = freecat::boundary(&self.pg, &self.universal, k, sign)?;
        let b = Arc::new(eval(&self.pg, &arrow)?);
        self.boundaries.lock().expect("cache lock").insert((k, sign), b.clone());
        Ok(b)
    }

    /// The boundary arrow itself, as an expression over `pg`.
    pub fn boundary_arrow(&self, k: usize, sign: Sign) -> Result<Expr, PolyplexError> {
        if k >= self.dim {
            return Ok(self.universal.clone());
        }
        Ok(freecat::boundary(&self.pg, &self.universal, k, sign)?)
    }

    fn detached(&self) -> Polyplex {
        Polyplex { boundaries: Default::default(), ..self.clone() }
    }

    /// Cells re-indexed by dimension, then by first use in a left-to-right
    /// traversal of the universal arrow. Returns the old-to-new id map.
    pub fn canonical(&self) -> (Polyplex, Vec<CellId>) {
        fn visit(pg: &Polygraph, c: CellId, seen: &mut Vec<bool>, order: &mut Vec<CellId>) {
            if seen[c.index()] {
                return;
            }
            seen[c.index()] = true;
            order.push(c);
            if let Some((s, t)) = &pg.cell(c).boundary {
                for g in s.generators().into_iter().chain(t.generators()) {
                    visit(pg, g, seen, order);
                }
            }
        }
        let mut seen = vec![false; self.pg.len()];
        let mut order = Vec::with_capacity(self.pg.len());
        for g in self.universal.generators() {
            visit(&self.pg, g, &mut seen, &mut order);
        }
        order.sort_by_key(|&c| self.pg.dim(c));
        let (pg, renum) = self.pg.reorder(&order);
        let universal = self.universal.map_cells(&|c| renum[c.index()]);
        let plex = Polyplex { pg: Arc::new(pg), universal, dim: self.dim, boundaries: Default::default() };
        (plex, renum)
    }

    /// Polygraph block followed by the `universal = ...` line.
    pub fn to_text(&self) -> String {
        write_document(&self.pg, &self.universal)
    }
}

impl LabeledDiagram {
    /// The labeling applied to the universal arrow.
    pub fn labeled_arrow(&self) -> Expr {
        self.labeling.apply_expr(self.plex.universal())
    }

    /// Polyplex text followed by one `label <cell> -> <cell>` line per cell.
    pub fn to_text(&self) -> String {
        let mut out = self.plex.to_text();
        for c in self.plex.pg.ids() {
            let img = self.labeling.apply(c);
            let _ = writeln!(out, "label {} -> {}", self.plex.pg.name(c), self.labeling.target.name(img));
        }
        out
    }
}

/// Isomorphisms of underlying polygraphs carrying one universal arrow to
/// the other, split by whether equality was established.
#[derive(Clone, Debug, Default)]
pub struct IsoMatches {
    pub found: Vec<PolygraphMorphism>,
    pub unresolved: Vec<PolygraphMorphism>,
}

pub fn matching_isomorphisms(p: &Polyplex, q: &Polyplex, opts: &IsoSearch<'_>) -> Result<IsoMatches, PolyplexError> {
    let mut out = IsoMatches::default();
    let mut err = None;
    let limit = opts.limit;
    let inner = IsoSearch { pinned: opts.pinned, allow: opts.allow, limit: None };
    for_each_isomorphism(&p.pg, &q.pg, &inner, &mut |m| {
        match freecat::arrows_equal(&q.pg, &m.apply_expr(&p.universal), &q.universal) {
            Ok(Verdict::Equal) => out.found.push(m),
            Ok(Verdict::Unknown) => out.unresolved.push(m),
            Ok(Verdict::Unequal) => {}
            Err(e) => {
                err = Some(e);
                return false;
            }
        }
        limit.is_none_or(|l| out.found.len() < l)
    });
    match err {
        Some(e) => Err(e.into()),
        None => Ok(out),
    }
}

/// First isomorphism (in search order) of underlying polygraphs that carries
/// the universal arrow of `p` to that of `q`.
pub fn polyplexes_isomorphic(p: &Polyplex, q: &Polyplex) -> Result<Option<PolygraphMorphism>, PolyplexError> {
    let m = matching_isomorphisms(p, q, &IsoSearch { limit: Some(1), ..Default::default() })?;
    match m.found.into_iter().next() {
        Some(f) => Ok(Some(f)),
        None if !m.unresolved.is_empty() => Err(PolyplexError::Undecided),
        None => Ok(None),
    }
}

/// Isomorphisms between two diagrams over the same ambient polygraph that
/// commute with the labelings.
pub fn labeled_isomorphisms(a: &LabeledDiagram, b: &LabeledDiagram) -> Result<IsoMatches, PolyplexError> {
    let allow = |c: CellId, d: CellId| a.labeling.apply(c) == b.labeling.apply(d);
    matching_isomorphisms(&a.plex, &b.plex, &IsoSearch { allow: Some(&allow), ..Default::default() })
}

/// Cells fixed by every automorphism when the class is good: those of the
/// source and target of the universal arrow.
fn boundary_cells(p: &Polyplex) -> Result<BTreeSet<CellId>, PolyplexError> {
    let mut out = BTreeSet::new();
    if p.dim == 0 {
        return Ok(out);
    }
    for sign in [Sign::Minus, Sign::Plus] {
        out.extend(freecat::support_cells(&p.pg, &p.boundary_arrow(p.dim - 1, sign)?)?);
    }
    Ok(out)
}

/// All automorphisms of the underlying polygraph fixing the universal arrow.
/// For source- or target-positive polygraphs the cells of the boundary of
/// the universal arrow are pinned; otherwise the search is unrestricted.
pub fn automorphism_group(p: &Polyplex) -> Result<AutGroup, PolyplexError> {
    let flags = classify(&p.pg);
    let pinned: Vec<(CellId, CellId)> = if flags.source_positive || flags.target_positive {
        boundary_cells(p)?.into_iter().map(|c| (c, c)).collect()
    } else {
        Vec::new()
    };
    let m = matching_isomorphisms(p, p, &IsoSearch { pinned: &pinned, ..Default::default() })?;
    Ok(AutGroup { elements: m.found, unresolved: m.unresolved })
}

/// The admissible matchings of two boundary diagrams. With labels, only
/// matchings compatible with the composite labelings are considered.
/// Returns the first matching and whether it was the only one.
fn match_boundaries(
    a: &LabeledDiagram,
    la: Option<&PolygraphMorphism>,
    b: &LabeledDiagram,
    lb: Option<&PolygraphMorphism>,
) -> Result<Option<(PolygraphMorphism, bool)>, PolyplexError> {
    let allow = |c: CellId, d: CellId| match (la, lb) {
        (Some(la), Some(lb)) => la.apply(a.labeling.apply(c)) == lb.apply(b.labeling.apply(d)),
        _ => true,
    };
    let m = matching_isomorphisms(
        &a.plex,
        &b.plex,
        &IsoSearch { allow: Some(&allow), limit: Some(2), ..Default::default() },
    )?;
    let unique = m.found.len() == 1 && m.unresolved.is_empty();
    match m.found.into_iter().next() {
        Some(f) => Ok(Some((f, unique))),
        None if !m.unresolved.is_empty() => Err(PolyplexError::Undecided),
        None => Ok(None),
    }
}

fn mismatch(a: &Polyplex, b: &Polyplex) -> String {
    let (ca, cb) = (a.pg.counts_by_dim(), b.pg.counts_by_dim());
    if ca != cb {
        let d = (0..ca.len().max(cb.len())).find(|&d| ca.get(d) != cb.get(d)).unwrap_or(0);
        return format!(
            "{} vs {} cells of dimension {d} (`{}` against `{}`)",
            ca.get(d).copied().unwrap_or(0),
            cb.get(d).copied().unwrap_or(0),
            a.universal.display(&a.pg),
            b.universal.display(&b.pg)
        );
    }
    format!("no isomorphism carries `{}` to `{}`", a.universal.display(&a.pg), b.universal.display(&b.pg))
}

/// Disjoint union; cells of `b` are shifted by `a.len()`.
fn coproduct(a: &Polygraph, b: &Polygraph) -> Polygraph {
    let shift = a.len() as u32;
    let mut cells: Vec<Cell> = a.cells().iter().map(|c| Cell { name: format!("0.{}", c.name), ..c.clone() }).collect();
    cells.extend(b.cells().iter().map(|c| Cell {
        name: format!("1.{}", c.name),
        dim: c.dim,
        boundary: c.boundary.as_ref().map(|(s, t)| {
            let f = |x: CellId| CellId(x.0 + shift);
            (s.map_cells(&f), t.map_cells(&f))
        }),
    }));
    Polygraph::from_cells(cells).expect("prefixed names are unique")
}

/// Labels of a glued polygraph from labels of its parts.
fn merge_labels(
    pg: &Arc<Polygraph>,
    ambient: &Arc<Polygraph>,
    parts: &[(&PolygraphMorphism, &PolygraphMorphism)],
) -> Result<Vec<Option<CellId>>, PolyplexError> {
    let mut lab: Vec<Option<CellId>> = vec![None; pg.len()];
    for (into, label) in parts {
        for c in into.source.ids() {
            let n = into.apply(c);
            let l = label.apply(c);
            match lab[n.index()] {
                Some(prev) if prev != l => {
                    return Err(PolyplexError::Gluing(format!(
                        "`{}` is labeled by both `{}` and `{}`",
                        pg.name(n),
                        ambient.name(prev),
                        ambient.name(l)
                    )))
                }
                _ => lab[n.index()] = Some(l),
            }
        }
    }
    Ok(lab)
}

fn finish_labels(pg: &Arc<Polygraph>, ambient: &Arc<Polygraph>, lab: Vec<Option<CellId>>) -> PolygraphMorphism {
    let map = lab.into_iter().map(|c| c.expect("every glued cell comes from a part")).collect();
    let m = PolygraphMorphism::unchecked(pg.clone(), ambient.clone(), map);
    debug_assert!(m.check().is_ok(), "merged labeling is a morphism");
    m
}

struct Composite {
    plex: Polyplex,
    left: PolygraphMorphism,
    right: PolygraphMorphism,
    unique: bool,
}

fn compose_inner(
    p: &Polyplex,
    lp: Option<&PolygraphMorphism>,
    k: usize,
    q: &Polyplex,
    lq: Option<&PolygraphMorphism>,
) -> Result<Composite, PolyplexError> {
    let bp = p.boundary(k, Sign::Plus)?;
    let bq = q.boundary(k, Sign::Minus)?;
    let Some((theta, unique)) = match_boundaries(&bp, lp, &bq, lq)? else {
        return Err(PolyplexError::BoundaryMismatch(mismatch(&bp.plex, &bq.plex)));
    };
    let g = theta.then(&bq.labeling);
    let (pg, left, right) = pushout_with(&bp.labeling, &g, Naming::KeepLeft)?;
    let universal = Expr::comp(k, left.apply_expr(&p.universal), right.apply_expr(&q.universal));
    let plex = Polyplex::new(pg, universal)?;
    Ok(Composite { plex, left, right, unique: unique && bp.unique && bq.unique })
}

/// Composite of two polyplexes along dimension `k`, glued over the shared
/// boundary polyplex.
pub fn compose(p: &Polyplex, k: usize, q: &Polyplex) -> Result<Polyplex, PolyplexError> {
    Ok(compose_inner(p, None, k, q, None)?.plex)
}

/// Like [`compose`], also returning the maps of `p` and `q` into the
/// composite.
pub fn compose_with_inclusions(
    p: &Polyplex,
    k: usize,
    q: &Polyplex,
) -> Result<(Polyplex, PolygraphMorphism, PolygraphMorphism), PolyplexError> {
    let c = compose_inner(p, None, k, q, None)?;
    Ok((c.plex, c.left, c.right))
}

fn fresh_name(pg: &Polygraph, name: &str) -> String {
    let mut n = name.to_string();
    while pg.lookup(&n).is_some() {
        n.push('\'');
    }
    n
}

fn make_plex_inner(
    src: &Polyplex,
    ls: Option<&PolygraphMorphism>,
    tgt: &Polyplex,
    lt: Option<&PolygraphMorphism>,
    name: &str,
    dim: usize,
) -> Result<Composite, PolyplexError> {
    if dim == 0 || src.dim >= dim || tgt.dim >= dim {
        return Err(PolyplexError::NotParallel(format!(
            "a {dim}-cell needs source and target of dimension below {dim} (got {} and {})",
            src.dim, tgt.dim
        )));
    }
    let (glue, unique) = if dim == 1 {
        let empty = Arc::new(Polygraph::empty());
        let f = PolygraphMorphism::unchecked(empty.clone(), src.pg.clone(), vec![]);
        let g = PolygraphMorphism::unchecked(empty, tgt.pg.clone(), vec![]);
        ((f, g), true)
    } else {
        let mut unique = true;
        let mut sides = Vec::new();
        for sign in [Sign::Minus, Sign::Plus] {
            let a = src.boundary(dim - 2, sign)?;
            let b = tgt.boundary(dim - 2, sign)?;
            let Some((theta, u)) = match_boundaries(&a, ls, &b, lt)? else {
                return Err(PolyplexError::NotParallel(mismatch(&a.plex, &b.plex)));
            };
            unique &= u && a.unique && b.unique;
            sides.push((a, theta.then(&b.labeling)));
        }
        let (m, p) = (&sides[0], &sides[1]);
        let r = Arc::new(coproduct(&m.0.plex.pg, &p.0.plex.pg));
        let f_map = m.0.labeling.map.iter().chain(&p.0.labeling.map).copied().collect();
        let g_map = m.1.map.iter().chain(&p.1.map).copied().collect();
        let f = PolygraphMorphism::unchecked(r.clone(), src.pg.clone(), f_map);
        let g = PolygraphMorphism::unchecked(r, tgt.pg.clone(), g_map);
        ((f, g), unique)
    };
    let (glued, left, right) =
        pushout_with(&glue.0, &glue.1, Naming::KeepLeft).map_err(|e| PolyplexError::NotParallel(e.to_string()))?;
    let mut cells = glued.cells().to_vec();
    let top = CellId(cells.len() as u32);
    cells.push(Cell {
        name: fresh_name(&glued, name),
        dim,
        boundary: Some((left.apply_expr(&src.universal), right.apply_expr(&tgt.universal))),
    });
    let pg = Polygraph::from_cells(cells).map_err(|e| PolyplexError::Gluing(e.to_string()))?;
    if let Some(v) = validate(&pg).violations.first() {
        return Err(PolyplexError::NotParallel(format!("{}: {}", v.cell, v.message)));
    }
    let pg = Arc::new(pg);
    let left = PolygraphMorphism::unchecked(src.pg.clone(), pg.clone(), left.map);
    let right = PolygraphMorphism::unchecked(tgt.pg.clone(), pg.clone(), right.map);
    let plex = Polyplex::new(pg, Expr::gen(top))?;
    Ok(Composite { plex, left, right, unique })
}

/// The plex with one fresh `dim`-cell `name` from the universal arrow of
/// `src` to that of `tgt`, glued along their `(dim - 2)`-boundaries.
pub fn make_plex(src: &Polyplex, tgt: &Polyplex, name: &str, dim: usize) -> Result<Polyplex, PolyplexError> {
    Ok(make_plex_inner(src, None, tgt, None, name, dim)?.plex)
}

/// Evaluates an expression over `x` to the polyplex it factors through.
/// The result is flagged non-unique unless `x` is source- or
/// target-positive and every gluing step was forced.
pub fn eval(x: &Arc<Polygraph>, e: &Expr) -> Result<LabeledDiagram, PolyplexError> {
    freecat::well_formed(x, e)?;
    let flags = classify(x);
    let mut ev = Evaluator { x, plexes: HashMap::new() };
    let mut out = ev.expr(e)?;
    out.unique &= flags.source_positive || flags.target_positive;
    Ok(out)
}

struct Evaluator<'a> {
    x: &'a Arc<Polygraph>,
    plexes: HashMap<CellId, LabeledDiagram>,
}

impl Evaluator<'_> {
    fn expr(&mut self, e: &Expr) -> Result<LabeledDiagram, PolyplexError> {
        match e {
            Expr::Gen(c) => self.generator(*c),
            Expr::Comp(k, a, b) => {
                let la = self.expr(a)?;
                let lb = self.expr(b)?;
                let c = compose_inner(&la.plex, Some(&la.labeling), *k, &lb.plex, Some(&lb.labeling))?;
                let lab = merge_labels(c.plex.pg(), self.x, &[(&c.left, &la.labeling), (&c.right, &lb.labeling)])?;
                let labeling = finish_labels(c.plex.pg(), self.x, lab);
                Ok(LabeledDiagram { plex: c.plex, labeling, unique: c.unique && la.unique && lb.unique })
            }
        }
    }

    fn generator(&mut self, c: CellId) -> Result<LabeledDiagram, PolyplexError> {
        if let Some(d) = self.plexes.get(&c) {
            return Ok(d.clone());
        }
        let x = self.x;
        let out = match &x.cell(c).boundary {
            None => {
                let plex = Polyplex::point(x.name(c));
                let labeling = PolygraphMorphism::unchecked(plex.pg.clone(), x.clone(), vec![c]);
                LabeledDiagram { plex, labeling, unique: true }
            }
            Some((s, t)) => {
                let ls = self.expr(s)?;
                let lt = self.expr(t)?;
                let m =
                    make_plex_inner(&ls.plex, Some(&ls.labeling), &lt.plex, Some(&lt.labeling), x.name(c), x.dim(c))?;
                let mut lab = merge_labels(m.plex.pg(), x, &[(&m.left, &ls.labeling), (&m.right, &lt.labeling)])?;
                let top = lab.len() - 1;
                lab[top] = Some(c);
                let labeling = finish_labels(m.plex.pg(), x, lab);
                LabeledDiagram { plex: m.plex, labeling, unique: m.unique && ls.unique && lt.unique }
            }
        };
        self.plexes.insert(c, out.clone());
        Ok(out)
    }
}

fn appears(pg: &Polygraph, e: &Expr, c: CellId) -> Result<bool, PolyplexError> {
    Ok(freecat::support_cells(pg, e)?.contains(&c))
}

/// Where `c` appears: in the source boundary of the universal arrow and/or
/// in the targets of top-dimensional cells.
pub fn cell_locations(p: &Polyplex, c: CellId) -> Result<CellLocations, PolyplexError> {
    if p.dim == 0 {
        return Ok(CellLocations { in_source: false, targets: vec![] });
    }
    let n = p.dim - 1;
    let in_source = appears(&p.pg, &p.boundary_arrow(n, Sign::Minus)?, c)?;
    let mut targets = Vec::new();
    for x in p.pg.cells_of_dim(n + 1) {
        if let Some(t) = p.pg.tgt(x) {
            if appears(&p.pg, t, c)? {
                targets.push(x);
            }
        }
    }
    Ok(CellLocations { in_source, targets })
}

pub fn locate_cell(p: &Polyplex, c: CellId) -> Result<Location, PolyplexError> {
    let l = cell_locations(p, c)?;
    Ok(if l.in_source {
        Location::SourceSide
    } else {
        l.targets.first().map_or(Location::Nowhere, |&x| Location::TargetOf(x))
    })
}

fn n_cells(pg: &Polygraph, e: &Expr, n: usize) -> Result<BTreeSet<CellId>, PolyplexError> {
    Ok(freecat::support_cells(pg, e)?.into_iter().filter(|&c| pg.dim(c) == n).collect())
}

/// A shortest chain of top cells ending at `x`: the first shares an
/// `n`-cell with the source of the universal arrow, and each next cell's
/// source shares an `n`-cell with the previous cell's target.
pub fn find_chain(p: &Polyplex, x: CellId) -> Result<Option<Vec<CellId>>, PolyplexError> {
    if p.dim == 0 || !p.pg.contains(x) || p.pg.dim(x) != p.dim {
        return Ok(None);
    }
    let n = p.dim - 1;
    let source = n_cells(&p.pg, &p.boundary_arrow(n, Sign::Minus)?, n)?;
    let tops = p.pg.cells_of_dim(p.dim);
    let mut srcs = HashMap::new();
    let mut tgts = HashMap::new();
    for &y in &tops {
        let (s, t) = p.pg.cell(y).boundary.as_ref().expect("top cells have boundaries");
        srcs.insert(y, n_cells(&p.pg, s, n)?);
        tgts.insert(y, n_cells(&p.pg, t, n)?);
    }
    let mut next: HashMap<CellId, CellId> = HashMap::new();
    let mut queue = VecDeque::from([x]);
    let mut seen = BTreeSet::from([x]);
    while let Some(z) = queue.pop_front() {
        if !srcs[&z].is_disjoint(&source) {
            let mut chain = vec![z];
            let mut cur = z;
            while let Some(&nx) = next.get(&cur) {
                chain.push(nx);
                cur = nx;
            }
            return Ok(Some(chain));
        }
        for &y in &tops {
            if !seen.contains(&y) && !tgts[&y].is_disjoint(&srcs[&z]) {
                seen.insert(y);
                next.insert(y, z);
                queue.push_back(y);
            }
        }
    }
    Ok(None)
}
