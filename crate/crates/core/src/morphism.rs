//! Morphisms of polygraphs, pushouts and image factorization.

use std::collections::BTreeSet;
use std::sync::Arc;

use crate::expr::Expr;
use crate::freecat::{arrows_equal, Verdict};
use crate::polygraph::{Cell, CellId, Polygraph};
use crate::validate::validate;

/// A dimension-preserving map of cells compatible with boundaries up to
/// equality of arrows.
#[derive(Clone, Debug)]
pub struct PolygraphMorphism {
    pub source: Arc<Polygraph>,
    pub target: Arc<Polygraph>,
    pub map: Vec<CellId>,
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum MorphismError {
    #[error("cell map has {found} entries for a source with {expected} cells")]
    Length { expected: usize, found: usize },
    #[error("`{0}` is sent to a cell of another dimension or outside the target")]
    Dimension(String),
    #[error("the {side} of `{cell}` is not preserved")]
    Boundary { cell: String, side: &'static str },
    #[error("could not decide whether the {side} of `{cell}` is preserved")]
    Undecided { cell: String, side: &'static str },
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum PushoutError {
    #[error("the two morphisms have different sources")]
    DifferentSources,
    #[error("ill-posed gluing: {0}")]
    IllPosed(String),
}

impl PolygraphMorphism {
    /// Builds a morphism after checking dimensions and boundaries.
    pub fn new(source: Arc<Polygraph>, target: Arc<Polygraph>, map: Vec<CellId>) -> Result<Self, MorphismError> {
        let m = PolygraphMorphism { source, target, map };
        m.check()?;
        Ok(m)
    }

    pub fn unchecked(source: Arc<Polygraph>, target: Arc<Polygraph>, map: Vec<CellId>) -> Self {
        PolygraphMorphism { source, target, map }
    }

    pub fn identity(pg: Arc<Polygraph>) -> Self {
        let map = pg.ids().collect();
        PolygraphMorphism { source: pg.clone(), target: pg, map }
    }

    pub fn check(&self) -> Result<(), MorphismError> {
        if self.map.len() != self.source.len() {
            return Err(MorphismError::Length { expected: self.source.len(), found: self.map.len() });
        }
        for c in self.source.ids() {
            let img = self.map[c.index()];
            if !self.target.contains(img) || self.target.dim(img) != self.source.dim(c) {
                return Err(MorphismError::Dimension(self.source.name(c).to_string()));
            }
        }
        for c in self.source.ids() {
            let img = self.map[c.index()];
            let (Some((s, t)), Some((s2, t2))) = (&self.source.cell(c).boundary, &self.target.cell(img).boundary)
            else {
                continue;
            };
            for (side, a, b) in [("source", s, s2), ("target", t, t2)] {
                let cell = self.source.name(c).to_string();
                match arrows_equal(&self.target, &self.apply_expr(a), b) {
                    Ok(Verdict::Equal) => {}
                    Ok(Verdict::Unknown) => return Err(MorphismError::Undecided { cell, side }),
                    _ => return Err(MorphismError::Boundary { cell, side }),
                }
            }
        }
        Ok(())
    }

    pub fn apply(&self, c: CellId) -> CellId {
        self.map[c.index()]
    }

    pub fn apply_expr(&self, e: &Expr) -> Expr {
        e.map_cells(&|c| self.map[c.index()])
    }

    /// `self` followed by `next`.
    pub fn then(&self, next: &PolygraphMorphism) -> PolygraphMorphism {
        PolygraphMorphism {
            source: self.source.clone(),
            target: next.target.clone(),
            map: self.map.iter().map(|&c| next.map[c.index()]).collect(),
        }
    }

    pub fn is_injective(&self) -> bool {
        let set: BTreeSet<_> = self.map.iter().collect();
        set.len() == self.map.len()
    }

    pub fn is_surjective(&self) -> bool {
        let set: BTreeSet<_> = self.map.iter().collect();
        set.len() == self.target.len()
    }

    pub fn is_identity(&self) -> bool {
        self.map.iter().enumerate().all(|(i, c)| c.index() == i)
    }

    /// Inverse of a bijective morphism.
    pub fn inverse(&self) -> Option<PolygraphMorphism> {
        if !(self.is_injective() && self.is_surjective()) {
            return None;
        }
        let mut map = vec![CellId(0); self.map.len()];
        for (i, c) in self.map.iter().enumerate() {
            map[c.index()] = CellId(i as u32);
        }
        Some(PolygraphMorphism { source: self.target.clone(), target: self.source.clone(), map })
    }

    /// Source cells sent to `c`.
    pub fn preimage(&self, c: CellId) -> Vec<CellId> {
        self.source.ids().filter(|&x| self.map[x.index()] == c).collect()
    }
}

struct UnionFind(Vec<usize>);

impl UnionFind {
    fn find(&mut self, x: usize) -> usize {
        let mut r = x;
        while self.0[r] != r {
            r = self.0[r];
        }
        let mut y = x;
        while self.0[y] != r {
            let n = self.0[y];
            self.0[y] = r;
            y = n;
        }
        r
    }

    fn union(&mut self, a: usize, b: usize) {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra != rb {
            let (lo, hi) = (ra.min(rb), ra.max(rb));
            self.0[hi] = lo;
        }
    }
}

/// How [`pushout_with`] names the cells of the result.
#[derive(Copy, Clone, Debug, PartialEq, Eq)]
pub enum Naming {
    /// `L.name`, `R.name`, `G.name` for left-only, right-only and glued cells.
    Prefixed,
    /// Left (or glued) cells keep their left name; right-only cells keep
    /// their name, primed until it is fresh.
    KeepLeft,
}

pub type Pushout = (Arc<Polygraph>, PolygraphMorphism, PolygraphMorphism);

pub fn pushout(f: &PolygraphMorphism, g: &PolygraphMorphism) -> Result<Pushout, PushoutError> {
    pushout_with(f, g, Naming::Prefixed)
}

/// Cellwise pushout of `f: R -> A` and `g: R -> B`, re-indexed by
/// dimension and then by first appearance among the cells of A followed by B.
pub fn pushout_with(f: &PolygraphMorphism, g: &PolygraphMorphism, naming: Naming) -> Result<Pushout, PushoutError> {
    if f.source.cells() != g.source.cells() {
        return Err(PushoutError::DifferentSources);
    }
    let (a, b) = (&f.target, &g.target);
    let na = a.len();
    let total = na + b.len();
    let mut uf = UnionFind((0..total).collect());
    for r in f.source.ids() {
        uf.union(f.apply(r).index(), na + g.apply(r).index());
    }
    let dim_of = |i: usize| if i < na { a.dim(CellId(i as u32)) } else { b.dim(CellId((i - na) as u32)) };
    // class root -> new index, assigned in (dim, first appearance) order
    let mut order: Vec<usize> = Vec::new();
    let mut seen = vec![false; total];
    for i in 0..total {
        let r = uf.find(i);
        if !seen[r] {
            seen[r] = true;
            order.push(i);
        }
    }
    order.sort_by_key(|&i| dim_of(i));
    let mut class_index = vec![usize::MAX; total];
    let mut rep_of_class = Vec::new();
    for (n, &i) in order.iter().enumerate() {
        class_index[uf.find(i)] = n;
        rep_of_class.push(i);
    }
    let new_of = |uf: &mut UnionFind, i: usize| CellId(class_index[uf.find(i)] as u32);
    let map_a: Vec<CellId> = (0..na).map(|i| new_of(&mut uf, i)).collect();
    let map_b: Vec<CellId> = (0..b.len()).map(|i| new_of(&mut uf, na + i)).collect();
    let mut has_a = vec![false; order.len()];
    let mut has_b = vec![false; order.len()];
    let mut a_name: Vec<Option<CellId>> = vec![None; order.len()];
    let mut b_name: Vec<Option<CellId>> = vec![None; order.len()];
    for (i, c) in map_a.iter().enumerate() {
        has_a[c.index()] = true;
        a_name[c.index()].get_or_insert(CellId(i as u32));
    }
    for (i, c) in map_b.iter().enumerate() {
        has_b[c.index()] = true;
        b_name[c.index()].get_or_insert(CellId(i as u32));
    }
    let mut used = BTreeSet::new();
    let mut names = Vec::with_capacity(order.len());
    for n in 0..order.len() {
        let name = match naming {
            Naming::Prefixed => match (has_a[n], has_b[n]) {
                (true, true) => format!("G.{}", a.name(a_name[n].unwrap())),
                (true, false) => format!("L.{}", a.name(a_name[n].unwrap())),
                _ => format!("R.{}", b.name(b_name[n].unwrap())),
            },
            Naming::KeepLeft => {
                if has_a[n] {
                    a.name(a_name[n].unwrap()).to_string()
                } else {
                    b.name(b_name[n].unwrap()).to_string()
                }
            }
        };
        names.push(name);
    }
    if naming == Naming::KeepLeft {
        for n in 0..names.len() {
            if has_a[n] {
                used.insert(names[n].clone());
            }
        }
        for n in 0..names.len() {
            if !has_a[n] {
                while used.contains(&names[n]) {
                    names[n].push('\'');
                }
                used.insert(names[n].clone());
            }
        }
    }
    let cells: Vec<Cell> = rep_of_class
        .iter()
        .enumerate()
        .map(|(n, &i)| {
            let (src_pg, c, m) =
                if i < na { (a, CellId(i as u32), &map_a) } else { (b, CellId((i - na) as u32), &map_b) };
            let cell = src_pg.cell(c);
            let tr = |e: &Expr| e.map_cells(&|x| m[x.index()]);
            Cell {
                name: names[n].clone(),
                dim: cell.dim,
                boundary: cell.boundary.as_ref().map(|(s, t)| (tr(s), tr(t))),
            }
        })
        .collect();
    let pg = Polygraph::from_cells(cells).map_err(|e| PushoutError::IllPosed(e.to_string()))?;
    let report = validate(&pg);
    if let Some(v) = report.violations.first() {
        return Err(PushoutError::IllPosed(format!("{}: {}", v.cell, v.message)));
    }
    let pg = Arc::new(pg);
    let ia = PolygraphMorphism::unchecked(a.clone(), pg.clone(), map_a);
    let ib = PolygraphMorphism::unchecked(b.clone(), pg.clone(), map_b);
    for m in [&ia, &ib] {
        m.check().map_err(|e| PushoutError::IllPosed(e.to_string()))?;
    }
    Ok((pg, ia, ib))
}

/// Factorization into a surjection onto the image followed by its inclusion.
pub fn factor_epi_mono(m: &PolygraphMorphism) -> (PolygraphMorphism, PolygraphMorphism) {
    let mut keep = BTreeSet::new();
    for &c in &m.map {
        m.target.cell_closure(c, &mut keep);
    }
    let (image, incl) = m.target.restrict(&keep);
    let image = Arc::new(image);
    let mut back = vec![CellId(0); m.target.len()];
    for (i, c) in incl.iter().enumerate() {
        back[c.index()] = CellId(i as u32);
    }
    let epi =
        PolygraphMorphism::unchecked(m.source.clone(), image.clone(), m.map.iter().map(|c| back[c.index()]).collect());
    let mono = PolygraphMorphism::unchecked(image, m.target.clone(), incl);
    (epi, mono)
}
