//! Isomorphism and automorphism search by backtracking.

use std::collections::BTreeMap;
use std::sync::Arc;

use crate::expr::Expr;
use crate::freecat::{arrows_equal, count_vector, Verdict};
use crate::morphism::PolygraphMorphism;
use crate::polygraph::{CellId, Polygraph};

/// Isomorphism-invariant data used to prune candidate images.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
struct Signature {
    dim: usize,
    src_len: usize,
    tgt_len: usize,
    in_sources: usize,
    in_targets: usize,
}

fn total(pg: &Polygraph, e: &Expr) -> (usize, BTreeMap<CellId, usize>) {
    let v = count_vector(pg, e).unwrap_or_default();
    (v.values().sum(), v)
}

fn signatures(pg: &Polygraph) -> Vec<Signature> {
    let mut sig: Vec<Signature> =
        pg.ids().map(|c| Signature { dim: pg.dim(c), src_len: 0, tgt_len: 0, in_sources: 0, in_targets: 0 }).collect();
    for c in pg.ids() {
        let Some((s, t)) = &pg.cell(c).boundary else { continue };
        let (ns, vs) = total(pg, s);
        let (nt, vt) = total(pg, t);
        sig[c.index()].src_len = ns;
        sig[c.index()].tgt_len = nt;
        for (g, n) in vs {
            sig[g.index()].in_sources += n;
        }
        for (g, n) in vt {
            sig[g.index()].in_targets += n;
        }
    }
    sig
}

/// Search options for [`find_isomorphisms_with`].
#[derive(Default)]
pub struct IsoSearch<'a> {
    /// Cells whose image is fixed in advance.
    pub pinned: &'a [(CellId, CellId)],
    /// Extra admissibility test for a cell and its candidate image.
    pub allow: Option<&'a dyn Fn(CellId, CellId) -> bool>,
    /// Stop after this many results.
    pub limit: Option<usize>,
}

pub fn find_isomorphisms(
    p: &Arc<Polygraph>,
    q: &Arc<Polygraph>,
    pinned: &[(CellId, CellId)],
) -> Vec<PolygraphMorphism> {
    find_isomorphisms_with(p, q, &IsoSearch { pinned, ..Default::default() })
}

pub fn automorphisms(p: &Arc<Polygraph>) -> Vec<PolygraphMorphism> {
    find_isomorphisms(p, p, &[])
}

/// All bijective morphisms `p -> q` extending the pinned assignment,
/// in the order produced by assigning cells by (dimension, id) and trying
/// candidates in id order.
pub fn find_isomorphisms_with(p: &Arc<Polygraph>, q: &Arc<Polygraph>, opts: &IsoSearch<'_>) -> Vec<PolygraphMorphism> {
    let mut out = Vec::new();
    for_each_isomorphism(p, q, opts, &mut |m| {
        out.push(m);
        true
    });
    out
}

/// Calls `visit` on each isomorphism in search order until it returns
/// false or `opts.limit` results have been produced.
pub fn for_each_isomorphism(
    p: &Arc<Polygraph>,
    q: &Arc<Polygraph>,
    opts: &IsoSearch<'_>,
    visit: &mut dyn FnMut(PolygraphMorphism) -> bool,
) {
    if p.counts_by_dim() != q.counts_by_dim() {
        return;
    }
    let (sp, sq) = (signatures(p), signatures(q));
    let mut order: Vec<CellId> = p.ids().collect();
    order.sort_by_key(|&c| (p.dim(c), c));
    let mut state = Search {
        p,
        q,
        sp,
        sq,
        order,
        map: vec![None; p.len()],
        used: vec![false; q.len()],
        pinned: BTreeMap::new(),
        opts,
        found: 0,
        stop: false,
    };
    for &(a, b) in opts.pinned {
        if !p.contains(a) || !q.contains(b) || state.pinned.get(&a).is_some_and(|&prev| prev != b) {
            return;
        }
        state.pinned.insert(a, b);
    }
    state.run(0, visit);
}

struct Search<'a> {
    p: &'a Arc<Polygraph>,
    q: &'a Arc<Polygraph>,
    sp: Vec<Signature>,
    sq: Vec<Signature>,
    order: Vec<CellId>,
    map: Vec<Option<CellId>>,
    used: Vec<bool>,
    pinned: BTreeMap<CellId, CellId>,
    opts: &'a IsoSearch<'a>,
    found: usize,
    stop: bool,
}

impl Search<'_> {
    fn run(&mut self, i: usize, visit: &mut dyn FnMut(PolygraphMorphism) -> bool) {
        if self.stop {
            return;
        }
        if i == self.order.len() {
            let map = self.map.iter().map(|c| c.unwrap()).collect();
            self.found += 1;
            let more = visit(PolygraphMorphism::unchecked(self.p.clone(), self.q.clone(), map));
            self.stop = !more || self.opts.limit.is_some_and(|l| self.found >= l);
            return;
        }
        let c = self.order[i];
        let candidates: Vec<CellId> = match self.pinned.get(&c) {
            Some(&d) => vec![d],
            None => self.q.ids().collect(),
        };
        for d in candidates {
            if self.used[d.index()] || self.sp[c.index()] != self.sq[d.index()] {
                continue;
            }
            if let Some(allow) = self.opts.allow {
                if !allow(c, d) {
                    continue;
                }
            }
            if !self.boundary_ok(c, d) {
                continue;
            }
            self.map[c.index()] = Some(d);
            self.used[d.index()] = true;
            self.run(i + 1, visit);
            self.map[c.index()] = None;
            self.used[d.index()] = false;
            if self.stop {
                return;
            }
        }
    }

    fn boundary_ok(&self, c: CellId, d: CellId) -> bool {
        let (Some((s, t)), Some((s2, t2))) = (&self.p.cell(c).boundary, &self.q.cell(d).boundary) else {
            return true;
        };
        let tr = |e: &Expr| e.map_cells(&|x| self.map[x.index()].expect("lower cells are assigned first"));
        [(s, s2), (t, t2)].into_iter().all(|(a, b)| matches!(arrows_equal(self.q, &tr(a), b), Ok(Verdict::Equal)))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::polygraph::PolygraphBuilder;

    fn path(n: usize) -> Arc<Polygraph> {
        let mut b = PolygraphBuilder::new();
        let pts: Vec<_> = (0..=n).map(|i| b.point(&format!("a{i}"))).collect();
        for i in 0..n {
            b.cell(&format!("e{i}"), 1, Expr::gen(pts[i]), Expr::gen(pts[i + 1]));
        }
        Arc::new(b.build())
    }

    #[test]
    fn rigid_path_and_swap() {
        assert_eq!(automorphisms(&path(2)).len(), 1);
        let mut b = PolygraphBuilder::new();
        let (x, y, z, w) = (b.point("x"), b.point("y"), b.point("z"), b.point("w"));
        b.cell("f", 1, Expr::gen(x), Expr::gen(y));
        b.cell("g", 1, Expr::gen(z), Expr::gen(w));
        assert_eq!(automorphisms(&Arc::new(b.build())).len(), 2);
    }
}
