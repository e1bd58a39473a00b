//! Brute-force equality: breadth-first search from both inputs under single
//! axiom rewrites.
//!
//! Independent of the exchange search except for the boundary computations
//! needed to recognise unit instances. An `Unequal` answer from an exhausted
//! closure only says that the rewrites of one input through expressions of
//! size at most the bound never meet those of the other.

use std::collections::{HashMap, HashSet, VecDeque};

use serde::Serialize;

use crate::expr::{Expr, Position};
use crate::polygraph::Polygraph;

use super::derivation::{is_unit, Derivation, AXIOM_ASSOC, AXIOM_EXCHANGE, AXIOM_UNIT};
use super::exchange::canonical_nf;
use super::nf::{boundary, nf, realize, Ctx, Nf, Sign};
use super::{count_vector, with_ctx, FreeCatError, Verdict};

pub const DEFAULT_MAX_STATES: usize = 200_000;

#[derive(Copy, Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum OracleReason {
    /// The target was reached; a derivation is attached.
    Reached,
    /// Dimensions or top-dimensional generator counts differ.
    Invariant,
    /// Every expression within the size bound was explored.
    ClosureExhausted,
    /// The state limit was hit first.
    Truncated,
}

#[derive(Clone, Debug)]
pub struct OracleOutcome {
    pub verdict: Verdict,
    pub reason: OracleReason,
    pub explored: usize,
    pub derivation: Option<Derivation>,
}

pub fn oracle_equal(pg: &Polygraph, e: &Expr, f: &Expr, size_bound: usize) -> Result<OracleOutcome, FreeCatError> {
    oracle_equal_with(pg, e, f, size_bound, DEFAULT_MAX_STATES)
}

pub fn oracle_equal_with(
    pg: &Polygraph,
    e: &Expr,
    f: &Expr,
    size_bound: usize,
    max_states: usize,
) -> Result<OracleOutcome, FreeCatError> {
    let de = super::dim(pg, e)?;
    let df = super::dim(pg, f)?;
    let outcome = |verdict, reason, explored, derivation| OracleOutcome { verdict, reason, explored, derivation };
    if de != df || count_vector(pg, e)? != count_vector(pg, f)? {
        return Ok(outcome(Verdict::Unequal, OracleReason::Invariant, 0, None));
    }
    if e == f {
        return Ok(outcome(Verdict::Equal, OracleReason::Reached, 1, Some(Derivation::new(e.clone()))));
    }
    with_ctx(pg, |ctx| {
        let mut rw = Rewriter::new(ctx);
        // Search from both ends; every rewrite is an instance of an equation,
        // so steps found from `f` can be read backwards.
        let mut sides = [Side::new(e), Side::new(f)];
        loop {
            let i = if sides[0].queue.len() <= sides[1].queue.len() { 0 } else { 1 };
            let Some(cur) = sides[i].queue.pop_front() else {
                let explored = sides[0].parents.len() + sides[1].parents.len();
                return Ok(outcome(Verdict::Unequal, OracleReason::ClosureExhausted, explored, None));
            };
            for (axiom, pos, next) in rw.rewrites(&cur, size_bound) {
                if sides[i].parents.contains_key(&next) {
                    continue;
                }
                sides[i].parents.insert(next.clone(), Some((cur.clone(), axiom, pos)));
                if sides[1 - i].parents.contains_key(&next) {
                    let mut d = rebuild(&sides[0].parents, &next);
                    let back = rebuild(&sides[1].parents, &next).reversed();
                    d.steps.extend(back.steps);
                    let explored = sides[0].parents.len() + sides[1].parents.len();
                    return Ok(outcome(Verdict::Equal, OracleReason::Reached, explored, Some(d)));
                }
                if sides[0].parents.len() + sides[1].parents.len() >= max_states {
                    let explored = sides[0].parents.len() + sides[1].parents.len();
                    return Ok(outcome(Verdict::Unknown, OracleReason::Truncated, explored, None));
                }
                sides[i].queue.push_back(next);
            }
        }
    })
}

type Parents = HashMap<Expr, Option<(Expr, u8, Position)>>;

struct Side {
    parents: Parents,
    queue: VecDeque<Expr>,
}

impl Side {
    fn new(start: &Expr) -> Side {
        Side { parents: HashMap::from([(start.clone(), None)]), queue: VecDeque::from([start.clone()]) }
    }
}

fn rebuild(parents: &Parents, end: &Expr) -> Derivation {
    let mut rev = Vec::new();
    let mut cur = end.clone();
    while let Some(Some((prev, axiom, pos))) = parents.get(&cur) {
        rev.push((*axiom, pos.clone(), cur.clone()));
        cur = prev.clone();
    }
    let mut d = Derivation::new(cur);
    for (axiom, pos, result) in rev.into_iter().rev() {
        d.push(axiom, pos, result);
    }
    d
}

/// Every single-axiom rewrite of `e` whose result has size at most `bound`.
pub fn single_rewrites(pg: &Polygraph, e: &Expr, bound: usize) -> Result<Vec<(u8, Position, Expr)>, FreeCatError> {
    super::well_formed(pg, e)?;
    Ok(with_ctx(pg, |ctx| Rewriter::new(ctx).rewrites(e, bound)))
}

struct Rewriter<'a> {
    ctx: Ctx<'a>,
    memo: HashMap<Expr, Option<Nf>>,
}

impl<'a> Rewriter<'a> {
    fn new(ctx: Ctx<'a>) -> Self {
        Rewriter { ctx, memo: HashMap::new() }
    }

    fn nf(&mut self, e: &Expr) -> Option<Nf> {
        if let Some(x) = self.memo.get(e) {
            return x.clone();
        }
        let x = nf(self.ctx, e).ok();
        self.memo.insert(e.clone(), x.clone());
        x
    }

    fn rewrites(&mut self, e: &Expr, bound: usize) -> Vec<(u8, Position, Expr)> {
        let mut out = Vec::new();
        let mut seen = HashSet::new();
        let total = e.size();
        for pos in e.positions() {
            let sub = e.subterm(&pos).unwrap().clone();
            let room = bound.saturating_sub(total - sub.size());
            for (axiom, new_sub) in self.local(&sub, room) {
                let next = e.replace_at(&pos, new_sub).unwrap();
                if seen.insert(next.clone()) {
                    out.push((axiom, pos.clone(), next));
                }
            }
        }
        out
    }

    /// Rewrites at the root of `s` producing terms of size at most `room`.
    fn local(&mut self, s: &Expr, room: usize) -> Vec<(u8, Expr)> {
        let mut out = Vec::new();
        if let Expr::Comp(k, l, r) = s {
            if let Expr::Comp(k2, a, b) = &**l {
                if k2 == k {
                    out.push((
                        AXIOM_ASSOC,
                        Expr::comp(*k, (**a).clone(), Expr::comp(*k, (**b).clone(), (**r).clone())),
                    ));
                }
            }
            if let Expr::Comp(k2, b, c) = &**r {
                if k2 == k {
                    out.push((
                        AXIOM_ASSOC,
                        Expr::comp(*k, Expr::comp(*k, (**l).clone(), (**b).clone()), (**c).clone()),
                    ));
                }
            }
            for small in [l, r] {
                if is_unit(self.ctx, s, small) {
                    out.push((AXIOM_UNIT, (**small).clone()));
                }
            }
            if let (Expr::Comp(n1, x, y), Expr::Comp(n2, z, w)) = (&**l, &**r) {
                if n1 == n2 {
                    let n = *n1;
                    let (x, y, z, w) = ((**x).clone(), (**y).clone(), (**z).clone(), (**w).clone());
                    // (x #n y) #k (z #n w) -> (x #k z) #n (y #k w) when k < n, and back when n < k.
                    let cand = Expr::comp(n, Expr::comp(*k, x, z), Expr::comp(*k, y, w));
                    if (*k < n || n < *k) && self.nf(&cand).is_some() {
                        out.push((AXIOM_EXCHANGE, cand));
                    }
                }
            }
        }
        if let Some(x) = self.nf(s) {
            let base = s.size();
            for n in 0..x.dim() {
                for sign in [Sign::Plus, Sign::Minus] {
                    let b = realize(&canonical_nf(self.ctx, &boundary(self.ctx, &x, n, sign)));
                    if base + b.size() + 1 > room {
                        continue;
                    }
                    let cand =
                        if sign == Sign::Plus { Expr::comp(n, s.clone(), b) } else { Expr::comp(n, b, s.clone()) };
                    out.push((AXIOM_UNIT, cand));
                }
            }
        }
        out.retain(|(_, c)| c.size() <= room);
        out
    }
}
