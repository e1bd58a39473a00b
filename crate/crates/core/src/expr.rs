//! Syntax of arrow expressions: generators and binary `k`-composites.

use std::fmt;
use std::sync::Arc;

use crate::polygraph::{CellId, Polygraph};

/// A term denoting an arrow of the free ω-category on a polygraph.
///
/// `Comp(k, a, b)` is the `k`-composite `a #_k b` in diagrammatic order.
/// Dimensions of the two sides may differ (whiskering).
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub enum Expr {
    Gen(CellId),
    Comp(usize, Arc<Expr>, Arc<Expr>),
}

/// A path into an expression tree: `0` selects the left operand, `1` the right.
pub type Position = Vec<u8>;

impl Expr {
    pub fn gen(c: CellId) -> Expr {
        Expr::Gen(c)
    }

    pub fn comp(k: usize, a: Expr, b: Expr) -> Expr {
        Expr::Comp(k, Arc::new(a), Arc::new(b))
    }

    /// Left-associated `k`-composite of a non-empty sequence.
    pub fn chain(k: usize, parts: impl IntoIterator<Item = Expr>) -> Option<Expr> {
        parts.into_iter().reduce(|acc, e| Expr::comp(k, acc, e))
    }

    /// Number of nodes in the tree.
    pub fn size(&self) -> usize {
        match self {
            Expr::Gen(_) => 1,
            Expr::Comp(_, a, b) => 1 + a.size() + b.size(),
        }
    }

    pub fn depth(&self) -> usize {
        match self {
            Expr::Gen(_) => 0,
            Expr::Comp(_, a, b) => 1 + a.depth().max(b.depth()),
        }
    }

    /// Generators in left-to-right order, with repetitions.
    pub fn generators(&self) -> Vec<CellId> {
        let mut out = Vec::new();
        self.collect_generators(&mut out);
        out
    }

    fn collect_generators(&self, out: &mut Vec<CellId>) {
        match self {
            Expr::Gen(c) => out.push(*c),
            Expr::Comp(_, a, b) => {
                a.collect_generators(out);
                b.collect_generators(out);
            }
        }
    }

    pub fn subterm(&self, pos: &[u8]) -> Option<&Expr> {
        let mut cur = self;
        for &step in pos {
            match cur {
                Expr::Gen(_) => return None,
                Expr::Comp(_, a, b) => cur = if step == 0 { a } else { b },
            }
        }
        Some(cur)
    }

    /// Returns a copy with the subterm at `pos` replaced, or `None` if `pos`
    /// does not address a node.
    pub fn replace_at(&self, pos: &[u8], new: Expr) -> Option<Expr> {
        match pos.split_first() {
            None => Some(new),
            Some((&step, rest)) => match self {
                Expr::Gen(_) => None,
                Expr::Comp(k, a, b) => {
                    if step == 0 {
                        Some(Expr::Comp(*k, Arc::new(a.replace_at(rest, new)?), b.clone()))
                    } else {
                        Some(Expr::Comp(*k, a.clone(), Arc::new(b.replace_at(rest, new)?)))
                    }
                }
            },
        }
    }

    /// Every position in pre-order.
    pub fn positions(&self) -> Vec<Position> {
        let mut out = Vec::new();
        let mut stack = vec![(self, Vec::new())];
        while let Some((e, pos)) = stack.pop() {
            if let Expr::Comp(_, a, b) = e {
                let mut pb = pos.clone();
                pb.push(1);
                stack.push((b, pb));
                let mut pa = pos.clone();
                pa.push(0);
                stack.push((a, pa));
            }
            out.push(pos);
        }
        out
    }

    pub fn map_cells(&self, f: &impl Fn(CellId) -> CellId) -> Expr {
        match self {
            Expr::Gen(c) => Expr::Gen(f(*c)),
            Expr::Comp(k, a, b) => Expr::comp(*k, a.map_cells(f), b.map_cells(f)),
        }
    }

    /// Renders the expression using the cell names of `pg`.
    pub fn display<'a>(&'a self, pg: &'a Polygraph) -> ExprDisplay<'a> {
        ExprDisplay { expr: self, pg }
    }
}

pub struct ExprDisplay<'a> {
    expr: &'a Expr,
    pg: &'a Polygraph,
}

impl fmt::Display for ExprDisplay<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_expr(f, self.expr, self.pg, true)
    }
}

fn write_expr(f: &mut fmt::Formatter<'_>, e: &Expr, pg: &Polygraph, top: bool) -> fmt::Result {
    match e {
        Expr::Gen(c) => write!(f, "{}", pg.name(*c)),
        Expr::Comp(k, a, b) => {
            if !top {
                write!(f, "(")?;
            }
            write_expr(f, a, pg, false)?;
            write!(f, " *{} ", k)?;
            write_expr(f, b, pg, false)?;
            if !top {
                write!(f, ")")?;
            }
            Ok(())
        }
    }
}

pub fn format_position(pos: &[u8]) -> String {
    if pos.is_empty() {
        ".".to_string()
    } else {
        pos.iter().map(|p| p.to_string()).collect::<Vec<_>>().join(".")
    }
}

pub fn parse_position(s: &str) -> Option<Position> {
    let s = s.trim();
    if s == "." || s.is_empty() {
        return Some(Vec::new());
    }
    s.split('.')
        .map(|p| match p {
            "0" => Some(0),
            "1" => Some(1),
            _ => None,
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn replace_and_subterm() {
        let (a, b, c) = (CellId(0), CellId(1), CellId(2));
        let e = Expr::comp(0, Expr::gen(a), Expr::comp(0, Expr::gen(b), Expr::gen(c)));
        assert_eq!(e.subterm(&[1, 0]), Some(&Expr::gen(b)));
        let r = e.replace_at(&[1, 1], Expr::gen(a)).unwrap();
        assert_eq!(r.generators(), vec![a, b, a]);
        assert!(e.replace_at(&[0, 0], Expr::gen(a)).is_none());
        assert_eq!(e.positions().len(), 5);
    }

    #[test]
    fn position_text() {
        assert_eq!(parse_position("."), Some(vec![]));
        assert_eq!(parse_position("0.1"), Some(vec![0, 1]));
        assert_eq!(format_position(&[1, 0]), "1.0");
        assert_eq!(parse_position("2"), None);
    }
}
