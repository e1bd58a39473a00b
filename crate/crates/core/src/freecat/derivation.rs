//! Derivations: sequences of axiom applications at positions, and their checker.

use std::fmt::Write as _;

use crate::expr::{format_position, parse_position, Expr, Position};
use crate::polygraph::Polygraph;
use crate::text::{parse_expr, ParseError};

use super::exchange::nf_equal;
use super::nf::{boundary, nf, Ctx, Sign};
use super::{with_ctx, Verdict};

pub const AXIOM_UNIT: u8 = 4;
pub const AXIOM_ASSOC: u8 = 6;
pub const AXIOM_EXCHANGE: u8 = 7;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Step {
    /// Which axiom (1 to 7) justifies the step.
    pub axiom: u8,
    pub position: Position,
    pub result: Expr,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Derivation {
    pub start: Expr,
    pub steps: Vec<Step>,
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("step {index}: {message}")]
pub struct StepError {
    /// 1-based index of the failing step; 0 refers to the start expression.
    pub index: usize,
    pub message: String,
}

impl Derivation {
    pub fn new(start: Expr) -> Derivation {
        Derivation { start, steps: Vec::new() }
    }

    pub fn push(&mut self, axiom: u8, position: Position, result: Expr) {
        self.steps.push(Step { axiom, position, result });
    }

    pub fn end(&self) -> &Expr {
        self.steps.last().map_or(&self.start, |s| &s.result)
    }

    pub fn reversed(&self) -> Derivation {
        let mut exprs = vec![self.start.clone()];
        exprs.extend(self.steps.iter().map(|s| s.result.clone()));
        let mut out = Derivation::new(exprs.pop().unwrap());
        for (s, before) in self.steps.iter().rev().zip(exprs.into_iter().rev()) {
            out.push(s.axiom, s.position.clone(), before);
        }
        out
    }

    /// Appends `other`, which must start where `self` ends.
    pub fn append(&mut self, other: Derivation) {
        assert_eq!(self.end(), &other.start, "derivations do not chain");
        self.steps.extend(other.steps);
    }

    /// Replays the steps of `inner` on the subterm at `pos` of the current end.
    pub fn append_at(&mut self, pos: &[u8], inner: &Derivation) {
        for s in &inner.steps {
            let whole = self.end().replace_at(pos, s.result.clone()).expect("position addresses a subterm");
            let mut p = pos.to_vec();
            p.extend(&s.position);
            self.push(s.axiom, p, whole);
        }
    }

    pub fn to_text(&self, pg: &Polygraph) -> String {
        let mut out = format!("start {}\n", self.start.display(pg));
        for s in &self.steps {
            let _ = writeln!(out, "step {} {} {}", s.axiom, format_position(&s.position), s.result.display(pg));
        }
        out
    }

    pub fn parse(pg: &Polygraph, text: &str) -> Result<Derivation, ParseError> {
        let mut start = None;
        let mut steps = Vec::new();
        for (i, raw) in text.lines().enumerate() {
            let line_no = i + 1;
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let err = |msg: String| ParseError { line: line_no, column: 1, message: msg };
            if let Some(rest) = line.strip_prefix("start ") {
                if start.is_some() {
                    return Err(err("second `start` line".into()));
                }
                start = Some(parse_expr(pg, rest).map_err(|e| e.at_line(line_no))?);
            } else if let Some(rest) = line.strip_prefix("step ") {
                let mut parts = rest.trim().splitn(3, char::is_whitespace);
                let axiom = parts
                    .next()
                    .and_then(|a| a.parse::<u8>().ok())
                    .filter(|a| (1..=7).contains(a))
                    .ok_or_else(|| err("expected an axiom number between 1 and 7".into()))?;
                let position = parts
                    .next()
                    .and_then(parse_position)
                    .ok_or_else(|| err("expected a position such as `.` or `0.1`".into()))?;
                let expr = parts.next().ok_or_else(|| err("missing result expression".into()))?;
                let result = parse_expr(pg, expr).map_err(|e| e.at_line(line_no))?;
                steps.push(Step { axiom, position, result });
            } else {
                return Err(err("expected `start` or `step`".into()));
            }
        }
        let start = start.ok_or(ParseError { line: 1, column: 1, message: "missing `start` line".into() })?;
        Ok(Derivation { start, steps })
    }
}

fn is_assoc(a: &Expr, b: &Expr) -> bool {
    if let (Expr::Comp(k, ab, c), Expr::Comp(k2, a2, bc)) = (a, b) {
        if let (Expr::Comp(k3, x, y), Expr::Comp(k4, y2, z)) = (&**ab, &**bc) {
            return k == k2 && k == k3 && k == k4 && x == a2 && y == y2 && z == c;
        }
    }
    false
}

fn is_exchange(a: &Expr, b: &Expr) -> bool {
    if let (Expr::Comp(k, l, r), Expr::Comp(n, l2, r2)) = (a, b) {
        if let (Expr::Comp(n1, x, y), Expr::Comp(n2, z, w)) = (&**l, &**r) {
            if let (Expr::Comp(k1, x2, z2), Expr::Comp(k2, y2, w2)) = (&**l2, &**r2) {
                return k < n && n1 == n && n2 == n && k1 == k && k2 == k && x == x2 && y == y2 && z == z2 && w == w2;
            }
        }
    }
    false
}

/// `big` is `y #_n π⁺_n(y)` or `π⁻_n(z) #_n z` and `small` the surviving side.
pub(crate) fn is_unit(ctx: Ctx<'_>, big: &Expr, small: &Expr) -> bool {
    let Expr::Comp(n, y, z) = big else { return false };
    let (Ok(ny), Ok(nz)) = (nf(ctx, y), nf(ctx, z)) else { return false };
    (**y == *small && nf_equal(ctx, &nz, &boundary(ctx, &ny, *n, Sign::Plus)) == Verdict::Equal)
        || (**z == *small && nf_equal(ctx, &ny, &boundary(ctx, &nz, *n, Sign::Minus)) == Verdict::Equal)
}

/// Whether replacing `before` by `after` is an instance of the axiom, in
/// either direction.
pub(crate) fn instance_of(ctx: Ctx<'_>, axiom: u8, before: &Expr, after: &Expr) -> Result<(), String> {
    let ok = match axiom {
        AXIOM_ASSOC => is_assoc(before, after) || is_assoc(after, before),
        AXIOM_EXCHANGE => is_exchange(before, after) || is_exchange(after, before),
        AXIOM_UNIT => is_unit(ctx, before, after) || is_unit(ctx, after, before),
        1 | 2 | 3 | 5 => return Err(format!("axiom {axiom} constrains boundaries and does not rewrite terms")),
        _ => return Err(format!("there is no axiom {axiom}")),
    };
    if ok {
        Ok(())
    } else {
        Err(format!("the subterms do not form an instance of axiom {axiom}"))
    }
}

/// Checks every step; the first failure is reported with its index.
pub fn check_derivation(pg: &Polygraph, d: &Derivation) -> Result<(), StepError> {
    with_ctx(pg, |ctx| {
        nf(ctx, &d.start).map_err(|e| StepError { index: 0, message: format!("start is ill-formed: {e}") })?;
        let mut cur = &d.start;
        for (i, s) in d.steps.iter().enumerate() {
            let fail = |message: String| StepError { index: i + 1, message };
            let before = cur
                .subterm(&s.position)
                .ok_or_else(|| fail(format!("position {} does not address a subterm", format_position(&s.position))))?;
            let after = s.result.subterm(&s.position).ok_or_else(|| {
                fail(format!("position {} does not address a subterm of the result", format_position(&s.position)))
            })?;
            if cur.replace_at(&s.position, after.clone()).as_ref() != Some(&s.result) {
                return Err(fail("the result differs from the input outside the cited position".into()));
            }
            instance_of(ctx, s.axiom, before, after).map_err(fail)?;
            nf(ctx, &s.result).map_err(|e| fail(format!("result is ill-formed: {e}")))?;
            cur = &s.result;
        }
        Ok(())
    })
}
