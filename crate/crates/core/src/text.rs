//! Line-oriented text format for polygraphs, polyplexes and expressions.
//!
//! ```text
//! # comment
//! cell x : 0
//! cell f : 1 = x => y
//! cell alpha : 2 = f *0 v => g *0 v
//! universal = alpha
//! ```
//!
//! In expressions `a *k b` is the `k`-composite; lower `k` binds tighter and
//! equal levels associate to the left. `gen(name)` is accepted for a bare name.

use std::fmt::{self, Write as _};

use crate::expr::Expr;
use crate::polygraph::{Polygraph, PolygraphBuilder, MAX_DIM};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub struct ParseError {
    pub line: usize,
    pub column: usize,
    pub message: String,
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "line {}, column {}: {}", self.line, self.column, self.message)
    }
}

impl ParseError {
    pub fn at_line(mut self, line: usize) -> ParseError {
        self.line = line;
        self
    }

    fn shifted(mut self, line: usize, offset: usize) -> ParseError {
        self.line = line;
        self.column += offset;
        self
    }
}

pub fn is_name_char(c: char) -> bool {
    c.is_alphanumeric() || c == '_' || c == '\'' || c == '.'
}

pub fn is_valid_name(s: &str) -> bool {
    !s.is_empty() && s.chars().all(is_name_char) && s != "gen"
}

struct Lexer<'a> {
    chars: Vec<(usize, char)>,
    pos: usize,
    src: &'a str,
}

#[derive(Debug, Clone, PartialEq)]
enum Token {
    Name(String),
    Star(usize),
    Open,
    Close,
}

impl<'a> Lexer<'a> {
    fn new(src: &'a str) -> Self {
        Lexer { chars: src.char_indices().collect(), pos: 0, src }
    }

    fn column(&self, idx: usize) -> usize {
        self.src[..self.chars.get(idx).map_or(self.src.len(), |c| c.0)].chars().count() + 1
    }

    fn err(&self, idx: usize, message: impl Into<String>) -> ParseError {
        ParseError { line: 1, column: self.column(idx), message: message.into() }
    }

    fn tokens(mut self) -> Result<Vec<(usize, Token)>, ParseError> {
        let mut out = Vec::new();
        while self.pos < self.chars.len() {
            let (_, c) = self.chars[self.pos];
            let start = self.pos;
            if c.is_whitespace() {
                self.pos += 1;
            } else if c == '(' {
                out.push((start, Token::Open));
                self.pos += 1;
            } else if c == ')' {
                out.push((start, Token::Close));
                self.pos += 1;
            } else if c == '*' {
                self.pos += 1;
                while self.pos < self.chars.len() && self.chars[self.pos].1.is_whitespace() {
                    self.pos += 1;
                }
                let d0 = self.pos;
                while self.pos < self.chars.len() && self.chars[self.pos].1.is_ascii_digit() {
                    self.pos += 1;
                }
                if d0 == self.pos {
                    return Err(self.err(start, "expected a dimension after `*`"));
                }
                let digits: String = self.chars[d0..self.pos].iter().map(|c| c.1).collect();
                let k = digits.parse().map_err(|_| self.err(d0, "dimension too large"))?;
                out.push((start, Token::Star(k)));
            } else if is_name_char(c) {
                while self.pos < self.chars.len() && is_name_char(self.chars[self.pos].1) {
                    self.pos += 1;
                }
                let name: String = self.chars[start..self.pos].iter().map(|c| c.1).collect();
                out.push((start, Token::Name(name)));
            } else {
                return Err(self.err(start, format!("unexpected character `{c}`")));
            }
        }
        Ok(out)
    }
}

/// Parses an expression over the cell names of `pg`. Errors report line 1.
pub fn parse_expr(pg: &Polygraph, src: &str) -> Result<Expr, ParseError> {
    parse_expr_with(src, &|name| pg.lookup(name).map(Expr::gen))
}

fn parse_expr_with(src: &str, lookup: &dyn Fn(&str) -> Option<Expr>) -> Result<Expr, ParseError> {
    let lexer = Lexer::new(src);
    let column = |idx: usize| lexer.column(idx);
    let toks = Lexer::new(src).tokens()?;
    let mut p = Parser { toks: &toks, pos: 0, lookup, column: &column, end: lexer.chars.len() };
    let e = p.expr()?;
    if p.pos < toks.len() {
        return Err(p.err(toks[p.pos].0, "unexpected input after expression"));
    }
    Ok(e)
}

struct Parser<'t> {
    toks: &'t [(usize, Token)],
    pos: usize,
    lookup: &'t dyn Fn(&str) -> Option<Expr>,
    column: &'t dyn Fn(usize) -> usize,
    end: usize,
}

impl Parser<'_> {
    fn err(&self, idx: usize, message: impl Into<String>) -> ParseError {
        ParseError { line: 1, column: (self.column)(idx), message: message.into() }
    }

    fn here(&self) -> usize {
        self.toks.get(self.pos).map_or(self.end, |t| t.0)
    }

    fn expr(&mut self) -> Result<Expr, ParseError> {
        let mut operands = vec![self.primary()?];
        let mut ops = Vec::new();
        while let Some((_, Token::Star(k))) = self.toks.get(self.pos) {
            ops.push(*k);
            self.pos += 1;
            operands.push(self.primary()?);
        }
        Ok(build(&operands, &ops))
    }

    fn primary(&mut self) -> Result<Expr, ParseError> {
        let at = self.here();
        match self.toks.get(self.pos).cloned() {
            Some((_, Token::Open)) => {
                self.pos += 1;
                let e = self.expr()?;
                match self.toks.get(self.pos) {
                    Some((_, Token::Close)) => {
                        self.pos += 1;
                        Ok(e)
                    }
                    _ => Err(self.err(self.here(), "expected `)`")),
                }
            }
            Some((_, Token::Name(n)))
                if n == "gen" && matches!(self.toks.get(self.pos + 1), Some((_, Token::Open))) =>
            {
                self.pos += 2;
                let name_at = self.here();
                let Some((_, Token::Name(inner))) = self.toks.get(self.pos).cloned() else {
                    return Err(self.err(name_at, "expected a cell name inside `gen(...)`"));
                };
                self.pos += 1;
                if !matches!(self.toks.get(self.pos), Some((_, Token::Close))) {
                    return Err(self.err(self.here(), "expected `)`"));
                }
                self.pos += 1;
                (self.lookup)(&inner).ok_or_else(|| self.err(name_at, format!("unknown cell `{inner}`")))
            }
            Some((_, Token::Name(n))) => {
                self.pos += 1;
                (self.lookup)(&n).ok_or_else(|| self.err(at, format!("unknown cell `{n}`")))
            }
            _ => Err(self.err(at, "expected a cell name or `(`")),
        }
    }
}

fn build(operands: &[Expr], ops: &[usize]) -> Expr {
    if ops.is_empty() {
        return operands[0].clone();
    }
    let max = *ops.iter().max().unwrap();
    let i = ops.iter().rposition(|&k| k == max).unwrap();
    Expr::comp(max, build(&operands[..=i], &ops[..i]), build(&operands[i + 1..], &ops[i + 1..]))
}

/// A parsed file: the polygraph and an optional `universal = ...` line.
#[derive(Debug, Clone)]
pub struct Document {
    pub polygraph: Polygraph,
    pub universal: Option<Expr>,
}

fn strip_comment(line: &str) -> &str {
    line.split('#').next().unwrap_or("")
}

pub fn parse_polygraph(text: &str) -> Result<Polygraph, ParseError> {
    let doc = parse_document(text)?;
    if doc.universal.is_some() {
        let line = text.lines().position(|l| strip_comment(l).trim_start().starts_with("universal")).unwrap_or(0) + 1;
        return Err(ParseError { line, column: 1, message: "unexpected `universal` line in a polygraph file".into() });
    }
    Ok(doc.polygraph)
}

pub fn parse_document(text: &str) -> Result<Document, ParseError> {
    let mut b = PolygraphBuilder::new();
    let mut last_dim = 0;
    let mut universal_src: Option<(usize, usize, String)> = None;
    for (i, raw) in text.lines().enumerate() {
        let line_no = i + 1;
        let line = strip_comment(raw);
        let trimmed = line.trim_start();
        if trimmed.trim().is_empty() {
            continue;
        }
        let indent = line.chars().count() - trimmed.chars().count();
        let err = |col: usize, message: String| ParseError { line: line_no, column: indent + col, message };
        if let Some(rest) = trimmed.strip_prefix("universal") {
            let rest_trim = rest.trim_start();
            let Some(expr) = rest_trim.strip_prefix('=') else {
                return Err(err(10, "expected `=` after `universal`".into()));
            };
            if universal_src.is_some() {
                return Err(err(1, "second `universal` line".into()));
            }
            let offset = indent + trimmed.chars().count() - expr.chars().count();
            universal_src = Some((line_no, offset, expr.to_string()));
            continue;
        }
        if universal_src.is_some() {
            return Err(err(1, "cell declarations must precede the `universal` line".into()));
        }
        let Some(rest) = trimmed.strip_prefix("cell") else {
            return Err(err(1, "expected `cell` or `universal`".into()));
        };
        if !rest.starts_with(char::is_whitespace) {
            return Err(err(5, "expected whitespace after `cell`".into()));
        }
        let (head, boundary) = match rest.find('=') {
            Some(p) => (&rest[..p], Some(&rest[p + 1..])),
            None => (rest, None),
        };
        let Some((name_part, dim_part)) = head.split_once(':') else {
            return Err(err(5, "expected `<name> : <dim>`".into()));
        };
        let name = name_part.trim();
        if !is_valid_name(name) {
            return Err(err(5, format!("invalid cell name `{name}`")));
        }
        let dim: usize = dim_part.trim().parse().map_err(|_| {
            err(5 + head.find(':').unwrap_or(0) + 1, format!("invalid dimension `{}`", dim_part.trim()))
        })?;
        if dim > MAX_DIM {
            return Err(err(5, format!("dimension {dim} exceeds the maximum {MAX_DIM}")));
        }
        if dim < last_dim {
            return Err(err(
                1,
                format!("ordering error: `{name}` has dimension {dim} after a cell of dimension {last_dim}"),
            ));
        }
        last_dim = dim;
        let col_of = |s: &str| indent + trimmed.chars().count() - s.chars().count() + 1;
        let bnd = match (dim, boundary) {
            (0, None) => None,
            (0, Some(_)) => return Err(err(1, "a 0-cell has no boundary".into())),
            (_, None) => return Err(err(1, format!("a {dim}-cell needs `= <source> => <target>`"))),
            (_, Some(bs)) => {
                let Some((s, t)) = bs.split_once("=>") else {
                    return Err(ParseError { line: line_no, column: col_of(bs), message: "expected `=>`".into() });
                };
                let lookup = |n: &str| b.lookup(n).map(Expr::gen);
                let se = parse_expr_with(s, &lookup).map_err(|e| e.shifted(line_no, col_of(s) - 1))?;
                let te = parse_expr_with(t, &lookup).map_err(|e| e.shifted(line_no, col_of(t) - 1))?;
                Some((se, te))
            }
        };
        b.try_add(name, dim, bnd).map_err(|e| err(1, e.to_string()))?;
    }
    let polygraph = b.build();
    let universal = match universal_src {
        None => None,
        Some((line, offset, src)) => Some(parse_expr(&polygraph, &src).map_err(|e| e.shifted(line, offset))?),
    };
    Ok(Document { polygraph, universal })
}

/// Serializes cells in declaration order, stably sorted by dimension.
pub fn write_polygraph(pg: &Polygraph) -> String {
    let mut ids: Vec<_> = pg.ids().collect();
    ids.sort_by_key(|&c| pg.dim(c));
    let mut out = String::new();
    for c in ids {
        let cell = pg.cell(c);
        match &cell.boundary {
            None => {
                let _ = writeln!(out, "cell {} : {}", cell.name, cell.dim);
            }
            Some((s, t)) => {
                let _ = writeln!(out, "cell {} : {} = {} => {}", cell.name, cell.dim, s.display(pg), t.display(pg));
            }
        }
    }
    out
}

pub fn write_document(pg: &Polygraph, universal: &Expr) -> String {
    let mut out = write_polygraph(pg);
    let _ = writeln!(out, "universal = {}", universal.display(pg));
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    const U: &str = "\
cell x : 0
cell y : 0
cell z : 0
cell f : 1 = x => y
cell g : 1 = x => y
cell v : 1 = y => z
cell alpha : 2 = f => g
cell alpha' : 2 = f *0 v => g *0 v
cell U : 3 = alpha *0 v => alpha'
";

    #[test]
    fn parses_and_round_trips() {
        let pg = parse_polygraph(U).unwrap();
        assert_eq!(pg.len(), 9);
        let again = parse_polygraph(&write_polygraph(&pg)).unwrap();
        assert_eq!(pg, again);
    }

    #[test]
    fn precedence_and_gen() {
        let pg = parse_polygraph(U).unwrap();
        let e = parse_expr(&pg, "gen(alpha) *0 v *1 alpha'").unwrap();
        let Expr::Comp(1, l, _) = &e else { panic!("expected a 1-composite at the root: {e:?}") };
        assert!(matches!(&**l, Expr::Comp(0, _, _)));
    }

    #[test]
    fn unknown_name_is_positioned() {
        let err = parse_polygraph("cell x : 0\ncell f : 1 = x => q\n").unwrap_err();
        assert_eq!((err.line, err.column), (2, 19));
    }

    #[test]
    fn ordering_error() {
        let err = parse_polygraph("cell x : 0\ncell a : 2 = x => x\ncell f : 1 = x => x\n").unwrap_err();
        assert_eq!(err.line, 3);
        assert!(err.message.contains("ordering"));
    }

    #[test]
    fn empty_file() {
        assert!(parse_polygraph("# nothing\n\n").unwrap().is_empty());
    }
}
