//! Built-in example polygraphs and expressions.

use std::sync::Arc;

use crate::expr::Expr;
use crate::polygraph::{CellId, Polygraph, PolygraphBuilder};
use crate::text::{parse_document, parse_expr, parse_polygraph};

/// The plex U: a 3-cell from `alpha *0 v` to `alpha'`.
pub const U_PLEX: &str = "\
cell x : 0
cell y : 0
cell z : 0
cell f : 1 = x => y
cell g : 1 = x => y
cell v : 1 = y => z
cell alpha : 2 = f => g
cell alpha' : 2 = f *0 v => g *0 v
cell U : 3 = alpha *0 v => alpha'
universal = U
";

/// The mirror plex V: a 3-cell from `v *0 beta` to `beta'`.
pub const V_PLEX: &str = "\
cell y : 0
cell z : 0
cell w : 0
cell v : 1 = y => z
cell k : 1 = z => w
cell h : 1 = z => w
cell beta : 2 = k => h
cell beta' : 2 = v *0 k => v *0 h
cell V : 3 = v *0 beta => beta'
universal = V
";

/// The whiskered 2-cell `alpha *0 v`.
pub const D1: &str = "\
cell x : 0
cell y : 0
cell z : 0
cell f : 1 = x => y
cell g : 1 = x => y
cell v : 1 = y => z
cell alpha : 2 = f => g
universal = alpha *0 v
";

/// The whiskered 2-cell `v *0 beta`.
pub const D2: &str = "\
cell y : 0
cell z : 0
cell w : 0
cell v : 1 = y => z
cell k : 1 = z => w
cell h : 1 = z => w
cell beta : 2 = k => h
universal = v *0 beta
";

/// Ambient polygraph of the two composites with isomorphic underlying
/// polygraphs but different universal arrows.
pub const ISO_PAIR: &str = "\
cell x : 0
cell y : 0
cell z : 0
cell w : 0
cell f : 1 = x => y
cell g : 1 = x => y
cell v : 1 = y => z
cell k : 1 = z => w
cell h : 1 = z => w
cell alpha : 2 = f => g
cell beta : 2 = k => h
cell alpha' : 2 = f *0 v => g *0 v
cell beta' : 2 = v *0 k => v *0 h
cell U : 3 = alpha *0 v => alpha'
cell V : 3 = v *0 beta => beta'
";

pub const ISO_PAIR_FIRST: &str = "(U *0 beta) *2 ((f *0 V) *1 (alpha' *0 h))";
pub const ISO_PAIR_SECOND: &str = "(U *0 beta) *2 ((alpha' *0 k) *1 (g *0 V))";

/// Two 3-cells acting on a 2-by-2 grid of 2-cells.
pub const FOREST: &str = "\
cell a : 0
cell b : 0
cell c : 0
cell f1 : 1 = a => b
cell f2 : 1 = a => b
cell f3 : 1 = a => b
cell g1 : 1 = b => c
cell g2 : 1 = b => c
cell g3 : 1 = b => c
cell A : 2 = f1 => f2
cell A' : 2 = f1 => f2
cell C : 2 = f2 => f3
cell C' : 2 = f2 => f3
cell B : 2 = g1 => g2
cell B' : 2 = g1 => g2
cell D : 2 = g2 => g3
cell D' : 2 = g2 => g3
cell U : 3 = A *0 D => A' *0 D'
cell V : 3 = C *0 B => C' *0 B'
";

pub const FOREST_FIRST: &str = "((f1 *0 B) *1 U *1 (C *0 g3)) *2 ((A' *0 g1) *1 V *1 (f3 *0 D'))";
pub const FOREST_SECOND: &str = "((A *0 g1) *1 V *1 (f3 *0 D)) *2 ((f1 *0 B') *1 U *1 (C' *0 g3))";
pub const FOREST_SOURCE: &str = "(A *1 C) *0 (B *1 D)";
pub const FOREST_TARGET: &str = "(A' *1 C') *0 (B' *1 D')";

/// One 0-cell and two 2-cells on its identity.
pub const ECKMANN_HILTON: &str = "\
cell e : 0
cell x : 2 = e => e
cell y : 2 = e => e
";

/// A polygraph with a distinguished expression.
#[derive(Clone, Debug)]
pub struct Example {
    pub pg: Arc<Polygraph>,
    pub expr: Expr,
}

fn doc(text: &str) -> Example {
    let d = parse_document(text).expect("corpus text parses");
    Example { pg: Arc::new(d.polygraph), expr: d.universal.expect("corpus text has a universal line") }
}

fn with_expr(pg_text: &str, expr: &str) -> Example {
    let pg = parse_polygraph(pg_text).expect("corpus text parses");
    let expr = parse_expr(&pg, expr).expect("corpus expression parses");
    Example { pg: Arc::new(pg), expr }
}

/// The path `a0 -> a1 -> ... -> an` with universal arrow its composite.
pub fn path(n: usize) -> Example {
    let mut b = PolygraphBuilder::new();
    let pts: Vec<CellId> = (0..=n).map(|i| b.point(&format!("a{i}"))).collect();
    let edges: Vec<CellId> =
        (0..n).map(|i| b.cell(&format!("e{}", i + 1), 1, Expr::gen(pts[i]), Expr::gen(pts[i + 1]))).collect();
    let expr = Expr::chain(0, edges.into_iter().map(Expr::gen)).unwrap_or(Expr::gen(pts[0]));
    Example { pg: Arc::new(b.build()), expr }
}

/// The 2-plex with a source path of length `n` and a target path of length
/// `m` sharing their endpoints.
pub fn plex_a(n: usize, m: usize) -> Example {
    let mut b = PolygraphBuilder::new();
    let start = b.point("a0");
    let s_mid: Vec<CellId> = (1..n).map(|i| b.point(&format!("s{i}"))).collect();
    let t_mid: Vec<CellId> = (1..m).map(|i| b.point(&format!("t{i}"))).collect();
    let end = if n == 0 || m == 0 { start } else { b.point("a1") };
    let side = |b: &mut PolygraphBuilder, prefix: &str, len: usize, mid: &[CellId]| -> Expr {
        let mut pts = vec![start];
        pts.extend_from_slice(mid);
        pts.push(end);
        let edges: Vec<Expr> = (0..len)
            .map(|i| Expr::gen(b.cell(&format!("{prefix}{}", i + 1), 1, Expr::gen(pts[i]), Expr::gen(pts[i + 1]))))
            .collect();
        Expr::chain(0, edges).unwrap_or(Expr::gen(start))
    };
    let s = side(&mut b, "f", n, &s_mid);
    let t = side(&mut b, "g", m, &t_mid);
    let top = b.cell("A", 2, s, t);
    Example { pg: Arc::new(b.build()), expr: Expr::gen(top) }
}

pub fn u_plex() -> Example {
    doc(U_PLEX)
}

pub fn v_plex() -> Example {
    doc(V_PLEX)
}

pub fn iso_pair() -> (Example, Example) {
    (with_expr(ISO_PAIR, ISO_PAIR_FIRST), with_expr(ISO_PAIR, ISO_PAIR_SECOND))
}

pub fn forest() -> (Example, Example) {
    (with_expr(FOREST, FOREST_FIRST), with_expr(FOREST, FOREST_SECOND))
}

/// The Eckmann–Hilton polygraph with universal arrow `x *1 y`.
pub fn eckmann_hilton() -> Example {
    with_expr(ECKMANN_HILTON, "x *1 y")
}

/// Names accepted by [`by_name`].
pub const NAMES: &[&str] = &[
    "p0",
    "p1",
    "p2",
    "p3",
    "a11",
    "a22",
    "d1",
    "d2",
    "u",
    "v",
    "iso-pair-first",
    "iso-pair-second",
    "forest-first",
    "forest-second",
    "forest-g",
    "forest-u",
    "forest-v",
    "eh",
    "eh-polyplex",
];

/// Looks up a corpus entry: `p<n>`, `a<n>-<m>` (or `a<n><m>` for single
/// digits), `d1`, `d2`, `u`, `v`, the composite pairs and `eh`.
pub fn by_name(name: &str) -> Option<Example> {
    if let Some(n) = name.strip_prefix('p').and_then(|r| r.parse().ok()) {
        return Some(path(n));
    }
    if let Some(rest) = name.strip_prefix('a') {
        let parsed = match rest.split_once('-') {
            Some((n, m)) => n.parse().ok().zip(m.parse().ok()),
            None if rest.len() == 2 => rest[..1].parse().ok().zip(rest[1..].parse().ok()),
            None => None,
        };
        if let Some((n, m)) = parsed {
            return Some(plex_a(n, m));
        }
    }
    Some(match name {
        "d1" => doc(D1),
        "d2" => doc(D2),
        "forest-g" => with_expr(FOREST, FOREST_SOURCE),
        "forest-u" => with_expr(FOREST, "U"),
        "forest-v" => with_expr(FOREST, "V"),
        "u" => u_plex(),
        "v" => v_plex(),
        "iso-pair-first" => iso_pair().0,
        "iso-pair-second" => iso_pair().1,
        "forest-first" => forest().0,
        "forest-second" => forest().1,
        "eh" | "eh-polyplex" => eckmann_hilton(),
        _ => return None,
    })
}
