mod common;

use std::sync::Arc;

use polyplex::corpus;
use polyplex::freecat::Sign;
use polyplex::polyplex::{
    automorphism_group, compose, eval, find_chain, labeled_isomorphisms, locate_cell, make_plex, polyplexes_isomorphic,
    LabeledDiagram, Location, Polyplex, PolyplexError,
};
use polyplex::text::parse_expr;
use polyplex::{arrows_equal, classify, CellId, Polygraph, Verdict};
use proptest::prelude::*;
use rand::rngs::StdRng;
use rand::SeedableRng;

fn plex(e: corpus::Example) -> Polyplex {
    Polyplex::new(e.pg, e.expr).unwrap()
}

fn iso(p: &Polyplex, q: &Polyplex) -> bool {
    matches!(polyplexes_isomorphic(p, q), Ok(Some(_)))
}

/// The cell of a diagram labeled by the ambient cell `name`.
fn labeled(ld: &LabeledDiagram, ambient: &Polygraph, name: &str) -> CellId {
    let target = ambient.lookup(name).unwrap();
    let pre = ld.labeling.preimage(target);
    assert_eq!(pre.len(), 1, "{name} occurs once");
    pre[0]
}

#[test]
fn plexes_from_parallel_pairs() {
    let p1 = plex(corpus::path(1));
    let globe = make_plex(&p1, &p1, "A", 2).unwrap();
    assert!(iso(&globe, &plex(corpus::plex_a(1, 1))));
    let p2 = plex(corpus::path(2));
    assert!(iso(&make_plex(&p2, &p2, "A", 2).unwrap(), &plex(corpus::plex_a(2, 2))));
    let d1 = plex(corpus::by_name("d1").unwrap());
    let u = make_plex(&d1, &plex(corpus::plex_a(2, 2)), "U", 3).unwrap();
    assert_eq!(u.pg().counts_by_dim(), vec![3, 3, 2, 1]);
    assert!(iso(&u, &plex(corpus::u_plex())));
}

#[test]
fn non_parallel_plex_is_rejected() {
    let p1 = plex(corpus::path(1));
    let p2 = plex(corpus::path(2));
    assert!(make_plex(&p1, &p2, "A", 2).is_ok());
    let a11 = plex(corpus::plex_a(1, 1));
    assert!(matches!(make_plex(&a11, &p2, "B", 3), Err(PolyplexError::NotParallel(_))));
    assert!(matches!(make_plex(&p1, &p1, "B", 1), Err(PolyplexError::NotParallel(_))));
}

#[test]
fn composites() {
    let a11 = plex(corpus::plex_a(1, 1));
    let p1 = plex(corpus::path(1));
    assert!(iso(&compose(&a11, 0, &p1).unwrap(), &plex(corpus::by_name("d1").unwrap())));
    let u = plex(corpus::u_plex());
    let w = compose(&u, 0, &a11).unwrap();
    assert_eq!(w.pg().counts_by_dim(), vec![4, 5, 3, 1]);
    for k in 0..u.dim() {
        let t = u.boundary(k, Sign::Plus).unwrap();
        assert!(iso(&compose(&u, k, &t.plex).unwrap(), &u), "unit on the {k}-target");
    }
    assert!(matches!(compose(&p1, 0, &a11), Ok(_)));
    assert!(matches!(compose(&a11, 1, &plex(corpus::plex_a(2, 1))), Err(PolyplexError::BoundaryMismatch(_))));
}

#[test]
fn boundary_at_or_above_dimension_is_the_identity() {
    let u = plex(corpus::u_plex());
    let b = u.boundary(3, Sign::Minus).unwrap();
    assert!(b.labeling.is_identity());
    let b = u.boundary(2, Sign::Minus).unwrap();
    assert!(b.labeling.is_injective());
    assert!(iso(&b.plex, &plex(corpus::by_name("d1").unwrap())));
}

#[test]
fn evaluation() {
    let (a, b) = corpus::iso_pair();
    let x = a.pg.lookup("alpha").unwrap();
    let g = eval(&a.pg, &polyplex::Expr::gen(x)).unwrap();
    assert!(iso(&g.plex, &plex(corpus::plex_a(1, 1))));
    assert_eq!(g.labeling.apply(g.plex.pg().cells_of_dim(2)[0]), x);
    let la = eval(&a.pg, &a.expr).unwrap();
    assert!(la.unique);
    let t = la.plex.boundary(2, Sign::Plus).unwrap();
    let arrow = la.labeling.apply_expr(&t.labeled_arrow());
    let want = parse_expr(&a.pg, "(alpha' *0 k) *1 (g *0 beta')").unwrap();
    let other = parse_expr(&a.pg, "(f *0 beta') *1 (alpha' *0 h)").unwrap();
    let v = arrows_equal(&a.pg, &arrow, &want).unwrap();
    let w = arrows_equal(&a.pg, &arrow, &other).unwrap();
    assert!(v == Verdict::Equal || w == Verdict::Equal);
    let lb = eval(&b.pg, &b.expr).unwrap();
    assert!(!iso(&la.plex, &lb.plex));
}

#[test]
fn rebracketing_gives_one_labeled_isomorphism() {
    let p = corpus::path(3);
    let e = parse_expr(&p.pg, "(e1 *0 e2) *0 e3").unwrap();
    let f = parse_expr(&p.pg, "e1 *0 (e2 *0 e3)").unwrap();
    let m = labeled_isomorphisms(&eval(&p.pg, &e).unwrap(), &eval(&p.pg, &f).unwrap()).unwrap();
    assert_eq!(m.found.len(), 1);
}

#[test]
fn isomorphism_examples() {
    let u = plex(corpus::u_plex());
    assert!(polyplexes_isomorphic(&u, &u).unwrap().unwrap().is_identity());
    let d1 = plex(corpus::by_name("d1").unwrap());
    let d2 = plex(corpus::by_name("d2").unwrap());
    assert!(polyplexes_isomorphic(&d1, &d2).unwrap().is_none());
}

#[test]
fn automorphism_groups() {
    for name in ["p0", "p2", "a11", "a22", "d1", "u", "v", "iso-pair-first", "forest-first"] {
        let e = corpus::by_name(name).unwrap();
        let ld = eval(&e.pg, &e.expr).unwrap();
        let g = automorphism_group(&ld.plex).unwrap();
        assert!(g.is_trivial(), "{name}: order {}", g.order());
    }
    let eh = corpus::eckmann_hilton();
    let g = automorphism_group(&eval(&eh.pg, &eh.expr).unwrap().plex).unwrap();
    assert_eq!(g.order(), 2);
    let moved = g.elements.iter().find(|m| !m.is_identity()).unwrap();
    let twos = moved.source.cells_of_dim(2);
    assert!(twos.iter().all(|&c| moved.apply(c) != c));
}

#[test]
fn cell_locations() {
    let u = plex(corpus::u_plex());
    let id = |n: &str| u.pg().lookup(n).unwrap();
    assert_eq!(locate_cell(&u, id("alpha")).unwrap(), Location::SourceSide);
    assert_eq!(locate_cell(&u, id("alpha'")).unwrap(), Location::TargetOf(id("U")));
    let (a, _) = corpus::forest();
    let ld = eval(&a.pg, &a.expr).unwrap();
    let b2 = labeled(&ld, &a.pg, "B'");
    let v = labeled(&ld, &a.pg, "V");
    assert_eq!(locate_cell(&ld.plex, b2).unwrap(), Location::TargetOf(v));
}

#[test]
fn chains() {
    let u = plex(corpus::u_plex());
    let top = u.pg().lookup("U").unwrap();
    assert_eq!(find_chain(&u, top).unwrap(), Some(vec![top]));
    // Both V cells below already touch the 2-source of the composite, so
    // the shortest chain is V alone.
    let (a, _) = corpus::iso_pair();
    let ld = eval(&a.pg, &a.expr).unwrap();
    let v = labeled(&ld, &a.pg, "V");
    assert_eq!(find_chain(&ld.plex, v).unwrap(), Some(vec![v]));
    let (f, _) = corpus::forest();
    let ld = eval(&f.pg, &f.expr).unwrap();
    let v = labeled(&ld, &f.pg, "V");
    assert_eq!(find_chain(&ld.plex, v).unwrap(), Some(vec![v]));
}

fn source_positive_ambient() -> Vec<Arc<Polygraph>> {
    common::ambient().into_iter().map(|(_, pg)| pg).filter(|pg| classify(pg).source_positive).collect()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn labeling_recovers_the_expression(seed in any::<u64>(), which in 0usize..5) {
        let pgs = source_positive_ambient();
        let pg = &pgs[which % pgs.len()];
        let mut rng = StdRng::seed_from_u64(seed);
        let e = common::random_expr(&mut rng, pg, 5).unwrap();
        let ld = eval(pg, &e).unwrap();
        prop_assert!(ld.unique);
        prop_assert!(ld.labeling.check().is_ok());
        prop_assert_eq!(arrows_equal(pg, &ld.labeling.apply_expr(ld.plex.universal()), &e).unwrap(), Verdict::Equal);
        prop_assert!(automorphism_group(&ld.plex).unwrap().is_trivial());
    }

    #[test]
    fn equal_expressions_have_one_labeled_isomorphism(seed in any::<u64>(), which in 0usize..5) {
        let pgs = source_positive_ambient();
        let pg = &pgs[which % pgs.len()];
        let mut rng = StdRng::seed_from_u64(seed);
        let e = common::random_expr(&mut rng, pg, 5).unwrap();
        let d = common::random_derivation(&mut rng, pg, &e, 4, 3);
        let m = labeled_isomorphisms(&eval(pg, &e).unwrap(), &eval(pg, d.end()).unwrap()).unwrap();
        prop_assert_eq!(m.found.len(), 1);
        prop_assert!(m.unresolved.is_empty());
    }
}
