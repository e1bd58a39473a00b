//! Acceptance run: one PASS/FAIL line per criterion.

mod common;

use std::collections::{BTreeMap, BTreeSet};
use std::sync::Arc;
use std::time::{Duration, Instant};

use polyplex::analyzer::{
    census_budget, census_check, certify_good, eckmann_hilton_chains, enumerate, enumerate_plexes, CertVerdict,
    ClassKind, ClassSpec, EnumerationBudget,
};
use polyplex::corpus;
use polyplex::freecat::{self, check_derivation, oracle::oracle_equal_with, OracleReason, Sign};
use polyplex::iso::find_isomorphisms;
use polyplex::polyplex::{
    automorphism_group, cell_locations, compose_with_inclusions, eval, find_chain, labeled_isomorphisms,
    polyplexes_isomorphic, Polyplex,
};
use polyplex::text::parse_expr;
use polyplex::{arrows_equal, classify, CellId, Expr, Polygraph, PolygraphMorphism, Verdict};
use rand::rngs::StdRng;
use rand::SeedableRng;

type Outcome = Result<String, String>;

fn ensure(cond: bool, msg: impl Into<String>) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg.into())
    }
}

fn equal(pg: &Polygraph, a: &Expr, b: &Expr) -> bool {
    matches!(arrows_equal(pg, a, b), Ok(Verdict::Equal))
}

fn criterion_1() -> Outcome {
    let (a, b) = corpus::iso_pair();
    let la = eval(&a.pg, &a.expr).map_err(|e| e.to_string())?;
    let lb = eval(&b.pg, &b.expr).map_err(|e| e.to_string())?;
    let isos = find_isomorphisms(la.plex.pg(), lb.plex.pg(), &[]);
    ensure(!isos.is_empty(), "underlying polygraphs are not isomorphic")?;
    ensure(matches!(polyplexes_isomorphic(&la.plex, &lb.plex), Ok(None)), "polyplexes should not be isomorphic")?;
    let ta = la.plex.boundary(2, Sign::Plus).map_err(|e| e.to_string())?;
    let tb = lb.plex.boundary(2, Sign::Plus).map_err(|e| e.to_string())?;
    ensure(matches!(polyplexes_isomorphic(&ta.plex, &tb.plex), Ok(None)), "2-targets should not be isomorphic")?;
    let got: Vec<Expr> =
        [(&la, &ta), (&lb, &tb)].iter().map(|(ld, t)| ld.labeling.apply_expr(&t.labeled_arrow())).collect();
    let want = [
        parse_expr(&a.pg, "(alpha' *0 k) *1 (g *0 beta')").unwrap(),
        parse_expr(&a.pg, "(f *0 beta') *1 (alpha' *0 h)").unwrap(),
    ];
    let realized = (equal(&a.pg, &got[0], &want[0]) && equal(&a.pg, &got[1], &want[1]))
        || (equal(&a.pg, &got[0], &want[1]) && equal(&a.pg, &got[1], &want[0]));
    ensure(realized, "2-targets do not realize the expected arrows")?;
    let u = corpus::u_plex();
    let p = Polyplex::new(u.pg.clone(), u.expr.clone()).map_err(|e| e.to_string())?;
    let t = p.boundary(2, Sign::Plus).map_err(|e| e.to_string())?;
    let v = u.pg.lookup("v").unwrap();
    let ones = t.plex.pg().cells_of_dim(1);
    let mut images: BTreeMap<CellId, usize> = BTreeMap::new();
    for &c in &ones {
        *images.entry(t.labeling.apply(c)).or_default() += 1;
    }
    let collapsed: Vec<_> = images.iter().filter(|(_, &n)| n > 1).collect();
    ensure(
        collapsed.len() == 1 && *collapsed[0].0 == v && *collapsed[0].1 == 2,
        format!("expected exactly two 1-cells onto v, got {collapsed:?}"),
    )?;
    Ok(format!("{} polygraph isomorphism(s), polyplexes and 2-targets distinct, two 1-cells onto v", isos.len()))
}

fn criterion_2() -> Outcome {
    let (a, b) = corpus::forest();
    let la = eval(&a.pg, &a.expr).map_err(|e| e.to_string())?;
    let lb = eval(&b.pg, &b.expr).map_err(|e| e.to_string())?;
    let (ca, cb) = (la.plex.canonical().0, lb.plex.canonical().0);
    ensure(ca.pg().counts_by_dim() == [3, 6, 8, 2], format!("counts {:?}", ca.pg().counts_by_dim()))?;
    ensure(
        polyplex::text::write_polygraph(ca.pg()) == polyplex::text::write_polygraph(cb.pg())
            || !find_isomorphisms(ca.pg(), cb.pg(), &[]).is_empty(),
        "underlying polygraphs differ",
    )?;
    for sign in [Sign::Minus, Sign::Plus] {
        let x = freecat::boundary(&a.pg, &a.expr, 2, sign).map_err(|e| e.to_string())?;
        let y = freecat::boundary(&a.pg, &b.expr, 2, sign).map_err(|e| e.to_string())?;
        ensure(equal(&a.pg, &x, &y), format!("2-boundaries ({sign:?}) differ"))?;
    }
    let v = arrows_equal(&a.pg, &a.expr, &b.expr).map_err(|e| e.to_string())?;
    match v {
        Verdict::Unequal => Ok("counts [3, 6, 8, 2], equal 2-boundaries, composites unequal".into()),
        Verdict::Unknown => {
            let o = oracle_equal_with(&a.pg, &a.expr, &b.expr, 40, 2_000_000).map_err(|e| e.to_string())?;
            ensure(o.verdict == Verdict::Unequal, format!("oracle says {:?}", o.reason))?;
            Ok("composites unequal by oracle".into())
        }
        Verdict::Equal => Err("composites reported equal".into()),
    }
}

fn criterion_3() -> Outcome {
    let eh = corpus::eckmann_hilton();
    let (first, second) = eckmann_hilton_chains(&eh.pg);
    for d in [&first, &second] {
        check_derivation(&eh.pg, d).map_err(|e| e.to_string())?;
    }
    let mut joined = first.reversed();
    joined.append(second);
    check_derivation(&eh.pg, &joined).map_err(|e| e.to_string())?;
    let ld = eval(&eh.pg, &eh.expr).map_err(|e| e.to_string())?;
    let g = automorphism_group(&ld.plex).map_err(|e| e.to_string())?;
    ensure(g.order() == 2 && g.unresolved.is_empty(), format!("group order {}", g.order()))?;
    let rep = certify_good(&ClassSpec::new(ClassKind::All), &EnumerationBudget::new(2, 3));
    ensure(rep.verdict == CertVerdict::Refuted, format!("verdict {}", rep.verdict))?;
    let hit = rep.witnesses.iter().any(|w| matches!(polyplexes_isomorphic(&w.plex, &ld.plex), Ok(Some(_))));
    ensure(hit, "the x *1 y polyplex is not among the witnesses")?;
    Ok(format!(
        "{} derivation steps, group order 2, refuted with {} witness(es)",
        joined.steps.len(),
        rep.witnesses.len()
    ))
}

fn criterion_4() -> Outcome {
    let budget = EnumerationBudget::new(3, 8);
    let mut parts = Vec::new();
    for kind in [ClassKind::SourcePositive, ClassKind::TargetPositive, ClassKind::Positive, ClassKind::ManyToOne] {
        let rep = certify_good(&ClassSpec::new(kind), &budget);
        ensure(
            rep.verdict == CertVerdict::CertifiedGoodUpToBudget && rep.quarantined.is_empty(),
            format!("{}: {} ({} quarantined)", kind.name(), rep.verdict, rep.quarantined.len()),
        )?;
        ensure(rep.condition_c.failures.is_empty(), format!("{}: associativity failures", kind.name()))?;
        parts.push(format!("{} {:?}", kind.name(), rep.polyplexes_by_dim));
    }
    Ok(parts.join("; "))
}

fn criterion_5() -> Outcome {
    let plexes = enumerate_plexes(&ClassSpec::new(ClassKind::All), &census_budget(6));
    let (extra, missing) = census_check(&plexes, 6).map_err(|e| e.to_string())?;
    ensure(extra.is_empty() && missing.is_empty(), format!("extra {extra:?}, missing {missing:?}"))?;
    let mut removed = 0;
    for p in &plexes {
        if !classify(p.pg()).positive {
            removed += 1;
            let pg = p.pg();
            let is_point = |e: &Expr| matches!(e, Expr::Gen(c) if pg.dim(*c) == 0);
            let one_side_empty =
                pg.cells_of_dim(2).iter().any(|&c| is_point(pg.src(c).unwrap()) || is_point(pg.tgt(c).unwrap()));
            ensure(one_side_empty, "positive filter removed a plex with both sides nonempty")?;
        }
    }
    // P_0, P_1 and every A_{n,m} with n+m <= 6 are 2 + 28 plexes; n = 0 or m = 0 gives 13.
    ensure(plexes.len() == 30 && removed == 13, format!("{} plexes, {removed} removed", plexes.len()))?;
    Ok("30 plexes, positive filter removes 13".into())
}

fn injective_on(m: &PolygraphMorphism, d: usize) -> bool {
    let cells = m.source.cells_of_dim(d);
    let images: BTreeSet<CellId> = cells.iter().map(|&c| m.apply(c)).collect();
    images.len() == cells.len()
}

fn invariant_violations(p: &Polyplex, source_positive: bool) -> Vec<String> {
    let mut out = Vec::new();
    let pg = p.pg();
    let name = || p.universal().display(pg).to_string();
    match freecat::support_cells(pg, p.universal()) {
        Ok(s) if s.len() == pg.len() => {}
        _ => out.push(format!("{}: not generated by its universal arrow", name())),
    }
    let d = p.dim();
    if d == 0 {
        return out;
    }
    let n = d - 1;
    for sign in [Sign::Minus, Sign::Plus] {
        match p.boundary(n, sign) {
            Ok(b) if injective_on(&b.labeling, n) => {}
            Ok(_) => out.push(format!("{}: boundary {n} {sign:?} not injective on {n}-cells", name())),
            Err(e) => out.push(format!("{}: boundary {n}: {e}", name())),
        }
    }
    for c in pg.cells_of_dim(n) {
        match cell_locations(p, c) {
            Ok(l) if l.in_source != !l.targets.is_empty() && l.targets.len() <= 1 => {}
            Ok(l) => out.push(format!("{}: {} located {l:?}", name(), pg.name(c))),
            Err(e) => out.push(format!("{}: locate {}: {e}", name(), pg.name(c))),
        }
    }
    if source_positive {
        for x in pg.cells_of_dim(d) {
            if !matches!(find_chain(p, x), Ok(Some(ref ch)) if ch.last() == Some(&x)) {
                out.push(format!("{}: no chain reaches {}", name(), pg.name(x)));
            }
        }
    }
    out
}

const INCLUSION_SAMPLE: usize = 300;

fn inclusion_violations(ps: &[Polyplex]) -> (usize, Vec<String>) {
    let mut checked = 0;
    let mut out = Vec::new();
    for p in ps.iter().rev() {
        for q in ps.iter().rev() {
            for k in 0..p.dim().min(q.dim()) {
                let Ok((r, left, right)) = compose_with_inclusions(p, k, q) else { continue };
                checked += 1;
                let top = r.dim();
                for (side, m) in [("left", &left), ("right", &right)] {
                    for dd in [top.saturating_sub(1), top] {
                        if !injective_on(m, dd) {
                            out.push(format!(
                                "{} *{k} ...: {side} inclusion not injective on {dd}-cells",
                                p.universal().display(p.pg())
                            ));
                        }
                    }
                }
                if checked >= INCLUSION_SAMPLE {
                    return (checked, out);
                }
            }
        }
    }
    (checked, out)
}

fn criterion_6() -> Outcome {
    let budget = EnumerationBudget::new(3, 8);
    let mut parts = Vec::new();
    for kind in [ClassKind::SourcePositive, ClassKind::TargetPositive] {
        let en = enumerate(&ClassSpec::new(kind), &budget);
        ensure(en.quarantined.is_empty(), format!("{}: quarantined candidates", kind.name()))?;
        let mut violations = Vec::new();
        for p in &en.polyplexes {
            violations.extend(invariant_violations(p, kind == ClassKind::SourcePositive));
            if let Ok(g) = automorphism_group(p) {
                if !g.is_trivial() {
                    violations.push(format!("{}: nontrivial automorphism group", p.universal().display(p.pg())));
                }
            }
        }
        let (checked, incl) = inclusion_violations(&en.polyplexes);
        violations.extend(incl);
        if let Some(first) = violations.first() {
            return Err(format!("{}: {} violations, first: {first}", kind.name(), violations.len()));
        }
        parts.push(format!("{} {} polyplexes, {checked} composites", kind.name(), en.polyplexes.len()));
    }
    Ok(parts.join("; "))
}

fn criterion_7() -> Outcome {
    let mut rng = StdRng::seed_from_u64(7);
    let mut pairs = 0;
    let mut definite = 0;
    let mut rewrites = 0;
    let mut by_reason: BTreeMap<String, usize> = BTreeMap::new();
    let mut exhausted_agree = 0;
    for (name, pg) in common::ambient() {
        let mut pool: Vec<Expr> = Vec::new();
        for _ in 0..14 {
            let Some(e) = common::random_expr(&mut rng, &pg, 6) else { continue };
            let d = common::random_derivation(&mut rng, &pg, &e, 12, 4);
            let before = freecat::count_vector(&pg, &e).map_err(|e| e.to_string())?;
            let mut cur = e.clone();
            for s in &d.steps {
                let at = freecat::count_vector(&pg, &s.result).map_err(|e| e.to_string())?;
                ensure(at == before, format!("{name}: count vector changed by axiom {}", s.axiom))?;
                cur = s.result.clone();
                rewrites += 1;
            }
            pool.push(e.clone());
            pool.push(cur);
        }
        for i in 0..pool.len() {
            for j in [i + 1, i + 2, i + 3] {
                let Some(f) = pool.get(j) else { continue };
                let e = &pool[i];
                let bound = e.size().max(f.size()) + 2;
                let o = oracle_equal_with(&pg, e, f, bound, 20_000).map_err(|e| e.to_string())?;
                let v = arrows_equal(&pg, e, f).map_err(|e| e.to_string())?;
                pairs += 1;
                *by_reason.entry(format!("{:?}", o.reason)).or_default() += 1;
                if o.reason == OracleReason::ClosureExhausted && v != Verdict::Equal {
                    exhausted_agree += 1;
                }
                if matches!(o.reason, OracleReason::Reached | OracleReason::Invariant) {
                    definite += 1;
                    ensure(
                        v == o.verdict,
                        format!(
                            "{name}: `{}` vs `{}`: oracle {:?}, engine {v}",
                            e.display(&pg),
                            f.display(&pg),
                            o.verdict
                        ),
                    )?;
                }
            }
        }
    }
    ensure(pairs >= 200 && rewrites >= 500, format!("only {pairs} pairs and {rewrites} rewrites"))?;
    Ok(format!(
        "{pairs} pairs ({definite} definite, {by_reason:?}, engine not equal on {exhausted_agree} exhausted), {rewrites} rewrites"
    ))
}

fn criterion_8() -> Outcome {
    let mut rng = StdRng::seed_from_u64(8);
    let mut pairs = 0;
    let ambient: Vec<(&str, Arc<Polygraph>)> =
        common::ambient().into_iter().filter(|(_, pg)| classify(pg).source_positive).collect();
    ensure(ambient.len() >= 4, "too few source-positive ambient polygraphs")?;
    'outer: for _round in 0..40 {
        for (name, pg) in &ambient {
            let Some(e) = common::random_expr(&mut rng, pg, 5) else { continue };
            let d = common::random_derivation(&mut rng, pg, &e, 6, 3);
            check_derivation(pg, &d).map_err(|err| format!("{name}: {err}"))?;
            let f = d.end();
            let la = eval(pg, &e).map_err(|err| format!("{name}: {err}"))?;
            let lb = eval(pg, f).map_err(|err| format!("{name}: {err}"))?;
            let m = labeled_isomorphisms(&la, &lb).map_err(|err| err.to_string())?;
            ensure(
                m.found.len() == 1 && m.unresolved.is_empty(),
                format!("{name}: `{}` and `{}`: {} labeled isomorphisms", e.display(pg), f.display(pg), m.found.len()),
            )?;
            pairs += 1;
            if pairs >= 120 {
                break 'outer;
            }
        }
    }
    ensure(pairs >= 100, format!("only {pairs} pairs"))?;
    Ok(format!("{pairs} pairs, each with exactly one labeled isomorphism"))
}

fn main() {
    let criteria: [(fn() -> Outcome, Duration); 8] = [
        (criterion_1, Duration::from_secs(5)),
        (criterion_2, Duration::from_secs(60)),
        (criterion_3, Duration::from_secs(5)),
        (criterion_4, Duration::from_secs(600)),
        (criterion_5, Duration::from_secs(1)),
        (criterion_6, Duration::MAX),
        (criterion_7, Duration::MAX),
        (criterion_8, Duration::MAX),
    ];
    let only: Option<usize> = std::env::var("ACCEPTANCE_ONLY").ok().and_then(|s| s.parse().ok());
    let mut failed = 0;
    for (i, (run, limit)) in criteria.into_iter().enumerate() {
        let n = i + 1;
        if only.is_some_and(|o| o != n) {
            continue;
        }
        let t = Instant::now();
        let r = std::panic::catch_unwind(run).unwrap_or_else(|_| Err("panicked".into()));
        let el = t.elapsed();
        let r = match r {
            Ok(msg) if el > limit => Err(format!("{msg}; took {el:.2?}, limit {limit:.0?}")),
            other => other,
        };
        match r {
            Ok(msg) => println!("criterion {n}: PASS ({el:.2?}) {msg}"),
            Err(msg) => {
                failed += 1;
                println!("criterion {n}: FAIL ({el:.2?}) {msg}");
            }
        }
    }
    if failed > 0 {
        std::process::exit(1);
    }
}
