use polyplex::analyzer::{
    census_budget, certify_good, eckmann_hilton_demo, enumerate, enumerate_plexes, enumerate_polyplexes,
    run_named_example, CertVerdict, ClassKind, ClassSpec, EnumerationBudget, EXAMPLE_NAMES,
};
use polyplex::corpus;
use polyplex::freecat::{count_vector, Sign};
use polyplex::polyplex::{automorphism_group, eval, polyplexes_isomorphic, Polyplex};
use polyplex::{classify, Verdict};

fn plex(e: corpus::Example) -> Polyplex {
    Polyplex::new(e.pg, e.expr).unwrap()
}

fn iso(p: &Polyplex, q: &Polyplex) -> bool {
    matches!(polyplexes_isomorphic(p, q), Ok(Some(_)))
}

/// Name of the member of `family` isomorphic to `p`.
fn find(family: &[(String, Polyplex)], p: &Polyplex) -> Option<String> {
    family.iter().find(|(_, q)| iso(p, q)).map(|(n, _)| n.clone())
}

fn a_family(max_len: usize, keep: impl Fn(usize, usize) -> bool) -> Vec<(String, Polyplex)> {
    let mut out = Vec::new();
    for s in 0..=max_len {
        for n in 0..=s {
            if keep(n, s - n) {
                out.push((format!("A{n},{}", s - n), plex(corpus::plex_a(n, s - n))));
            }
        }
    }
    out
}

fn names(ps: &[Polyplex], family: &[(String, Polyplex)]) -> Vec<String> {
    let mut v: Vec<String> = ps.iter().map(|p| find(family, p).unwrap_or_else(|| p.to_text())).collect();
    v.sort();
    v
}

#[test]
fn class_spec_parsing() {
    let c: ClassSpec = "source_positive<=3".parse().unwrap();
    assert_eq!((c.kind, c.max_dim), (ClassKind::SourcePositive, Some(3)));
    assert_eq!(c.to_string().parse::<ClassSpec>().unwrap(), c);
    assert!("opetopic".parse::<ClassSpec>().is_err());
}

#[test]
fn one_dimensional_polyplexes_are_paths() {
    let ps = enumerate_polyplexes(&ClassSpec::new(ClassKind::All), &EnumerationBudget::new(1, 9));
    let paths: Vec<(String, Polyplex)> = (0..=4).map(|n| (format!("P{n}"), plex(corpus::path(n)))).collect();
    assert_eq!(names(&ps, &paths), ["P0", "P1", "P2", "P3", "P4"]);
    let plexes = enumerate_plexes(&ClassSpec::new(ClassKind::All), &EnumerationBudget::new(1, 9));
    assert_eq!(names(&plexes, &paths), ["P0", "P1"]);
}

#[test]
fn positive_and_many_to_one_plexes() {
    let two = |kind| -> Vec<Polyplex> {
        enumerate_plexes(&ClassSpec::new(kind), &census_budget(5)).into_iter().filter(|p| p.dim() == 2).collect()
    };
    let mut want: Vec<String> = a_family(5, |n, m| n >= 1 && m >= 1).into_iter().map(|(n, _)| n).collect();
    want.sort();
    assert_eq!(names(&two(ClassKind::Positive), &a_family(5, |_, _| true)), want);
    let mut want: Vec<String> = (0..=4).map(|n| format!("A{n},1")).collect();
    want.sort();
    assert_eq!(names(&two(ClassKind::ManyToOne), &a_family(5, |_, _| true)), want);
    let all = enumerate_plexes(&ClassSpec::new(ClassKind::All), &census_budget(5));
    assert_eq!(all.iter().filter(|p| p.dim() < 2).count(), 2);
}

#[test]
fn enumeration_is_deterministic() {
    let class = ClassSpec::new(ClassKind::SourcePositive);
    let budget = EnumerationBudget::new(3, 6);
    let a: Vec<String> = enumerate(&class, &budget).polyplexes.iter().map(|p| p.canonical().0.to_text()).collect();
    let b: Vec<String> = enumerate(&class, &budget).polyplexes.iter().map(|p| p.canonical().0.to_text()).collect();
    assert_eq!(a, b);
    for (i, x) in a.iter().enumerate() {
        assert!(!a[i + 1..].contains(x), "duplicate {x}");
    }
}

#[test]
fn enumerated_polyplexes_are_pairwise_distinct() {
    let en = enumerate(&ClassSpec::new(ClassKind::Positive), &EnumerationBudget::new(3, 9));
    assert!(en.quarantined.is_empty());
    for (i, p) in en.polyplexes.iter().enumerate() {
        for q in &en.polyplexes[i + 1..] {
            if p.pg().counts_by_dim() == q.pg().counts_by_dim() {
                assert!(!iso(p, q), "{} twice", p.to_text());
            }
        }
    }
}

#[test]
fn small_certifications() {
    let rep = certify_good(&ClassSpec::new(ClassKind::SourcePositive), &EnumerationBudget::new(3, 6));
    assert_eq!(rep.verdict, CertVerdict::CertifiedGoodUpToBudget);
    assert!(rep.quarantined.is_empty() && rep.unresolved.is_empty());
    assert!(rep.condition_c.checked > 0 && rep.condition_c.failures.is_empty());
    let rep = certify_good(&ClassSpec::new(ClassKind::Positive), &EnumerationBudget::new(2, 7));
    assert_eq!(rep.verdict, CertVerdict::CertifiedGoodUpToBudget);
}

#[test]
fn refutation_witnesses_recheck() {
    let rep = certify_good(&ClassSpec::new(ClassKind::All), &EnumerationBudget::new(2, 3));
    assert_eq!(rep.verdict, CertVerdict::Refuted);
    let eh = corpus::eckmann_hilton();
    let ehp = eval(&eh.pg, &eh.expr).unwrap().plex;
    for w in &rep.witnesses {
        let g = automorphism_group(&w.plex).unwrap();
        assert_eq!(g.order(), w.group_order);
        assert!(g.order() > 1 && !w.moved.is_empty());
        assert!(iso(&w.plex, &ehp));
        assert!(!classify(w.plex.pg()).positive);
    }
}

#[test]
fn eckmann_hilton() {
    let (d, g) = eckmann_hilton_demo().unwrap();
    assert_eq!(d.steps.len(), 10);
    assert_eq!(g.order(), 2);
    let eh = corpus::eckmann_hilton();
    let f = classify(&eh.pg);
    assert!(!f.source_positive && !f.target_positive);
    let swapped = polyplex::text::parse_expr(&eh.pg, "y *1 x").unwrap();
    assert_eq!(polyplex::arrows_equal(&eh.pg, &eh.expr, &swapped).unwrap(), Verdict::Equal);
}

#[test]
fn named_examples_hold() {
    for name in EXAMPLE_NAMES {
        let rep = run_named_example(name).unwrap();
        assert!(rep.all_hold(), "{name}: {:?}", rep.claims);
    }
    assert!(run_named_example("nope").is_err());
}

#[test]
fn positive_two_cell_polyplexes_with_short_boundaries() {
    let budget = EnumerationBudget { max_top_cells: 2, ..EnumerationBudget::new(2, 12) };
    let ps = enumerate_polyplexes(&ClassSpec::new(ClassKind::Positive), &budget);
    let len = |p: &Polyplex, sign| {
        count_vector(p.pg(), &p.boundary_arrow(1, sign).unwrap())
            .unwrap()
            .into_iter()
            .filter(|(c, _)| p.pg().dim(*c) == 1)
            .map(|(_, n)| n)
            .sum::<usize>()
    };
    let hits = ps
        .iter()
        .filter(|p| p.dim() == 2 && p.pg().cells_of_dim(2).len() == 2)
        .filter(|p| len(p, Sign::Minus) == 2 && len(p, Sign::Plus) == 2)
        .count();
    // Frozen from the enumeration.
    assert_eq!(hits, 12);
}
