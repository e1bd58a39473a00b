//! Bounded enumeration of plexes and polyplexes of a class, good-class
//! certification by automorphism triviality, and the named demonstrations.

use std::collections::HashMap;
use std::fmt;
use std::str::FromStr;

use serde::Serialize;

use crate::corpus;
use crate::expr::Expr;
use crate::freecat::derivation::{AXIOM_ASSOC, AXIOM_EXCHANGE, AXIOM_UNIT};
use crate::freecat::{self, check_derivation, Derivation, Sign, Verdict};
use crate::iso::find_isomorphisms;
use crate::polygraph::Polygraph;
use crate::polyplex::{
    automorphism_group, compose, eval, make_plex, polyplexes_isomorphic, AutGroup, LabeledDiagram, Polyplex,
    PolyplexError,
};
use crate::text::parse_expr;
use crate::validate::{classify, ClassFlags};

#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum ClassKind {
    All,
    Positive,
    SourcePositive,
    TargetPositive,
    ManyToOne,
    Globular,
}

impl ClassKind {
    pub const ALL: [ClassKind; 6] = [
        ClassKind::All,
        ClassKind::Positive,
        ClassKind::SourcePositive,
        ClassKind::TargetPositive,
        ClassKind::ManyToOne,
        ClassKind::Globular,
    ];

    pub fn name(self) -> &'static str {
        match self {
            ClassKind::All => "all",
            ClassKind::Positive => "positive",
            ClassKind::SourcePositive => "source-positive",
            ClassKind::TargetPositive => "target-positive",
            ClassKind::ManyToOne => "many-to-one",
            ClassKind::Globular => "globular",
        }
    }

    pub fn admits(self, f: &ClassFlags) -> bool {
        match self {
            ClassKind::All => true,
            ClassKind::Positive => f.positive,
            ClassKind::SourcePositive => f.source_positive,
            ClassKind::TargetPositive => f.target_positive,
            ClassKind::ManyToOne => f.many_to_one,
            ClassKind::Globular => f.globular,
        }
    }
}

/// A built-in class of polygraphs, optionally intersected with a dimension
/// bound.
#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct ClassSpec {
    pub kind: ClassKind,
    pub max_dim: Option<usize>,
}

impl ClassSpec {
    pub fn new(kind: ClassKind) -> ClassSpec {
        ClassSpec { kind, max_dim: None }
    }

    pub fn contains(&self, pg: &Polygraph) -> bool {
        self.max_dim.is_none_or(|d| pg.max_dim().unwrap_or(0) <= d) && self.kind.admits(&classify(pg))
    }
}

impl fmt::Display for ClassSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.kind.name())?;
        if let Some(d) = self.max_dim {
            write!(f, "<={d}")?;
        }
        Ok(())
    }
}

impl FromStr for ClassSpec {
    type Err = String;

    /// `name` or `name<=d`, with names as printed by [`ClassKind::name`]
    /// (underscores are accepted in place of dashes).
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let (name, dim) = match s.split_once("<=") {
            Some((n, d)) => (n, Some(d.trim().parse::<usize>().map_err(|e| format!("bad dimension bound: {e}"))?)),
            None => (s, None),
        };
        let name = name.trim().replace('_', "-");
        let kind =
            ClassKind::ALL.into_iter().find(|k| k.name() == name).ok_or_else(|| format!("unknown class `{name}`"))?;
        Ok(ClassSpec { kind, max_dim: dim })
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct EnumerationBudget {
    pub max_dim: usize,
    pub max_cells: usize,
    /// Bound on cells of the top dimension.
    pub max_top_cells: usize,
    /// Bound on the depth of universal expressions of composites.
    pub max_expression_depth: usize,
    /// Bound on the number of codimension-one cells in the source plus
    /// target of a new plex.
    pub max_boundary_length: Option<usize>,
    /// Also generate plexes of dimension 3 and up whose source and target
    /// are both identities.
    pub unital_above_dim2: bool,
}

impl EnumerationBudget {
    pub fn new(max_dim: usize, max_cells: usize) -> EnumerationBudget {
        EnumerationBudget {
            max_dim,
            max_cells,
            max_top_cells: max_cells,
            max_expression_depth: 2 * max_cells,
            max_boundary_length: None,
            unital_above_dim2: false,
        }
    }

    fn admits(&self, p: &Polyplex) -> bool {
        let pg = p.pg();
        pg.len() <= self.max_cells
            && pg.cells_of_dim(p.dim()).len() <= self.max_top_cells
            && p.universal().depth() <= self.max_expression_depth
    }
}

/// Result of a bounded enumeration.
#[derive(Clone, Debug, Default)]
pub struct Enumeration {
    /// Plexes in generation order, dimension by dimension.
    pub plexes: Vec<Polyplex>,
    /// All polyplexes (plexes included) in generation order.
    pub polyplexes: Vec<Polyplex>,
    /// Candidates whose duplicate check was inconclusive.
    pub quarantined: Vec<Polyplex>,
}

impl Enumeration {
    pub fn counts_by_dim(&self) -> Vec<usize> {
        let mut out = Vec::new();
        for p in &self.polyplexes {
            if out.len() <= p.dim() {
                out.resize(p.dim() + 1, 0);
            }
            out[p.dim()] += 1;
        }
        out
    }
}

type Key = (usize, Vec<usize>);

fn key(p: &Polyplex) -> Key {
    (p.dim(), p.pg().counts_by_dim())
}

struct Enumerator<'a> {
    class: &'a ClassSpec,
    budget: &'a EnumerationBudget,
    out: Enumeration,
    buckets: HashMap<Key, Vec<usize>>,
}

impl Enumerator<'_> {
    /// Adds `p` unless it is outside the class or budget or duplicates a
    /// known polyplex. Returns its index when added.
    fn offer(&mut self, p: Polyplex) -> Option<usize> {
        if !self.budget.admits(&p) || !self.class.contains(p.pg()) {
            return None;
        }
        let k = key(&p);
        for &i in self.buckets.get(&k).into_iter().flatten() {
            match polyplexes_isomorphic(&self.out.polyplexes[i], &p) {
                Ok(Some(_)) => return None,
                Ok(None) => {}
                Err(_) => {
                    self.out.quarantined.push(p);
                    return None;
                }
            }
        }
        let i = self.out.polyplexes.len();
        self.buckets.entry(k).or_default().push(i);
        self.out.polyplexes.push(p);
        Some(i)
    }

    fn sorted_below(&self, d: usize) -> Vec<usize> {
        let mut idx: Vec<usize> =
            (0..self.out.polyplexes.len()).filter(|&i| self.out.polyplexes[i].dim() < d).collect();
        let texts: HashMap<usize, String> =
            idx.iter().map(|&i| (i, self.out.polyplexes[i].canonical().0.to_text())).collect();
        idx.sort_by(|a, b| {
            let (pa, pb) = (&self.out.polyplexes[*a], &self.out.polyplexes[*b]);
            (pa.dim(), pa.pg().len(), &texts[a]).cmp(&(pb.dim(), pb.pg().len(), &texts[b]))
        });
        idx
    }

    fn plexes_of_dim(&mut self, d: usize) -> Vec<usize> {
        let lower = self.sorted_below(d);
        let mut added = Vec::new();
        let name = ["a", "f", "A", "U", "W"].get(d).copied().unwrap_or("c");
        for &i in &lower {
            for &j in &lower {
                let (s, t) = (&self.out.polyplexes[i], &self.out.polyplexes[j]);
                if d >= 3 && !self.budget.unital_above_dim2 && s.dim() + 1 < d && t.dim() + 1 < d {
                    continue;
                }
                if let Some(l) = self.budget.max_boundary_length {
                    let len = s.pg().cells_of_dim(d - 1).len() + t.pg().cells_of_dim(d - 1).len();
                    if len > l {
                        continue;
                    }
                }
                if s.pg().len() + t.pg().len() + 1 > self.budget.max_cells + self.shared_lower_bound(s, d) {
                    continue;
                }
                let Ok(p) = make_plex(s, t, name, d) else { continue };
                if let Some(k) = self.offer(p) {
                    added.push(k);
                }
            }
        }
        self.out.plexes.extend(added.iter().map(|&k| self.out.polyplexes[k].clone()));
        added
    }

    /// Cells of `s` that may be glued away when it is used as a side of a
    /// `d`-plex: those of its `(d - 2)`-boundaries.
    fn shared_lower_bound(&self, s: &Polyplex, d: usize) -> usize {
        if d < 2 {
            return 0;
        }
        [Sign::Minus, Sign::Plus]
            .into_iter()
            .map(|sg| s.boundary(d - 2, sg).map_or(s.pg().len(), |b| b.plex.pg().len()))
            .sum()
    }

    fn try_compose(&mut self, a: usize, k: usize, b: usize, work: &mut Vec<usize>) {
        let (p, q) = (&self.out.polyplexes[a], &self.out.polyplexes[b]);
        let Ok(bp) = p.boundary(k, Sign::Plus) else { return };
        if p.pg().len() + q.pg().len() > self.budget.max_cells + bp.plex.pg().len() {
            return;
        }
        if let Ok(c) = compose(p, k, q) {
            if let Some(i) = self.offer(c) {
                work.push(i);
            }
        }
    }

    /// Closes under composition, producing composites of dimension `d`.
    fn close(&mut self, d: usize, seeds: Vec<usize>) {
        let mut work = seeds;
        let mut cursor = 0;
        while cursor < work.len() {
            let n = work[cursor];
            cursor += 1;
            let mut i = 0;
            while i < self.out.polyplexes.len() {
                let m = i;
                i += 1;
                let (dn, dm) = (self.out.polyplexes[n].dim(), self.out.polyplexes[m].dim());
                if dn.max(dm) != d {
                    continue;
                }
                for k in 0..dn.min(dm) {
                    self.try_compose(n, k, m, &mut work);
                    if m != n {
                        self.try_compose(m, k, n, &mut work);
                    }
                }
            }
        }
    }
}

/// Plexes and polyplexes of `class` within `budget`, deduplicated up to
/// polyplex isomorphism, in a deterministic order.
pub fn enumerate(class: &ClassSpec, budget: &EnumerationBudget) -> Enumeration {
    enumerate_inner(class, budget, true)
}

fn enumerate_inner(class: &ClassSpec, budget: &EnumerationBudget, close_top: bool) -> Enumeration {
    let mut en = Enumerator { class, budget, out: Enumeration::default(), buckets: HashMap::new() };
    let max_dim = budget.max_dim.min(class.max_dim.unwrap_or(usize::MAX));
    if let Some(i) = en.offer(Polyplex::point("a")) {
        en.out.plexes.push(en.out.polyplexes[i].clone());
    }
    for d in 1..=max_dim {
        let seeds = en.plexes_of_dim(d);
        if close_top || d < max_dim {
            en.close(d, seeds);
        }
    }
    en.out
}

/// Plexes only; composites of the top dimension are not generated.
pub fn enumerate_plexes(class: &ClassSpec, budget: &EnumerationBudget) -> Vec<Polyplex> {
    enumerate_inner(class, budget, false).plexes
}

pub fn enumerate_polyplexes(class: &ClassSpec, budget: &EnumerationBudget) -> Vec<Polyplex> {
    enumerate(class, budget).polyplexes
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum CertVerdict {
    CertifiedGoodUpToBudget,
    Refuted,
    Inconclusive,
}

impl fmt::Display for CertVerdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            CertVerdict::CertifiedGoodUpToBudget => "certified-good-up-to-budget",
            CertVerdict::Refuted => "refuted",
            CertVerdict::Inconclusive => "inconclusive",
        })
    }
}

/// A polyplex with a non-identity automorphism fixing its universal arrow.
#[derive(Clone, Debug, Serialize)]
pub struct Witness {
    /// Canonical serialization of the polyplex.
    pub polyplex: String,
    /// Cells moved by the automorphism, as (cell, image) names.
    pub moved: Vec<(String, String)>,
    pub group_order: usize,
    #[serde(skip)]
    pub plex: Polyplex,
}

#[derive(Clone, Debug, Default, Serialize)]
pub struct ConditionCReport {
    pub checked: usize,
    pub failures: Vec<String>,
}

#[derive(Clone, Debug, Serialize)]
pub struct CertReport {
    pub class: String,
    pub budget: EnumerationBudget,
    pub plexes_by_dim: Vec<usize>,
    pub polyplexes_by_dim: Vec<usize>,
    pub verdict: CertVerdict,
    pub witnesses: Vec<Witness>,
    /// Duplicate checks that were inconclusive.
    pub quarantined: Vec<String>,
    /// Polyplexes with automorphism candidates of unknown status.
    pub unresolved: Vec<String>,
    pub condition_c: ConditionCReport,
}

fn by_dim(ps: &[Polyplex]) -> Vec<usize> {
    let mut out = Vec::new();
    for p in ps {
        if out.len() <= p.dim() {
            out.resize(p.dim() + 1, 0);
        }
        out[p.dim()] += 1;
    }
    out
}

fn witness(p: &Polyplex, g: &AutGroup) -> Option<Witness> {
    let w = g.elements.iter().find(|m| !m.is_identity())?;
    let pg = p.pg();
    let moved = pg
        .ids()
        .filter(|&c| w.apply(c) != c)
        .map(|c| (pg.name(c).to_string(), pg.name(w.apply(c)).to_string()))
        .collect();
    Some(Witness { polyplex: p.canonical().0.to_text(), moved, group_order: g.order(), plex: p.clone() })
}

/// Number of composable triples checked for associativity of composition.
const CONDITION_C_SAMPLE: usize = 200;

/// Checks that composing three polyplexes in either bracketing gives
/// isomorphic polyplexes, on a bounded sample of composable triples.
fn condition_c(ps: &[Polyplex]) -> ConditionCReport {
    let mut rep = ConditionCReport::default();
    'outer: for p in ps {
        for q in ps {
            for k in 0..p.dim().min(q.dim()) {
                let Ok(pq) = compose(p, k, q) else { continue };
                for r in ps {
                    if k >= r.dim() {
                        continue;
                    }
                    let Ok(left) = compose(&pq, k, r) else { continue };
                    let right = compose(q, k, r).and_then(|qr| compose(p, k, &qr));
                    rep.checked += 1;
                    match right.and_then(|right| polyplexes_isomorphic(&left, &right)) {
                        Ok(Some(_)) => {}
                        other => rep.failures.push(format!(
                            "({} *{k} {}) *{k} {}: {:?}",
                            p.universal().display(p.pg()),
                            q.universal().display(q.pg()),
                            r.universal().display(r.pg()),
                            other.map(|o| o.is_some())
                        )),
                    }
                    if rep.checked >= CONDITION_C_SAMPLE {
                        break 'outer;
                    }
                }
            }
        }
    }
    rep
}

/// Runs the automorphism search on every enumerated polyplex of the class.
/// A nontrivial automorphism refutes goodness; otherwise the class is
/// certified good up to the budget unless some comparison was inconclusive.
pub fn certify_good(class: &ClassSpec, budget: &EnumerationBudget) -> CertReport {
    let en = enumerate(class, budget);
    let mut witnesses = Vec::new();
    let mut unresolved = Vec::new();
    for p in &en.polyplexes {
        match automorphism_group(p) {
            Ok(g) => {
                if let Some(w) = witness(p, &g) {
                    witnesses.push(w);
                }
                if !g.unresolved.is_empty() {
                    unresolved.push(p.canonical().0.to_text());
                }
            }
            Err(_) => unresolved.push(p.canonical().0.to_text()),
        }
    }
    let quarantined: Vec<String> = en.quarantined.iter().map(|p| p.canonical().0.to_text()).collect();
    let verdict = if !witnesses.is_empty() {
        CertVerdict::Refuted
    } else if !quarantined.is_empty() || !unresolved.is_empty() {
        CertVerdict::Inconclusive
    } else {
        CertVerdict::CertifiedGoodUpToBudget
    };
    let condition_c =
        if verdict == CertVerdict::CertifiedGoodUpToBudget { condition_c(&en.polyplexes) } else { Default::default() };
    CertReport {
        class: class.to_string(),
        budget: budget.clone(),
        plexes_by_dim: by_dim(&en.plexes),
        polyplexes_by_dim: by_dim(&en.polyplexes),
        verdict,
        witnesses,
        quarantined,
        unresolved,
        condition_c,
    }
}

fn ex(pg: &Polygraph, s: &str) -> Expr {
    parse_expr(pg, s).expect("built-in expression parses")
}

/// The two rebracketing chains from `(e *0 x *0 e) *1 (e *0 y *0 e)`,
/// where `e` is the 0-cell standing for its identities.
pub fn eckmann_hilton_chains(pg: &Polygraph) -> (Derivation, Derivation) {
    let start = "((e *0 x) *0 e) *1 ((e *0 y) *0 e)";
    let mut first = Derivation::new(ex(pg, start));
    first.push(AXIOM_ASSOC, vec![1], ex(pg, "((e *0 x) *0 e) *1 (e *0 (y *0 e))"));
    first.push(AXIOM_EXCHANGE, vec![], ex(pg, "((e *0 x) *1 e) *0 (e *1 (y *0 e))"));
    first.push(AXIOM_UNIT, vec![0], ex(pg, "(e *0 x) *0 (e *1 (y *0 e))"));
    first.push(AXIOM_UNIT, vec![1], ex(pg, "(e *0 x) *0 (y *0 e)"));
    first.push(AXIOM_ASSOC, vec![], ex(pg, "((e *0 x) *0 y) *0 e"));
    let mut second = Derivation::new(ex(pg, start));
    second.push(AXIOM_ASSOC, vec![0], ex(pg, "(e *0 (x *0 e)) *1 ((e *0 y) *0 e)"));
    second.push(AXIOM_EXCHANGE, vec![], ex(pg, "(e *1 (e *0 y)) *0 ((x *0 e) *1 e)"));
    second.push(AXIOM_UNIT, vec![0], ex(pg, "(e *0 y) *0 ((x *0 e) *1 e)"));
    second.push(AXIOM_UNIT, vec![1], ex(pg, "(e *0 y) *0 (x *0 e)"));
    second.push(AXIOM_ASSOC, vec![], ex(pg, "((e *0 y) *0 x) *0 e"));
    (first, second)
}

#[derive(Debug, thiserror::Error)]
pub enum DemoError {
    #[error("derivation check failed: {0}")]
    Derivation(#[from] freecat::StepError),
    #[error(transparent)]
    Polyplex(#[from] PolyplexError),
}

/// A checked derivation of `e *0 x *0 y *0 e = e *0 y *0 x *0 e` and the
/// automorphism group of the polyplex `x *1 y`.
pub fn eckmann_hilton_demo() -> Result<(Derivation, AutGroup), DemoError> {
    let eh = corpus::eckmann_hilton();
    let (first, second) = eckmann_hilton_chains(&eh.pg);
    check_derivation(&eh.pg, &first)?;
    check_derivation(&eh.pg, &second)?;
    let mut d = first.reversed();
    d.append(second);
    check_derivation(&eh.pg, &d)?;
    let ld = eval(&eh.pg, &eh.expr)?;
    Ok((d, automorphism_group(&ld.plex)?))
}

#[derive(Clone, Debug, Serialize)]
pub struct Claim {
    pub claim: String,
    pub holds: bool,
    pub detail: String,
}

#[derive(Clone, Debug, Serialize)]
pub struct ExampleReport {
    pub name: String,
    pub claims: Vec<Claim>,
}

impl ExampleReport {
    pub fn all_hold(&self) -> bool {
        self.claims.iter().all(|c| c.holds)
    }

    fn claim(&mut self, claim: &str, holds: bool, detail: impl Into<String>) {
        self.claims.push(Claim { claim: claim.to_string(), holds, detail: detail.into() });
    }
}

pub const EXAMPLE_NAMES: &[&str] =
    &["iso-polyplex-pair", "forest-pair", "boundary-noninjective-U", "2plex-census", "eckmann-hilton"];

pub fn run_named_example(name: &str) -> Result<ExampleReport, String> {
    let mut rep = ExampleReport { name: name.to_string(), claims: Vec::new() };
    let r = match name {
        "iso-polyplex-pair" => iso_pair_report(&mut rep),
        "forest-pair" => forest_report(&mut rep),
        "boundary-noninjective-U" => noninjective_report(&mut rep),
        "2plex-census" => census_report(&mut rep),
        "eckmann-hilton" => eh_report(&mut rep),
        _ => return Err(format!("unknown example `{name}` (known: {})", EXAMPLE_NAMES.join(", "))),
    };
    r.map_err(|e| e.to_string())?;
    Ok(rep)
}

fn iso_pair_report(rep: &mut ExampleReport) -> Result<(), PolyplexError> {
    let (a, b) = corpus::iso_pair();
    let la = eval(&a.pg, &a.expr)?;
    let lb = eval(&b.pg, &b.expr)?;
    let isos = find_isomorphisms(la.plex.pg(), lb.plex.pg(), &[]);
    rep.claim("underlying polygraphs are isomorphic", !isos.is_empty(), format!("{} isomorphisms", isos.len()));
    let pi = polyplexes_isomorphic(&la.plex, &lb.plex)?;
    rep.claim("polyplexes are not isomorphic", pi.is_none(), "");
    let ta = la.plex.boundary(2, Sign::Plus)?;
    let tb = lb.plex.boundary(2, Sign::Plus)?;
    let ti = polyplexes_isomorphic(&ta.plex, &tb.plex)?;
    rep.claim("2-target polyplexes are not isomorphic", ti.is_none(), "");
    let arrow = |ld: &LabeledDiagram, t: &LabeledDiagram| ld.labeling.apply_expr(&t.labeled_arrow());
    let got = [arrow(&la, &ta), arrow(&lb, &tb)];
    let want = [ex(&a.pg, "(alpha' *0 k) *1 (g *0 beta')"), ex(&a.pg, "(f *0 beta') *1 (alpha' *0 h)")];
    let eq = |x: &Expr, y: &Expr| matches!(freecat::arrows_equal(&a.pg, x, y), Ok(Verdict::Equal));
    let matched = (eq(&got[0], &want[0]) && eq(&got[1], &want[1])) || (eq(&got[0], &want[1]) && eq(&got[1], &want[0]));
    rep.claim(
        "2-targets realize the two expected arrows",
        matched,
        format!("{} and {}", got[0].display(&a.pg), got[1].display(&a.pg)),
    );
    Ok(())
}

fn forest_report(rep: &mut ExampleReport) -> Result<(), PolyplexError> {
    let (a, b) = corpus::forest();
    let la = eval(&a.pg, &a.expr)?;
    let lb = eval(&b.pg, &b.expr)?;
    let (ca, cb) = (la.plex.pg().counts_by_dim(), lb.plex.pg().counts_by_dim());
    let iso = !find_isomorphisms(la.plex.pg(), lb.plex.pg(), &[]).is_empty();
    rep.claim("same underlying polygraph", iso && ca == [3, 6, 8, 2], format!("{ca:?} and {cb:?}"));
    let src = ex(&a.pg, corpus::FOREST_SOURCE);
    let tgt = ex(&a.pg, corpus::FOREST_TARGET);
    let mut same = true;
    for e in [&a.expr, &b.expr] {
        for (sign, want) in [(Sign::Minus, &src), (Sign::Plus, &tgt)] {
            let bd = freecat::boundary(&a.pg, e, 2, sign)?;
            same &= matches!(freecat::arrows_equal(&a.pg, &bd, want), Ok(Verdict::Equal));
        }
    }
    rep.claim("same 2-source and 2-target arrows", same, "");
    let v = freecat::arrows_equal(&a.pg, &a.expr, &b.expr)?;
    rep.claim("the two composites are distinct arrows", v == Verdict::Unequal, v.to_string());
    Ok(())
}

fn noninjective_report(rep: &mut ExampleReport) -> Result<(), PolyplexError> {
    let u = corpus::u_plex();
    let p = Polyplex::new(u.pg.clone(), u.expr.clone())?;
    let t = p.boundary(2, Sign::Plus)?;
    let v = u.pg.lookup("v").expect("U has a cell v");
    let pre: Vec<_> = t.labeling.preimage(v);
    let ones = t.plex.pg().cells_of_dim(1);
    let collapsing: Vec<_> = ones.iter().filter(|&&c| t.labeling.preimage(t.labeling.apply(c)).len() > 1).collect();
    rep.claim(
        "2-target boundary map is not injective",
        !t.labeling.is_injective(),
        format!("{} cells map onto {} cells", t.plex.pg().len(), u.pg.len()),
    );
    rep.claim(
        "exactly two 1-cells collapse, both onto v",
        pre.len() == 2 && collapsing.len() == 2,
        pre.iter().map(|&c| t.plex.pg().name(c).to_string()).collect::<Vec<_>>().join(", "),
    );
    Ok(())
}

/// Budget for the 2-plex census with total boundary length at most `l`.
pub fn census_budget(l: usize) -> EnumerationBudget {
    EnumerationBudget { max_boundary_length: Some(l), ..EnumerationBudget::new(2, 2 * l + 1) }
}

/// Matches each enumerated plex against the expected family; returns
/// the unmatched plexes and the expected members not found.
pub fn census_check(plexes: &[Polyplex], l: usize) -> Result<(Vec<String>, Vec<String>), PolyplexError> {
    let mut expected: Vec<(String, Polyplex)> = Vec::new();
    for n in 0..=1 {
        let c = corpus::path(n);
        expected.push((format!("P_{n}"), Polyplex::new(c.pg, c.expr)?));
    }
    for s in 0..=l {
        for n in 0..=s {
            let c = corpus::plex_a(n, s - n);
            expected.push((format!("A_{{{},{}}}", n, s - n), Polyplex::new(c.pg, c.expr)?));
        }
    }
    let mut found = vec![false; expected.len()];
    let mut extra = Vec::new();
    for p in plexes {
        let hit = expected.iter().position(|(_, q)| matches!(polyplexes_isomorphic(p, q), Ok(Some(_))));
        match hit {
            Some(i) if !found[i] => found[i] = true,
            _ => extra.push(p.canonical().0.to_text()),
        }
    }
    let missing = expected.iter().zip(found).filter(|(_, f)| !f).map(|((n, _), _)| n.clone()).collect();
    Ok((extra, missing))
}

fn census_report(rep: &mut ExampleReport) -> Result<(), PolyplexError> {
    let l = 6;
    let plexes = enumerate_plexes(&ClassSpec::new(ClassKind::All), &census_budget(l));
    let (extra, missing) = census_check(&plexes, l)?;
    rep.claim(
        "2-plexes with boundary length <= 6 are P_0, P_1 and A_{n,m} with n+m <= 6",
        extra.is_empty() && missing.is_empty() && plexes.len() == 30,
        format!("{} plexes, {} unexpected, missing {:?}", plexes.len(), extra.len(), missing),
    );
    let removed = plexes.iter().filter(|p| !ClassKind::Positive.admits(&classify(p.pg()))).count();
    rep.claim(
        "the positive filter removes the 13 plexes with n = 0 or m = 0",
        removed == 13,
        format!("{removed} removed"),
    );
    Ok(())
}

fn eh_report(rep: &mut ExampleReport) -> Result<(), PolyplexError> {
    match eckmann_hilton_demo() {
        Ok((d, g)) => {
            rep.claim("derivation chains check", true, format!("{} steps", d.steps.len()));
            rep.claim(
                "automorphism group has order 2",
                g.order() == 2 && g.unresolved.is_empty(),
                g.order().to_string(),
            );
        }
        Err(e) => rep.claim("derivation chains check", false, e.to_string()),
    }
    let eh = corpus::eckmann_hilton();
    rep.claim("the shape is not positive", !classify(&eh.pg).positive, "");
    Ok(())
}
