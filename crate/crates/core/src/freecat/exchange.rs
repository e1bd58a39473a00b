//! Equality of whisker sequences up to exchange moves.

use std::collections::{HashMap, HashSet, VecDeque};
use std::sync::Arc;

use crate::polygraph::CellId;

use super::nf::{
    arrow3_src, arrow3_tgt, expand, fat_index, label_paths, tok_output, volume, Arrow1, Arrow2, Arrow3, Ctx, Label, Nf,
    Sign, Tok,
};
use super::Verdict;

/// Largest token-list orbit explored before giving up.
pub(crate) const ORBIT_CAP: usize = 200_000;
/// Largest number of step sequences explored by the 3-dimensional search.
pub(crate) const STEP_SEARCH_CAP: usize = 100_000;

/// Ways of exchanging two consecutive tokens `a` then `b` whose cells do
/// not overlap. Each result is the new pair in order.
pub(crate) fn swaps(ctx: Ctx<'_>, a: &Tok, b: &Tok) -> Vec<(Tok, Tok)> {
    let (sa, ta) = label_paths(ctx, a.label);
    let (sb, tb) = label_paths(ctx, b.label);
    let mid: Vec<CellId> = [a.left.as_slice(), ta, a.right.as_slice()].concat();
    let (ra0, ra1) = (a.left.len(), a.left.len() + ta.len());
    let (rb0, rb1) = (b.left.len(), b.left.len() + sb.len());
    let mut out = Vec::new();
    if rb0 >= ra1 {
        let m = &mid[ra1..rb0];
        let b2 = Tok { left: [a.left.as_slice(), sa, m].concat(), label: b.label, right: b.right.clone() };
        let a2 = Tok { left: a.left.clone(), label: a.label, right: [m, tb, b.right.as_slice()].concat() };
        out.push((b2, a2));
    }
    if rb1 <= ra0 {
        let m = &mid[rb1..ra0];
        let b2 = Tok { left: b.left.clone(), label: b.label, right: [m, sa, a.right.as_slice()].concat() };
        let a2 = Tok { left: [b.left.as_slice(), tb, m].concat(), label: a.label, right: a.right.clone() };
        if !out.contains(&(b2.clone(), a2.clone())) {
            out.push((b2, a2));
        }
    }
    out
}

fn neighbours(ctx: Ctx<'_>, ws: &[Tok]) -> Vec<Vec<Tok>> {
    let mut out = Vec::new();
    for i in 0..ws.len().saturating_sub(1) {
        for (b, a) in swaps(ctx, &ws[i], &ws[i + 1]) {
            let mut v = ws.to_vec();
            v[i] = b;
            v[i + 1] = a;
            out.push(v);
        }
    }
    out
}

/// All token lists reachable by exchange moves, sorted; `None` when the
/// orbit exceeds [`ORBIT_CAP`].
pub(crate) fn orbit(ctx: Ctx<'_>, ws: &[Tok]) -> Option<Arc<Vec<Vec<Tok>>>> {
    if let Some(cache) = ctx.cache {
        if let Some(o) = cache.lock().unwrap().orbits.get(ws) {
            return Some(o.clone());
        }
    }
    let mut seen: HashSet<Vec<Tok>> = HashSet::new();
    let mut queue = VecDeque::new();
    seen.insert(ws.to_vec());
    queue.push_back(ws.to_vec());
    while let Some(cur) = queue.pop_front() {
        for n in neighbours(ctx, &cur) {
            if seen.insert(n.clone()) {
                if seen.len() > ORBIT_CAP {
                    return None;
                }
                queue.push_back(n);
            }
        }
    }
    let mut all: Vec<Vec<Tok>> = seen.into_iter().collect();
    all.sort();
    let all = Arc::new(all);
    if let Some(cache) = ctx.cache {
        let mut guard = cache.lock().unwrap();
        if all.len() <= 64 {
            for m in all.iter() {
                guard.orbits.insert(m.clone(), all.clone());
            }
        } else {
            guard.orbits.insert(ws.to_vec(), all.clone());
        }
    }
    Some(all)
}

pub(crate) fn canonical(ctx: Ctx<'_>, ws: &[Tok]) -> Option<Vec<Tok>> {
    if ws.len() <= 1 {
        return Some(ws.to_vec());
    }
    orbit(ctx, ws).map(|o| o[0].clone())
}

fn label_multiset(ws: &[Tok]) -> Vec<Label> {
    let mut v: Vec<Label> = ws.iter().map(|t| t.label).collect();
    v.sort();
    v
}

pub(crate) fn eq_tokens(ctx: Ctx<'_>, a: &[Tok], b: &[Tok]) -> Verdict {
    if a == b {
        return Verdict::Equal;
    }
    if a.len() != b.len() || label_multiset(a) != label_multiset(b) {
        return Verdict::Unequal;
    }
    match orbit(ctx, a) {
        None => Verdict::Unknown,
        Some(o) => {
            if o.binary_search_by(|x| x.as_slice().cmp(b)).is_ok() {
                Verdict::Equal
            } else {
                Verdict::Unequal
            }
        }
    }
}

pub(crate) fn eq2(ctx: Ctx<'_>, a: &Arrow2, b: &Arrow2) -> Verdict {
    if a.src != b.src {
        return Verdict::Unequal;
    }
    eq_tokens(ctx, &a.ws, &b.ws)
}

/// Outcome of the step-exchange search for 3-arrows.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub(crate) enum StepSearch {
    Found,
    Exhausted,
    Capped,
}

/// Equality of 3-arrows: a definite answer from boundary or invariant
/// checks, or the result of the step-exchange search.
pub(crate) fn eq3(ctx: Ctx<'_>, a: &Arrow3, b: &Arrow3) -> Result<Verdict, StepSearch> {
    if a.base != b.base || a.steps.len() != b.steps.len() {
        return Ok(Verdict::Unequal);
    }
    let fats = |x: &Arrow3| {
        let mut v: Vec<Label> = x.steps.iter().map(|s| s[fat_index(s)].label).collect();
        v.sort();
        v
    };
    if fats(a) != fats(b) {
        return Ok(Verdict::Unequal);
    }
    for (x, y) in [(arrow3_src(ctx, a), arrow3_src(ctx, b)), (arrow3_tgt(ctx, a), arrow3_tgt(ctx, b))] {
        match eq2(ctx, &x, &y) {
            Verdict::Equal => {}
            v => return Ok(v),
        }
    }
    let canon_all = |x: &Arrow3| -> Option<Vec<Vec<Tok>>> { x.steps.iter().map(|s| canonical(ctx, s)).collect() };
    let (Some(start), Some(goal)) = (canon_all(a), canon_all(b)) else {
        return Ok(Verdict::Unknown);
    };
    match step_search(ctx, &a.base, start, &goal) {
        StepSearch::Found => Ok(Verdict::Equal),
        other => Err(other),
    }
}

fn step_search(ctx: Ctx<'_>, base: &Arrow1, start: Vec<Vec<Tok>>, goal: &[Vec<Tok>]) -> StepSearch {
    if start == goal {
        return StepSearch::Found;
    }
    let mut seen: HashSet<Vec<Vec<Tok>>> = HashSet::new();
    let mut queue = VecDeque::new();
    let mut memo: HashMap<(Vec<Tok>, Vec<Tok>), Vec<(Vec<Tok>, Vec<Tok>)>> = HashMap::new();
    seen.insert(start.clone());
    queue.push_back(start);
    let mut capped = false;
    while let Some(cur) = queue.pop_front() {
        for i in 0..cur.len().saturating_sub(1) {
            let key = (cur[i].clone(), cur[i + 1].clone());
            let pairs = match memo.get(&key) {
                Some(p) => p.clone(),
                None => {
                    let (p, c) = step_swaps(ctx, base, &cur[i], &cur[i + 1]);
                    capped |= c;
                    memo.insert(key, p.clone());
                    p
                }
            };
            for (x, y) in pairs {
                let mut next = cur.clone();
                next[i] = x;
                next[i + 1] = y;
                if next == goal {
                    return StepSearch::Found;
                }
                if seen.insert(next.clone()) {
                    if seen.len() > STEP_SEARCH_CAP {
                        return StepSearch::Capped;
                    }
                    queue.push_back(next);
                }
            }
        }
    }
    if capped {
        StepSearch::Capped
    } else {
        StepSearch::Exhausted
    }
}

/// Paths before each token and after the last one.
fn paths_between(ctx: Ctx<'_>, start: &[CellId], ws: &[Tok]) -> Vec<Vec<CellId>> {
    let mut out = vec![start.to_vec()];
    for t in ws {
        out.push(tok_output(ctx, t));
    }
    out
}

/// Exchanges of two consecutive steps whose 3-cells act on disjoint parts
/// of the intermediate 2-arrow. Results are canonical step pairs; the flag
/// reports an orbit that was too large to explore.
fn step_swaps(ctx: Ctx<'_>, base: &Arrow1, si: &[Tok], sj: &[Tok]) -> (Vec<(Vec<Tok>, Vec<Tok>)>, bool) {
    let mut out = Vec::new();
    let Some(orbit_i) = orbit(ctx, si) else {
        return (out, true);
    };
    let mut capped = false;
    let fj = &sj[fat_index(sj)];
    let gamma2 = fj.label.cell();
    let (src2, _) = volume(ctx, gamma2);
    let src2 = src2.clone();
    let s1 = src2.src.cells.clone();
    let n2 = src2.ws.len();
    for l in orbit_i.iter() {
        let f = fat_index(l);
        let fat = &l[f];
        let tf = expand(ctx, fat, Sign::Plus);
        let sf = expand(ctx, fat, Sign::Minus);
        let lt: Vec<Tok> = [&l[..f], tf.as_slice(), &l[f + 1..]].concat();
        let paths = paths_between(ctx, &base.cells, &lt);
        let z0 = f + tf.len();
        let ranges = (0..=f)
            .filter(|&j| j + n2 <= f)
            .map(|j| (j, true))
            .chain((z0..=lt.len()).filter(|&j| j + n2 <= lt.len()).map(|j| (j, false)));
        for (j, before) in ranges {
            let p = &paths[j];
            if s1.len() > p.len() {
                continue;
            }
            for o in 0..=p.len() - s1.len() {
                if p[o..o + s1.len()] != s1[..] {
                    continue;
                }
                let (lw, rw) = (&p[..o], &p[o + s1.len()..]);
                let Some(stripped) = lt[j..j + n2]
                    .iter()
                    .map(|t| {
                        let ok = t.left.starts_with(lw) && t.right.ends_with(rw);
                        ok.then(|| Tok {
                            left: t.left[lw.len()..].to_vec(),
                            label: t.label,
                            right: t.right[..t.right.len() - rw.len()].to_vec(),
                        })
                    })
                    .collect::<Option<Vec<Tok>>>()
                else {
                    continue;
                };
                match eq_tokens(ctx, &stripped, &src2.ws) {
                    Verdict::Equal => {}
                    Verdict::Unknown => {
                        capped = true;
                        continue;
                    }
                    Verdict::Unequal => continue,
                }
                let new_fat = Tok { left: lw.to_vec(), label: Label::Three(gamma2), right: rw.to_vec() };
                let cand: Vec<Tok> = [&lt[..j], std::slice::from_ref(&new_fat), &lt[j + n2..]].concat();
                match canonical(ctx, &cand) {
                    Some(c) if c.as_slice() == sj => {}
                    Some(_) => continue,
                    None => {
                        capped = true;
                        continue;
                    }
                }
                let ls: Vec<Tok> = [&l[..f], sf.as_slice(), &l[f + 1..]].concat();
                let (js, jl) = if before { (j, j) } else { (j - tf.len() + sf.len(), j - tf.len() + 1) };
                let first: Vec<Tok> = [&ls[..js], std::slice::from_ref(&new_fat), &ls[js + n2..]].concat();
                let t2 = expand(ctx, &new_fat, Sign::Plus);
                let second: Vec<Tok> = [&l[..jl], t2.as_slice(), &l[jl + n2..]].concat();
                match (canonical(ctx, &first), canonical(ctx, &second)) {
                    (Some(x), Some(y)) => {
                        if !out.contains(&(x.clone(), y.clone())) {
                            out.push((x, y));
                        }
                    }
                    _ => capped = true,
                }
            }
        }
    }
    (out, capped)
}

/// Equality of normal forms without the oracle fallback.
pub(crate) fn nf_equal(ctx: Ctx<'_>, a: &Nf, b: &Nf) -> Verdict {
    match (a, b) {
        (Nf::D0(x), Nf::D0(y)) => Verdict::from_bool(x == y),
        (Nf::D1(x), Nf::D1(y)) => Verdict::from_bool(x == y),
        (Nf::D2(x), Nf::D2(y)) => eq2(ctx, x, y),
        (Nf::D3(x), Nf::D3(y)) => match eq3(ctx, x, y) {
            Ok(v) => v,
            Err(_) => Verdict::Unknown,
        },
        _ => Verdict::Unequal,
    }
}

/// Replaces every token list by the least member of its orbit.
pub(crate) fn canonical_nf(ctx: Ctx<'_>, x: &Nf) -> Nf {
    match x {
        Nf::D2(a) => match canonical(ctx, &a.ws) {
            Some(ws) => Nf::D2(Arrow2 { src: a.src.clone(), ws }),
            None => x.clone(),
        },
        Nf::D3(a) => Nf::D3(Arrow3 {
            base: a.base.clone(),
            steps: a.steps.iter().map(|s| canonical(ctx, s).unwrap_or_else(|| s.clone())).collect(),
        }),
        _ => x.clone(),
    }
}
