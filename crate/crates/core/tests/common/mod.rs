#![allow(dead_code)]

use std::sync::Arc;

use polyplex::corpus;
use polyplex::freecat::{self, oracle::single_rewrites, Derivation};
use polyplex::{CellId, Expr, Polygraph};
use rand::rngs::StdRng;
use rand::seq::SliceRandom;
use rand::Rng;

/// Ambient polygraphs of dimension at most 3 used for random testing.
pub fn ambient() -> Vec<(&'static str, Arc<Polygraph>)> {
    vec![
        ("p3", corpus::path(3).pg),
        ("a22", corpus::plex_a(2, 2).pg),
        ("d1", corpus::by_name("d1").unwrap().pg),
        ("u", corpus::u_plex().pg),
        ("iso-pair", corpus::iso_pair().0.pg),
        ("forest", corpus::forest().0.pg),
        ("eh", corpus::eckmann_hilton().pg),
    ]
}

fn well_formed(pg: &Polygraph, e: &Expr) -> bool {
    freecat::well_formed(pg, e).is_ok()
}

/// A random well-formed expression without 0-cell leaves, built by
/// composing generators onto a growing term; at most `max_gens` leaves.
pub fn random_expr(rng: &mut StdRng, pg: &Polygraph, max_gens: usize) -> Option<Expr> {
    let gens: Vec<CellId> = pg.ids().filter(|&c| (1..=3).contains(&pg.dim(c))).collect();
    let first = *gens.choose(rng)?;
    let mut cur = Expr::gen(first);
    let want = rng.gen_range(1..=max_gens);
    let mut tries = 0;
    while cur.generators().len() < want && tries < 60 {
        tries += 1;
        let room = want - cur.generators().len();
        let piece = if room >= 2 && rng.gen_bool(0.3) {
            let (a, b) = (*gens.choose(rng).unwrap(), *gens.choose(rng).unwrap());
            let k = rng.gen_range(0..3);
            let e = Expr::comp(k, Expr::gen(a), Expr::gen(b));
            if !well_formed(pg, &e) {
                continue;
            }
            e
        } else {
            Expr::gen(*gens.choose(rng).unwrap())
        };
        let k = rng.gen_range(0..3);
        let cand =
            if rng.gen_bool(0.5) { Expr::comp(k, cur.clone(), piece) } else { Expr::comp(k, piece, cur.clone()) };
        if well_formed(pg, &cand) {
            cur = cand;
        }
    }
    Some(cur)
}

/// A random chain of single-axiom rewrites starting at `e`, checked step
/// by step by the caller if needed.
pub fn random_derivation(rng: &mut StdRng, pg: &Polygraph, e: &Expr, steps: usize, slack: usize) -> Derivation {
    let mut d = Derivation::new(e.clone());
    let bound = e.size() + slack;
    for _ in 0..steps {
        let Ok(rs) = single_rewrites(pg, d.end(), bound) else { break };
        let Some((axiom, pos, next)) = rs.choose(rng).cloned() else { break };
        d.push(axiom, pos, next);
    }
    d
}
